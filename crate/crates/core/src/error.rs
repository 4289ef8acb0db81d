use thiserror::Error;

/// Errors surfaced by model construction, spectral solving, and evolution.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Model parameters violate an invariant (γ = 0, non-finite input, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The lattice window is too small or does not contain a required node.
    #[error("window error: {0}")]
    Window(String),

    /// An argument lies outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// |γ + β| is below tolerance: the defect node is (numerically)
    /// disconnected and the spectral path is unavailable.
    #[error("disconnected defect: |gamma + beta| below tolerance, spectral path unavailable")]
    DisconnectedDefect,

    /// The closed-form bound-energy quadratic has a vanishing denominator;
    /// callers fall back to direct root finding.
    #[error("degenerate denominator in closed-form bound energies")]
    DegenerateDenominator,

    /// An operation requiring bound states was called where none exist.
    #[error("no bound state exists for these parameters")]
    NoBoundState,

    /// A propagator produced a state whose norm drifted beyond tolerance.
    #[error("accuracy error: norm deviation {norm_deviation:e} exceeds tolerance")]
    Accuracy { norm_deviation: f64 },

    /// Iterative eigensolver failed to converge (not expected in practice).
    #[error("eigensolver failed to converge at index {0}")]
    EigenConvergence(usize),
}
