//! Central numerical tolerances.
//!
//! Every threshold used by the library and its validation suite lives here;
//! none are tuned ad hoc at call sites.

/// |γ + β| at or below this is treated as a disconnected defect node.
pub const DISCONNECT: f64 = 1e-12;

/// Eigenvalue candidates within this distance of the band edges are
/// classified as traveling (measure-zero, numerically indeterminate).
pub const BAND_EDGE: f64 = 1e-12;

/// Acceptance threshold on |f| (or |1/f|) for the bound-state branch test.
/// Exact zeros/poles evaluate to ~1e-15 in f64; 1e-8 leaves wide margin.
pub const BRANCH: f64 = 1e-8;

/// Classification tolerance on ||y| - 1| for the dispersion root.
pub const Y_ON_CIRCLE: f64 = 1e-12;

/// Residual bound for ‖(H − λ_b)ψ_b‖ on a truncation window.
pub const EIGEN_RESIDUAL: f64 = 1e-10;

/// Norm-conservation bound for propagator outputs.
pub const NORM_CONSERVATION: f64 = 1e-10;

/// Hard accuracy gate: evolution refuses to return a state whose norm
/// deviates by more than this (signals window/quadrature misuse).
pub const NORM_ACCURACY: f64 = 1e-6;

/// Max entrywise deviation allowed for the quadrature-resolved identity.
pub const COMPLETENESS: f64 = 1e-8;

/// Agreement bound between the spectral and oracle backends (max |ΔP_j|).
pub const BACKEND_EQUIVALENCE: f64 = 1e-8;

/// Denominator threshold below which the closed-form bound-energy
/// expression is declared degenerate.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-10;

/// Bisection convergence for the fallback bound-energy root finder.
pub const ROOT_BISECTION: f64 = 1e-12;

/// Hard pole guard: |denominator| of f at or below this is reported as a
/// pole rather than divided through.
pub const F_POLE_GUARD: f64 = 1e-300;

/// Nodes beyond the light cone kept by default; keeps hard-wall leakage
/// below ~1e-12 in amplitude for t ≤ 50.
pub const DEFAULT_BUFFER: usize = 40;
