//! Continuous-time quantum walk (CTQW) on an infinite line carrying a
//! single-point position defect and a single-point transition defect.
//!
//! The walk evolves under the tight-binding Hamiltonian
//!
//! ```text
//! H = ε Σ_j |j⟩⟨j| − γ Σ_j (|j+1⟩⟨j| + h.c.)
//!     + α |j_d⟩⟨j_d|
//!     − β (|j_d⟩⟨j_d+1| + |j_d⟩⟨j_d−1| + h.c.)
//! ```
//!
//! so the defect node `j_d` has on-site energy ε + α and couples to its
//! neighbours with rate γ + β. The crate provides two independent
//! time-evolution backends:
//!
//! - [`propagator::evolve_spectral`]: the closed-form eigenbasis
//!   (odd/even traveling waves on the band `[ε − 2|γ|, ε + 2|γ|]` plus
//!   zero, one, or two bound states), with the k-integral discretized by
//!   Gauss–Legendre quadrature;
//! - [`propagator::evolve_oracle`]: exact diagonalization of the
//!   truncated tridiagonal Hamiltonian, used as ground truth.
//!
//! [`observables`] derives probability distributions, spreading widths,
//! and the bound-state projection formulas behind eigen-localization.
//! [`validate`] packages the cross-checks between all of the above into
//! a machine-readable report.

pub mod eigen;
pub mod error;
pub mod lattice;
pub mod observables;
pub mod propagator;
pub mod quadrature;
pub mod spectral;
pub mod tol;
pub mod validate;

pub use error::Error;
pub use lattice::{DefectLineParams, LatticeWindow, NodeState, TridiagonalHamiltonian};
pub use propagator::{PropagatorReport, QuadratureSpec};
pub use spectral::{BoundState, TravelingMode};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
