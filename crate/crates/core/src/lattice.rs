//! Model parameters, the finite lattice window, and assembly of the
//! truncated defect Hamiltonian.

use num_complex::Complex64;

use crate::error::Error;
use crate::tol;
use crate::Result;

/// The five model parameters of the defect line.
///
/// `epsilon` is the uniform on-site energy, `gamma` the uniform hopping
/// rate, `alpha` the extra on-site energy at the defect node, `beta` the
/// extra hopping rate on the two bonds touching it, and `j_defect` the
/// defect node index. ħ = 1 throughout; γ sets the energy scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectLineParams {
    pub epsilon: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub j_defect: i64,
}

impl DefectLineParams {
    /// Validate and construct a parameter record.
    ///
    /// γ must be nonzero (γ = 0 disconnects the whole line) and all
    /// entries finite.
    pub fn new(epsilon: f64, gamma: f64, alpha: f64, beta: f64, j_defect: i64) -> Result<Self> {
        for (name, v) in [
            ("epsilon", epsilon),
            ("gamma", gamma),
            ("alpha", alpha),
            ("beta", beta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if gamma == 0.0 {
            return Err(Error::InvalidParameter(
                "gamma = 0 disconnects the uniform line".into(),
            ));
        }
        Ok(Self {
            epsilon,
            gamma,
            alpha,
            beta,
            j_defect,
        })
    }

    /// Continuous-band interval `[ε − 2|γ|, ε + 2|γ|]` of traveling modes.
    pub fn band_interval(&self) -> (f64, f64) {
        let half = 2.0 * self.gamma.abs();
        (self.epsilon - half, self.epsilon + half)
    }

    /// Hopping rate γ + β on the two defect bonds.
    pub fn defect_coupling(&self) -> f64 {
        self.gamma + self.beta
    }

    /// True when |γ + β| is below tolerance and the defect node is
    /// effectively cut off from the line.
    pub fn is_disconnected(&self) -> bool {
        self.defect_coupling().abs() <= tol::DISCONNECT
    }
}

/// Maximal node distance reachable from the initial node (up to negligible
/// amplitude) after evolving for time `t`, plus a safety `buffer`.
///
/// The group velocity through the defect bonds is bounded by 2(|γ| + |β|);
/// amplitudes beyond the cone decay superexponentially, and `buffer` ≥ 40
/// keeps hard-wall leakage below 1e-12 for t ≤ 50.
pub fn light_cone_radius(params: &DefectLineParams, t: f64, buffer: usize) -> usize {
    let cone = 2.0 * (params.gamma.abs() + params.beta.abs()) * t.abs();
    cone.ceil() as usize + buffer
}

/// A symmetric window of 2·radius + 1 nodes centered on `center`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeWindow {
    center: i64,
    radius: usize,
}

impl LatticeWindow {
    pub fn new(center: i64, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::Window("window radius must be positive".into()));
        }
        Ok(Self { center, radius })
    }

    /// Window centered on the walker's initial node, wide enough to hold
    /// the light cone for time `t` plus the defect node with margin.
    pub fn for_evolution(
        params: &DefectLineParams,
        j0: i64,
        t: f64,
        buffer: usize,
    ) -> Result<Self> {
        let cone = light_cone_radius(params, t, buffer);
        let offset = (params.j_defect - j0).unsigned_abs() as usize;
        Self::new(j0, (cone + offset + 2).max(1))
    }

    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_node(&self) -> i64 {
        self.center - self.radius as i64
    }

    pub fn max_node(&self) -> i64 {
        self.center + self.radius as i64
    }

    pub fn contains(&self, j: i64) -> bool {
        j >= self.min_node() && j <= self.max_node()
    }

    /// Array offset of node `j`, if inside the window.
    pub fn offset_of(&self, j: i64) -> Option<usize> {
        self.contains(j).then(|| (j - self.min_node()) as usize)
    }

    /// Node index at array offset `i`.
    pub fn node_at(&self, i: usize) -> i64 {
        self.min_node() + i as i64
    }

    /// All node indices, ascending.
    pub fn nodes(&self) -> impl Iterator<Item = i64> {
        self.min_node()..=self.max_node()
    }
}

/// Real-symmetric truncated Hamiltonian of the defect line in node basis.
///
/// `diag[i]` is the on-site energy of the i-th window node and
/// `offdiag[i]` the coupling between nodes i and i+1; the single
/// off-diagonal serves both triangles. Couplings leaving the window are
/// dropped (hard-wall truncation).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    window: LatticeWindow,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalHamiltonian {
    /// Assemble the truncated Hamiltonian on `window`.
    ///
    /// The window must contain the defect node with at least two nodes of
    /// margin on each side so both defect bonds are interior.
    pub fn build(params: &DefectLineParams, window: &LatticeWindow) -> Result<Self> {
        let jd = params.j_defect;
        if jd - window.min_node() < 2 || window.max_node() - jd < 2 {
            return Err(Error::Window(format!(
                "window [{}, {}] must contain defect node {} with 2 nodes margin",
                window.min_node(),
                window.max_node(),
                jd
            )));
        }
        let n = window.len();
        let mut diag = vec![params.epsilon; n];
        let mut offdiag = vec![-params.gamma; n - 1];
        let d = window.offset_of(jd).expect("defect inside window");
        diag[d] += params.alpha;
        offdiag[d - 1] -= params.beta;
        offdiag[d] -= params.beta;
        Ok(Self {
            window: *window,
            diag,
            offdiag,
        })
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// H ψ for a complex amplitude vector on the window.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.diag.len();
        assert_eq!(psi.len(), n);
        let mut out = vec![Complex64::ZERO; n];
        for i in 0..n {
            let mut acc = self.diag[i] * psi[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * psi[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * psi[i + 1];
            }
            out[i] = acc;
        }
        out
    }

    /// Real expectation value ⟨ψ|H|ψ⟩ for a normalized complex state.
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        self.apply(psi)
            .iter()
            .zip(psi)
            .map(|(h, a)| (a.conj() * h).re)
            .sum()
    }
}

/// Complex amplitudes over a lattice window: |ψ⟩ = Σ_j a_j |j⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    window: LatticeWindow,
    amplitudes: Vec<Complex64>,
}

impl NodeState {
    /// Basis state |j0⟩ on the window.
    pub fn basis(j0: i64, window: &LatticeWindow) -> Result<Self> {
        let Some(off) = window.offset_of(j0) else {
            return Err(Error::Window(format!(
                "initial node {j0} not inside window [{}, {}]",
                window.min_node(),
                window.max_node()
            )));
        };
        let mut amplitudes = vec![Complex64::ZERO; window.len()];
        amplitudes[off] = Complex64::ONE;
        Ok(Self {
            window: *window,
            amplitudes,
        })
    }

    pub fn from_amplitudes(window: &LatticeWindow, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != window.len() {
            return Err(Error::Window(format!(
                "amplitude count {} does not match window size {}",
                amplitudes.len(),
                window.len()
            )));
        }
        Ok(Self {
            window: *window,
            amplitudes,
        })
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, j: i64) -> Option<Complex64> {
        self.window.offset_of(j).map(|i| self.amplitudes[i])
    }

    /// Σ_j |a_j|².
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// (node, amplitude) pairs, ascending node index.
    pub fn iter_nodes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, &a)| (self.window.node_at(i), a))
    }

    /// Nonzero (node, amplitude) pairs; the support of the state.
    pub fn support(&self) -> Vec<(i64, Complex64)> {
        self.iter_nodes()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .collect()
    }
}
