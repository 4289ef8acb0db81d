//! Two independent time-evolution backends and their comparison.
//!
//! The spectral backend applies the eigenbasis resolution of e^{−iHt}:
//! a Gauss–Legendre discretization of the traveling-mode integral over
//! k ∈ (0, π) plus the exact bound-state sum. The oracle backend
//! diagonalizes the truncated tridiagonal Hamiltonian and applies the
//! phases exactly; it covers every parameter value, including a
//! disconnected defect, and serves as ground truth for the closed forms.

use num_complex::Complex64;
use std::time::Instant;

use crate::eigen::{self, Eigendecomposition};
use crate::error::Error;
use crate::lattice::{
    light_cone_radius, DefectLineParams, LatticeWindow, NodeState, TridiagonalHamiltonian,
};
use crate::quadrature::{self, KGrid};
use crate::spectral::{bound_states, odd_amplitude, EvenMode};
use crate::tol;
use crate::Result;

/// Gauss–Legendre discretization of the traveling-mode integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    n_nodes: usize,
}

impl QuadratureSpec {
    pub fn new(n_nodes: usize) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least one node".into(),
            ));
        }
        Ok(Self { n_nodes })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn grid(&self) -> std::sync::Arc<KGrid> {
        quadrature::rule(self.n_nodes)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { n_nodes: 2048 }
    }
}

/// Diagnostics attached to a spectral evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorReport {
    /// |‖ψ(t)‖² − 1|.
    pub norm_deviation: f64,
    /// Total weight Σ_b |⟨ψ^b|ψ(0)⟩|² projected onto bound states.
    pub bound_weight: f64,
    /// Wall-clock seconds spent in the evolution.
    pub runtime: f64,
}

fn check_window(params: &DefectLineParams, t: f64, window: &LatticeWindow) -> Result<()> {
    let needed = light_cone_radius(params, t, tol::DEFAULT_BUFFER);
    if window.radius() < needed {
        return Err(Error::Window(format!(
            "window radius {} below light-cone radius {} for t = {}",
            window.radius(),
            needed,
            t
        )));
    }
    Ok(())
}

/// Evolve `psi0` for time `t` through the eigenbasis resolution of
/// e^{−iHt}, evaluated on `window`.
///
/// Mode overlaps are closed-form sums over the support of `psi0`, so the
/// cost per quadrature node is O(support + window). Accumulation order
/// is fixed (ascending k, odd before even, then bound states ascending
/// λ_b): identical inputs give bit-identical outputs.
pub fn evolve_spectral(
    psi0: &NodeState,
    t: f64,
    params: &DefectLineParams,
    quad: &QuadratureSpec,
    window: &LatticeWindow,
) -> Result<(NodeState, PropagatorReport)> {
    if params.is_disconnected() {
        return Err(Error::DisconnectedDefect);
    }
    check_window(params, t, window)?;
    let start = Instant::now();

    let support = psi0.support();
    let bounds = bound_states(params)?;
    let grid = quad.grid();

    let n = window.len();
    let mut out = vec![Complex64::ZERO; n];
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();

    for (k, weight) in grid.iter() {
        let lambda = params.epsilon - 2.0 * params.gamma * k.cos();
        let phase = Complex64::from_polar(1.0, -lambda * t);

        // odd parity: amplitude (i/sqrt(pi)) sin(k (j - j_d))
        let mut odd_overlap = Complex64::ZERO;
        for &(j, a) in &support {
            odd_overlap += odd_amplitude(k, j, params).conj() * a;
        }
        let odd_coeff = phase * weight * odd_overlap;

        // even parity
        let even = EvenMode::new(k, params)?;
        let mut even_overlap = Complex64::ZERO;
        for &(j, a) in &support {
            even_overlap += even.amplitude(j).conj() * a;
        }
        let even_coeff = phase * weight * even_overlap;

        for (i, j) in window.nodes().enumerate() {
            let odd_amp =
                Complex64::new(0.0, inv_sqrt_pi * (k * (j - params.j_defect) as f64).sin());
            out[i] += odd_coeff * odd_amp + even_coeff * even.amplitude(j);
        }
    }

    let mut bound_weight = 0.0;
    for b in &bounds {
        let mut overlap = Complex64::ZERO;
        for &(j, a) in &support {
            overlap += b.amplitude(j, params) * a;
        }
        bound_weight += overlap.norm_sqr();
        let coeff = Complex64::from_polar(1.0, -b.lambda() * t) * overlap;
        for (i, j) in window.nodes().enumerate() {
            out[i] += coeff * b.amplitude(j, params);
        }
    }

    let state = NodeState::from_amplitudes(window, out)?;
    let norm_deviation = (state.norm_sq() - 1.0).abs();
    if norm_deviation > tol::NORM_ACCURACY {
        return Err(Error::Accuracy { norm_deviation });
    }
    let report = PropagatorReport {
        norm_deviation,
        bound_weight,
        runtime: start.elapsed().as_secs_f64(),
    };
    Ok((state, report))
}

/// Truncated-Hamiltonian propagator: one eigendecomposition serves every
/// evolution time on the same window.
#[derive(Debug, Clone)]
pub struct OraclePropagator {
    window: LatticeWindow,
    hamiltonian: TridiagonalHamiltonian,
    decomposition: Eigendecomposition,
}

impl OraclePropagator {
    pub fn new(params: &DefectLineParams, window: &LatticeWindow) -> Result<Self> {
        let hamiltonian = TridiagonalHamiltonian::build(params, window)?;
        let decomposition = eigen::eigh_tridiagonal(hamiltonian.diag(), hamiltonian.offdiag())?;
        Ok(Self {
            window: *window,
            hamiltonian,
            decomposition,
        })
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn hamiltonian(&self) -> &TridiagonalHamiltonian {
        &self.hamiltonian
    }

    /// Eigenvalues of the truncated Hamiltonian, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        self.decomposition.values()
    }

    /// Eigenvalues strictly outside the band by more than `margin`.
    pub fn out_of_band_eigenvalues(&self, params: &DefectLineParams, margin: f64) -> Vec<f64> {
        let (lo, hi) = params.band_interval();
        self.decomposition
            .values()
            .iter()
            .copied()
            .filter(|&v| v < lo - margin || v > hi + margin)
            .collect()
    }

    /// ψ(t) = V e^{−iΛt} Vᵀ ψ(0).
    pub fn evolve(&self, psi0: &NodeState, t: f64) -> Result<NodeState> {
        let n = self.window.len();
        // embed psi0 into this propagator's window by node index
        let mut input = vec![Complex64::ZERO; n];
        for (j, a) in psi0.iter_nodes() {
            if a == Complex64::ZERO {
                continue;
            }
            match self.window.offset_of(j) {
                Some(i) => input[i] = a,
                None => {
                    return Err(Error::Window(format!(
                        "state has support at node {j} outside the oracle window"
                    )))
                }
            }
        }
        let dec = &self.decomposition;
        let mut out = vec![Complex64::ZERO; n];
        for m in 0..n {
            let v = dec.vector(m);
            let mut overlap = Complex64::ZERO;
            for i in 0..n {
                overlap += v[i] * input[i];
            }
            if overlap == Complex64::ZERO {
                continue;
            }
            let coeff = Complex64::from_polar(1.0, -dec.values()[m] * t) * overlap;
            for i in 0..n {
                out[i] += coeff * v[i];
            }
        }
        NodeState::from_amplitudes(&self.window, out)
    }
}

/// Evolve by exact diagonalization of the truncated Hamiltonian.
/// Handles every parameter value, including γ + β = 0.
pub fn evolve_oracle(
    psi0: &NodeState,
    t: f64,
    params: &DefectLineParams,
    window: &LatticeWindow,
) -> Result<NodeState> {
    check_window(params, t, window)?;
    OraclePropagator::new(params, window)?.evolve(psi0, t)
}

/// Max node-wise probability discrepancy between the two backends for a
/// walk starting at `j0`.
pub fn compare_backends(
    params: &DefectLineParams,
    j0: i64,
    t: f64,
    quad: &QuadratureSpec,
    window: &LatticeWindow,
) -> Result<f64> {
    let psi0 = NodeState::basis(j0, window)?;
    let (spectral, _) = evolve_spectral(&psi0, t, params, quad, window)?;
    let oracle = evolve_oracle(&psi0, t, params, window)?;
    let mut max_dp = 0.0f64;
    for (a, b) in spectral.amplitudes().iter().zip(oracle.amplitudes()) {
        max_dp = max_dp.max((a.norm_sqr() - b.norm_sqr()).abs());
    }
    Ok(max_dp)
}

/// Max entrywise deviation of the quadrature-resolved identity
/// Σ_b |ψ^b⟩⟨ψ^b| + ∫dk (odd + even projectors) from I, on nodes
/// |j − j_d| ≤ `window_radius`.
pub fn completeness_residual(
    params: &DefectLineParams,
    quad: &QuadratureSpec,
    window_radius: usize,
) -> Result<f64> {
    if params.is_disconnected() {
        return Err(Error::DisconnectedDefect);
    }
    let jd = params.j_defect;
    let nodes: Vec<i64> = (jd - window_radius as i64..=jd + window_radius as i64).collect();
    let n = nodes.len();
    let mut gram = vec![Complex64::ZERO; n * n];

    let grid = quad.grid();
    let mut odd_amps = vec![Complex64::ZERO; n];
    let mut even_amps = vec![Complex64::ZERO; n];
    for (k, weight) in grid.iter() {
        let even = EvenMode::new(k, params)?;
        for (i, &j) in nodes.iter().enumerate() {
            odd_amps[i] = odd_amplitude(k, j, params);
            even_amps[i] = even.amplitude(j);
        }
        for r in 0..n {
            let or = odd_amps[r];
            let er = even_amps[r];
            let row = &mut gram[r * n..(r + 1) * n];
            for c in 0..n {
                row[c] += weight * (or * odd_amps[c].conj() + er * even_amps[c].conj());
            }
        }
    }
    for b in bound_states(params)? {
        let amps: Vec<f64> = nodes.iter().map(|&j| b.amplitude(j, params)).collect();
        for r in 0..n {
            let row = &mut gram[r * n..(r + 1) * n];
            for c in 0..n {
                row[c] += amps[r] * amps[c];
            }
        }
    }

    let mut max_err = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let expected = if r == c {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            max_err = max_err.max((gram[r * n + c] - expected).norm());
        }
    }
    Ok(max_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(epsilon: f64, gamma: f64, alpha: f64, beta: f64, jd: i64) -> DefectLineParams {
        DefectLineParams::new(epsilon, gamma, alpha, beta, jd).unwrap()
    }

    fn probability(state: &NodeState, j: i64) -> f64 {
        state.amplitude(j).unwrap().norm_sqr()
    }

    #[test]
    fn spectral_identity_at_t_zero() {
        let p = params(2.0, 1.0, 0.0, 0.0, 0);
        let window = LatticeWindow::new(0, 64).unwrap();
        let psi0 = NodeState::basis(3, &window).unwrap();
        let (out, report) =
            evolve_spectral(&psi0, 0.0, &p, &QuadratureSpec::default(), &window).unwrap();
        assert!(report.norm_deviation <= 1e-10);
        for (a, b) in out.amplitudes().iter().zip(psi0.amplitudes()) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn spectral_rejects_disconnected_defect() {
        let p = params(2.0, 1.0, 0.0, -1.0 + 1e-13, 0);
        let window = LatticeWindow::new(0, 180).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        match evolve_spectral(&psi0, 30.0, &p, &QuadratureSpec::default(), &window) {
            Err(Error::DisconnectedDefect) => {}
            other => panic!(
                "expected disconnected-defect error, got {:?}",
                other.map(|_| ())
            ),
        }
    }

    #[test]
    fn spectral_rejects_small_window() {
        let p = params(2.0, 1.0, 0.0, 0.0, 0);
        let window = LatticeWindow::new(0, 50).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        match evolve_spectral(&psi0, 30.0, &p, &QuadratureSpec::default(), &window) {
            Err(Error::Window(_)) => {}
            other => panic!("expected window error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn spectral_reproduces_defect_peak() {
        // frozen from the truncated-Hamiltonian oracle: P_0(30) for
        // eps=2, gamma=1, alpha=3, j_d=j_0=0 is 0.6924266613758819
        let p = params(2.0, 1.0, 3.0, 0.0, 0);
        let window = LatticeWindow::new(0, 128).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        let (out, report) =
            evolve_spectral(&psi0, 30.0, &p, &QuadratureSpec::default(), &window).unwrap();
        let p0 = probability(&out, 0);
        assert!((p0 - 0.692_426_661_375_881_9).abs() < 1e-9, "P_0 = {p0}");
        assert!((p0 - 0.692_427).abs() < 1e-4);
        assert!(report.norm_deviation <= 1e-10);
        assert!(report.bound_weight > 0.0 && report.bound_weight <= 1.0 + 1e-10);
        // besides the central spike, ballistic side peaks near |j| = 2 gamma t
        for sign in [1i64, -1] {
            let max_on = |lo: i64, hi: i64| {
                (lo..=hi)
                    .map(|d| probability(&out, sign * d))
                    .fold(0.0f64, f64::max)
            };
            let peak = max_on(52, 62);
            assert!(peak > max_on(40, 50), "no side peak, sign {sign}");
            assert!(peak > 10.0 * max_on(64, 90), "no sharp tail, sign {sign}");
        }
    }

    #[test]
    fn oracle_free_walk_is_symmetric() {
        let p = params(2.0, 1.0, 0.0, 0.0, 0);
        let window = LatticeWindow::new(0, 110).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        let out = evolve_oracle(&psi0, 20.0, &p, &window).unwrap();
        for j in 1..=100 {
            let diff = (probability(&out, j) - probability(&out, -j)).abs();
            assert!(diff < 1e-12, "asymmetry at |j| = {j}");
        }
        assert!((out.norm_sq() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn oracle_disconnected_defect_traps_walker() {
        let p = params(2.0, 1.0, 0.0, -1.0, 0);
        let window = LatticeWindow::new(0, 170).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        for t in [1.0, 10.0, 30.0] {
            let out = evolve_oracle(&psi0, t, &p, &window).unwrap();
            assert!((probability(&out, 0) - 1.0).abs() <= 1e-12, "t = {t}");
        }
    }

    #[test]
    fn oracle_free_walk_spreads_ballistically() {
        // sigma(t) = sqrt(2) * gamma * t on the free line
        let p = params(2.0, 1.0, 0.0, 0.0, 0);
        let window = LatticeWindow::new(0, 110).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        let out = evolve_oracle(&psi0, 30.0, &p, &window).unwrap();
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (j, a) in out.iter_nodes() {
            let pj = a.norm_sqr();
            m1 += j as f64 * pj;
            m2 += (j as f64).powi(2) * pj;
        }
        let sigma = (m2 - m1 * m1).sqrt();
        let expected = 2.0f64.sqrt() * 30.0;
        assert!(
            (sigma - expected).abs() / expected < 1e-3,
            "sigma = {sigma}"
        );
    }

    #[test]
    fn oracle_conserves_energy() {
        let p = params(2.0, 1.0, 3.0, 0.5, 0);
        let window = LatticeWindow::new(0, 230).unwrap();
        let h = TridiagonalHamiltonian::build(&p, &window).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        let prop = OraclePropagator::new(&p, &window).unwrap();
        let e0 = h.expectation(psi0.amplitudes());
        for t in [5.0, 17.0, 30.0] {
            let out = prop.evolve(&psi0, t).unwrap();
            let e = h.expectation(out.amplitudes());
            assert!((e - e0).abs() <= 1e-9, "t = {t}: {e} vs {e0}");
        }
    }

    #[test]
    fn backends_agree_on_defect_configurations() {
        let quad = QuadratureSpec::default();
        // Fig. 2(a)-style configuration
        let p = params(2.0, 1.0, 3.0, 0.0, 0);
        let window = LatticeWindow::new(0, 128).unwrap();
        let d = compare_backends(&p, 0, 30.0, &quad, &window).unwrap();
        assert!(d <= 1e-8, "position defect: {d:e}");
        // transition defect with the walk starting next to it
        let p = params(2.0, 1.0, 0.0, 0.5, 1);
        let window = LatticeWindow::new(0, 135).unwrap();
        let d = compare_backends(&p, 0, 30.0, &quad, &window).unwrap();
        assert!(d <= 1e-8, "transition defect: {d:e}");
        // t = 0
        let p = params(2.0, 1.0, 3.0, 0.0, 0);
        let window = LatticeWindow::new(0, 64).unwrap();
        let d = compare_backends(&p, 0, 0.0, &quad, &window).unwrap();
        assert!(d <= 1e-12, "identity: {d:e}");
    }

    #[test]
    fn quadrature_doubling_is_converged() {
        let p = params(2.0, 1.0, 3.0, 0.0, 0);
        let window = LatticeWindow::new(0, 128).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        let (coarse, _) = evolve_spectral(
            &psi0,
            30.0,
            &p,
            &QuadratureSpec::new(1024).unwrap(),
            &window,
        )
        .unwrap();
        let (fine, _) = evolve_spectral(
            &psi0,
            30.0,
            &p,
            &QuadratureSpec::new(2048).unwrap(),
            &window,
        )
        .unwrap();
        let mut max_dp = 0.0f64;
        for (a, b) in coarse.amplitudes().iter().zip(fine.amplitudes()) {
            max_dp = max_dp.max((a.norm_sqr() - b.norm_sqr()).abs());
        }
        assert!(max_dp <= 1e-9, "doubling shift: {max_dp:e}");
    }

    #[test]
    fn spectral_evolution_is_deterministic() {
        let p = params(2.0, 1.0, 0.0, 2.0, 0);
        let window = LatticeWindow::new(0, 230).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        let quad = QuadratureSpec::default();
        let (a, _) = evolve_spectral(&psi0, 15.0, &p, &quad, &window).unwrap();
        let (b, _) = evolve_spectral(&psi0, 15.0, &p, &quad, &window).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn completeness_examples() {
        let quad = QuadratureSpec::default();
        let free = params(2.0, 1.0, 0.0, 0.0, 0);
        assert!(completeness_residual(&free, &quad, 40).unwrap() <= 1e-8);
        let position = params(2.0, 1.0, 3.0, 0.0, 0);
        assert!(completeness_residual(&position, &quad, 40).unwrap() <= 1e-8);
        let transition = params(2.0, 1.0, 0.0, 2.0, 0);
        assert!(completeness_residual(&transition, &quad, 40).unwrap() <= 1e-8);
    }

    #[test]
    fn light_cone_leakage_is_negligible() {
        // beyond the light-cone radius 100 for t = 30, probabilities are
        // below 1e-24 (frozen against the development oracle)
        let p = params(2.0, 1.0, 0.0, 0.0, 0);
        let window = LatticeWindow::new(0, 150).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        let out = evolve_oracle(&psi0, 30.0, &p, &window).unwrap();
        for (j, a) in out.iter_nodes() {
            if j.unsigned_abs() >= 100 {
                assert!(a.norm_sqr() < 1e-24, "leak at j = {j}: {:e}", a.norm_sqr());
            }
        }
    }
}
