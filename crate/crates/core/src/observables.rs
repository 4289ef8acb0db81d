//! Probability distributions, spreading width, and the bound-state
//! projection formulas behind eigen-localization.
//!
//! The probability at any node splits exactly into odd, even, and bound
//! contributions; the bound part alone already reproduces the localized
//! peaks, which is the content of the projection approximation. With two
//! bound states the bound part oscillates at the eigenvalue gap.

use num_complex::Complex64;

use crate::error::Error;
use crate::lattice::{DefectLineParams, LatticeWindow, NodeState};
use crate::propagator::QuadratureSpec;
use crate::spectral::{bound_states, odd_amplitude, BoundState, EvenMode};
use crate::Result;

/// Real distribution P_j = |⟨j|ψ⟩|² over a lattice window.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    window: LatticeWindow,
    p: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    pub fn at(&self, j: i64) -> Option<f64> {
        self.window.offset_of(j).map(|i| self.p[i])
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    /// (node, probability) pairs, ascending node index.
    pub fn iter_nodes(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.p
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.window.node_at(i), v))
    }

    /// Mean position ⟨j⟩.
    pub fn mean(&self) -> f64 {
        self.iter_nodes().map(|(j, pj)| j as f64 * pj).sum()
    }
}

/// Elementwise squared modulus of the state amplitudes.
pub fn probability_distribution(state: &NodeState) -> ProbabilityDistribution {
    ProbabilityDistribution {
        window: *state.window(),
        p: state.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
    }
}

/// Spreading width σ = √(⟨j²⟩ − ⟨j⟩²).
pub fn std_dev(dist: &ProbabilityDistribution) -> f64 {
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (j, pj) in dist.iter_nodes() {
        m1 += j as f64 * pj;
        m2 += (j as f64) * (j as f64) * pj;
    }
    (m2 - m1 * m1).max(0.0).sqrt()
}

/// The three coherent contributions to the amplitude ⟨j|ψ(t)⟩ for a walk
/// started at |j_0⟩, regrouped by spectral family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectSiteDecomposition {
    pub odd_term: Complex64,
    pub even_term: Complex64,
    pub bound_term: Complex64,
    /// |odd + even + bound|².
    pub total_probability: f64,
}

/// Decompose the probability at node `j` and time `t` into traveling
/// (odd, even) and bound contributions.
///
/// The odd term is identically zero at the defect node, where odd modes
/// have no amplitude.
pub fn defect_site_decomposition(
    params: &DefectLineParams,
    j0: i64,
    j: i64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<DefectSiteDecomposition> {
    if params.is_disconnected() {
        return Err(Error::DisconnectedDefect);
    }
    let grid = quad.grid();
    let mut odd_term = Complex64::ZERO;
    let mut even_term = Complex64::ZERO;
    for (k, weight) in grid.iter() {
        let lambda = params.epsilon - 2.0 * params.gamma * k.cos();
        let phase = Complex64::from_polar(weight, -lambda * t);
        odd_term += phase * odd_amplitude(k, j, params) * odd_amplitude(k, j0, params).conj();
        let even = EvenMode::new(k, params)?;
        even_term += phase * even.amplitude(j) * even.amplitude(j0).conj();
    }
    let mut bound_term = Complex64::ZERO;
    for b in bound_states(params)? {
        bound_term += Complex64::from_polar(1.0, -b.lambda() * t)
            * b.amplitude(j, params)
            * b.amplitude(j0, params);
    }
    let total_probability = (odd_term + even_term + bound_term).norm_sqr();
    Ok(DefectSiteDecomposition {
        odd_term,
        even_term,
        bound_term,
        total_probability,
    })
}

/// Probability carried by the bound states alone:
/// |Σ_b e^{−iλ_b t} ⟨j|ψ^b⟩⟨ψ^b|j_0⟩|².
///
/// Time-independent with a single bound state; with two it oscillates at
/// the gap λ_+ − λ_−. Near the defect this approximates the full P_j.
pub fn bound_projection_probability(
    params: &DefectLineParams,
    j: i64,
    j0: i64,
    t: f64,
) -> Result<f64> {
    let bounds = bound_states(params)?;
    if bounds.is_empty() {
        return Err(Error::NoBoundState);
    }
    let mut sum = Complex64::ZERO;
    for b in &bounds {
        sum += Complex64::from_polar(1.0, -b.lambda() * t)
            * b.amplitude(j, params)
            * b.amplitude(j0, params);
    }
    Ok(sum.norm_sqr())
}

/// Oscillation period 2π/(λ_+ − λ_−) of the localized probability when
/// exactly two bound states coexist.
pub fn interference_period(bounds: &[BoundState]) -> Result<f64> {
    if bounds.len() != 2 {
        return Err(Error::Domain(format!(
            "interference period needs exactly two bound states, got {}",
            bounds.len()
        )));
    }
    let gap = bounds[1].lambda() - bounds[0].lambda();
    Ok(std::f64::consts::TAU / gap.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::NodeState;
    use crate::propagator::evolve_spectral;

    fn params(epsilon: f64, gamma: f64, alpha: f64, beta: f64, jd: i64) -> DefectLineParams {
        DefectLineParams::new(epsilon, gamma, alpha, beta, jd).unwrap()
    }

    #[test]
    fn distribution_of_basis_state() {
        let window = LatticeWindow::new(0, 5).unwrap();
        let s = NodeState::basis(0, &window).unwrap();
        let d = probability_distribution(&s);
        assert_eq!(d.at(0), Some(1.0));
        assert_eq!(d.total(), 1.0);
        assert_eq!(std_dev(&d), 0.0);
    }

    #[test]
    fn distribution_of_two_node_superposition() {
        let window = LatticeWindow::new(0, 2).unwrap();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::ZERO; window.len()];
        amps[window.offset_of(-1).unwrap()] = Complex64::new(inv, 0.0);
        amps[window.offset_of(1).unwrap()] = Complex64::new(0.0, inv);
        let s = NodeState::from_amplitudes(&window, amps).unwrap();
        let d = probability_distribution(&s);
        assert!((d.at(-1).unwrap() - 0.5).abs() < 1e-15);
        assert!((d.at(1).unwrap() - 0.5).abs() < 1e-15);
        // two-point distribution at +-1: sigma = 1
        assert!((std_dev(&d) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn odd_term_vanishes_at_defect_node() {
        let quad = QuadratureSpec::new(256).unwrap();
        for (alpha, beta) in [(3.0, 0.0), (0.0, 0.5), (-1.0, 1.0)] {
            let p = params(2.0, 1.0, alpha, beta, 2);
            let d = defect_site_decomposition(&p, 0, 2, 7.5, &quad).unwrap();
            assert_eq!(d.odd_term, Complex64::ZERO);
        }
    }

    #[test]
    fn decomposition_reproduces_defect_peak_values() {
        let quad = QuadratureSpec::default();
        // j_d = j_0 = 0: P = 0.692427, bound part 9/13 = 0.692308
        let p = params(2.0, 1.0, 3.0, 0.0, 0);
        let d = defect_site_decomposition(&p, 0, 0, 30.0, &quad).unwrap();
        assert!((d.total_probability - 0.692_427).abs() < 1e-4);
        assert!((d.bound_term.norm_sqr() - 0.692_308).abs() < 1e-5);
        // j_d = 1: P = 0.0637546, bound part 0.063466
        let p = params(2.0, 1.0, 3.0, 0.0, 1);
        let d = defect_site_decomposition(&p, 0, 1, 30.0, &quad).unwrap();
        assert!((d.total_probability - 0.063_754_6).abs() < 1e-4);
        assert!((d.bound_term.norm_sqr() - 0.063_466).abs() < 1e-5);
    }

    #[test]
    fn decomposition_matches_full_evolution_anywhere() {
        let quad = QuadratureSpec::default();
        let p = params(2.0, 1.0, 3.0, 0.0, 1);
        let window = LatticeWindow::new(0, 130).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        let (state, _) = evolve_spectral(&psi0, 30.0, &p, &quad, &window).unwrap();
        for j in [-7i64, 0, 1, 2, 13] {
            let d = defect_site_decomposition(&p, 0, j, 30.0, &quad).unwrap();
            let full = state.amplitude(j).unwrap().norm_sqr();
            assert!(
                (d.total_probability - full).abs() <= 1e-10,
                "j = {j}: {} vs {full}",
                d.total_probability
            );
        }
    }

    #[test]
    fn bound_projection_examples() {
        // single bound state: (A_b gamma/(gamma+beta))^4 = 9/13, any t
        let p = params(2.0, 1.0, 3.0, 0.0, 0);
        for t in [0.0, 30.0, 1234.5] {
            let v = bound_projection_probability(&p, 0, 0, t).unwrap();
            assert!((v - 0.692_308).abs() < 1e-5, "t = {t}");
        }
        let early = bound_projection_probability(&p, 0, 0, 3.0).unwrap();
        let late = bound_projection_probability(&p, 0, 0, 1003.0).unwrap();
        assert!((early - late).abs() < 1e-12);

        // two bound states, walk starting beside the defect
        let p = params(2.0, 1.0, 0.0, 0.5, 1);
        let at_defect = bound_projection_probability(&p, 1, 0, 30.0).unwrap();
        assert!((at_defect - 0.003).abs() < 5e-4, "P_1 = {at_defect}");
        for j in [0i64, 2] {
            let v = bound_projection_probability(&p, j, 0, 30.0).unwrap();
            assert!((v - 0.209).abs() < 1e-3, "P_{j} = {v}");
        }
    }

    #[test]
    fn bound_part_dominates_localized_peaks() {
        // with the walk starting on the defect, the traveling contribution
        // to the defect-site probability at t = 30 stays below 5% relative
        let quad = QuadratureSpec::default();
        for (alpha, beta) in [(3.0, 0.0), (0.0, 0.5), (0.0, 2.0)] {
            let p = params(2.0, 1.0, alpha, beta, 0);
            let d = defect_site_decomposition(&p, 0, 0, 30.0, &quad).unwrap();
            let bound_only = d.bound_term.norm_sqr();
            let rel = (bound_only - d.total_probability).abs() / d.total_probability;
            assert!(rel < 0.05, "alpha={alpha} beta={beta}: rel {rel:.4}");
        }
    }

    #[test]
    fn bound_projection_requires_bound_state() {
        let free = params(2.0, 1.0, 0.0, 0.0, 0);
        match bound_projection_probability(&free, 0, 0, 1.0) {
            Err(Error::NoBoundState) => {}
            other => panic!("expected no-bound-state error, got {other:?}"),
        }
    }

    #[test]
    fn bound_projection_decays_geometrically_with_distance() {
        let p = params(2.0, 1.0, 3.0, 0.0, 0);
        let b = &bound_states(&p).unwrap()[0];
        let ratio = b.decay_base() * b.decay_base();
        let values: Vec<f64> = (2..=8)
            .map(|d| bound_projection_probability(&p, 0, d, 30.0).unwrap())
            .collect();
        for pair in values.windows(2) {
            assert!((pair[1] / pair[0] - ratio).abs() < 1e-10);
        }
    }

    #[test]
    fn interference_period_examples() {
        let p = params(2.0, 1.0, 0.0, 0.5, 0);
        let bounds = bound_states(&p).unwrap();
        let period = interference_period(&bounds).unwrap();
        assert!((period - 1.306_084_817_615_443_8).abs() < 1e-12);
        assert!((period - 1.3061).abs() < 1e-4);

        let one = bound_states(&params(2.0, 1.0, 3.0, 0.0, 0)).unwrap();
        assert!(matches!(interference_period(&one), Err(Error::Domain(_))));
        let none = bound_states(&params(2.0, 1.0, 0.0, -0.5, 0)).unwrap();
        assert!(matches!(interference_period(&none), Err(Error::Domain(_))));

        let p = params(2.0, 1.0, 0.0, 2.0, 0);
        let bounds = bound_states(&p).unwrap();
        let gap = bounds[1].lambda() - bounds[0].lambda();
        assert!((gap - 2.0 * 4.365_641_250_653_994).abs() < 1e-10);
        assert!(
            (interference_period(&bounds).unwrap() - std::f64::consts::TAU / gap).abs() < 1e-14
        );
    }

    #[test]
    fn alpha_sign_symmetry_of_distributions() {
        // for beta = 0 and a basis-state start, +-alpha give identical
        // distributions
        let quad = QuadratureSpec::default();
        let window = LatticeWindow::new(0, 135).unwrap();
        let psi0 = NodeState::basis(0, &window).unwrap();
        for jd in [0i64, 2] {
            let plus = params(2.0, 1.0, 3.0, 0.0, jd);
            let minus = params(2.0, 1.0, -3.0, 0.0, jd);
            let (sp, _) = evolve_spectral(&psi0, 30.0, &plus, &quad, &window).unwrap();
            let (sm, _) = evolve_spectral(&psi0, 30.0, &minus, &quad, &window).unwrap();
            let mut max_dp = 0.0f64;
            for (a, b) in sp.amplitudes().iter().zip(sm.amplitudes()) {
                max_dp = max_dp.max((a.norm_sqr() - b.norm_sqr()).abs());
            }
            assert!(max_dp <= 1e-9, "jd = {jd}: {max_dp:e}");
        }
    }
}
