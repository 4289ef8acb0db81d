//! Closed-form eigensystem of the defect line: dispersion, the auxiliary
//! root y, the boundary-matching function f, traveling modes of both
//! parities, and validated bound states.
//!
//! Traveling modes fill the band λ_k = ε − 2γ cos k, k ∈ (0, π). Odd
//! modes vanish at the defect and never feel it; even modes carry the
//! defect response through f(λ_k). Outside the band, even-parity bound
//! states exist exactly where the branch condition f^sign(1−|y|)(λ) = 0
//! holds: f must vanish on the |y| < 1 side and diverge on the |y| > 1
//! side. Closed-form candidates come from a quadratic in λ whose
//! solutions merge zeros and poles of f, so every candidate is pushed
//! through the branch test before it is accepted.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::Error;
use crate::lattice::{DefectLineParams, LatticeWindow, TridiagonalHamiltonian};
use crate::tol;
use crate::Result;

/// Traveling-mode eigenvalue λ_k = ε − 2γ cos k.
pub fn lambda_of_k(k: f64, params: &DefectLineParams) -> Result<f64> {
    if !(0.0..=PI).contains(&k) {
        return Err(Error::Domain(format!("wave number {k} outside [0, pi]")));
    }
    Ok(params.epsilon - 2.0 * params.gamma * k.cos())
}

/// Magnitude classification of the auxiliary root y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagnitudeClass {
    /// ||y| − 1| within tolerance: traveling regime.
    OnCircle,
    /// |y| < 1.
    Inside,
    /// |y| > 1.
    Outside,
}

/// The root y of y + 1/y = (ε − λ)/γ with the principal square root;
/// |y| = 1 inside the band and the pair (y, 1/y) splits off the circle
/// outside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YRoot {
    pub value: Complex64,
    pub magnitude_class: MagnitudeClass,
}

/// Solve the dispersion quadratic: y = ((ε − λ) + √((ε − λ)² − 4γ²)) / 2γ.
pub fn y_of_lambda(lambda: f64, params: &DefectLineParams) -> YRoot {
    let u = params.epsilon - lambda;
    let disc = Complex64::new(u * u - 4.0 * params.gamma * params.gamma, 0.0);
    let value = (Complex64::new(u, 0.0) + disc.sqrt()) / (2.0 * params.gamma);
    let m = value.norm();
    let magnitude_class = if (m - 1.0).abs() <= tol::Y_ON_CIRCLE {
        MagnitudeClass::OnCircle
    } else if m < 1.0 {
        MagnitudeClass::Inside
    } else {
        MagnitudeClass::Outside
    };
    YRoot {
        value,
        magnitude_class,
    }
}

/// Value of the boundary-matching function f at λ, or a pole marker.
///
/// A pole of f is meaningful: it is the bound-state condition on the
/// |y| > 1 branch, where 1/f must vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FLambda {
    Value(Complex64),
    Pole,
}

impl FLambda {
    pub fn is_pole(&self) -> bool {
        matches!(self, FLambda::Pole)
    }

    pub fn value(&self) -> Option<Complex64> {
        match self {
            FLambda::Value(v) => Some(*v),
            FLambda::Pole => None,
        }
    }
}

/// Boundary-matching function
/// f(λ) = (−(α+ε−λ)γ² + (γ+β)²(ε−λ+S)) / ((α+ε−λ)γ² − (γ+β)²(ε−λ−S)),
/// S = √((ε−λ)² − 4γ²) on the same principal branch as `y_of_lambda`.
pub fn f_of_lambda(lambda: f64, params: &DefectLineParams) -> FLambda {
    let g2 = params.gamma * params.gamma;
    let h2 = params.defect_coupling().powi(2);
    let u = params.epsilon - lambda;
    let s = Complex64::new(u * u - 4.0 * g2, 0.0).sqrt();
    let au = Complex64::new(params.alpha + u, 0.0);
    let uu = Complex64::new(u, 0.0);
    let num = -au * g2 + h2 * (uu + s);
    let den = au * g2 - h2 * (uu - s);
    if den.norm() <= tol::F_POLE_GUARD {
        FLambda::Pole
    } else {
        FLambda::Value(num / den)
    }
}

/// f on the band, parameterized by wave number:
/// f(λ_k) = (2i(γ+β)² sin k − v) / (2i(γ+β)² sin k + v),
/// v = γα − 2β(2γ+β) cos k. Unit modulus for all real parameters.
///
/// Requires 0 < k < π; consistent with `f_of_lambda(lambda_of_k(k))`
/// on the in-band branch.
pub fn f_of_k(k: f64, params: &DefectLineParams) -> Complex64 {
    let h2 = params.defect_coupling().powi(2);
    let v = params.gamma * params.alpha
        - 2.0 * params.beta * (2.0 * params.gamma + params.beta) * k.cos();
    let im = 2.0 * h2 * k.sin();
    Complex64::new(-v, im) / Complex64::new(v, im)
}

fn inv_sqrt_pi() -> f64 {
    1.0 / PI.sqrt()
}

/// Odd traveling-mode amplitude ⟨j|ψ_k^o⟩ = (i/√π) sin(k(j − j_d)).
/// Independent of the defect strengths; vanishes at the defect node.
pub fn odd_amplitude(k: f64, j: i64, params: &DefectLineParams) -> Complex64 {
    let arg = k * (j - params.j_defect) as f64;
    Complex64::new(0.0, inv_sqrt_pi() * arg.sin())
}

/// Precomputed even-mode coefficients at a fixed wave number, shared by
/// the propagator's quadrature loop.
#[derive(Debug, Clone, Copy)]
pub struct EvenMode {
    k: f64,
    j_defect: i64,
    /// (1 + f) / N
    coeff_cos: Complex64,
    /// i (1 − f) / N
    coeff_sin: Complex64,
    /// extra (1 + f)(−β/(γ+β)) / N carried by the defect node
    center_extra: Complex64,
}

impl EvenMode {
    pub fn new(k: f64, params: &DefectLineParams) -> Result<Self> {
        let coupling = params.defect_coupling();
        if coupling.abs() <= tol::DISCONNECT {
            return Err(Error::DisconnectedDefect);
        }
        let f = f_of_k(k, params);
        // Delta-normalization fixes |N| = |1+f|/sqrt(4 pi): the center and
        // constant pieces of the lattice sum are finite and carry no
        // delta(k - k') weight. Confirmed through the completeness identity,
        // which this normalization resolves to machine precision for all
        // defect strengths.
        let inv_norm = (4.0 * PI).sqrt().recip();
        let one_plus_f = Complex64::ONE + f;
        Ok(Self {
            k,
            j_defect: params.j_defect,
            coeff_cos: one_plus_f * inv_norm,
            coeff_sin: Complex64::i() * (Complex64::ONE - f) * inv_norm,
            center_extra: one_plus_f * (-params.beta / coupling) * inv_norm,
        })
    }

    /// ⟨j|ψ_k^e⟩.
    pub fn amplitude(&self, j: i64) -> Complex64 {
        let d = (j - self.j_defect).unsigned_abs() as f64;
        let arg = self.k * d;
        let mut a = self.coeff_cos * arg.cos() + self.coeff_sin * arg.sin();
        if j == self.j_defect {
            a += self.center_extra;
        }
        a
    }
}

/// Even traveling-mode amplitude ⟨j|ψ_k^e⟩ with the defect-node term
/// folded in: the coefficient at j_d is (1+f)·γ/(γ+β) over the common
/// normalization. Reduces to cos(k|j−j_d|)/√π on the free line.
pub fn even_amplitude(k: f64, j: i64, params: &DefectLineParams) -> Result<Complex64> {
    Ok(EvenMode::new(k, params)?.amplitude(j))
}

/// Parity of a traveling mode about the defect node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// A traveling eigenmode at wave number k: eigenvalue λ_k, parity tag,
/// and (for even parity) the unit-modulus factor f(λ_k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingMode {
    k: f64,
    parity: Parity,
    lambda: f64,
    phase_factor: Option<Complex64>,
}

impl TravelingMode {
    pub fn new(k: f64, parity: Parity, params: &DefectLineParams) -> Result<Self> {
        if !(k > 0.0 && k < PI) {
            return Err(Error::Domain(format!("wave number {k} outside (0, pi)")));
        }
        let lambda = params.epsilon - 2.0 * params.gamma * k.cos();
        let phase_factor = match parity {
            Parity::Odd => None,
            Parity::Even => {
                if params.is_disconnected() {
                    return Err(Error::DisconnectedDefect);
                }
                Some(f_of_k(k, params))
            }
        };
        Ok(Self {
            k,
            parity,
            lambda,
            phase_factor,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn phase_factor(&self) -> Option<Complex64> {
        self.phase_factor
    }

    pub fn amplitude(&self, j: i64, params: &DefectLineParams) -> Result<Complex64> {
        match self.parity {
            Parity::Odd => Ok(odd_amplitude(self.k, j, params)),
            Parity::Even => even_amplitude(self.k, j, params),
        }
    }
}

/// A validated bound eigenpair, exponentially localized at the defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    lambda: f64,
    branch: i8,
    base: f64,
    normalization: f64,
    center_coeff: f64,
    adjacent_coeff: f64,
}

impl BoundState {
    /// Bound eigenvalue λ_b, outside the band.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// sign(1 − |y|): +1 above the band (for γ > 0), −1 below.
    pub fn branch(&self) -> i8 {
        self.branch
    }

    /// Signed per-site decay factor y^branch, |base| < 1.
    pub fn decay_base(&self) -> f64 {
        self.base
    }

    /// Normalization constant A_b.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Coefficient at the defect node: A_b γ/(γ+β).
    pub fn center_coeff(&self) -> f64 {
        self.center_coeff
    }

    /// Coefficient at j_d ± 1: A_b γ(α+ε−λ_b)/(2(γ+β)²).
    pub fn adjacent_coeff(&self) -> f64 {
        self.adjacent_coeff
    }

    /// Real amplitude ⟨j|ψ^b⟩; even about the defect node.
    pub fn amplitude(&self, j: i64, params: &DefectLineParams) -> f64 {
        let d = (j - params.j_defect).unsigned_abs();
        match d {
            0 => self.center_coeff,
            1 => self.adjacent_coeff,
            _ => self.normalization * self.base.powi(d as i32),
        }
    }
}

/// Amplitude ⟨j|ψ^b⟩ of a validated bound state.
pub fn bound_amplitude(b: &BoundState, j: i64, params: &DefectLineParams) -> f64 {
    b.amplitude(j, params)
}

/// Closed-form bound-energy candidates
/// λ_± = ε + β(2γ+β)α/D ± (γ+β)²/D · √(4(γ+2β)² − 8β² + α²),
/// D = (γ+2β)² − 2β².
///
/// Both real roots are returned (ascending) when the radicand is
/// non-negative; they are candidates only and must pass `validate_bound`.
pub fn bound_candidates(params: &DefectLineParams) -> Result<Vec<f64>> {
    let g = params.gamma;
    let b = params.beta;
    let denom = (g + 2.0 * b).powi(2) - 2.0 * b * b;
    if denom.abs() <= tol::DEGENERATE_DENOMINATOR {
        return Err(Error::DegenerateDenominator);
    }
    let radicand = 4.0 * (g + 2.0 * b).powi(2) - 8.0 * b * b + params.alpha * params.alpha;
    if radicand < 0.0 {
        return Ok(Vec::new());
    }
    let shift = b * (2.0 * g + b) * params.alpha / denom;
    let spread = (g + b).powi(2) / denom * radicand.sqrt();
    let mut roots = vec![
        params.epsilon + shift - spread,
        params.epsilon + shift + spread,
    ];
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Direct root finding for bound energies when the closed form is
/// degenerate: brackets and bisects zeros of f above the band and zeros
/// of 1/f below it, on intervals of half-width Λ = 10(|γ|+|β|+|α|).
pub fn fallback_root_find(params: &DefectLineParams) -> Vec<f64> {
    let (lo, hi) = params.band_interval();
    let span = 10.0 * (params.gamma.abs() + params.beta.abs() + params.alpha.abs());
    let g2 = params.gamma * params.gamma;
    let h2 = params.defect_coupling().powi(2);
    // Outside the band S is real; zeros of f are zeros of its numerator,
    // poles are zeros of its denominator. Both are smooth per side, so
    // plain bisection applies.
    let numerator = |lambda: f64| {
        let u = params.epsilon - lambda;
        let s = (u * u - 4.0 * g2).max(0.0).sqrt();
        -(params.alpha + u) * g2 + h2 * (u + s)
    };
    let denominator = |lambda: f64| {
        let u = params.epsilon - lambda;
        let s = (u * u - 4.0 * g2).max(0.0).sqrt();
        (params.alpha + u) * g2 - h2 * (u - s)
    };

    let mut roots = Vec::new();
    let mut scan = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| {
        const STEPS: usize = 4000;
        let dx = (b - a) / STEPS as f64;
        let mut x0 = a;
        let mut f0 = f(x0);
        for i in 1..=STEPS {
            let x1 = a + i as f64 * dx;
            let f1 = f(x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut xa, mut xb) = (x0, x1);
                let mut fa = f0;
                while xb - xa > tol::ROOT_BISECTION {
                    let mid = 0.5 * (xa + xb);
                    let fm = f(mid);
                    if fm == 0.0 {
                        xa = mid;
                        xb = mid;
                    } else if fa * fm < 0.0 {
                        xb = mid;
                    } else {
                        xa = mid;
                        fa = fm;
                    }
                }
                roots.push(0.5 * (xa + xb));
            }
            x0 = x1;
            f0 = f1;
        }
    };
    scan(hi + tol::BAND_EDGE, hi + span, &numerator);
    scan(lo - span, lo - tol::BAND_EDGE, &denominator);
    roots.sort_by(f64::total_cmp);
    roots
}

/// Largest truncation window needed so the boundary tail of a decaying
/// state stays below the residual budget.
fn residual_radius(base: f64, gamma: f64) -> usize {
    let target = 0.5e-10 / gamma.abs().max(1.0);
    let needed = (target.ln() / base.abs().ln()).ceil();
    let needed = if needed.is_finite() {
        needed.max(0.0) as usize
    } else {
        usize::MAX
    };
    needed.clamp(64, 1 << 17)
}

/// Apply the branch test f^sign(1−|y|)(λ) = 0 to an out-of-band candidate.
///
/// On acceptance the bound state is constructed with its closed-form
/// normalization and confirmed against the truncated Hamiltonian:
/// ‖(H − λ)ψ‖ and |‖ψ‖² − 1| must stay within tolerance. Candidates
/// failing the branch test (or the residual confirmation) yield `None`.
pub fn validate_bound(params: &DefectLineParams, lambda: f64) -> Result<Option<BoundState>> {
    let (lo, hi) = params.band_interval();
    if lambda >= lo - tol::BAND_EDGE && lambda <= hi + tol::BAND_EDGE {
        return Err(Error::Domain(format!(
            "lambda {lambda} is inside (or within tolerance of) the band [{lo}, {hi}]"
        )));
    }
    let y = y_of_lambda(lambda, params).value.re;
    let branch: i8 = if y.abs() < 1.0 { 1 } else { -1 };

    let accepted = match (branch, f_of_lambda(lambda, params)) {
        (1, FLambda::Value(v)) => v.norm() <= tol::BRANCH,
        (1, FLambda::Pole) => false,
        (-1, FLambda::Pole) => true,
        (-1, FLambda::Value(v)) => v.norm().recip() <= tol::BRANCH,
        _ => unreachable!(),
    };
    if !accepted {
        return Ok(None);
    }

    let base = if branch == 1 { y } else { 1.0 / y };
    let coupling = params.defect_coupling();
    if coupling.abs() <= tol::DISCONNECT {
        return Err(Error::DisconnectedDefect);
    }
    let center_ratio = params.gamma / coupling;
    let adjacent_ratio =
        params.gamma * (params.alpha + params.epsilon - lambda) / (2.0 * coupling * coupling);
    let w2 = base * base;
    let inv_norm_sq = 2.0 * w2 * w2 / (1.0 - w2)
        + center_ratio * center_ratio
        + 2.0 * adjacent_ratio * adjacent_ratio;
    let normalization = inv_norm_sq.sqrt().recip();
    let state = BoundState {
        lambda,
        branch,
        base,
        normalization,
        center_coeff: normalization * center_ratio,
        adjacent_coeff: normalization * adjacent_ratio,
    };

    // residual confirmation on a window wide enough for the tail
    let radius = residual_radius(base, params.gamma);
    let window = LatticeWindow::new(params.j_defect, radius)?;
    let h = TridiagonalHamiltonian::build(params, &window)?;
    let psi: Vec<f64> = window.nodes().map(|j| state.amplitude(j, params)).collect();
    let norm_sq: f64 = psi.iter().map(|a| a * a).sum();
    let mut residual_sq = 0.0f64;
    let n = psi.len();
    for i in 0..n {
        let mut hp = h.diag()[i] * psi[i];
        if i > 0 {
            hp += h.offdiag()[i - 1] * psi[i - 1];
        }
        if i + 1 < n {
            hp += h.offdiag()[i] * psi[i + 1];
        }
        residual_sq += (hp - lambda * psi[i]).powi(2);
    }
    if residual_sq.sqrt() > tol::EIGEN_RESIDUAL || (norm_sq - 1.0).abs() > tol::NORM_CONSERVATION {
        return Ok(None);
    }
    Ok(Some(state))
}

/// All validated bound states, ascending in λ_b (zero, one, or two).
///
/// Candidates come from the closed form, or from `fallback_root_find`
/// when its denominator degenerates; each candidate is filtered through
/// `validate_bound`. Candidates at (or within tolerance of) the band
/// edges are traveling, not bound, and are skipped.
pub fn bound_states(params: &DefectLineParams) -> Result<Vec<BoundState>> {
    if params.is_disconnected() {
        return Err(Error::DisconnectedDefect);
    }
    let mut candidates = match bound_candidates(params) {
        Ok(c) => c,
        Err(Error::DegenerateDenominator) => fallback_root_find(params),
        Err(e) => return Err(e),
    };
    candidates.sort_by(f64::total_cmp);
    candidates.dedup_by(|a, b| (*a - *b).abs() <= tol::BAND_EDGE);

    let (lo, hi) = params.band_interval();
    let mut states = Vec::new();
    for lambda in candidates {
        if lambda >= lo - tol::BAND_EDGE && lambda <= hi + tol::BAND_EDGE {
            continue;
        }
        if let Some(state) = validate_bound(params, lambda)? {
            states.push(state);
        }
    }
    states.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(states)
}
