//! Weak-coupling classifiers and eigenvalue predictions.
//!
//! The central object is the second-order coupling polynomial
//! 𝒰(β) = Uβ − U₁β² (with an extra (2π)⁻¹(log 2 − γ)U² correction to the
//! quadratic coefficient in two dimensions). Its position in the complex
//! plane decides, for small |β|, whether the operator −Δ − βV has exactly
//! one weakly coupled eigenvalue (`Exists`), none near zero (`Absent`), or
//! whether the sufficient conditions are silent (`Undetermined`).
//!
//! Four classifiers share this trichotomy:
//!
//! * [`classify_curly_u`] — the general complex-potential conditions on
//!   𝒰(β) itself;
//! * [`classify_real_potential`] — the specialization to real V ≥ 0 data,
//!   phrased directly in β;
//! * [`classify_real_coupling`] — the real β → 0⁺ limit, phrased in U, U₁;
//! * [`classify_theta`] — the polar-angle rule for β = e^{iθ}ε, ε → 0⁺,
//!   with non-negative V.
//!
//! The threshold constants R, R′ and the smallness radius ε are existential
//! in the underlying theory; the defaults here are calibration choices
//! validated against the numerical solver (see `ThresholdConstants`).

use crate::geom::Dim;
use crate::potential::{Potential, PotentialError};
use crate::special::LOG2_MINUS_GAMMA;
use num_complex::Complex64;
use thiserror::Error;

/// Relative half-width of the band around each condition boundary inside
/// which the verdict is `Undetermined` (floating-point boundary cases
/// cannot be trusted either way).
const BOUNDARY_BAND: f64 = 1e-12;

/// Classifier failures.
#[derive(Debug, Error)]
pub enum AsymptoticsError {
    /// The classification theory assumes U ≠ 0.
    #[error("classification requires U != 0")]
    ZeroMass,
    /// β must lie inside the configured smallness radius.
    #[error("|beta| = {beta_abs:e} is outside the configured smallness radius epsilon = {epsilon:e}")]
    BetaNotSmall { beta_abs: f64, epsilon: f64 },
    /// The real-potential classifier needs real moments with U > 0.
    #[error("real-potential classification requires real U > 0 and real U1; got U = {u}, U1 = {u1}")]
    NonRealMoments { u: Complex64, u1: Complex64 },
    /// Eigenvalue prediction is undefined at β = 0.
    #[error("eigenvalue prediction requires beta != 0")]
    ZeroBeta,
    /// Threshold constants must be strictly positive.
    #[error("threshold constants must be strictly positive: R = {r}, R' = {r_prime}, epsilon = {epsilon}")]
    InvalidConstants { r: f64, r_prime: f64, epsilon: f64 },
    /// The enclosure |λ|^{1/2} ≤ ½‖V‖₁ is a one-dimensional statement.
    #[error("the eigenvalue enclosure check applies in dimension 1 only")]
    EnclosureDimension,
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// Existence verdict for a weakly coupled eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Exactly one discrete eigenvalue near 0 for this coupling.
    Exists,
    /// No eigenvalue near 0.
    Absent,
    /// The sufficient conditions are silent (they do not tile the plane,
    /// and boundary-band cases land here too).
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Exists => "exists",
            Verdict::Absent => "absent",
            Verdict::Undetermined => "undetermined",
        };
        write!(f, "{s}")
    }
}

/// Which classifier produced an assessment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierRule {
    /// Conditions on 𝒰(β) for general complex potentials.
    CurlyUConditions,
    /// Real-potential conditions phrased directly in β.
    RealPotentialBeta,
    /// Real β → 0⁺ limit conditions on U and U₁.
    RealCouplingLimit,
    /// Polar-angle rule for β = e^{iθ}ε with non-negative V.
    CouplingAngle,
}

/// Calibration constants: the condition slopes R (complex-potential
/// classifier) and R′ (real-potential classifier), and the smallness
/// radius ε within which the asymptotic classifiers are consulted.
///
/// The theory only asserts such constants exist. The defaults R = R′ = 1
/// and ε = 0.2/max(1, |U|) are validated per potential by the calibration
/// run, which cross-checks verdicts against certified solver results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConstants {
    pub r: f64,
    pub r_prime: f64,
    pub epsilon: f64,
}

impl Default for ThresholdConstants {
    fn default() -> Self {
        ThresholdConstants {
            r: 1.0,
            r_prime: 1.0,
            epsilon: 0.2,
        }
    }
}

impl ThresholdConstants {
    /// Default constants with the smallness radius scaled to the potential
    /// mass: ε = 0.2/max(1, |U|).
    pub fn for_mass(u: Complex64) -> Self {
        ThresholdConstants {
            epsilon: 0.2 / u.norm().max(1.0),
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), AsymptoticsError> {
        if self.r > 0.0 && self.r_prime > 0.0 && self.epsilon > 0.0 {
            Ok(())
        } else {
            Err(AsymptoticsError::InvalidConstants {
                r: self.r,
                r_prime: self.r_prime,
                epsilon: self.epsilon,
            })
        }
    }
}

/// A classified coupling: the verdict, the rule that produced it, and the
/// predicted eigenvalue when one exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingAssessment {
    pub beta: Complex64,
    pub curly_u: Complex64,
    pub verdict: Verdict,
    pub rule_used: ClassifierRule,
    /// Present exactly when `verdict == Exists`.
    pub lambda_predicted: Option<Complex64>,
}

/// 𝒰(β) = Uβ − U₁β² in 1D; in 2D the quadratic coefficient is
/// D = U₁ − (2π)⁻¹(log 2 − γ)U².
pub fn curly_u(beta: Complex64, u: Complex64, u1: Complex64, d: Dim) -> Complex64 {
    let quad = match d {
        Dim::One => u1,
        Dim::Two => u1 - u * u * (LOG2_MINUS_GAMMA / (2.0 * std::f64::consts::PI)),
    };
    u * beta - quad * beta * beta
}

/// `a > b` with an `Undetermined` guard band: strictly greater only when
/// the gap clears the relative boundary band.
fn clears(a: f64, b: f64) -> bool {
    a > b + BOUNDARY_BAND * a.abs().max(b.abs())
}

fn assessment(
    beta: Complex64,
    cu: Complex64,
    verdict: Verdict,
    rule_used: ClassifierRule,
    lambda: Option<Complex64>,
) -> CouplingAssessment {
    CouplingAssessment {
        beta,
        curly_u: cu,
        verdict,
        rule_used,
        lambda_predicted: if verdict == Verdict::Exists { lambda } else { None },
    }
}

fn check_small(beta: Complex64, constants: &ThresholdConstants) -> Result<(), AsymptoticsError> {
    constants.validate()?;
    if beta.norm() < constants.epsilon {
        Ok(())
    } else {
        Err(AsymptoticsError::BetaNotSmall {
            beta_abs: beta.norm(),
            epsilon: constants.epsilon,
        })
    }
}

/// General complex-potential classifier on 𝒰(β).
///
/// 1D: `Exists` when Re 𝒰 > R|Im 𝒰|³, `Absent` when Re 𝒰 < −R|Im 𝒰|³.
/// 2D: `Exists` when Re 𝒰 > 2|Im 𝒰|^{1/2}(1 + R|Re 𝒰|), `Absent` when
/// Re 𝒰 < 2|Im 𝒰|^{1/2}(1 − R|Re 𝒰|). The conditions are mutually
/// exclusive by construction and do not tile the plane.
pub fn classify_curly_u(
    beta: Complex64,
    u: Complex64,
    u1: Complex64,
    d: Dim,
    constants: &ThresholdConstants,
) -> Result<CouplingAssessment, AsymptoticsError> {
    if u.norm() == 0.0 {
        return Err(AsymptoticsError::ZeroMass);
    }
    check_small(beta, constants)?;
    let cu = curly_u(beta, u, u1, d);
    let (re, im) = (cu.re, cu.im);
    let verdict = match d {
        Dim::One => {
            let threshold = constants.r * im.abs().powi(3);
            if clears(re, threshold) {
                Verdict::Exists
            } else if clears(-re, threshold) {
                Verdict::Absent
            } else {
                Verdict::Undetermined
            }
        }
        Dim::Two => {
            let root = 2.0 * im.abs().sqrt();
            if clears(re, root * (1.0 + constants.r * re.abs())) {
                Verdict::Exists
            } else if clears(root * (1.0 - constants.r * re.abs()), re) {
                Verdict::Absent
            } else {
                Verdict::Undetermined
            }
        }
    };
    let lambda = predict_eigenvalue(beta, u, u1, d).ok();
    Ok(assessment(beta, cu, verdict, ClassifierRule::CurlyUConditions, lambda))
}

/// Real-potential classifier (requires real U > 0 and real U₁), phrased in
/// the coupling β = x + iy directly.
///
/// 1D: `Exists` when x > (−U₁/U + R′|y|)·y², `Absent` when
/// x < (−U₁/U − R′|y|)·y². 2D: the same with threshold
/// (2/√U)·|y|^{1/2}(1 ± R′|x|).
pub fn classify_real_potential(
    beta: Complex64,
    u: Complex64,
    u1: Complex64,
    d: Dim,
    constants: &ThresholdConstants,
) -> Result<CouplingAssessment, AsymptoticsError> {
    let real_enough = |v: Complex64| v.im.abs() <= 1e-12 * v.norm().max(1e-300);
    if !(real_enough(u) && real_enough(u1) && u.re > 0.0) {
        return Err(AsymptoticsError::NonRealMoments { u, u1 });
    }
    check_small(beta, constants)?;
    let (x, y) = (beta.re, beta.im);
    let verdict = match d {
        Dim::One => {
            let base = -u1.re / u.re;
            let upper = (base + constants.r_prime * y.abs()) * y * y;
            let lower = (base - constants.r_prime * y.abs()) * y * y;
            if clears(x, upper) {
                Verdict::Exists
            } else if clears(lower, x) {
                Verdict::Absent
            } else {
                Verdict::Undetermined
            }
        }
        Dim::Two => {
            let root = 2.0 / u.re.sqrt() * y.abs().sqrt();
            if clears(x, root * (1.0 + constants.r_prime * x.abs())) {
                Verdict::Exists
            } else if clears(root * (1.0 - constants.r_prime * x.abs()), x) {
                Verdict::Absent
            } else {
                Verdict::Undetermined
            }
        }
    };
    let cu = curly_u(beta, u, u1, d);
    let lambda = predict_eigenvalue(beta, u, u1, d).ok();
    Ok(assessment(beta, cu, verdict, ClassifierRule::RealPotentialBeta, lambda))
}

/// Classifier for real couplings β → 0⁺, phrased in the moments alone.
///
/// 1D: `Exists` iff Re U > 0, or Re U = 0 and Re U₁ < 0; `Absent` iff
/// Re U < 0, or Re U = 0 and Re U₁ > 0. 2D: `Exists` iff Im U = 0 and
/// Re U > 2|Im U₁|^{1/2}; `Absent` iff Im U ≠ 0 or Re U < 2|Im U₁|^{1/2}.
/// Equality cases are `Undetermined`.
pub fn classify_real_coupling(u: Complex64, u1: Complex64, d: Dim) -> Verdict {
    let scale_u = u.norm().max(1e-300);
    let re_u_zero = u.re.abs() <= BOUNDARY_BAND * scale_u;
    match d {
        Dim::One => {
            if clears(u.re, 0.0) {
                Verdict::Exists
            } else if clears(0.0, u.re) {
                Verdict::Absent
            } else if re_u_zero && clears(0.0, u1.re) {
                Verdict::Exists
            } else if re_u_zero && clears(u1.re, 0.0) {
                Verdict::Absent
            } else {
                Verdict::Undetermined
            }
        }
        Dim::Two => {
            let im_u_zero = u.im.abs() <= BOUNDARY_BAND * scale_u;
            let root = 2.0 * u1.im.abs().sqrt();
            if !im_u_zero {
                Verdict::Absent
            } else if clears(u.re, root) {
                Verdict::Exists
            } else if clears(root, u.re) {
                Verdict::Absent
            } else {
                Verdict::Undetermined
            }
        }
    }
}

/// Polar-angle classifier for β(ε) = e^{iθ}ε, ε → 0⁺, with V ≥ 0, V ≢ 0:
/// an eigenvalue exists exactly for θ ∈ [−π/2, π/2] (closed) in 1D and
/// only for θ = 0 in 2D. The angle is reduced to (−π, π] first.
pub fn classify_theta(theta: f64, d: Dim) -> Verdict {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > std::f64::consts::PI {
        t -= two_pi;
    }
    let exists = match d {
        Dim::One => t.abs() <= std::f64::consts::FRAC_PI_2,
        Dim::Two => t == 0.0,
    };
    if exists { Verdict::Exists } else { Verdict::Absent }
}

/// Truncated weak-coupling eigenvalue prediction.
///
/// 1D: λ = −(Uβ/2 − U₁β²/2)², from √(−λ) = (U/2)β − (U₁/2)β² + O(β³).
/// 2D: λ = −exp(−4π/(Uβ) − 4πU₁/U² + log 4 − 2γ), from the expansion of
/// log(−λ) with an O(β) remainder.
pub fn predict_eigenvalue(
    beta: Complex64,
    u: Complex64,
    u1: Complex64,
    d: Dim,
) -> Result<Complex64, AsymptoticsError> {
    if u.norm() == 0.0 {
        return Err(AsymptoticsError::ZeroMass);
    }
    if beta.norm() == 0.0 {
        return Err(AsymptoticsError::ZeroBeta);
    }
    Ok(match d {
        Dim::One => {
            let s = u * beta * 0.5 - u1 * beta * beta * 0.5;
            -s * s
        }
        Dim::Two => {
            let four_pi = 4.0 * std::f64::consts::PI;
            let exponent = -four_pi / (u * beta) - four_pi * u1 / (u * u)
                + Complex64::new(4.0f64.ln() - 2.0 * crate::special::EULER_GAMMA, 0.0);
            -exponent.exp()
        }
    })
}

/// The 1D eigenvalue enclosure |λ|^{1/2} ≤ ½‖V‖₁, with ‖V‖₁ evaluated by
/// quadrature of the given order.
pub fn davies_enclosure_check(
    lambda: Complex64,
    v: &Potential,
    order: usize,
) -> Result<bool, AsymptoticsError> {
    if v.dimension() != Dim::One {
        return Err(AsymptoticsError::EnclosureDimension);
    }
    let norm1 = v.one_norm(order)?;
    Ok(lambda.norm().sqrt() <= 0.5 * norm1)
}
