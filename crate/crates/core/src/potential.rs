//! Potential models on compact support boxes and their moment functionals:
//! the mass U = ∫V, the kernel-weighted second moment U₁, the Rollnik-type
//! double integral, and the α* threshold for the built-in V(α) family.
//!
//! All potentials are complex-valued, bounded, and treated as identically
//! zero outside their support box. The catalog covers the regimes the
//! classifiers exercise: 1D/2D boxes, truncated Gaussians, complex box
//! mixtures, sampled grids, and the 2D V(α) = α·ReV + i·ImV family with
//! ∫ImV = 0.

use crate::geom::{Dim, GeomError, Point, SupportBox};
use crate::quadrature::{
    gauss_rule, singular_double_integral, QuadratureError, QuadratureRule, SingularKernel,
};
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

/// Failures of moment computations and potential construction.
#[derive(Debug, Error)]
pub enum PotentialError {
    /// The quadrature rule's box must cover the potential's support.
    #[error("rule domain {rule_domain:?} does not cover the potential support {support:?}")]
    RuleDoesNotCoverSupport {
        rule_domain: SupportBox,
        support: SupportBox,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    /// Constructor parameter out of range (width, sigma, grid shape, …).
    #[error("invalid potential parameter: {0}")]
    InvalidParameter(String),
    /// alpha_star needs a balanced imaginary part: ∫ImV = 0 within tolerance.
    #[error(
        "alpha_star requires integral of Im V to vanish: measured {measured:e}, tolerance {tolerance:e}"
    )]
    ImaginaryPartNotBalanced { measured: f64, tolerance: f64 },
    /// alpha_star needs positive real mass ∫ReV > 0.
    #[error("alpha_star requires integral of Re V > 0: measured {measured:e}")]
    NonpositiveRealMass { measured: f64 },
    /// alpha_star is a two-dimensional notion.
    #[error("alpha_star requires two-dimensional potentials, got dimension {got}")]
    AlphaStarDimension { got: Dim },
}

/// A complex-valued potential with compact support.
///
/// `evaluate` returns the value inside the support box and exactly 0
/// outside; constructors guarantee finite values on the box.
#[derive(Clone)]
pub struct Potential {
    dim: Dim,
    support: SupportBox,
    label: String,
    eval: Arc<dyn Fn(Point) -> Complex64 + Send + Sync>,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("support", &self.support)
            .finish()
    }
}

impl Potential {
    /// Wraps an arbitrary bounded evaluation closure. The closure is only
    /// consulted inside `support`; outside, the potential is 0.
    pub fn from_fn<F>(support: SupportBox, label: impl Into<String>, eval: F) -> Potential
    where
        F: Fn(Point) -> Complex64 + Send + Sync + 'static,
    {
        Potential {
            dim: support.dim(),
            support,
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn dimension(&self) -> Dim {
        self.dim
    }

    pub fn support(&self) -> &SupportBox {
        &self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// V(p), with the zero extension outside the support box.
    pub fn evaluate(&self, p: Point) -> Complex64 {
        if self.support.contains(p) {
            (self.eval)(p)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// The potential c·V with the same support.
    pub fn scaled(&self, c: Complex64) -> Potential {
        let inner = Arc::clone(&self.eval);
        Potential {
            dim: self.dim,
            support: self.support,
            label: format!("{} * ({c})", self.label),
            eval: Arc::new(move |p| inner(p) * c),
        }
    }

    /// ‖V‖₁ = ∫|V| by Gauss–Legendre quadrature of the given order.
    pub fn one_norm(&self, order: usize) -> Result<f64, PotentialError> {
        let rule = gauss_rule(order, self.support)?;
        Ok(rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&p, &w)| self.evaluate(p).norm() * w)
            .sum())
    }

    // ---- catalog -----------------------------------------------------------

    /// 1D box: V = height on [a, b].
    pub fn box_1d(height: Complex64, a: f64, b: f64) -> Result<Potential, PotentialError> {
        let support = SupportBox::interval(a, b)?;
        Ok(Potential::from_fn(
            support,
            format!("box_1d[{a},{b}] h={height}"),
            move |_| height,
        ))
    }

    /// 1D Gaussian A·exp(−(x−c)²/(2σ²)), truncated at 8σ. The discarded
    /// tail mass is ~1.2·10⁻¹⁵ of the total — below double rounding.
    pub fn gaussian_1d(
        amplitude: Complex64,
        center: f64,
        sigma: f64,
    ) -> Result<Potential, PotentialError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(PotentialError::InvalidParameter(format!(
                "gaussian sigma must be positive, got {sigma}"
            )));
        }
        let support = SupportBox::interval(center - 8.0 * sigma, center + 8.0 * sigma)?;
        Ok(Potential::from_fn(
            support,
            format!("gaussian_1d c={center} sigma={sigma}"),
            move |p| {
                let t = (p.coord(0) - center) / sigma;
                amplitude * (-0.5 * t * t).exp()
            },
        ))
    }

    /// 1D sum of boxes with complex heights; support is the hull of the
    /// pieces. Overlapping pieces add.
    pub fn complex_box_1d(pieces: &[(f64, f64, Complex64)]) -> Result<Potential, PotentialError> {
        if pieces.is_empty() {
            return Err(PotentialError::InvalidParameter(
                "complex_box_1d needs at least one piece".into(),
            ));
        }
        for &(a, b, _) in pieces {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(PotentialError::InvalidParameter(format!(
                    "complex_box_1d piece [{a},{b}] is degenerate"
                )));
            }
        }
        let lo = pieces.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = pieces.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let support = SupportBox::interval(lo, hi)?;
        let pieces: Vec<(f64, f64, Complex64)> = pieces.to_vec();
        Ok(Potential::from_fn(
            support,
            format!("complex_box_1d ({} pieces)", pieces.len()),
            move |p| {
                let x = p.coord(0);
                pieces
                    .iter()
                    .filter(|&&(a, b, _)| a <= x && x <= b)
                    .map(|&(_, _, h)| h)
                    .sum()
            },
        ))
    }

    /// 2D box: V = height on [lo₀, hi₀] × [lo₁, hi₁].
    pub fn box_2d(
        height: Complex64,
        lo: [f64; 2],
        hi: [f64; 2],
    ) -> Result<Potential, PotentialError> {
        let support = SupportBox::rectangle(lo, hi)?;
        Ok(Potential::from_fn(
            support,
            format!("box_2d h={height}"),
            move |_| height,
        ))
    }

    /// 2D isotropic Gaussian A·exp(−|x−c|²/(2σ²)), truncated at 8σ per axis.
    pub fn gaussian_2d(
        amplitude: Complex64,
        center: [f64; 2],
        sigma: f64,
    ) -> Result<Potential, PotentialError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(PotentialError::InvalidParameter(format!(
                "gaussian sigma must be positive, got {sigma}"
            )));
        }
        let support = SupportBox::rectangle(
            [center[0] - 8.0 * sigma, center[1] - 8.0 * sigma],
            [center[0] + 8.0 * sigma, center[1] + 8.0 * sigma],
        )?;
        Ok(Potential::from_fn(
            support,
            format!("gaussian_2d c=({},{}) sigma={sigma}", center[0], center[1]),
            move |p| {
                let dx = (p.coord(0) - center[0]) / sigma;
                let dy = (p.coord(1) - center[1]) / sigma;
                amplitude * (-0.5 * (dx * dx + dy * dy)).exp()
            },
        ))
    }

    /// The 2D family V(α) = α + i·cos(2π x₁) on [0, 1]².
    ///
    /// The cosine profile integrates to zero (so U(α) = α) but has a
    /// nonvanishing cross integral against log|x − y|, which is what makes
    /// the α* threshold strictly positive for this family.
    pub fn v_alpha(alpha: f64) -> Potential {
        let (re_v, im_v) = Potential::v_alpha_parts();
        let support = *re_v.support();
        Potential::from_fn(support, format!("v_alpha alpha={alpha}"), move |p| {
            re_v.evaluate(p) * alpha + Complex64::new(0.0, 1.0) * im_v.evaluate(p)
        })
    }

    /// The (ReV, ImV) parts of the V(α) family: ReV ≡ 1 and
    /// ImV = cos(2π x₁) on [0, 1]².
    pub fn v_alpha_parts() -> (Potential, Potential) {
        let support = SupportBox::rectangle([0.0, 0.0], [1.0, 1.0])
            .expect("unit square is non-degenerate");
        let re_v = Potential::from_fn(support, "v_alpha_re", |_| Complex64::new(1.0, 0.0));
        let im_v = Potential::from_fn(support, "v_alpha_im", |p| {
            Complex64::new((2.0 * std::f64::consts::PI * p.coord(0)).cos(), 0.0)
        });
        (re_v, im_v)
    }

    /// Piecewise-constant potential from sampled cell values.
    ///
    /// `values` is laid out x-major: index = ix·ny + iy, with `ny = 1` in
    /// one dimension. Each cell of the uniform nx × ny grid over the
    /// support carries one constant complex value.
    pub fn from_grid(
        support: SupportBox,
        nx: usize,
        ny: usize,
        values: Vec<Complex64>,
    ) -> Result<Potential, PotentialError> {
        if nx == 0 || ny == 0 || nx.checked_mul(ny) != Some(values.len()) {
            return Err(PotentialError::InvalidParameter(format!(
                "grid shape {nx}x{ny} does not match {} values",
                values.len()
            )));
        }
        if support.dim() == Dim::One && ny != 1 {
            return Err(PotentialError::InvalidParameter(format!(
                "one-dimensional grid must have ny = 1, got {ny}"
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(PotentialError::InvalidParameter(
                "grid values must be finite".into(),
            ));
        }
        Ok(Potential::from_fn(
            support,
            format!("grid {nx}x{ny}"),
            move |p| {
                let cell = |axis: usize, n: usize| -> usize {
                    let lo = support.lo()[axis];
                    let t = (p.coord(axis) - lo) / support.extent(axis);
                    ((t * n as f64) as usize).min(n - 1)
                };
                let ix = cell(0, nx);
                let iy = if support.dim() == Dim::Two { cell(1, ny) } else { 0 };
                values[ix * ny + iy]
            },
        ))
    }
}

/// Moments of a potential: U = ∫V, the kernel-weighted U₁, and the
/// Rollnik-type integral, with rule metadata and error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub u: Complex64,
    pub u1: Complex64,
    /// ∬|V(x)| |μ(x−y)|² |V(y)| ≥ 0.
    pub rollnik: f64,
    pub rule_order: usize,
    /// Refinement-based error estimates for (U, U₁).
    pub error_estimates: (f64, f64),
}

fn check_cover(v: &Potential, rule: &QuadratureRule) -> Result<(), PotentialError> {
    if rule.domain().covers(v.support()) {
        Ok(())
    } else {
        Err(PotentialError::RuleDoesNotCoverSupport {
            rule_domain: *rule.domain(),
            support: *v.support(),
        })
    }
}

/// Kernel weight μ^{(d)}: ½|x| on the line, (2π)⁻¹ log|x| in the plane.
/// This is the scalar prefactor applied to the raw |·| / log|·| kernels.
fn mu_prefactor(d: Dim) -> f64 {
    match d {
        Dim::One => 0.5,
        Dim::Two => 1.0 / (2.0 * std::f64::consts::PI),
    }
}

/// U = ∫V by plain quadrature.
pub fn compute_u(v: &Potential, rule: &QuadratureRule) -> Result<Complex64, PotentialError> {
    check_cover(v, rule)?;
    Ok(rule.integrate(|p| v.evaluate(p)))
}

/// U₁ = ∬ V(x) μ(x−y) V(y), via the singular double-integral machinery.
pub fn compute_u1(v: &Potential, rule: &QuadratureRule) -> Result<Complex64, PotentialError> {
    Ok(compute_u1_with_estimate(v, rule)?.0)
}

fn compute_u1_with_estimate(
    v: &Potential,
    rule: &QuadratureRule,
) -> Result<(Complex64, f64), PotentialError> {
    check_cover(v, rule)?;
    let kernel = match v.dimension() {
        Dim::One => SingularKernel::Abs,
        Dim::Two => SingularKernel::Log,
    };
    let factor = mu_prefactor(v.dimension());
    let est = singular_double_integral(
        |p| v.evaluate(p),
        |p| v.evaluate(p),
        kernel,
        rule,
    )?;
    Ok((est.value * factor, est.error_estimate * factor))
}

/// Rollnik-type integral ∬ |V(x)| |μ(x−y)|² |V(y)|.
///
/// On the line |μ|² = ¼(x−y)² is polynomial, so the double integral reduces
/// exactly to the absolute moments m_k = ∫|V|x^k:
/// value = (m₀m₂ − m₁²)/2. In the plane the kernel log²|x−y| is integrably
/// singular; it is integrated on a pair of Gauss grids of *different*
/// orders, whose nodes never coincide, dodging the diagonal entirely.
pub fn rollnik_value(v: &Potential, rule: &QuadratureRule) -> Result<f64, PotentialError> {
    check_cover(v, rule)?;
    match v.dimension() {
        Dim::One => {
            let m = |k: i32| -> f64 {
                rule.nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(|(&p, &w)| v.evaluate(p).norm() * p.coord(0).powi(k) * w)
                    .sum()
            };
            Ok((m(0) * m(2) - m(1) * m(1)) / 2.0)
        }
        Dim::Two => {
            let support = *v.support();
            let once = |order: usize| -> Result<f64, PotentialError> {
                let rx = gauss_rule(order, support)?;
                let ry = gauss_rule(order + 1, support)?;
                let vx: Vec<f64> = rx.nodes().iter().map(|&p| v.evaluate(p).norm()).collect();
                let vy: Vec<f64> = ry.nodes().iter().map(|&p| v.evaluate(p).norm()).collect();
                let mut total = 0.0;
                for (i, (&xi, &wi)) in rx.nodes().iter().zip(rx.weights()).enumerate() {
                    if vx[i] == 0.0 {
                        continue;
                    }
                    let mut inner = 0.0;
                    for (j, (&yj, &wj)) in ry.nodes().iter().zip(ry.weights()).enumerate() {
                        let l = xi.dist(yj).ln();
                        inner += vy[j] * l * l * wj;
                    }
                    total += vx[i] * inner * wi;
                }
                let f = mu_prefactor(Dim::Two);
                Ok(total * f * f)
            };
            // The offset-grid scheme converges slowly near the diagonal, so
            // evaluate at twice the requested order.
            once(2 * rule.order())
        }
    }
}

/// All moments plus refinement-based error estimates in one pass.
pub fn moments(v: &Potential, rule: &QuadratureRule) -> Result<Moments, PotentialError> {
    check_cover(v, rule)?;
    let u_coarse = rule.integrate(|p| v.evaluate(p));
    let fine_rule = rule.refined()?;
    let u = fine_rule.integrate(|p| v.evaluate(p));
    let (u1, u1_estimate) = compute_u1_with_estimate(v, rule)?;
    let rollnik = rollnik_value(v, rule)?;
    Ok(Moments {
        u,
        u1,
        rollnik,
        rule_order: rule.order(),
        error_estimates: ((u - u_coarse).norm(), u1_estimate),
    })
}

/// α* threshold for a 2D potential split V = ReV + i·ImV with balanced
/// imaginary part:
/// α* = (4 / (π (ReU)²)) · |∬ ReV(x) log|x−y| ImV(y)|.
pub fn alpha_star(
    re_v: &Potential,
    im_v: &Potential,
    rule: &QuadratureRule,
) -> Result<f64, PotentialError> {
    if re_v.dimension() != Dim::Two {
        return Err(PotentialError::AlphaStarDimension {
            got: re_v.dimension(),
        });
    }
    if im_v.dimension() != Dim::Two {
        return Err(PotentialError::AlphaStarDimension {
            got: im_v.dimension(),
        });
    }
    check_cover(re_v, rule)?;
    check_cover(im_v, rule)?;
    let im_mass = compute_u(im_v, rule)?;
    let im_abs: f64 = rule.integrate(|p| Complex64::new(im_v.evaluate(p).norm(), 0.0)).re;
    let tolerance = 1e-10 * im_abs;
    if im_mass.norm() > tolerance {
        return Err(PotentialError::ImaginaryPartNotBalanced {
            measured: im_mass.norm(),
            tolerance,
        });
    }
    let re_mass = compute_u(re_v, rule)?.re;
    if !(re_mass > 0.0) {
        return Err(PotentialError::NonpositiveRealMass { measured: re_mass });
    }
    let cross = singular_double_integral(
        |p| re_v.evaluate(p),
        |p| im_v.evaluate(p),
        SingularKernel::Log,
        rule,
    )?;
    Ok(4.0 / (std::f64::consts::PI * re_mass * re_mass) * cross.value.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_box_1d() -> Potential {
        Potential::box_1d(c(1.0, 0.0), 0.0, 1.0).unwrap()
    }

    fn rule_for(v: &Potential, order: usize) -> QuadratureRule {
        gauss_rule(order, *v.support()).unwrap()
    }

    #[test]
    fn box_potential_moments_are_analytic() {
        let v = unit_box_1d();
        let rule = rule_for(&v, 40);
        let u = compute_u(&v, &rule).unwrap();
        assert!((u - c(1.0, 0.0)).norm() < 1e-12);
        let u1 = compute_u1(&v, &rule).unwrap();
        assert!((u1 - c(1.0 / 6.0, 0.0)).norm() < 1e-8);
        let rk = rollnik_value(&v, &rule).unwrap();
        assert!((rk - 1.0 / 24.0).abs() < 1e-8);
    }

    #[test]
    fn zero_potential_has_zero_moments() {
        let v = Potential::box_1d(c(0.0, 0.0), 0.0, 1.0).unwrap();
        let rule = rule_for(&v, 16);
        assert_eq!(compute_u(&v, &rule).unwrap(), c(0.0, 0.0));
        assert_eq!(rollnik_value(&v, &rule).unwrap(), 0.0);
    }

    #[test]
    fn moments_scale_correctly() {
        let v = unit_box_1d();
        let s = c(2.0, -1.5);
        let vs = v.scaled(s);
        let rule = rule_for(&v, 24);
        let u = compute_u(&v, &rule).unwrap();
        let us = compute_u(&vs, &rule).unwrap();
        assert!((us - u * s).norm() <= 1e-12 * u.norm() * s.norm());
        let u1 = compute_u1(&v, &rule).unwrap();
        let u1s = compute_u1(&vs, &rule).unwrap();
        assert!((u1s - u1 * s * s).norm() <= 1e-12 * (u1 * s * s).norm());
        let rk = rollnik_value(&v, &rule).unwrap();
        let rks = rollnik_value(&vs, &rule).unwrap();
        assert!((rks - rk * s.norm() * s.norm()).abs() <= 1e-12 * rks);
    }

    #[test]
    fn gaussian_mass_matches_closed_form() {
        let sigma = 0.5;
        let v = Potential::gaussian_1d(c(1.0, 0.0), 0.25, sigma).unwrap();
        let rule = rule_for(&v, 64);
        let u = compute_u(&v, &rule).unwrap();
        let expected = sigma * (2.0 * std::f64::consts::PI).sqrt();
        assert!((u.re - expected).abs() < 1e-13 * expected);
        assert!(u.im.abs() < 1e-15);
    }

    #[test]
    fn nonnegative_potential_has_positive_u1() {
        for v in [
            unit_box_1d(),
            Potential::gaussian_1d(c(1.0, 0.0), 0.0, 0.3).unwrap(),
        ] {
            let rule = rule_for(&v, 48);
            let u1 = compute_u1(&v, &rule).unwrap();
            assert!(u1.re > 0.0);
            assert!(u1.im.abs() < 1e-12);
        }
    }

    #[test]
    fn unit_square_box_u1_matches_closed_form() {
        // ∬ log|x−y| over [0,1]⁴ = log2/3 + π/3 − 25/12; divide by 2π.
        let expected = -0.1281335314160066839524;
        let v = Potential::box_2d(c(1.0, 0.0), [0.0, 0.0], [1.0, 1.0]).unwrap();
        let rule = rule_for(&v, 16);
        let u1 = compute_u1(&v, &rule).unwrap();
        assert!((u1.re - expected).abs() < 1e-8, "u1 = {}", u1.re);
        assert!(u1.im.abs() < 1e-14);
    }

    #[test]
    fn complex_box_mixture_accumulates_pieces() {
        let v = Potential::complex_box_1d(&[
            (0.0, 1.0, c(1.0, 0.0)),
            (0.5, 1.5, c(0.0, 2.0)),
        ])
        .unwrap();
        let rule = rule_for(&v, 64);
        let u = compute_u(&v, &rule).unwrap();
        // A global rule across the jump points is jump-limited in accuracy;
        // the mass must still land near 1·1 + 2i·1.
        assert!((u - c(1.0, 2.0)).norm() < 2e-2);
        assert_eq!(v.evaluate(Point::one_d(0.75)), c(1.0, 2.0));
        assert_eq!(v.evaluate(Point::one_d(0.25)), c(1.0, 0.0));
        assert_eq!(v.evaluate(Point::one_d(1.25)), c(0.0, 2.0));
        assert_eq!(v.evaluate(Point::one_d(2.0)), c(0.0, 0.0));
    }

    #[test]
    fn grid_potential_reproduces_box() {
        let support = SupportBox::interval(0.0, 1.0).unwrap();
        let v = Potential::from_grid(support, 4, 1, vec![c(2.0, 1.0); 4]).unwrap();
        let rule = rule_for(&v, 16);
        assert!((compute_u(&v, &rule).unwrap() - c(2.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn v_alpha_mass_is_alpha_times_real_mass() {
        let alpha = 0.37;
        let v = Potential::v_alpha(alpha);
        let rule = rule_for(&v, 24);
        let u = compute_u(&v, &rule).unwrap();
        assert!((u.re - alpha).abs() < 1e-12);
        assert!(u.im.abs() < 1e-12); // the cosine profile is balanced
    }

    #[test]
    fn alpha_star_of_the_builtin_family() {
        // Cross integral ∬ log|x−y| cos(2π y₁) over [0,1]⁴, frozen from an
        // order-96 subtraction run (stable to 5·10⁻¹³ between orders 64/96).
        let j = 0.0742915856370668;
        let expected = 4.0 / std::f64::consts::PI * j;
        let (re_v, im_v) = Potential::v_alpha_parts();
        let rule = gauss_rule(24, *re_v.support()).unwrap();
        let a = alpha_star(&re_v, &im_v, &rule).unwrap();
        assert!((a - expected).abs() < 1e-6, "alpha* = {a}, expected {expected}");
    }

    #[test]
    fn alpha_star_degenerate_and_scaling_cases() {
        let (re_v, im_v) = Potential::v_alpha_parts();
        let rule = gauss_rule(20, *re_v.support()).unwrap();
        // ImV ≡ 0 → α* = 0.
        let zero_im = Potential::box_2d(c(0.0, 0.0), [0.0, 0.0], [1.0, 1.0]).unwrap();
        assert_eq!(alpha_star(&re_v, &zero_im, &rule).unwrap(), 0.0);
        // Scaling ImV by c scales α* by |c|.
        let a = alpha_star(&re_v, &im_v, &rule).unwrap();
        let a3 = alpha_star(&re_v, &im_v.scaled(c(-3.0, 0.0)), &rule).unwrap();
        assert!((a3 - 3.0 * a).abs() < 1e-10 * a3);
    }

    #[test]
    fn alpha_star_antisymmetric_sign_profile_is_structured_zero() {
        // ImV = sign(x₁ − ½) is balanced, but the cross integral vanishes
        // by the joint reflection x₁ → 1−x₁, y₁ → 1−y₁; the threshold
        // collapses to zero for this profile.
        let support = SupportBox::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap();
        let re_v = Potential::box_2d(c(1.0, 0.0), [0.0, 0.0], [1.0, 1.0]).unwrap();
        let im_v = Potential::from_fn(support, "sign profile", |p| {
            Complex64::new(if p.coord(0) < 0.5 { -1.0 } else { 1.0 }, 0.0)
        });
        let rule = gauss_rule(24, support).unwrap();
        let a = alpha_star(&re_v, &im_v, &rule).unwrap();
        assert!(a.abs() < 1e-6, "alpha* = {a}");
    }

    #[test]
    fn alpha_star_precondition_failures_report_measurements() {
        let rule = gauss_rule(12, SupportBox::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap()).unwrap();
        let re_v = Potential::box_2d(c(1.0, 0.0), [0.0, 0.0], [1.0, 1.0]).unwrap();
        let unbalanced = Potential::box_2d(c(1.0, 0.0), [0.0, 0.0], [1.0, 1.0]).unwrap();
        assert!(matches!(
            alpha_star(&re_v, &unbalanced, &rule),
            Err(PotentialError::ImaginaryPartNotBalanced { .. })
        ));
        let negative = Potential::box_2d(c(-1.0, 0.0), [0.0, 0.0], [1.0, 1.0]).unwrap();
        let (_, im_v) = Potential::v_alpha_parts();
        assert!(matches!(
            alpha_star(&negative, &im_v, &rule),
            Err(PotentialError::NonpositiveRealMass { .. })
        ));
    }

    #[test]
    fn rule_must_cover_the_support() {
        let v = unit_box_1d();
        let small = gauss_rule(8, SupportBox::interval(0.0, 0.5).unwrap()).unwrap();
        assert!(matches!(
            compute_u(&v, &small),
            Err(PotentialError::RuleDoesNotCoverSupport { .. })
        ));
    }

    #[test]
    fn u1_bounded_by_mass_and_rollnik() {
        // Pointwise t ≤ 1 + t² applied to |μ| gives |U₁| ≤ ‖V‖₁² + rollnik.
        let potentials = [
            unit_box_1d(),
            Potential::gaussian_1d(c(1.0, -0.5), 0.0, 0.4).unwrap(),
            Potential::complex_box_1d(&[(0.0, 1.0, c(1.0, 1.0)), (0.25, 0.5, c(-0.5, 0.0))])
                .unwrap(),
            Potential::box_2d(c(1.0, 0.3), [0.0, 0.0], [1.0, 1.0]).unwrap(),
            Potential::gaussian_2d(c(1.0, 0.0), [0.0, 0.0], 0.5).unwrap(),
            Potential::v_alpha(0.5),
        ];
        for v in &potentials {
            let order = if v.dimension() == Dim::One { 48 } else { 12 };
            let rule = rule_for(v, order);
            let m = moments(v, &rule).unwrap();
            let norm1 = v.one_norm(2 * order).unwrap();
            assert!(m.rollnik >= 0.0);
            assert!(
                m.u1.norm() <= norm1 * norm1 + m.rollnik + 1e-8,
                "chain violated for {}: |U1|={} bound={}",
                v.label(),
                m.u1.norm(),
                norm1 * norm1 + m.rollnik
            );
        }
    }

    #[test]
    fn moments_error_estimates_are_small_for_smooth_data() {
        let v = Potential::gaussian_1d(c(1.0, 0.0), 0.0, 0.5).unwrap();
        let rule = rule_for(&v, 48);
        let m = moments(&v, &rule).unwrap();
        assert!(m.error_estimates.0 < 1e-12);
        assert!(m.error_estimates.1 < 1e-8);
        assert_eq!(m.rule_order, 48);
    }
}
