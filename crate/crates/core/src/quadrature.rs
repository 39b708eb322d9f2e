//! Deterministic Gauss–Legendre quadrature in one and two dimensions,
//! including double integrals against the weakly singular kernels |x − y|
//! and log|x − y|.
//!
//! The two singular kernels get dedicated treatment:
//!
//! * `|x − y|` (1D) is continuous but has a kink on the diagonal, so the
//!   inner integral is split into panels at y = x and each panel is
//!   integrated with a mapped rule, restoring spectral accuracy.
//! * `log|x − y|` (2D) is integrably singular; the integral is evaluated by
//!   singularity subtraction: the difference `g(y) − g(x)` kills the
//!   singularity in the numeric part, and the subtracted mass is added back
//!   through the analytically integrated log-potential of the rectangle
//!   ([`log_potential_rectangle`]).
//!
//! All singular double integrals return a Richardson-style error estimate
//! obtained from one refinement (doubling) of the rule order.

use crate::geom::{Dim, GeomError, Point, SupportBox};
use num_complex::Complex64;
use thiserror::Error;

/// Quadrature failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    /// Invalid integration domain.
    #[error(transparent)]
    Geom(#[from] GeomError),
    /// Rule order must be at least 1.
    #[error("quadrature order must be >= 1, got {order}")]
    InvalidOrder { order: usize },
    /// Kernel/rule dimension mismatch (|x−y| is the 1D kernel, log|x−y| the 2D one).
    #[error("kernel {kernel:?} applies in dimension {expected}, but the rule is {got}-dimensional")]
    KernelDimension {
        kernel: SingularKernel,
        expected: Dim,
        got: Dim,
    },
    /// A field sample came back NaN or infinite.
    #[error("non-finite field sample {value} at point {point:?}")]
    NonFiniteSample { value: Complex64, point: Point },
}

/// Weakly singular convolution kernels κ(x − y) supported by
/// [`singular_double_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularKernel {
    /// κ(r) = |r|, the 1D kernel.
    Abs,
    /// κ(r) = log|r|, the 2D kernel.
    Log,
}

impl SingularKernel {
    fn dim(self) -> Dim {
        match self {
            SingularKernel::Abs => Dim::One,
            SingularKernel::Log => Dim::Two,
        }
    }
}

/// A quadrature value together with a Richardson error estimate from one
/// rule refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    /// Value at the refined (doubled) order.
    pub value: Complex64,
    /// |refined − unrefined|, an a-posteriori error indicator.
    pub error_estimate: f64,
}

/// Gauss–Legendre nodes and weights mapped to an axis-aligned box; a tensor
/// product of 1D rules in two dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    domain: SupportBox,
    order: usize,
    nodes: Vec<Point>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn domain(&self) -> &SupportBox {
        &self.domain
    }

    /// Per-axis 1D order (total node count is `order` in 1D, `order²` in 2D).
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Plain quadrature of a smooth integrand over the rule's box.
    pub fn integrate<F: Fn(Point) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| f(p) * w)
            .sum()
    }

    /// Same rule family at double the per-axis order (the "one refinement"
    /// used for error estimates).
    pub fn refined(&self) -> Result<QuadratureRule, QuadratureError> {
        gauss_rule(2 * self.order, self.domain)
    }

    /// Samples a field at all nodes, rejecting non-finite values.
    fn sample<F: Fn(Point) -> Complex64>(&self, f: F) -> Result<Vec<Complex64>, QuadratureError> {
        self.nodes
            .iter()
            .map(|&p| {
                let v = f(p);
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(QuadratureError::NonFiniteSample { value: v, point: p })
                }
            })
            .collect()
    }
}

/// Gauss–Legendre nodes and weights on the reference interval [−1, 1],
/// found by Newton iteration on the Legendre recurrence.
fn legendre_reference(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess (roots indexed from the right).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // Three-term recurrence gives P_n in p1, P_{n−1} in p0.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // Order ascending for reproducible layouts.
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Maps the reference rule to an interval `[a, b]`.
fn mapped_1d(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = legendre_reference(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        xs.iter().map(|&x| mid + half * x).collect(),
        ws.iter().map(|&w| w * half).collect(),
    )
}

/// Builds a Gauss–Legendre rule of the given per-axis order on a box.
pub fn gauss_rule(order: usize, domain: SupportBox) -> Result<QuadratureRule, QuadratureError> {
    if order < 1 {
        return Err(QuadratureError::InvalidOrder { order });
    }
    let (nodes, weights) = match domain.dim() {
        Dim::One => {
            let (xs, ws) = mapped_1d(order, domain.lo()[0], domain.hi()[0]);
            (
                xs.iter().map(|&x| Point::one_d(x)).collect::<Vec<_>>(),
                ws,
            )
        }
        Dim::Two => {
            let (xs, wxs) = mapped_1d(order, domain.lo()[0], domain.hi()[0]);
            let (ys, wys) = mapped_1d(order, domain.lo()[1], domain.hi()[1]);
            let mut nodes = Vec::with_capacity(order * order);
            let mut weights = Vec::with_capacity(order * order);
            for (x, wx) in xs.iter().zip(&wxs) {
                for (y, wy) in ys.iter().zip(&wys) {
                    nodes.push(Point::two_d(*x, *y));
                    weights.push(wx * wy);
                }
            }
            (nodes, weights)
        }
    };
    Ok(QuadratureRule {
        domain,
        order,
        nodes,
        weights,
    })
}

/// ∫ over the rule's box of log|p − y| dy, in closed form.
///
/// Uses the iterated antiderivative
/// I(X, Y) = XY·log(X² + Y²)/2 − (3/2)XY + (X²/2)·atan(Y/X) + (Y²/2)·atan(X/Y)
/// evaluated at the four corners relative to `p`; `I` is odd in each
/// argument, so the corner combination is valid whether `p` lies inside or
/// outside the rectangle.
pub fn log_potential_rectangle(p: Point, domain: &SupportBox) -> f64 {
    fn anti(x: f64, y: f64) -> f64 {
        if x == 0.0 || y == 0.0 {
            return 0.0;
        }
        0.5 * x * y * (x * x + y * y).ln() - 1.5 * x * y
            + 0.5 * x * x * (y / x).atan()
            + 0.5 * y * y * (x / y).atan()
    }
    let (px, py) = (p.coord(0), p.coord(1));
    let [ax, ay] = domain.lo();
    let [bx, by] = domain.hi();
    anti(bx - px, by - py) - anti(ax - px, by - py) - anti(bx - px, ay - py)
        + anti(ax - px, ay - py)
}

/// ∬ f(x)·κ(x − y)·g(y) d(x, y) over the rule's box, κ = |·| or log|·|.
///
/// Returns the refined-rule value together with the difference between the
/// refined and unrefined evaluations as an error estimate.
pub fn singular_double_integral<F, G>(
    f: F,
    g: G,
    kernel: SingularKernel,
    rule: &QuadratureRule,
) -> Result<IntegralEstimate, QuadratureError>
where
    F: Fn(Point) -> Complex64,
    G: Fn(Point) -> Complex64,
{
    if kernel.dim() != rule.domain().dim() {
        return Err(QuadratureError::KernelDimension {
            kernel,
            expected: kernel.dim(),
            got: rule.domain().dim(),
        });
    }
    let coarse = singular_double_integral_once(&f, &g, kernel, rule)?;
    let fine_rule = rule.refined()?;
    let fine = singular_double_integral_once(&f, &g, kernel, &fine_rule)?;
    Ok(IntegralEstimate {
        value: fine,
        error_estimate: (fine - coarse).norm(),
    })
}

fn singular_double_integral_once<F, G>(
    f: &F,
    g: &G,
    kernel: SingularKernel,
    rule: &QuadratureRule,
) -> Result<Complex64, QuadratureError>
where
    F: Fn(Point) -> Complex64,
    G: Fn(Point) -> Complex64,
{
    match kernel {
        SingularKernel::Abs => abs_kernel_integral(f, g, rule),
        SingularKernel::Log => log_kernel_integral(f, g, rule),
    }
}

/// d = 1: outer quadrature in x; the inner ∫|x − y| g(y) dy is split into
/// the panels [a, x] and [x, b] so each integrand is smooth.
fn abs_kernel_integral<F, G>(f: &F, g: &G, rule: &QuadratureRule) -> Result<Complex64, QuadratureError>
where
    F: Fn(Point) -> Complex64,
    G: Fn(Point) -> Complex64,
{
    let a = rule.domain().lo()[0];
    let b = rule.domain().hi()[0];
    let order = rule.order();
    let (ref_nodes, ref_weights) = legendre_reference(order);
    let f_samples = rule.sample(f)?;

    let panel = |lo: f64, hi: f64, x: f64| -> Result<Complex64, QuadratureError> {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (lo + hi);
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, w) in ref_nodes.iter().zip(&ref_weights) {
            let y = mid + half * t;
            let gy = g(Point::one_d(y));
            if !(gy.re.is_finite() && gy.im.is_finite()) {
                return Err(QuadratureError::NonFiniteSample {
                    value: gy,
                    point: Point::one_d(y),
                });
            }
            acc += gy * ((x - y).abs() * w * half);
        }
        Ok(acc)
    };

    let mut total = Complex64::new(0.0, 0.0);
    for ((node, weight), fx) in rule.nodes().iter().zip(rule.weights()).zip(&f_samples) {
        let x = node.coord(0);
        let inner = panel(a, x, x)? + panel(x, b, x)?;
        total += fx * inner * *weight;
    }
    Ok(total)
}

/// d = 2: singularity subtraction. The numeric part integrates
/// f(x)·(g(y) − g(x))·log|x − y|, which vanishes on the diagonal; the
/// subtracted term is restored as f(x)·g(x)·∫log|x − y| dy in closed form.
fn log_kernel_integral<F, G>(f: &F, g: &G, rule: &QuadratureRule) -> Result<Complex64, QuadratureError>
where
    F: Fn(Point) -> Complex64,
    G: Fn(Point) -> Complex64,
{
    let f_samples = rule.sample(f)?;
    let g_samples = rule.sample(g)?;
    let nodes = rule.nodes();
    let weights = rule.weights();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..nodes.len() {
        let mut inner = Complex64::new(0.0, 0.0);
        for j in 0..nodes.len() {
            if i == j {
                continue; // integrand extends continuously by 0 on the diagonal
            }
            let r = nodes[i].dist(nodes[j]);
            inner += (g_samples[j] - g_samples[i]) * (r.ln() * weights[j]);
        }
        inner += g_samples[i] * log_potential_rectangle(nodes[i], rule.domain());
        total += f_samples[i] * inner * weights[i];
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_interval() -> SupportBox {
        SupportBox::interval(0.0, 1.0).unwrap()
    }

    fn unit_square() -> SupportBox {
        SupportBox::rectangle([0.0, 0.0], [1.0, 1.0]).unwrap()
    }

    #[test]
    fn order_two_reference_rule_is_analytic() {
        let rule = gauss_rule(2, SupportBox::interval(-1.0, 1.0).unwrap()).unwrap();
        let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
        assert!((rule.nodes()[0].coord(0) + inv_sqrt3).abs() < 1e-15);
        assert!((rule.nodes()[1].coord(0) - inv_sqrt3).abs() < 1e-15);
        assert!((rule.weights()[0] - 1.0).abs() < 1e-15);
        assert!((rule.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn order_two_integrates_cubics_exactly() {
        let rule = gauss_rule(2, unit_interval()).unwrap();
        let v = rule.integrate(|p| Complex64::new(p.coord(0).powi(3), 0.0));
        assert!((v.re - 0.25).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn weights_sum_to_box_volume() {
        let rect = SupportBox::rectangle([0.0, 0.0], [2.0, 3.0]).unwrap();
        let rule = gauss_rule(7, rect).unwrap();
        let sum: f64 = rule.weights().iter().sum();
        assert!((sum - 6.0).abs() < 1e-12 * 6.0);
        for order in [1, 3, 16, 33] {
            let r = gauss_rule(order, unit_interval()).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            assert!(r
                .nodes()
                .iter()
                .all(|p| 0.0 < p.coord(0) && p.coord(0) < 1.0));
        }
    }

    #[test]
    fn high_order_rule_integrates_smooth_function() {
        let rule = gauss_rule(24, unit_interval()).unwrap();
        let v = rule.integrate(|p| Complex64::new((p.coord(0)).exp(), 0.0));
        assert!((v.re - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn abs_kernel_unit_fields() {
        // ∬_{[0,1]²} |x − y| = 1/3.
        let rule = gauss_rule(20, unit_interval()).unwrap();
        let one = |_: Point| Complex64::new(1.0, 0.0);
        let est = singular_double_integral(one, one, SingularKernel::Abs, &rule).unwrap();
        assert!((est.value.re - 1.0 / 3.0).abs() < 1e-8);
        assert!(est.value.im.abs() < 1e-15);
        assert!(est.error_estimate < 1e-8);
    }

    #[test]
    fn zero_fields_integrate_to_zero() {
        let rule = gauss_rule(8, unit_interval()).unwrap();
        let zero = |_: Point| Complex64::new(0.0, 0.0);
        let est = singular_double_integral(zero, zero, SingularKernel::Abs, &rule).unwrap();
        assert_eq!(est.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn log_kernel_unit_fields() {
        // ∬_{[0,1]⁴} log|x − y| = (log 2)/3 + π/3 − 25/12 (classical closed form).
        let expected = -0.8050867219500871507067;
        let rule = gauss_rule(16, unit_square()).unwrap();
        let one = |_: Point| Complex64::new(1.0, 0.0);
        let est = singular_double_integral(one, one, SingularKernel::Log, &rule).unwrap();
        assert!(
            (est.value.re - expected).abs() < 1e-10,
            "got {}, expected {expected}",
            est.value.re
        );
        assert!(est.value.im.abs() < 1e-15);
    }

    #[test]
    fn singular_integral_bilinearity_and_symmetry() {
        let rule = gauss_rule(12, unit_interval()).unwrap();
        let f = |p: Point| Complex64::new(p.coord(0), 0.5);
        let g = |p: Point| Complex64::new(1.0 - p.coord(0), -0.25 * p.coord(0));
        let base = singular_double_integral(f, g, SingularKernel::Abs, &rule)
            .unwrap()
            .value;
        let scale = Complex64::new(2.0, -3.0);
        let scaled = singular_double_integral(
            |p| f(p) * scale,
            g,
            SingularKernel::Abs,
            &rule,
        )
        .unwrap()
        .value;
        assert!((scaled - base * scale).norm() < 1e-12 * base.norm());
        let swapped = singular_double_integral(g, f, SingularKernel::Abs, &rule)
            .unwrap()
            .value;
        assert!((swapped - base).norm() < 1e-12 * base.norm());
    }

    #[test]
    fn kernel_dimension_mismatch_rejected() {
        let rule = gauss_rule(4, unit_interval()).unwrap();
        let one = |_: Point| Complex64::new(1.0, 0.0);
        assert!(matches!(
            singular_double_integral(one, one, SingularKernel::Log, &rule),
            Err(QuadratureError::KernelDimension { .. })
        ));
    }

    #[test]
    fn non_finite_samples_rejected() {
        let rule = gauss_rule(4, unit_interval()).unwrap();
        let bad = |_: Point| Complex64::new(f64::NAN, 0.0);
        let one = |_: Point| Complex64::new(1.0, 0.0);
        assert!(matches!(
            singular_double_integral(bad, one, SingularKernel::Abs, &rule),
            Err(QuadratureError::NonFiniteSample { .. })
        ));
    }

    #[test]
    fn log_potential_is_additive_under_domain_splits() {
        let p = Point::two_d(0.5, 0.3);
        let full = log_potential_rectangle(p, &unit_square());
        let left = log_potential_rectangle(
            p,
            &SupportBox::rectangle([0.0, 0.0], [0.5, 1.0]).unwrap(),
        );
        let right = log_potential_rectangle(
            p,
            &SupportBox::rectangle([0.5, 0.0], [1.0, 1.0]).unwrap(),
        );
        assert!((full - (left + right)).abs() < 1e-13);
    }

    #[test]
    fn log_potential_matches_quadrature_for_exterior_point() {
        // For p outside the box the integrand is smooth, so a plain rule
        // must reproduce the closed form.
        let p = Point::two_d(2.0, 1.5);
        let rule = gauss_rule(48, unit_square()).unwrap();
        let numeric = rule
            .integrate(|y| Complex64::new(p.dist(y).ln(), 0.0))
            .re;
        let analytic = log_potential_rectangle(p, &unit_square());
        assert!((numeric - analytic).abs() < 1e-12);
    }

    #[test]
    fn refinement_tightens_the_estimate() {
        let rule = gauss_rule(8, unit_interval()).unwrap();
        let f = |p: Point| Complex64::new((3.0 * p.coord(0)).sin(), 0.0);
        let coarse = singular_double_integral(f, f, SingularKernel::Abs, &rule).unwrap();
        let fine = singular_double_integral(
            f,
            f,
            SingularKernel::Abs,
            &rule.refined().unwrap(),
        )
        .unwrap();
        assert!((fine.value - coarse.value).norm() <= coarse.error_estimate + 1e-14);
    }
}
