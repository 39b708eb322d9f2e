//! The verification engine: Green's kernels, the rank-one-plus-compact
//! splitting Q(z) = L(z) + M(z), Nyström assembly of M, evaluation of f_β
//! and f_β∘Φ, Newton root finding with winding-number certification, and
//! the dense Birman–Schwinger eigenvalue cross-check.
//!
//! The chain of equivalences realized here: −z² is an eigenvalue of
//! −Δ − βV exactly when 1 is an eigenvalue of the compact operator βQ(z)
//! with kernel |V(x)|^{1/2} G(x, y; z) V(y)^{1/2}. Splitting off the
//! constant g(z) of the Green's function leaves Q = L + M with L rank-one,
//! which collapses the eigenvalue problem to a scalar equation
//!
//! f_β(z) = 1 − g(z)·[Uβ + β⟨(1 − βM)⁻¹ βM u, V^{1/2}⟩] = 0,
//!
//! and composing with the bijection Φ : Ω → D(0;½)∩ℂ₊ turns that into root
//! finding for F = f_β∘Φ on the bounded domain Ω, where F(w) ≈
//! 1 − 𝒰(β)/w. At the discrete level the identity
//! det(1 − βQ) = det(1 − βM)·f_β(z) holds *exactly* for the assembled
//! matrices (with U the discrete mass Σ wⱼVⱼ), so a root of the discrete
//! f_β is certified independently by a dense eigenvalue of βQ landing on 1.

use crate::asymptotics::{curly_u, AsymptoticsError};
use crate::geom::{Dim, Point, SupportBox};
use crate::potential::{Potential, PotentialError};
use crate::quadrature::{gauss_rule, log_potential_rectangle, QuadratureError};
use crate::region::{disc_in_omega, g_d, in_omega, phi, DiscPosition, RegionError};
use crate::special::{bessel_k0, exp_m1_complex, SpecialError, LOG2_MINUS_GAMMA};
use crate::{lapack, lapack::EigenError};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Largest matrix the dense eigenvalue cross-check will process
/// (desk-scale runtime: ≤ 400 nodes in 1D, ≤ 40×40 in 2D).
pub const DENSE_EIGEN_CAP: usize = 1600;

/// Failures of the integral-equation layer.
#[derive(Debug, Error)]
pub enum BSError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    /// The 2D kernels are singular at x = y.
    #[error("coincident points (distance 0) are outside the 2D kernel domain")]
    CoincidentPoints,
    /// All kernels require a spectral parameter in the right half-plane.
    #[error("kernel evaluation requires Re z > 0, got z = {z}")]
    NotRightHalfPlane { z: Complex64 },
    /// Discretization arrays must line up.
    #[error("discretization needs equal node/weight/value counts and at least one node; got {nodes}/{weights}/{values}")]
    MismatchedSamples {
        nodes: usize,
        weights: usize,
        values: usize,
    },
    /// Quadrature weights must be positive and finite.
    #[error("weight {weight} at node {index} is not positive and finite")]
    InvalidWeight { index: usize, weight: f64 },
    /// A sample node fell outside the declared support box.
    #[error("node {index} lies outside the declared support box")]
    NodeOutsideSupport { index: usize },
    /// 1 − βM could not be inverted reliably.
    #[error("resolvent 1 - beta*M is numerically singular (norm estimate |beta|*|M| = {norm_beta_m:.3e})")]
    NearSingularResolvent { norm_beta_m: f64 },
    /// Dense eigensolve refused: matrix beyond the desk-scale cap.
    #[error("matrix dimension {n} exceeds the dense-eigensolve cap {cap}")]
    MatrixTooLarge { n: usize, cap: usize },
    /// A winding contour sample left Ω, where f_β∘Φ is undefined.
    #[error("winding contour leaves the domain Omega at w = {w}")]
    ContourLeavesOmega { w: Complex64 },
    /// |f_β∘Φ| nearly vanished on the contour; the argument principle count
    /// would be unreliable.
    #[error("|f| = {min_modulus:.3e} on the winding contour (below the 1e-10 nonvanishing threshold)")]
    NearZeroOnContour { min_modulus: f64 },
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

fn check_z(z: Complex64) -> Result<(), BSError> {
    if z.re > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(BSError::NotRightHalfPlane { z })
    }
}

/// Free resolvent kernel G(x, y; z): e^{−z|x−y|}/(2z) on the line,
/// K₀(z|x−y|)/(2π) in the plane (singular at x = y there).
pub fn green_kernel(x: Point, y: Point, z: Complex64, d: Dim) -> Result<Complex64, BSError> {
    check_z(z)?;
    let r = x.dist(y);
    match d {
        Dim::One => Ok((-z * r).exp() / (2.0 * z)),
        Dim::Two => {
            if r == 0.0 {
                return Err(BSError::CoincidentPoints);
            }
            Ok(bessel_k0(z * r)? / (2.0 * std::f64::consts::PI))
        }
    }
}

/// Comparison kernel h(x, y; z): (2z)⁻¹(1 − z|x−y|) on the line,
/// −(2π)⁻¹(log(z|x−y|) − log 2 + γ) in the plane.
pub fn h_kernel(x: Point, y: Point, z: Complex64, d: Dim) -> Result<Complex64, BSError> {
    check_z(z)?;
    let r = x.dist(y);
    match d {
        Dim::One => Ok((Complex64::new(1.0, 0.0) - z * r) / (2.0 * z)),
        Dim::Two => {
            if r == 0.0 {
                return Err(BSError::CoincidentPoints);
            }
            // −(log(z r) − log 2 + γ)/(2π); log(z r) stays off the cut
            // because Re z > 0 and r > 0.
            Ok(-((z * r).ln() - LOG2_MINUS_GAMMA) / (2.0 * std::f64::consts::PI))
        }
    }
}

/// Reduced M-kernel G(x, y; z) − g(z), evaluated without cancellation.
///
/// The potential factors |V(x)|^{1/2} · V(y)^{1/2} are applied at assembly
/// time ([`assemble_m`]); this function is the analytic core that the
/// kernel-inequality suite exercises. On the line the diagonal value is
/// exactly 0; in the plane the kernel keeps an integrable log singularity
/// and coincident points are rejected (assembly integrates it analytically
/// instead).
pub fn m_kernel(x: Point, y: Point, z: Complex64, d: Dim) -> Result<Complex64, BSError> {
    check_z(z)?;
    let r = x.dist(y);
    match d {
        Dim::One => Ok(exp_m1_complex(-z * r) / (2.0 * z)),
        Dim::Two => {
            if r == 0.0 {
                return Err(BSError::CoincidentPoints);
            }
            Ok((bessel_k0(z * r)? + z.ln()) / (2.0 * std::f64::consts::PI))
        }
    }
}

// ---------------------------------------------------------------------------
// Discretization
// ---------------------------------------------------------------------------

/// Nyström discretization of the Birman–Schwinger data: quadrature nodes
/// and weights, the sampled factors |V|^{1/2} and V^{1/2}, the pairwise
/// distance table, and (in 2D) the z-independent log-singularity
/// corrections for the matrix diagonal.
///
/// The signed square root follows the convention
/// V^{1/2} := V/|V|^{1/2} where V ≠ 0, and 0 where V = 0, so that
/// |V|^{1/2} · V^{1/2} = V holds exactly.
pub struct BSDiscretization {
    d: Dim,
    support: SupportBox,
    nodes: Vec<Point>,
    weights: Vec<f64>,
    v_values: Vec<Complex64>,
    v_abs_sqrt: Vec<f64>,
    v_signed_sqrt: Vec<Complex64>,
    /// Pairwise distances, row-major n×n.
    dist: Vec<f64>,
    /// 2D only: c_i = P_i − Σ_{j≠i} wⱼ ℓ(r_ij) with P_i the analytic box
    /// integral of ℓ; empty in 1D.
    diag_correction: Vec<f64>,
    /// Discrete mass Σ wⱼ Vⱼ.
    u_disc: Complex64,
    /// Discrete kernel-weighted second moment ∬V μ V at the node level.
    u1_disc: Complex64,
}

impl std::fmt::Debug for BSDiscretization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BSDiscretization")
            .field("d", &self.d)
            .field("nodes", &self.nodes.len())
            .field("u_disc", &self.u_disc)
            .field("u1_disc", &self.u1_disc)
            .finish()
    }
}

impl BSDiscretization {
    /// Discretizes a potential on a Gauss–Legendre rule of the given
    /// per-axis order over the potential's support box.
    pub fn from_potential(v: &Potential, order: usize) -> Result<Self, BSError> {
        let rule = gauss_rule(order, *v.support())?;
        let values = rule.nodes().iter().map(|&p| v.evaluate(p)).collect();
        Self::from_samples(
            *v.support(),
            rule.nodes().to_vec(),
            rule.weights().to_vec(),
            values,
        )
    }

    /// Builds a discretization from explicit nodes, weights, and potential
    /// samples (the rank-one oracle and custom grids enter here).
    pub fn from_samples(
        support: SupportBox,
        nodes: Vec<Point>,
        weights: Vec<f64>,
        v_values: Vec<Complex64>,
    ) -> Result<Self, BSError> {
        let n = nodes.len();
        if n == 0 || weights.len() != n || v_values.len() != n {
            return Err(BSError::MismatchedSamples {
                nodes: n,
                weights: weights.len(),
                values: v_values.len(),
            });
        }
        for (index, &weight) in weights.iter().enumerate() {
            if !(weight.is_finite() && weight > 0.0) {
                return Err(BSError::InvalidWeight { index, weight });
            }
        }
        for (index, &p) in nodes.iter().enumerate() {
            if !support.contains(p) {
                return Err(BSError::NodeOutsideSupport { index });
            }
        }
        let d = support.dim();

        let mut dist = vec![0.0f64; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let r = nodes[i].dist(nodes[j]);
                if d == Dim::Two && r == 0.0 {
                    return Err(BSError::CoincidentPoints);
                }
                dist[i * n + j] = r;
                dist[j * n + i] = r;
            }
        }

        let v_abs_sqrt: Vec<f64> = v_values.iter().map(|v| v.norm().sqrt()).collect();
        let v_signed_sqrt: Vec<Complex64> = v_values
            .iter()
            .zip(&v_abs_sqrt)
            .map(|(&v, &a)| {
                if a > 0.0 {
                    v / a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();

        let u_disc: Complex64 = v_values
            .iter()
            .zip(&weights)
            .map(|(&v, &w)| v * w)
            .sum();

        // z-independent log-singularity corrections (2D) and the discrete
        // second moment, both from one O(n²) pass over the distance table.
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut diag_correction = Vec::new();
        let u1_disc = match d {
            Dim::One => {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    let mut inner = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        inner += v_values[j] * (dist[i * n + j] * weights[j]);
                    }
                    acc += v_values[i] * inner * weights[i];
                }
                acc * 0.5
            }
            Dim::Two => {
                diag_correction.reserve(n);
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    // L_i = ∫_box log|x_i − y| dy, analytic.
                    let l_i = log_potential_rectangle(nodes[i], &support);
                    let mut log_sum = 0.0;
                    let mut inner = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        if j == i {
                            continue;
                        }
                        let lg = dist[i * n + j].ln();
                        log_sum += lg * weights[j];
                        inner += (v_values[j] - v_values[i]) * (lg * weights[j]);
                    }
                    // c_i = P_i − Σ_{j≠i} wⱼ ℓ(r_ij) for ℓ(r) = −log(r)/(2π),
                    // i.e. (Σ_{j≠i} wⱼ log r_ij − L_i)/(2π).
                    diag_correction.push((log_sum - l_i) / two_pi);
                    acc += v_values[i] * (inner + v_values[i] * l_i) * weights[i];
                }
                acc / two_pi
            }
        };

        Ok(BSDiscretization {
            d,
            support,
            nodes,
            weights,
            v_values,
            v_abs_sqrt,
            v_signed_sqrt,
            dist,
            diag_correction,
            u_disc,
            u1_disc,
        })
    }

    pub fn dim(&self) -> Dim {
        self.d
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn support(&self) -> &SupportBox {
        &self.support
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn v_values(&self) -> &[Complex64] {
        &self.v_values
    }

    pub fn v_abs_sqrt(&self) -> &[f64] {
        &self.v_abs_sqrt
    }

    pub fn v_signed_sqrt(&self) -> &[Complex64] {
        &self.v_signed_sqrt
    }

    /// Discrete mass Σ wⱼ Vⱼ (the U entering the discrete f_β, which makes
    /// the determinant identity exact at the matrix level).
    pub fn u_disc(&self) -> Complex64 {
        self.u_disc
    }

    /// Discrete second moment ∬ V μ V at the node level.
    pub fn u1_disc(&self) -> Complex64 {
        self.u1_disc
    }
}

// ---------------------------------------------------------------------------
// Assembly and f_β
// ---------------------------------------------------------------------------

/// Assembled Nyström matrix of M(z) together with an operator-norm
/// estimate (the smaller of the max-row-sum and max-column-sum norms).
pub struct AssembledM {
    pub matrix: DMatrix<Complex64>,
    pub norm_estimate: f64,
}

/// Nyström matrix M_ij = |V_i|^{1/2} (G − g)(x_i, x_j; z) V_j^{1/2} w_j.
///
/// In 1D the diagonal vanishes identically. In 2D the integrable log
/// singularity is handled by singularity subtraction: off-diagonal entries
/// use the split S(z r) + ℓ(r), and the diagonal entry absorbs the
/// precomputed correction c_i (analytic box integral of ℓ minus its
/// off-diagonal quadrature), restoring the convergence order a naive rule
/// would lose.
pub fn assemble_m(disc: &BSDiscretization, z: Complex64) -> Result<AssembledM, BSError> {
    check_z(z)?;
    let n = disc.len();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut matrix = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    match disc.d {
        Dim::One => {
            for i in 0..n {
                let a_i = disc.v_abs_sqrt[i];
                if a_i == 0.0 {
                    continue;
                }
                for j in 0..n {
                    if i == j {
                        continue; // exact zero on the diagonal
                    }
                    let r = disc.dist[i * n + j];
                    let kernel = exp_m1_complex(-z * r) / (2.0 * z);
                    matrix[(i, j)] =
                        kernel * (a_i * disc.weights[j]) * disc.v_signed_sqrt[j];
                }
            }
        }
        Dim::Two => {
            let s0 = Complex64::new(LOG2_MINUS_GAMMA / two_pi, 0.0);
            let log_z = z.ln();
            for i in 0..n {
                let a_i = disc.v_abs_sqrt[i];
                for j in 0..n {
                    if i == j {
                        let correction = s0 * disc.weights[i]
                            + Complex64::new(disc.diag_correction[i], 0.0);
                        matrix[(i, i)] = correction * a_i * disc.v_signed_sqrt[i];
                        continue;
                    }
                    if a_i == 0.0 {
                        continue;
                    }
                    let r = disc.dist[i * n + j];
                    // S(z r) + ℓ(r) recombine exactly to (K₀(z r) + log z)/(2π).
                    let kernel = (bessel_k0(z * r)? + log_z) / two_pi;
                    matrix[(i, j)] =
                        kernel * (a_i * disc.weights[j]) * disc.v_signed_sqrt[j];
                }
            }
        }
    }
    let mut inf_norm = 0.0f64;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| matrix[(i, j)].norm()).sum();
        inf_norm = inf_norm.max(row);
    }
    let mut one_norm = 0.0f64;
    for j in 0..n {
        let col: f64 = (0..n).map(|i| matrix[(i, j)].norm()).sum();
        one_norm = one_norm.max(col);
    }
    Ok(AssembledM {
        matrix,
        norm_estimate: inf_norm.min(one_norm),
    })
}

/// Value of f_β(z) plus the ‖βM(z)‖ estimate callers use to check the
/// Neumann-domain condition ‖βM‖ < ½.
pub struct FBetaValue {
    pub value: Complex64,
    pub beta_m_norm: f64,
}

/// Solves (1 − βM) y = b: Neumann iteration when the norm estimate allows,
/// with a residual check and an LU fallback.
fn resolvent_solve(
    m: &DMatrix<Complex64>,
    beta: Complex64,
    b: &DVector<Complex64>,
    norm_beta_m: f64,
) -> Result<DVector<Complex64>, BSError> {
    if norm_beta_m < 0.9 {
        let mut y = b.clone();
        for _ in 0..400 {
            let mut y_next = (m * &y) * beta;
            y_next += b;
            let delta = (&y_next - &y).norm();
            y = y_next;
            if delta <= 1e-16 * y.norm().max(1e-300) {
                break;
            }
        }
        let mut residual = -((m * &y) * beta);
        residual += &y;
        residual -= b;
        if residual.norm() <= 1e-12 * b.norm().max(y.norm()).max(1e-300) {
            return Ok(y);
        }
    }
    let n = m.nrows();
    let a = DMatrix::identity(n, n) - m * beta;
    a.lu()
        .solve(b)
        .ok_or(BSError::NearSingularResolvent { norm_beta_m })
}

/// The scalar function f_β(z) whose zeros are Birman–Schwinger eigenvalues:
/// f_β(z) = 1 − g(z)·[Uβ + β·Σⱼ wⱼ Vⱼ^{1/2} ((1 − βM)⁻¹βM u)ⱼ] with
/// u_i = |V_i|^{1/2} and U the discrete mass.
pub fn f_beta(z: Complex64, beta: Complex64, disc: &BSDiscretization) -> Result<FBetaValue, BSError> {
    let g = g_d(z, disc.d)?;
    let assembled = assemble_m(disc, z)?;
    let beta_m_norm = beta.norm() * assembled.norm_estimate;
    let u = DVector::from_iterator(
        disc.len(),
        disc.v_abs_sqrt.iter().map(|&a| Complex64::new(a, 0.0)),
    );
    let b = (&assembled.matrix * &u) * beta;
    let y = resolvent_solve(&assembled.matrix, beta, &b, beta_m_norm)?;
    let pairing: Complex64 = disc
        .weights
        .iter()
        .zip(&disc.v_signed_sqrt)
        .zip(y.iter())
        .map(|((&w, &s), &yj)| s * yj * w)
        .sum();
    let value = Complex64::new(1.0, 0.0) - g * (disc.u_disc * beta + beta * pairing);
    Ok(FBetaValue { value, beta_m_norm })
}

/// f_β∘Φ on the bounded domain Ω; rejects w ∉ Ω.
pub fn f_beta_phi(
    w: Complex64,
    beta: Complex64,
    disc: &BSDiscretization,
) -> Result<FBetaValue, BSError> {
    let z = phi(w, disc.d)?;
    f_beta(z, beta, disc)
}

/// Expansion remainder r_β(w) = w·(1 − f_β∘Φ(w)) − 𝒰(β), the quantity
/// whose measured growth constant C_r backs the remainder-bound checks.
pub fn r_beta(w: Complex64, beta: Complex64, disc: &BSDiscretization) -> Result<Complex64, BSError> {
    let f = f_beta_phi(w, beta, disc)?;
    let cu = curly_u(beta, disc.u_disc, disc.u1_disc, disc.d);
    Ok(w * (Complex64::new(1.0, 0.0) - f.value) - cu)
}

// ---------------------------------------------------------------------------
// Winding numbers
// ---------------------------------------------------------------------------

/// Winding count with its diagnostics: the integer, the smallest |f| seen
/// on the contour, and the gap between the raw argument sum/2π and the
/// reported integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingResult {
    pub winding: i32,
    pub min_modulus: f64,
    pub rounding_gap: f64,
}

/// Argument-principle count of zeros of `f` inside the circle, from the
/// accumulated principal argument increments over `samples` contour points.
/// Generic over the function so the pure-geometry test hook F(w) = w − a
/// exercises the counting logic in isolation.
pub fn winding_of_contour<F>(
    center: Complex64,
    radius: f64,
    samples: usize,
    mut f: F,
) -> Result<WindingResult, BSError>
where
    F: FnMut(Complex64) -> Result<Complex64, BSError>,
{
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut values = Vec::with_capacity(samples);
    let mut min_modulus = f64::INFINITY;
    for k in 0..samples {
        let theta = two_pi * (k as f64) / (samples as f64);
        let v = f(center + Complex64::from_polar(radius, theta))?;
        min_modulus = min_modulus.min(v.norm());
        values.push(v);
    }
    if min_modulus < 1e-10 {
        return Err(BSError::NearZeroOnContour { min_modulus });
    }
    let mut total = 0.0;
    for k in 0..samples {
        let next = values[(k + 1) % samples];
        total += (next / values[k]).arg();
    }
    let turns = total / two_pi;
    let winding = turns.round() as i32;
    Ok(WindingResult {
        winding,
        min_modulus,
        rounding_gap: (turns - winding as f64).abs(),
    })
}

/// Winding number of f_β∘Φ around a circle that must lie inside Ω
/// (every contour sample is checked before any evaluation).
pub fn winding_number(
    center: Complex64,
    radius: f64,
    beta: Complex64,
    disc: &BSDiscretization,
    samples: usize,
) -> Result<WindingResult, BSError> {
    let two_pi = 2.0 * std::f64::consts::PI;
    for k in 0..samples {
        let theta = two_pi * (k as f64) / (samples as f64);
        let w = center + Complex64::from_polar(radius, theta);
        if !in_omega(w, disc.d) {
            return Err(BSError::ContourLeavesOmega { w });
        }
    }
    winding_of_contour(center, radius, samples, |w| {
        f_beta_phi(w, beta, disc).map(|f| f.value)
    })
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Knobs for the root finder. The defaults are the calibrated acceptance
/// settings; `constants.epsilon` bounds the couplings the solver accepts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub constants: crate::asymptotics::ThresholdConstants,
    /// K in the localization disc D(𝒰(β); K|𝒰(β)|³).
    pub localization_factor: f64,
    pub newton_max_iters: usize,
    /// Convergence: |F| below this and the step below 10⁻¹²·|w|.
    pub newton_tolerance: f64,
    /// Boundary samples for disc-in-Ω classification.
    pub disc_samples: usize,
    /// Contour samples for winding certification.
    pub winding_samples: usize,
    /// Compute the dense eigenvalue gap at found roots (skipped above the
    /// matrix cap or when disabled; reported as NaN then).
    pub compute_eigen_gap: bool,
    /// Steps of the winding-bisection fallback.
    pub bisection_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            constants: Default::default(),
            localization_factor: 2.0,
            newton_max_iters: 50,
            newton_tolerance: 1e-12,
            disc_samples: 256,
            winding_samples: 256,
            compute_eigen_gap: true,
            bisection_steps: 60,
        }
    }
}

/// A certified root of f_β∘Φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub w_root: Complex64,
    /// z = Φ(w_root).
    pub z_root: Complex64,
    /// λ = −z².
    pub lambda: Complex64,
    /// |f_β∘Φ| at the root.
    pub residual: f64,
    /// Argument-principle count on the certification circle (1 for a
    /// certified simple root).
    pub winding: i32,
    /// min_k |eig_k(βQ(z_root)) − 1| from the dense cross-check (NaN when
    /// skipped).
    pub bs_eigen_gap: f64,
    pub newton_iters: usize,
}

/// A certified absence of roots near 𝒰(β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsenceCertificate {
    pub curly_u: Complex64,
    /// Radius K|𝒰(β)|³ of the localization disc.
    pub disc_radius: f64,
    /// Where that disc sits relative to Ω.
    pub disc_position: DiscPosition,
    /// Winding count on the disc boundary when the disc lies inside Ω
    /// (None when absence follows from the disc being outside Ω).
    pub winding: Option<i32>,
}

/// Outcome of a root search: a certified root, a certified absence, or an
/// honest refusal to claim either.
#[derive(Debug, Clone)]
pub enum RootOutcome {
    Found(RootResult),
    Absent(AbsenceCertificate),
    Undetermined {
        curly_u: Complex64,
        disc_position: DiscPosition,
        detail: String,
    },
}

impl RootOutcome {
    /// The root, when one was certified.
    pub fn found(&self) -> Option<&RootResult> {
        match self {
            RootOutcome::Found(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, RootOutcome::Absent(_))
    }
}

enum NewtonEnd {
    Converged {
        w: Complex64,
        iters: usize,
        derivative: Complex64,
    },
    Failed(String),
}

/// Maps evaluation failures caused by leaving Ω (or by Φ underflow) to
/// `None`; all other errors are genuine.
fn eval_inside(
    r: Result<Complex64, BSError>,
) -> Result<Option<Complex64>, BSError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(BSError::Region(RegionError::OutsideOmega { .. }))
        | Err(BSError::Region(RegionError::PhiUnderflow { .. })) => Ok(None),
        Err(e) => Err(e),
    }
}

fn newton_iterate<F>(
    mut eval: F,
    seed: Complex64,
    scale: f64,
    opts: &SolverOptions,
) -> Result<NewtonEnd, BSError>
where
    F: FnMut(Complex64) -> Result<Complex64, BSError>,
{
    let mut w = seed;
    let mut last_step = f64::INFINITY;
    let mut derivative = Complex64::new(0.0, 0.0);
    for iters in 0..opts.newton_max_iters {
        let fw = match eval_inside(eval(w))? {
            Some(v) => v,
            None => return Ok(NewtonEnd::Failed(format!("iterate {w} left the domain"))),
        };
        if fw.norm() < opts.newton_tolerance && last_step <= 1e-12 * w.norm().max(1e-300) {
            return Ok(NewtonEnd::Converged {
                w,
                iters,
                derivative,
            });
        }
        // Complex central difference; F is holomorphic, so one direction
        // suffices and the O(h²) truncation sits far below the tolerance.
        let mut h = 1e-6 * w.norm().max(scale);
        let mut deriv = None;
        for _ in 0..4 {
            let fp = eval_inside(eval(w + h))?;
            let fm = eval_inside(eval(w - h))?;
            if let (Some(fp), Some(fm)) = (fp, fm) {
                deriv = Some((fp - fm) / (2.0 * h));
                break;
            }
            h *= 0.1; // stencil grazed the boundary; shrink and retry
        }
        let Some(fprime) = deriv else {
            return Ok(NewtonEnd::Failed(format!(
                "derivative stencil around {w} left the domain"
            )));
        };
        if !fprime.norm().is_normal() {
            return Ok(NewtonEnd::Failed(format!(
                "derivative breakdown at {w} (|F'| = {:e})",
                fprime.norm()
            )));
        }
        derivative = fprime;
        let step = fw / fprime;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Ok(NewtonEnd::Failed(format!("non-finite step at {w}")));
        }
        w -= step;
        last_step = step.norm();
    }
    Ok(NewtonEnd::Failed(format!(
        "no convergence in {} iterations (last w = {w}, last step = {last_step:e})",
        opts.newton_max_iters
    )))
}

/// Winding-bisection fallback: shrink a disc around the seed while the
/// argument principle keeps reporting at least one zero inside.
fn bisection_hunt(
    beta: Complex64,
    disc: &BSDiscretization,
    seed: Complex64,
    radius0: f64,
    opts: &SolverOptions,
) -> Result<Option<Complex64>, BSError> {
    let scale = seed.norm().max(1e-300);
    let mut center = seed;
    let mut radius = radius0;
    let coarse_samples = 64;
    // The five candidate centers at offsets {0, ±r/2, ±ir/2} with radius
    // 0.75r cover the current disc, so a zero never escapes a step.
    for _ in 0..opts.bisection_steps {
        if radius <= 1e-10 * scale {
            return Ok(Some(center));
        }
        let offsets = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5 * radius, 0.0),
            Complex64::new(-0.5 * radius, 0.0),
            Complex64::new(0.0, 0.5 * radius),
            Complex64::new(0.0, -0.5 * radius),
        ];
        let mut moved = false;
        for offset in offsets {
            let cand = center + offset;
            let sub_radius = 0.75 * radius;
            if disc_in_omega(cand, sub_radius, disc.d, 64)? != DiscPosition::Inside {
                continue;
            }
            match winding_number(cand, sub_radius, beta, disc, coarse_samples) {
                Ok(w) if w.winding >= 1 => {
                    center = cand;
                    radius = sub_radius;
                    moved = true;
                    break;
                }
                Ok(_) => continue,
                Err(BSError::NearZeroOnContour { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        if !moved {
            return Ok(None);
        }
    }
    Ok(Some(center))
}

/// Certification of a converged root: winding = 1 on a circle inside Ω,
/// then λ = −Φ(w)² and the dense eigenvalue cross-check.
fn certify_root(
    w_root: Complex64,
    newton_iters: usize,
    derivative: Complex64,
    beta: Complex64,
    disc: &BSDiscretization,
    cu: Complex64,
    pos: DiscPosition,
    opts: &SolverOptions,
) -> Result<RootOutcome, BSError> {
    let residual = f_beta_phi(w_root, beta, disc)?.value.norm();
    let residual_scale = if derivative.norm() > 0.0 {
        residual / derivative.norm()
    } else {
        0.0
    };
    let mut radius = (10.0 * residual_scale).max(1e-3 * cu.norm());
    let mut fits = false;
    for _ in 0..40 {
        if radius <= 10.0 * residual_scale.max(f64::MIN_POSITIVE) {
            break;
        }
        if disc_in_omega(w_root, radius, disc.d, 64)? == DiscPosition::Inside {
            fits = true;
            break;
        }
        radius *= 0.5;
    }
    if !fits && disc_in_omega(w_root, radius, disc.d, 64)? != DiscPosition::Inside {
        return Ok(RootOutcome::Undetermined {
            curly_u: cu,
            disc_position: pos,
            detail: format!(
                "no certification circle around {w_root} fits inside the domain"
            ),
        });
    }
    let winding = winding_number(w_root, radius, beta, disc, opts.winding_samples)?;
    let z_root = phi(w_root, disc.d)?;
    let lambda = -z_root * z_root;
    let bs_eigen_gap = if opts.compute_eigen_gap && disc.len() <= DENSE_EIGEN_CAP {
        bs_eigen_check(z_root, beta, disc)?
    } else {
        f64::NAN
    };
    Ok(RootOutcome::Found(RootResult {
        w_root,
        z_root,
        lambda,
        residual,
        winding: winding.winding,
        bs_eigen_gap,
        newton_iters,
    }))
}

/// Finds or excludes the weakly coupled root of f_β∘Φ.
///
/// The search is seeded at w₀ = 𝒰(β) (computed from the *discrete*
/// moments) and localized to the disc D(𝒰(β); K|𝒰(β)|³):
///
/// * disc entirely outside Ω → certified `Absent`;
/// * Newton convergence inside Ω → winding-certified `Found`;
/// * Newton failure with the disc inside Ω → winding count on the disc:
///   0 → certified `Absent`, ≥ 1 → winding-bisection recovery;
/// * anything else → `Undetermined` (never a forced verdict).
pub fn find_root(
    beta: Complex64,
    disc: &BSDiscretization,
    opts: &SolverOptions,
) -> Result<RootOutcome, BSError> {
    if disc.u_disc.norm() == 0.0 {
        return Err(AsymptoticsError::ZeroMass.into());
    }
    if !(beta.norm() < opts.constants.epsilon) {
        return Err(AsymptoticsError::BetaNotSmall {
            beta_abs: beta.norm(),
            epsilon: opts.constants.epsilon,
        }
        .into());
    }
    let cu = curly_u(beta, disc.u_disc, disc.u1_disc, disc.d);
    let loc_radius = opts.localization_factor * cu.norm().powi(3);
    let pos = disc_in_omega(cu, loc_radius, disc.d, opts.disc_samples)?;
    if pos == DiscPosition::Outside {
        return Ok(RootOutcome::Absent(AbsenceCertificate {
            curly_u: cu,
            disc_radius: loc_radius,
            disc_position: pos,
            winding: None,
        }));
    }

    let newton_end = if in_omega(cu, disc.d) {
        newton_iterate(
            |w| f_beta_phi(w, beta, disc).map(|f| f.value),
            cu,
            cu.norm(),
            opts,
        )?
    } else {
        NewtonEnd::Failed("seed outside the domain".to_string())
    };

    match newton_end {
        NewtonEnd::Converged {
            w,
            iters,
            derivative,
        } => certify_root(w, iters, derivative, beta, disc, cu, pos, opts),
        NewtonEnd::Failed(reason) => {
            if pos == DiscPosition::Inside {
                match winding_number(cu, loc_radius, beta, disc, opts.winding_samples) {
                    Ok(w) if w.winding == 0 => Ok(RootOutcome::Absent(AbsenceCertificate {
                        curly_u: cu,
                        disc_radius: loc_radius,
                        disc_position: pos,
                        winding: Some(0),
                    })),
                    Ok(_) => {
                        // A zero is inside but Newton missed it; hunt it down.
                        if let Some(center) =
                            bisection_hunt(beta, disc, cu, loc_radius, opts)?
                        {
                            match newton_iterate(
                                |w| f_beta_phi(w, beta, disc).map(|f| f.value),
                                center,
                                cu.norm(),
                                opts,
                            )? {
                                NewtonEnd::Converged {
                                    w,
                                    iters,
                                    derivative,
                                } => certify_root(
                                    w, iters, derivative, beta, disc, cu, pos, opts,
                                ),
                                NewtonEnd::Failed(r2) => Ok(RootOutcome::Undetermined {
                                    curly_u: cu,
                                    disc_position: pos,
                                    detail: format!(
                                        "bisection localized a zero but polishing failed: {r2}"
                                    ),
                                }),
                            }
                        } else {
                            Ok(RootOutcome::Undetermined {
                                curly_u: cu,
                                disc_position: pos,
                                detail: format!("newton failed ({reason}); bisection lost the zero"),
                            })
                        }
                    }
                    Err(e) => Ok(RootOutcome::Undetermined {
                        curly_u: cu,
                        disc_position: pos,
                        detail: format!("newton failed ({reason}); winding failed ({e})"),
                    }),
                }
            } else {
                Ok(RootOutcome::Undetermined {
                    curly_u: cu,
                    disc_position: pos,
                    detail: reason,
                })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Dense cross-check
// ---------------------------------------------------------------------------

/// Distance of the spectrum of the full Birman–Schwinger matrix βQ(z) =
/// β(L(z) + M(z)) from 1: assembles L_ij = g(z)|V_i|^{1/2} V_j^{1/2} wⱼ on
/// top of M, computes all eigenvalues densely, and returns min_k|eig_k − 1|.
pub fn bs_eigen_check(
    z: Complex64,
    beta: Complex64,
    disc: &BSDiscretization,
) -> Result<f64, BSError> {
    let n = disc.len();
    if n > DENSE_EIGEN_CAP {
        return Err(BSError::MatrixTooLarge {
            n,
            cap: DENSE_EIGEN_CAP,
        });
    }
    let g = g_d(z, disc.d)?;
    let assembled = assemble_m(disc, z)?;
    let mut q = assembled.matrix;
    for i in 0..n {
        let a_i = Complex64::new(disc.v_abs_sqrt[i], 0.0);
        for j in 0..n {
            q[(i, j)] = (q[(i, j)] + g * a_i * disc.v_signed_sqrt[j] * disc.weights[j]) * beta;
        }
    }
    let eigs = lapack::eigenvalues(q.as_slice(), n)?;
    Ok(eigs
        .iter()
        .map(|e| (e - Complex64::new(1.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::ThresholdConstants;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Single node at the origin, weight 1, V = 1: M ≡ 0 and
    /// f_β(z) = 1 − β/(2z) exactly.
    fn rank_one() -> BSDiscretization {
        BSDiscretization::from_samples(
            SupportBox::interval(-1.0, 1.0).unwrap(),
            vec![Point::one_d(0.0)],
            vec![1.0],
            vec![c(1.0, 0.0)],
        )
        .unwrap()
    }

    fn box_disc(order: usize) -> BSDiscretization {
        let v = Potential::box_1d(c(1.0, 0.0), 0.0, 1.0).unwrap();
        BSDiscretization::from_potential(&v, order).unwrap()
    }

    #[test]
    fn green_kernel_reference_values() {
        let z = c(1.0, 0.0);
        let p = Point::one_d(0.0);
        let q = Point::one_d(1.0);
        assert!((green_kernel(p, p, z, Dim::One).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        let v = green_kernel(p, q, z, Dim::One).unwrap();
        assert!((v - c((-1.0f64).exp() / 2.0, 0.0)).norm() < 1e-15);
        assert!(green_kernel(p, q, c(-1.0, 0.0), Dim::One).is_err());
        // 2D: exponential decay envelope at large separation.
        let z = c(2.0, 0.0);
        let r = 10.0;
        let g2 = green_kernel(
            Point::two_d(0.0, 0.0),
            Point::two_d(r, 0.0),
            z,
            Dim::Two,
        )
        .unwrap();
        let envelope = (std::f64::consts::PI / (2.0 * z.re * r)).sqrt() * (-z.re * r).exp()
            / (2.0 * std::f64::consts::PI);
        assert!(g2.norm() <= envelope * 1.01);
        assert!(matches!(
            green_kernel(p2(0.3, 0.4), p2(0.3, 0.4), z, Dim::Two),
            Err(BSError::CoincidentPoints)
        ));
    }

    fn p2(x: f64, y: f64) -> Point {
        Point::two_d(x, y)
    }

    #[test]
    fn h_kernel_reference_values() {
        let z = c(0.7, 0.2);
        let p = Point::one_d(0.25);
        assert!(
            (h_kernel(p, p, z, Dim::One).unwrap() - Complex64::new(1.0, 0.0) / (2.0 * z)).norm()
                < 1e-15
        );
        // h − G on the line is the full curvature term
        // −(e^{−zr} − 1 + zr)/(2z); check it against the stable evaluator.
        let q = Point::one_d(0.85);
        let r = p.dist(q);
        let diff = h_kernel(p, q, z, Dim::One).unwrap() - green_kernel(p, q, z, Dim::One).unwrap();
        let exact = -crate::special::expm1_plus_linear(z * r) / (2.0 * z);
        assert!((diff - exact).norm() < 1e-15);
        // 2D reference: z = 1, |x−y| = 2 gives −γ/(2π).
        let h2 = h_kernel(p2(0.0, 0.0), p2(2.0, 0.0), c(1.0, 0.0), Dim::Two).unwrap();
        let expected = -crate::special::EULER_GAMMA / (2.0 * std::f64::consts::PI);
        assert!((h2 - c(expected, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn m_kernel_diagonal_and_bounds() {
        let z = c(0.4, 0.3);
        let p = Point::one_d(0.3);
        assert_eq!(m_kernel(p, p, z, Dim::One).unwrap(), c(0.0, 0.0));
        // |G − g| ≤ |x−y|/2 on the line.
        for r in [1e-8, 1e-3, 0.3, 2.0] {
            let q = Point::one_d(0.3 + r);
            let v = m_kernel(p, q, z, Dim::One).unwrap();
            assert!(v.norm() <= 0.5 * r * (1.0 + 1e-12));
        }
        // 2D: matches G − g where both are defined.
        let (x, y, z2) = (p2(0.1, 0.2), p2(0.7, -0.3), c(0.3, 0.1));
        let direct = green_kernel(x, y, z2, Dim::Two).unwrap() - g_d(z2, Dim::Two).unwrap();
        let reduced = m_kernel(x, y, z2, Dim::Two).unwrap();
        assert!((direct - reduced).norm() < 1e-13);
    }

    #[test]
    fn assemble_single_node_is_zero_matrix() {
        let disc = rank_one();
        let a = assemble_m(&disc, c(0.05, 0.0)).unwrap();
        assert_eq!(a.matrix.nrows(), 1);
        assert_eq!(a.matrix[(0, 0)], c(0.0, 0.0));
        assert_eq!(a.norm_estimate, 0.0);
    }

    #[test]
    fn m_norm_bounded_and_stable_under_refinement() {
        let coarse = box_disc(60);
        let fine = box_disc(120);
        for z in [c(0.05, 0.0), c(0.1, 0.2), c(0.4, -0.1), c(0.02, 0.01)] {
            let nc = assemble_m(&coarse, z).unwrap().norm_estimate;
            let nf = assemble_m(&fine, z).unwrap().norm_estimate;
            assert!(nc < 1.0, "norm {nc} at z = {z}");
            assert!(
                (nf - nc).abs() <= 0.05 * nc.max(1e-6),
                "refinement moved the norm estimate from {nc} to {nf} at z = {z}"
            );
        }
    }

    #[test]
    fn f_beta_rank_one_oracle() {
        let disc = rank_one();
        let beta = c(0.1, 0.0);
        for k in 1..=20 {
            let z = c(0.01 * k as f64, 0.003 * (k % 5) as f64);
            let f = f_beta(z, beta, &disc).unwrap();
            let exact = Complex64::new(1.0, 0.0) - beta / (2.0 * z);
            assert!(
                (f.value - exact).norm() < 1e-14,
                "z = {z}: {} vs {exact}",
                f.value
            );
            assert_eq!(f.beta_m_norm, 0.0);
        }
        // β = 0 gives f ≡ 1.
        let f0 = f_beta(c(0.3, 0.1), c(0.0, 0.0), &disc).unwrap();
        assert_eq!(f0.value, c(1.0, 0.0));
    }

    #[test]
    fn f_beta_real_data_is_real_on_the_real_axis() {
        let disc = box_disc(40);
        let beta = c(0.1, 0.0);
        for z in [c(0.02, 0.0), c(0.05, 0.0), c(0.2, 0.0)] {
            let f = f_beta(z, beta, &disc).unwrap();
            assert!(
                f.value.im.abs() < 1e-13,
                "Im f = {:e} at z = {z}",
                f.value.im
            );
            // Conjugate symmetry off the axis.
            let zc = c(0.05, 0.03);
            let a = f_beta(zc, beta, &disc).unwrap().value;
            let b = f_beta(zc.conj(), beta, &disc).unwrap().value;
            assert!((a.conj() - b).norm() < 1e-13);
        }
    }

    #[test]
    fn f_beta_phi_rank_one_and_remainder() {
        let disc = rank_one();
        let beta = c(0.1, 0.02);
        // Single node at the origin: U₁ vanishes, so f∘Φ(w) = 1 − β/w and
        // r_β ≡ 0.
        assert_eq!(disc.u1_disc(), c(0.0, 0.0));
        for w in [c(0.2, 0.0), c(0.1, 0.05), c(0.4, -0.1)] {
            let f = f_beta_phi(w, beta, &disc).unwrap();
            let exact = Complex64::new(1.0, 0.0) - beta / w;
            assert!((f.value - exact).norm() < 1e-14);
            let r = r_beta(w, beta, &disc).unwrap();
            assert!(r.norm() < 1e-15);
        }
        assert!(matches!(
            f_beta_phi(c(-0.5, 0.0), beta, &disc),
            Err(BSError::Region(RegionError::OutsideOmega { .. }))
        ));
    }

    #[test]
    fn winding_counts_simple_zeros() {
        let a = c(0.2, 0.1);
        let hook = |w: Complex64| Ok(w - a);
        let enclosing = winding_of_contour(a, 0.05, 128, hook).unwrap();
        assert_eq!(enclosing.winding, 1);
        assert!(enclosing.rounding_gap < 1e-10);
        let distant = winding_of_contour(c(0.6, 0.0), 0.05, 128, hook).unwrap();
        assert_eq!(distant.winding, 0);
        // Double zero: F = (w − a)².
        let double = winding_of_contour(a, 0.05, 128, |w| Ok((w - a) * (w - a))).unwrap();
        assert_eq!(double.winding, 2);
        // Near-zero on the contour is refused.
        assert!(matches!(
            winding_of_contour(a, 0.05, 128, |w| Ok((w - a - c(0.05, 0.0)) * 1e-9)),
            Err(BSError::NearZeroOnContour { .. })
        ));
    }

    #[test]
    fn winding_number_checks_the_contour_stays_in_omega() {
        let disc = rank_one();
        assert!(matches!(
            winding_number(c(0.05, 0.0), 0.2, c(0.1, 0.0), &disc, 64),
            Err(BSError::ContourLeavesOmega { .. })
        ));
    }

    #[test]
    fn find_root_rank_one_oracle() {
        let disc = rank_one();
        let opts = SolverOptions::default();
        let outcome = find_root(c(0.1, 0.0), &disc, &opts).unwrap();
        let root = outcome.found().expect("rank-one root must be found");
        assert!((root.z_root - c(0.05, 0.0)).norm() < 1e-12);
        assert!((root.lambda - c(-0.0025, 0.0)).norm() < 1e-13);
        assert_eq!(root.winding, 1);
        assert!(root.residual < 1e-12);
        assert!(root.bs_eigen_gap < 1e-12, "gap = {:e}", root.bs_eigen_gap);
    }

    #[test]
    fn find_root_box_potential_matches_asymptotics() {
        let disc = box_disc(200);
        let opts = SolverOptions::default();
        let beta = 0.1;
        let outcome = find_root(c(beta, 0.0), &disc, &opts).unwrap();
        let root = outcome.found().expect("root exists for positive beta");
        // The eigenvalue is real and negative, z matches the independently
        // computed transcendental-equation value, and the second-order
        // expansion error is O(β³).
        assert!(root.lambda.re < 0.0);
        assert!(root.lambda.im.abs() < 1e-10);
        let z_exact = 0.049190789371194689336; // frozen 35-digit solver value
        assert!(
            (root.z_root - c(z_exact, 0.0)).norm() < 5e-7,
            "z = {}, exact {z_exact}",
            root.z_root
        );
        let asym = beta / 2.0 - beta * beta / 12.0;
        let err = ((-root.lambda).sqrt() - c(asym, 0.0)).norm();
        assert!(err < 1e-4 && err > 1e-7, "E = {err:e}");
        assert_eq!(root.winding, 1);
        assert!(root.bs_eigen_gap < 1e-10);
    }

    #[test]
    fn find_root_negative_coupling_is_certified_absent() {
        let disc = box_disc(120);
        let opts = SolverOptions::default();
        let outcome = find_root(c(-0.1, 0.0), &disc, &opts).unwrap();
        match outcome {
            RootOutcome::Absent(cert) => {
                assert_eq!(cert.disc_position, DiscPosition::Outside);
                assert!(cert.winding.is_none());
            }
            other => panic!("expected certified absence, got {other:?}"),
        }
    }

    #[test]
    fn find_root_rejects_large_couplings() {
        let disc = rank_one();
        let opts = SolverOptions {
            constants: ThresholdConstants {
                epsilon: 0.05,
                ..Default::default()
            },
            ..Default::default()
        };
        assert!(matches!(
            find_root(c(0.1, 0.0), &disc, &opts),
            Err(BSError::Asymptotics(AsymptoticsError::BetaNotSmall { .. }))
        ));
    }

    #[test]
    fn eigen_check_rank_one_and_zero_coupling() {
        let disc = rank_one();
        // At the rank-one root z = β/2, βQ has eigenvalue exactly 1.
        let gap = bs_eigen_check(c(0.05, 0.0), c(0.1, 0.0), &disc).unwrap();
        assert!(gap < 1e-12);
        // β = 0: the zero matrix has spectrum {0}, gap 1.
        let gap0 = bs_eigen_check(c(0.05, 0.0), c(0.0, 0.0), &disc).unwrap();
        assert!((gap0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigen_check_respects_the_cap() {
        let v = Potential::box_1d(c(1.0, 0.0), 0.0, 1.0).unwrap();
        let disc = BSDiscretization::from_potential(&v, 1601).unwrap();
        assert!(matches!(
            bs_eigen_check(c(0.05, 0.0), c(0.1, 0.0), &disc),
            Err(BSError::MatrixTooLarge { .. })
        ));
    }

    #[test]
    fn discretization_validation() {
        let support = SupportBox::interval(0.0, 1.0).unwrap();
        assert!(matches!(
            BSDiscretization::from_samples(support, vec![], vec![], vec![]),
            Err(BSError::MismatchedSamples { .. })
        ));
        assert!(matches!(
            BSDiscretization::from_samples(
                support,
                vec![Point::one_d(0.5)],
                vec![-1.0],
                vec![c(1.0, 0.0)]
            ),
            Err(BSError::InvalidWeight { .. })
        ));
        assert!(matches!(
            BSDiscretization::from_samples(
                support,
                vec![Point::one_d(2.0)],
                vec![1.0],
                vec![c(1.0, 0.0)]
            ),
            Err(BSError::NodeOutsideSupport { .. })
        ));
        // The square-root convention: product reproduces V exactly.
        let vals = vec![c(-2.0, 1.5), c(0.0, 0.0), c(0.3, -0.7)];
        let disc = BSDiscretization::from_samples(
            support,
            vec![Point::one_d(0.25), Point::one_d(0.5), Point::one_d(0.75)],
            vec![0.25; 3],
            vals.clone(),
        )
        .unwrap();
        for i in 0..3 {
            let product = disc.v_abs_sqrt()[i] * disc.v_signed_sqrt()[i];
            assert!((product - vals[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn discrete_moments_match_continuum_for_the_box() {
        let disc = box_disc(80);
        assert!((disc.u_disc() - c(1.0, 0.0)).norm() < 1e-13);
        // Discrete U₁ approaches 1/6 with kink-limited order (measured
        // error 2.1e-5 at 80 nodes, 3.4e-6 at 200).
        assert!((disc.u1_disc() - c(1.0 / 6.0, 0.0)).norm() < 1e-4);
    }
}
