//! The parameter-domain geometry: the free-resolvent scalar g_d, the
//! bounded domain Ω, the holomorphic bijection Φ : Ω → D(0; ½) ∩ ℂ₊ with
//! g_d(Φ(w)) = 1/w, and disc-in-Ω classification.
//!
//! Ω is the preimage under 1/g_d of the half-disc where the spectral
//! parameter z lives:
//!
//! * d = 1: Ω = D(0; 1) ∩ ℂ₊ and Φ(w) = w/2;
//! * d = 2: Ω = { Re(1/w) > log 2/(2π), |Im(1/w)| < ¼, Re w > 0 } and
//!   Φ(w) = exp(−2π/w). The first inequality is equivalently the disc
//!   |w − π/log 2| < π/log 2, which makes Ω bounded: |w| < 2π/log 2.
//!
//! Ω is open; points within 10⁻¹⁴ of any defining boundary count as
//! *outside*, so callers' contour logic never straddles the boundary.

use crate::geom::Dim;
use crate::special::SpecialError;
use num_complex::Complex64;
use thiserror::Error;

/// Region-layer failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    /// g_d needs a spectral parameter in the right half-plane.
    #[error("g_d requires Re z > 0, got {z}")]
    NotRightHalfPlane { z: Complex64 },
    /// Φ and f_β∘Φ are only defined on Ω.
    #[error("point {w} lies outside Omega (d = {d})")]
    OutsideOmega { w: Complex64, d: Dim },
    /// Φ(w) = exp(−2π/w) underflowed to exactly 0 (w too close to 0).
    #[error("phi underflows to zero at w = {w}; the coupling is too small to represent")]
    PhiUnderflow { w: Complex64 },
    /// Boundary sampling needs enough resolution to be meaningful.
    #[error("disc classification needs >= 16 boundary samples, got {samples}")]
    TooFewSamples { samples: usize },
    /// Disc radius must be a finite non-negative number.
    #[error("invalid disc radius {radius}")]
    InvalidRadius { radius: f64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// Half-width of the exclusion band around ∂Ω; membership within this
/// distance of a defining inequality counts as outside (Ω is open).
const BOUNDARY_MARGIN: f64 = 1e-14;

/// Re(1/w) threshold for the 2D Ω.
fn log2_over_2pi() -> f64 {
    std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI)
}

/// Upper bound for |w| on the 2D Ω (the domain is contained in the disc
/// D(π/log 2; π/log 2)).
pub fn omega_modulus_bound(d: Dim) -> f64 {
    match d {
        Dim::One => 1.0,
        Dim::Two => 2.0 * std::f64::consts::PI / std::f64::consts::LN_2,
    }
}

/// The free-resolvent scalar g_d(z): 1/(2z) on the line, −(2π)⁻¹ log z in
/// the plane; injective and holomorphic on the right half-plane.
pub fn g_d(z: Complex64, d: Dim) -> Result<Complex64, RegionError> {
    if !(z.re > 0.0) || !z.im.is_finite() || !z.re.is_finite() {
        return Err(RegionError::NotRightHalfPlane { z });
    }
    Ok(match d {
        Dim::One => Complex64::new(0.5, 0.0) / z,
        // Re z > 0 keeps the argument off the principal cut.
        Dim::Two => -z.ln() / (2.0 * std::f64::consts::PI),
    })
}

/// Membership test for the open domain Ω (boundary band counts as outside).
pub fn in_omega(w: Complex64, d: Dim) -> bool {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return false;
    }
    match d {
        Dim::One => w.re > BOUNDARY_MARGIN && w.norm() < 1.0 - BOUNDARY_MARGIN,
        Dim::Two => {
            let n2 = w.norm_sqr();
            if !(n2 > 0.0) {
                return false;
            }
            let re_inv = w.re / n2;
            let im_inv = -w.im / n2;
            w.re > BOUNDARY_MARGIN
                && re_inv > log2_over_2pi() + BOUNDARY_MARGIN
                && im_inv.abs() < 0.25 - BOUNDARY_MARGIN
        }
    }
}

/// The equivalent disc-form test for the 2D Ω:
/// |w − π/log 2| < π/log 2, |Im(1/w)| < ¼, Re w > 0.
pub fn in_omega_disc_form(w: Complex64) -> bool {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return false;
    }
    let n2 = w.norm_sqr();
    if !(n2 > 0.0) {
        return false;
    }
    let center = std::f64::consts::PI / std::f64::consts::LN_2;
    let im_inv = -w.im / n2;
    w.re > BOUNDARY_MARGIN
        && (w - center).norm() < center - BOUNDARY_MARGIN
        && im_inv.abs() < 0.25 - BOUNDARY_MARGIN
}

/// The bijection Φ : Ω → D(0; ½) ∩ ℂ₊, w/2 on the line and exp(−2π/w) in
/// the plane. Rejects w ∉ Ω, and reports (rather than hides) the underflow
/// of exp(−2π/w) for w extremely close to 0.
pub fn phi(w: Complex64, d: Dim) -> Result<Complex64, RegionError> {
    if !in_omega(w, d) {
        return Err(RegionError::OutsideOmega { w, d });
    }
    match d {
        Dim::One => Ok(w * 0.5),
        Dim::Two => {
            let z = (-2.0 * std::f64::consts::PI / w).exp();
            if z == Complex64::new(0.0, 0.0) {
                Err(RegionError::PhiUnderflow { w })
            } else {
                Ok(z)
            }
        }
    }
}

/// Position of a closed disc relative to Ω, decided by sampling the disc
/// boundary (plus the center): all sampled points inside → `Inside`, all
/// outside → `Outside`, otherwise `Mixed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscPosition {
    Inside,
    Outside,
    Mixed,
}

/// Classifies D(center; radius) against Ω with `samples` boundary points.
pub fn disc_in_omega(
    center: Complex64,
    radius: f64,
    d: Dim,
    samples: usize,
) -> Result<DiscPosition, RegionError> {
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(RegionError::InvalidRadius { radius });
    }
    if samples < 16 {
        return Err(RegionError::TooFewSamples { samples });
    }
    let mut inside = 0usize;
    let mut total = 0usize;
    let mut tally = |w: Complex64| {
        total += 1;
        if in_omega(w, d) {
            inside += 1;
        }
    };
    tally(center);
    if radius > 0.0 {
        for k in 0..samples {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (samples as f64);
            tally(center + Complex64::from_polar(radius, theta));
        }
    }
    Ok(if inside == total {
        DiscPosition::Inside
    } else if inside == 0 {
        DiscPosition::Outside
    } else {
        DiscPosition::Mixed
    })
}
