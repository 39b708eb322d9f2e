//! Weak-coupling laboratory for 1D/2D Schrödinger operators −Δ − βV with
//! complex potentials and complex couplings.
//!
//! The crate computes the weakly coupled discrete eigenvalue (or certifies
//! its absence) along two independent routes and cross-checks them:
//!
//! * **Asymptotic route** ([`asymptotics`], [`potential`]): the potential's
//!   moments U = ∫V and U₁ = ∬V μ V feed the expansion parameter
//!   𝒰(β) = Uβ − U₁β² (with a 2D variant), explicit existence/absence
//!   classifiers, and the second-order eigenvalue prediction.
//! * **Integral-equation route** ([`birman_schwinger`]): a Nyström
//!   discretization of the Birman–Schwinger operator reduces the eigenvalue
//!   problem to a scalar root equation f_β∘Φ = 0 on a bounded domain Ω
//!   ([`region`]); roots are found by Newton iteration, certified by the
//!   argument principle, and verified once more by a dense eigensolve of
//!   the full Birman–Schwinger matrix.
//!
//! Supporting layers: complex special functions with principal branches
//! ([`special`]), Gauss–Legendre rules plus singular-kernel integration
//! ([`quadrature`]), and the geometry of supports and sample points
//! ([`geom`]).

pub mod asymptotics;
pub mod birman_schwinger;
pub mod geom;
pub(crate) mod lapack;
pub mod potential;
pub mod quadrature;
pub mod region;
pub mod special;

pub use asymptotics::{
    classify_curly_u, classify_real_coupling, classify_real_potential, classify_theta, curly_u,
    davies_enclosure_check, predict_eigenvalue, CouplingAssessment, ThresholdConstants, Verdict,
};
pub use birman_schwinger::{
    bs_eigen_check, f_beta, f_beta_phi, find_root, BSDiscretization, RootOutcome, RootResult,
    SolverOptions,
};
pub use geom::{Dim, Point, SupportBox};
pub use potential::{moments, Moments, Potential};
pub use quadrature::{gauss_rule, QuadratureRule};
pub use region::{g_d, in_omega, phi, DiscPosition};
