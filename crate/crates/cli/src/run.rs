//! The four subcommands, their result tables, and the exit-code policy.
//!
//! * `moments` — measured potential data: U, U₁, the Rollnik-type
//!   integral, refinement error estimates, and (for the `v_alpha` family)
//!   the α* threshold with a small-coupling classification.
//! * `sweep` — one row per configured coupling: classifier verdict and
//!   predicted eigenvalue next to the certified solver numbers (root,
//!   residual, winding, dense-eigenvalue gap, enclosure check, distance to
//!   the asymptotic expansion). A failing row records its error and the
//!   sweep continues.
//! * `region` — a raster of the spectral-parameter domain Ω
//!   (`omega_in`/`omega_out`) or of classifier verdicts over a
//!   coupling-plane window (`exists`/`absent`/`undetermined`), rows
//!   ordered by imaginary part then real part.
//! * `calibrate` — verdict-versus-solver agreement on the configured
//!   coupling grid; any certified contradiction is flagged.
//!
//! Exit codes: 0 success; 1 configuration error; 2 numerical failure in
//! at least one row; 3 calibration inconsistency (a classifier verdict
//! contradicts certified numerics). When both 2 and 3 apply, 3 wins —
//! a contradiction is the stronger finding.

use num_complex::Complex64;
use thiserror::Error;
use wclab_core::potential::alpha_star;
use wclab_core::special::LOG2_MINUS_GAMMA;
use wclab_core::{
    classify_curly_u, classify_real_potential, curly_u, davies_enclosure_check, find_root,
    gauss_rule, in_omega, moments, BSDiscretization, CouplingAssessment, Dim, Moments, Potential,
    RootOutcome, SolverOptions, ThresholdConstants, Verdict,
};

use crate::config::{cx, BetaPlaneRule, ConfigError, RegionConfig, ResolvedRun};
use crate::emit::{write_output, Cell, Table};

/// Fatal command failures (anything that prevents emitting a table).
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Numerical(String),
    #[error("cannot write output {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Output { .. } => 2,
        }
    }
}

fn num_err(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Which subcommand to execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Moments,
    Sweep,
    Region,
    Calibrate,
}

/// Runs a command and emits its table; returns the process exit code.
pub fn execute(kind: CommandKind, run: &ResolvedRun) -> Result<i32, CliError> {
    let (table, code) = match kind {
        CommandKind::Moments => (cmd_moments(run)?, 0),
        CommandKind::Sweep => cmd_sweep(run)?,
        CommandKind::Region => (cmd_region(run)?, 0),
        CommandKind::Calibrate => cmd_calibrate(run)?,
    };
    let text = table.render(run.format);
    write_output(&text, run.out_path.as_deref()).map_err(|source| CliError::Output {
        path: run
            .out_path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "<stdout>".to_string()),
        source,
    })?;
    Ok(code)
}

// ---------------------------------------------------------------------------
// Shared measurement helpers
// ---------------------------------------------------------------------------

fn measured_moments(run: &ResolvedRun) -> Result<Moments, CliError> {
    let rule = gauss_rule(run.quad_order, *run.potential.support()).map_err(num_err)?;
    moments(&run.potential, &rule).map_err(num_err)
}

/// The classification machinery is undefined at U = 0; a potential whose
/// measured mean vanishes (relative to ∫|V|) is rejected as a
/// configuration error.
fn ensure_nonzero_mass(run: &ResolvedRun, m: &Moments) -> Result<(), CliError> {
    let scale = run.potential.one_norm(run.quad_order).map_err(num_err)?;
    if m.u.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(CliError::Config(ConfigError::Field {
            field: "potential".to_string(),
            message: format!(
                "measured mass U = {:e} vanishes relative to the integrated \
                 modulus {:e}; zero-mass potentials are unsupported",
                m.u.norm(),
                scale
            ),
        }));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

fn alpha_classification(alpha: f64, threshold: f64) -> &'static str {
    let band = 1e-9 * threshold.abs().max(1e-300);
    if alpha > threshold + band {
        "exists-for-small-beta"
    } else if alpha < threshold - band {
        "absent-for-small-beta"
    } else {
        "near-threshold"
    }
}

fn cmd_moments(run: &ResolvedRun) -> Result<Table, CliError> {
    let m = measured_moments(run)?;
    ensure_nonzero_mass(run, &m)?;

    let mut table = Table::new(&["quantity", "value"]);
    let mut scalar = |name: &'static str, v: f64| {
        table.push(vec![Cell::Text(name.to_string()), Cell::Float(v)]);
    };
    scalar("u_re", m.u.re);
    scalar("u_im", m.u.im);
    scalar("u1_re", m.u1.re);
    scalar("u1_im", m.u1.im);
    scalar("rollnik", m.rollnik);
    scalar("u_error_estimate", m.error_estimates.0);
    scalar("u1_error_estimate", m.error_estimates.1);
    table.push(vec![
        Cell::Text("rule_order".to_string()),
        Cell::Int(m.rule_order as i64),
    ]);

    if let Some(alpha) = run.v_alpha {
        let (re_v, im_v) = Potential::v_alpha_parts();
        let rule = gauss_rule(run.quad_order, *re_v.support()).map_err(num_err)?;
        let threshold = alpha_star(&re_v, &im_v, &rule).map_err(num_err)?;
        table.push(vec![Cell::Text("alpha".to_string()), Cell::Float(alpha)]);
        table.push(vec![
            Cell::Text("alpha_star".to_string()),
            Cell::Float(threshold),
        ]);
        table.push(vec![
            Cell::Text("small_beta_classification".to_string()),
            Cell::Text(alpha_classification(alpha, threshold).to_string()),
        ]);
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

const SWEEP_COLUMNS: &[&str] = &[
    "beta_re",
    "beta_im",
    "curly_u_re",
    "curly_u_im",
    "verdict",
    "lambda_pred_re",
    "lambda_pred_im",
    "lambda_num_re",
    "lambda_num_im",
    "abs_lambda_over_beta_sq",
    "residual",
    "winding",
    "bs_eigen_gap",
    "davies_ok",
    "expansion_error",
    "error",
];

/// Distance from the certified eigenvalue to the second-order expansion:
/// |√(−λ) − 𝒰(β)/2| on the line, |ln(−λ) − (−4π/(Uβ) − 4πU₁/U² +
/// ln 4 − 2γ)| in the plane.
fn expansion_error(lambda: Complex64, beta: Complex64, m: &Moments, d: Dim) -> f64 {
    match d {
        Dim::One => {
            let z_asym = curly_u(beta, m.u, m.u1, d) * 0.5;
            ((-lambda).sqrt() - z_asym).norm()
        }
        Dim::Two => {
            let four_pi = 4.0 * std::f64::consts::PI;
            let log_asym = -four_pi / (m.u * beta) - four_pi * m.u1 / (m.u * m.u)
                + 2.0 * LOG2_MINUS_GAMMA;
            ((-lambda).ln() - log_asym).norm()
        }
    }
}

/// A certified contradiction between the classifier and the solver, if
/// any. Undetermined on either side is never a contradiction.
fn conflict_note(verdict: Verdict, outcome: &RootOutcome) -> Option<String> {
    match (verdict, outcome) {
        (Verdict::Exists, RootOutcome::Absent(_)) => Some(
            "verdict_conflict: classifier predicts a root, solver certified absence".to_string(),
        ),
        (Verdict::Absent, RootOutcome::Found(r)) => Some(format!(
            "verdict_conflict: classifier predicts absence, solver certified a root \
             (winding {})",
            r.winding
        )),
        _ => None,
    }
}

#[derive(Default)]
struct SweepRow {
    curly_u: Option<Complex64>,
    verdict: Option<Verdict>,
    lambda_pred: Option<Complex64>,
    lambda_num: Option<Complex64>,
    ratio: Option<f64>,
    residual: Option<f64>,
    winding: Option<i32>,
    gap: Option<f64>,
    davies: Option<bool>,
    expansion: Option<f64>,
    notes: Vec<String>,
    /// Row-level numerical failure (drives exit code 2).
    failure: bool,
    /// Certified classifier/solver contradiction (drives exit code 3).
    conflict: bool,
}

impl SweepRow {
    fn fail(&mut self, note: String) {
        self.failure = true;
        self.notes.push(note);
    }

    fn cells(self, beta: Complex64) -> Vec<Cell> {
        let [b_re, b_im] = Cell::complex_re_im(beta);
        let [cu_re, cu_im] = self
            .curly_u
            .map_or([Cell::Empty, Cell::Empty], Cell::complex_re_im);
        let [lp_re, lp_im] = self
            .lambda_pred
            .map_or([Cell::Empty, Cell::Empty], Cell::complex_re_im);
        let [ln_re, ln_im] = self
            .lambda_num
            .map_or([Cell::Empty, Cell::Empty], Cell::complex_re_im);
        vec![
            b_re,
            b_im,
            cu_re,
            cu_im,
            self.verdict
                .map_or(Cell::Empty, |v| Cell::Text(v.to_string())),
            lp_re,
            lp_im,
            ln_re,
            ln_im,
            Cell::opt_float(self.ratio),
            Cell::opt_float(self.residual),
            self.winding.map_or(Cell::Empty, |w| Cell::Int(w as i64)),
            Cell::opt_float(self.gap),
            self.davies.map_or(Cell::Empty, Cell::Bool),
            Cell::opt_float(self.expansion),
            if self.notes.is_empty() {
                Cell::Empty
            } else {
                Cell::Text(self.notes.join("; "))
            },
        ]
    }
}

fn assess_coupling(
    beta: Complex64,
    m: &Moments,
    constants: &ThresholdConstants,
    disc: &BSDiscretization,
    opts: &SolverOptions,
    run: &ResolvedRun,
) -> SweepRow {
    let mut row = SweepRow {
        curly_u: Some(curly_u(beta, m.u, m.u1, run.dim)),
        ..Default::default()
    };

    let assessment: Option<CouplingAssessment> =
        match classify_curly_u(beta, m.u, m.u1, run.dim, constants) {
            Ok(a) => {
                row.verdict = Some(a.verdict);
                row.lambda_pred = a.lambda_predicted;
                Some(a)
            }
            Err(e) => {
                row.fail(format!("classifier: {e}"));
                None
            }
        };

    let outcome = match find_root(beta, disc, opts) {
        Ok(o) => Some(o),
        Err(e) => {
            row.fail(format!("solver: {e}"));
            None
        }
    };

    if let Some(RootOutcome::Found(r)) = &outcome {
        row.lambda_num = Some(r.lambda);
        row.ratio = Some(r.lambda.norm() / beta.norm_sqr());
        row.residual = Some(r.residual);
        row.winding = Some(r.winding);
        row.gap = r.bs_eigen_gap.is_finite().then_some(r.bs_eigen_gap);
        row.expansion = Some(expansion_error(r.lambda, beta, m, run.dim));
        if run.dim == Dim::One {
            match davies_enclosure_check(r.lambda, &run.potential, run.quad_order) {
                Ok(ok) => row.davies = Some(ok),
                Err(e) => row.fail(format!("enclosure check: {e}")),
            }
        }
    }
    if let Some(RootOutcome::Absent(cert)) = &outcome {
        row.winding = cert.winding;
    }

    match (&assessment, &outcome) {
        (Some(a), Some(o)) => {
            if let Some(note) = conflict_note(a.verdict, o) {
                row.conflict = true;
                row.notes.push(note);
            } else if a.verdict == Verdict::Exists {
                // The no-silent-gaps invariant: an `exists` row must carry
                // both eigenvalues or say why it cannot.
                if let RootOutcome::Undetermined { detail, .. } = o {
                    row.fail(format!("no_certified_root: {detail}"));
                }
                if row.lambda_pred.is_none() {
                    row.fail("no_eigenvalue_prediction".to_string());
                }
            } else if let RootOutcome::Undetermined { detail, .. } = o {
                row.notes.push(format!("solver_undetermined: {detail}"));
            }
        }
        _ => {}
    }
    row
}

fn cmd_sweep(run: &ResolvedRun) -> Result<(Table, i32), CliError> {
    let mut table = Table::new(SWEEP_COLUMNS);
    if run.betas.is_empty() {
        return Ok((table, 0));
    }
    let m = measured_moments(run)?;
    ensure_nonzero_mass(run, &m)?;
    let constants = run.constants.resolve(m.u);
    let disc = BSDiscretization::from_potential(&run.potential, run.nodes).map_err(num_err)?;
    let opts = SolverOptions {
        constants,
        ..Default::default()
    };

    let mut any_failure = false;
    let mut any_conflict = false;
    for &beta in &run.betas {
        let row = assess_coupling(beta, &m, &constants, &disc, &opts, run);
        any_failure |= row.failure;
        any_conflict |= row.conflict;
        table.push(row.cells(beta));
    }
    let code = if any_conflict {
        3
    } else if any_failure {
        2
    } else {
        0
    };
    Ok((table, code))
}

// ---------------------------------------------------------------------------
// region
// ---------------------------------------------------------------------------

fn grid_value(range: [f64; 2], n: usize, k: usize) -> f64 {
    range[0] + (range[1] - range[0]) * (k as f64) / ((n - 1) as f64)
}

fn cmd_region(run: &ResolvedRun) -> Result<Table, CliError> {
    let rc = run.region.as_ref().ok_or_else(|| {
        CliError::Config(ConfigError::Field {
            field: "region".to_string(),
            message: "the region command needs a `region` section".to_string(),
        })
    })?;
    let mut table = Table::new(&["re", "im", "label"]);
    match rc {
        RegionConfig::Omega { re, im, samples } => {
            for iy in 0..samples[1] {
                let y = grid_value(*im, samples[1], iy);
                for ix in 0..samples[0] {
                    let x = grid_value(*re, samples[0], ix);
                    let label = if in_omega(Complex64::new(x, y), run.dim) {
                        "omega_in"
                    } else {
                        "omega_out"
                    };
                    table.push(vec![
                        Cell::Float(x),
                        Cell::Float(y),
                        Cell::Text(label.to_string()),
                    ]);
                }
            }
        }
        RegionConfig::BetaPlane {
            re,
            im,
            samples,
            rule,
            moments_override,
        } => {
            let (u, u1) = match moments_override {
                Some(mo) => (cx(mo.u), cx(mo.u1)),
                None => {
                    let m = measured_moments(run)?;
                    ensure_nonzero_mass(run, &m)?;
                    (m.u, m.u1)
                }
            };
            // The map shows the formal partition over the whole window, so
            // the smallness gate is widened past every grid point.
            let window_radius = re[0]
                .abs()
                .max(re[1].abs())
                .hypot(im[0].abs().max(im[1].abs()));
            let constants = ThresholdConstants {
                r: run.constants.r,
                r_prime: run.constants.r_prime,
                epsilon: 2.0 * window_radius.max(f64::MIN_POSITIVE),
            };
            for iy in 0..samples[1] {
                let y = grid_value(*im, samples[1], iy);
                for ix in 0..samples[0] {
                    let x = grid_value(*re, samples[0], ix);
                    let beta = Complex64::new(x, y);
                    let assessed = match rule {
                        BetaPlaneRule::CurlyU => {
                            classify_curly_u(beta, u, u1, run.dim, &constants)
                        }
                        BetaPlaneRule::RealPotential => {
                            classify_real_potential(beta, u, u1, run.dim, &constants)
                        }
                    };
                    let verdict = assessed
                        .map_err(|e| {
                            CliError::Numerical(format!(
                                "classification failed at beta = {x} + {y}i: {e}"
                            ))
                        })?
                        .verdict;
                    table.push(vec![
                        Cell::Float(x),
                        Cell::Float(y),
                        Cell::Text(verdict.to_string()),
                    ]);
                }
            }
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

const CALIBRATE_COLUMNS: &[&str] = &[
    "beta_re",
    "beta_im",
    "verdict",
    "solver",
    "winding",
    "residual",
    "bs_eigen_gap",
    "consistent",
    "note",
];

fn cmd_calibrate(run: &ResolvedRun) -> Result<(Table, i32), CliError> {
    let mut table = Table::new(CALIBRATE_COLUMNS);
    if run.betas.is_empty() {
        return Ok((table, 0));
    }
    let m = measured_moments(run)?;
    ensure_nonzero_mass(run, &m)?;
    let constants = run.constants.resolve(m.u);
    let disc = BSDiscretization::from_potential(&run.potential, run.nodes).map_err(num_err)?;
    let opts = SolverOptions {
        constants,
        ..Default::default()
    };

    let mut any_failure = false;
    let mut any_conflict = false;
    for &beta in &run.betas {
        let [b_re, b_im] = Cell::complex_re_im(beta);
        let assessed = classify_curly_u(beta, m.u, m.u1, run.dim, &constants);
        let outcome = find_root(beta, &disc, &opts);
        let row = match (assessed, outcome) {
            (Ok(a), Ok(o)) => {
                let (solver, winding, residual, gap, detail) = match &o {
                    RootOutcome::Found(r) => (
                        "found",
                        Some(r.winding),
                        Some(r.residual),
                        r.bs_eigen_gap.is_finite().then_some(r.bs_eigen_gap),
                        None,
                    ),
                    RootOutcome::Absent(cert) => {
                        ("absent", cert.winding, None, None, None)
                    }
                    RootOutcome::Undetermined { detail, .. } => {
                        ("undetermined", None, None, None, Some(detail.clone()))
                    }
                };
                let note = conflict_note(a.verdict, &o);
                let consistent = note.is_none();
                any_conflict |= !consistent;
                vec![
                    b_re,
                    b_im,
                    Cell::Text(a.verdict.to_string()),
                    Cell::Text(solver.to_string()),
                    winding.map_or(Cell::Empty, |w| Cell::Int(w as i64)),
                    Cell::opt_float(residual),
                    Cell::opt_float(gap),
                    Cell::Bool(consistent),
                    match (note, detail) {
                        (Some(n), _) => Cell::Text(n),
                        (None, Some(d)) => Cell::Text(format!("solver_undetermined: {d}")),
                        (None, None) => Cell::Empty,
                    },
                ]
            }
            (assessed, outcome) => {
                any_failure = true;
                let mut notes = Vec::new();
                let verdict_cell = match assessed {
                    Ok(a) => Cell::Text(a.verdict.to_string()),
                    Err(e) => {
                        notes.push(format!("classifier: {e}"));
                        Cell::Empty
                    }
                };
                let solver_cell = match outcome {
                    Ok(_) => Cell::Text("unchecked".to_string()),
                    Err(e) => {
                        notes.push(format!("solver: {e}"));
                        Cell::Empty
                    }
                };
                vec![
                    b_re,
                    b_im,
                    verdict_cell,
                    solver_cell,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Text(notes.join("; ")),
                ]
            }
        };
        table.push(row);
    }
    let code = if any_conflict {
        3
    } else if any_failure {
        2
    } else {
        0
    };
    Ok((table, code))
}
