//! The versioned JSON run configuration shared by every subcommand.
//!
//! A configuration names a dimension, a potential, the couplings to assess
//! (an explicit list or a polar θ/ε grid), discretization sizes, threshold
//! constants, an optional region-map request, and output preferences.
//! Loading performs full validation up front: schema-version and field
//! checks, dimension compatibility of the potential, the dense-eigensolve
//! node cap, and the nonzero-coupling invariant. Command-line flags
//! (`--nodes`, `--quad-order`, `--format`, `--out`) override the
//! corresponding document fields after parsing.

use num_complex::Complex64;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use thiserror::Error;
use wclab_core::birman_schwinger::DENSE_EIGEN_CAP;
use wclab_core::{Dim, Potential, SupportBox, ThresholdConstants};

/// The schema version this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Configuration failures: I/O, JSON syntax (with position), or a named
/// field that fails validation.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("config field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.to_string(),
        message: message.into(),
    }
}

/// A complex number in the document: `[re, im]`.
pub type ComplexPair = [f64; 2];

pub fn cx(pair: ComplexPair) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

/// Top-level run configuration document.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    /// Spatial dimension: 1 or 2.
    pub dimension: u8,
    pub potential: PotentialConfig,
    #[serde(default)]
    pub beta: BetaConfig,
    #[serde(default)]
    pub discretization: DiscretizationConfig,
    #[serde(default)]
    pub constants: ConstantsConfig,
    /// Required by the `region` command only.
    #[serde(default)]
    pub region: Option<RegionConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Axis-aligned support box: `lo[i] ≤ x_i ≤ hi[i]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// One constant piece of a piecewise potential on the line.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceConfig {
    pub from: f64,
    pub to: f64,
    pub height: ComplexPair,
}

/// Potential kinds. Internally tagged on `"kind"`.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialConfig {
    /// Constant `height` on a support box (1D or 2D).
    Box {
        height: ComplexPair,
        support: SupportConfig,
    },
    /// Isotropic Gaussian `amplitude·exp(−|x−center|²/(2σ²))`, truncated
    /// at 8σ (1D or 2D).
    Gaussian {
        amplitude: ComplexPair,
        center: Vec<f64>,
        sigma: f64,
    },
    /// Sum of complex-height boxes on the line (1D only).
    ComplexBox { pieces: Vec<PieceConfig> },
    /// Piecewise-constant cell values on a uniform nx × ny grid over the
    /// support (`ny = 1` in 1D). Values are x-major: index = ix·ny + iy.
    Grid {
        support: SupportConfig,
        nx: usize,
        #[serde(default = "one")]
        ny: usize,
        values: Vec<ComplexPair>,
    },
    /// The 2D family α + i·cos(2π x₁) on the unit square (2D only).
    VAlpha { alpha: f64 },
}

fn one() -> usize {
    1
}

/// Couplings to assess: an explicit list, or the polar family
/// β = ε·e^{iθ} over a θ × ε grid (θ-major order). Exactly one of the two
/// may be present; neither means an empty sweep.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaConfig {
    #[serde(default)]
    pub values: Option<Vec<ComplexPair>>,
    #[serde(default)]
    pub polar: Option<PolarConfig>,
}

/// Polar coupling grid: every pairing of an angle with a radius.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarConfig {
    /// Radii ε > 0.
    pub epsilons: Vec<f64>,
    /// Angles θ in radians.
    pub thetas: Vec<f64>,
}

/// Discretization sizes. `nodes_per_axis` feeds the integral-equation
/// solver (total node count is capped by the dense eigensolver);
/// `quadrature_order` feeds moment integrals and norm measurements.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiscretizationConfig {
    /// Defaults to 200 in 1D and 32 in 2D.
    pub nodes_per_axis: Option<usize>,
    /// Defaults to 200 in 1D and 48 in 2D.
    pub quadrature_order: Option<usize>,
}

/// Threshold constants for the classifiers. The smallness radius ε is
/// taken verbatim when set; otherwise the `mass_scaled_epsilon`
/// calibration flag (default on) selects ε = 0.2/max(1, |U|), and
/// switching it off selects the flat default ε = 0.2.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    pub r: f64,
    pub r_prime: f64,
    pub epsilon: Option<f64>,
    pub mass_scaled_epsilon: bool,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            r: 1.0,
            r_prime: 1.0,
            epsilon: None,
            mass_scaled_epsilon: true,
        }
    }
}

impl ConstantsConfig {
    /// Resolves the document into solver constants, given the measured
    /// potential mass U (used only when ε is mass-scaled).
    pub fn resolve(&self, u: Complex64) -> ThresholdConstants {
        let epsilon = match (self.epsilon, self.mass_scaled_epsilon) {
            (Some(e), _) => e,
            (None, true) => ThresholdConstants::for_mass(u).epsilon,
            (None, false) => ThresholdConstants::default().epsilon,
        };
        ThresholdConstants {
            r: self.r,
            r_prime: self.r_prime,
            epsilon,
        }
    }
}

/// Which classifier labels a coupling-plane map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaPlaneRule {
    /// General complex-potential conditions on 𝒰(β).
    CurlyU,
    /// Real-potential conditions phrased directly in β (requires real
    /// moments with U > 0).
    RealPotential,
}

/// Moments override for schematic coupling-plane maps (e.g. the nominal
/// U = U₁ = 1 partition), bypassing measurement of the configured
/// potential.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsOverride {
    pub u: ComplexPair,
    pub u1: ComplexPair,
}

/// Region-map request. Internally tagged on `"map"`.
#[derive(Debug, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum RegionConfig {
    /// Rasterize the spectral-parameter domain Ω: labels `omega_in` /
    /// `omega_out`.
    Omega {
        re: [f64; 2],
        im: [f64; 2],
        samples: [usize; 2],
    },
    /// Rasterize classifier verdicts over a coupling-plane window:
    /// labels `exists` / `absent` / `undetermined`. The smallness gate is
    /// widened to cover the whole window, so the map shows the formal
    /// partition rather than erroring outside the configured ε.
    BetaPlane {
        re: [f64; 2],
        im: [f64; 2],
        samples: [usize; 2],
        #[serde(default = "default_rule")]
        rule: BetaPlaneRule,
        #[serde(default)]
        moments_override: Option<MomentsOverride>,
    },
}

fn default_rule() -> BetaPlaneRule {
    BetaPlaneRule::CurlyU
}

/// Output format, shared by the document and the `--format` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// Output preferences: format (default CSV) and destination (default
/// stdout).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<String>,
}

/// A fully validated run: core objects plus resolved sizes and output
/// preferences.
#[derive(Debug)]
pub struct ResolvedRun {
    pub dim: Dim,
    pub potential: Potential,
    /// For the `v_alpha` kind, the configured α (drives the α* report).
    pub v_alpha: Option<f64>,
    pub betas: Vec<Complex64>,
    /// Solver nodes per axis (total count respects the dense cap).
    pub nodes: usize,
    pub quad_order: usize,
    pub constants: ConstantsConfig,
    pub region: Option<RegionConfig>,
    pub format: Format,
    pub out_path: Option<PathBuf>,
}

/// Flag-level overrides applied on top of the document.
#[derive(Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub nodes: Option<usize>,
    pub quad_order: Option<usize>,
}

/// Reads, parses, validates, and resolves a configuration file.
pub fn load(path: &Path, overrides: &Overrides) -> Result<ResolvedRun, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    resolve(cfg, overrides)
}

fn resolve(cfg: RunConfig, overrides: &Overrides) -> Result<ResolvedRun, ConfigError> {
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(field_err(
            "schema_version",
            format!(
                "unsupported version {} (this build reads version {SCHEMA_VERSION})",
                cfg.schema_version
            ),
        ));
    }
    let dim = match cfg.dimension {
        1 => Dim::One,
        2 => Dim::Two,
        other => {
            return Err(field_err(
                "dimension",
                format!("must be 1 or 2, got {other}"),
            ))
        }
    };

    let (potential, v_alpha) = build_potential(&cfg.potential, dim)?;
    let betas = resolve_betas(&cfg.beta)?;

    let nodes = overrides
        .nodes
        .or(cfg.discretization.nodes_per_axis)
        .unwrap_or(match dim {
            Dim::One => 200,
            Dim::Two => 32,
        });
    if nodes == 0 {
        return Err(field_err(
            "discretization.nodes_per_axis",
            "must be at least 1",
        ));
    }
    let total_nodes = match dim {
        Dim::One => Some(nodes),
        Dim::Two => nodes.checked_mul(nodes),
    };
    match total_nodes {
        Some(n) if n <= DENSE_EIGEN_CAP => {}
        _ => {
            return Err(field_err(
                "discretization.nodes_per_axis",
                format!(
                    "total node count exceeds the dense-eigensolve cap {DENSE_EIGEN_CAP} \
                     (got {nodes} per axis in {} dimension(s))",
                    dim.ncoords()
                ),
            ))
        }
    }

    let quad_order = overrides
        .quad_order
        .or(cfg.discretization.quadrature_order)
        .unwrap_or(match dim {
            Dim::One => 200,
            Dim::Two => 48,
        });
    if quad_order == 0 {
        return Err(field_err(
            "discretization.quadrature_order",
            "must be at least 1",
        ));
    }

    validate_constants(&cfg.constants)?;
    if let Some(region) = &cfg.region {
        validate_region(region)?;
    }

    let format = overrides
        .format
        .or(cfg.output.format)
        .unwrap_or(Format::Csv);
    let out_path = overrides
        .out
        .clone()
        .or_else(|| cfg.output.path.as_ref().map(PathBuf::from));

    Ok(ResolvedRun {
        dim,
        potential,
        v_alpha,
        betas,
        nodes,
        quad_order,
        constants: cfg.constants,
        region: cfg.region,
        format,
        out_path,
    })
}

fn support_box(sc: &SupportConfig, dim: Dim, field: &str) -> Result<SupportBox, ConfigError> {
    let n = dim.ncoords();
    if sc.lo.len() != n || sc.hi.len() != n {
        return Err(field_err(
            field,
            format!(
                "lo/hi must each have {n} coordinate(s), got {} and {}",
                sc.lo.len(),
                sc.hi.len()
            ),
        ));
    }
    let built = match dim {
        Dim::One => SupportBox::interval(sc.lo[0], sc.hi[0]),
        Dim::Two => SupportBox::rectangle([sc.lo[0], sc.lo[1]], [sc.hi[0], sc.hi[1]]),
    };
    built.map_err(|e| field_err(field, e.to_string()))
}

fn build_potential(
    pc: &PotentialConfig,
    dim: Dim,
) -> Result<(Potential, Option<f64>), ConfigError> {
    let field = "potential";
    let wrap = |r: Result<Potential, wclab_core::potential::PotentialError>| {
        r.map_err(|e| field_err(field, e.to_string()))
    };
    match pc {
        PotentialConfig::Box { height, support } => {
            let sb = support_box(support, dim, "potential.support")?;
            let v = match dim {
                Dim::One => wrap(Potential::box_1d(cx(*height), sb.lo()[0], sb.hi()[0]))?,
                Dim::Two => wrap(Potential::box_2d(
                    cx(*height),
                    [sb.lo()[0], sb.lo()[1]],
                    [sb.hi()[0], sb.hi()[1]],
                ))?,
            };
            Ok((v, None))
        }
        PotentialConfig::Gaussian {
            amplitude,
            center,
            sigma,
        } => {
            if center.len() != dim.ncoords() {
                return Err(field_err(
                    "potential.center",
                    format!(
                        "must have {} coordinate(s), got {}",
                        dim.ncoords(),
                        center.len()
                    ),
                ));
            }
            let v = match dim {
                Dim::One => wrap(Potential::gaussian_1d(cx(*amplitude), center[0], *sigma))?,
                Dim::Two => wrap(Potential::gaussian_2d(
                    cx(*amplitude),
                    [center[0], center[1]],
                    *sigma,
                ))?,
            };
            Ok((v, None))
        }
        PotentialConfig::ComplexBox { pieces } => {
            if dim != Dim::One {
                return Err(field_err(
                    field,
                    "kind `complex_box` is one-dimensional; set dimension = 1",
                ));
            }
            let pieces: Vec<(f64, f64, Complex64)> = pieces
                .iter()
                .map(|p| (p.from, p.to, cx(p.height)))
                .collect();
            Ok((wrap(Potential::complex_box_1d(&pieces))?, None))
        }
        PotentialConfig::Grid {
            support,
            nx,
            ny,
            values,
        } => {
            let sb = support_box(support, dim, "potential.support")?;
            let values: Vec<Complex64> = values.iter().map(|v| cx(*v)).collect();
            Ok((wrap(Potential::from_grid(sb, *nx, *ny, values))?, None))
        }
        PotentialConfig::VAlpha { alpha } => {
            if dim != Dim::Two {
                return Err(field_err(
                    field,
                    "kind `v_alpha` is two-dimensional; set dimension = 2",
                ));
            }
            if !alpha.is_finite() {
                return Err(field_err("potential.alpha", "must be finite"));
            }
            Ok((Potential::v_alpha(*alpha), Some(*alpha)))
        }
    }
}

fn resolve_betas(bc: &BetaConfig) -> Result<Vec<Complex64>, ConfigError> {
    match (&bc.values, &bc.polar) {
        (Some(_), Some(_)) => Err(field_err(
            "beta",
            "give either `values` or `polar`, not both",
        )),
        (Some(values), None) => {
            let mut betas = Vec::with_capacity(values.len());
            for (i, pair) in values.iter().enumerate() {
                let b = cx(*pair);
                if !(b.re.is_finite() && b.im.is_finite()) {
                    return Err(field_err(
                        &format!("beta.values[{i}]"),
                        "must be finite",
                    ));
                }
                if b.norm() == 0.0 {
                    return Err(field_err(
                        &format!("beta.values[{i}]"),
                        "couplings must be nonzero",
                    ));
                }
                betas.push(b);
            }
            Ok(betas)
        }
        (None, Some(polar)) => {
            for (i, eps) in polar.epsilons.iter().enumerate() {
                if !(eps.is_finite() && *eps > 0.0) {
                    return Err(field_err(
                        &format!("beta.polar.epsilons[{i}]"),
                        format!("radii must be positive and finite, got {eps}"),
                    ));
                }
            }
            for (i, theta) in polar.thetas.iter().enumerate() {
                if !theta.is_finite() {
                    return Err(field_err(
                        &format!("beta.polar.thetas[{i}]"),
                        "angles must be finite",
                    ));
                }
            }
            let mut betas = Vec::with_capacity(polar.thetas.len() * polar.epsilons.len());
            for theta in &polar.thetas {
                for eps in &polar.epsilons {
                    betas.push(Complex64::from_polar(*eps, *theta));
                }
            }
            Ok(betas)
        }
        (None, None) => Ok(Vec::new()),
    }
}

fn validate_constants(cc: &ConstantsConfig) -> Result<(), ConfigError> {
    if !(cc.r.is_finite() && cc.r > 0.0) {
        return Err(field_err(
            "constants.r",
            format!("must be positive and finite, got {}", cc.r),
        ));
    }
    if !(cc.r_prime.is_finite() && cc.r_prime > 0.0) {
        return Err(field_err(
            "constants.r_prime",
            format!("must be positive and finite, got {}", cc.r_prime),
        ));
    }
    if let Some(eps) = cc.epsilon {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(field_err(
                "constants.epsilon",
                format!("must be positive and finite, got {eps}"),
            ));
        }
    }
    Ok(())
}

fn validate_region(rc: &RegionConfig) -> Result<(), ConfigError> {
    let (re, im, samples, override_moments) = match rc {
        RegionConfig::Omega { re, im, samples } => (re, im, samples, None),
        RegionConfig::BetaPlane {
            re,
            im,
            samples,
            moments_override,
            ..
        } => (re, im, samples, moments_override.as_ref()),
    };
    for (axis, (range, n)) in [(re, samples[0]), (im, samples[1])].iter().enumerate() {
        let name = ["region.re", "region.im"][axis];
        if !(range[0].is_finite() && range[1].is_finite()) {
            return Err(field_err(name, "bounds must be finite"));
        }
        if *n < 2 || !(range[0] < range[1]) {
            return Err(field_err(
                name,
                format!(
                    "degenerate grid: need at least 2 samples over a window of \
                     positive width, got {n} samples over [{}, {}]",
                    range[0], range[1]
                ),
            ));
        }
    }
    if let Some(mo) = override_moments {
        if cx(mo.u).norm() == 0.0 {
            return Err(field_err(
                "region.moments_override.u",
                "classification requires U != 0",
            ));
        }
    }
    Ok(())
}
