//! Experiment configuration and orchestration: admissibility at the base
//! point, the WKB solution, growth fit, pseudomode h-sweeps and their reports.

pub mod parse;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fieldmodel::{
    check_c, check_h, CCheck, CVerdict, ConditionCheckConfig, FieldSpec, GammaReport, HReport, Poly, Potential, Region,
    Sign,
};
use crate::numop::{residual_finite_difference, NumopError};
use crate::pseudomode::{
    fit_decay, residual_series_exact, CutoffSpec, DecayFit, DecayModel, NRule, Pseudomode, PseudomodeError,
    ResidualReport, CSV_HEADER,
};
use crate::wkb::{fit_growth, required_cap, BoundFit, WkbError, WkbSolution, DEFAULT_ORDER};

/// Environment variable holding the worker count of the global pool.
pub const THREADS_ENV: &str = "CMAG_WKB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("base point rejected: {0}")]
    Gamma(String),
    #[error("series identity failed: {0}")]
    Identity(String),
    #[error("quadrature: {0}")]
    Quadrature(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Gamma(_) => 3,
            ExperimentError::Identity(_) => 4,
            ExperimentError::Quadrature(_) => 5,
            ExperimentError::Io(_) => 1,
        }
    }
}

impl From<WkbError> for ExperimentError {
    fn from(e: WkbError) -> Self {
        match e {
            WkbError::Budget { .. } => ExperimentError::Config(e.to_string()),
            WkbError::FieldVanishes | WkbError::Degenerate => ExperimentError::Gamma(e.to_string()),
            WkbError::Identity { .. } | WkbError::Series(_) => ExperimentError::Identity(e.to_string()),
        }
    }
}

impl From<PseudomodeError> for ExperimentError {
    fn from(e: PseudomodeError) -> Self {
        match e {
            PseudomodeError::NotPositive(_) | PseudomodeError::NoValidityDisc => ExperimentError::Gamma(e.to_string()),
            PseudomodeError::InconsistentField { .. } => ExperimentError::Identity(e.to_string()),
            PseudomodeError::Unresolved { .. } => ExperimentError::Quadrature(e.to_string()),
            PseudomodeError::Domain(_) | PseudomodeError::TooFewReports => ExperimentError::Config(e.to_string()),
        }
    }
}

impl From<NumopError> for ExperimentError {
    fn from(e: NumopError) -> Self {
        match e {
            NumopError::SupportViolation { .. } => ExperimentError::Quadrature(e.to_string()),
            NumopError::Io(io) => ExperimentError::Io(io),
            _ => ExperimentError::Config(e.to_string()),
        }
    }
}

fn polynomial_default_r() -> Poly {
    let one = Complex64::new(1.0, 0.0);
    Poly::new([([6, 0], one), ([4, 2], 3.0 * one), ([2, 4], 3.0 * one), ([0, 6], one)])
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn imag_unit() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Field choice as written in configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldConfig {
    Oscillating,
    Polynomial {
        #[serde(default = "one", deserialize_with = "parse::complex")]
        a: Complex64,
        #[serde(default = "imag_unit", deserialize_with = "parse::complex")]
        b: Complex64,
        #[serde(default = "one", deserialize_with = "parse::complex")]
        c: Complex64,
        #[serde(default = "polynomial_default_r")]
        r: Poly,
    },
    MillerSimon {
        #[serde(deserialize_with = "parse::complex")]
        c: Complex64,
        alpha: f64,
    },
    Exponential {
        c: f64,
    },
    User {
        a1: Poly,
        a2: Poly,
    },
}

impl FieldConfig {
    pub fn potential(&self) -> Potential {
        match self.clone() {
            FieldConfig::Oscillating => Potential::Oscillating,
            FieldConfig::Polynomial { a, b, c, r } => Potential::Polynomial { a, b, c, r },
            FieldConfig::MillerSimon { c, alpha } => Potential::MillerSimon { c, alpha },
            FieldConfig::Exponential { c } => Potential::Exponential { c },
            FieldConfig::User { a1, a2 } => Potential::User { a1, a2 },
        }
    }

    /// The builtin with its default parameters, by name.
    pub fn builtin(name: &str) -> Result<Self, String> {
        Ok(match name {
            "oscillating" => FieldConfig::Oscillating,
            "polynomial" => FieldConfig::Polynomial {
                a: one(),
                b: imag_unit(),
                c: one(),
                r: polynomial_default_r(),
            },
            "miller_simon" => FieldConfig::MillerSimon {
                c: Complex64::new(1.0, 1.0),
                alpha: 1.0,
            },
            "exponential" => FieldConfig::Exponential { c: 0.4 },
            _ => return Err(format!("unknown builtin {name:?} (oscillating, polynomial, miller_simon, exponential)")),
        })
    }
}

/// Geometric h-sweep from `h_max` down to `h_min`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(deserialize_with = "parse::real")]
    pub h_max: f64,
    #[serde(deserialize_with = "parse::real")]
    pub h_min: f64,
    pub count: usize,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            h_max: 0.1,
            h_min: 0.003,
            count: 8,
        }
    }
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.h_max];
        }
        let ratio = self.h_min / self.h_max;
        (0..self.count)
            .map(|k| self.h_max * ratio.powf(k as f64 / (self.count - 1) as f64))
            .collect()
    }
}

/// How many corrections enter `u_h`; `m` of the adaptive rule defaults to the fitted one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleConfig {
    Fixed { n: usize },
    Adaptive { m: Option<f64> },
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig::Fixed { n: 1 }
    }
}

fn default_cap() -> usize {
    40
}

fn default_order() -> usize {
    DEFAULT_ORDER
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub field: FieldConfig,
    /// Optional gauge polynomial added to the potential as its gradient.
    #[serde(default)]
    pub gauge: Option<Poly>,
    #[serde(deserialize_with = "parse::point")]
    pub base_point: [f64; 2],
    #[serde(default = "default_cap")]
    pub degree_cap: usize,
    /// Number of transport corrections computed.
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub rule: RuleConfig,
    #[serde(default)]
    pub sweep: Sweep,
    /// Validity radius of the cutoff; chosen automatically when absent.
    #[serde(default)]
    pub delta: Option<f64>,
    /// Grid points per axis for an additional finite-difference evaluation.
    #[serde(default)]
    pub fd_points: Option<usize>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Recorded with the run; the pipeline itself draws no random numbers.
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(field: FieldConfig, base_point: [f64; 2]) -> Self {
        Self {
            field,
            gauge: None,
            base_point,
            degree_cap: default_cap(),
            order: default_order(),
            rule: RuleConfig::default(),
            sweep: Sweep::default(),
            delta: None,
            fd_points: None,
            output_dir: default_output(),
            seed: 0,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn potential(&self) -> Potential {
        let p = self.field.potential();
        match &self.gauge {
            Some(g) => p.gauged(g.clone()),
            None => p,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let s = &self.sweep;
        if !(s.h_min > 0.0 && s.h_min < s.h_max) {
            return Err(ExperimentError::Config(format!(
                "sweep needs 0 < h_min < h_max, got {} and {}",
                s.h_min, s.h_max
            )));
        }
        if s.count < 4 {
            return Err(ExperimentError::Config(format!("sweep needs at least 4 points, got {}", s.count)));
        }
        let need = required_cap(self.order);
        if self.degree_cap < need {
            return Err(ExperimentError::Config(format!(
                "degree cap {} cannot carry {} corrections (needs {need})",
                self.degree_cap, self.order
            )));
        }
        if let RuleConfig::Fixed { n } = self.rule {
            if n > self.order {
                return Err(ExperimentError::Config(format!(
                    "fixed N = {n} exceeds the {} computed corrections",
                    self.order
                )));
            }
        }
        Ok(())
    }
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub gamma: GammaReport,
    pub solution: Arc<WkbSolution>,
    pub bound_fit: BoundFit,
    pub rule: NRule,
    pub cutoff: CutoffSpec,
    pub reports: Vec<ResidualReport>,
    pub power_fit: Option<DecayFit>,
    pub stretched_fit: Option<DecayFit>,
}

/// Fit summary written next to the CSV.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary<'a> {
    pub mu: Complex64,
    pub rule: NRule,
    pub cutoff: &'a CutoffSpec,
    pub phase_form: [f64; 3],
    pub identities_pass: bool,
    pub worst_identity: f64,
    pub power_fit: Option<&'a DecayFit>,
    pub stretched_fit: Option<&'a DecayFit>,
}

/// Admissibility of the base point; the diagnostic lists every failed condition.
pub fn admissibility(field: &FieldSpec) -> Result<GammaReport, String> {
    let gamma = field.compute_q();
    let mut problems: Vec<String> = gamma.failed_conditions.iter().map(|c| c.describe().to_string()).collect();
    if gamma.in_gamma && !gamma.phase_positive {
        problems.push(format!(
            "quadratic part of Re P is not positive definite (Q1, Q2, Q3) = ({:.6}, {:.6}, {:.6})",
            gamma.phase_form[0], gamma.phase_form[1], gamma.phase_form[2]
        ));
    }
    if problems.is_empty() {
        Ok(gamma)
    } else {
        Err(problems.join("; "))
    }
}

/// Polydisc radius used for the growth fit.
pub fn probe_radius(field: &FieldSpec, sol: &WkbSolution) -> f64 {
    sol.trusted_radii[0].min(0.25 * field.analytic_radius())
}

/// Series-exact reports (and finite-difference ones when `fd_points` is set)
/// for every `h`, in sweep order.
pub fn residual_sweep(
    pm: &Pseudomode,
    hs: &[f64],
    fd_points: Option<usize>,
) -> Result<Vec<ResidualReport>, ExperimentError> {
    let series: Result<Vec<_>, _> = hs.par_iter().map(|&h| residual_series_exact(pm, h)).collect();
    let mut reports = series?;
    if let Some(n) = fd_points {
        let fd: Result<Vec<_>, _> = hs.par_iter().map(|&h| residual_finite_difference(pm, h, n)).collect();
        reports.extend(fd?);
    }
    Ok(reports)
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunArtifacts, ExperimentError> {
    cfg.validate()?;
    let field = FieldSpec::new(cfg.potential(), cfg.base_point, cfg.degree_cap)
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    let gamma = admissibility(&field).map_err(ExperimentError::Gamma)?;
    let sol = Arc::new(WkbSolution::build(&field, cfg.order)?);
    let r = probe_radius(&field, &sol);
    let bound_fit = fit_growth(&sol, [r, r]);
    let rule = match cfg.rule {
        RuleConfig::Fixed { n } => NRule::Fixed { n },
        RuleConfig::Adaptive { m } => NRule::Adaptive {
            m: m.unwrap_or(bound_fit.m_fitted),
        },
    };
    let pm = Pseudomode::new(&field, sol.clone(), rule, cfg.delta)?;
    let series_only: Vec<f64> = cfg.sweep.values();
    let reports = residual_sweep(&pm, &series_only, cfg.fd_points)?;
    let exact: Vec<ResidualReport> = reports.iter().take(series_only.len()).cloned().collect();
    let power_fit = fit_decay(&exact, DecayModel::Power).ok();
    let stretched_fit = fit_decay(&exact, DecayModel::Stretched).ok();
    Ok(RunArtifacts {
        gamma,
        solution: sol,
        bound_fit,
        rule,
        cutoff: *pm.cutoff(),
        reports,
        power_fit,
        stretched_fit,
    })
}

/// WKB solution and its growth fit at the configured base point, without the
/// pseudomode stage.
pub fn solution_and_growth(cfg: &ExperimentConfig) -> Result<(Arc<WkbSolution>, BoundFit), ExperimentError> {
    cfg.validate()?;
    let field = FieldSpec::new(cfg.potential(), cfg.base_point, cfg.degree_cap)
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    let sol = Arc::new(WkbSolution::build(&field, cfg.order)?);
    let r = probe_radius(&field, &sol);
    let fit = fit_growth(&sol, [r, r]);
    Ok((sol, fit))
}

pub fn residual_csv(reports: &[ResidualReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports always serialize")
}

/// Writes `gamma.json`, `wkb.json`, `bound_fit.json`, `residuals.csv`,
/// `residuals.json` and `summary.json` into the output directory.
pub fn write_artifacts(dir: &Path, a: &RunArtifacts) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("gamma.json"), pretty(&a.gamma))?;
    std::fs::write(dir.join("wkb.json"), a.solution.to_json())?;
    std::fs::write(dir.join("bound_fit.json"), pretty(&a.bound_fit))?;
    std::fs::write(dir.join("residuals.csv"), residual_csv(&a.reports))?;
    std::fs::write(dir.join("residuals.json"), pretty(&a.reports))?;
    let summary = RunSummary {
        mu: a.solution.mu,
        rule: a.rule,
        cutoff: &a.cutoff,
        phase_form: a.gamma.phase_form,
        identities_pass: a.solution.identities.all_pass(),
        worst_identity: a.solution.identities.worst_relative(),
        power_fit: a.power_fit.as_ref(),
        stretched_fit: a.stretched_fit.as_ref(),
    };
    std::fs::write(dir.join("summary.json"), pretty(&summary))?;
    Ok(())
}

pub const GAMMA_CSV_HEADER: &str = "# cmag-wkb v1\nx1,x2,in_gamma,q1,q2,q3,det2,phase_positive,failed";

pub fn gamma_csv(reports: &[GammaReport]) -> String {
    let mut out = String::from(GAMMA_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let failed: Vec<String> = r
            .failed_conditions
            .iter()
            .map(|c| serde_json::to_string(c).expect("enum serializes").trim_matches('"').to_string())
            .collect();
        out.push_str(&format!(
            "{:?},{:?},{},{:?},{:?},{:?},{:?},{},{}\n",
            r.point[0],
            r.point[1],
            r.in_gamma,
            r.q1,
            r.q2,
            r.q3,
            r.det2,
            r.phase_positive,
            failed.join("|")
        ));
    }
    out
}

/// Both signs of both pointwise conditions and the growth trends.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionsSummary {
    pub c1: [CVerdict; 2],
    pub c2: [CVerdict; 2],
    pub h: HReport,
}

impl ConditionsSummary {
    pub fn c1_pass(&self) -> bool {
        self.c1.iter().any(|v| v.pass)
    }

    pub fn c2_pass(&self) -> bool {
        self.c2.iter().any(|v| v.pass)
    }

    pub fn table(&self) -> String {
        let mut out = String::from("check,sign,pass,epsilon_admissible,min_slack,worst_x1,worst_x2\n");
        for v in self.c1.iter().chain(&self.c2) {
            out.push_str(&format!(
                "{:?},{:?},{},{},{:?},{:?},{:?}\n",
                v.which, v.sign, v.pass, v.epsilon_admissible, v.min_slack, v.worst_point[0], v.worst_point[1]
            ));
        }
        for (name, t) in [("H1", &self.h.h1), ("H2", &self.h.h2), ("H3", &self.h.h3)] {
            out.push_str(&format!("{name},,{},,{:?},,\n", t.diverges, t.growth_exponent));
        }
        out
    }
}

pub const DEFAULT_H_RADII: [f64; 6] = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5];

pub fn check_conditions(potential: &Potential, cfg: &ConditionCheckConfig, radii: &[f64]) -> ConditionsSummary {
    let both = |which| [check_c(potential, cfg, which, Sign::Plus), check_c(potential, cfg, which, Sign::Minus)];
    ConditionsSummary {
        c1: both(CCheck::C1),
        c2: both(CCheck::C2),
        h: check_h(potential, radii),
    }
}

pub fn default_condition_config() -> ConditionCheckConfig {
    ConditionCheckConfig {
        epsilon: 0.25,
        c_const: 10.0,
        region: Region::square(4.0),
        density: 81,
        h: 1.0,
    }
}

#[cfg(test)]
mod tests;
