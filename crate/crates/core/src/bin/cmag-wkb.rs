use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use cmag_wkb::experiment::{
    self, parse, ExperimentConfig, ExperimentError, FieldConfig, RuleConfig, Sweep, DEFAULT_H_RADII, THREADS_ENV,
};
use cmag_wkb::fieldmodel::{gamma_scan, Region};

#[derive(Parser)]
#[command(name = "cmag-wkb", version, about = "WKB pseudomodes for complex magnetic Laplacians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the WKB solution at a point and sweep the pseudomode residual over h.
    Run(RunArgs),
    /// Classify a grid of points against the admissibility conditions.
    GammaScan(ScanArgs),
    /// Sample the pointwise conditions C1, C2 and the growth hypotheses H1-H3.
    CheckConditions(ConditionArgs),
    /// Amplitude norms on the probe polydisc and the fitted growth constants.
    BoundFit(BoundArgs),
}

#[derive(Args, Clone, Default)]
struct FieldArgs {
    /// oscillating, polynomial, miller_simon or exponential.
    #[arg(long)]
    builtin: Option<String>,
    /// Polynomial coefficient of 1; accepts forms like `1`, `i`, `1+2i`.
    #[arg(long, value_parser = parse::parse_complex)]
    a: Option<Complex64>,
    /// Polynomial coefficient of x1.
    #[arg(long, value_parser = parse::parse_complex)]
    b: Option<Complex64>,
    /// Polynomial coefficient of x2, or the Miller-Simon / exponential strength.
    #[arg(long, value_parser = parse::parse_complex)]
    c: Option<Complex64>,
    /// Miller-Simon decay exponent.
    #[arg(long, value_parser = parse::parse_real)]
    alpha: Option<f64>,
}

impl FieldArgs {
    fn resolve(&self, base: Option<FieldConfig>) -> Result<FieldConfig, ExperimentError> {
        let mut field = match (&self.builtin, base) {
            (Some(name), _) => FieldConfig::builtin(name).map_err(ExperimentError::Config)?,
            (None, Some(f)) => f,
            (None, None) => return Err(ExperimentError::Config("no field: pass --builtin or --config".into())),
        };
        match &mut field {
            FieldConfig::Polynomial { a, b, c, .. } => {
                *a = self.a.unwrap_or(*a);
                *b = self.b.unwrap_or(*b);
                *c = self.c.unwrap_or(*c);
            }
            FieldConfig::MillerSimon { c, alpha } => {
                *c = self.c.unwrap_or(*c);
                *alpha = self.alpha.unwrap_or(*alpha);
            }
            FieldConfig::Exponential { c } => {
                if let Some(v) = self.c {
                    if v.im != 0.0 {
                        return Err(ExperimentError::Config(format!("exponential strength must be real, got {v}")));
                    }
                    *c = v.re;
                }
            }
            _ => {}
        }
        Ok(field)
    }
}

#[derive(Args, Clone)]
struct SolutionArgs {
    /// TOML experiment file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    field: FieldArgs,
    /// Base point `x1,x2`; `pi` fractions are accepted.
    #[arg(long, value_parser = parse::parse_point, allow_hyphen_values = true)]
    x0: Option<[f64; 2]>,
    /// Degree cap of the truncated series.
    #[arg(long)]
    cap: Option<usize>,
    /// Transport corrections computed.
    #[arg(long)]
    order: Option<usize>,
}

impl SolutionArgs {
    fn config(&self) -> Result<ExperimentConfig, ExperimentError> {
        let file = self.config.as_deref().map(ExperimentConfig::load).transpose()?;
        let field = self.field.resolve(file.as_ref().map(|c| c.field.clone()))?;
        let mut cfg = match file {
            Some(mut c) => {
                c.field = field;
                c
            }
            None => ExperimentConfig::new(
                field,
                self.x0
                    .ok_or_else(|| ExperimentError::Config("no base point: pass --x0 or --config".into()))?,
            ),
        };
        if let Some(x0) = self.x0 {
            cfg.base_point = x0;
        }
        if let Some(cap) = self.cap {
            cfg.degree_cap = cap;
        }
        if let Some(order) = self.order {
            cfg.order = order;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    solution: SolutionArgs,
    /// Fixed number of transport corrections in the pseudomode.
    #[arg(long = "N", conflicts_with = "adaptive")]
    n: Option<usize>,
    /// Choose N(h) = floor((e m h)^(-1/7)).
    #[arg(long)]
    adaptive: bool,
    /// Growth constant of the adaptive rule; the fitted one by default.
    #[arg(long, requires = "adaptive")]
    m: Option<f64>,
    /// Sweep `h_max:h_min:count`.
    #[arg(long, value_parser = parse::parse_sweep)]
    h: Option<Sweep>,
    /// Validity radius of the cutoff.
    #[arg(long)]
    delta: Option<f64>,
    /// Also evaluate the residual by finite differences on this many points per axis.
    #[arg(long)]
    fd_points: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Half width of the square scanned around the origin.
    #[arg(long, value_parser = parse::parse_real, default_value = "2pi")]
    half_width: f64,
    /// Points per axis, edges included.
    #[arg(long, default_value_t = 257)]
    points: usize,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConditionArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// The constant C of the conditions.
    #[arg(long = "C", default_value_t = 10.0)]
    c_const: f64,
    /// Semiclassical parameter in the conditions.
    #[arg(long = "h", default_value_t = 1.0)]
    h: f64,
    #[arg(long, value_parser = parse::parse_real, default_value = "4")]
    half_width: f64,
    #[arg(long, default_value_t = 81)]
    density: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    solution: SolutionArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), ExperimentError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<(), ExperimentError> {
    let mut cfg = args.solution.config()?;
    if let Some(n) = args.n {
        cfg.rule = RuleConfig::Fixed { n };
    }
    if args.adaptive {
        cfg.rule = RuleConfig::Adaptive { m: args.m };
    }
    if let Some(h) = args.h {
        cfg.sweep = h;
    }
    if args.delta.is_some() {
        cfg.delta = args.delta;
    }
    if args.fd_points.is_some() {
        cfg.fd_points = args.fd_points;
    }
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let artifacts = experiment::run(&cfg)?;
    experiment::write_artifacts(&cfg.output_dir, &artifacts)?;
    std::fs::write(
        cfg.output_dir.join("config.toml"),
        toml::to_string(&cfg).map_err(|e| ExperimentError::Config(e.to_string()))?,
    )?;
    print!("{}", experiment::residual_csv(&artifacts.reports));
    for fit in [&artifacts.power_fit, &artifacts.stretched_fit].into_iter().flatten() {
        eprintln!(
            "{:?} fit: parameter {:.4}, R^2 {:.4}",
            fit.model, fit.parameter, fit.r_squared
        );
    }
    Ok(())
}

fn scan(args: ScanArgs) -> Result<(), ExperimentError> {
    let field = args.field.resolve(None)?;
    if args.points < 2 {
        return Err(ExperimentError::Config("gamma-scan needs at least 2 points per axis".into()));
    }
    let reports = gamma_scan(&field.potential(), &Region::square(args.half_width), args.points);
    emit(args.out.as_ref(), &experiment::gamma_csv(&reports))
}

fn conditions(args: ConditionArgs) -> Result<(), ExperimentError> {
    let field = args.field.resolve(None)?;
    let mut cfg = experiment::default_condition_config();
    cfg.epsilon = args.epsilon;
    cfg.c_const = args.c_const;
    cfg.h = args.h;
    cfg.region = Region::square(args.half_width);
    cfg.density = args.density;
    let summary = experiment::check_conditions(&field.potential(), &cfg, &DEFAULT_H_RADII);
    emit(args.out.as_ref(), &summary.table())
}

fn bound_fit(args: BoundArgs) -> Result<(), ExperimentError> {
    let cfg = args.solution.config()?;
    let (_, fit) = experiment::solution_and_growth(&cfg)?;
    let json = serde_json::to_string_pretty(&fit).map_err(|e| ExperimentError::Config(e.to_string()))?;
    emit(args.out.as_ref(), &(json + "\n"))
}

fn main() -> ExitCode {
    env_logger::init();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    log::warn!("{THREADS_ENV}: {e}");
                }
            }
            _ => log::warn!("ignoring {THREADS_ENV}={v:?}"),
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::GammaScan(a) => scan(a),
        Command::CheckConditions(a) => conditions(a),
        Command::BoundFit(a) => bound_fit(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
