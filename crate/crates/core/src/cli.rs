//! Command-line front end: parse a run configuration, evaluate, minimize,
//! extrapolate and serialize a deterministic report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::evaluation::{evaluate, EvalSpec};
use crate::extrapolate::extrapolators;
use crate::inner_products::{BracketMethod, FunctionSpec};
use crate::measures::{variance, w_of_p, WalkKind};
use crate::optimize::argmin_polynomial;

pub const SCHEMA_VERSION: u32 = 1;
pub const LOG_ENV: &str = "WALK_EXTRAP_LOG";

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkName {
    Ctqw,
    Dtqw,
    Rw,
    CtrwZ,
    DtrwZ,
}

impl WalkName {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ctqw => "ctqw",
            Self::Dtqw => "dtqw",
            Self::Rw => "rw",
            Self::CtrwZ => "ctrw-z",
            Self::DtrwZ => "dtrw-z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

/// Evaluate a graph against a walk measure and extrapolate it past `a`.
#[derive(Debug, Clone, Parser)]
#[command(name = "walk-extrap", version, about)]
pub struct Args {
    #[arg(long, value_enum)]
    pub walk: WalkName,
    /// Even order of the evaluation function.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Right end of the fitted interval; defaults to the last abscissa of a CSV table.
    #[arg(long)]
    pub a: Option<f64>,
    /// Extrapolation point, must exceed `a`.
    #[arg(long)]
    pub b: f64,
    /// Coin parameter of the discrete-time quantum walk.
    #[arg(long)]
    pub r: Option<f64>,
    /// `builtin:identity`, `builtin:cos`, `builtin:poly:c0,c1,...` or `csv:<path>`.
    #[arg(long)]
    pub function: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    /// Also tabulate V at this many equally spaced p in [0, 1].
    #[arg(long)]
    pub emit_v_curve: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSource {
    Identity,
    Cosine,
    Polynomial(Vec<f64>),
    Csv(PathBuf),
}

impl FunctionSource {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        if let Some(path) = s.strip_prefix("csv:") {
            return Ok(Self::Csv(PathBuf::from(path)));
        }
        let name = s
            .strip_prefix("builtin:")
            .ok_or_else(|| CliError::config(format!("function `{s}` must start with builtin: or csv:")))?;
        match name {
            "identity" | "x" => Ok(Self::Identity),
            "cos" | "cosine" => Ok(Self::Cosine),
            _ => {
                let coeffs = name
                    .strip_prefix("poly:")
                    .ok_or_else(|| CliError::config(format!("unknown builtin function `{name}`")))?;
                coeffs
                    .split(',')
                    .map(|c| c.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map(Self::Polynomial)
                    .map_err(|e| CliError::config(format!("bad polynomial coefficient: {e}")))
            }
        }
    }

    fn label(&self) -> String {
        match self {
            Self::Identity => "builtin:identity".into(),
            Self::Cosine => "builtin:cos".into(),
            Self::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                format!("builtin:poly:{}", parts.join(","))
            }
            Self::Csv(p) => format!("csv:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub walk: WalkName,
    pub n: u32,
    pub a: Option<f64>,
    pub b: f64,
    pub r: Option<f64>,
    pub function: FunctionSource,
    pub output_format: OutputFormat,
    pub emit_v_curve: Option<usize>,
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<Self, CliError> {
        let cfg = Self {
            walk: args.walk,
            n: args.n,
            a: args.a,
            b: args.b,
            r: args.r,
            function: FunctionSource::parse(&args.function)?,
            output_format: args.format,
            emit_v_curve: args.emit_v_curve,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 || self.n % 2 == 1 {
            return Err(CliError::config(format!(
                "n={} must be a positive even integer",
                self.n
            )));
        }
        if let Some(a) = self.a {
            if !(a > 0.0 && a.is_finite()) {
                return Err(CliError::config(format!("a={a} must be positive")));
            }
            if !(self.b > a) {
                return Err(CliError::config(format!("b={} must exceed a={a}", self.b)));
            }
        } else if !matches!(self.function, FunctionSource::Csv(_)) {
            return Err(CliError::config("--a is required for builtin functions"));
        }
        if !self.b.is_finite() {
            return Err(CliError::config("b must be finite"));
        }
        if let Some(r) = self.r {
            if self.walk != WalkName::Dtqw {
                return Err(CliError::config("--r only applies to --walk dtqw"));
            }
            if !(r > 0.0 && r < 1.0) {
                return Err(CliError::config(format!("r={r} must lie in (0, 1)")));
            }
        }
        if matches!(self.emit_v_curve, Some(k) if k < 2) {
            return Err(CliError::config("--emit-v-curve needs at least 2 samples"));
        }
        Ok(())
    }

    fn walk_kind(&self) -> Result<WalkKind<f64>, CliError> {
        Ok(match self.walk {
            WalkName::Ctqw => WalkKind::Ctqw,
            WalkName::Dtqw => match self.r {
                Some(r) => WalkKind::dtqw(r).map_err(CliError::from_config)?,
                None => WalkKind::hadamard(),
            },
            WalkName::Rw => WalkKind::Rw,
            WalkName::CtrwZ => WalkKind::CtrwZ,
            WalkName::DtrwZ => WalkKind::DtrwZ,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numeric failure during {stage}: {source}")]
    Numeric {
        stage: &'static str,
        #[source]
        source: Error,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    fn from_config(e: Error) -> Self {
        Self::Config(e.to_string())
    }

    /// Domain-type errors are configuration problems; the rest are numeric.
    fn at(stage: &'static str) -> impl Fn(Error) -> Self {
        move |e| match e {
            Error::Quadrature { .. } | Error::Roots(_) | Error::Simulation(_) => Self::Numeric { stage, source: e },
            _ => Self::Config(e.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numeric { .. } | Self::Io(_) => EXIT_NUMERIC,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    /// Exponent of `x`, as an exact fraction such as `1/2`.
    pub alpha: String,
    pub beta: u32,
    pub value: f64,
    pub method: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub p: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceDiagnostics {
    /// Variance of `mu_a(., p_*)`.
    pub at_a: f64,
    /// Variance of `mu_b(., p_*)`.
    pub at_b: f64,
    /// Variance of `mu_{b-a}(., p_*)`, the spread behind `m_tilde`.
    pub at_b_minus_a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub walk: WalkName,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub function: String,
    pub discrete_model: bool,
    pub brackets: Vec<BracketEntry>,
    /// Coefficients of V in ascending powers of `w = 1 - 2p`.
    pub v_coefficients_w: Vec<f64>,
    pub local_minima: Vec<f64>,
    pub candidates: Vec<Candidate>,
    pub p_star: f64,
    pub v_star: f64,
    pub unique: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub discriminant: Option<f64>,
    pub f_at_a: f64,
    pub m: f64,
    pub m_tilde: f64,
    pub variance: VarianceDiagnostics,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v_curve: Option<Vec<Candidate>>,
}

fn load_csv(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    #[derive(Deserialize)]
    struct Row {
        x: f64,
        y: f64,
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "y"] {
        return Err(CliError::config(format!("{}: header must be `x,y`", path.display())));
    }
    rdr.deserialize::<Row>()
        .map(|r| {
            r.map(|row| (row.x, row.y))
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
        })
        .collect()
}

/// Restricts a table to `[0, a]`, interpolating the endpoint if needed.
fn truncate_table(points: Vec<(f64, f64)>, a: f64) -> Result<FunctionSpec<f64>, CliError> {
    let full = FunctionSpec::sampled(points.clone()).map_err(CliError::from_config)?;
    if a == full.a {
        return Ok(full);
    }
    if a > full.a {
        return Err(CliError::config(format!("a={a} lies beyond the table end {}", full.a)));
    }
    let mut kept: Vec<(f64, f64)> = points.into_iter().filter(|p| p.0 < a).collect();
    kept.push((a, full.eval(a)));
    FunctionSpec::sampled(kept).map_err(CliError::from_config)
}

fn build_function(cfg: &RunConfig) -> Result<FunctionSpec<f64>, CliError> {
    let a = cfg.a.unwrap_or_default();
    let spec = match &cfg.function {
        FunctionSource::Csv(path) => {
            let points = load_csv(path)?;
            match cfg.a {
                Some(a) => truncate_table(points, a)?,
                None => FunctionSpec::sampled(points).map_err(CliError::from_config)?,
            }
        }
        FunctionSource::Identity => FunctionSpec::identity(a).map_err(CliError::from_config)?,
        FunctionSource::Cosine => FunctionSpec::cosine(a).map_err(CliError::from_config)?,
        FunctionSource::Polynomial(c) => FunctionSpec::polynomial(c.clone(), a).map_err(CliError::from_config)?,
    };
    if !(cfg.b > spec.a) {
        return Err(CliError::config(format!("b={} must exceed a={}", cfg.b, spec.a)));
    }
    Ok(spec)
}

fn walk_variance(walk: &WalkKind<f64>, x: f64, p: f64) -> Result<f64, Error> {
    if x == 0.0 {
        return Ok(0.0);
    }
    match walk {
        WalkKind::CtrwZ => Ok(x),
        WalkKind::DtrwZ => Ok(4.0 * p * (1.0 - p) * x),
        _ => variance(walk, x),
    }
}

/// Runs the full pipeline and returns the report.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let walk = cfg.walk_kind()?;
    let f = build_function(cfg)?;
    let a = f.a;
    log::info!(
        "walk={walk} n={} a={a} b={} function={}",
        cfg.n,
        cfg.b,
        cfg.function.label()
    );
    let spec = EvalSpec::new(walk, f, cfg.n).map_err(CliError::from_config)?;

    let eval = evaluate(&spec).map_err(CliError::at("evaluation"))?;
    log::debug!("V coefficients in w: {:?}", eval.v.coeffs());
    let minima = argmin_polynomial(&eval.v).map_err(CliError::at("minimization"))?;
    log::debug!("candidates: {:?}", minima.v_at_candidates);
    let f_at_a = spec.f.value_at_end();
    let (m, m_tilde) = extrapolators(minima.p_star, f_at_a, a, cfg.b);
    let p = minima.p_star;
    let var = |x| walk_variance(&walk, x, p).map_err(CliError::at("variance"));
    let variance = VarianceDiagnostics {
        at_a: var(a)?,
        at_b: var(cfg.b)?,
        at_b_minus_a: var(cfg.b - a)?,
    };

    let v_curve = cfg.emit_v_curve.map(|k| {
        (0..k)
            .map(|i| {
                let p = i as f64 / (k - 1) as f64;
                Candidate {
                    p,
                    v: eval.v.eval(w_of_p(p)),
                }
            })
            .collect()
    });

    let brackets = eval
        .brackets
        .iter()
        .map(|b| BracketEntry {
            alpha: b.alpha.to_string(),
            beta: b.beta,
            value: b.value,
            method: match b.method {
                BracketMethod::Analytic => "analytic",
                BracketMethod::Quadrature => "quadrature",
                BracketMethod::DiscreteSum => "discrete_sum",
            }
            .into(),
        })
        .collect();

    Ok(Report {
        schema: SCHEMA_VERSION,
        walk: cfg.walk,
        r: match walk {
            WalkKind::Dtqw { r } => Some(r),
            _ => None,
        },
        n: cfg.n,
        a,
        b: cfg.b,
        function: cfg.function.label(),
        discrete_model: walk.is_lattice(),
        brackets,
        v_coefficients_w: eval.v.coeffs().to_vec(),
        local_minima: minima.local_minima.clone(),
        candidates: minima
            .v_at_candidates
            .iter()
            .map(|&(p, v)| Candidate { p, v })
            .collect(),
        p_star: minima.p_star,
        v_star: minima.v_star(),
        unique: minima.unique,
        discriminant: minima.discriminant,
        f_at_a,
        m,
        m_tilde,
        variance,
        v_curve,
    })
}

/// Serializes a report; the same report always renders to the same bytes.
pub fn render(report: &Report, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Text => Ok(render_text(report)),
    }
}

fn render_csv(report: &Report) -> Result<String, CliError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    match &report.v_curve {
        Some(curve) => {
            wtr.write_record(["p", "v"]).map_err(io)?;
            for c in curve {
                wtr.write_record([c.p.to_string(), c.v.to_string()]).map_err(io)?;
            }
        }
        None => {
            wtr.write_record(["quantity", "value"]).map_err(io)?;
            let rows = [
                ("p_star", report.p_star),
                ("v_star", report.v_star),
                ("m", report.m),
                ("m_tilde", report.m_tilde),
                ("f_at_a", report.f_at_a),
            ];
            for (k, v) in rows {
                wtr.write_record([k.to_string(), v.to_string()]).map_err(io)?;
            }
            for (i, c) in report.v_coefficients_w.iter().enumerate() {
                wtr.write_record([format!("v_w{i}"), c.to_string()]).map_err(io)?;
            }
        }
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let walk = match r.r {
        Some(rv) => format!("{} (r = {rv})", r.walk.as_str()),
        None => r.walk.as_str().to_string(),
    };
    let _ = writeln!(s, "walk            {walk}");
    let _ = writeln!(s, "function        {}", r.function);
    let _ = writeln!(s, "n, a, b         {}, {}, {}", r.n, r.a, r.b);
    if r.discrete_model {
        let _ = writeln!(s, "model           discrete lattice");
    }
    let _ = writeln!(s, "V(w) coeffs     {:?}", r.v_coefficients_w);
    let _ = writeln!(s, "local minima    {:?}", r.local_minima);
    if let Some(d) = r.discriminant {
        let _ = writeln!(s, "discriminant    {d}");
    }
    let _ = writeln!(
        s,
        "p_*             {}{}",
        r.p_star,
        if r.unique { "" } else { " (averaged tie)" }
    );
    let _ = writeln!(s, "V(p_*)          {}", r.v_star);
    let _ = writeln!(s, "m               {}", r.m);
    let _ = writeln!(s, "m~              {}", r.m_tilde);
    let _ = writeln!(
        s,
        "variance        a: {}, b: {}, b-a: {}",
        r.variance.at_a, r.variance.at_b, r.variance.at_b_minus_a
    );
    if let Some(curve) = &r.v_curve {
        let _ = writeln!(s, "p               V(p)");
        for c in curve {
            let _ = writeln!(s, "{:<15} {}", c.p, c.v);
        }
    }
    s
}

/// Parses, runs and writes; returns the process exit code.
pub fn main_with_args(args: &Args) -> i32 {
    let result = RunConfig::from_args(args).and_then(|cfg| {
        let report = run(&cfg)?;
        let text = render(&report, cfg.output_format)?;
        match &args.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("walk-extrap: {e}");
            e.exit_code()
        }
    }
}
