//! Command-line front end.
//!
//! [`run`] parses arguments, dispatches to the library and writes a table, JSON
//! document or CSV. Exit status: 0 on success, 1 on user error (bad expression,
//! unreadable CSV, invalid flags), 2 on numerical failure (quadrature did not
//! converge).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::decomposition::{self, VerificationReport};
use crate::error::Error;
use crate::function::{self, FunctionHandle, RealFunction};
use crate::hilbert::{self, AngleReport};
use crate::quadrature::{self, QuadratureConfig};

const GRAMMAR_HELP: &str = "\
EXPRESSIONS:
  Functions of the single variable x on [0, 1].
    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' factor)?
    primary := number | x | e | pi | func '(' expr ')' | '(' expr ')'
    func    := exp | ln | sin | cos | tan | abs | sqrt | cbrt
  '^' is right-associative and binds tighter than unary minus (-x^2 = -(x^2)).
  A literal exponent such as 2, 0.5 or (2/3) is a rational p/q; for odd q the
  real root of a negative base is taken, so (x-1/2)^(2/3) is defined on [0, 1].
  Parameters: --param g=2 replaces every identifier g by (2) before parsing.
  Function slots of angle/inner/norm take an expression or csv:<path>.

CSV INPUT:
  Two numeric columns x,y; optional header row; samples are joined linearly.";

#[derive(Debug, Parser)]
#[command(
    name = "orthodecomp",
    about = "Mean/fluctuation decomposition, potentials and angles of functions on [0, 1]",
    after_help = GRAMMAR_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    /// Substitute a parameter: NAME=VALUE (repeatable)
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Absolute and relative quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Subdivision budget of the adaptive quadrature
    #[arg(long, default_value_t = 10_000)]
    max_subdivisions: usize,
    /// Output grid size for sampled curves
    #[arg(long, default_value_t = 201)]
    samples: usize,
    /// Extra breakpoints in (0, 1), comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    breakpoints: Vec<f64>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Args)]
struct Single {
    /// Closed-form expression in x
    #[arg(
        long,
        required_unless_present = "csv",
        conflicts_with = "csv",
        allow_hyphen_values = true
    )]
    expr: Option<String>,
    /// CSV file with columns x,y
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split f into its mean P f and fluctuation Q f, with the potential h
    Decompose {
        #[command(flatten)]
        input: Single,
        #[command(flatten)]
        common: Common,
    },
    /// Report the residuals of every projection identity
    Verify {
        #[command(flatten)]
        input: Single,
        /// Interior probe points for sampled residuals
        #[arg(long, default_value_t = decomposition::DEFAULT_PROBES)]
        probes: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Locate interior zeros of Q f and the integrals on either side
    Zeros {
        #[command(flatten)]
        input: Single,
        /// Uniform scan resolution
        #[arg(long, default_value_t = 1024)]
        scan: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Angle between two functions
    Angle {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// Inner product of two functions
    Inner {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// L2 and L1 norms of a function
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad value for `{name}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

/// One row of a sampled curve; `y` is `None` where evaluation failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRow {
    pub x: f64,
    pub y: Option<f64>,
}

/// Samples `f` on the uniform grid `x_i = i / (n - 1)`. Returns the rows and the
/// number of points where evaluation failed.
pub fn emit_samples<F: RealFunction>(f: &F, n: usize) -> (Vec<SampleRow>, usize) {
    let n = n.max(2);
    let mut failures = 0;
    let rows = (0..n)
        .map(|i| {
            let x = if i == n - 1 {
                1.0
            } else {
                i as f64 / (n - 1) as f64
            };
            let y = f.value_at(x).ok();
            failures += usize::from(y.is_none());
            SampleRow { x, y }
        })
        .collect();
    (rows, failures)
}

#[derive(Serialize)]
struct Residuals {
    orthogonality: f64,
    #[serde(rename = "mean_of_Q")]
    mean_of_q: f64,
    #[serde(rename = "idempotence_P")]
    idempotence_p: f64,
    #[serde(rename = "idempotence_Q")]
    idempotence_q: f64,
    #[serde(rename = "cross_PQ")]
    cross_pq: f64,
    pythagoras: f64,
    corollary8: f64,
    potential_boundary: f64,
    derivative: f64,
}

impl From<&VerificationReport> for Residuals {
    fn from(r: &VerificationReport) -> Self {
        Residuals {
            orthogonality: r.orthogonality,
            mean_of_q: r.mean_of_q,
            idempotence_p: r.idempotence_p,
            idempotence_q: r.idempotence_q,
            cross_pq: r.cross(),
            pythagoras: r.pythagoras,
            corollary8: r.corollary8,
            potential_boundary: r.potential_boundary,
            derivative: r.derivative,
        }
    }
}

impl Residuals {
    fn entries(&self) -> [(&'static str, f64); 9] {
        [
            ("orthogonality", self.orthogonality),
            ("mean_of_Q", self.mean_of_q),
            ("idempotence_P", self.idempotence_p),
            ("idempotence_Q", self.idempotence_q),
            ("cross_PQ", self.cross_pq),
            ("pythagoras", self.pythagoras),
            ("corollary8", self.corollary8),
            ("potential_boundary", self.potential_boundary),
            ("derivative", self.derivative),
        ]
    }
}

#[derive(Serialize)]
struct AngleOut {
    inner: f64,
    norm_f: f64,
    norm_g: f64,
    cosine: f64,
    theta_radians: f64,
    theta_degrees: f64,
    clamp_applied: bool,
}

impl From<&AngleReport> for AngleOut {
    fn from(r: &AngleReport) -> Self {
        AngleOut {
            inner: r.inner,
            norm_f: r.norm_f,
            norm_g: r.norm_g,
            cosine: r.cosine,
            theta_radians: r.theta_radians,
            theta_degrees: r.theta_degrees(),
            clamp_applied: r.clamp_applied,
        }
    }
}

/// Output of one command before serialization.
struct Report {
    command: &'static str,
    input: Value,
    config: Value,
    result: Value,
    table: String,
    csv: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotConverged { .. } | Error::NegativeNorm(_) => 2,
        _ => 1,
    }
}

/// Runs the command line `args` (including the program name), writing the report to
/// `out` and diagnostics to `err`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };

    let format = match &cli.command {
        Command::Decompose { common, .. }
        | Command::Verify { common, .. }
        | Command::Zeros { common, .. }
        | Command::Angle { common, .. }
        | Command::Inner { common, .. }
        | Command::Norm { common, .. } => common.format,
    };

    match execute(cli.command, err) {
        Ok(report) => {
            let written = match format {
                Format::Json => {
                    let doc = json!({
                        "command": report.command,
                        "input": report.input,
                        "config": report.config,
                        "result": report.result,
                    });
                    // serde_json writes the shortest digit string that round-trips each f64
                    serde_json::to_writer_pretty(&mut *out, &doc)
                        .map_err(std::io::Error::from)
                        .and_then(|_| writeln!(out))
                }
                Format::Table => write!(out, "{}", report.table),
                Format::Csv => write!(out, "{}", report.csv),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn config_of(common: &Common) -> crate::Result<QuadratureConfig> {
    let cfg = QuadratureConfig {
        max_subdivisions: common.max_subdivisions,
        ..QuadratureConfig::with_tolerance(common.tol)
    };
    cfg.validate()?;
    if common.samples < 2 {
        return Err(Error::InvalidConfig(format!(
            "--samples must be at least 2, got {}",
            common.samples
        )));
    }
    Ok(cfg)
}

fn config_json(cfg: &QuadratureConfig, common: &Common) -> Value {
    json!({
        "abs_tol": cfg.abs_tol,
        "rel_tol": cfg.rel_tol,
        "max_subdivisions": cfg.max_subdivisions,
        "samples": common.samples,
        "breakpoints": common.breakpoints,
    })
}

fn params_of(common: &Common) -> BTreeMap<String, f64> {
    common.params.iter().cloned().collect()
}

fn load_single(
    input: &Single,
    common: &Common,
    err: &mut dyn Write,
) -> crate::Result<(FunctionHandle, Value)> {
    let params = params_of(common);
    let (f, desc) = match (&input.expr, &input.csv) {
        (Some(src), _) => (
            function::from_expression(src, &params)?,
            json!({ "expr": src, "params": params }),
        ),
        (None, Some(path)) => (function::from_csv_path(path)?, json!({ "csv": path })),
        (None, None) => {
            return Err(Error::InvalidParameter {
                name: "--expr".into(),
                reason: "one of --expr or --csv is required".into(),
            })
        }
    };
    finish_handle(f, common, err).map(|f| (f, desc))
}

fn load_slot(slot: &str, common: &Common, err: &mut dyn Write) -> crate::Result<FunctionHandle> {
    let f = match slot.strip_prefix("csv:") {
        Some(path) => function::from_csv_path(std::path::Path::new(path))?,
        None => function::from_expression(slot, &params_of(common))?,
    };
    finish_handle(f, common, err)
}

fn finish_handle(
    f: FunctionHandle,
    common: &Common,
    err: &mut dyn Write,
) -> crate::Result<FunctionHandle> {
    for w in f.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
    f.with_extra_breakpoints(&common.breakpoints)
}

fn fmt_opt(y: Option<f64>) -> String {
    y.map_or_else(String::new, |v| v.to_string())
}

fn execute(command: Command, err: &mut dyn Write) -> crate::Result<Report> {
    match command {
        Command::Decompose { input, common } => {
            let cfg = config_of(&common)?;
            let (f, input_json) = load_single(&input, &common, err)?;
            let d = decomposition::decompose(&f, &cfg)?;
            let (q_rows, q_fail) = emit_samples(&d.fluctuation, common.samples);
            let (h_rows, h_fail) = emit_samples(&d.potential, common.samples);
            if q_fail + h_fail > 0 {
                let _ = writeln!(
                    err,
                    "warning: {} sample point(s) failed to evaluate",
                    q_fail + h_fail
                );
            }
            let residuals = Residuals::from(&d.residuals);

            let mut table = format!(
                "f         = {}\nP f       = {}\nQ f       = f - ({})\n\nresiduals\n",
                f.label(),
                d.mean,
                d.mean
            );
            for (name, v) in residuals.entries() {
                table.push_str(&format!("  {name:<20} {v:.3e}\n"));
            }
            let mut csv = String::from("x,q,h\n");
            for (q, h) in q_rows.iter().zip(&h_rows) {
                csv.push_str(&format!("{},{},{}\n", q.x, fmt_opt(q.y), fmt_opt(h.y)));
            }
            Ok(Report {
                command: "decompose",
                input: input_json,
                config: config_json(&cfg, &common),
                result: json!({
                    "mean": d.mean,
                    "q_samples": q_rows,
                    "h_samples": h_rows,
                    "residuals": residuals,
                }),
                table,
                csv,
            })
        }
        Command::Verify {
            input,
            probes,
            common,
        } => {
            let cfg = config_of(&common)?;
            let (f, input_json) = load_single(&input, &common, err)?;
            let mean = decomposition::project_mean(&f, &cfg)?;
            let report = decomposition::verify(&f, &cfg, probes)?;
            let residuals = Residuals::from(&report);

            let mut table = format!("f   = {}\nP f = {mean}\n\n", f.label());
            let mut csv = String::from("residual,value\n");
            for (name, v) in residuals.entries() {
                table.push_str(&format!("  {name:<20} {v:.3e}\n"));
                csv.push_str(&format!("{name},{v}\n"));
            }
            if let Some(ok) = report.zero_mean_check {
                table.push_str(&format!(
                    "  mean-zero input: integral of Q f vanishes: {ok}\n"
                ));
            }
            let mut config = config_json(&cfg, &common);
            config["probes"] = json!(probes);
            Ok(Report {
                command: "verify",
                input: input_json,
                config,
                result: json!({
                    "mean": mean,
                    "residuals": residuals,
                    "zero_mean_check": report.zero_mean_check,
                }),
                table,
                csv,
            })
        }
        Command::Zeros {
            input,
            scan,
            common,
        } => {
            let cfg = config_of(&common)?;
            let (f, input_json) = load_single(&input, &common, err)?;
            let zeros = match decomposition::zero_crossings(&f, &cfg, scan) {
                Ok(r) => r.zeros,
                Err(Error::NoSignChange) => {
                    let _ = writeln!(err, "warning: {}", Error::NoSignChange);
                    Vec::new()
                }
                Err(e) => return Err(e),
            };
            let mut table = format!("zeros of Q f for f = {}\n", f.label());
            let mut csv = String::from("x0,left_integral,right_integral,sum\n");
            for z in &zeros {
                table.push_str(&format!(
                    "  x0 = {}   left = {}   right = {}   sum = {:.3e}\n",
                    z.x0, z.left_integral, z.right_integral, z.sum
                ));
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    z.x0, z.left_integral, z.right_integral, z.sum
                ));
            }
            if zeros.is_empty() {
                table.push_str("  none found\n");
            }
            let mut config = config_json(&cfg, &common);
            config["scan"] = json!(scan);
            Ok(Report {
                command: "zeros",
                input: input_json,
                config,
                result: json!({ "zeros": zeros }),
                table,
                csv,
            })
        }
        Command::Angle { f, g, common } => {
            let cfg = config_of(&common)?;
            let (fh, gh) = (load_slot(&f, &common, err)?, load_slot(&g, &common, err)?);
            let r = hilbert::angle(&fh, &gh, &cfg)?;
            let o = AngleOut::from(&r);
            let table = format!(
                "<f,g>   = {}\n||f||   = {}\n||g||   = {}\ncos     = {}\ntheta   = {} rad ({} deg){}\n",
                o.inner,
                o.norm_f,
                o.norm_g,
                o.cosine,
                o.theta_radians,
                o.theta_degrees,
                if o.clamp_applied { "  [cosine clamped]" } else { "" }
            );
            let csv = format!(
                "inner,norm_f,norm_g,cosine,theta_radians,theta_degrees,clamp_applied\n{},{},{},{},{},{},{}\n",
                o.inner, o.norm_f, o.norm_g, o.cosine, o.theta_radians, o.theta_degrees, o.clamp_applied
            );
            Ok(Report {
                command: "angle",
                input: json!({ "f": f, "g": g, "params": params_of(&common) }),
                config: config_json(&cfg, &common),
                result: serde_json::to_value(o).expect("plain struct"),
                table,
                csv,
            })
        }
        Command::Inner { f, g, common } => {
            let cfg = config_of(&common)?;
            let (fh, gh) = (load_slot(&f, &common, err)?, load_slot(&g, &common, err)?);
            let v = hilbert::inner_product(&fh, &gh, &cfg)?;
            Ok(Report {
                command: "inner",
                input: json!({ "f": f, "g": g, "params": params_of(&common) }),
                config: config_json(&cfg, &common),
                result: json!({ "inner": v }),
                table: format!("<f,g> = {v}\n"),
                csv: format!("inner\n{v}\n"),
            })
        }
        Command::Norm { f, common } => {
            let cfg = config_of(&common)?;
            let fh = load_slot(&f, &common, err)?;
            let l2 = hilbert::l2_norm(&fh, &cfg)?;
            let l1 = quadrature::l1_norm(&fh, &cfg)?;
            Ok(Report {
                command: "norm",
                input: json!({ "f": f, "params": params_of(&common) }),
                config: config_json(&cfg, &common),
                result: json!({ "l2_norm": l2, "l1_norm": l1 }),
                table: format!("||f||_2 = {l2}\n||f||_1 = {l1}\n"),
                csv: format!("l2_norm,l1_norm\n{l2},{l1}\n"),
            })
        }
    }
}
