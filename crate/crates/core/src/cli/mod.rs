//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 (W) violation, 3 failed
//! certificate.

pub mod output;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde_json::{json, Map, Value};

use crate::basis::unit_grid;
use crate::error::Error;
use crate::error_bounds::{bound_omega1, bound_omega2, phi_delta_bound, GridSummary, ANALYTIC_TOLERANCE};
use crate::gallery::Family;
use crate::moments::{central_moment, fourth_moment_bound, monomial_moment, shifted_sum_pair, third_moment_sandwich};
use crate::operator::{RationalBernsteinOperator, WViolation};
use crate::scalar::Scalar;
use crate::target::{TargetFunction, CORPUS};
use crate::voronovskaja::voronovskaja_sample;
use output::{scalar_json, scalars_json, Document, Table, TOOL, VERSION};
use spec::{Backend, OperatorSpecDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_W_VIOLATION: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] Error),
}

#[derive(Parser)]
#[command(name = "ratbern", version, about = "Rational Bernstein operators: construction, moments and error certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Operator spec (JSON)
    #[arg(long)]
    spec: PathBuf,
    /// Arithmetic backend; overrides the spec's "backend" field
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Moments,
    Bounds,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the operator and report nodes, alpha and the node gap
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Sup-norm error and error bounds over a sweep of degrees
    Converge {
        #[command(flatten)]
        common: Common,
        /// Built-in function: e1, e2, e3, exp, sin_pi, abs_half
        #[arg(long = "f")]
        f: String,
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
    },
    /// Voronovskaja ratio and fourth-to-second moment ratio at one point
    Voronovskaja {
        #[command(flatten)]
        common: Common,
        #[arg(long = "f")]
        f: String,
        #[arg(long)]
        x: f64,
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<usize>,
    },
    /// Check the moment inequalities and error bounds on a grid
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Build { .. } => "build",
            Command::Converge { .. } => "converge",
            Command::Voronovskaja { .. } => "voronovskaja",
            Command::Certify { .. } => "certify",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Build { common }
            | Command::Converge { common, .. }
            | Command::Voronovskaja { common, .. }
            | Command::Certify { common, .. } => common,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Converge { .. } | Command::Voronovskaja { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run_with<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let cmd = cli.command;
    let doc = match load_spec(&cmd.common().spec) {
        Ok(doc) => doc,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let backend = cmd.common().backend.or(doc.backend).unwrap_or(Backend::Float);
    let context = json!({ "name": cmd.name(), "backend": backend, "spec": doc });

    let result = match backend {
        Backend::Float => execute::<f64>(&cmd, &doc, backend, &context),
        Backend::Rational => execute::<BigRational>(&cmd, &doc, backend, &context),
    };
    match result {
        Ok((document, certified)) => {
            let format = cmd.common().format.unwrap_or(cmd.default_format());
            let text = match format {
                Format::Json => document.to_json(),
                Format::Csv => document.to_csv(),
            };
            let written = match &cmd.common().out {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INPUT;
            }
            if certified {
                EXIT_OK
            } else {
                EXIT_CERTIFICATE
            }
        }
        Err(CliError::Library(Error::WViolation(v))) => {
            let _ = stdout.write_all(violation_json(&v, &context).as_bytes());
            EXIT_W_VIOLATION
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn load_spec(path: &PathBuf) -> Result<OperatorSpecDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read spec {}: {e}", path.display())))?;
    OperatorSpecDocument::from_json(&text)
}

fn violation_json(v: &WViolation, context: &Value) -> String {
    let doc = json!({
        "header": { "tool": TOOL, "version": VERSION, "schema": "ratbern/violation/v1" },
        "command": context,
        "status": "w_violation",
        "violation": v,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialise");
    s.push('\n');
    s
}

fn corpus_function(name: &str) -> Result<TargetFunction, CliError> {
    TargetFunction::corpus(name)
        .ok_or_else(|| CliError::Input(format!("unknown function '{name}', expected one of {}", CORPUS.join(", "))))
}

fn check_grid(points: usize) -> Result<(), CliError> {
    if points < 2 {
        return Err(CliError::Input(format!("--grid needs at least 2 points, got {points}")));
    }
    Ok(())
}

fn degrees(doc: &OperatorSpecDocument, n_list: &[usize]) -> Vec<usize> {
    if n_list.is_empty() {
        vec![doc.n]
    } else {
        n_list.to_vec()
    }
}

fn body(context: &Value, extra: Vec<(&str, Value)>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), context.clone());
    for (k, v) in extra {
        m.insert(k.into(), v);
    }
    m
}

fn execute<T: Scalar>(
    cmd: &Command,
    doc: &OperatorSpecDocument,
    backend: Backend,
    context: &Value,
) -> Result<(Document, bool), CliError> {
    match cmd {
        Command::Build { .. } => Ok((cmd_build::<T>(doc, backend, context)?, true)),
        Command::Converge { f, n_list, grid, .. } => {
            check_grid(*grid)?;
            let f = corpus_function(f)?;
            let mut rows = Vec::new();
            for n in degrees(doc, n_list) {
                let op = doc.with_n(n)?.build::<T>(backend)?.to_f64();
                rows.push(converge_row(&op, &f, *grid)?);
            }
            let context = with_args(context, json!({ "f": f.label(), "grid": grid, "n_list": n_list }));
            Ok((
                Document {
                    schema: "ratbern/converge/v1",
                    body: body(&context, vec![]),
                    table: Table {
                        key: "rows",
                        columns: vec!["n", "delta_n", "sup_error", "bound_omega1", "bound_omega2"],
                        rows,
                    },
                },
                true,
            ))
        }
        Command::Voronovskaja { f, x, n_list, .. } => {
            let f = corpus_function(f)?;
            if !(*x > 0.0 && *x < 1.0) {
                return Err(CliError::Input(format!("--x must lie in (0, 1), got {x}")));
            }
            let mut rows = Vec::new();
            for n in degrees(doc, n_list) {
                let op = doc.with_n(n)?.build::<T>(backend)?.to_f64();
                let s = voronovskaja_sample(&op, &f, *x)?;
                rows.push(vec![json!(s.n), json!(s.ratio), json!(s.target), json!(s.mamedov), json!(s.mamedov_cap)]);
            }
            let context = with_args(context, json!({ "f": f.label(), "x": x, "n_list": n_list }));
            Ok((
                Document {
                    schema: "ratbern/voronovskaja/v1",
                    body: body(&context, vec![]),
                    table: Table {
                        key: "rows",
                        columns: vec!["n", "ratio", "target", "mamedov", "mamedov_cap"],
                        rows,
                    },
                },
                true,
            ))
        }
        Command::Certify { suite, grid, .. } => {
            check_grid(*grid)?;
            let op = doc.build::<T>(backend)?;
            let mut certs = Vec::new();
            if matches!(suite, Suite::Moments | Suite::All) {
                certs.extend(moment_certificates(&op, *grid)?);
            }
            if matches!(suite, Suite::Bounds | Suite::All) {
                certs.extend(bound_certificates(&op.to_f64(), doc.family()?.as_ref(), *grid)?);
            }
            let certified = certs.iter().all(|c| c.holds);
            let suite_name = match suite {
                Suite::Moments => "moments",
                Suite::Bounds => "bounds",
                Suite::All => "all",
            };
            let context = with_args(context, json!({ "suite": suite_name, "grid": grid }));
            let rows = certs
                .into_iter()
                .map(|c| vec![json!(c.name), json!(c.worst_slack), json!(c.x), json!(c.tolerance), json!(c.holds)])
                .collect();
            Ok((
                Document {
                    schema: "ratbern/certify/v1",
                    body: body(&context, vec![("certified", json!(certified))]),
                    table: Table {
                        key: "certificates",
                        columns: vec!["inequality", "worst_slack", "x", "tolerance", "holds"],
                        rows,
                    },
                },
                certified,
            ))
        }
    }
}

fn with_args(context: &Value, args: Value) -> Value {
    let mut c = context.clone();
    c["args"] = args;
    c
}

fn cmd_build<T: Scalar>(doc: &OperatorSpecDocument, backend: Backend, context: &Value) -> Result<Document, CliError> {
    let op = doc.build::<T>(backend)?;
    let n = op.n();
    let operator = json!({
        "n": n,
        "delta_n": scalar_json(&op.delta_n()),
        "gamma": scalars_json(op.gamma()),
        "nodes": scalars_json(op.nodes()),
        "alpha": scalars_json(op.alpha()),
        "w_status": "satisfied",
    });
    let rows = (0..=n)
        .map(|k| {
            vec![
                json!(k),
                scalar_json(&op.nodes()[k]),
                scalar_json(&op.alpha()[k]),
                op.gamma().get(k).map(scalar_json).unwrap_or(Value::Null),
            ]
        })
        .collect();
    Ok(Document {
        schema: "ratbern/build/v1",
        body: body(context, vec![("operator", operator)]),
        table: Table { key: "table", columns: vec!["k", "node", "alpha", "gamma"], rows },
    })
}

fn converge_row(op: &RationalBernsteinOperator<f64>, f: &TargetFunction, grid: usize) -> Result<Vec<Value>, CliError> {
    let xs = unit_grid(grid);
    let w1 = xs.iter().map(|&x| bound_omega1(op, f, x)).collect::<Result<Vec<_>, _>>()?;
    let w2 = xs.iter().map(|&x| bound_omega2(op, f, x)).collect::<Result<Vec<_>, _>>()?;
    let s1 = GridSummary::from_reports(w1).expect("non-empty grid");
    let s2 = GridSummary::from_reports(w2).expect("non-empty grid");
    Ok(vec![json!(op.n()), json!(op.delta_n()), json!(s1.sup_observed), json!(s1.sup_bound), json!(s2.sup_bound)])
}

/// Worst case of one inequality over the grid.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub name: String,
    pub worst_slack: f64,
    pub x: Option<f64>,
    pub tolerance: f64,
    pub holds: bool,
}

struct Worst {
    slack: f64,
    x: Option<f64>,
}

impl Worst {
    fn new() -> Self {
        Self { slack: f64::INFINITY, x: None }
    }

    fn update(&mut self, slack: f64, x: f64) {
        if slack < self.slack || self.x.is_none() {
            self.slack = slack.min(self.slack);
            self.x = Some(x);
        }
    }

    fn certificate(self, name: &str, tolerance: f64) -> Certificate {
        Certificate {
            name: name.into(),
            worst_slack: self.slack,
            x: self.x,
            tolerance,
            holds: self.slack >= -tolerance,
        }
    }
}

/// Moment inequalities on the grid `i/(points-1)`, evaluated in the
/// operator's own arithmetic.
pub fn moment_certificates<T: Scalar>(
    op: &RationalBernsteinOperator<T>,
    points: usize,
) -> crate::Result<Vec<Certificate>> {
    let delta = op.delta_n();
    let mut gap = Worst::new();
    let mut sandwich = Worst::new();
    let mut positivity = Worst::new();
    let mut fourth = Worst::new();
    let mut shifted = Worst::new();
    let last = points - 1;
    for i in 0..points {
        let x = T::from_ratio(i as i64, last as i64);
        let xf = x.to_f64();
        let m2 = central_moment(op, 2, &x)?;
        let cap = delta.clone() * x.clone() * (T::one() - x.clone());
        gap.update((cap - m2.abs()).to_f64(), xf);

        let s = third_moment_sandwich(op, &x)?;
        let lower = s.value.clone() - s.low.clone();
        let upper = s.high.clone() - s.value.clone();
        sandwich.update(if lower < upper { lower } else { upper }.to_f64(), xf);

        if i > 0 && i < last {
            for order in 2..=6 {
                positivity.update(monomial_moment(op, order, &x)?.to_f64(), xf);
            }
        }

        let m4 = central_moment(op, 4, &x)?;
        fourth.update((fourth_moment_bound(op, &x)? - m4).to_f64(), xf);

        for r in 1..=4 {
            let (a, b) = shifted_sum_pair(op, r, &x)?;
            shifted.update(-(a - b).abs().to_f64(), xf);
        }
    }
    let mut positive = positivity.certificate("moment_positivity", 0.0);
    positive.holds = positive.worst_slack > 0.0;
    Ok(vec![
        gap.certificate("second_moment_gap", ANALYTIC_TOLERANCE),
        sandwich.certificate("third_moment_sandwich", ANALYTIC_TOLERANCE),
        positive,
        fourth.certificate("fourth_moment_bound", ANALYTIC_TOLERANCE),
        shifted.certificate("shifted_sum_identity", ANALYTIC_TOLERANCE),
    ])
}

/// The weight function behind a family, when there is one.
fn family_phi(family: &Family) -> Option<TargetFunction> {
    match family {
        Family::Classical => Some(TargetFunction::constant(1.0)),
        Family::PhiAbs { a } => Some(TargetFunction::phi_abs(*a)),
        _ => None,
    }
}

/// Error bounds for the six corpus functions, plus the node-gap bound for
/// families defined by a weight function.
pub fn bound_certificates(
    op: &RationalBernsteinOperator<f64>,
    family: Option<&Family>,
    points: usize,
) -> crate::Result<Vec<Certificate>> {
    let xs = unit_grid(points);
    let mut out = Vec::new();
    for name in CORPUS {
        let f = TargetFunction::corpus(name).expect("corpus name");
        for (label, bound) in [
            ("omega1_bound", bound_omega1 as fn(&_, &_, f64) -> _),
            ("omega2_bound", bound_omega2 as fn(&_, &_, f64) -> _),
        ] {
            let reports = xs.iter().map(|&x| bound(op, &f, x)).collect::<crate::Result<Vec<_>>>()?;
            let s = GridSummary::from_reports(reports).expect("non-empty grid");
            let x = match s.worst.location {
                crate::error_bounds::Location::Point(x) => Some(x),
                crate::error_bounds::Location::SupOverGrid => None,
            };
            out.push(Certificate {
                name: format!("{label}:{name}"),
                worst_slack: s.worst.slack,
                x,
                tolerance: s.worst.tolerance,
                holds: s.holds(),
            });
        }
    }
    if let Some(phi) = family.and_then(family_phi) {
        let pd = phi_delta_bound(&phi, op.n())?;
        let slack = pd.value - op.delta_n();
        out.push(Certificate {
            name: "phi_node_gap_bound".into(),
            worst_slack: slack,
            x: None,
            tolerance: ANALYTIC_TOLERANCE,
            holds: slack >= -ANALYTIC_TOLERANCE,
        });
    }
    Ok(out)
}
