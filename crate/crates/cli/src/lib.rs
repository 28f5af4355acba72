//! `polysel` command-line front end.
//!
//! Every subcommand reads a CSV table, runs one library operation and prints a
//! report. Exit codes: 0 feasible / holds, 1 infeasible / fails (a
//! certificate is reported), 2 invalid input.

pub mod input;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use polysel::{
    analysis, selection, separation, Config, Error, Grid, Interval, IntervalFn, Polynomial,
    SampledFn, Tuple, Violation,
};

use crate::input::{open, read_table, InputTable};
use crate::report::{Certificate, Report, Tolerances, Witness, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "polysel",
    version,
    about = "Polynomial selections and separation on sampled grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan every tuple of an `x,lo,hi` table for a failing intersection.
    CheckSelection(Common),
    /// Find a polynomial inside every interval of an `x,lo,hi` table.
    SolveSelection(Common),
    /// Check the separation inequalities for an `x,f,g` table.
    CheckSeparation(Common),
    /// Find a polynomial between `f` and `g` of an `x,f,g` table.
    Separate(Common),
    /// Test n-convexity of an `x,f` table.
    CheckNconvex(Common),
    /// Test n-concavity of an `x,f` table.
    CheckNconcave(Common),
    /// Largest extrapolation deviation of an `x,f` table.
    Epsilon(Common),
    /// Polynomial within epsilon/2 of an `x,f` table.
    Stabilize(StabilizeArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Polynomial degree bound n.
    #[arg(long)]
    degree: usize,
    /// CSV input; standard input when omitted or `-`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Decision tolerance for intersections and inequalities.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Scan tuples on all cores; output is unchanged.
    #[arg(long, action = ArgAction::Set, default_value_t = false)]
    parallel: bool,
}

#[derive(Debug, Args)]
struct StabilizeArgs {
    #[command(flatten)]
    common: Common,
    /// Defaults to the smallest admissible value.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckSelection(_) => "check-selection",
            Command::SolveSelection(_) => "solve-selection",
            Command::CheckSeparation(_) => "check-separation",
            Command::Separate(_) => "separate",
            Command::CheckNconvex(_) => "check-nconvex",
            Command::CheckNconcave(_) => "check-nconcave",
            Command::Epsilon(_) => "epsilon",
            Command::Stabilize(_) => "stabilize",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::CheckSelection(c)
            | Command::SolveSelection(c)
            | Command::CheckSeparation(c)
            | Command::Separate(c)
            | Command::CheckNconvex(c)
            | Command::CheckNconcave(c)
            | Command::Epsilon(c) => c,
            Command::Stabilize(s) => &s.common,
        }
    }

    fn columns(&self) -> &'static [&'static str] {
        match self {
            Command::CheckSelection(_) | Command::SolveSelection(_) => &["x", "lo", "hi"],
            Command::CheckSeparation(_) | Command::Separate(_) => &["x", "f", "g"],
            _ => &["x", "f"],
        }
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((report, code)) => {
            let text = match cli.command.common().format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            if let Err(e) = out.write_all(text.as_bytes()) {
                let _ = writeln!(err, "error: cannot write report: {e}");
                return EXIT_INVALID;
            }
            code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}

fn config(common: &Common) -> Result<Config, String> {
    if !(common.tol >= 0.0 && common.tol.is_finite()) {
        return Err(format!(
            "--tol must be finite and non-negative, got {}",
            common.tol
        ));
    }
    Ok(Config::default()
        .with_decision(common.tol)
        .with_parallel(common.parallel))
}

fn load(cmd: &Command, cfg: &Config) -> Result<InputTable, String> {
    let common = cmd.common();
    let reader = open(common.input.as_deref())?;
    read_table(reader, cmd.columns(), cfg.node_separation)
}

fn grid_of(table: &InputTable) -> Result<Grid, String> {
    Grid::new(table.column(0)).map_err(|e| e.to_string())
}

fn interval_fn(table: &InputTable) -> Result<IntervalFn, String> {
    let ivs = table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| Interval::new(r[1], r[2]).map_err(|e| format!("row {}: {e}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    IntervalFn::new(grid_of(table)?, ivs).map_err(|e| e.to_string())
}

fn sampled(table: &InputTable, column: usize) -> Result<SampledFn, String> {
    SampledFn::new(grid_of(table)?, table.column(column)).map_err(|e| e.to_string())
}

fn tuple_xs(t: &Tuple, xs: &[f64]) -> Vec<f64> {
    t.indices().iter().map(|&i| xs[i]).collect()
}

fn lib_err(e: Error) -> String {
    e.to_string()
}

fn execute(cmd: &Command) -> Result<(Report, i32), String> {
    let common = cmd.common();
    let cfg = config(common)?;
    let table = load(cmd, &cfg)?;
    let n = common.degree;
    let mut report = Report {
        schema: SCHEMA_VERSION,
        command: cmd.name().to_owned(),
        degree: n,
        verdict: "",
        witness: None,
        certificate: None,
        epsilon: None,
        sup_error: None,
        tolerances: Tolerances::from(&cfg),
    };
    let code = match cmd {
        Command::CheckSelection(_) | Command::SolveSelection(_) => {
            let f = interval_fn(&table)?;
            let result = if matches!(cmd, Command::CheckSelection(_)) {
                selection::check_selection(&f, n, &cfg)
            } else {
                selection::solve_selection(&f, n, &cfg)
            }
            .map_err(lib_err)?;
            report.witness = result
                .witness
                .as_ref()
                .map(|w| Witness::new(w, selection::membership_violation(&f, w), &cfg));
            report.certificate = result.certificate.map(|c| Certificate::Tuple {
                x: tuple_xs(&c.tuple, f.xs()),
                indices: c.tuple.into_vec(),
                gap: c.gap,
            });
            verdict(&mut report, result.feasible, "feasible", "infeasible")
        }
        Command::CheckSeparation(_) | Command::Separate(_) => {
            let f = sampled(&table, 1)?;
            let g = sampled(&table, 2)?;
            let result = if matches!(cmd, Command::CheckSeparation(_)) {
                separation::check_separation(&f, &g, n, &cfg)
            } else {
                separation::separate(&f, &g, n, &cfg)
            }
            .map_err(lib_err)?;
            report.witness = result
                .witness
                .as_ref()
                .map(|w| Witness::new(w, sandwich_violation(&f, &g, w), &cfg));
            report.certificate = result.violation.map(|v| match v {
                Violation::Inequality { tuple, side, slack } => Certificate::Inequality {
                    x: tuple_xs(&tuple, f.xs()),
                    indices: tuple.into_vec(),
                    side: match side {
                        separation::Side::Upper => "upper",
                        separation::Side::Lower => "lower",
                    },
                    slack,
                },
                Violation::Pointwise { index, gap } => Certificate::Pointwise {
                    index,
                    x: f.xs()[index],
                    gap,
                },
            });
            verdict(&mut report, result.separable, "separable", "not_separable")
        }
        Command::CheckNconvex(_) | Command::CheckNconcave(_) => {
            let f = sampled(&table, 1)?;
            let result = if matches!(cmd, Command::CheckNconvex(_)) {
                analysis::is_n_convex(&f, n, &cfg)
            } else {
                analysis::is_n_concave(&f, n, &cfg)
            }
            .map_err(lib_err)?;
            report.certificate = result.counterexample.map(|c| Certificate::Convexity {
                x: tuple_xs(&c.tuple, f.xs()),
                indices: c.tuple.into_vec(),
                defect: c.defect,
            });
            verdict(&mut report, result.holds, "holds", "fails")
        }
        Command::Epsilon(_) => {
            let f = sampled(&table, 1)?;
            let (tuple, eps) = analysis::max_deviation(&f, n, &cfg).map_err(lib_err)?;
            report.epsilon = Some(eps);
            report.certificate = Some(Certificate::Deviation {
                x: tuple_xs(&tuple, f.xs()),
                indices: tuple.into_vec(),
                deviation: eps,
            });
            report.verdict = "computed";
            EXIT_OK
        }
        Command::Stabilize(args) => {
            let f = sampled(&table, 1)?;
            let eps = match args.epsilon {
                Some(e) => e,
                None => analysis::hyers_ulam_epsilon(&f, n, &cfg).map_err(lib_err)?,
            };
            report.epsilon = Some(eps);
            match analysis::stabilize(&f, n, eps, &cfg) {
                Ok(w) => {
                    let sup = sup_error(&f, &w);
                    report.sup_error = Some(sup);
                    report.witness = Some(Witness::new(&w, sup - 0.5 * eps, &cfg));
                    report.verdict = "stabilized";
                    EXIT_OK
                }
                Err(Error::EpsilonTooSmall {
                    required, indices, ..
                }) => {
                    let tuple = Tuple::new(indices, f.len()).map_err(lib_err)?;
                    report.certificate = Some(Certificate::Deviation {
                        x: tuple_xs(&tuple, f.xs()),
                        indices: tuple.into_vec(),
                        deviation: required,
                    });
                    report.verdict = "epsilon_too_small";
                    EXIT_FAILS
                }
                Err(e) => return Err(lib_err(e)),
            }
        }
    };
    Ok((report, code))
}

fn verdict(report: &mut Report, ok: bool, yes: &'static str, no: &'static str) -> i32 {
    report.verdict = if ok { yes } else { no };
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILS
    }
}

fn sandwich_violation(f: &SampledFn, g: &SampledFn, w: &Polynomial) -> f64 {
    f.xs()
        .iter()
        .zip(f.values().iter().zip(g.values()))
        .map(|(&x, (&lo, &hi))| {
            let y = w.eval(x);
            (lo - y).max(y - hi)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn sup_error(f: &SampledFn, w: &Polynomial) -> f64 {
    f.xs()
        .iter()
        .zip(f.values())
        .map(|(&x, &y)| (w.eval(x) - y).abs())
        .fold(0.0, f64::max)
}
