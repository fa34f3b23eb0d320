//! The `schur` command line.
//!
//! ```text
//! schur [--json] [--trace] [--check] [--cap N] expr    <expression>
//! schur [--json]                     [--cap N] pres    <presentation> [--aspherical]
//! schur [--json]           [--check] [--cap N] oracle  <group>
//! schur [--json]                               amalgam <file.json>
//! ```
//!
//! Exit codes: 0 success, 1 syntax or usage error, 2 oracle capacity
//! exceeded, 3 ill-defined amalgam data, 4 the oracle disagreed with the
//! compositional answer.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use schur::amalgam::{solve, AmalgamProblem, AmalgamSolution};
use schur::bar_oracle::{
    bar_h1, bar_h2, build_group, FiniteGroup, GroupSpec, Permutation, DEFAULT_CAP,
};
use schur::compose::{
    abelianize_expr, parse_expr_with_cap, schur_multiplier_with_cap, to_finite_group,
    DerivationTrace,
};
use schur::presentation::{
    abelianization, multiplier_bounds, parse_presentation, MultiplierBounds,
};
use schur::{Error, FgAbelianGroup};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CAPACITY: u8 = 2;
pub const EXIT_AMALGAM: u8 = 3;
pub const EXIT_DISAGREE: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "schur",
    version,
    about = "Schur multipliers of composite groups"
)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Show the rule applied at each step.
    #[arg(long, global = true)]
    trace: bool,
    /// Cross-check the answer with the bar-resolution oracle.
    #[arg(long, global = true)]
    check: bool,
    /// Largest group order the oracle will build.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplier of a group expression such as "Z/4 * Z/6" or "Z x Z".
    Expr { expression: String },
    /// Abelianization and multiplier bounds of a presentation "<a,b | ...>".
    Pres {
        presentation: String,
        /// The presentation complex is aspherical, so the bound is exact.
        #[arg(long)]
        aspherical: bool,
    },
    /// Bar-resolution H1 and H2 of a finite group: an expression of finite
    /// factors, or "perm:" followed by generators separated by ';'.
    Oracle { group: String },
    /// Constraints on M(G1 *_H G2) from a JSON problem file.
    Amalgam { path: PathBuf },
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Result of one subcommand, the unit of `--json` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// The argument as given.
    pub input: String,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Text rendering of the headline group.
    pub summary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<DerivationTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<OracleCheck>,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "result", rename_all = "snake_case")]
pub enum Outcome {
    Expr {
        multiplier: FgAbelianGroup,
        abelianization: FgAbelianGroup,
    },
    Pres {
        abelianization: FgAbelianGroup,
        bounds: MultiplierBounds,
    },
    Oracle {
        order: usize,
        h1: FgAbelianGroup,
        h2: FgAbelianGroup,
    },
    Amalgam(AmalgamSolution),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    /// The value computed the other way.
    pub other: FgAbelianGroup,
    pub agrees: bool,
}

/// The `--json` form of a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    pub exit_code: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapacityExceeded { .. } => EXIT_CAPACITY,
        Error::IllDefinedMap(_) | Error::Mismatch(_) => EXIT_AMALGAM,
        _ => EXIT_USAGE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidArgument(_) => "invalid_argument",
        Error::InvalidComplex(_) => "invalid_complex",
        Error::Syntax { .. } => "syntax",
        Error::UnknownGenerator { .. } => "unknown_generator",
        Error::DuplicateGenerator { .. } => "duplicate_generator",
        Error::InvalidTable(_) => "invalid_table",
        Error::CapacityExceeded { .. } => "capacity_exceeded",
        Error::IllDefinedMap(_) => "ill_defined_map",
        Error::Mismatch(_) => "mismatch",
        Error::NotFinite(_) => "not_finite",
        Error::Io { .. } => "io",
    }
}

fn error_position(e: &Error) -> Option<usize> {
    match e {
        Error::Syntax { position, .. }
        | Error::UnknownGenerator { position, .. }
        | Error::DuplicateGenerator { position, .. } => Some(*position),
        _ => None,
    }
}

/// Runs the CLI on `args` (program name first) without touching the process.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let input = match &cli.command {
        Command::Expr { expression } => expression.clone(),
        Command::Pres { presentation, .. } => presentation.clone(),
        Command::Oracle { group } => group.clone(),
        Command::Amalgam { path } => path.display().to_string(),
    };
    match execute(&cli) {
        Ok(report) => {
            let code = match &report.check {
                Some(c) if !c.agrees => EXIT_DISAGREE,
                _ => EXIT_OK,
            };
            let stdout = if cli.json {
                let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
                s.push('\n');
                s
            } else {
                render_text(&report, cli.trace)
            };
            Output {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                let body = ErrorReport {
                    error: ErrorBody {
                        kind: error_kind(&e).into(),
                        message: e.to_string(),
                        position: error_position(&e),
                        exit_code: code,
                    },
                };
                let mut s = serde_json::to_string_pretty(&body).expect("error serializes");
                s.push('\n');
                Output {
                    code,
                    stdout: s,
                    stderr: String::new(),
                }
            } else {
                let mut msg = format!("error: {e}\n");
                if let Some(pos) = error_position(&e) {
                    let _ = writeln!(msg, "  {input}");
                    let _ = writeln!(msg, "  {}^", " ".repeat(pos));
                }
                Output {
                    code,
                    stdout: String::new(),
                    stderr: msg,
                }
            }
        }
    }
}

fn execute(cli: &Cli) -> schur::Result<Report> {
    let start = Instant::now();
    let mut trace = None;
    let mut check = None;
    let (input, outcome, summary) = match &cli.command {
        Command::Expr { expression } => {
            let e = parse_expr_with_cap(expression, cli.cap)?;
            let (m, t) = schur_multiplier_with_cap(&e, cli.cap)?;
            if cli.check {
                let g = to_finite_group(&e, cli.cap)?;
                let other = bar_h2(&g, cli.cap)?;
                check = Some(OracleCheck {
                    agrees: other == m,
                    other,
                });
            }
            if cli.trace {
                trace = Some(t);
            }
            let summary = m.to_string();
            let outcome = Outcome::Expr {
                multiplier: m,
                abelianization: abelianize_expr(&e),
            };
            (expression.clone(), outcome, summary)
        }
        Command::Pres {
            presentation,
            aspherical,
        } => {
            reject_check(cli, "pres")?;
            let p = parse_presentation(presentation)?;
            let p = if *aspherical {
                p.with_aspherical(true)
            } else {
                p
            };
            let bounds = multiplier_bounds(&p);
            let summary = bounds.h2_complex.to_string();
            let outcome = Outcome::Pres {
                abelianization: abelianization(&p),
                bounds,
            };
            (presentation.clone(), outcome, summary)
        }
        Command::Oracle { group } => {
            let (g, expr) = oracle_group(group, cli.cap)?;
            let h2 = bar_h2(&g, cli.cap)?;
            if cli.check {
                let Some(e) = expr else {
                    return Err(Error::InvalidArgument(
                        "--check needs a group expression, not a permutation list".into(),
                    ));
                };
                let (m, t) = schur_multiplier_with_cap(&e, cli.cap)?;
                if cli.trace {
                    trace = Some(t);
                }
                check = Some(OracleCheck {
                    agrees: m == h2,
                    other: m,
                });
            }
            let summary = h2.to_string();
            let outcome = Outcome::Oracle {
                order: g.order(),
                h1: bar_h1(&g),
                h2,
            };
            (group.clone(), outcome, summary)
        }
        Command::Amalgam { path } => {
            reject_check(cli, "amalgam")?;
            let problem = AmalgamProblem::load(path)?;
            let sol = solve(&problem)?;
            let summary = match &sol.value {
                Some(v) => v.to_string(),
                None => "undetermined".into(),
            };
            (path.display().to_string(), Outcome::Amalgam(sol), summary)
        }
    };
    Ok(Report {
        input,
        outcome,
        summary,
        trace,
        check,
        elapsed_us: u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX),
    })
}

fn reject_check(cli: &Cli, command: &str) -> schur::Result<()> {
    if cli.check {
        Err(Error::InvalidArgument(format!(
            "--check does not apply to `{command}`"
        )))
    } else {
        Ok(())
    }
}

fn oracle_group(
    spec: &str,
    cap: usize,
) -> schur::Result<(FiniteGroup, Option<schur::compose::GroupExpr>)> {
    const PREFIX: &str = "perm:";
    if let Some(rest) = spec.trim_start().strip_prefix(PREFIX) {
        let offset = spec.len() - spec.trim_start().len() + PREFIX.len();
        let mut gens = Vec::new();
        let mut at = offset;
        for piece in rest.split(';') {
            let shift = |e: Error| match e {
                Error::Syntax { position, message } => Error::Syntax {
                    position: position + at,
                    message,
                },
                other => other,
            };
            gens.push(Permutation::parse(piece).map_err(shift)?);
            at += piece.chars().count() + 1;
        }
        let g = build_group(&GroupSpec::Permutations(gens), cap)?;
        Ok((g, None))
    } else {
        let e = parse_expr_with_cap(spec, cap)?;
        let g = to_finite_group(&e, cap)?;
        Ok((g, Some(e)))
    }
}

/// The plain-text form of a report.
pub fn render_text(r: &Report, with_trace: bool) -> String {
    let mut s = String::new();
    match &r.outcome {
        Outcome::Expr {
            multiplier,
            abelianization,
        } => {
            let _ = write!(s, "M(G) = {multiplier}");
            if let Some(c) = &r.check {
                if c.agrees {
                    s.push_str(" (oracle agrees)");
                } else {
                    let _ = write!(s, " (oracle disagrees: {})", c.other);
                }
            }
            let _ = writeln!(s);
            let _ = writeln!(s, "G_ab = {abelianization}");
        }
        Outcome::Pres {
            abelianization,
            bounds,
        } => {
            let _ = writeln!(s, "G_ab = {abelianization}");
            let _ = writeln!(s, "h2_complex = {}", bounds.h2_complex);
            let _ = writeln!(s, "relator_bound = {}", bounds.relator_bound);
            let _ = writeln!(s, "rank_bound = {}", bounds.rank_bound);
            let _ = writeln!(s, "exact = {}", bounds.exact);
        }
        Outcome::Oracle { order, h1, h2 } => {
            let _ = writeln!(s, "|G| = {order}");
            let _ = writeln!(s, "H1 = {h1}");
            let _ = write!(s, "H2 = {h2}");
            if let Some(c) = &r.check {
                if c.agrees {
                    s.push_str(" (compositional rule agrees)");
                } else {
                    let _ = write!(s, " (compositional rule gives {})", c.other);
                }
            }
            let _ = writeln!(s);
        }
        Outcome::Amalgam(sol) => {
            match &sol.sub {
                Some(sub) => {
                    let _ = writeln!(s, "sub = {sub}");
                }
                None => s.push_str("sub = unknown\n"),
            }
            let _ = writeln!(s, "quot = {}", sol.quot);
            let _ = writeln!(s, "determined = {}", sol.determined);
            if let Some(v) = &sol.value {
                let _ = writeln!(s, "M(G) = {v}");
            }
            for note in &sol.notes {
                let _ = writeln!(s, "note: {note}");
            }
        }
    }
    if with_trace {
        if let Some(t) = &r.trace {
            s.push_str("trace:\n");
            for step in t.steps() {
                let _ = writeln!(s, "  {step}");
            }
        }
    }
    s
}
