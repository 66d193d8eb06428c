//! Command line front end.
//!
//! Exit status: 0 when the command ran and every check it performs passed,
//! 1 when a check failed, 2 on usage errors.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::collatz::{self, DEFAULT_MAX_STEPS};
use crate::counting;
use crate::inverse::{self, SubsetTag};
use crate::range;
use crate::verify;
use crate::PosInt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "collatz-kit", version, about = "Exact Collatz trajectories, inverse tables and recurrence checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Even,
    Odd,
}

fn default_shards() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward trajectory of a single start.
    Seq {
        #[arg(long)]
        start: PosInt,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
    },
    /// Predecessor table of one residue class.
    Tables {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 9)]
        cols: usize,
    },
    /// Closed-form totals against brute-force counts for k = kmin..=kmax.
    Totals {
        #[arg(long)]
        kmax: u64,
        #[arg(long, default_value_t = 2)]
        kmin: u64,
    },
    /// Iterate the range recurrence.
    RangeIter {
        #[arg(long)]
        start: PosInt,
        #[arg(long, default_value_t = 10)]
        iters: usize,
    },
    /// Confirm every odd start up to a bound reaches 1.
    VerifyForward {
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
        #[arg(long, default_value_t = default_shards())]
        shards: usize,
    },
    /// Expand the inverse tree from 1 and report coverage of odd numbers.
    VerifyInverse {
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        value_cap: u64,
        #[arg(long, default_value_t = 60)]
        x_max: u32,
    },
    /// Look for cycles among trajectories of odd starts up to a bound.
    CycleScan {
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
    },
    /// Trajectory table of the odd starts up to N0.
    AssumptionTable {
        #[arg(long, visible_alias = "start")]
        n0: u64,
    },
    /// Totals plus a record-by-record class breakdown for k = 2..=kmax.
    CrossCheck {
        #[arg(long)]
        kmax: u64,
    },
}

/// What a command produced.
struct Outcome {
    body: String,
    passed: bool,
}

impl Outcome {
    fn new(body: String, passed: bool) -> Self {
        Self { body, passed }
    }
}

enum CliError {
    Usage(String),
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn unsupported(format: Format, command: &str) -> CliError {
    CliError::Usage(format!(
        "format {format:?} is not available for `{command}`; use text or json"
    ))
}

fn csv_rows<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("ascii output")
}

fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    let format = config.format;
    match &config.command {
        Command::Seq { start, max_steps } => {
            let t = collatz::trajectory(start, *max_steps);
            let body = match format {
                Format::Json => json(&t),
                Format::Text => {
                    let values: Vec<String> = t.values().map(ToString::to_string).collect();
                    format!(
                        "{}\nsteps={} even={} odd={} peak={} terminated={}\n",
                        values.join(" -> "),
                        t.len(),
                        t.even_steps,
                        t.odd_steps,
                        t.peak(),
                        t.terminated
                    )
                }
                Format::Csv => unreachable_csv("seq")?,
            };
            Ok(Outcome::new(body, t.terminated))
        }
        Command::Tables { class, rows, cols } => {
            let tag = match class {
                ClassArg::Even => SubsetTag::EvenPowerClass,
                ClassArg::Odd => SubsetTag::OddPowerClass,
            };
            let table = inverse::generate_table(tag, *rows, *cols).map_err(usage_on_domain)?;
            let body = match format {
                Format::Csv => table.to_csv(),
                Format::Json => json(&table),
                Format::Text => table.to_text(),
            };
            Ok(Outcome::new(body, true))
        }
        Command::Totals { kmax, kmin } => {
            if kmin > kmax {
                return Err(CliError::Usage(format!("--kmin {kmin} exceeds --kmax {kmax}")));
            }
            let reports = (*kmin..=*kmax)
                .map(counting::totals)
                .collect::<crate::Result<Vec<_>>>()
                .map_err(usage_on_domain)?;
            let passed = reports.iter().all(|r| r.identity_holds);
            let body = match format {
                Format::Json => json(&reports),
                Format::Csv => csv_rows(
                    &["kN", "N", "To", "Te", "T", "bruteCount", "identityHolds"],
                    reports.iter().map(|r| {
                        [
                            r.k_n.to_string(),
                            r.n.to_string(),
                            r.t_o.to_string(),
                            r.t_e.to_string(),
                            r.t.to_string(),
                            r.brute_count.to_string(),
                            r.identity_holds.to_string(),
                        ]
                    }),
                ),
                Format::Text => reports
                    .iter()
                    .map(|r| {
                        format!(
                            "kN={} N={} To={} Te={} T={} brute={} {}\n",
                            r.k_n,
                            r.n,
                            r.t_o,
                            r.t_e,
                            r.t,
                            r.brute_count,
                            if r.identity_holds { "ok" } else { "MISMATCH" }
                        )
                    })
                    .collect(),
            };
            Ok(Outcome::new(body, passed))
        }
        Command::RangeIter { start, iters } => {
            if *iters == 0 {
                return Err(CliError::Usage("--iters must be at least 1".into()));
            }
            let trace = range::iterate_ranges(start, *iters).map_err(usage_on_domain)?;
            // stalls are only expected from p_N in {2, 3}, i.e. N0 in {3, 5}
            let expected_stall = start.to_u64().is_some_and(|n| n <= 5);
            let passed = !trace.stalled || expected_stall;
            let body = match format {
                Format::Json => trace.to_json_lines(),
                Format::Csv => csv_rows(
                    &["N", "pN", "No", "Ne", "chosen", "growth"],
                    trace.states.iter().map(|s| {
                        [
                            s.n.to_string(),
                            s.p_n.to_string(),
                            s.odd_candidate.to_string(),
                            s.even_candidate.to_string(),
                            s.chosen.to_string(),
                            s.growth.to_string(),
                        ]
                    }),
                ),
                Format::Text => {
                    let mut out: String = trace.states.iter().map(|s| format!("{s}\n")).collect();
                    if let Some(i) = trace.stall_index {
                        out.push_str(&format!("stalled at step {i}\n"));
                    }
                    out
                }
            };
            Ok(Outcome::new(body, passed))
        }
        Command::VerifyForward {
            bound,
            max_steps,
            shards,
        } => {
            let report =
                verify::verify_forward(*bound, *max_steps, *shards).map_err(usage_on_domain)?;
            let body = match format {
                Format::Json => json(&report),
                Format::Text => format!(
                    "bound={} verified={} failures={} maxStepsUsed={} shards={} wallTime={:.3}s\n",
                    report.bound,
                    report.verified,
                    report.failures.len(),
                    report.max_steps_used,
                    report.shards,
                    report.wall_time.as_secs_f64()
                ),
                Format::Csv => unreachable_csv("verify-forward")?,
            };
            Ok(Outcome::new(body, report.all_confirmed()))
        }
        Command::VerifyInverse {
            bound,
            value_cap,
            x_max,
        } => {
            let report =
                inverse::inverse_bfs(*bound, *value_cap, *x_max).map_err(usage_on_domain)?;
            let body = match format {
                Format::Json => json(&report),
                Format::Text => format!(
                    "bound={} valueCap={} xMax={} reached={} unreached={} nodesExpanded={}{}\n",
                    report.bound,
                    report.value_cap,
                    report.x_max,
                    report.reached.len(),
                    report.unreached.len(),
                    report.nodes_expanded,
                    if report.unreached.is_empty() {
                        String::new()
                    } else {
                        let list: Vec<String> =
                            report.unreached.iter().map(u64::to_string).collect();
                        format!("\nunreached: {}", list.join(","))
                    }
                ),
                Format::Csv => unreachable_csv("verify-inverse")?,
            };
            Ok(Outcome::new(body, report.is_complete()))
        }
        Command::CycleScan { bound, max_steps } => {
            let scan = verify::cycle_scan(*bound, *max_steps).map_err(usage_on_domain)?;
            let only_trivial = scan.cycles.len() == 1
                && scan.cycles[0].members.iter().filter_map(PosInt::to_u64).eq([1, 4, 2]);
            let passed = only_trivial && scan.unresolved.is_empty();
            let body = match format {
                Format::Json => json(&scan),
                Format::Text => {
                    let mut out = String::new();
                    for c in &scan.cycles {
                        let m: Vec<String> = c.members.iter().map(ToString::to_string).collect();
                        out.push_str(&format!(
                            "cycle {} (product {})\n",
                            m.join(" -> "),
                            c.chain_product()
                        ));
                    }
                    out.push_str(&format!("unresolved starts: {}\n", scan.unresolved.len()));
                    out
                }
                Format::Csv => unreachable_csv("cycle-scan")?,
            };
            Ok(Outcome::new(body, passed))
        }
        Command::AssumptionTable { n0 } => {
            let table = verify::reproduce_assumption_table(*n0).map_err(usage_on_domain)?;
            let body = match format {
                Format::Json => json(&table),
                Format::Text => table.to_text(),
                Format::Csv => unreachable_csv("assumption-table")?,
            };
            Ok(Outcome::new(body, true))
        }
        Command::CrossCheck { kmax } => {
            let checks = verify::cross_check_totals(*kmax).map_err(usage_on_domain)?;
            let passed = checks.iter().all(|c| c.ok);
            let body = match format {
                Format::Json => json(&checks),
                Format::Text => checks
                    .iter()
                    .map(|c| {
                        let b = &c.breakdown;
                        format!(
                            "kN={} N={} T={} = {}+{}+{}+{} {}\n",
                            c.report.k_n,
                            c.report.n,
                            c.report.t,
                            b.unit_row,
                            b.root,
                            b.odd_rows,
                            b.even_rows,
                            if c.ok { "ok" } else { "MISMATCH" }
                        )
                    })
                    .collect(),
                Format::Csv => unreachable_csv("cross-check")?,
            };
            Ok(Outcome::new(body, passed))
        }
    }
}

fn unreachable_csv(command: &str) -> Result<String, CliError> {
    Err(unsupported(Format::Csv, command))
}

/// Argument-range errors from the library surface as usage errors.
fn usage_on_domain(e: crate::Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&config) {
        Ok(outcome) => {
            if let Err(e) = out.write_all(outcome.body.as_bytes()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    let _ = writeln!(err, "error: {e}");
                }
            }
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
