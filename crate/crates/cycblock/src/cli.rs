//! Command-line front end. Every command is a thin wrapper over a library
//! call; output is JSON, CSV or plain text.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::{classify, ClassifyError};
use crate::labels::{count_admissible, enumerate_admissible, Label, Residue};
use crate::params::BlockConfig;
use crate::synth::{realize, verify_witness, Check, SynthError, Witness, DEFAULT_SEARCH_BOUND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "cycblock", version, about = "Endo-permutation labels of cyclic blocks of SL_n(q) and SU_n(q)")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the block configuration in a JSON file.
    Classify { config: PathBuf },
    /// List the admissible labels of length l.
    Enumerate {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        residue: u64,
    },
    /// Compare counts of admissible labels with the closed formula.
    Count {
        /// A single length or a range such as `3..6` (inclusive).
        #[arg(long)]
        l: String,
        #[arg(long)]
        residue: u64,
    },
    /// Produce a witness realizing a label.
    Realize {
        #[arg(long)]
        p: u64,
        /// Set syntax, e.g. "{1,2}" or "{}".
        #[arg(long)]
        label: String,
        /// Label length; defaults to max(A) + 1 and is required for "{}".
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        residue: u64,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: u64,
    },
    /// Re-check a witness JSON file.
    Verify { witness: PathBuf },
    /// Run an oracle suite.
    Oracle {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the fixture files to this directory and exit.
        #[arg(long)]
        emit_fixtures: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Load { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

/// Reads a [`BlockConfig`]; unknown fields are rejected and parse errors
/// carry line and column.
pub fn load_config(path: &Path) -> Result<BlockConfig, CliError> {
    load_json(path)
}

pub fn load_witness(path: &Path) -> Result<Witness, CliError> {
    load_json(path)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let err = |msg: String| CliError::Load { path: path.display().to_string(), msg };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| err(e.to_string()))
}

fn residue(r: u64) -> Result<Residue, CliError> {
    Residue::from_int(r).ok_or_else(|| CliError::Usage(format!("residue must be 1 or 3, got {r}")))
}

/// `"3..6"` (inclusive) or `"4"`.
pub fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("expected N or A..B, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim_start_matches('=').trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Parses the set syntax, taking `l = max(A) + 1` when `l` is absent.
pub fn parse_label(s: &str, l: Option<usize>) -> Result<Label, CliError> {
    let usage = |e: crate::labels::LabelError| CliError::Usage(format!("label {s:?}: {e}"));
    match l {
        Some(l) => Label::parse_set(s, l).map_err(usage),
        None => {
            let wide = Label::parse_set(s, usize::MAX).map_err(usage)?;
            let max = wide.elements().last().copied().ok_or_else(|| {
                CliError::Usage("the empty label needs an explicit --l".into())
            })?;
            Label::new(max + 1, wide.elements().to_vec()).map_err(usage)
        }
    }
}

struct Out<'a> {
    w: &'a mut dyn Write,
    format: Format,
}

impl Out<'_> {
    fn json<T: Serialize>(&mut self, v: &T) {
        let _ = writeln!(self.w, "{}", serde_json::to_string_pretty(v).expect("serializable"));
    }

    fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let _ = wtr.write_record(header);
        for r in rows {
            let _ = wtr.write_record(r);
        }
        let bytes = wtr.into_inner().expect("in-memory writer");
        let _ = self.w.write_all(&bytes);
    }

    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.w, "{}", s.as_ref());
    }
}

#[derive(Serialize)]
struct EnumerateOut<'a> {
    l: usize,
    residue: u64,
    count: usize,
    labels: &'a [Label],
}

#[derive(Serialize)]
struct CountRow {
    l: usize,
    enumerated: usize,
    brute_force: usize,
    formula: Option<usize>,
    agree: bool,
}

#[derive(Serialize)]
struct ChecksOut<'a> {
    pass: bool,
    checks: &'a [Check],
}

/// Counts subsets of `{1, …, l−1}` passing the admissibility test directly.
pub fn brute_force_count(l: usize, r: Residue) -> usize {
    (0u64..1 << (l - 1))
        .filter(|mask| {
            let elems: Vec<usize> = (1..l).filter(|x| mask >> (x - 1) & 1 == 1).collect();
            crate::labels::is_admissible(&Label::new(l, elems).unwrap(), r)
        })
        .count()
}

/// Closed form for the number of admissible labels: `l` for residue 1 and
/// `l(l+1)/2 − 2` for residue 3 (from `l = 3` on).
pub fn count_formula(l: usize, r: Residue) -> Option<usize> {
    match r {
        Residue::One => Some(l),
        Residue::Three if l >= 3 => Some(l * (l + 1) / 2 - 2),
        Residue::Three => None,
    }
}

/// Parses `args` and runs the command; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn dispatch(cli: &Cli, w: &mut dyn Write) -> Result<i32, (i32, String)> {
    let usage = |e: CliError| (EXIT_USAGE, e.to_string());
    let mut out = Out { w, format: cli.format };
    match &cli.command {
        Command::Classify { config } => {
            let cfg = load_config(config).map_err(|e| (EXIT_INVALID, e.to_string()))?;
            let cb = classify(&cfg).map_err(|e| match e {
                ClassifyError::Internal(_) => (EXIT_CHECK, e.to_string()),
                _ => (EXIT_INVALID, e.to_string()),
            })?;
            match out.format {
                Format::Json => out.json(&cb),
                Format::Csv => out.csv(
                    &["epsilon", "p", "a", "c", "c_prime", "n", "l", "A", "case"],
                    &[vec![
                        cb.config.epsilon.to_string(),
                        cb.config.p.to_string(),
                        cb.config.a.to_string(),
                        cb.config.c.to_string(),
                        cb.config.c_prime.to_string(),
                        cb.config.n().to_string(),
                        cb.label.l().to_string(),
                        cb.label.to_string(),
                        cb.case_tag().to_string(),
                    ]],
                ),
                Format::Text => out.line(format!("l = {}  A = {}  case: {}", cb.label.l(), cb.label, cb.case_tag())),
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate { l, residue: r } => {
            let r = residue(*r).map_err(usage)?;
            if *l == 0 {
                return Err(usage(CliError::Usage("l must be positive".into())));
            }
            let labels = enumerate_admissible(*l, r);
            match out.format {
                Format::Json => out.json(&EnumerateOut { l: *l, residue: r.as_int(), count: labels.len(), labels: &labels }),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = labels.iter().map(|x| vec![x.l().to_string(), x.to_string()]).collect();
                    out.csv(&["l", "A"], &rows)
                }
                Format::Text => {
                    for x in &labels {
                        out.line(x.to_string());
                    }
                    out.line(format!("count: {}", labels.len()));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Count { l, residue: r } => {
            let r = residue(*r).map_err(usage)?;
            let (lo, hi) = parse_range(l).map_err(usage)?;
            if hi > 24 {
                return Err(usage(CliError::Usage("l ≤ 24 for the brute-force column".into())));
            }
            let rows: Vec<CountRow> = (lo..=hi)
                .map(|l| {
                    let enumerated = count_admissible(l, r);
                    let brute_force = brute_force_count(l, r);
                    let formula = count_formula(l, r);
                    let agree = enumerated == brute_force && formula.is_none_or(|f| f == enumerated);
                    CountRow { l, enumerated, brute_force, formula, agree }
                })
                .collect();
            let formula_col = match r {
                Residue::One => "formula l",
                Residue::Three => "formula l(l+1)/2−2",
            };
            match out.format {
                Format::Json => out.json(&rows),
                Format::Csv => {
                    let body: Vec<Vec<String>> = rows
                        .iter()
                        .map(|x| {
                            vec![
                                x.l.to_string(),
                                x.enumerated.to_string(),
                                x.brute_force.to_string(),
                                x.formula.map_or(String::new(), |f| f.to_string()),
                            ]
                        })
                        .collect();
                    out.csv(&["l", "enumerated", "brute force", formula_col], &body)
                }
                Format::Text => {
                    out.line(format!("{:>4} {:>11} {:>12} {:>20}", "l", "enumerated", "brute force", formula_col));
                    for x in &rows {
                        let f = x.formula.map_or("-".to_string(), |f| f.to_string());
                        out.line(format!("{:>4} {:>11} {:>12} {:>20}", x.l, x.enumerated, x.brute_force, f));
                    }
                }
            }
            Ok(if rows.iter().all(|x| x.agree) { EXIT_OK } else { EXIT_CHECK })
        }
        Command::Realize { p, label, l, residue: r, search_bound } => {
            let r = residue(*r).map_err(usage)?;
            let target = parse_label(label, *l).map_err(usage)?;
            let w = realize(*p, &target, r, *search_bound).map_err(|e| {
                let code = match e {
                    SynthError::RoundTrip { .. } | SynthError::Classify(ClassifyError::Internal(_)) => EXIT_CHECK,
                    SynthError::Classify(_) => EXIT_INVALID,
                    _ => EXIT_USAGE,
                };
                (code, e.to_string())
            })?;
            match out.format {
                Format::Json => out.json(&w),
                Format::Csv => out.csv(&["l", "A", "q", "n", "|Y|", "construction"], &[witness_row(&w)]),
                Format::Text => {
                    out.line(format!("{:>3} {:>14} {:>12} {:>8} {:>8} {:>6}", "l", "A", "q", "n", "|Y|", "tag"));
                    let row = witness_row(&w);
                    out.line(format!(
                        "{:>3} {:>14} {:>12} {:>8} {:>8} {:>6}",
                        row[0], row[1], row[2], row[3], row[4], row[5]
                    ));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { witness } => {
            let w = load_witness(witness).map_err(|e| (EXIT_INVALID, e.to_string()))?;
            let report = verify_witness(&w);
            emit_checks(&mut out, &report.checks);
            Ok(if report.all_pass() {
                EXIT_OK
            } else if report.failed().iter().any(|c| c.name == "validate") {
                EXIT_INVALID
            } else {
                EXIT_CHECK
            })
        }
        Command::Oracle { suite, seed, emit_fixtures } => {
            if let Some(dir) = emit_fixtures {
                let paths = crate::suites::write_fixtures(dir, *seed).map_err(|e| (EXIT_CHECK, e))?;
                for p in paths {
                    out.line(p.display().to_string());
                }
                return Ok(EXIT_OK);
            }
            let fixtures = std::env::var_os("CYCBLOCK_FIXTURES").map(PathBuf::from);
            let checks = crate::suites::run(suite, *seed, fixtures).ok_or_else(|| {
                (EXIT_USAGE, format!("unknown suite {suite:?}; expected one of {:?}", crate::suites::SUITES))
            })?;
            emit_checks(&mut out, &checks);
            Ok(if checks.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_CHECK })
        }
    }
}

fn witness_row(w: &Witness) -> Vec<String> {
    vec![
        w.target.l().to_string(),
        w.target.to_string(),
        w.q.to_string(),
        w.n.to_string(),
        w.y_order.to_string(),
        w.construction_tag().to_string(),
    ]
}

fn emit_checks(out: &mut Out<'_>, checks: &[Check]) {
    match out.format {
        Format::Json => out.json(&ChecksOut { pass: checks.iter().all(|c| c.pass), checks }),
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| vec![c.name.clone(), if c.pass { "pass" } else { "FAIL" }.into(), c.detail.clone()])
                .collect();
            out.csv(&["check", "result", "detail"], &rows)
        }
        Format::Text => {
            for c in checks {
                out.line(format!("{} {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail));
            }
        }
    }
}
