//! `digital-anomaly`: verify, parametrize, search and bound digital anomalies.
//!
//! Result records go to stdout; progress and diagnostics go to stderr.
//! Exit codes: 0 success, 1 invalid arguments, 2 internal inconsistency,
//! 3 a conjecture counterexample was found.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use digital_anomaly::anomaly::{self, DigitalAnomaly, ParamTriple};
use digital_anomaly::bounds;
use digital_anomaly::record::{parse_int, ResultRecord};
use digital_anomaly::search::{self, Oracle, SearchOptions, SearchReport};
use digital_anomaly::Error;
use num_bigint::BigUint;

use output::{Format, Output, Row};

#[derive(Parser)]
#[command(
    name = "digital-anomaly",
    version,
    about = "Digital anomalies x/y = y + x/B^k"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for standard output.
    #[arg(long, global = true, value_enum, default_value = "jsonl")]
    format: Format,

    /// Worker threads for searches. Output does not depend on this.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,

    /// Append result records (JSONL) to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Quad {
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long)]
    base: String,
    #[arg(long)]
    k: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether (x, y, B, k) is a digital anomaly.
    Verify {
        #[arg(
            long,
            required_unless_present = "from_file",
            conflicts_with = "from_file"
        )]
        x: Option<String>,
        #[arg(long, required_unless_present = "from_file")]
        y: Option<String>,
        #[arg(long, required_unless_present = "from_file")]
        base: Option<String>,
        #[arg(long, required_unless_present = "from_file")]
        k: Option<u32>,
        /// Re-verify every record of a JSONL results file.
        #[arg(long)]
        from_file: Option<PathBuf>,
    },
    /// Recover the parameter triple (t, m, n) of an anomaly.
    Recover(Quad),
    /// List every anomaly generated by a parameter triple (t, m, n).
    Expand {
        #[arg(long)]
        t: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
    },
    /// Brute-force search over one base or a range of bases.
    SearchBrute {
        #[arg(
            long,
            conflicts_with = "base_max",
            required_unless_present = "base_max"
        )]
        base: Option<u64>,
        /// Search every base from 2 up to this value.
        #[arg(long)]
        base_max: Option<u64>,
        #[arg(long, default_value_t = 2)]
        k_max: u32,
        /// `both` runs the two oracles and fails with exit 2 if they disagree.
        #[arg(long, value_enum, default_value = "y")]
        oracle: OracleArg,
    },
    /// Sweep parameter triples with n <= n-max.
    SearchParam {
        #[arg(long)]
        n_max: u64,
        /// Keep only anomalies with base <= this value.
        #[arg(long)]
        base_max: Option<u64>,
        /// Keep only anomalies with k <= this value.
        #[arg(long)]
        k_max: Option<u32>,
    },
    /// Members of the coprime family, or of the gcd-d family with --d.
    Families {
        #[arg(long)]
        d: Option<String>,
        #[arg(long, conflicts_with = "s_max", required_unless_present = "s_max")]
        s: Option<String>,
        #[arg(long)]
        s_max: Option<u64>,
    },
    /// Scan a fixed digit count over bases 2..=base-max and flag unknown hits.
    Conjecture {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        base_max: u64,
        /// JSONL file of anomalies to treat as known, replacing the built-in list.
        #[arg(long)]
        known: Option<PathBuf>,
    },
    /// Fixed-base finiteness bounds in natural-log scale.
    Bounds {
        #[arg(long)]
        base: String,
    },
    /// abc quality of a triple a + b = c, or of the (m-n, n, m) of an anomaly.
    AbcScore {
        #[arg(long, requires_all = ["b", "c"], conflicts_with_all = ["x", "y", "base", "k"])]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long, requires_all = ["y", "base", "k"])]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        k: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Y,
    X,
    Both,
}

enum Failure {
    Usage(String),
    Inconsistent(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => Failure::Usage(m),
            Error::Inconsistency(m) => Failure::Inconsistent(m),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Whether a run found a conjecture counterexample.
type Outcome = Result<bool, Failure>;

fn int(name: &str, s: &str) -> Result<BigUint, Failure> {
    Ok(parse_int(name, s)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(3),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Inconsistent(m)) => {
            eprintln!("internal inconsistency: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let mut out = Output::new(cli.format, cli.out.as_deref())?;
    let opts = SearchOptions::with_workers(usize::from(cli.workers));
    let flagged = match cli.command {
        Command::Verify {
            x,
            y,
            base,
            k,
            from_file,
        } => {
            if let Some(path) = from_file {
                verify_file(&mut out, &path)?;
            } else {
                let (x, y, base, k) = (x.unwrap(), y.unwrap(), base.unwrap(), k.unwrap());
                verify_one(&mut out, &x, &y, &base, k)?;
            }
            false
        }
        Command::Recover(q) => {
            let a =
                DigitalAnomaly::new(int("x", &q.x)?, int("y", &q.y)?, int("base", &q.base)?, q.k)?;
            out.emit(Row::Record(ResultRecord::verified(&a)?))?;
            false
        }
        Command::Expand { t, m, n } => {
            let p = ParamTriple::new(int("t", &t)?, int("m", &m)?, int("n", &n)?)?;
            let found = anomaly::from_params(&p)?;
            if found.is_empty() {
                eprintln!("{p} generates no anomaly");
            }
            for a in found {
                check_roundtrip(&a, &p)?;
                let r = ResultRecord::new(&a, &p, search::Status::Verified)?;
                out.emit(Row::Record(r))?;
            }
            false
        }
        Command::SearchBrute {
            base,
            base_max,
            k_max,
            oracle,
        } => {
            let bases = match (base, base_max) {
                (Some(b), _) => b..=b,
                (None, Some(hi)) => 2..=hi,
                (None, None) => unreachable!("clap requires one of --base/--base-max"),
            };
            let report = match oracle {
                OracleArg::Y => search::brute_force_bases(bases, k_max, Oracle::Y, opts)?,
                OracleArg::X => search::brute_force_bases(bases, k_max, Oracle::X, opts)?,
                OracleArg::Both => {
                    let ys = search::brute_force_bases(bases.clone(), k_max, Oracle::Y, opts)?;
                    let xs = search::brute_force_bases(bases, k_max, Oracle::X, opts)?;
                    progress(&xs);
                    if ys.hits != xs.hits {
                        return Err(Failure::Inconsistent(format!(
                            "y-scan found {} anomalies, x-scan found {}",
                            ys.found(),
                            xs.found()
                        )));
                    }
                    ys
                }
            };
            emit_report(&mut out, &report)?
        }
        Command::SearchParam {
            n_max,
            base_max,
            k_max,
        } => {
            let mut report = search::parametric_sweep(n_max, opts)?;
            let base_cap = base_max.map(BigUint::from);
            report.retain(|a| {
                base_cap.as_ref().is_none_or(|cap| a.base() <= cap)
                    && k_max.is_none_or(|k| a.k() <= k)
            });
            emit_report(&mut out, &report)?
        }
        Command::Families { d, s, s_max } => {
            let d = d.as_deref().map(|d| int("d", d)).transpose()?;
            let members: Vec<DigitalAnomaly> = match (s, s_max) {
                (Some(s), _) => {
                    let s = int("s", &s)?;
                    vec![match &d {
                        Some(d) => anomaly::gcd_family(d, &s)?,
                        None => anomaly::coprime_family(&s)?,
                    }]
                }
                (None, Some(s_max)) => {
                    if d.as_ref().is_some_and(|d| *d < BigUint::from(2u32)) {
                        return Err(Failure::Usage("--d must be >= 2".into()));
                    }
                    let mut v = Vec::new();
                    for s in 2..=s_max {
                        let s = BigUint::from(s);
                        match &d {
                            // s sharing a factor with d, or s <= d^2, is not a member.
                            Some(d) => v.extend(anomaly::gcd_family(d, &s).ok()),
                            None => v.push(anomaly::coprime_family(&s)?),
                        }
                    }
                    v
                }
                (None, None) => unreachable!("clap requires one of --s/--s-max"),
            };
            for a in members {
                out.emit(Row::Record(ResultRecord::verified(&a)?))?;
            }
            false
        }
        Command::Conjecture { k, base_max, known } => {
            if k < 2 {
                return Err(Failure::Usage(format!(
                    "conjecture scans need k >= 2, got {k}"
                )));
            }
            let known = match known {
                Some(path) => read_records(&path)?
                    .iter()
                    .map(ResultRecord::to_anomaly)
                    .collect::<Result<Vec<_>, _>>()?,
                None if k == 2 => search::known_k2(),
                None => Vec::new(),
            };
            let report = search::exponent_scan(k, base_max, &known, opts)?;
            let flagged = emit_report(&mut out, &report)?;
            for hit in report.counterexamples() {
                eprintln!("counterexample candidate: {}", hit.anomaly);
            }
            flagged
        }
        Command::Bounds { base } => {
            out.emit(Row::Bounds(bounds::fixed_base_bounds(&int(
                "base", &base,
            )?)?))?;
            false
        }
        Command::AbcScore {
            a,
            b,
            c,
            x,
            y,
            base,
            k,
        } => {
            let triple = match (a, x) {
                (Some(a), _) => bounds::abc_quality(
                    &int("a", &a)?,
                    &int("b", b.as_deref().unwrap_or_default())?,
                    &int("c", c.as_deref().unwrap_or_default())?,
                )?,
                (None, Some(x)) => {
                    let an = DigitalAnomaly::new(
                        int("x", &x)?,
                        int("y", y.as_deref().unwrap_or_default())?,
                        int("base", base.as_deref().unwrap_or_default())?,
                        k.unwrap_or_default(),
                    )?;
                    bounds::anomaly_abc_score(&an)?
                }
                (None, None) => {
                    return Err(Failure::Usage(
                        "abc-score needs --a/--b/--c or --x/--y/--base/--k".into(),
                    ))
                }
            };
            out.emit(Row::Abc(triple))?;
            false
        }
    };
    out.finish()?;
    Ok(flagged)
}

fn verify_one(out: &mut Output, x: &str, y: &str, base: &str, k: u32) -> Result<(), Failure> {
    let (xv, yv, bv) = (int("x", x)?, int("y", y)?, int("base", base)?);
    if anomaly::verify(&xv, &yv, &bv, k) {
        let a = DigitalAnomaly::new(xv, yv, bv, k)?;
        out.emit(Row::Record(ResultRecord::verified(&a)?))?;
    } else {
        out.emit(Row::Rejected {
            x: xv.to_string(),
            y: yv.to_string(),
            base: bv.to_string(),
            k: k.to_string(),
        })?;
    }
    Ok(())
}

fn read_records(path: &Path) -> Result<Vec<ResultRecord>, Failure> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            ResultRecord::from_json(line)
                .map_err(|e| Failure::Usage(format!("{}:{}: {e}", path.display(), i + 1)))
        })
        .collect()
}

fn verify_file(out: &mut Output, path: &Path) -> Result<(), Failure> {
    for rec in read_records(path)? {
        let (x, y, base, k) = rec.quadruple()?;
        verify_one(out, &x.to_string(), &y.to_string(), &base.to_string(), k)?;
    }
    Ok(())
}

fn check_roundtrip(a: &DigitalAnomaly, p: &ParamTriple) -> Result<(), Failure> {
    let back = anomaly::to_params(a)?;
    if &back != p {
        return Err(Failure::Inconsistent(format!(
            "{a} recovers {back}, expected {p}"
        )));
    }
    Ok(())
}

fn progress(report: &SearchReport) {
    eprintln!(
        "{}: {} candidates, {} anomalies, {:.3}s",
        report.domain,
        report.candidates,
        report.found(),
        report.elapsed.as_secs_f64()
    );
}

/// Emits every hit and returns whether any was flagged.
fn emit_report(out: &mut Output, report: &SearchReport) -> Result<bool, Failure> {
    progress(report);
    for hit in &report.hits {
        out.emit(Row::Record(ResultRecord::from_hit(hit)?))?;
    }
    Ok(report.has_counterexamples())
}
