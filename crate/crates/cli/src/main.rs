//! `harmchoice` command-line front end.
//!
//! Exit status: 0 on success, 1 when a dataset or analysis fails, 2 on usage
//! errors (bad flags, malformed order or policy specs, out-of-range sizes).

use std::io::{Read as _, Write as _};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use harmchoice::axioms::{constant_selection_witnesses, find_reversals};
use harmchoice::census::{
    construct_inconsistent, enumerate_census, generate_harmful, sample_census, IndexPolicy, DEFAULT_SEED,
    MAX_EXACT_CENSUS_N,
};
use harmchoice::dataset::{parse_dataset, to_file, to_lines, Dataset};
use harmchoice::degree::{sp, sp_axiomatic, sp_bruteforce};
use harmchoice::distortion::harmful_distortion;
use harmchoice::report::{analyze, render_reversals, render_sp, ReversalView, SpView};
use harmchoice::{GroundSet, Menu};

const WORKERS_ENV: &str = "HARMCHOICE_WORKERS";

#[derive(Parser)]
#[command(name = "harmchoice", version, about = "Analyze choice data for self-punishing behavior")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel searches (HARMCHOICE_WORKERS takes precedence).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: WARP, reversals, sp, witness, elicited preferences.
    Analyze { file: String },
    /// Whether the dataset satisfies WARP.
    Warp { file: String },
    /// List WARP reversals.
    Reversals { file: String },
    /// Degree of self-punishment.
    Sp {
        file: String,
        /// Exhaustive search over orders only (n <= 8).
        #[arg(long, conflicts_with = "axiomatic")]
        brute: bool,
        /// Characterization only.
        #[arg(long)]
        axiomatic: bool,
    },
    /// Preferences revealed by the characterization.
    Elicit { file: String },
    /// The harmful distortion of an order at a given index.
    Distort {
        /// Best-to-worst labels, comma separated.
        #[arg(long)]
        order: String,
        #[arg(long)]
        index: usize,
    },
    /// Exact distribution of sp over all choices on n alternatives.
    Census {
        #[arg(long)]
        n: usize,
    },
    /// Monte Carlo estimate of the sp distribution.
    SampleCensus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Simulate a self-punishing decision maker and print the dataset.
    Generate {
        /// Best-to-worst labels, comma separated.
        #[arg(long)]
        order: String,
        /// `fixed:I`, `upto:J`, or `explicit:a+b=1;a+b+c=2` (unlisted menus use 0).
        #[arg(long)]
        policy: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Build an inconsistent choice on 2k alternatives.
    ConstructInconsistent {
        #[arg(long)]
        k: usize,
    },
}

/// Failures that map to exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn worker_count(flag: Option<usize>) -> anyhow::Result<usize> {
    let from_env = match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`")))?,
        ),
        _ => None,
    };
    let n = from_env.or(flag).unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    if n == 0 {
        return Err(usage("worker count must be at least 1"));
    }
    Ok(n)
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let workers = worker_count(cli.workers)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("cannot start worker pool")?;
    let format = cli.format;
    pool.install(|| dispatch(cli.command, format))
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text(value),
    }
}

fn read_dataset(file: &str) -> anyhow::Result<Dataset> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("cannot read standard input")?;
        s
    } else {
        std::fs::read_to_string(file).with_context(|| format!("cannot read {file}"))?
    };
    parse_dataset(&text).with_context(|| format!("invalid dataset {file}"))
}

fn parse_order(ground_spec: &str) -> anyhow::Result<(GroundSet, harmchoice::LinearOrder)> {
    let labels: Vec<String> = ground_spec.split(',').map(|l| l.trim().to_string()).collect();
    let ground = GroundSet::new(labels).map_err(|e| usage(format!("invalid order `{ground_spec}`: {e}")))?;
    let order = harmchoice::LinearOrder::identity(ground.len());
    Ok((ground, order))
}

fn parse_index(s: &str) -> anyhow::Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| usage(format!("invalid index `{s}` in policy")))
}

fn parse_policy(spec: &str, ground: &GroundSet) -> anyhow::Result<IndexPolicy> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("policy `{spec}` must look like fixed:I, upto:J or explicit:...")))?;
    let policy = match kind.trim() {
        "fixed" => IndexPolicy::Fixed(parse_index(arg)?),
        "upto" => IndexPolicy::UpTo(parse_index(arg)?),
        "explicit" => {
            let mut map: Vec<(Menu, usize)> = Vec::new();
            for entry in arg.split(';').map(str::trim).filter(|e| !e.is_empty()) {
                let (menu, i) = entry
                    .split_once('=')
                    .ok_or_else(|| usage(format!("policy entry `{entry}` must look like a+b=I")))?;
                let labels: Vec<&str> = menu.split('+').map(str::trim).collect();
                let menu = ground
                    .menu(&labels)
                    .map_err(|e| usage(format!("policy entry `{entry}`: {e}")))?;
                map.push((menu, parse_index(i)?));
            }
            IndexPolicy::Explicit(map)
        }
        other => return Err(usage(format!("unknown policy kind `{other}`"))),
    };
    if policy.cap() >= ground.len() {
        return Err(usage(format!(
            "policy index {} out of range for {} alternatives",
            policy.cap(),
            ground.len()
        )));
    }
    Ok(policy)
}

#[derive(Serialize)]
struct WarpView {
    warp: bool,
    reversal_count: usize,
    constant_selection: Option<Vec<String>>,
}

#[derive(Serialize)]
struct ReversalsView {
    reversal_count: usize,
    reversals: Vec<ReversalView>,
}

#[derive(Serialize)]
struct ElicitView {
    sp: usize,
    partial_order: Option<Vec<(String, String)>>,
    elicited_orders: Vec<Vec<String>>,
    elicited_order_count: Option<u64>,
}

#[derive(Serialize)]
struct DistortView {
    order: Vec<String>,
    index: usize,
    distorted: Vec<String>,
}

fn dispatch(command: Command, format: Format) -> anyhow::Result<String> {
    Ok(match command {
        Command::Analyze { file } => {
            let d = read_dataset(&file)?;
            let report = analyze(&d.ground, &d.choice, d.warnings)?;
            emit(format, &report, |r| r.to_text())
        }
        Command::Warp { file } => {
            let d = read_dataset(&file)?;
            let reversals = find_reversals(&d.choice);
            let view = WarpView {
                warp: reversals.is_empty(),
                reversal_count: reversals.len(),
                constant_selection: constant_selection_witnesses(&d.choice)
                    .map(|v| v.into_iter().map(|a| d.ground.label(a).to_string()).collect()),
            };
            emit(format, &view, |v| {
                let mut out = format!("WARP           {}\n", if v.warp { "holds" } else { "violated" });
                out += &format!("reversals      {}\n", v.reversal_count);
                if let Some(cs) = &v.constant_selection {
                    out += &format!("constant sel.  {}\n", cs.join(", "));
                }
                out
            })
        }
        Command::Reversals { file } => {
            let d = read_dataset(&file)?;
            let reversals = find_reversals(&d.choice);
            let view = ReversalsView {
                reversal_count: reversals.len(),
                reversals: reversals.iter().map(|r| ReversalView::new(&d.ground, r)).collect(),
            };
            emit(format, &view, |v| {
                let mut out = String::new();
                render_reversals(&mut out, v.reversal_count, &v.reversals);
                out
            })
        }
        Command::Sp { file, brute, axiomatic } => {
            let d = read_dataset(&file)?;
            let report = if brute {
                sp_bruteforce(&d.choice)
            } else if axiomatic {
                sp_axiomatic(&d.choice)
            } else {
                sp(&d.choice)
            }?;
            let view = SpView::new(&d.ground, &report);
            emit(format, &view, |v| {
                let mut out = String::new();
                render_sp(&mut out, v);
                out
            })
        }
        Command::Elicit { file } => {
            let d = read_dataset(&file)?;
            let r = analyze(&d.ground, &d.choice, d.warnings)?;
            let view = ElicitView {
                sp: r.sp.sp,
                partial_order: r.partial_order,
                elicited_orders: r.elicited_orders,
                elicited_order_count: r.elicited_order_count,
            };
            emit(format, &view, |v| {
                let mut out = format!("sp             {}\n", v.sp);
                if let Some(p) = &v.partial_order {
                    let pairs: Vec<String> = p.iter().map(|(a, b)| format!("{a}>{b}")).collect();
                    out += &format!("revealed       {}\n", pairs.join(" "));
                }
                out += &format!("elicited       {}\n", v.elicited_order_count.unwrap_or(0));
                for o in &v.elicited_orders {
                    out += &format!("  {}\n", o.join(" > "));
                }
                out
            })
        }
        Command::Distort { order, index } => {
            let (ground, base) = parse_order(&order)?;
            let distorted = harmful_distortion(&base, index).map_err(|e| usage(e.to_string()))?;
            let view = DistortView {
                order: ground.order_labels(&base),
                index,
                distorted: ground.order_labels(&distorted),
            };
            emit(format, &view, |v| format!("{}\n", v.distorted.join(",")))
        }
        Command::Census { n } => {
            if !(1..=MAX_EXACT_CENSUS_N).contains(&n) {
                return Err(usage(format!("census needs 1 <= n <= {MAX_EXACT_CENSUS_N}; use sample-census above that")));
            }
            let report = enumerate_census(n)?;
            emit(format, &report, |r| r.to_text())
        }
        Command::SampleCensus { n, samples, seed } => {
            let report = sample_census(n, samples, seed).map_err(|e| usage(e.to_string()))?;
            emit(format, &report, |r| r.to_text())
        }
        Command::Generate { order, policy, seed } => {
            let (ground, base) = parse_order(&order)?;
            let policy = parse_policy(&policy, &ground)?;
            let choice = generate_harmful(&base, &policy, seed)?;
            emit(format, &to_file(&ground, &choice), |_| to_lines(&ground, &choice))
        }
        Command::ConstructInconsistent { k } => {
            let (ground, choice) = construct_inconsistent(k).map_err(|e| usage(e.to_string()))?;
            emit(format, &to_file(&ground, &choice), |_| to_lines(&ground, &choice))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_specs() {
        let g = GroundSet::new(["a", "b", "c"]).unwrap();
        assert_eq!(parse_policy("fixed:1", &g).unwrap(), IndexPolicy::Fixed(1));
        assert_eq!(parse_policy("upto:2", &g).unwrap(), IndexPolicy::UpTo(2));
        let p = parse_policy("explicit: a+b=1; a+b+c=2", &g).unwrap();
        assert_eq!(
            p,
            IndexPolicy::Explicit(vec![(Menu::from_mask(0b011).unwrap(), 1), (Menu::from_mask(0b111).unwrap(), 2)])
        );
        assert!(parse_policy("upto:3", &g).is_err());
        assert!(parse_policy("sometimes:1", &g).is_err());
        assert!(parse_policy("explicit:a+q=1", &g).is_err());
    }

    #[test]
    fn order_specs() {
        let (g, o) = parse_order("h, mh, ml, l").unwrap();
        assert_eq!(g.order_labels(&o), ["h", "mh", "ml", "l"]);
        assert!(parse_order("a,a").is_err());
        assert!(parse_order("a,,b").is_err());
    }
}
