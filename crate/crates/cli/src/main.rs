//! `paley`: the small-q table, exhaustive range scans and single-curve reports.
//!
//! Exit status: 0 when every check passes, 1 when a mathematical violation
//! was found, 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use paley_core::curves::PointCounter;
use paley_core::ff::DEFAULT_MAX_ORDER;
use paley_core::table;
use paley_core::verify::{self, Check, CheckRow};
use paley_core::Paley;
use rayon::prelude::*;
use serde::Serialize;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "paley", version, about = "Exact checks on Paley graph intersection numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print triangle and path rows of the aggregated intersection numbers.
    Table {
        #[arg(long, value_delimiter = ',', default_value = "5,9,13,17,25,29")]
        q: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run checks over every eligible order in a range and write reports.
    Scan {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[arg(long, value_delimiter = ',', default_value = "bound,corollary,hasse,k4,psi,extremal")]
        checks: Vec<Check>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Character sum and point count of y^2 = (x-a)(x-b)(x-c).
    Curve {
        #[arg(long)]
        q: u32,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        roots: Vec<u32>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn max_order() -> Result<u64, Failure> {
    match std::env::var("PALEY_MAX_Q") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| usage(format!("PALEY_MAX_Q={v:?}: {e}"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn eligible(q: u32) -> Result<Paley, Failure> {
    let cap = max_order()?;
    if q as u64 > cap {
        return Err(usage(format!("order {q} exceeds the cap {cap}")));
    }
    Paley::of_order(q).map_err(|e| usage(format!("ineligible order {q}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table { q, format } => cmd_table(&q, format),
        Command::Scan {
            from,
            to,
            checks,
            jobs,
            out,
        } => cmd_scan(from, to, &checks, jobs, &out),
        Command::Curve { q, roots } => cmd_curve(q, &roots),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("paley: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_table(qs: &[u32], format: Format) -> Result<(), Failure> {
    let bad: Vec<String> = qs
        .iter()
        .filter_map(|&q| eligible(q).err().map(|f| f.message))
        .collect();
    if !bad.is_empty() {
        return Err(usage(bad.join("; ")));
    }
    let rows = table::build_table(qs).map_err(|e| usage(e.to_string()))?;
    match format {
        Format::Text => print!("{}", table::format_text(&rows)),
        Format::Tsv => print!("{}", table::format_tsv(&rows)),
    }
    Ok(())
}

fn cmd_curve(q: u32, roots: &[u32]) -> Result<(), Failure> {
    let g = eligible(q)?;
    let f = g.field();
    let [a, b, c] = <[u32; 3]>::try_from(roots)
        .map_err(|_| usage(format!("expected three roots, got {}", roots.len())))?
        .map(|r| f.element(r as u64));
    let (a, b, c) = (
        a.map_err(|e| usage(e.to_string()))?,
        b.map_err(|e| usage(e.to_string()))?,
        c.map_err(|e| usage(e.to_string()))?,
    );
    let report = PointCounter::new(f)
        .report(a, b, c)
        .map_err(|e| usage(e.to_string()))?;
    let (abs_s, slack) = report.hasse_margin(q);
    let n111 = g.triple_via_charsum(a, b, c).map_err(|e| Failure {
        code: EXIT_VIOLATION,
        message: e.to_string(),
    })?;
    let lines = [
        ("q", q.to_string()),
        ("roots", format!("{a},{b},{c}")),
        ("S", report.s.to_string()),
        ("m", report.m.to_string()),
        ("N", report.n.to_string()),
        ("supersingular", report.supersingular.to_string()),
        ("abs_S", abs_s.to_string()),
        ("hasse_slack", slack.to_string()),
        ("R", g.adjacency_r(a, b, c).to_string()),
        ("n111", n111.to_string()),
    ];
    for (k, v) in lines {
        println!("{k}\t{v}");
    }
    Ok(())
}

#[derive(Serialize)]
struct RunManifest {
    command_line: Vec<String>,
    version: &'static str,
    from: u32,
    to: u32,
    orders: Vec<u32>,
    checks: Vec<CheckSummary>,
    outputs: Vec<String>,
    started_unix: u64,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct CheckSummary {
    check: String,
    orders_run: usize,
    passed: usize,
    failed_orders: Vec<u32>,
    errors: Vec<OrderError>,
}

#[derive(Serialize)]
struct OrderError {
    q: u32,
    message: String,
}

fn cmd_scan(from: u32, to: u32, checks: &[Check], jobs: Option<usize>, out: &Path) -> Result<(), Failure> {
    let started = Instant::now();
    if from > to {
        return Err(usage(format!("empty range {from}..{to}")));
    }
    let cap = max_order()?;
    if to as u64 > cap {
        return Err(usage(format!("upper bound {to} exceeds the cap {cap}")));
    }
    let mut checks = checks.to_vec();
    checks.sort();
    checks.dedup();
    let orders = verify::eligible_orders(from, to);
    let work: Vec<(Check, u32)> = checks
        .iter()
        .flat_map(|&c| orders.iter().filter(move |&&q| c.applies(q)).map(move |&q| (c, q)))
        .collect();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| usage(e.to_string()))?;
    let mut rows: Vec<CheckRow> =
        pool.install(|| work.par_iter().map(|&(c, q)| verify::run_check(c, q)).collect());
    rows.sort_by_key(|r| (r.check, r.q));

    fs::create_dir_all(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    let io = |e: std::io::Error| usage(format!("writing reports: {e}"));
    let mut outputs = Vec::new();
    let mut summaries = Vec::new();
    let mut any_failed = false;
    for &check in &checks {
        let mine: Vec<&CheckRow> = rows.iter().filter(|r| r.check == check).collect();
        let mut text = CheckRow::tsv_header(check) + "\n";
        for r in &mine {
            text += &r.tsv_line();
            text.push('\n');
        }
        let path = out.join(format!("{check}.tsv"));
        fs::write(&path, text).map_err(io)?;
        outputs.push(path.display().to_string());

        let failed: Vec<u32> = mine.iter().filter(|r| !r.pass).map(|r| r.q).collect();
        any_failed |= !failed.is_empty();
        println!(
            "{check:<10} {:>5} orders  {:>5} pass  {:>5} fail",
            mine.len(),
            mine.len() - failed.len(),
            failed.len()
        );
        summaries.push(CheckSummary {
            check: check.to_string(),
            orders_run: mine.len(),
            passed: mine.len() - failed.len(),
            failed_orders: failed,
            errors: mine
                .iter()
                .filter_map(|r| {
                    r.error.as_ref().map(|m| OrderError {
                        q: r.q,
                        message: m.clone(),
                    })
                })
                .collect(),
        });
    }

    let manifest_path = out.join("manifest.json");
    outputs.push(manifest_path.display().to_string());
    let manifest = RunManifest {
        command_line: std::env::args().collect(),
        version: env!("CARGO_PKG_VERSION"),
        from,
        to,
        orders,
        checks: summaries,
        outputs,
        started_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        elapsed_ms: started.elapsed().as_millis(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| usage(e.to_string()))?;
    fs::write(&manifest_path, json + "\n").map_err(io)?;

    if any_failed {
        Err(Failure {
            code: EXIT_VIOLATION,
            message: "violations found; see the manifest".into(),
        })
    } else {
        Ok(())
    }
}
