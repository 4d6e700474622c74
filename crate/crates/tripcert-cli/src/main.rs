use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tripcert::driver::{emit_certificates, run_range, MAX_N};
use tripcert::fmin::{f_property_check, f_sandwich_check};
use tripcert::highk::{check_big_nk, monotonicity_scan, HighKProbe, DEFAULT_SAFETY};
use tripcert::numbers::NumberTables;
use tripcert::oracle::{brute_force_max, run_props, BRUTE_CUTOFF};
use tripcert::smallcases::verify_small_case;

#[derive(Parser)]
#[command(name = "tripcert", version, about = "Exact verifier for monochromatic triangle bounds in tripartite colorings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFn {
    G3,
    T,
    D,
    Dtilde,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify every n in a range.
    Verify {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// JSON Lines certificate file; timings go to FILE.timing.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        fail_fast: bool,
    },
    /// Print a number sequence for 0..=max.
    Tables {
        #[arg(long = "fn", value_enum)]
        func: TableFn,
        #[arg(long)]
        max: usize,
    },
    /// Degree-sequence argument for one of the four exceptional n.
    Smallcase {
        #[arg(long)]
        n: i64,
    },
    /// Exhaustive maximum of monochromatic triangles.
    Brute {
        #[arg(long)]
        n: usize,
    },
    /// Randomized structural checks on colorings and tournaments.
    Props {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Float checks of the large-k conditions.
    Highk {
        #[arg(long, default_value_t = 200)]
        kmax: u32,
    },
    /// Closed form of F against the grid oracle and its properties.
    Fcheck {
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 24)]
        resolution: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn print(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cmd: Cmd) -> tripcert::Result<bool> {
    match cmd {
        Cmd::Verify { from, to, jobs, out, fail_fast } => {
            if to > MAX_N {
                return Err(tripcert::Error::Precondition(format!(
                    "refusing n = {to}: n >= 700 is handled by the analytic asymptotic argument, not by computation"
                )));
            }
            let run = run_range(from, to, jobs, fail_fast)?;
            if let Some(path) = out {
                emit_certificates(&run, &path)?;
            }
            let s = run.summary();
            let total_ms: f64 = run.millis.iter().sum();
            print(&json!({ "summary": s, "stopped_early": run.stopped_early, "cpu_ms": total_ms }));
            Ok(s.failures.is_empty() && !run.stopped_early)
        }
        Cmd::Tables { func, max } => {
            let t = NumberTables::new(max);
            for n in 0..=max as i64 {
                let v = match func {
                    TableFn::G3 => t.g3(n),
                    TableFn::T => t.t(n),
                    TableFn::D => t.d(n),
                    TableFn::Dtilde => t.d_tilde(n),
                };
                println!("{n} {v}");
            }
            Ok(true)
        }
        Cmd::Smallcase { n } => {
            let r = verify_small_case(n)?;
            print(&serde_json::to_value(&r).expect("json"));
            Ok(r.is_established())
        }
        Cmd::Brute { n } => {
            let best = brute_force_max(n, BRUTE_CUTOFF)?;
            let g = tripcert::numbers::g_k(3, n as u64);
            print(&json!({ "n": n, "max_monochromatic": best, "g3": g as i64 }));
            Ok(best as i128 == g)
        }
        Cmd::Props { trials, seed } => {
            let r = run_props(trials, seed)?;
            print(&serde_json::to_value(&r).expect("json"));
            Ok(r.ok())
        }
        Cmd::Highk { kmax } => {
            if kmax < 8 {
                return Err(tripcert::Error::Precondition(format!("--kmax must be at least 8, got {kmax}")));
            }
            let probe = HighKProbe::new(7, 43, DEFAULT_SAFETY)?;
            let failing: Vec<u32> =
                (7..=kmax).filter(|&k| !check_big_nk(k, (k * (k - 1) + 1) as u64, DEFAULT_SAFETY)).collect();
            let mono = monotonicity_scan(kmax)?;
            let ok = probe.holds && failing.is_empty() && mono.first_violation.is_none();
            print(&json!({ "probe_7_43": probe, "big_nk_failures": failing, "monotonicity": mono }));
            Ok(ok)
        }
        Cmd::Fcheck { trials, resolution, seed } => {
            let sandwich = f_sandwich_check(trials, resolution, seed)?;
            let props = f_property_check(trials, seed)?;
            print(&json!({ "sandwich": sandwich, "properties": props }));
            Ok(sandwich.ok() && props.ok())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
