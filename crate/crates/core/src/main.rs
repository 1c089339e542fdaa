use std::process::ExitCode;

use clap::Parser;

use cenlab::harness::{self, Cli};

fn main() -> ExitCode {
    // clap prints help/version and exits 0, or reports a usage error and exits 2.
    let cli = Cli::parse();
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(harness::exit_code(&e) as u8);
        }
    };
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    match harness::run_experiment(&config) {
        Ok(outcome) => {
            for (mode, log) in &outcome.runs {
                if let Some(last) = log.last() {
                    println!(
                        "{mode}: epoch {} js {:.6} time {:.1} ms updates g={} d={}",
                        last.epoch,
                        last.js_divergence,
                        last.cumulative_elapsed_ns as f64 / 1e6,
                        last.g_update_count,
                        last.d_update_count
                    );
                }
            }
            if let Some(s) = outcome.summary {
                println!(
                    "cen/gan time ratio {:.3}, js delta (cen - gan) {:+.6}",
                    s.time_ratio, s.js_delta
                );
            }
            println!("outputs written to {}", config.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::exit_code(&e) as u8)
        }
    }
}
