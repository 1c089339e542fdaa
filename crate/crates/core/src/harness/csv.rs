//! Metric and summary CSV files.
//!
//! Metric schema: `epoch,js_divergence,cumulative_time_ms,g_updates,d_updates`,
//! floats with six decimals, every line terminated by `\n`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::ComparisonSummary;
use crate::metrics::RunLog;

pub const METRICS_HEADER: &str = "epoch,js_divergence,cumulative_time_ms,g_updates,d_updates";
pub const SUMMARY_HEADER: &str = "gan_final_js,cen_final_js,js_delta,gan_time_ms,cen_time_ms,time_ratio,gan_g_updates,gan_d_updates,cen_g_updates,cen_d_updates";

fn ms(ns: u64) -> f64 {
    ns as f64 / 1e6
}

pub fn format_metrics_csv(log: &RunLog, no_timing: bool) -> Result<String> {
    if log.is_empty() {
        return Err(Error::Config("refusing to write an empty run log".into()));
    }
    let mut out = String::new();
    out.push_str(METRICS_HEADER);
    out.push('\n');
    for r in log.rows() {
        let time = if no_timing { 0.0 } else { ms(r.cumulative_elapsed_ns) };
        writeln!(
            out,
            "{},{:.6},{:.6},{},{}",
            r.epoch, r.js_divergence, time, r.g_update_count, r.d_update_count
        )
        .expect("writing to a String");
    }
    Ok(out)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn emit_metrics_csv(log: &RunLog, path: &Path, no_timing: bool) -> Result<()> {
    write_file(path, &format_metrics_csv(log, no_timing)?)
}

/// One header line and one data row. With `no_timing` the time columns are
/// zero and the ratio field is left empty.
pub fn format_summary_csv(summary: &ComparisonSummary, no_timing: bool) -> String {
    let (gan_ms, cen_ms, ratio) = if no_timing {
        (0.0, 0.0, String::new())
    } else {
        (
            ms(summary.gan.total_time_ns),
            ms(summary.cen.total_time_ns),
            format!("{:.6}", summary.time_ratio),
        )
    };
    format!(
        "{SUMMARY_HEADER}\n{:.6},{:.6},{:.6},{gan_ms:.6},{cen_ms:.6},{ratio},{},{},{},{}\n",
        summary.gan.final_js,
        summary.cen.final_js,
        summary.js_delta,
        summary.gan.g_updates,
        summary.gan.d_updates,
        summary.cen.g_updates,
        summary.cen.d_updates,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::CheckpointRow;

    fn log(n: usize) -> RunLog {
        let mut log = RunLog::new();
        for i in 1..=n {
            log.record_checkpoint(CheckpointRow {
                epoch: i * 100,
                js_divergence: 0.3112779,
                cumulative_elapsed_ns: i as u64 * 1_500_000,
                g_update_count: i as u64,
                d_update_count: 2 * i as u64,
            })
            .unwrap();
        }
        log
    }

    #[test]
    fn eight_checkpoints_nine_lines() {
        let text = format_metrics_csv(&log(8), false).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.ends_with('\n') && !text.ends_with("\n\n"));
        assert_eq!(text.lines().next().unwrap(), METRICS_HEADER);
        assert_eq!(text.lines().nth(1).unwrap(), "100,0.311278,1.500000,1,2");
    }

    #[test]
    fn no_timing_zeroes_time() {
        let text = format_metrics_csv(&log(1), true).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "100,0.311278,0.000000,1,2");
    }

    #[test]
    fn empty_log_refused() {
        assert!(matches!(format_metrics_csv(&RunLog::new(), false), Err(Error::Config(_))));
    }
}
