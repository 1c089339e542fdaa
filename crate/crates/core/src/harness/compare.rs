use crate::error::{Error, Result};
use crate::metrics::RunLog;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSummary {
    pub final_js: f64,
    pub total_time_ns: u64,
    pub g_updates: u64,
    pub d_updates: u64,
}

impl ModeSummary {
    fn from_log(log: &RunLog) -> Result<Self> {
        let last = log
            .last()
            .ok_or_else(|| Error::Comparison("cannot summarise an empty run log".into()))?;
        Ok(Self {
            final_js: last.js_divergence,
            total_time_ns: last.cumulative_elapsed_ns,
            g_updates: last.g_update_count,
            d_updates: last.d_update_count,
        })
    }

    pub fn total_updates(&self) -> u64 {
        self.g_updates + self.d_updates
    }
}

/// Final-checkpoint comparison of a GAN run against a CEN run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonSummary {
    pub gan: ModeSummary,
    pub cen: ModeSummary,
    /// CEN total time over GAN total time.
    pub time_ratio: f64,
    /// CEN final JS minus GAN final JS.
    pub js_delta: f64,
}

pub fn compare_runs(gan_log: &RunLog, cen_log: &RunLog) -> Result<ComparisonSummary> {
    if gan_log.epochs() != cen_log.epochs() {
        return Err(Error::Comparison(format!(
            "checkpoint epochs differ: gan {:?} vs cen {:?}",
            gan_log.epochs(),
            cen_log.epochs()
        )));
    }
    let gan = ModeSummary::from_log(gan_log)?;
    let cen = ModeSummary::from_log(cen_log)?;
    if gan.total_time_ns == 0 || cen.total_time_ns == 0 {
        return Err(Error::Comparison("a run recorded zero training time".into()));
    }
    Ok(ComparisonSummary {
        gan,
        cen,
        time_ratio: cen.total_time_ns as f64 / gan.total_time_ns as f64,
        js_delta: cen.final_js - gan.final_js,
    })
}
