use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckpointRow {
    pub epoch: usize,
    pub js_divergence: f64,
    /// Training wall time summed over every iteration so far.
    pub cumulative_elapsed_ns: u64,
    pub g_update_count: u64,
    pub d_update_count: u64,
}

/// Checkpoint rows in strictly increasing epoch and time order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunLog {
    rows: Vec<CheckpointRow>,
}

impl RunLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[CheckpointRow] {
        &self.rows
    }

    pub fn last(&self) -> Option<&CheckpointRow> {
        self.rows.last()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn epochs(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.epoch).collect()
    }

    /// Appends a row, rejecting anything that would break the ordering
    /// invariants. The log is unchanged on error.
    pub fn record_checkpoint(&mut self, row: CheckpointRow) -> Result<()> {
        if !row.js_divergence.is_finite() {
            return Err(Error::Invariant(format!(
                "non-finite JS divergence at epoch {}",
                row.epoch
            )));
        }
        if let Some(prev) = self.rows.last() {
            if row.epoch <= prev.epoch {
                return Err(Error::Ordering(format!(
                    "epoch {} recorded after epoch {}",
                    row.epoch, prev.epoch
                )));
            }
            if row.cumulative_elapsed_ns <= prev.cumulative_elapsed_ns {
                return Err(Error::Invariant(format!(
                    "cumulative time {} ns does not exceed previous {} ns",
                    row.cumulative_elapsed_ns, prev.cumulative_elapsed_ns
                )));
            }
            if row.g_update_count < prev.g_update_count || row.d_update_count < prev.d_update_count {
                return Err(Error::Invariant(format!(
                    "update counts decreased at epoch {}",
                    row.epoch
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }
}
