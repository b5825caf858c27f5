use std::fmt::Write;

use super::ScheduleError;
use crate::cpu::ExecutionTrace;

/// Compute/DMA decomposition of a finished run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScheduleTrace {
    /// Cycles with at least one engine busy.
    pub t_compute: u64,
    /// Cycles with the DMA channel busy.
    pub t_dma: u64,
    /// End-to-end cycles.
    pub t_total: u64,
    /// Cycles with both an engine and the DMA channel busy.
    pub overlap: u64,
}

impl ScheduleTrace {
    /// `t_total / t_compute`; infinite for compute-free runs.
    pub fn ratio(&self) -> f64 {
        if self.t_compute == 0 {
            f64::INFINITY
        } else {
            self.t_total as f64 / self.t_compute as f64
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("t_compute", self.t_compute),
            ("t_dma", self.t_dma),
            ("t_total", self.t_total),
            ("overlap", self.overlap),
        ] {
            writeln!(out, "{k}={v}").unwrap();
        }
        out
    }
}

/// Busy tallies from the per-cycle engine and DMA flags of a halted run.
pub fn analyze(trace: &ExecutionTrace) -> Result<ScheduleTrace, ScheduleError> {
    if !trace.halted {
        return Err(ScheduleError::Incomplete(trace.len() as u64));
    }
    let s = trace.summary();
    Ok(ScheduleTrace {
        t_compute: s.any_engine_busy,
        t_dma: s.dma_busy,
        t_total: s.cycles,
        overlap: s.overlap,
    })
}
