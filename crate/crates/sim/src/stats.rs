//! Per-point statistics accumulation.

use serde::{Deserialize, Serialize};

/// Outcome of a single simulated frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameResult {
    /// Decoder gave up or delivered the wrong payload.
    pub block_error: bool,
    /// CRC passed but the payload differs from the transmitted one.
    pub undetected: bool,
    /// The initial SC trial failed its CRC check.
    pub initial_failed: bool,
    /// Total SC executions spent on the frame.
    pub trials_total: u32,
}

/// Statistics of one (decoder, Eb/N0) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    pub frames: u64,
    pub block_errors: u64,
    pub undetected_errors: u64,
    pub bler: f64,
    /// Mean SC executions over all frames.
    pub avg_trials: f64,
    /// Mean additional SC executions over the frames whose initial trial
    /// failed; 0 when no such frame was observed.
    pub avg_add_trials_given_fail: f64,
}

/// Running sums behind a [`SimStats`].
#[derive(Debug, Clone, Copy, Default)]
pub struct StatsAccumulator {
    frames: u64,
    block_errors: u64,
    undetected_errors: u64,
    trials_sum: u64,
    initial_failures: u64,
    add_trials_after_fail_sum: u64,
}

impl StatsAccumulator {
    pub fn add(&mut self, frame: FrameResult) {
        self.frames += 1;
        self.block_errors += frame.block_error as u64;
        self.undetected_errors += frame.undetected as u64;
        self.trials_sum += frame.trials_total as u64;
        if frame.initial_failed {
            self.initial_failures += 1;
            self.add_trials_after_fail_sum += (frame.trials_total - 1) as u64;
        }
    }

    pub fn block_errors(&self) -> u64 {
        self.block_errors
    }

    pub fn frames(&self) -> u64 {
        self.frames
    }

    pub fn finish(&self) -> SimStats {
        let frames = self.frames.max(1) as f64;
        SimStats {
            frames: self.frames,
            block_errors: self.block_errors,
            undetected_errors: self.undetected_errors,
            bler: self.block_errors as f64 / frames,
            avg_trials: self.trials_sum as f64 / frames,
            avg_add_trials_given_fail: if self.initial_failures == 0 {
                0.0
            } else {
                self.add_trials_after_fail_sum as f64 / self.initial_failures as f64
            },
        }
    }
}
