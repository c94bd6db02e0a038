//! Monte-Carlo BLER simulation harness for the `polar` decoder family:
//! SNR sweeps with early stopping, reproducible parallel execution,
//! CSV/JSON result tables, and hardware storage estimates.

pub mod config;
pub mod error;
pub mod memory;
pub mod output;
pub mod runner;
pub mod stats;

pub use config::{CodeParams, DecoderConfig, ExperimentConfig, StopRule};
pub use error::{SimError, SimResult};
pub use memory::{estimate_memory, MemoryBreakdown, Quantization};
pub use output::{csv_cell_keys, format_sig6, CellKey, ResultRow, CSV_HEADER};
pub use runner::{build_pool, run_point, run_sweep, run_sweep_with, SweepReport};
pub use stats::{FrameResult, SimStats, StatsAccumulator};
