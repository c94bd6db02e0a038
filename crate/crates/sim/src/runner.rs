//! Monte-Carlo execution: frame pipeline, per-point loop, and SNR sweeps.
//!
//! Reproducibility contract: frame i of a point draws every random variate
//! (message, channel noise, decoder perturbations) from substream i of the
//! experiment seed, frames are aggregated in index order, and early
//! stopping cuts at the exact frame that reaches the error target. Results
//! are therefore byte-identical for any worker count.

use rayon::prelude::*;

use polar::channel::ebn0_to_sigma;
use polar::{decode, polar_transform, PolarCode, RngStream, ScDecoder};

use crate::config::{DecoderConfig, ExperimentConfig, StopRule};
use crate::error::{SimError, SimResult};
use crate::output::{CellKey, ResultRow};
use crate::stats::{FrameResult, SimStats, StatsAccumulator};

/// Frames scheduled per parallel wave; only affects scheduling, never
/// results.
const BATCH_FRAMES: u64 = 8_192;

/// Per-worker scratch: one SC decoder plus reusable buffers.
struct FrameWorker {
    code: PolarCode,
    decoder: DecoderConfig,
    sc: ScDecoder,
    noise_sigma: f64,
    llr_scale: f64,
    seed: u64,
    message: Vec<u8>,
    llrs: Vec<f64>,
}

impl FrameWorker {
    fn new(code: &PolarCode, decoder: &DecoderConfig, ebn0_db: f64, seed: u64) -> Self {
        // Eb/N0 is referred to the K message bits; the CRC is overhead.
        let rate = code.msg_len() as f64 / code.block_len() as f64;
        let noise_sigma = ebn0_to_sigma(ebn0_db, rate);
        FrameWorker {
            code: code.clone(),
            decoder: decoder.clone(),
            sc: ScDecoder::new(code),
            noise_sigma,
            llr_scale: 2.0 / (noise_sigma * noise_sigma),
            seed,
            message: vec![0; code.msg_len()],
            llrs: vec![0.0; code.block_len()],
        }
    }

    fn run_frame(&mut self, frame_index: u64) -> SimResult<FrameResult> {
        let mut rng = RngStream::substream(self.seed, frame_index);
        for bit in &mut self.message {
            *bit = rng.bit();
        }
        let payload_tx = self.code.attach_crc(&self.message)?;
        let mut x = self.code.insert_info(&payload_tx)?;
        polar_transform(&mut x);
        for (llr, &bit) in self.llrs.iter_mut().zip(&x) {
            let symbol = 1.0 - 2.0 * bit as f64;
            let received = symbol + self.noise_sigma * rng.gaussian();
            *llr = self.llr_scale * received;
        }
        let outcome = decode(
            self.decoder.name,
            &self.decoder.params(),
            &mut self.sc,
            &self.code,
            &self.llrs,
            &mut rng,
        )?;
        let wrong_payload = outcome.payload != payload_tx;
        Ok(FrameResult {
            block_error: !outcome.success || wrong_payload,
            undetected: outcome.success && wrong_payload,
            initial_failed: !(outcome.success && outcome.trials_total == 1),
            trials_total: outcome.trials_total,
        })
    }
}

/// Simulate one decoder at one Eb/N0 until the stop rule fires.
pub fn run_point(
    code: &PolarCode,
    decoder: &DecoderConfig,
    ebn0_db: f64,
    stop: &StopRule,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> SimResult<SimStats> {
    let mut acc = StatsAccumulator::default();
    let mut next_frame = 0u64;
    'frames: while next_frame < stop.max_frames {
        let count = BATCH_FRAMES.min(stop.max_frames - next_frame);
        let results: Vec<SimResult<FrameResult>> = pool.install(|| {
            (next_frame..next_frame + count)
                .into_par_iter()
                .map_init(
                    || FrameWorker::new(code, decoder, ebn0_db, seed),
                    |worker, frame| worker.run_frame(frame),
                )
                .collect()
        });
        for result in results {
            acc.add(result?);
            if acc.block_errors() >= stop.target_block_errors {
                break 'frames;
            }
        }
        next_frame += count;
    }
    Ok(acc.finish())
}

/// Build the worker pool for a configured thread count (0 = default).
pub fn build_pool(workers: usize) -> SimResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::InvalidConfig(format!("cannot build worker pool: {e}")))
}

/// Run every (decoder, Eb/N0) cell of the experiment, invoking `on_row` as
/// each row completes. Cells listed in `skip` are not rerun (resume
/// support). Sink failures are collected per row and do not abort the
/// remaining cells.
pub fn run_sweep_with(
    config: &ExperimentConfig,
    skip: &[CellKey],
    mut on_row: impl FnMut(&ResultRow) -> std::io::Result<()>,
) -> SimResult<SweepReport> {
    config.validate()?;
    let code = config.code.build()?;
    let pool = build_pool(config.workers)?;
    let mut report = SweepReport::default();
    for decoder in &config.decoders {
        for &ebn0_db in &config.ebn0_grid_db {
            if skip.contains(&CellKey::of(decoder, ebn0_db)) {
                report.skipped += 1;
                continue;
            }
            let stats = run_point(&code, decoder, ebn0_db, &config.stop, config.seed, &pool)?;
            let row = ResultRow::new(&config.code, decoder, ebn0_db, config.seed, &stats);
            if let Err(e) = on_row(&row) {
                report.sink_errors.push((row.cell_key(), e));
            }
            report.rows.push(row);
        }
    }
    Ok(report)
}

/// Convenience wrapper returning only the rows.
pub fn run_sweep(config: &ExperimentConfig) -> SimResult<Vec<ResultRow>> {
    Ok(run_sweep_with(config, &[], |_| Ok(()))?.rows)
}

/// What a sweep produced.
#[derive(Debug, Default)]
pub struct SweepReport {
    pub rows: Vec<ResultRow>,
    pub skipped: usize,
    pub sink_errors: Vec<(CellKey, std::io::Error)>,
}
