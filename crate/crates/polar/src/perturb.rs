//! LLR-perturbation retry decoding.
//!
//! A failed trial is retried on the channel LLRs plus fresh zero-mean
//! Gaussian noise. The corruption is always applied to the original vector,
//! never compounded. The adaptive variant raises the noise variance
//! whenever a retry reproduces an estimate already seen, detected cheaply
//! through the population count of the estimate.

use crate::code::PolarCode;
use crate::error::{invalid, Result};
use crate::flip::{crc_passes, DecodeOutcome};
use crate::rng::RngStream;
use crate::sc::ScDecoder;

/// Perturbation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbConfig {
    /// Variance of the Gaussian added per retry (LLR^2 units).
    pub sigma2: f64,
    /// Starting variance of the adaptive variant.
    pub adaptive_initial_sigma2: f64,
    /// Variance increment applied on each detected repeat.
    pub adaptive_step: f64,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig {
            sigma2: 0.95,
            adaptive_initial_sigma2: 0.5,
            adaptive_step: 0.25,
        }
    }
}

/// Channel LLRs plus element-wise N(0, sigma2) noise; the input is left
/// untouched.
pub fn perturb(channel_llrs: &[f64], sigma2: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    let mut out = vec![0.0; channel_llrs.len()];
    perturb_into(channel_llrs, sigma2, rng, &mut out)?;
    Ok(out)
}

fn perturb_into(
    channel_llrs: &[f64],
    sigma2: f64,
    rng: &mut RngStream,
    out: &mut [f64],
) -> Result<()> {
    if sigma2 < 0.0 {
        return invalid(format!("perturbation variance {sigma2} is negative"));
    }
    let sigma = sigma2.sqrt();
    for (dst, &src) in out.iter_mut().zip(channel_llrs) {
        *dst = src + sigma * rng.gaussian();
    }
    Ok(())
}

/// CRC-checked SC with up to `pmax` retries on freshly corrupted LLRs.
pub fn perturb_decode(
    sc: &mut ScDecoder,
    code: &PolarCode,
    channel_llrs: &[f64],
    pmax: usize,
    sigma2: f64,
    rng: &mut RngStream,
) -> Result<DecodeOutcome> {
    sc.decode(channel_llrs, None)?;
    if crc_passes(code, sc)? {
        return Ok(DecodeOutcome::from_sc(sc, true));
    }
    let mut outcome = DecodeOutcome::from_sc(sc, false);
    let mut corrupted = vec![0.0; channel_llrs.len()];
    run_perturb_phase(
        sc,
        code,
        channel_llrs,
        pmax,
        sigma2,
        rng,
        &mut corrupted,
        &mut outcome,
    )?;
    Ok(outcome)
}

/// Retry loop shared with the composite decoders: up to `pmax` SC runs on
/// fresh corruptions of `channel_llrs`, stopping at the first CRC pass and
/// updating `outcome` in place.
#[allow(clippy::too_many_arguments)]
pub(crate) fn run_perturb_phase(
    sc: &mut ScDecoder,
    code: &PolarCode,
    channel_llrs: &[f64],
    pmax: usize,
    sigma2: f64,
    rng: &mut RngStream,
    scratch: &mut Vec<f64>,
    outcome: &mut DecodeOutcome,
) -> Result<()> {
    scratch.resize(channel_llrs.len(), 0.0);
    for _ in 0..pmax {
        perturb_into(channel_llrs, sigma2, rng, scratch)?;
        sc.decode(scratch, None)?;
        outcome.trials_total += 1;
        outcome.perturb_trials += 1;
        if crc_passes(code, sc)? {
            outcome.success = true;
            break;
        }
    }
    outcome.u_hat.copy_from_slice(sc.u_hat());
    outcome.payload = sc.payload();
    Ok(())
}

/// Adaptive-variance perturbation decoding: starts at
/// `cfg.adaptive_initial_sigma2` and adds `cfg.adaptive_step` to the
/// variance whenever a retry's estimate repeats the population count of an
/// earlier trial.
pub fn adaptive_perturb_decode(
    sc: &mut ScDecoder,
    code: &PolarCode,
    channel_llrs: &[f64],
    pmax: usize,
    cfg: &PerturbConfig,
    rng: &mut RngStream,
) -> Result<DecodeOutcome> {
    adaptive_perturb_traced(sc, code, channel_llrs, pmax, cfg, rng).map(|(outcome, _)| outcome)
}

/// Variance schedule actually applied, for inspection in tests.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct AdaptiveTrace {
    /// Variance used by each retry, in order.
    pub sigma2_per_trial: Vec<f64>,
    /// Population count of each trial's estimate (initial trial first).
    pub ones_counts: Vec<u32>,
}

pub(crate) fn adaptive_perturb_traced(
    sc: &mut ScDecoder,
    code: &PolarCode,
    channel_llrs: &[f64],
    pmax: usize,
    cfg: &PerturbConfig,
    rng: &mut RngStream,
) -> Result<(DecodeOutcome, AdaptiveTrace)> {
    let mut trace = AdaptiveTrace::default();
    sc.decode(channel_llrs, None)?;
    trace
        .ones_counts
        .push(sc.u_hat().iter().map(|&b| b as u32).sum());
    if crc_passes(code, sc)? {
        return Ok((DecodeOutcome::from_sc(sc, true), trace));
    }
    let mut outcome = DecodeOutcome::from_sc(sc, false);
    let mut corrupted = vec![0.0; channel_llrs.len()];
    let mut sigma2 = cfg.adaptive_initial_sigma2;
    for _ in 0..pmax {
        trace.sigma2_per_trial.push(sigma2);
        perturb_into(channel_llrs, sigma2, rng, &mut corrupted)?;
        sc.decode(&corrupted, None)?;
        outcome.trials_total += 1;
        outcome.perturb_trials += 1;
        let ones: u32 = sc.u_hat().iter().map(|&b| b as u32).sum();
        if crc_passes(code, sc)? {
            trace.ones_counts.push(ones);
            outcome.success = true;
            break;
        }
        // Same count as any earlier trial: assume a repeated estimate and
        // search wider from now on.
        if trace.ones_counts.contains(&ones) {
            sigma2 += cfg.adaptive_step;
        }
        trace.ones_counts.push(ones);
    }
    outcome.u_hat.copy_from_slice(sc.u_hat());
    outcome.payload = sc.payload();
    Ok((outcome, trace))
}
