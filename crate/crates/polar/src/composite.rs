//! Composite retry decoders that chain bit-flip and perturbation stages.
//!
//! `flip_then_perturb_decode` spends its flip budget first and falls back
//! to perturbed retries; `perturbed_flip_decode` runs a full flip decoder
//! per perturbation round, rebuilding the candidate list from each round's
//! own initial trial. Trial budgets are exact: Fmax + Pmax + 1 for the
//! former and (Pmax + 1)(Fmax + 1) for the latter.

use crate::code::PolarCode;
use crate::error::Result;
use crate::flip::{crc_passes, flip_decode, DecodeOutcome, FlipCandidates, FlipMetric};
use crate::perturb::run_perturb_phase;
use crate::rng::RngStream;
use crate::sc::ScDecoder;

/// Decoder structure: flip stage then perturbation stage, or a flip decoder
/// per perturbation round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeKind {
    FlipThenPerturb,
    PerturbedFlip,
}

/// Maximum total SC executions for the given budgets.
pub fn max_trials(kind: CompositeKind, fmax: usize, pmax: usize) -> usize {
    match kind {
        CompositeKind::FlipThenPerturb => fmax + pmax + 1,
        CompositeKind::PerturbedFlip => (pmax + 1) * (fmax + 1),
    }
}

/// Flip stage first, then up to `pmax` perturbed retries.
///
/// The candidate list is built once, from the unperturbed initial trial;
/// the perturbation stage is independent of the flip stage.
pub fn flip_then_perturb_decode(
    sc: &mut ScDecoder,
    code: &PolarCode,
    channel_llrs: &[f64],
    fmax: usize,
    pmax: usize,
    sigma2: f64,
    rng: &mut RngStream,
) -> Result<DecodeOutcome> {
    sc.decode(channel_llrs, None)?;
    if crc_passes(code, sc)? {
        return Ok(DecodeOutcome::from_sc(sc, true));
    }
    let candidates = FlipCandidates::select(code, sc.decision_llrs(), fmax, FlipMetric::Dscf);
    let mut outcome = DecodeOutcome::from_sc(sc, false);
    for t in 0..candidates.len() {
        sc.decode(channel_llrs, Some(candidates.position(t)))?;
        outcome.trials_total += 1;
        outcome.flip_trials += 1;
        if crc_passes(code, sc)? {
            outcome.success = true;
            outcome.u_hat.copy_from_slice(sc.u_hat());
            outcome.payload = sc.payload();
            return Ok(outcome);
        }
    }
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

/// Up to `pmax + 1` flip-decoder rounds, each after an independent
/// corruption of the original channel LLRs (round 0 is uncorrupted).
///
/// Every round recomputes its candidate list from that round's initial
/// trial. Trial counters accumulate every SC execution of every round.
pub fn perturbed_flip_decode(
    sc: &mut ScDecoder,
    code: &PolarCode,
    channel_llrs: &[f64],
    fmax: usize,
    pmax: usize,
    sigma2: f64,
    rng: &mut RngStream,
) -> Result<DecodeOutcome> {
    let mut outcome = flip_decode(sc, code, channel_llrs, fmax, FlipMetric::Dscf)?;
    if outcome.success {
        return Ok(outcome);
    }
    let mut corrupted = vec![0.0; channel_llrs.len()];
    for _ in 0..pmax {
        corrupted.clear();
        corrupted.extend(crate::perturb::perturb(channel_llrs, sigma2, rng)?);
        let round = flip_decode(sc, code, &corrupted, fmax, FlipMetric::Dscf)?;
        outcome.trials_total += round.trials_total;
        outcome.flip_trials += round.flip_trials;
        outcome.perturb_trials += 1;
        outcome.success = round.success;
        outcome.u_hat = round.u_hat;
        outcome.payload = round.payload;
        if outcome.success {
            break;
        }
    }
    Ok(outcome)
}
