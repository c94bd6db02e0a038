//! Bit-flip retry decoding: per-bit metrics, candidate selection, and the
//! flip loop that re-runs the SC kernel with one decision inverted.
//!
//! Two metrics are supported: the plain magnitude |lambda| and the dynamic
//! metric that adds a cumulative penalty for every low-confidence decision
//! seen so far. Candidates are the positions of the smallest metrics.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::code::PolarCode;
use crate::error::Result;
use crate::sc::ScDecoder;

/// Threshold on |decision LLR| under which a decision contributes penalty.
pub const PENALTY_THRESHOLD: f64 = 5.0;
/// Penalty added per low-confidence decision in the dynamic metric.
pub const PENALTY_VALUE: f64 = 1.5;

/// Which flip metric to rank candidates with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipMetric {
    /// |lambda| only (SCF).
    Scf,
    /// |lambda| plus the cumulative low-confidence penalty (DSCF).
    Dscf,
}

/// Piecewise penalty: 1.5 for |llr| <= 5.0, 0 otherwise.
#[inline]
pub fn flip_penalty(llr: f64) -> f64 {
    if llr.abs() <= PENALTY_THRESHOLD {
        PENALTY_VALUE
    } else {
        0.0
    }
}

/// Per-information-bit flip metrics, one forward pass.
///
/// For the dynamic metric, entry j is |lambda_j| plus the penalties of
/// decisions 0..=j (the decision itself included).
pub fn flip_metrics(decision_llrs: &[f64], metric: FlipMetric) -> Vec<f64> {
    match metric {
        FlipMetric::Scf => decision_llrs.iter().map(|l| l.abs()).collect(),
        FlipMetric::Dscf => {
            let mut cumulative = 0.0;
            decision_llrs
                .iter()
                .map(|&l| {
                    cumulative += flip_penalty(l);
                    l.abs() + cumulative
                })
                .collect()
        }
    }
}

/// Flip candidates: information positions sorted by ascending metric, ties
/// broken by smaller position.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipCandidates {
    entries: Vec<(usize, f64)>,
}

impl FlipCandidates {
    /// Positions of the `limit` smallest metrics (all positions if `limit`
    /// exceeds K+C). Runs in one pass with a bounded heap.
    pub fn select(
        code: &PolarCode,
        decision_llrs: &[f64],
        limit: usize,
        metric: FlipMetric,
    ) -> Self {
        let metrics = flip_metrics(decision_llrs, metric);
        let keep = limit.min(metrics.len());
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::with_capacity(keep + 1);
        for (ordinal, &m) in metrics.iter().enumerate() {
            let entry = HeapEntry {
                metric: m,
                position: code.info_set()[ordinal],
            };
            if heap.len() < keep {
                heap.push(entry);
            } else if let Some(worst) = heap.peek() {
                if entry.cmp(worst) == Ordering::Less {
                    heap.pop();
                    heap.push(entry);
                }
            }
        }
        let mut entries: Vec<(usize, f64)> =
            heap.into_iter().map(|e| (e.position, e.metric)).collect();
        entries.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        FlipCandidates { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// t-th candidate position, t starting at 0.
    pub fn position(&self, t: usize) -> usize {
        self.entries[t].0
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn metrics(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.1)
    }
}

#[derive(Debug, PartialEq)]
struct HeapEntry {
    metric: f64,
    position: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.metric
            .total_cmp(&other.metric)
            .then(self.position.cmp(&other.position))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of a complete decoding attempt (any decoder in this crate).
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    /// Some trial passed the CRC.
    pub success: bool,
    /// Final estimate of u: the passing one on success, the last one tried
    /// otherwise.
    pub u_hat: Vec<u8>,
    /// K+C information bits of `u_hat`.
    pub payload: Vec<u8>,
    /// Total SC executions, >= 1.
    pub trials_total: u32,
    /// SC executions that had a bit flip injected.
    pub flip_trials: u32,
    /// Perturbation draws consumed (SC executions on freshly corrupted LLRs,
    /// not counting flip retries within a perturbed round).
    pub perturb_trials: u32,
}

impl DecodeOutcome {
    pub(crate) fn from_sc(sc: &ScDecoder, success: bool) -> Self {
        DecodeOutcome {
            success,
            u_hat: sc.u_hat().to_vec(),
            payload: sc.payload(),
            trials_total: 1,
            flip_trials: 0,
            perturb_trials: 0,
        }
    }
}

/// Run the last trial's payload through the CRC.
pub(crate) fn crc_passes(code: &PolarCode, sc: &ScDecoder) -> Result<bool> {
    code.check_crc(&sc.payload())
}

/// CRC-checked SC with up to `fmax` single-bit-flip retries.
///
/// The initial trial also produces the metrics; retries flip the candidate
/// positions in ascending metric order and stop at the first CRC pass.
/// With `fmax = 0` this is plain CRC-checked SC.
pub fn flip_decode(
    sc: &mut ScDecoder,
    code: &PolarCode,
    channel_llrs: &[f64],
    fmax: usize,
    metric: FlipMetric,
) -> Result<DecodeOutcome> {
    sc.decode(channel_llrs, None)?;
    if crc_passes(code, sc)? {
        return Ok(DecodeOutcome::from_sc(sc, true));
    }
    let candidates = FlipCandidates::select(code, sc.decision_llrs(), fmax, metric);
    let mut outcome = DecodeOutcome::from_sc(sc, false);
    for t in 0..candidates.len() {
        sc.decode(channel_llrs, Some(candidates.position(t)))?;
        outcome.trials_total += 1;
        outcome.flip_trials += 1;
        if crc_passes(code, sc)? {
            outcome.success = true;
            break;
        }
    }
    outcome.u_hat.copy_from_slice(sc.u_hat());
    outcome.payload = sc.payload();
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn penalty_boundaries() {
        assert_eq!(flip_penalty(4.0), 1.5);
        assert_eq!(flip_penalty(5.0), 1.5);
        assert_eq!(flip_penalty(-5.0), 1.5);
        assert_eq!(flip_penalty(-6.0), 0.0);
        assert_eq!(flip_penalty(5.000001), 0.0);
    }

    #[test]
    fn metric_hand_examples() {
        assert_eq!(
            flip_metrics(&[0.5, -3.0, 6.0], FlipMetric::Scf),
            vec![0.5, 3.0, 6.0]
        );
        assert_eq!(
            flip_metrics(&[0.5, -3.0, 6.0, 1.0], FlipMetric::Dscf),
            vec![2.0, 6.0, 9.0, 5.5]
        );
        // All decisions confident: penalties vanish, metrics coincide.
        let llrs = [7.0, -9.0, 10.0];
        assert_eq!(
            flip_metrics(&llrs, FlipMetric::Dscf),
            flip_metrics(&llrs, FlipMetric::Scf)
        );
    }

    #[test]
    fn candidate_selection_hand_example() {
        let code = PolarCode::new(8, 4, 0).unwrap();
        // Metrics of [0.5,-3,6,1] under the dynamic rule: [2, 6, 9, 5.5].
        let cands =
            FlipCandidates::select(&code, &[0.5, -3.0, 6.0, 1.0], 2, FlipMetric::Dscf);
        let positions: Vec<usize> = cands.positions().collect();
        assert_eq!(positions, vec![code.info_set()[0], code.info_set()[3]]);
        let metrics: Vec<f64> = cands.metrics().collect();
        assert_eq!(metrics, vec![2.0, 5.5]);
    }

    #[test]
    fn oversized_limit_keeps_everything_sorted() {
        let code = PolarCode::new(8, 4, 0).unwrap();
        let cands = FlipCandidates::select(&code, &[0.5, -3.0, 6.0, 1.0], 99, FlipMetric::Scf);
        assert_eq!(cands.len(), 4);
        let metrics: Vec<f64> = cands.metrics().collect();
        assert!(metrics.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn equal_metrics_break_by_position() {
        let code = PolarCode::new(8, 4, 0).unwrap();
        let cands = FlipCandidates::select(&code, &[2.0, -2.0, 2.0, -2.0], 3, FlipMetric::Scf);
        let positions: Vec<usize> = cands.positions().collect();
        let expected: Vec<usize> = code.info_set()[..3].to_vec();
        assert_eq!(positions, expected);
    }

    fn noisy_frame(
        code: &PolarCode,
        rng: &mut ChaCha8Rng,
        sigma: f64,
    ) -> (Vec<u8>, Vec<f64>) {
        let message: Vec<u8> = (0..code.msg_len()).map(|_| rng.gen_range(0..2)).collect();
        let payload = code.attach_crc(&message).unwrap();
        let u = code.insert_info(&payload).unwrap();
        let x = code.encode(&u).unwrap();
        let llrs: Vec<f64> = x
            .iter()
            .map(|&b| {
                let s = 1.0 - 2.0 * b as f64;
                let noise: f64 = rng.sample(rand_distr::StandardNormal);
                2.0 * (s + sigma * noise) / (sigma * sigma)
            })
            .collect();
        (payload, llrs)
    }

    #[test]
    fn noiseless_input_succeeds_first_trial() {
        let code = PolarCode::new(64, 16, 16).unwrap();
        let mut sc = ScDecoder::new(&code);
        let payload = code.attach_crc(&vec![1; 16]).unwrap();
        let u = code.insert_info(&payload).unwrap();
        let x = code.encode(&u).unwrap();
        let llrs: Vec<f64> = x.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
        let outcome = flip_decode(&mut sc, &code, &llrs, 8, FlipMetric::Dscf).unwrap();
        assert!(outcome.success);
        assert_eq!(outcome.trials_total, 1);
        assert_eq!(outcome.flip_trials, 0);
        assert_eq!(outcome.payload, payload);
    }

    #[test]
    fn budget_exhausts_to_fmax_plus_one() {
        let code = PolarCode::new(64, 16, 16).unwrap();
        let mut sc = ScDecoder::new(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut saw_failure = false;
        for _ in 0..50 {
            let (_, llrs) = noisy_frame(&code, &mut rng, 1.6);
            let outcome = flip_decode(&mut sc, &code, &llrs, 6, FlipMetric::Dscf).unwrap();
            assert!(outcome.trials_total <= 7);
            if !outcome.success {
                saw_failure = true;
                assert_eq!(outcome.trials_total, 7);
                assert_eq!(outcome.flip_trials, 6);
            }
        }
        assert!(saw_failure, "test SNR too benign to exercise the budget");
    }

    #[test]
    fn fmax_zero_equals_checked_sc() {
        let code = PolarCode::new(64, 16, 16).unwrap();
        let mut sc = ScDecoder::new(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..50 {
            let (_, llrs) = noisy_frame(&code, &mut rng, 1.2);
            let outcome = flip_decode(&mut sc, &code, &llrs, 0, FlipMetric::Dscf).unwrap();
            sc.decode(&llrs, None).unwrap();
            assert_eq!(outcome.trials_total, 1);
            assert_eq!(outcome.u_hat, sc.u_hat());
            assert_eq!(outcome.success, crc_passes(&code, &sc).unwrap());
        }
    }

    #[test]
    fn exhaustive_single_flip_oracle_agreement() {
        // When the flip budget covers every information bit, failure means
        // no single flip anywhere yields a CRC pass; brute force agrees.
        let crc = crate::crc::Crc::new(0x3, 4, 0).unwrap();
        let code = PolarCode::with_crc(16, 4, Some(crc)).unwrap();
        let mut sc = ScDecoder::new(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut failures = 0;
        for _ in 0..1000 {
            let (_, llrs) = noisy_frame(&code, &mut rng, 0.9);
            let outcome = flip_decode(&mut sc, &code, &llrs, 8, FlipMetric::Scf).unwrap();
            if outcome.success {
                continue;
            }
            failures += 1;
            for &pos in code.info_set() {
                sc.decode(&llrs, Some(pos)).unwrap();
                assert!(
                    !crc_passes(&code, &sc).unwrap(),
                    "flip at {pos} passes CRC but the flip loop failed"
                );
            }
        }
        assert!(failures > 0, "no failing frames sampled");
    }

    proptest! {
        #[test]
        fn dynamic_metric_dominates_plain(llrs in proptest::collection::vec(-10.0f64..10.0, 1..40)) {
            let plain = flip_metrics(&llrs, FlipMetric::Scf);
            let dynamic = flip_metrics(&llrs, FlipMetric::Dscf);
            for (d, p) in dynamic.iter().zip(&plain) {
                prop_assert!(d >= p);
            }
        }

        #[test]
        fn shorter_candidate_list_is_prefix(llrs in proptest::collection::vec(-8.0f64..8.0, 16)) {
            let code = PolarCode::new(32, 16, 0).unwrap();
            let four = FlipCandidates::select(&code, &llrs, 4, FlipMetric::Dscf);
            let eight = FlipCandidates::select(&code, &llrs, 8, FlipMetric::Dscf);
            let four_pos: Vec<usize> = four.positions().collect();
            let eight_pos: Vec<usize> = eight.positions().collect();
            prop_assert_eq!(&four_pos[..], &eight_pos[..4]);
        }
    }
}
