//! Successive-cancellation kernel.
//!
//! One decoder instance holds the LLR and partial-sum arrays for a single
//! code and is reused across trials; every retry decoder in this crate is
//! built on repeated calls into this kernel, optionally with one bit
//! decision inverted at a chosen information position.

use crate::code::PolarCode;
use crate::error::{invalid, Result};

const SIGN_BIT: u64 = 1 << 63;
const NO_FLIP: usize = usize::MAX;

/// Check-node update rule for the LLR recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckNode {
    /// sign(a)sign(b)min(|a|,|b|).
    #[default]
    MinSum,
    /// Exact boxplus, 2 atanh(tanh(a/2) tanh(b/2)), in stable log form.
    Exact,
}

/// Check-node update (min-sum form).
#[inline(always)]
pub fn f_func(a: f64, b: f64) -> f64 {
    let sign = (a.to_bits() ^ b.to_bits()) & SIGN_BIT;
    f64::from_bits(a.abs().min(b.abs()).to_bits() ^ sign)
}

/// Exact check-node update.
#[inline]
pub fn f_func_exact(a: f64, b: f64) -> f64 {
    f_func(a, b) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Variable-node update: b + (1 - 2u) a.
#[inline(always)]
pub fn g_func(a: f64, b: f64, u_partial: u8) -> f64 {
    b + f64::from_bits(a.to_bits() ^ ((u_partial as u64) << 63))
}

/// Hard decision: 0 for non-negative LLRs.
#[inline(always)]
pub fn hard_decision(llr: f64) -> u8 {
    (llr < 0.0) as u8
}

/// Operation counts of the most recent decode call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub f_evals: u64,
    pub g_evals: u64,
    pub leaf_visits: u64,
}

/// Bit estimates and per-information-leaf decision LLRs of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ScResult {
    /// Estimated u vector, frozen positions zero.
    pub u_hat: Vec<u8>,
    /// Decision LLRs at the K+C information leaves, ascending leaf order.
    pub decision_llrs: Vec<f64>,
}

/// Reusable SC decoder for one code.
///
/// Owns mutable scratch sized (n+1) levels by N and is single-threaded;
/// run independent instances for concurrent decoding.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    code: PolarCode,
    check_node: CheckNode,
    /// Level-major LLR scratch: level d occupies [d*N, (d+1)*N).
    llrs: Vec<f64>,
    /// Level-major partial sums; level n holds u_hat.
    sums: Vec<u8>,
    decision_llrs: Vec<f64>,
    counts: OpCounts,
}

impl ScDecoder {
    pub fn new(code: &PolarCode) -> Self {
        Self::with_check_node(code, CheckNode::default())
    }

    pub fn with_check_node(code: &PolarCode, check_node: CheckNode) -> Self {
        let n = code.block_len();
        let levels = code.n_exp() as usize + 1;
        ScDecoder {
            code: code.clone(),
            check_node,
            llrs: vec![0.0; levels * n],
            sums: vec![0; levels * n],
            decision_llrs: Vec::with_capacity(code.payload_len()),
            counts: OpCounts::default(),
        }
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    /// Decode one trial. With `flip_position` set, the hard decision at that
    /// information leaf is inverted.
    pub fn decode(&mut self, channel_llrs: &[f64], flip_position: Option<usize>) -> Result<()> {
        let n = self.code.block_len();
        if channel_llrs.len() != n {
            return invalid(format!(
                "LLR vector length {} != N = {}",
                channel_llrs.len(),
                n
            ));
        }
        if let Some(pos) = flip_position {
            if pos >= n || self.code.is_frozen(pos) {
                return invalid(format!("flip position {pos} is not an information index"));
            }
        }
        self.llrs[..n].copy_from_slice(channel_llrs);
        self.decision_llrs.clear();
        self.counts = OpCounts::default();
        self.recurse(0, 0, n, flip_position.unwrap_or(NO_FLIP));
        Ok(())
    }

    /// Decode and copy out the result.
    pub fn decode_to_result(
        &mut self,
        channel_llrs: &[f64],
        flip_position: Option<usize>,
    ) -> Result<ScResult> {
        self.decode(channel_llrs, flip_position)?;
        Ok(ScResult {
            u_hat: self.u_hat().to_vec(),
            decision_llrs: self.decision_llrs().to_vec(),
        })
    }

    /// Estimated u vector of the last trial.
    pub fn u_hat(&self) -> &[u8] {
        let n = self.code.block_len();
        let leaf_level = self.code.n_exp() as usize;
        &self.sums[leaf_level * n..(leaf_level + 1) * n]
    }

    /// Decision LLRs of the last trial, one per information leaf.
    pub fn decision_llrs(&self) -> &[f64] {
        &self.decision_llrs
    }

    /// K+C information bits of the last trial.
    pub fn payload(&self) -> Vec<u8> {
        self.code.extract_payload(self.u_hat())
    }

    pub fn op_counts(&self) -> OpCounts {
        self.counts
    }

    #[inline(always)]
    fn leaf_decision(&mut self, leaf: usize, lambda: f64, flip: usize) -> u8 {
        self.counts.leaf_visits += 1;
        if self.code.is_frozen(leaf) {
            0
        } else {
            self.decision_llrs.push(lambda);
            hard_decision(lambda) ^ (leaf == flip) as u8
        }
    }

    fn recurse(&mut self, depth: usize, offset: usize, size: usize, flip: usize) {
        let n = self.code.block_len();
        if size == 2 {
            // Fused pair of leaves: one f, one g, and the local partial sums.
            let a = self.llrs[depth * n + offset];
            let b = self.llrs[depth * n + offset + 1];
            let left_llr = match self.check_node {
                CheckNode::MinSum => f_func(a, b),
                CheckNode::Exact => f_func_exact(a, b),
            };
            let left = self.leaf_decision(offset, left_llr, flip);
            let right = self.leaf_decision(offset + 1, g_func(a, b, left), flip);
            self.counts.f_evals += 1;
            self.counts.g_evals += 1;
            let leaf_base = (depth + 1) * n + offset;
            self.sums[leaf_base] = left;
            self.sums[leaf_base + 1] = right;
            self.sums[depth * n + offset] = left ^ right;
            self.sums[depth * n + offset + 1] = right;
            return;
        }

        let half = size / 2;
        let (cur, next) = {
            let (lo, hi) = self.llrs.split_at_mut((depth + 1) * n);
            (
                &lo[depth * n + offset..depth * n + offset + size],
                &mut hi[offset..offset + size],
            )
        };
        match self.check_node {
            CheckNode::MinSum => {
                for j in 0..half {
                    next[j] = f_func(cur[j], cur[j + half]);
                }
            }
            CheckNode::Exact => {
                for j in 0..half {
                    next[j] = f_func_exact(cur[j], cur[j + half]);
                }
            }
        }
        self.counts.f_evals += half as u64;

        self.recurse(depth + 1, offset, half, flip);

        {
            let (lo, hi) = self.llrs.split_at_mut((depth + 1) * n);
            let cur = &lo[depth * n + offset..depth * n + offset + size];
            let next = &mut hi[offset..offset + size];
            let left_sums = &self.sums[(depth + 1) * n + offset..(depth + 1) * n + offset + half];
            for j in 0..half {
                next[j + half] = g_func(cur[j], cur[j + half], left_sums[j]);
            }
        }
        self.counts.g_evals += half as u64;

        self.recurse(depth + 1, offset + half, half, flip);

        let (parent, child) = {
            let (lo, hi) = self.sums.split_at_mut((depth + 1) * n);
            (
                &mut lo[depth * n + offset..depth * n + offset + size],
                &hi[offset..offset + size],
            )
        };
        for j in 0..half {
            parent[j] = child[j] ^ child[j + half];
            parent[j + half] = child[j + half];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::polar_transform;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Saturated LLRs of a codeword: +20 for bit 0, -20 for bit 1.
    pub(crate) fn perfect_llrs(x: &[u8]) -> Vec<f64> {
        x.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect()
    }

    #[test]
    fn f_func_examples() {
        assert_eq!(f_func(1.0, -2.0), -1.0);
        assert_eq!(f_func(0.0, 5.0), 0.0);
        assert_eq!(f_func(3.0, 5.0), 3.0);
        assert_eq!(f_func(-3.0, -5.0), 3.0);
    }

    #[test]
    fn g_func_examples() {
        assert_eq!(g_func(1.0, -2.0, 0), -1.0);
        assert_eq!(g_func(1.0, -2.0, 1), -3.0);
        assert_eq!(g_func(0.0, -2.5, 1), -2.5);
    }

    #[test]
    fn exact_boxplus_reference_values() {
        // Equal magnitudes differ from min-sum by exactly ln 2.
        assert!((f_func_exact(20.0, -20.0) - (-20.0 + 2.0f64.ln())).abs() < 1e-9);
        // Well-separated magnitudes approach the min-sum value.
        assert!((f_func_exact(20.0, 3.0) - f_func(20.0, 3.0)).abs() < 0.05);
        // Known identity: boxplus(a, a) = ln((1+e^{2a})/(2e^a)) for a=1.
        let expected = ((1.0 + (2.0f64).exp()) / (2.0 * (1.0f64).exp())).ln();
        assert!((f_func_exact(1.0, 1.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn two_bit_hand_example() {
        let code = PolarCode::new(2, 1, 0).unwrap();
        let mut sc = ScDecoder::new(&code);
        let result = sc.decode_to_result(&[1.0, -2.0], None).unwrap();
        assert_eq!(result.u_hat, vec![0, 1]);
        assert_eq!(result.decision_llrs, vec![-1.0]);
    }

    #[test]
    fn noiseless_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for block_len in [16usize, 64, 1024] {
            let payload_len = block_len / 2;
            let code = PolarCode::new(block_len, payload_len, 0).unwrap();
            let mut sc = ScDecoder::new(&code);
            let trials = if block_len == 1024 { 50 } else { 1000 };
            for _ in 0..trials {
                let payload: Vec<u8> = (0..payload_len).map(|_| rng.gen_range(0..2)).collect();
                let u = code.insert_info(&payload).unwrap();
                let x = code.encode(&u).unwrap();
                sc.decode(&perfect_llrs(&x), None).unwrap();
                assert_eq!(sc.u_hat(), u.as_slice());
            }
        }
    }

    #[test]
    fn frozen_positions_always_zero() {
        let code = PolarCode::new(64, 20, 0).unwrap();
        let mut sc = ScDecoder::new(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let llrs: Vec<f64> = (0..64).map(|_| rng.gen_range(-4.0..4.0)).collect();
            sc.decode(&llrs, None).unwrap();
            for i in code.frozen_set() {
                assert_eq!(sc.u_hat()[i], 0);
            }
            assert_eq!(sc.decision_llrs().len(), code.payload_len());
        }
    }

    #[test]
    fn flip_complements_target_and_prefix() {
        let code = PolarCode::new(64, 32, 0).unwrap();
        let mut sc = ScDecoder::new(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let llrs: Vec<f64> = (0..64).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let base = sc.decode_to_result(&llrs, None).unwrap();
            for &pos in &[code.info_set()[0], code.info_set()[13], code.info_set()[31]] {
                let flipped = sc.decode_to_result(&llrs, Some(pos)).unwrap();
                assert_eq!(flipped.u_hat[pos], base.u_hat[pos] ^ 1);
                for i in 0..pos {
                    assert_eq!(flipped.u_hat[i], base.u_hat[i], "prefix changed at {i}");
                }
            }
        }
    }

    #[test]
    fn flip_on_noiseless_input_changes_first_info_bit() {
        let code = PolarCode::new(16, 8, 0).unwrap();
        let mut sc = ScDecoder::new(&code);
        let payload = vec![1, 0, 1, 1, 0, 0, 1, 0];
        let u = code.insert_info(&payload).unwrap();
        let x = code.encode(&u).unwrap();
        let llrs = perfect_llrs(&x);
        sc.decode(&llrs, None).unwrap();
        assert_eq!(sc.u_hat(), u.as_slice());
        let first_info = code.info_set()[0];
        sc.decode(&llrs, Some(first_info)).unwrap();
        assert_eq!(sc.u_hat()[first_info], u[first_info] ^ 1);
    }

    #[test]
    fn flip_rejects_frozen_and_bad_lengths() {
        let code = PolarCode::new(16, 8, 0).unwrap();
        let mut sc = ScDecoder::new(&code);
        let frozen = code.frozen_set()[0];
        assert!(sc.decode(&vec![0.0; 16], Some(frozen)).is_err());
        assert!(sc.decode(&vec![0.0; 16], Some(99)).is_err());
        assert!(sc.decode(&vec![0.0; 8], None).is_err());
    }

    #[test]
    fn operation_counts_match_n_log_n() {
        for (block_len, payload_len) in [(16usize, 8usize), (256, 128), (1024, 512)] {
            let code = PolarCode::new(block_len, payload_len, 0).unwrap();
            let mut sc = ScDecoder::new(&code);
            sc.decode(&vec![0.5; block_len], None).unwrap();
            let counts = sc.op_counts();
            let expected = (block_len as u64) * (block_len.trailing_zeros() as u64) / 2;
            assert_eq!(counts.leaf_visits, block_len as u64);
            assert_eq!(counts.f_evals, expected);
            assert_eq!(counts.g_evals, expected);
        }
    }

    #[test]
    fn determinism() {
        let code = PolarCode::new(128, 64, 0).unwrap();
        let mut sc_a = ScDecoder::new(&code);
        let mut sc_b = ScDecoder::new(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let llrs: Vec<f64> = (0..128).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let a = sc_a.decode_to_result(&llrs, None).unwrap();
        // Interleave an unrelated decode to show no hidden state leaks.
        sc_b.decode(&vec![1.0; 128], None).unwrap();
        let b = sc_b.decode_to_result(&llrs, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_check_node_round_trips_noiselessly() {
        let code = PolarCode::new(64, 32, 0).unwrap();
        let mut sc = ScDecoder::with_check_node(&code, CheckNode::Exact);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let payload: Vec<u8> = (0..32).map(|_| rng.gen_range(0..2)).collect();
            let mut x = code.insert_info(&payload).unwrap();
            polar_transform(&mut x);
            sc.decode(&perfect_llrs(&x), None).unwrap();
            assert_eq!(sc.payload(), payload);
        }
    }
}
