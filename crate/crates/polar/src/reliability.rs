//! Synthetic-channel reliability ordering for code construction.
//!
//! Uses the polarization-weight (beta-expansion) rule with beta = 2^(1/4):
//! the weight of channel i with binary expansion i = sum_j b_j 2^j is
//! W(i) = sum_j b_j beta^j, and larger weight means a more reliable channel.
//! This is the ordering rule behind the 5G sequence and extends to any
//! power-of-two length.

const BETA: f64 = 1.189_207_115_002_721_1; // 2^(1/4)

/// Polarization weight of a single channel index.
pub fn polarization_weight(index: usize) -> f64 {
    let mut w = 0.0;
    let mut bit_pow = 1.0;
    let mut i = index;
    while i != 0 {
        if i & 1 == 1 {
            w += bit_pow;
        }
        bit_pow *= BETA;
        i >>= 1;
    }
    w
}

/// All channel indices of a length-`block_len` code, least reliable first.
///
/// Deterministic: ties (which cannot occur analytically, the weights are
/// distinct sums of powers of 2^(1/4)) would be broken by index.
pub fn reliability_order(block_len: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..block_len).collect();
    order.sort_by(|&a, &b| {
        polarization_weight(a)
            .total_cmp(&polarization_weight(b))
            .then(a.cmp(&b))
    });
    order
}

/// The `count` most reliable channel indices, in ascending index order.
pub fn most_reliable(block_len: usize, count: usize) -> Vec<usize> {
    let order = reliability_order(block_len);
    let mut picked: Vec<usize> = order[block_len - count..].to_vec();
    picked.sort_unstable();
    picked
}
