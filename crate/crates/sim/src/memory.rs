//! Storage estimates for a hardware realization of the retry decoders.
//!
//! Counts the bits a single-instance implementation must hold: the SC core
//! (channel LLRs, internal LLRs, internal partial sums, the estimate), the
//! flip stage (metric and position lists), the perturbation stage (a pristine
//! copy of the channel LLRs once more than one retry is allowed), and the
//! ones-count list of the adaptive variant.

use polar::DecoderKind;

use crate::error::{SimError, SimResult};

/// Bit counts per stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBreakdown {
    /// N Qch + (N-1) Qint + (N-1) + N.
    pub sc_bits: u64,
    /// Fmax Qflip + Fmax n.
    pub flip_bits: u64,
    /// N Qch when Pmax > 1, else 0.
    pub perturb_bits: u64,
    /// n Pmax for the adaptive variant's ones counts.
    pub dedup_bits: u64,
}

impl MemoryBreakdown {
    pub fn total(&self) -> u64 {
        self.sc_bits + self.flip_bits + self.perturb_bits + self.dedup_bits
    }
}

/// Quantization widths, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quantization {
    pub channel_llr: u32,
    pub internal_llr: u32,
    pub flip_metric: u32,
}

/// Estimate the storage of `kind` on a length-`block_len` code.
pub fn estimate_memory(
    block_len: usize,
    q: Quantization,
    fmax: usize,
    pmax: usize,
    kind: DecoderKind,
) -> SimResult<MemoryBreakdown> {
    if !block_len.is_power_of_two() || block_len < 2 {
        return Err(SimError::InvalidConfig(format!(
            "block length {block_len} is not a power of two >= 2"
        )));
    }
    if q.channel_llr == 0 || q.internal_llr == 0 || q.flip_metric == 0 {
        return Err(SimError::InvalidConfig(
            "quantization widths must be at least 1 bit".into(),
        ));
    }
    let n = block_len as u64;
    let stages = block_len.trailing_zeros() as u64;
    let sc_bits = n * q.channel_llr as u64 + (n - 1) * q.internal_llr as u64 + (n - 1) + n;
    let flip_bits = if kind.uses_flips() {
        fmax as u64 * q.flip_metric as u64 + fmax as u64 * stages
    } else {
        0
    };
    let perturb_bits = if kind.uses_perturbation() && pmax > 1 {
        n * q.channel_llr as u64
    } else {
        0
    };
    let dedup_bits = if kind == DecoderKind::Dscp {
        stages * pmax as u64
    } else {
        0
    };
    Ok(MemoryBreakdown {
        sc_bits,
        flip_bits,
        perturb_bits,
        dedup_bits,
    })
}
