//! BPSK modulation, AWGN, and channel-LLR conversion.
//!
//! Eb/N0 is referred to the K+C transmitted payload bits, i.e. the rate in
//! the conversion is (K+C)/N: sigma = sqrt(1 / (2 R Eb/N0)).

use crate::error::{invalid, Result};
use crate::rng::RngStream;

/// Channel operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    pub noise_sigma: f64,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return invalid(format!("rate {rate} outside (0, 1]"));
        }
        Ok(ChannelParams {
            ebn0_db,
            rate,
            noise_sigma: ebn0_to_sigma(ebn0_db, rate),
        })
    }
}

/// Per-dimension noise standard deviation at the given operating point.
pub fn ebn0_to_sigma(ebn0_db: f64, rate: f64) -> f64 {
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    (1.0 / (2.0 * rate * ebn0)).sqrt()
}

/// Antipodal mapping: bit 0 -> +1, bit 1 -> -1.
pub fn modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| 1.0 - 2.0 * b as f64).collect()
}

/// y = s + n with i.i.d. N(0, sigma^2) noise.
pub fn transmit(symbols: &[f64], noise_sigma: f64, rng: &mut RngStream) -> Vec<f64> {
    symbols.iter().map(|&s| s + noise_sigma * rng.gaussian()).collect()
}

/// LLRs of BPSK over AWGN: L = 2 y / sigma^2, positive favoring bit 0.
pub fn llr_from_channel(received: &[f64], noise_sigma: f64) -> Result<Vec<f64>> {
    if noise_sigma <= 0.0 {
        return invalid(format!(
            "noise sigma {noise_sigma} must be positive; use saturated LLRs for noiseless tests"
        ));
    }
    let scale = 2.0 / (noise_sigma * noise_sigma);
    Ok(received.iter().map(|&y| scale * y).collect())
}
