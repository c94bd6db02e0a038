//! Decoder registry: selection by name and a single dispatch entry point.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::PolarCode;
use crate::composite::{flip_then_perturb_decode, max_trials, perturbed_flip_decode, CompositeKind};
use crate::error::{PolarError, Result};
use crate::flip::{flip_decode, DecodeOutcome, FlipMetric};
use crate::perturb::{adaptive_perturb_decode, perturb_decode, PerturbConfig};
use crate::rng::RngStream;
use crate::sc::ScDecoder;

/// The decoder family, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Sc,
    Scf,
    Dscf,
    Scp,
    Dscp,
    Dscfp,
    Pdscf,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 7] = [
        DecoderKind::Sc,
        DecoderKind::Scf,
        DecoderKind::Dscf,
        DecoderKind::Scp,
        DecoderKind::Dscp,
        DecoderKind::Dscfp,
        DecoderKind::Pdscf,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Sc => "sc",
            DecoderKind::Scf => "scf",
            DecoderKind::Dscf => "dscf",
            DecoderKind::Scp => "scp",
            DecoderKind::Dscp => "dscp",
            DecoderKind::Dscfp => "dscfp",
            DecoderKind::Pdscf => "pdscf",
        }
    }

    pub fn uses_flips(&self) -> bool {
        matches!(
            self,
            DecoderKind::Scf | DecoderKind::Dscf | DecoderKind::Dscfp | DecoderKind::Pdscf
        )
    }

    pub fn uses_perturbation(&self) -> bool {
        matches!(
            self,
            DecoderKind::Scp | DecoderKind::Dscp | DecoderKind::Dscfp | DecoderKind::Pdscf
        )
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = PolarError;

    fn from_str(s: &str) -> Result<Self> {
        DecoderKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| {
                PolarError::InvalidParameters(format!(
                    "unknown decoder {s:?}; expected one of sc, scf, dscf, scp, dscp, dscfp, pdscf"
                ))
            })
    }
}

/// Retry budgets and perturbation settings for one decoder instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderParams {
    pub fmax: usize,
    pub pmax: usize,
    pub perturb: PerturbConfig,
}

impl Default for DecoderParams {
    fn default() -> Self {
        DecoderParams {
            fmax: 0,
            pmax: 0,
            perturb: PerturbConfig::default(),
        }
    }
}

/// Maximum total SC executions of `kind` under `params`.
pub fn decoder_max_trials(kind: DecoderKind, params: &DecoderParams) -> usize {
    match kind {
        DecoderKind::Sc => 1,
        DecoderKind::Scf | DecoderKind::Dscf => params.fmax + 1,
        DecoderKind::Scp | DecoderKind::Dscp => params.pmax + 1,
        DecoderKind::Dscfp => max_trials(CompositeKind::FlipThenPerturb, params.fmax, params.pmax),
        DecoderKind::Pdscf => max_trials(CompositeKind::PerturbedFlip, params.fmax, params.pmax),
    }
}

/// Run one decoding attempt with the named decoder.
pub fn decode(
    kind: DecoderKind,
    params: &DecoderParams,
    sc: &mut ScDecoder,
    code: &PolarCode,
    channel_llrs: &[f64],
    rng: &mut RngStream,
) -> Result<DecodeOutcome> {
    match kind {
        DecoderKind::Sc => flip_decode(sc, code, channel_llrs, 0, FlipMetric::Scf),
        DecoderKind::Scf => flip_decode(sc, code, channel_llrs, params.fmax, FlipMetric::Scf),
        DecoderKind::Dscf => flip_decode(sc, code, channel_llrs, params.fmax, FlipMetric::Dscf),
        DecoderKind::Scp => perturb_decode(
            sc,
            code,
            channel_llrs,
            params.pmax,
            params.perturb.sigma2,
            rng,
        ),
        DecoderKind::Dscp => {
            adaptive_perturb_decode(sc, code, channel_llrs, params.pmax, &params.perturb, rng)
        }
        DecoderKind::Dscfp => flip_then_perturb_decode(
            sc,
            code,
            channel_llrs,
            params.fmax,
            params.pmax,
            params.perturb.sigma2,
            rng,
        ),
        DecoderKind::Pdscf => perturbed_flip_decode(
            sc,
            code,
            channel_llrs,
            params.fmax,
            params.pmax,
            params.perturb.sigma2,
            rng,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in DecoderKind::ALL {
            assert_eq!(kind.name().parse::<DecoderKind>().unwrap(), kind);
        }
        assert!("scl".parse::<DecoderKind>().is_err());
        assert_eq!("DSCFP".parse::<DecoderKind>().unwrap(), DecoderKind::Dscfp);
    }

    #[test]
    fn max_trials_per_kind() {
        let params = DecoderParams {
            fmax: 8,
            pmax: 8,
            perturb: PerturbConfig::default(),
        };
        assert_eq!(decoder_max_trials(DecoderKind::Sc, &params), 1);
        assert_eq!(decoder_max_trials(DecoderKind::Scf, &params), 9);
        assert_eq!(decoder_max_trials(DecoderKind::Dscf, &params), 9);
        assert_eq!(decoder_max_trials(DecoderKind::Scp, &params), 9);
        assert_eq!(decoder_max_trials(DecoderKind::Dscfp, &params), 17);
        assert_eq!(decoder_max_trials(DecoderKind::Pdscf, &params), 81);
    }

    #[test]
    fn every_decoder_recovers_noiseless_frames() {
        let code = PolarCode::new(64, 16, 16).unwrap();
        let mut sc = ScDecoder::new(&code);
        let message: Vec<u8> = (0..16).map(|i| (i % 2) as u8).collect();
        let payload = code.attach_crc(&message).unwrap();
        let u = code.insert_info(&payload).unwrap();
        let x = code.encode(&u).unwrap();
        let llrs: Vec<f64> = x.iter().map(|&b| if b == 0 { 20.0 } else { -20.0 }).collect();
        let params = DecoderParams {
            fmax: 4,
            pmax: 4,
            perturb: PerturbConfig::default(),
        };
        for kind in DecoderKind::ALL {
            let mut rng = RngStream::substream(3, 0);
            let outcome = decode(kind, &params, &mut sc, &code, &llrs, &mut rng).unwrap();
            assert!(outcome.success, "{kind} failed on a noiseless frame");
            assert_eq!(outcome.trials_total, 1, "{kind}");
            assert_eq!(outcome.payload, payload, "{kind}");
        }
    }
}
