//! CRC-aided polar codes with a family of single-instance retry decoders.
//!
//! The crate provides code construction and encoding ([`code`]), the
//! successive-cancellation kernel every decoder reuses ([`sc`]), bit-flip
//! retries ([`flip`]), Gaussian LLR-perturbation retries ([`perturb`]), the
//! composite decoders chaining both ([`composite`]), plus BPSK/AWGN channel
//! helpers ([`channel`]) and reproducible random substreams ([`rng`]) for
//! Monte-Carlo work.

pub mod channel;
pub mod code;
pub mod composite;
pub mod crc;
pub mod decoder;
pub mod error;
pub mod flip;
pub mod perturb;
pub mod reliability;
pub mod rng;
pub mod sc;

pub use code::{polar_transform, PolarCode};
pub use crc::Crc;
pub use decoder::{decode, decoder_max_trials, DecoderKind, DecoderParams};
pub use error::{PolarError, Result};
pub use flip::{DecodeOutcome, FlipMetric};
pub use perturb::PerturbConfig;
pub use rng::RngStream;
pub use sc::{CheckNode, ScDecoder, ScResult};
