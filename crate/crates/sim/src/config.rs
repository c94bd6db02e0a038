//! Experiment configuration: code, decoder list, SNR grid, stopping rule.
//!
//! The JSON config file mirrors these structs field for field; see the
//! README for an example.

use serde::{Deserialize, Serialize};

use polar::{DecoderKind, DecoderParams, PerturbConfig, PolarCode};

use crate::error::{SimError, SimResult};

/// Code dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    #[serde(rename = "N")]
    pub block_len: usize,
    #[serde(rename = "K")]
    pub msg_len: usize,
    #[serde(rename = "C")]
    pub crc_len: usize,
}

impl CodeParams {
    pub fn build(&self) -> SimResult<PolarCode> {
        Ok(PolarCode::new(self.block_len, self.msg_len, self.crc_len)?)
    }

    /// Rate K/N used for the Eb/N0 conversion: Eb is the energy per
    /// message bit, with the CRC counted as decoder overhead.
    pub fn rate(&self) -> f64 {
        self.msg_len as f64 / self.block_len as f64
    }
}

fn default_sigma2() -> f64 {
    PerturbConfig::default().sigma2
}

fn default_adaptive_initial() -> f64 {
    PerturbConfig::default().adaptive_initial_sigma2
}

fn default_adaptive_step() -> f64 {
    PerturbConfig::default().adaptive_step
}

/// One decoder under test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub name: DecoderKind,
    #[serde(default)]
    pub fmax: usize,
    #[serde(default)]
    pub pmax: usize,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
    #[serde(default = "default_adaptive_initial")]
    pub dscp_initial_sigma2: f64,
    #[serde(default = "default_adaptive_step")]
    pub dscp_step: f64,
}

impl DecoderConfig {
    pub fn new(name: DecoderKind, fmax: usize, pmax: usize) -> Self {
        DecoderConfig {
            name,
            fmax,
            pmax,
            sigma2: default_sigma2(),
            dscp_initial_sigma2: default_adaptive_initial(),
            dscp_step: default_adaptive_step(),
        }
    }

    pub fn params(&self) -> DecoderParams {
        DecoderParams {
            fmax: self.fmax,
            pmax: self.pmax,
            perturb: PerturbConfig {
                sigma2: self.sigma2,
                adaptive_initial_sigma2: self.dscp_initial_sigma2,
                adaptive_step: self.dscp_step,
            },
        }
    }

    pub fn max_trials(&self) -> usize {
        polar::decoder_max_trials(self.name, &self.params())
    }

    /// Compact spec string: `name`, `name:F`, or `name:F:P` (`scp`/`dscp`
    /// take their single argument as Pmax).
    pub fn parse_spec(spec: &str) -> SimResult<Self> {
        let mut parts = spec.split(':');
        let name: DecoderKind = parts
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|e| SimError::InvalidConfig(format!("{e}")))?;
        let numbers: Vec<usize> = parts
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| SimError::InvalidConfig(format!("bad decoder spec {spec:?}")))
            })
            .collect::<SimResult<_>>()?;
        let (fmax, pmax) = match (name, numbers.as_slice()) {
            (DecoderKind::Sc, []) => (0, 0),
            (DecoderKind::Scf | DecoderKind::Dscf, [f]) => (*f, 0),
            (DecoderKind::Scp | DecoderKind::Dscp, [p]) => (0, *p),
            (DecoderKind::Dscfp | DecoderKind::Pdscf, [f, p]) => (*f, *p),
            _ => {
                return Err(SimError::InvalidConfig(format!(
                    "decoder spec {spec:?} has the wrong number of budget arguments"
                )))
            }
        };
        Ok(DecoderConfig::new(name, fmax, pmax))
    }

    /// Label used in result rows: the plain name (budgets are separate
    /// columns).
    pub fn label(&self) -> String {
        self.name.to_string()
    }
}

/// Early-stopping rule per simulation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_frames: u64,
    pub target_block_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_frames: 10_000_000,
            target_block_errors: 100,
        }
    }
}

/// A full experiment: every decoder at every grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub code: CodeParams,
    pub decoders: Vec<DecoderConfig>,
    pub ebn0_grid_db: Vec<f64>,
    #[serde(default)]
    pub stop: StopRule,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 means one per logical CPU.
    #[serde(default)]
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> SimResult<()> {
        self.code.build()?;
        if self.decoders.is_empty() {
            return Err(SimError::InvalidConfig("decoder list is empty".into()));
        }
        if self.ebn0_grid_db.is_empty() {
            return Err(SimError::InvalidConfig("ebn0_grid_db is empty".into()));
        }
        if !self.ebn0_grid_db.windows(2).all(|w| w[0] < w[1]) {
            return Err(SimError::InvalidConfig(
                "ebn0_grid_db must be strictly ascending".into(),
            ));
        }
        if self.stop.max_frames == 0 {
            return Err(SimError::InvalidConfig("max_frames must be >= 1".into()));
        }
        if self.stop.target_block_errors == 0 {
            return Err(SimError::InvalidConfig(
                "target_block_errors must be >= 1".into(),
            ));
        }
        for dec in &self.decoders {
            if dec.sigma2 < 0.0 || dec.dscp_initial_sigma2 < 0.0 || dec.dscp_step < 0.0 {
                return Err(SimError::InvalidConfig(format!(
                    "negative variance in decoder {}",
                    dec.label()
                )));
            }
            if dec.name.uses_flips() && dec.fmax > self.code.msg_len + self.code.crc_len {
                return Err(SimError::InvalidConfig(format!(
                    "fmax {} exceeds K + C for decoder {}",
                    dec.fmax,
                    dec.label()
                )));
            }
        }
        Ok(())
    }
}
