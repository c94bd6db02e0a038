//! Result rows and their CSV/JSON encodings.

use serde::{Deserialize, Serialize};

use crate::config::{CodeParams, DecoderConfig};
use crate::stats::SimStats;

pub const CSV_HEADER: &str = "decoder,N,K,C,Fmax,Pmax,sigma2,ebn0_db,frames,block_errors,\
undetected_errors,bler,avg_trials,avg_add_trials_given_fail,seed";

/// One (decoder, Eb/N0) result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub decoder: String,
    #[serde(rename = "N")]
    pub block_len: usize,
    #[serde(rename = "K")]
    pub msg_len: usize,
    #[serde(rename = "C")]
    pub crc_len: usize,
    #[serde(rename = "Fmax")]
    pub fmax: usize,
    #[serde(rename = "Pmax")]
    pub pmax: usize,
    pub sigma2: f64,
    pub ebn0_db: f64,
    pub frames: u64,
    pub block_errors: u64,
    pub undetected_errors: u64,
    pub bler: f64,
    pub avg_trials: f64,
    pub avg_add_trials_given_fail: f64,
    pub seed: u64,
}

impl ResultRow {
    pub fn new(
        code: &CodeParams,
        decoder: &DecoderConfig,
        ebn0_db: f64,
        seed: u64,
        stats: &SimStats,
    ) -> Self {
        ResultRow {
            decoder: decoder.label(),
            block_len: code.block_len,
            msg_len: code.msg_len,
            crc_len: code.crc_len,
            fmax: decoder.fmax,
            pmax: decoder.pmax,
            sigma2: decoder.sigma2,
            ebn0_db,
            frames: stats.frames,
            block_errors: stats.block_errors,
            undetected_errors: stats.undetected_errors,
            bler: stats.bler,
            avg_trials: stats.avg_trials,
            avg_add_trials_given_fail: stats.avg_add_trials_given_fail,
            seed,
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.decoder,
            self.block_len,
            self.msg_len,
            self.crc_len,
            self.fmax,
            self.pmax,
            format_sig6(self.sigma2),
            format_sig6(self.ebn0_db),
            self.frames,
            self.block_errors,
            self.undetected_errors,
            format_sig6(self.bler),
            format_sig6(self.avg_trials),
            format_sig6(self.avg_add_trials_given_fail),
            self.seed,
        )
    }

    /// Key identifying a cell, for resuming interrupted sweeps.
    pub fn cell_key(&self) -> CellKey {
        CellKey {
            decoder: self.decoder.clone(),
            fmax: self.fmax,
            pmax: self.pmax,
            // Grid values are parsed back from CSV text, so compare the
            // canonical text form.
            ebn0_text: format_sig6(self.ebn0_db),
        }
    }
}

/// Identity of one sweep cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellKey {
    pub decoder: String,
    pub fmax: usize,
    pub pmax: usize,
    pub ebn0_text: String,
}

impl CellKey {
    pub fn of(decoder: &DecoderConfig, ebn0_db: f64) -> Self {
        CellKey {
            decoder: decoder.label(),
            fmax: decoder.fmax,
            pmax: decoder.pmax,
            ebn0_text: format_sig6(ebn0_db),
        }
    }
}

/// Parse the cell keys already present in a CSV body (header optional).
pub fn csv_cell_keys(body: &str) -> Vec<CellKey> {
    body.lines()
        .filter(|line| !line.is_empty() && !line.starts_with("decoder,"))
        .filter_map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 15 {
                return None;
            }
            Some(CellKey {
                decoder: fields[0].to_string(),
                fmax: fields[4].parse().ok()?,
                pmax: fields[5].parse().ok()?,
                ebn0_text: fields[7].to_string(),
            })
        })
        .collect()
}

/// Decimal form with six significant digits and trailing zeros trimmed.
pub fn format_sig6(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let text = if (-5..6).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        format!("{value:.decimals$}")
    } else {
        return format!("{value:.5e}");
    };
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}
