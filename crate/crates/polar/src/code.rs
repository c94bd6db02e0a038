//! Code construction, CRC attach/check, payload placement, and encoding.
//!
//! A code instance is immutable after construction and cheap to share
//! between decoder instances and threads.

use serde::{Deserialize, Serialize};

use crate::crc::Crc;
use crate::error::{invalid, PolarError, Result};
use crate::reliability;

/// A CRC-aided polar code: block length N = 2^n, K message bits, C check
/// bits, and the N-choose-(K+C) split into information and frozen channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CodeDoc", into = "CodeDoc")]
pub struct PolarCode {
    n_exp: u32,
    block_len: usize,
    msg_len: usize,
    crc_len: usize,
    info_set: Vec<usize>,
    is_info: Vec<bool>,
    crc: Option<Crc>,
}

impl PolarCode {
    /// Build an (N, K+C) code. The information set holds the K+C most
    /// reliable channels under the polarization-weight ordering; the CRC
    /// defaults to CRC-16/CCITT-FALSE for C = 16 (see [`Crc::default_for_width`]).
    pub fn new(block_len: usize, msg_len: usize, crc_len: usize) -> Result<Self> {
        let crc = if crc_len == 0 {
            None
        } else {
            Some(Crc::default_for_width(crc_len as u32)?)
        };
        Self::with_crc(block_len, msg_len, crc)
    }

    /// Build with an explicit CRC generator (width must equal the intended C).
    pub fn with_crc(block_len: usize, msg_len: usize, crc: Option<Crc>) -> Result<Self> {
        if !block_len.is_power_of_two() || block_len < 2 {
            return invalid(format!("block length {block_len} is not a power of two >= 2"));
        }
        if msg_len == 0 {
            return invalid("message length must be at least 1");
        }
        let crc_len = crc.map_or(0, |c| c.width() as usize);
        if msg_len + crc_len > block_len {
            return invalid(format!(
                "K + C = {} exceeds block length {block_len}",
                msg_len + crc_len
            ));
        }
        let info_set = reliability::most_reliable(block_len, msg_len + crc_len);
        Ok(Self::from_parts(block_len, msg_len, info_set, crc))
    }

    fn from_parts(
        block_len: usize,
        msg_len: usize,
        info_set: Vec<usize>,
        crc: Option<Crc>,
    ) -> Self {
        let mut is_info = vec![false; block_len];
        for &i in &info_set {
            is_info[i] = true;
        }
        PolarCode {
            n_exp: block_len.trailing_zeros(),
            block_len,
            msg_len,
            crc_len: crc.map_or(0, |c| c.width() as usize),
            info_set,
            is_info,
            crc,
        }
    }

    /// log2(N).
    pub fn n_exp(&self) -> u32 {
        self.n_exp
    }

    /// Block length N.
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Message length K.
    pub fn msg_len(&self) -> usize {
        self.msg_len
    }

    /// CRC length C.
    pub fn crc_len(&self) -> usize {
        self.crc_len
    }

    /// K + C, the number of information channels.
    pub fn payload_len(&self) -> usize {
        self.msg_len + self.crc_len
    }

    /// Information channel indices, strictly ascending.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// Frozen channel indices, strictly ascending.
    pub fn frozen_set(&self) -> Vec<usize> {
        (0..self.block_len).filter(|&i| !self.is_info[i]).collect()
    }

    pub fn is_info(&self, index: usize) -> bool {
        self.is_info[index]
    }

    pub fn is_frozen(&self, index: usize) -> bool {
        !self.is_info[index]
    }

    pub fn crc(&self) -> Option<&Crc> {
        self.crc.as_ref()
    }

    /// message -> message || CRC(message). The check bits occupy the last C
    /// payload positions, most significant first.
    pub fn attach_crc(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.msg_len {
            return invalid(format!(
                "message length {} != K = {}",
                message.len(),
                self.msg_len
            ));
        }
        let mut payload = Vec::with_capacity(self.payload_len());
        payload.extend_from_slice(message);
        if let Some(crc) = &self.crc {
            payload.extend(crc.checksum_bits(message));
        }
        Ok(payload)
    }

    /// True iff the last C payload bits equal the CRC of the first K.
    pub fn check_crc(&self, payload: &[u8]) -> Result<bool> {
        if payload.len() != self.payload_len() {
            return invalid(format!(
                "payload length {} != K + C = {}",
                payload.len(),
                self.payload_len()
            ));
        }
        let Some(crc) = &self.crc else {
            return Ok(true);
        };
        let (message, check) = payload.split_at(self.msg_len);
        let mut reg = crc.checksum(message);
        // Compare MSB-first without allocating.
        for &b in check {
            let top = ((reg >> (crc.width() - 1)) & 1) as u8;
            if top != b {
                return Ok(false);
            }
            reg <<= 1;
        }
        Ok(true)
    }

    /// Scatter a K+C payload into the information positions of a length-N
    /// vector, frozen positions zero.
    pub fn insert_info(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.payload_len() {
            return invalid(format!(
                "payload length {} != K + C = {}",
                payload.len(),
                self.payload_len()
            ));
        }
        let mut u = vec![0u8; self.block_len];
        for (&pos, &bit) in self.info_set.iter().zip(payload) {
            u[pos] = bit;
        }
        Ok(u)
    }

    /// Gather the K+C information positions of a length-N vector.
    pub fn extract_payload(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&pos| u[pos]).collect()
    }

    /// x = u G_N over GF(2).
    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.block_len {
            return invalid(format!("vector length {} != N = {}", u.len(), self.block_len));
        }
        let mut x = u.to_vec();
        polar_transform(&mut x);
        Ok(x)
    }
}

/// In-place multiplication by G_N = [1 0; 1 1]^(kron n): n stages of
/// butterfly XORs, O(N log N). G_N is its own inverse over GF(2).
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut step = 1;
    while step < n {
        for block in bits.chunks_exact_mut(2 * step) {
            let (lo, hi) = block.split_at_mut(step);
            for (l, h) in lo.iter_mut().zip(hi.iter()) {
                *l ^= *h;
            }
        }
        step *= 2;
    }
}

/// JSON document form of a code: `{n, N, K, C, crc_poly_hex, info_set}`.
#[derive(Debug, Serialize, Deserialize)]
struct CodeDoc {
    n: u32,
    #[serde(rename = "N")]
    block_len: usize,
    #[serde(rename = "K")]
    msg_len: usize,
    #[serde(rename = "C")]
    crc_len: usize,
    crc_poly_hex: String,
    info_set: Vec<usize>,
}

impl From<PolarCode> for CodeDoc {
    fn from(code: PolarCode) -> Self {
        CodeDoc {
            n: code.n_exp,
            block_len: code.block_len,
            msg_len: code.msg_len,
            crc_len: code.crc_len,
            crc_poly_hex: format!("{:#x}", code.crc.map_or(0, |c| c.poly())),
            info_set: code.info_set,
        }
    }
}

impl TryFrom<CodeDoc> for PolarCode {
    type Error = PolarError;

    fn try_from(doc: CodeDoc) -> Result<Self> {
        if !doc.block_len.is_power_of_two() || doc.block_len < 2 {
            return invalid(format!("N = {} is not a power of two >= 2", doc.block_len));
        }
        if doc.block_len.trailing_zeros() != doc.n {
            return invalid(format!("n = {} does not match N = {}", doc.n, doc.block_len));
        }
        if doc.msg_len == 0 {
            return invalid("K must be at least 1");
        }
        if doc.info_set.len() != doc.msg_len + doc.crc_len {
            return invalid(format!(
                "info_set has {} entries, expected K + C = {}",
                doc.info_set.len(),
                doc.msg_len + doc.crc_len
            ));
        }
        if !doc.info_set.windows(2).all(|w| w[0] < w[1]) {
            return invalid("info_set is not strictly ascending");
        }
        if doc.info_set.last().is_some_and(|&i| i >= doc.block_len) {
            return invalid("info_set index out of range");
        }
        let crc = if doc.crc_len == 0 {
            None
        } else {
            let hex = doc.crc_poly_hex.trim_start_matches("0x");
            let poly = u32::from_str_radix(hex, 16)
                .map_err(|e| PolarError::InvalidParameters(format!("bad crc_poly_hex: {e}")))?;
            let default = Crc::default_for_width(doc.crc_len as u32);
            let init = match default {
                Ok(d) if d.poly() == poly => d.init(),
                _ => 0,
            };
            Some(Crc::new(poly, doc.crc_len as u32, init)?)
        };
        Ok(PolarCode::from_parts(
            doc.block_len,
            doc.msg_len,
            doc.info_set,
            crc,
        ))
    }
}
