//! Bit-serial CRC over arbitrary generator polynomials.
//!
//! Payloads here are bit sequences that are rarely byte-aligned, so the
//! register is clocked one bit at a time (MSB-first). The default 16-bit
//! configuration is CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, no
//! reflection, no final XOR).

use crate::error::{invalid, Result};

/// A CRC generator: polynomial (truncated, MSB-first), width in bits, and
/// initial register value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crc {
    poly: u32,
    width: u32,
    init: u32,
}

impl Crc {
    /// CRC-16/CCITT-FALSE, the default for 16 check bits.
    pub const CCITT_FALSE: Crc = Crc {
        poly: 0x1021,
        width: 16,
        init: 0xFFFF,
    };

    pub fn new(poly: u32, width: u32, init: u32) -> Result<Self> {
        if width == 0 || width > 32 {
            return invalid(format!("CRC width {width} out of range 1..=32"));
        }
        let mask = Self::mask_for(width);
        if poly & !mask != 0 || init & !mask != 0 {
            return invalid(format!(
                "CRC poly {poly:#x} or init {init:#x} exceeds width {width}"
            ));
        }
        Ok(Crc { poly, width, init })
    }

    /// A conventional generator for the given width.
    pub fn default_for_width(width: u32) -> Result<Self> {
        match width {
            8 => Crc::new(0x07, 8, 0),
            16 => Ok(Crc::CCITT_FALSE),
            24 => Crc::new(0x86_4CFB, 24, 0),
            32 => Crc::new(0x04C1_1DB7, 32, 0),
            _ => invalid(format!("no default CRC polynomial for width {width}")),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn init(&self) -> u32 {
        self.init
    }

    fn mask_for(width: u32) -> u32 {
        if width == 32 {
            u32::MAX
        } else {
            (1 << width) - 1
        }
    }

    /// Checksum of a bit sequence (each element 0 or 1), MSB of the register
    /// first in time.
    pub fn checksum(&self, bits: &[u8]) -> u32 {
        let top = 1u32 << (self.width - 1);
        let mask = Self::mask_for(self.width);
        let mut reg = self.init;
        for &b in bits {
            let feedback = ((reg & top) != 0) ^ (b != 0);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= self.poly;
            }
        }
        reg
    }

    /// Checksum expanded to `width` bits, most significant first.
    pub fn checksum_bits(&self, bits: &[u8]) -> Vec<u8> {
        let reg = self.checksum(bits);
        (0..self.width)
            .rev()
            .map(|i| ((reg >> i) & 1) as u8)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ascii_bits(s: &str) -> Vec<u8> {
        s.bytes()
            .flat_map(|byte| (0..8).rev().map(move |i| (byte >> i) & 1))
            .collect()
    }

    #[test]
    fn ccitt_false_check_value() {
        // Standard check input "123456789" -> 0x29B1.
        let crc = Crc::CCITT_FALSE;
        assert_eq!(crc.checksum(&ascii_bits("123456789")), 0x29B1);
    }

    #[test]
    fn zero_init_zero_message_has_zero_remainder() {
        let crc = Crc::new(0x1021, 16, 0).unwrap();
        assert_eq!(crc.checksum(&[0; 64]), 0);
        assert_eq!(crc.checksum_bits(&[0; 7]), vec![0; 16]);
    }

    #[test]
    fn checksum_bits_msb_first() {
        let crc = Crc::CCITT_FALSE;
        let bits = crc.checksum_bits(&ascii_bits("123456789"));
        // 0x29B1 = 0010 1001 1011 0001
        assert_eq!(
            bits,
            vec![0, 0, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 0, 0, 0, 1]
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Crc::new(0x1021, 0, 0).is_err());
        assert!(Crc::new(0x1021, 33, 0).is_err());
        assert!(Crc::new(0x1021, 8, 0).is_err()); // poly wider than register
        assert!(Crc::default_for_width(12).is_err());
    }

    #[test]
    fn width_four_generator() {
        let crc = Crc::new(0x3, 4, 0).unwrap();
        assert_eq!(crc.checksum(&[0, 0, 0, 0]), 0);
        // x^3 fed into x^4 + x + 1: remainder of shifting a single one.
        assert_ne!(crc.checksum(&[1]), 0);
    }
}
