//! Exact arithmetic on vectors over the mixed alphabet `Z2 x Z4 x Z8` and
//! over a single ring `Z_{2^s}`.
//!
//! A [`MixedVector`] keeps its three blocks separate so the block widths
//! `(a1, a2, a3)` stay exact under all arithmetic; zero-width blocks are
//! legal, so the same type carries pure `Z4`, pure `Z8`, and `Z2 x Z4`
//! vectors. Values are immutable from the outside and safe to share across
//! threads.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported ring exponent for [`RingVector`] (modulus `2^16`).
pub const MAX_RING_EXPONENT: u32 = 16;

/// Element of `Z2^a1 x Z4^a2 x Z8^a3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedVector {
    b: Vec<u8>,
    q: Vec<u8>,
    o: Vec<u8>,
}

impl MixedVector {
    pub fn new(b: Vec<u8>, q: Vec<u8>, o: Vec<u8>) -> Result<Self> {
        for (block, modulus) in [(&b, 2u64), (&q, 4), (&o, 8)] {
            if let Some(&d) = block.iter().find(|&&d| u64::from(d) >= modulus) {
                return Err(Error::DigitOutOfRange {
                    modulus,
                    digit: u64::from(d),
                });
            }
        }
        Ok(MixedVector { b, q, o })
    }

    pub fn zero(a1: usize, a2: usize, a3: usize) -> Self {
        MixedVector {
            b: vec![0; a1],
            q: vec![0; a2],
            o: vec![0; a3],
        }
    }

    /// Block widths `(a1, a2, a3)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.b.len(), self.q.len(), self.o.len())
    }

    pub fn z2_block(&self) -> &[u8] {
        &self.b
    }

    pub fn z4_block(&self) -> &[u8] {
        &self.q
    }

    pub fn z8_block(&self) -> &[u8] {
        &self.o
    }

    pub fn is_zero(&self) -> bool {
        let all0 = |v: &[u8]| v.iter().all(|&d| d == 0);
        all0(&self.b) && all0(&self.q) && all0(&self.o)
    }

    /// Componentwise sum, mod 2 / mod 4 / mod 8 per block.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    /// In-place sum; the caller guarantees equal shapes.
    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        debug_assert_eq!(self.shape(), other.shape());
        for (a, b) in self.b.iter_mut().zip(&other.b) {
            *a = (*a + b) & 1;
        }
        for (a, b) in self.q.iter_mut().zip(&other.q) {
            *a = (*a + b) & 3;
        }
        for (a, b) in self.o.iter_mut().zip(&other.o) {
            *a = (*a + b) & 7;
        }
    }

    /// Each digit multiplied by `k` modulo its block modulus.
    pub fn scalar_mul(&self, k: u64) -> Self {
        let mul = |d: u8, mask: u64| ((u64::from(d) * (k & mask)) & mask) as u8;
        MixedVector {
            b: self.b.iter().map(|&d| mul(d, 1)).collect(),
            q: self.q.iter().map(|&d| mul(d, 3)).collect(),
            o: self.o.iter().map(|&d| mul(d, 7)).collect(),
        }
    }

    /// Additive order: the least `m >= 1` with `m * self = 0`. Always a
    /// divisor of 8, the lcm of the per-digit orders.
    pub fn order(&self) -> u32 {
        let mut ord = 1u32;
        for &d in &self.b {
            ord = ord.max(digit_order(d, 1));
        }
        for &d in &self.q {
            ord = ord.max(digit_order(d, 2));
        }
        for &d in &self.o {
            ord = ord.max(digit_order(d, 3));
        }
        ord
    }
}

/// Order of `d` in `Z_{2^s}`: `2^(s - v2(d))` for nonzero `d`.
fn digit_order(d: u8, s: u32) -> u32 {
    if d == 0 {
        1
    } else {
        1 << (s - d.trailing_zeros().min(s))
    }
}

impl fmt::Display for MixedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn render(f: &mut fmt::Formatter<'_>, block: &[u8]) -> fmt::Result {
            for &d in block {
                write!(f, "{}", d)?;
            }
            Ok(())
        }
        render(f, &self.b)?;
        write!(f, "|")?;
        render(f, &self.q)?;
        write!(f, "|")?;
        render(f, &self.o)
    }
}

impl FromStr for MixedVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "mixed vector needs three '|'-separated blocks, got {:?}",
                s
            )));
        }
        let digits = |part: &str| -> Result<Vec<u8>> {
            part.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Parse(format!("bad digit {:?} in {:?}", c, s)))
                })
                .collect()
        };
        MixedVector::new(digits(parts[0])?, digits(parts[1])?, digits(parts[2])?)
    }
}

/// Element of `Z_{2^s}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingVector {
    exponent: u32,
    digits: Vec<u16>,
}

impl RingVector {
    pub fn new(exponent: u32, digits: Vec<u16>) -> Result<Self> {
        if exponent == 0 || exponent > MAX_RING_EXPONENT {
            return Err(Error::InvalidParameter(format!(
                "ring exponent must be in 1..={}, got {}",
                MAX_RING_EXPONENT, exponent
            )));
        }
        let modulus = 1u64 << exponent;
        if let Some(&d) = digits.iter().find(|&&d| u64::from(d) >= modulus) {
            return Err(Error::DigitOutOfRange {
                modulus,
                digit: u64::from(d),
            });
        }
        Ok(RingVector { exponent, digits })
    }

    pub fn zero(exponent: u32, n: usize) -> Result<Self> {
        RingVector::new(exponent, vec![0; n])
    }

    /// `s` in `Z_{2^s}`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u64 {
        1u64 << self.exponent
    }

    pub fn digits(&self) -> &[u16] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.exponent != other.exponent || self.len() != other.len() {
            return Err(Error::RingMismatch {
                expected: format!("Z{}^{}", self.modulus(), self.len()),
                found: format!("Z{}^{}", other.modulus(), other.len()),
            });
        }
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        debug_assert_eq!((self.exponent, self.len()), (other.exponent, other.len()));
        let mask = (self.modulus() - 1) as u16;
        for (a, b) in self.digits.iter_mut().zip(&other.digits) {
            *a = a.wrapping_add(*b) & mask;
        }
    }

    pub fn scalar_mul(&self, k: u64) -> Self {
        let mask = self.modulus() - 1;
        let k = k & mask;
        RingVector {
            exponent: self.exponent,
            digits: self
                .digits
                .iter()
                .map(|&d| ((u64::from(d) * k) & mask) as u16)
                .collect(),
        }
    }

    /// Least `m >= 1` with `m * self = 0`; a divisor of `2^s`.
    pub fn order(&self) -> u32 {
        let mut ord = 1u32;
        for &d in &self.digits {
            if d != 0 {
                let v2 = u32::from(d).trailing_zeros().min(self.exponent);
                ord = ord.max(1 << (self.exponent - v2));
            }
        }
        ord
    }
}

impl fmt::Display for RingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}:", self.modulus())?;
        if self.modulus() <= 10 {
            for &d in &self.digits {
                write!(f, "{}", d)?;
            }
        } else {
            // Multi-character digits need a separator to stay unambiguous.
            let mut first = true;
            for &d in &self.digits {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", d)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl FromStr for RingVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rest = s
            .strip_prefix('z')
            .ok_or_else(|| Error::Parse(format!("ring vector must start with 'z': {:?}", s)))?;
        let (modulus_str, body) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("ring vector needs 'z<modulus>:' prefix: {:?}", s)))?;
        let modulus: u64 = modulus_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in {:?}", s)))?;
        if !modulus.is_power_of_two() || modulus < 2 {
            return Err(Error::Parse(format!("modulus {} is not a power of two", modulus)));
        }
        let exponent = modulus.trailing_zeros();
        let digits: Vec<u16> = if body.contains(',') {
            body.split(',')
                .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad digit {:?}", p))))
                .collect::<Result<_>>()?
        } else {
            body.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u16)
                        .ok_or_else(|| Error::Parse(format!("bad digit {:?} in {:?}", c, s)))
                })
                .collect::<Result<_>>()?
        };
        RingVector::new(exponent, digits)
    }
}
