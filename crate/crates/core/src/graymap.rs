//! The generalized Gray map and bit-packed binary words.
//!
//! [`phi`] sends `u` in `Z_{2^s}` to a binary word of length `2^(s-1)`:
//! the constant word given by the top bit of `u`, plus the combination of
//! the rows of [`YMatrix`] selected by the remaining bits. For `s = 2` and
//! `s = 3` this gives the usual tables
//!
//! ```text
//! Z4:  0 -> 00   1 -> 01   2 -> 11   3 -> 10
//! Z8:  0 -> 0000 1 -> 0101 2 -> 0011 3 -> 0110
//!      4 -> 1111 5 -> 1010 6 -> 1100 7 -> 1001
//! ```
//!
//! [`gray_mixed`] maps a mixed vector to binary: identity on the `Z2`
//! block, the `s = 2` map on the `Z4` block, the `s = 3` map on the `Z8`
//! block, concatenated in that order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::alphabet::{MixedVector, RingVector, MAX_RING_EXPONENT};
use crate::error::{Error, Result};

/// A binary word, bit-packed into 64-bit limbs. Bit `i` of the word is bit
/// `i % 64` of limb `i / 64`; limb bits past `len` are kept zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryWord {
    len: usize,
    words: Vec<u64>,
}

impl BinaryWord {
    pub fn zero(len: usize) -> Self {
        BinaryWord {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = BinaryWord::zero(len);
        for i in 0..w.words.len() {
            w.words[i] = !0;
        }
        w.clear_tail();
        w
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut w = BinaryWord::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => w.words[i / 64] |= 1u64 << (i % 64),
                _ => {
                    return Err(Error::DigitOutOfRange {
                        modulus: 2,
                        digit: u64::from(b),
                    })
                }
            }
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        if bit {
            self.words[i / 64] |= 1u64 << (i % 64);
        } else {
            self.words[i / 64] &= !(1u64 << (i % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hamming distance; both words must have the same length.
    pub fn distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Number of positions where both words are 1.
    pub fn and_weight(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// First set bit, if any.
    pub fn leading_one(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Word with bit `i` of `self` moved to bit `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.len);
        let mut out = BinaryWord::zero(self.len);
        for (i, &j) in perm.iter().enumerate() {
            if self.get(i) {
                out.words[j / 64] |= 1u64 << (j % 64);
            }
        }
        out
    }

    fn clear_tail(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

/// Lexicographic order of the '0'/'1' renderings (bit 0 compared first).
impl Ord for BinaryWord {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let i = diff.trailing_zeros();
                return if (a >> i) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BinaryWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut w = BinaryWord::zero(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.words[i / 64] |= 1u64 << (i % 64),
                _ => return Err(Error::Parse(format!("bad bit {:?} in {:?}", c, s))),
            }
        }
        Ok(w)
    }
}

/// Incremental builder used when concatenating Gray images.
#[derive(Debug, Default)]
pub struct WordBuilder {
    words: Vec<u64>,
    len: usize,
}

impl WordBuilder {
    pub fn with_capacity(bits: usize) -> Self {
        WordBuilder {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    /// Appends the low `n` bits of `pattern`, LSB first. `n <= 64`.
    pub fn push_bits(&mut self, pattern: u64, n: usize) {
        debug_assert!(n <= 64);
        let pattern = if n == 64 { pattern } else { pattern & ((1u64 << n) - 1) };
        let offset = self.len % 64;
        if offset == 0 {
            self.words.push(pattern);
        } else {
            *self.words.last_mut().unwrap() |= pattern << offset;
            if offset + n > 64 {
                self.words.push(pattern >> (64 - offset));
            }
        }
        self.len += n;
    }

    pub fn push_word(&mut self, word: &BinaryWord) {
        let mut remaining = word.len;
        for &limb in &word.words {
            let n = remaining.min(64);
            self.push_bits(limb, n);
            remaining -= n;
            if remaining == 0 {
                break;
            }
        }
    }

    pub fn finish(mut self) -> BinaryWord {
        self.words.truncate(self.len.div_ceil(64));
        let mut w = BinaryWord {
            len: self.len,
            words: self.words,
        };
        w.clear_tail();
        w
    }
}

/// The `(s-1) x 2^(s-1)` matrix whose column `j` is the binary expansion of
/// `j`, least significant digit in the top row. Its rows plus the all-one
/// word generate a first order Reed-Muller code.
#[derive(Debug, Clone)]
pub struct YMatrix {
    s: u32,
    rows: Vec<BinaryWord>,
}

impl YMatrix {
    pub fn new(s: u32) -> Result<Self> {
        check_exponent(s)?;
        if s < 2 {
            return Err(Error::InvalidParameter(
                "Y matrix is defined for s >= 2".into(),
            ));
        }
        let cols = 1usize << (s - 1);
        let rows = (0..s - 1)
            .map(|r| {
                let mut row = BinaryWord::zero(cols);
                for j in 0..cols {
                    if (j >> r) & 1 == 1 {
                        row.set(j, true);
                    }
                }
                row
            })
            .collect();
        Ok(YMatrix { s, rows })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn rows(&self) -> &[BinaryWord] {
        &self.rows
    }
}

fn check_exponent(s: u32) -> Result<()> {
    if s == 0 || s > MAX_RING_EXPONENT {
        return Err(Error::InvalidParameter(format!(
            "Gray map exponent must be in 1..={}, got {}",
            MAX_RING_EXPONENT, s
        )));
    }
    Ok(())
}

/// Gray map `Z_{2^s} -> Z2^(2^(s-1))`. For `s = 1` this is the identity.
pub fn phi(s: u32, u: u64) -> Result<BinaryWord> {
    check_exponent(s)?;
    if u >= (1u64 << s) {
        return Err(Error::DigitOutOfRange {
            modulus: 1u64 << s,
            digit: u,
        });
    }
    if s == 1 {
        return BinaryWord::from_bits(&[u as u8]);
    }
    let len = 1usize << (s - 1);
    let top = (u >> (s - 1)) & 1 == 1;
    let low = u & ((1u64 << (s - 1)) - 1);
    let mut w = BinaryWord::zero(len);
    for j in 0..len {
        // Row combination selected by the low bits: column j of the Y
        // matrix contributes its parity against `low`.
        let bit = top ^ ((low & j as u64).count_ones() & 1 == 1);
        if bit {
            w.set(j, true);
        }
    }
    Ok(w)
}

/// All `2^s` Gray images for a given `s`, indexed by ring element.
pub fn phi_table(s: u32) -> Result<Vec<BinaryWord>> {
    check_exponent(s)?;
    (0..1u64 << s).map(|u| phi(s, u)).collect()
}

/// Componentwise extension of [`phi`] to `Z_{2^s}^n`.
pub fn phi_vec(s: u32, v: &RingVector) -> Result<BinaryWord> {
    if v.exponent() != s {
        return Err(Error::RingMismatch {
            expected: format!("Z{}", 1u64 << s),
            found: format!("Z{}", v.modulus()),
        });
    }
    let table = phi_table(s)?;
    let image_len = 1usize << (s - 1);
    let mut out = WordBuilder::with_capacity(v.len() * image_len);
    for &d in v.digits() {
        out.push_word(&table[d as usize]);
    }
    Ok(out.finish())
}

/// Gray image of a ring vector under its own exponent.
pub fn gray_ring(v: &RingVector) -> BinaryWord {
    phi_vec(v.exponent(), v).expect("exponent taken from the vector itself")
}

fn packed_table(s: u32) -> &'static [u64] {
    // Images for s <= 3 fit in a u64 apiece; memoized once.
    static PHI2: OnceLock<Vec<u64>> = OnceLock::new();
    static PHI3: OnceLock<Vec<u64>> = OnceLock::new();
    let pack = move |s: u32| -> Vec<u64> {
        phi_table(s)
            .unwrap()
            .iter()
            .map(|w| {
                let mut bits = 0u64;
                for i in 0..w.len() {
                    bits |= u64::from(w.get(i)) << i;
                }
                bits
            })
            .collect()
    };
    match s {
        2 => PHI2.get_or_init(|| pack(2)),
        3 => PHI3.get_or_init(|| pack(3)),
        _ => unreachable!(),
    }
}

/// Gray image of a mixed vector: the `Z2` block verbatim, then the two-bit
/// images of the `Z4` digits, then the four-bit images of the `Z8` digits.
/// The result has length `a1 + 2*a2 + 4*a3`.
pub fn gray_mixed(v: &MixedVector) -> BinaryWord {
    let (a1, a2, a3) = v.shape();
    let phi2 = packed_table(2);
    let phi3 = packed_table(3);
    let mut out = WordBuilder::with_capacity(a1 + 2 * a2 + 4 * a3);
    for &d in v.z2_block() {
        out.push_bits(u64::from(d), 1);
    }
    for &d in v.z4_block() {
        out.push_bits(phi2[d as usize], 2);
    }
    for &d in v.z8_block() {
        out.push_bits(phi3[d as usize], 4);
    }
    out.finish()
}
