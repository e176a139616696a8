//! GF(2) linear algebra on bit-packed words: span rank, kernel, and
//! linearity of binary codes.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::codeset::BinaryCode;
use crate::error::{Error, Result};
use crate::graymap::BinaryWord;

/// A reduced GF(2) basis with ascending pivot positions. Rows are kept in
/// reduced row-echelon form, so insertion order does not affect the final
/// basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Basis {
    len: usize,
    rows: Vec<BinaryWord>,
    pivots: Vec<usize>,
}

impl Gf2Basis {
    pub fn new(len: usize) -> Self {
        Gf2Basis {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BinaryWord] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `word` modulo the current basis.
    pub fn reduce(&self, word: &BinaryWord) -> BinaryWord {
        let mut w = word.clone();
        self.reduce_in_place(&mut w);
        w
    }

    fn reduce_in_place(&self, w: &mut BinaryWord) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w.get(p) {
                w.xor_assign(row);
            }
        }
    }

    pub fn contains(&self, word: &BinaryWord) -> bool {
        self.reduce(word).is_zero()
    }

    /// Inserts a word; returns true when it was independent of the basis.
    pub fn insert(&mut self, word: &BinaryWord) -> bool {
        assert_eq!(word.len(), self.len);
        let mut w = word.clone();
        self.reduce_in_place(&mut w);
        let pivot = match w.leading_one() {
            Some(p) => p,
            None => return false,
        };
        // Back-substitute to keep the basis reduced.
        for row in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&w);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(pos, pivot);
        self.rows.insert(pos, w);
        true
    }
}

/// GF(2) rank of the code, i.e. the dimension of its linear span.
pub fn rank(code: &BinaryCode) -> usize {
    let mut basis = Gf2Basis::new(code.length());
    for w in code.words() {
        basis.insert(w);
    }
    basis.rank()
}

/// The kernel of a binary code: dimension, a basis, and all members.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub dimension: usize,
    pub basis: Vec<BinaryWord>,
    pub members: Vec<BinaryWord>,
}

/// Computes `{x : x + C = C}` for a code containing the zero word.
///
/// Candidates are restricted to the code itself: `0` is a codeword, so any
/// `x` with `x + C = C` satisfies `x = x + 0` and already lies in `C`. Each
/// candidate is checked by hash membership with early exit; candidates are
/// independent and scanned in parallel. The collected kernel is verified to
/// be a linear subcode before returning.
pub fn kernel(code: &BinaryCode) -> Result<Kernel> {
    if !code.contains_zero() {
        return Err(Error::MissingZeroWord);
    }
    let set: HashSet<&BinaryWord> = code.word_set();
    let members_raw: Vec<BinaryWord> = code
        .words()
        .par_iter()
        .filter(|x| code.words().iter().all(|b| set.contains(&x.xor(b))))
        .cloned()
        .collect();
    let mut members = members_raw;
    members.sort();

    let mut basis = Gf2Basis::new(code.length());
    for w in &members {
        basis.insert(w);
    }
    if members.len() != 1usize << basis.rank() {
        return Err(Error::Integrity(format!(
            "kernel has {} members but GF(2) rank {}; not a linear subcode",
            members.len(),
            basis.rank()
        )));
    }
    Ok(Kernel {
        dimension: basis.rank(),
        basis: basis.rows().to_vec(),
        members,
    })
}

/// True iff the code is linear: `rank = log2 |C|`, cross-checked against
/// `kernel dimension = log2 |C|`. The code must contain zero and have
/// power-of-two size.
pub fn is_linear(code: &BinaryCode) -> Result<bool> {
    if !code.contains_zero() {
        return Err(Error::MissingZeroWord);
    }
    if !code.size().is_power_of_two() {
        return Err(Error::SizeNotPowerOfTwo(code.size()));
    }
    let log2 = code.size().trailing_zeros() as usize;
    let by_rank = rank(code) == log2;
    let by_kernel = kernel(code)?.dimension == log2;
    if by_rank != by_kernel {
        return Err(Error::Integrity(format!(
            "linearity routes disagree: rank says {}, kernel says {}",
            by_rank, by_kernel
        )));
    }
    Ok(by_rank)
}
