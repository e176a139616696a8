//! Expanding a generator matrix into its full additive code, mapping it to
//! binary, and checking the Hadamard and codeword-shape properties.
//!
//! Codes at desk scale (up to a few thousand codewords) are materialized;
//! [`stream_codewords`] walks larger subgroups without holding them, which
//! is what the shape checks use.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::alphabet::{MixedVector, RingVector};
use crate::constructions::{GeneratorMatrix, MixedMatrix, RingMatrix, TypeSignature};
use crate::error::{Error, Result};
use crate::graymap::{gray_mixed, gray_ring, BinaryWord};

/// Row type of a generator matrix: cloneable, orderable, Gray-mappable.
pub trait CodeVector: Clone + Eq + Ord + std::hash::Hash {
    /// In-place componentwise sum; shapes are guaranteed equal by callers.
    fn accumulate(&mut self, other: &Self);
    fn scaled(&self, k: u32) -> Self;
    fn additive_order(&self) -> u32;
    fn gray(&self) -> BinaryWord;
    fn render(&self) -> String;
}

impl CodeVector for MixedVector {
    fn accumulate(&mut self, other: &Self) {
        self.add_assign_unchecked(other);
    }

    fn scaled(&self, k: u32) -> Self {
        self.scalar_mul(u64::from(k))
    }

    fn additive_order(&self) -> u32 {
        self.order()
    }

    fn gray(&self) -> BinaryWord {
        gray_mixed(self)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl CodeVector for RingVector {
    fn accumulate(&mut self, other: &Self) {
        self.add_assign_unchecked(other);
    }

    fn scaled(&self, k: u32) -> Self {
        self.scalar_mul(u64::from(k))
    }

    fn additive_order(&self) -> u32 {
        self.order()
    }

    fn gray(&self) -> BinaryWord {
        gray_ring(self)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// Visits every combination `sum_i k_i * rows[i]` with `k_i` ranging over
/// `0..orders[i]`, exactly once per coefficient tuple. Rows of larger order
/// vary outermost. The visitor receives the sum and the coefficients in row
/// order.
pub fn stream_codewords<V, F>(rows: &[V], orders: &[u32], zero: V, visit: &mut F) -> Result<()>
where
    V: CodeVector,
    F: FnMut(&V, &[u32]) -> Result<()>,
{
    assert_eq!(rows.len(), orders.len());
    let mut iteration: Vec<usize> = (0..rows.len()).collect();
    iteration.sort_by_key(|&i| (std::cmp::Reverse(orders[i]), i));
    let mut coefs = vec![0u32; rows.len()];
    walk(rows, orders, &iteration, 0, &zero, &mut coefs, visit)
}

fn walk<V, F>(
    rows: &[V],
    orders: &[u32],
    iteration: &[usize],
    level: usize,
    sum: &V,
    coefs: &mut Vec<u32>,
    visit: &mut F,
) -> Result<()>
where
    V: CodeVector,
    F: FnMut(&V, &[u32]) -> Result<()>,
{
    if level == iteration.len() {
        return visit(sum, coefs);
    }
    let idx = iteration[level];
    let mut current = sum.clone();
    for k in 0..orders[idx] {
        coefs[idx] = k;
        walk(rows, orders, iteration, level + 1, &current, coefs, visit)?;
        if k + 1 < orders[idx] {
            current.accumulate(&rows[idx]);
        }
    }
    coefs[idx] = 0;
    Ok(())
}

fn generate<V: CodeVector>(rows: &[V], orders: &[u32], zero: V) -> Result<Vec<V>> {
    let expected: u64 = orders.iter().map(|&o| u64::from(o)).product();
    let mut seen: HashMap<V, Vec<u32>> = HashMap::with_capacity(expected as usize);
    let mut words: Vec<V> = Vec::with_capacity(expected as usize);
    stream_codewords(rows, orders, zero, &mut |word, coefs| {
        match seen.entry(word.clone()) {
            Entry::Vacant(slot) => {
                slot.insert(coefs.to_vec());
                words.push(word.clone());
                Ok(())
            }
            Entry::Occupied(first) => Err(Error::Integrity(format!(
                "duplicate codeword {}: coefficients {:?} and {:?}",
                word.render(),
                first.get(),
                coefs
            ))),
        }
    })?;
    if words.len() as u64 != expected {
        return Err(Error::Integrity(format!(
            "enumerated {} codewords, group structure promises {}",
            words.len(),
            expected
        )));
    }
    Ok(words)
}

/// The additive code generated by a mixed matrix.
#[derive(Debug, Clone)]
pub struct MixedCode {
    signature: TypeSignature,
    words: Vec<MixedVector>,
}

/// The additive code generated by a ring matrix.
#[derive(Debug, Clone)]
pub struct RingCode {
    signature: TypeSignature,
    words: Vec<RingVector>,
}

/// Either kind of enumerated additive code.
#[derive(Debug, Clone)]
pub enum AdditiveCode {
    Mixed(MixedCode),
    Ring(RingCode),
}

impl MixedCode {
    pub fn signature(&self) -> &TypeSignature {
        &self.signature
    }

    pub fn words(&self) -> &[MixedVector] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn gray_image(&self) -> Result<BinaryCode> {
        gray_words(&self.signature, &self.words)
    }
}

impl RingCode {
    pub fn signature(&self) -> &TypeSignature {
        &self.signature
    }

    pub fn words(&self) -> &[RingVector] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn gray_image(&self) -> Result<BinaryCode> {
        gray_words(&self.signature, &self.words)
    }
}

impl AdditiveCode {
    pub fn signature(&self) -> &TypeSignature {
        match self {
            AdditiveCode::Mixed(c) => c.signature(),
            AdditiveCode::Ring(c) => c.signature(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AdditiveCode::Mixed(c) => c.len(),
            AdditiveCode::Ring(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn gray_image(&self) -> Result<BinaryCode> {
        match self {
            AdditiveCode::Mixed(c) => c.gray_image(),
            AdditiveCode::Ring(c) => c.gray_image(),
        }
    }
}

fn gray_words<V: CodeVector>(signature: &TypeSignature, words: &[V]) -> Result<BinaryCode> {
    let images: Vec<BinaryWord> = words.iter().map(|w| w.gray()).collect();
    let distinct: HashSet<&BinaryWord> = images.iter().collect();
    if distinct.len() != images.len() {
        return Err(Error::Integrity(format!(
            "Gray image of {} dropped from {} to {} words",
            signature,
            images.len(),
            distinct.len()
        )));
    }
    BinaryCode::new(images)
}

/// Enumerates the code generated by a mixed matrix. The declared row orders
/// are validated first; a duplicate codeword is a construction bug and is
/// reported with both coefficient tuples.
pub fn enumerate_mixed(matrix: &MixedMatrix) -> Result<MixedCode> {
    matrix.validate()?;
    let (a1, a2, a3) = matrix.shape();
    let words = generate(
        matrix.rows(),
        matrix.row_orders(),
        MixedVector::zero(a1, a2, a3),
    )?;
    Ok(MixedCode {
        signature: matrix.signature().clone(),
        words,
    })
}

/// Enumerates the code generated by a ring matrix.
pub fn enumerate_ring(matrix: &RingMatrix) -> Result<RingCode> {
    matrix.validate()?;
    let s = matrix.rows()[0].exponent();
    let words = generate(
        matrix.rows(),
        matrix.row_orders(),
        RingVector::zero(s, matrix.columns())?,
    )?;
    Ok(RingCode {
        signature: matrix.signature().clone(),
        words,
    })
}

pub fn enumerate(matrix: &GeneratorMatrix) -> Result<AdditiveCode> {
    match matrix {
        GeneratorMatrix::Mixed(m) => Ok(AdditiveCode::Mixed(enumerate_mixed(m)?)),
        GeneratorMatrix::Ring(m) => Ok(AdditiveCode::Ring(enumerate_ring(m)?)),
    }
}

/// A set of equal-length binary words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    length: usize,
    words: Vec<BinaryWord>,
}

impl BinaryCode {
    pub fn new(words: Vec<BinaryWord>) -> Result<Self> {
        let length = match words.first() {
            Some(w) => w.len(),
            None => return Err(Error::InvalidParameter("binary code needs words".into())),
        };
        if let Some(w) = words.iter().find(|w| w.len() != length) {
            return Err(Error::InvalidParameter(format!(
                "word lengths differ: {} vs {}",
                length,
                w.len()
            )));
        }
        Ok(BinaryCode { length, words })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[BinaryWord] {
        &self.words
    }

    pub fn word_set(&self) -> HashSet<&BinaryWord> {
        self.words.iter().collect()
    }

    pub fn contains_zero(&self) -> bool {
        self.words.iter().any(|w| w.is_zero())
    }

    /// Minimum Hamming weight over the nonzero words. The code must contain
    /// the zero word (translate first otherwise).
    pub fn min_weight_nonzero(&self) -> Result<usize> {
        if !self.contains_zero() {
            return Err(Error::MissingZeroWord);
        }
        self.words
            .iter()
            .filter(|w| !w.is_zero())
            .map(|w| w.weight())
            .min()
            .ok_or_else(|| Error::InvalidParameter("code has no nonzero word".into()))
    }

    /// Exact minimum distance over all unordered pairs; the independent
    /// oracle for small lengths. Rejects duplicate words.
    pub fn pairwise_min_distance(&self) -> Result<usize> {
        if self.words.len() < 2 {
            return Err(Error::InvalidParameter(
                "pairwise distance needs at least two words".into(),
            ));
        }
        let mut best = usize::MAX;
        for (i, a) in self.words.iter().enumerate() {
            for b in &self.words[i + 1..] {
                let d = a.distance(b);
                if d == 0 {
                    return Err(Error::Integrity(format!(
                        "duplicate word {} (multiset, not a code)",
                        a
                    )));
                }
                best = best.min(d);
            }
        }
        Ok(best)
    }

    /// Translates every word by `shift`.
    pub fn translate(&self, shift: &BinaryWord) -> Result<BinaryCode> {
        if shift.len() != self.length {
            return Err(Error::InvalidParameter(format!(
                "translate length {} vs code length {}",
                shift.len(),
                self.length
            )));
        }
        BinaryCode::new(self.words.iter().map(|w| w.xor(shift)).collect())
    }

    /// Applies a coordinate permutation (bit `i` moves to `perm[i]`).
    pub fn permute(&self, perm: &[usize]) -> Result<BinaryCode> {
        if perm.len() != self.length {
            return Err(Error::InvalidParameter(format!(
                "permutation length {} vs code length {}",
                perm.len(),
                self.length
            )));
        }
        let mut seen = vec![false; self.length];
        for &j in perm {
            if j >= self.length || seen[j] {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            seen[j] = true;
        }
        BinaryCode::new(self.words.iter().map(|w| w.permute(perm)).collect())
    }

    /// Word count per Hamming weight, sparse and sorted by weight.
    pub fn weight_distribution(&self) -> Vec<(usize, u64)> {
        let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
        for w in &self.words {
            *hist.entry(w.weight()).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }

    /// Hadamard check: `2n` distinct codewords and minimum distance `n/2`.
    /// The distance is the minimum weight after translating by the
    /// lexicographically smallest codeword, which equals the minimum
    /// distance for the distance-invariant codes produced here.
    pub fn is_hadamard(&self) -> HadamardCheck {
        let n = self.length;
        let distinct = self.word_set().len();
        let expected_size = 2 * n;
        let size_ok = distinct == expected_size && distinct == self.words.len();
        let expected_distance = n / 2;
        let actual_distance = if n.is_multiple_of(2) && self.words.len() >= 2 {
            let base = self.words.iter().min().expect("nonempty");
            self.translate(base)
                .ok()
                .and_then(|t| t.min_weight_nonzero().ok())
        } else {
            None
        };
        let distance_ok = n.is_multiple_of(2) && actual_distance == Some(expected_distance);
        HadamardCheck {
            ok: size_ok && distance_ok,
            size_ok,
            expected_size,
            actual_size: distinct,
            distance_ok,
            expected_distance,
            actual_distance,
        }
    }

    /// Header line `n=<length> size=<count>`, then one '0'/'1' string per
    /// line, sorted lexicographically.
    pub fn dump(&self) -> String {
        let mut sorted = self.words.clone();
        sorted.sort();
        let mut out = format!("n={} size={}\n", self.length, self.words.len());
        for w in &sorted {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty codeword dump".into()))?;
        let mut n: Option<usize> = None;
        let mut size: Option<usize> = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("n", v)) => {
                    n = Some(v.parse().map_err(|_| Error::Parse("bad n".into()))?)
                }
                Some(("size", v)) => {
                    size = Some(v.parse().map_err(|_| Error::Parse("bad size".into()))?)
                }
                _ => return Err(Error::Parse(format!("bad header field {:?}", field))),
            }
        }
        let (n, size) = match (n, size) {
            (Some(n), Some(size)) => (n, size),
            _ => return Err(Error::Parse("dump header needs n= and size=".into())),
        };
        let words: Vec<BinaryWord> = lines.map(|l| l.trim().parse()).collect::<Result<_>>()?;
        if words.len() != size {
            return Err(Error::Parse(format!(
                "dump header promises {} words, found {}",
                size,
                words.len()
            )));
        }
        let code = BinaryCode::new(words)?;
        if code.length() != n {
            return Err(Error::Parse(format!(
                "dump header promises length {}, words have {}",
                n,
                code.length()
            )));
        }
        Ok(code)
    }
}

/// Outcome of the Hadamard check, naming the violated clause if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardCheck {
    pub ok: bool,
    pub size_ok: bool,
    pub expected_size: usize,
    pub actual_size: usize,
    pub distance_ok: bool,
    pub expected_distance: usize,
    pub actual_distance: Option<usize>,
}

impl fmt::Display for HadamardCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(
                f,
                "hadamard: size {} = 2n, distance {} = n/2",
                self.actual_size, self.expected_distance
            );
        }
        write!(f, "not hadamard:")?;
        if !self.size_ok {
            write!(
                f,
                " size clause (expected {}, got {})",
                self.expected_size, self.actual_size
            )?;
        }
        if !self.distance_ok {
            write!(
                f,
                " distance clause (expected {}, got {:?})",
                self.expected_distance, self.actual_distance
            )?;
        }
        Ok(())
    }
}

/// One shape violation: the codeword, its order, and the failed clause.
#[derive(Debug, Clone)]
pub struct ShapeViolation {
    pub word: String,
    pub order: u32,
    pub clause: String,
}

/// Result of the codeword-shape check over a subgroup.
#[derive(Debug, Clone, Default)]
pub struct ShapeReport {
    pub checked: u64,
    pub by_order: BTreeMap<u32, u64>,
    pub violations: Vec<ShapeViolation>,
    pub total_violations: u64,
}

impl ShapeReport {
    pub fn passed(&self) -> bool {
        self.total_violations == 0
    }
}

const MAX_REPORTED_VIOLATIONS: usize = 20;

fn counts(block: &[u8], modulus: usize) -> Vec<u64> {
    let mut c = vec![0u64; modulus];
    for &d in block {
        c[d as usize] += 1;
    }
    c
}

/// Per-order residue-count checks for codewords of the subgroup generated
/// without the all-(1|2|4) row of an `A^{t1,t2,1}` matrix.
///
/// The testable content per order, with `(a1, a2, a3)` the block widths:
///
/// * order 8: `Z2` balanced; `Z4` has `#0 = #2`; `Z8` has equal counts on
///   `{0,2,4,6}` and the sorted odd counts look like `(r,r,r,r+m)` or
///   `(r,r,r+m,r+m)`.
/// * order 4: either (`Z2` zero, `Z4` counts pinned to
///   `#2 = (a1/2 + a2)/2`, `Z8` supported on even residues with `#0 = #4`)
///   or (`Z2` balanced, `Z4` has `#0 = #2`, `Z8` even with `#0 = #4` and
///   `#2 = #6`).
/// * order 2: either (`Z2`, `Z4` zero and `Z8` supported on `{0,4}` with
///   `#4 = (a1/2 + a2 + 2a3)/4`) or (`Z2` zero, `Z4` counts pinned as
///   above, `Z8` supported on `{0,4}` with `#0 = #4`).
pub fn verify_shape_properties(matrix: &MixedMatrix) -> Result<ShapeReport> {
    if !matches!(matrix.signature(), TypeSignature::Z2Z4Z8 { t3: 1, .. }) {
        return Err(Error::InvalidParameter(format!(
            "shape properties are stated for z2z4z8 matrices with t3 = 1, got {}",
            matrix.signature()
        )));
    }
    matrix.validate()?;
    let (a1, a2, a3) = matrix.shape();
    let rows = &matrix.rows()[1..];
    let orders = &matrix.row_orders()[1..];

    // Pinned counts; exact integers since a1 = 2^(t1+t2) is even and the
    // combinations below are the widths of whole residue classes.
    let q_twos = (a1 as u64 / 2 + a2 as u64) / 2;
    let o_fours = (a1 as u64 / 2 + a2 as u64 + 2 * a3 as u64) / 4;

    let mut report = ShapeReport::default();
    let record = |report: &mut ShapeReport, word: &MixedVector, order: u32, clause: &str| {
        report.total_violations += 1;
        if report.violations.len() < MAX_REPORTED_VIOLATIONS {
            report.violations.push(ShapeViolation {
                word: word.to_string(),
                order,
                clause: clause.to_string(),
            });
        }
    };

    stream_codewords(
        rows,
        orders,
        MixedVector::zero(a1, a2, a3),
        &mut |word, _| {
            report.checked += 1;
            let order = word.order();
            *report.by_order.entry(order).or_insert(0) += 1;
            let b = counts(word.z2_block(), 2);
            let q = counts(word.z4_block(), 4);
            let o = counts(word.z8_block(), 8);
            let o_odd_zero = o[1] + o[3] + o[5] + o[7] == 0;
            let fits = match order {
                1 => true,
                8 => {
                    // Odd residues carry one or two distinguished values on
                    // top of a flat class: sorted counts are (r,r,r,r+m) or
                    // (r,r,r+m,r+m).
                    let mut odd = [o[1], o[3], o[5], o[7]];
                    odd.sort_unstable();
                    let odd_ok = odd[0] == odd[1] && (odd[2] == odd[3] || odd[2] == odd[1]);
                    b[0] == b[1]
                        && q[0] == q[2]
                        && o[0] == o[2]
                        && o[0] == o[4]
                        && o[0] == o[6]
                        && odd_ok
                }
                4 => {
                    let clause_a = b[1] == 0
                        && q[1] == 0
                        && q[3] == 0
                        && q[2] == q_twos
                        && o_odd_zero
                        && o[0] == o[4];
                    let clause_b = b[0] == b[1]
                        && q[0] == q[2]
                        && o_odd_zero
                        && o[0] == o[4]
                        && o[2] == o[6];
                    clause_a || clause_b
                }
                2 => {
                    let clause_a = b[1] == 0
                        && q[1] + q[2] + q[3] == 0
                        && o_odd_zero
                        && o[2] == 0
                        && o[6] == 0
                        && o[4] == o_fours;
                    let clause_b = b[1] == 0
                        && q[1] == 0
                        && q[3] == 0
                        && q[2] == q_twos
                        && o_odd_zero
                        && o[2] == 0
                        && o[6] == 0
                        && o[0] == o[4];
                    clause_a || clause_b
                }
                _ => false,
            };
            if !fits {
                record(&mut report, word, order, &format!("order-{} clause", order));
            }
            Ok(())
        },
    )?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{base_matrix_248, build_248, build_z2s, build_z2z4};

    #[test]
    fn enumerate_seed_code() {
        let code = enumerate_mixed(&base_matrix_248()).unwrap();
        assert_eq!(code.len(), 16);
        let image = code.gray_image().unwrap();
        assert_eq!(image.length(), 8);
        assert_eq!(image.size(), 16);
        assert!(image.is_hadamard().ok);
    }

    #[test]
    fn seed_gray_image_is_the_order_eight_hadamard_matrix_and_complements() {
        let rows = [
            "00000000", "01010101", "00110011", "01100110", "00001111", "01011010", "00111100",
            "01101001",
        ];
        let mut expected: Vec<BinaryWord> = rows.iter().map(|s| s.parse().unwrap()).collect();
        let ones = BinaryWord::ones(8);
        let complements: Vec<BinaryWord> = expected.iter().map(|w| w.xor(&ones)).collect();
        expected.extend(complements);
        expected.sort();

        let image = enumerate_mixed(&base_matrix_248()).unwrap().gray_image().unwrap();
        let mut got = image.words().to_vec();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(image.min_weight_nonzero().unwrap(), 4);
        assert_eq!(image.pairwise_min_distance().unwrap(), 4);
    }

    #[test]
    fn enumerate_sizes() {
        let code = enumerate_mixed(&build_248(1, 1, 1).unwrap()).unwrap();
        assert_eq!(code.len(), 64);
        let code = enumerate_ring(&build_z2s(2, &[2, 0]).unwrap()).unwrap();
        assert_eq!(code.len(), 16);
        let code = enumerate_mixed(&build_z2z4(2, 1).unwrap()).unwrap();
        assert_eq!(code.len(), 32);
    }

    #[test]
    fn gray_image_lengths_and_min_weight_match_pairwise_oracle() {
        let image = enumerate_mixed(&build_248(1, 1, 1).unwrap())
            .unwrap()
            .gray_image()
            .unwrap();
        assert_eq!(image.length(), 32);
        assert_eq!(image.size(), 64);
        assert_eq!(image.min_weight_nonzero().unwrap(), 16);
        assert_eq!(image.pairwise_min_distance().unwrap(), 16);
        assert!(image.is_hadamard().ok);
    }

    #[test]
    fn weights_take_only_three_values() {
        for (t1, t2, t3) in [(1, 0, 1), (1, 1, 1), (1, 0, 3), (2, 0, 1), (1, 1, 2)] {
            let image = enumerate_mixed(&build_248(t1, t2, t3).unwrap())
                .unwrap()
                .gray_image()
                .unwrap();
            let n = image.length();
            for (w, _) in image.weight_distribution() {
                assert!(
                    w == 0 || w == n / 2 || w == n,
                    "({},{},{}) weight {}",
                    t1,
                    t2,
                    t3,
                    w
                );
            }
            assert!(image.words().iter().any(|w| w.is_zero()));
            assert!(image.words().iter().any(|w| w.weight() == n));
        }
    }

    #[test]
    fn hadamard_check_rejects_degenerate_sets() {
        // The full space Z2^4: wrong size and wrong distance.
        let all: Vec<BinaryWord> = (0..16u32)
            .map(|v| {
                BinaryWord::from_bits(&[
                    (v & 1) as u8,
                    ((v >> 1) & 1) as u8,
                    ((v >> 2) & 1) as u8,
                    ((v >> 3) & 1) as u8,
                ])
                .unwrap()
            })
            .collect();
        let check = BinaryCode::new(all).unwrap().is_hadamard();
        assert!(!check.ok);
        assert!(!check.size_ok);
        assert!(!check.distance_ok);

        // Dropping one word from a Hadamard code breaks the size clause.
        let image = enumerate_mixed(&base_matrix_248()).unwrap().gray_image().unwrap();
        let mut words = image.words().to_vec();
        words.pop();
        let check = BinaryCode::new(words).unwrap().is_hadamard();
        assert!(!check.ok);
        assert!(!check.size_ok);
    }

    #[test]
    fn pairwise_rejects_duplicates() {
        let w: BinaryWord = "0101".parse().unwrap();
        let code = BinaryCode::new(vec![w.clone(), w]).unwrap();
        assert!(matches!(
            code.pairwise_min_distance(),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn min_weight_requires_zero() {
        let code = BinaryCode::new(vec!["0101".parse().unwrap()]).unwrap();
        assert!(matches!(
            code.min_weight_nonzero(),
            Err(Error::MissingZeroWord)
        ));
        let code =
            BinaryCode::new(vec!["00000000".parse().unwrap(), "11111111".parse().unwrap()])
                .unwrap();
        assert_eq!(code.min_weight_nonzero().unwrap(), 8);
    }

    #[test]
    fn dump_roundtrip_is_sorted() {
        let image = enumerate_mixed(&base_matrix_248()).unwrap().gray_image().unwrap();
        let text = image.dump();
        assert!(text.starts_with("n=8 size=16\n"));
        let lines: Vec<&str> = text.lines().skip(1).collect();
        let mut sorted = lines.clone();
        sorted.sort_unstable();
        assert_eq!(lines, sorted);
        let parsed = BinaryCode::parse_dump(&text).unwrap();
        assert_eq!(parsed.word_set(), image.word_set());
    }

    #[test]
    fn shape_properties_hold_for_seed_subgroup() {
        let report = verify_shape_properties(&base_matrix_248()).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert_eq!(report.checked, 8);
        // The unique order-2 subgroup word (00|0|4) pins the order-2 clause.
        assert_eq!(report.by_order.get(&2), Some(&1));
        assert_eq!(report.by_order.get(&8), Some(&4));
    }

    #[test]
    fn shape_properties_hold_exhaustively_for_small_types() {
        for (t1, t2) in [(1, 1), (2, 0), (2, 1), (1, 2)] {
            let report = verify_shape_properties(&build_248(t1, t2, 1).unwrap()).unwrap();
            assert!(
                report.passed(),
                "({},{},1): {:?}",
                t1,
                t2,
                report.violations
            );
            assert_eq!(report.checked, 8u64.pow(t1) * 4u64.pow(t2));
        }
        assert!(verify_shape_properties(&build_248(1, 0, 2).unwrap()).is_err());
    }

    #[test]
    fn enumerated_codes_are_closed_under_the_group_operations() {
        // Exhaustive on the seed code, sampled on a larger one.
        let code = enumerate_mixed(&base_matrix_248()).unwrap();
        let set: std::collections::HashSet<_> = code.words().iter().cloned().collect();
        for a in code.words() {
            for b in code.words() {
                assert!(set.contains(&a.add(b).unwrap()));
            }
            for k in 0..8 {
                assert!(set.contains(&a.scalar_mul(k)));
            }
        }

        let code = enumerate_mixed(&build_248(2, 1, 1).unwrap()).unwrap();
        let set: std::collections::HashSet<_> = code.words().iter().cloned().collect();
        let words = code.words();
        for i in (0..words.len()).step_by(37) {
            for j in (0..words.len()).step_by(41) {
                assert!(set.contains(&words[i].add(&words[j]).unwrap()));
            }
        }
    }

    #[test]
    fn permute_preserves_weights() {
        let image = enumerate_mixed(&base_matrix_248()).unwrap().gray_image().unwrap();
        let n = image.length();
        let perm: Vec<usize> = (0..n).map(|i| (i + 3) % n).collect();
        let permuted = image.permute(&perm).unwrap();
        assert_eq!(permuted.weight_distribution(), image.weight_distribution());
        assert!(image.permute(&vec![0; n]).is_err());
    }
}
