//! Invariant profiles, classification tables, and permutation-equivalence
//! decisions for binary codes.
//!
//! Equivalence here means coordinate permutation equivalence. Profiles
//! collect permutation-invariant data only, so a profile mismatch certifies
//! nonequivalence; the converse direction needs a witness, found (when
//! feasible) by partition refinement on coordinates followed by
//! individualize-and-refine backtracking.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::binlinear::{kernel, Gf2Basis};
use crate::codeset::{enumerate, BinaryCode};
use crate::constructions::{enumerate_types, Family, GeneratorMatrix, TypeSignature};
use crate::error::{Error, Result};
use crate::graymap::BinaryWord;

/// Default node budget for the backtracking search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Longest code the combined comparison will hand to the search; beyond
/// this, agreement of all invariants is reported as inconclusive.
pub const SEARCH_LENGTH_LIMIT: usize = 256;

/// Knobs for profile computation.
#[derive(Debug, Clone)]
pub struct ProfileConfig {
    /// Span weight distributions are computed only when the rank is at most
    /// this bound (the span has `2^rank` elements).
    pub span_rank_bound: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig { span_rank_bound: 24 }
    }
}

/// Permutation-invariant fingerprint of a binary code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    pub length: usize,
    pub size: usize,
    pub min_distance: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub weight_distribution: Vec<(usize, u64)>,
    /// Weight distribution of the linear span, when `rank` is within the
    /// configured bound.
    pub span_weight_distribution: Option<Vec<(usize, u64)>>,
    /// Sorted multiset of `rank(K u (K + v))` over the kernel cosets of the
    /// code.
    pub kernel_coset_ranks: Vec<usize>,
}

impl InvariantProfile {
    pub fn is_linear(&self) -> bool {
        self.size.is_power_of_two() && self.rank == self.size.trailing_zeros() as usize
    }

    pub fn rank_kernel(&self) -> (usize, usize) {
        (self.rank, self.kernel_dim)
    }
}

fn sparse_histogram(hist: &[u64]) -> Vec<(usize, u64)> {
    hist.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| (w, c))
        .collect()
}

fn span_weight_distribution(basis: &Gf2Basis, length: usize) -> Vec<(usize, u64)> {
    let rows = basis.rows();
    let mut hist = vec![0u64; length + 1];
    let mut current = BinaryWord::zero(length);
    hist[0] += 1;
    // Subset-Gray order: step i toggles one basis row.
    for i in 1..(1u64 << rows.len()) {
        current.xor_assign(&rows[i.trailing_zeros() as usize]);
        hist[current.weight()] += 1;
    }
    sparse_histogram(&hist)
}

/// Computes the full invariant profile of a code containing the zero word.
pub fn profile(code: &BinaryCode, config: &ProfileConfig) -> Result<InvariantProfile> {
    if !code.contains_zero() {
        return Err(Error::MissingZeroWord);
    }
    let min_distance = code.min_weight_nonzero()?;
    let weight_distribution = code.weight_distribution();

    let mut basis = Gf2Basis::new(code.length());
    for w in code.words() {
        basis.insert(w);
    }
    let rank = basis.rank();
    let kernel = kernel(code)?;

    let span = if rank <= config.span_rank_bound {
        Some(span_weight_distribution(&basis, code.length()))
    } else {
        None
    };

    // Kernel coset decomposition: each proper coset contributes
    // rank(K u (K + v)) = kernel_dim + 1, the trivial coset kernel_dim; the
    // multiset is recorded as computed, not assumed.
    let mut kernel_basis = Gf2Basis::new(code.length());
    for w in &kernel.basis {
        kernel_basis.insert(w);
    }
    let mut assigned: std::collections::HashSet<BinaryWord> = Default::default();
    let mut coset_ranks = Vec::new();
    let mut sorted = code.words().to_vec();
    sorted.sort();
    for w in &sorted {
        if assigned.contains(w) {
            continue;
        }
        for k in &kernel.members {
            assigned.insert(w.xor(k));
        }
        let mut union_basis = kernel_basis.clone();
        union_basis.insert(w);
        coset_ranks.push(union_basis.rank());
    }
    coset_ranks.sort_unstable();
    if coset_ranks.len() * kernel.members.len() != code.size() {
        return Err(Error::Integrity(format!(
            "kernel coset decomposition covers {} words, code has {}",
            coset_ranks.len() * kernel.members.len(),
            code.size()
        )));
    }

    Ok(InvariantProfile {
        length: code.length(),
        size: code.size(),
        min_distance,
        rank,
        kernel_dim: kernel.dimension,
        weight_distribution,
        span_weight_distribution: span,
        kernel_coset_ranks: coset_ranks,
    })
}

/// Closed-form rank and kernel dimension of the nonlinear `Z2 x Z4` family:
/// `rank = t2 + 2 t1 + t1 (t1 - 1) / 2`, `kernel = t1 + t2`. Valid for the
/// nonlinear members, i.e. `t1 >= 2`.
pub fn z2z4_rank_kernel(t1: u32, t2: u32) -> Result<(usize, usize)> {
    TypeSignature::Z2Z4 { t1, t2 }.validate()?;
    if t1 < 2 {
        return Err(Error::InvalidParameter(format!(
            "closed form covers the nonlinear codes (t1 >= 2), got t1 = {}",
            t1
        )));
    }
    let rank = t2 + 2 * t1 + t1 * (t1 - 1) / 2;
    Ok((rank as usize, (t1 + t2) as usize))
}

/// Verdict of the profile comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distinction {
    /// The named invariant differs; the codes are not equivalent.
    Distinct(String),
    /// Every compared invariant agrees; nothing is claimed.
    Inconclusive,
}

/// Compares permutation-invariant fields; never claims equivalence.
/// Length or size mismatches are reported as (flagged) trivial distinctions.
pub fn invariant_distinct(p: &InvariantProfile, q: &InvariantProfile) -> Distinction {
    if p.length != q.length {
        return Distinction::Distinct(format!(
            "length {} vs {} (incomparable sets)",
            p.length, q.length
        ));
    }
    if p.size != q.size {
        return Distinction::Distinct(format!("size {} vs {}", p.size, q.size));
    }
    if p.min_distance != q.min_distance {
        return Distinction::Distinct(format!(
            "minimum distance {} vs {}",
            p.min_distance, q.min_distance
        ));
    }
    if p.rank != q.rank {
        return Distinction::Distinct(format!("rank {} vs {}", p.rank, q.rank));
    }
    if p.kernel_dim != q.kernel_dim {
        return Distinction::Distinct(format!(
            "kernel dimension {} vs {}",
            p.kernel_dim, q.kernel_dim
        ));
    }
    if p.weight_distribution != q.weight_distribution {
        return Distinction::Distinct("weight distribution".into());
    }
    if let (Some(a), Some(b)) = (&p.span_weight_distribution, &q.span_weight_distribution) {
        if a != b {
            return Distinction::Distinct("span weight distribution".into());
        }
    }
    if p.kernel_coset_ranks != q.kernel_coset_ranks {
        return Distinction::Distinct("kernel coset rank multiset".into());
    }
    Distinction::Inconclusive
}

/// Outcome of the permutation-equivalence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    /// A verified witness: bit `i` of code 1 maps to bit `witness[i]` of
    /// code 2.
    Equivalent(Vec<usize>),
    /// Proven nonequivalent (invariant mismatch or exhausted search).
    NotEquivalent(String),
    /// Node budget exhausted before a decision.
    Inconclusive(String),
}

enum SearchOutcome {
    Found(Vec<usize>),
    NoWitness,
    Budget,
}

/// Aligned ordered partitions (one side per code) of one index set.
type Cells = Vec<(Vec<usize>, Vec<usize>)>;

/// Aligned refinement state: coordinate cells and codeword cells. Pairwise
/// coincidence counts alone cannot split the coordinates of a Hadamard code
/// (distinct columns meet in exactly `n/2` words by orthogonality), so the
/// refinement runs on the word-coordinate incidence structure: coordinate
/// cells split by incidence counts against word cells and vice versa, to a
/// fixpoint. Individualizing one coordinate then splits the words on that
/// bit, which is what makes subsequent rounds discriminating.
#[derive(Clone)]
struct State {
    coord_cells: Cells,
    word_cells: Cells,
}

struct Search<'a> {
    words1: &'a [BinaryWord],
    words2: &'a [BinaryWord],
    sorted2: Vec<BinaryWord>,
    n: usize,
    budget: u64,
    nodes: u64,
}

/// Splits the cells of `side` by the grouping keys; both sides must split
/// into the same ordered (key, size) sequence or the state is inconsistent.
fn split_cells(
    cells: &mut Cells,
    key1: impl Fn(usize) -> Vec<u64>,
    key2: impl Fn(usize) -> Vec<u64>,
) -> Option<bool> {
    let mut changed = false;
    let mut ci = 0;
    while ci < cells.len() {
        if cells[ci].0.len() <= 1 {
            ci += 1;
            continue;
        }
        let mut groups1: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
        for &x in &cells[ci].0 {
            groups1.entry(key1(x)).or_default().push(x);
        }
        let mut groups2: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
        for &x in &cells[ci].1 {
            groups2.entry(key2(x)).or_default().push(x);
        }
        if groups1.len() != groups2.len()
            || groups1
                .iter()
                .zip(&groups2)
                .any(|((ka, va), (kb, vb))| ka != kb || va.len() != vb.len())
        {
            return None;
        }
        if groups1.len() > 1 {
            let replacement: Vec<(Vec<usize>, Vec<usize>)> =
                groups1.into_values().zip(groups2.into_values()).collect();
            let added = replacement.len();
            cells.splice(ci..=ci, replacement);
            changed = true;
            ci += added;
        } else {
            ci += 1;
        }
    }
    Some(changed)
}

fn coord_key(words: &[BinaryWord], word_cells: &Cells, side: usize, j: usize) -> Vec<u64> {
    word_cells
        .iter()
        .map(|cell| {
            let members = if side == 0 { &cell.0 } else { &cell.1 };
            members.iter().filter(|&&w| words[w].get(j)).count() as u64
        })
        .collect()
}

fn word_key(words: &[BinaryWord], coord_cells: &Cells, side: usize, w: usize) -> Vec<u64> {
    coord_cells
        .iter()
        .map(|cell| {
            let members = if side == 0 { &cell.0 } else { &cell.1 };
            members.iter().filter(|&&j| words[w].get(j)).count() as u64
        })
        .collect()
}

impl<'a> Search<'a> {
    /// Alternates coordinate and word splits until stable; `None` prunes.
    fn refine(&self, state: &mut State) -> Option<()> {
        loop {
            let coord_changed = {
                let wc = std::mem::take(&mut state.word_cells);
                let changed = split_cells(
                    &mut state.coord_cells,
                    |j| coord_key(self.words1, &wc, 0, j),
                    |j| coord_key(self.words2, &wc, 1, j),
                );
                state.word_cells = wc;
                changed?
            };
            let word_changed = {
                let cc = std::mem::take(&mut state.coord_cells);
                let changed = split_cells(
                    &mut state.word_cells,
                    |w| word_key(self.words1, &cc, 0, w),
                    |w| word_key(self.words2, &cc, 1, w),
                );
                state.coord_cells = cc;
                changed?
            };
            if !coord_changed && !word_changed {
                return Some(());
            }
        }
    }

    fn search(&mut self, mut state: State) -> SearchOutcome {
        self.nodes += 1;
        if self.nodes > self.budget {
            return SearchOutcome::Budget;
        }
        if self.refine(&mut state).is_none() {
            return SearchOutcome::NoWitness;
        }
        // Smallest non-singleton coordinate cell, lowest index on ties.
        let target = state
            .coord_cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0.len() > 1)
            .min_by_key(|(i, c)| (c.0.len(), *i))
            .map(|(i, _)| i);
        let ci = match target {
            Some(ci) => ci,
            None => {
                let mut perm = vec![0usize; self.n];
                for (a, b) in &state.coord_cells {
                    perm[a[0]] = b[0];
                }
                return if self.verify(&perm) {
                    SearchOutcome::Found(perm)
                } else {
                    SearchOutcome::NoWitness
                };
            }
        };
        let a = state.coord_cells[ci].0[0];
        let rest_a: Vec<usize> = state.coord_cells[ci].0[1..].to_vec();
        let candidates = state.coord_cells[ci].1.clone();
        for &b in &candidates {
            let rest_b: Vec<usize> = candidates.iter().copied().filter(|&x| x != b).collect();
            let mut child = state.clone();
            child
                .coord_cells
                .splice(ci..=ci, [(vec![a], vec![b]), (rest_a.clone(), rest_b)]);
            match self.search(child) {
                SearchOutcome::Found(p) => return SearchOutcome::Found(p),
                SearchOutcome::Budget => return SearchOutcome::Budget,
                SearchOutcome::NoWitness => {}
            }
        }
        SearchOutcome::NoWitness
    }

    fn verify(&self, perm: &[usize]) -> bool {
        let mut image: Vec<BinaryWord> = self.words1.iter().map(|w| w.permute(perm)).collect();
        image.sort();
        image == self.sorted2
    }
}

/// Decides permutation equivalence of two same-length, same-size codes.
///
/// Cheap invariants run first (weight distribution, rank, kernel); if they
/// agree, coordinates are partitioned by weight-class incidence signatures,
/// refined to a fixpoint with pairwise coincidence counts, and completed by
/// backtracking. `Equivalent` always carries a witness that has been
/// re-applied and checked; `NotEquivalent` means the search space was
/// exhausted. Practical for lengths up to a few hundred.
pub fn equivalence_search(
    b1: &BinaryCode,
    b2: &BinaryCode,
    budget: u64,
) -> Result<EquivalenceVerdict> {
    if b1.length() != b2.length() {
        return Err(Error::InvalidParameter(format!(
            "codes have different lengths: {} vs {}",
            b1.length(),
            b2.length()
        )));
    }
    if b1.size() != b2.size() {
        return Err(Error::InvalidParameter(format!(
            "codes have different sizes: {} vs {}",
            b1.size(),
            b2.size()
        )));
    }

    let mut sorted1 = b1.words().to_vec();
    sorted1.sort();
    let mut sorted2 = b2.words().to_vec();
    sorted2.sort();
    if sorted1 == sorted2 {
        return Ok(EquivalenceVerdict::Equivalent((0..b1.length()).collect()));
    }

    if b1.weight_distribution() != b2.weight_distribution() {
        return Ok(EquivalenceVerdict::NotEquivalent(
            "weight distributions differ".into(),
        ));
    }
    let r1 = crate::binlinear::rank(b1);
    let r2 = crate::binlinear::rank(b2);
    if r1 != r2 {
        return Ok(EquivalenceVerdict::NotEquivalent(format!(
            "ranks differ: {} vs {}",
            r1, r2
        )));
    }
    if b1.contains_zero() && b2.contains_zero() {
        let k1 = kernel(b1)?.dimension;
        let k2 = kernel(b2)?.dimension;
        if k1 != k2 {
            return Ok(EquivalenceVerdict::NotEquivalent(format!(
                "kernel dimensions differ: {} vs {}",
                k1, k2
            )));
        }
    }

    // Initial aligned partition: words grouped by weight, coordinates in
    // one cell; the first refinement round splits coordinates by their
    // weight-class incidence counts.
    let mut weight_groups1: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, w) in b1.words().iter().enumerate() {
        weight_groups1.entry(w.weight()).or_default().push(i);
    }
    let mut weight_groups2: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, w) in b2.words().iter().enumerate() {
        weight_groups2.entry(w.weight()).or_default().push(i);
    }
    // Weight distributions already matched above.
    let word_cells: Cells = weight_groups1
        .into_values()
        .zip(weight_groups2.into_values())
        .collect();
    let state = State {
        coord_cells: vec![(
            (0..b1.length()).collect(),
            (0..b2.length()).collect(),
        )],
        word_cells,
    };

    let mut search = Search {
        words1: b1.words(),
        words2: b2.words(),
        sorted2,
        n: b1.length(),
        budget,
        nodes: 0,
    };
    match search.search(state) {
        SearchOutcome::Found(perm) => Ok(EquivalenceVerdict::Equivalent(perm)),
        SearchOutcome::NoWitness => Ok(EquivalenceVerdict::NotEquivalent(format!(
            "search exhausted after {} nodes",
            search.nodes
        ))),
        SearchOutcome::Budget => Ok(EquivalenceVerdict::Inconclusive(format!(
            "node budget {} exhausted",
            budget
        ))),
    }
}

/// Combined comparison verdict for two codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComparisonOutcome {
    Distinct(String),
    Equivalent(Vec<usize>),
    Inconclusive(String),
}

/// Profile comparison first, then the witness search when the length is
/// within [`SEARCH_LENGTH_LIMIT`]. Never claims equivalence without a
/// verified witness.
pub fn compare_codes(b1: &BinaryCode, b2: &BinaryCode, budget: u64) -> Result<ComparisonOutcome> {
    if b1.length() != b2.length() {
        return Ok(ComparisonOutcome::Distinct(format!(
            "length {} vs {}: trivially nonequivalent",
            b1.length(),
            b2.length()
        )));
    }
    if b1.size() != b2.size() {
        return Ok(ComparisonOutcome::Distinct(format!(
            "size {} vs {}: trivially nonequivalent",
            b1.size(),
            b2.size()
        )));
    }
    let config = ProfileConfig::default();
    let p = profile(b1, &config)?;
    let q = profile(b2, &config)?;
    if let Distinction::Distinct(field) = invariant_distinct(&p, &q) {
        return Ok(ComparisonOutcome::Distinct(field));
    }
    if b1.length() > SEARCH_LENGTH_LIMIT {
        return Ok(ComparisonOutcome::Inconclusive(format!(
            "all invariants agree; length {} is beyond the search scale {}",
            b1.length(),
            SEARCH_LENGTH_LIMIT
        )));
    }
    match equivalence_search(b1, b2, budget)? {
        EquivalenceVerdict::Equivalent(w) => Ok(ComparisonOutcome::Equivalent(w)),
        EquivalenceVerdict::NotEquivalent(reason) => Ok(ComparisonOutcome::Distinct(reason)),
        EquivalenceVerdict::Inconclusive(reason) => Ok(ComparisonOutcome::Inconclusive(reason)),
    }
}

/// One classified code.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub signature: TypeSignature,
    pub profile: InvariantProfile,
    pub linear: bool,
    pub hadamard: bool,
    pub notes: Vec<String>,
}

/// Profiles of every admissible type at binary length `2^t`, all families.
#[derive(Debug, Clone)]
pub struct ClassificationTable {
    pub t: u32,
    pub rows: Vec<TableRow>,
}

/// Builds, enumerates, and profiles every admissible type of length `2^t`
/// across the three families (`Z2 x Z4 x Z8`, `Z2 x Z4`, and `Z_{2^s}` for
/// every `s` with solutions). Rows sharing `(rank, kernel)` carry notes
/// saying whether refined invariants separate them. Supported for
/// `3 <= t <= 11`.
pub fn classification_table(t: u32, config: &ProfileConfig) -> Result<ClassificationTable> {
    if !(3..=11).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "classification table supports 3 <= t <= 11, got {}",
            t
        )));
    }
    let mut signatures: Vec<TypeSignature> = Vec::new();
    signatures.extend(enumerate_types(t, Family::Z2Z4Z8)?);
    signatures.extend(enumerate_types(t, Family::Z2Z4)?);
    for s in 2..=t + 1 {
        signatures.extend(enumerate_types(t, Family::Z2s(s))?);
    }

    let mut rows: Vec<TableRow> = signatures
        .into_par_iter()
        .map(|sig| -> Result<TableRow> {
            let matrix = GeneratorMatrix::build(&sig)?;
            let image = enumerate(&matrix)?.gray_image()?;
            let check = image.is_hadamard();
            let prof = profile(&image, config)?;
            let linear = prof.is_linear();
            Ok(TableRow {
                signature: sig,
                profile: prof,
                linear,
                hadamard: check.ok,
                notes: Vec::new(),
            })
        })
        .collect::<Result<_>>()?;

    // Annotate (rank, kernel) collisions with the refined-invariant verdict.
    let mut by_rk: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        by_rk.entry(row.profile.rank_kernel()).or_default().push(i);
    }
    for indices in by_rk.values() {
        if indices.len() < 2 {
            continue;
        }
        for &i in indices {
            for &j in indices {
                if i == j {
                    continue;
                }
                let note = match invariant_distinct(&rows[i].profile, &rows[j].profile) {
                    Distinction::Distinct(field) => {
                        format!("vs {}: distinct ({})", rows[j].signature, field)
                    }
                    Distinction::Inconclusive => {
                        format!("vs {}: inconclusive", rows[j].signature)
                    }
                };
                rows[i].notes.push(note);
            }
        }
    }
    Ok(ClassificationTable { t, rows })
}

impl ClassificationTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,exponents,n,size,d,rank,kernel,linear,hadamard,notes\n");
        for row in &self.rows {
            let exps = row
                .signature
                .exponents()
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "{},\"{}\",{},{},{},{},{},{},{},\"{}\"\n",
                row.signature.family(),
                exps,
                row.profile.length,
                row.profile.size,
                row.profile.min_distance,
                row.profile.rank,
                row.profile.kernel_dim,
                row.linear,
                row.hadamard,
                row.notes.join("; ")
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("classification at t = {} (length 2^{})\n", self.t, self.t);
        out.push_str(&format!(
            "{:<14} {:<12} {:>8} {:>6} {:>6} {:>5} {:>7} {:>7} {:>9}  notes\n",
            "family", "exponents", "n", "size", "d", "rank", "kernel", "linear", "hadamard"
        ));
        for row in &self.rows {
            let exps = row
                .signature
                .exponents()
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "{:<14} {:<12} {:>8} {:>6} {:>6} {:>5} {:>7} {:>7} {:>9}  {}\n",
                row.signature.family().to_string(),
                exps,
                row.profile.length,
                row.profile.size,
                row.profile.min_distance,
                row.profile.rank,
                row.profile.kernel_dim,
                row.linear,
                row.hadamard,
                row.notes.join("; ")
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codeset::{enumerate_mixed, enumerate_ring};
    use crate::constructions::{base_matrix_248, build_248, build_z2s};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn image_248(t1: u32, t2: u32, t3: u32) -> BinaryCode {
        enumerate_mixed(&build_248(t1, t2, t3).unwrap())
            .unwrap()
            .gray_image()
            .unwrap()
    }

    #[test]
    fn closed_form_rank_kernel_values() {
        assert_eq!(z2z4_rank_kernel(5, 2).unwrap(), (22, 7));
        assert_eq!(z2z4_rank_kernel(2, 8).unwrap(), (13, 10));
        assert_eq!(z2z4_rank_kernel(4, 4).unwrap(), (18, 8));
        assert!(z2z4_rank_kernel(1, 10).is_err());
    }

    #[test]
    fn profile_of_seed_code() {
        let image = enumerate_mixed(&base_matrix_248()).unwrap().gray_image().unwrap();
        let p = profile(&image, &ProfileConfig::default()).unwrap();
        assert_eq!((p.length, p.size, p.min_distance), (8, 16, 4));
        assert_eq!(p.rank_kernel(), (4, 4));
        assert!(p.is_linear());
        // Linear: single kernel coset of rank 4.
        assert_eq!(p.kernel_coset_ranks, vec![4]);
        assert_eq!(p.weight_distribution, vec![(0, 1), (4, 14), (8, 1)]);
    }

    #[test]
    fn profile_is_permutation_invariant() {
        let image = image_248(1, 1, 1);
        let p = profile(&image, &ProfileConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = image.length();
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let q = profile(&image.permute(&perm).unwrap(), &ProfileConfig::default()).unwrap();
            assert_eq!(p, q);
            assert_eq!(invariant_distinct(&p, &q), Distinction::Inconclusive);
        }
    }

    #[test]
    fn invariant_distinct_flags_mismatches() {
        let p = profile(&image_248(1, 0, 3), &ProfileConfig::default()).unwrap();
        let q = profile(&image_248(1, 1, 1), &ProfileConfig::default()).unwrap();
        // Same length and size; the linear (1,0,3) code must differ in rank.
        assert!(p.is_linear());
        assert!(!q.is_linear());
        match invariant_distinct(&p, &q) {
            Distinction::Distinct(field) => assert!(field.contains("rank"), "{}", field),
            other => panic!("expected distinct, got {:?}", other),
        }
        assert_eq!(invariant_distinct(&p, &p), Distinction::Inconclusive);

        let r = profile(&image_248(1, 0, 1), &ProfileConfig::default()).unwrap();
        match invariant_distinct(&p, &r) {
            Distinction::Distinct(field) => assert!(field.contains("length"), "{}", field),
            other => panic!("expected distinct, got {:?}", other),
        }
    }

    #[test]
    fn self_equivalence_under_random_permutation() {
        let image = image_248(1, 1, 1);
        let n = image.length();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let permuted = image.permute(&perm).unwrap();
        match equivalence_search(&image, &permuted, DEFAULT_SEARCH_BUDGET).unwrap() {
            EquivalenceVerdict::Equivalent(witness) => {
                let mut lhs: Vec<BinaryWord> =
                    image.words().iter().map(|w| w.permute(&witness)).collect();
                lhs.sort();
                let mut rhs = permuted.words().to_vec();
                rhs.sort();
                assert_eq!(lhs, rhs);
            }
            other => panic!("expected equivalence, got {:?}", other),
        }
    }

    #[test]
    fn identity_comparison_is_equivalent() {
        let image = image_248(1, 0, 1);
        match equivalence_search(&image, &image, 10).unwrap() {
            EquivalenceVerdict::Equivalent(witness) => {
                assert_eq!(witness, (0..image.length()).collect::<Vec<_>>());
            }
            other => panic!("expected identity equivalence, got {:?}", other),
        }
    }

    #[test]
    fn ring_exponent_shift_pair_is_equivalent() {
        // The quaternary (2,1) code and the octonary (1,1,0) code, both of
        // length 16, are permutation equivalent.
        let a = enumerate_ring(&build_z2s(2, &[2, 1]).unwrap())
            .unwrap()
            .gray_image()
            .unwrap();
        let b = enumerate_ring(&build_z2s(3, &[1, 1, 0]).unwrap())
            .unwrap()
            .gray_image()
            .unwrap();
        assert_eq!((a.length(), a.size()), (16, 32));
        assert_eq!((b.length(), b.size()), (16, 32));
        match equivalence_search(&a, &b, DEFAULT_SEARCH_BUDGET).unwrap() {
            EquivalenceVerdict::Equivalent(witness) => {
                let mut lhs: Vec<BinaryWord> =
                    a.words().iter().map(|w| w.permute(&witness)).collect();
                lhs.sort();
                let mut rhs = b.words().to_vec();
                rhs.sort();
                assert_eq!(lhs, rhs);
            }
            other => panic!("expected equivalence, got {:?}", other),
        }
    }

    #[test]
    fn different_rank_short_circuits_before_search() {
        let a = image_248(1, 0, 3);
        let b = image_248(1, 1, 1);
        match equivalence_search(&a, &b, DEFAULT_SEARCH_BUDGET).unwrap() {
            EquivalenceVerdict::NotEquivalent(reason) => {
                assert!(reason.contains("rank"), "{}", reason)
            }
            other => panic!("expected short-circuit, got {:?}", other),
        }
        match compare_codes(&a, &b, DEFAULT_SEARCH_BUDGET).unwrap() {
            ComparisonOutcome::Distinct(field) => assert!(field.contains("rank"), "{}", field),
            other => panic!("expected distinct, got {:?}", other),
        }
    }

    #[test]
    fn tiny_budget_reports_inconclusive() {
        let image = image_248(1, 1, 1);
        let n = image.length();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let permuted = image.permute(&perm).unwrap();
        match equivalence_search(&image, &permuted, 1).unwrap() {
            EquivalenceVerdict::Inconclusive(_) | EquivalenceVerdict::Equivalent(_) => {}
            other => panic!("tiny budget must not prove anything: {:?}", other),
        }
    }

    #[test]
    fn small_classification_table() {
        let table = classification_table(5, &ProfileConfig::default()).unwrap();
        // Families at t = 5: z2z4z8 (1,0,3), (1,1,1); z2z4 (1,4), (2,2);
        // z2s across 2 <= s <= 6.
        let mixed: Vec<&TableRow> = table
            .rows
            .iter()
            .filter(|r| r.signature.family() == Family::Z2Z4Z8)
            .collect();
        assert_eq!(mixed.len(), 2);
        assert!(mixed[0].linear);
        for row in &table.rows {
            assert!(row.hadamard, "{} not hadamard", row.signature);
            assert_eq!(row.profile.length, 32);
            assert_eq!(row.profile.size, 64);
            assert_eq!(row.profile.min_distance, 16);
            assert_eq!(
                row.linear,
                row.profile.rank == 6 && row.profile.kernel_dim == 6
            );
        }
        let csv = table.to_csv();
        assert!(csv.starts_with("family,exponents,"));
        assert_eq!(csv.lines().count(), table.rows.len() + 1);
        assert!(classification_table(12, &ProfileConfig::default()).is_err());
        assert!(classification_table(2, &ProfileConfig::default()).is_err());
    }
}
