//! Recursive generator matrices for the three Hadamard families, their
//! type/length arithmetic, and enumeration of admissible exponent tuples.
//!
//! Matrices over `Z2 x Z4 x Z8` grow from the two-row seed
//! `[(1,1|2|4), (0,1|1|1)]` by three extension steps that append one row of
//! order 8, 4, or 2 ([`extend_order8`], [`extend_order4`], [`extend_order2`]).
//! The first row is always `(1..1|2..2|4..4)`, followed by the order-8 rows
//! in creation order, then order-4, then order-2.
//!
//! Matrices over `Z2 x Z4` use the analogous two steps starting from
//! `[(1,1|2), (0,1|1)]`; matrices over `Z_{2^s}` list as columns every tuple
//! of a fixed product set.

use std::fmt;
use std::str::FromStr;

use crate::alphabet::{MixedVector, RingVector, MAX_RING_EXPONENT};
use crate::error::{Error, Result};

/// Largest supported binary length exponent for built matrices; codes of
/// length `2^t` beyond this are out of desk scale.
pub const MAX_LENGTH_EXPONENT: u32 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Subgroups of `Z2^a1 x Z4^a2 x Z8^a3`.
    Z2Z4Z8,
    /// Subgroups of `Z2^a1 x Z4^a2`.
    Z2Z4,
    /// Subgroups of `Z_{2^s}^n`; the payload is `s`.
    Z2s(u32),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Z2Z4Z8 => write!(f, "z2z4z8"),
            Family::Z2Z4 => write!(f, "z2z4"),
            Family::Z2s(s) => write!(f, "z2s[s={}]", s),
        }
    }
}

/// Exponent tuple identifying one code in a family, plus the derived
/// length parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeSignature {
    Z2Z4Z8 { t1: u32, t2: u32, t3: u32 },
    Z2Z4 { t1: u32, t2: u32 },
    Z2s { s: u32, exponents: Vec<u32> },
}

impl TypeSignature {
    pub fn family(&self) -> Family {
        match self {
            TypeSignature::Z2Z4Z8 { .. } => Family::Z2Z4Z8,
            TypeSignature::Z2Z4 { .. } => Family::Z2Z4,
            TypeSignature::Z2s { s, .. } => Family::Z2s(*s),
        }
    }

    pub fn exponents(&self) -> Vec<u32> {
        match self {
            TypeSignature::Z2Z4Z8 { t1, t2, t3 } => vec![*t1, *t2, *t3],
            TypeSignature::Z2Z4 { t1, t2 } => vec![*t1, *t2],
            TypeSignature::Z2s { exponents, .. } => exponents.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&t) = self.exponents().iter().find(|&&t| t > 64) {
            return Err(Error::InvalidParameter(format!(
                "exponent {} is far beyond any buildable code",
                t
            )));
        }
        match self {
            TypeSignature::Z2Z4Z8 { t1, t3, .. } => {
                if *t1 < 1 || *t3 < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "z2z4z8 exponents need t1 >= 1 and t3 >= 1, got {}",
                        self
                    )));
                }
            }
            TypeSignature::Z2Z4 { t1, t2 } => {
                if *t1 < 1 || *t2 < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "z2z4 exponents need t1 >= 1 and t2 >= 1, got {}",
                        self
                    )));
                }
            }
            TypeSignature::Z2s { s, exponents } => {
                if *s < 2 || *s > MAX_RING_EXPONENT {
                    return Err(Error::InvalidParameter(format!(
                        "z2s needs 2 <= s <= {}, got s={}",
                        MAX_RING_EXPONENT, s
                    )));
                }
                if exponents.len() != *s as usize {
                    return Err(Error::InvalidParameter(format!(
                        "z2s with s={} needs {} exponents, got {}",
                        s,
                        s,
                        exponents.len()
                    )));
                }
                if exponents[0] < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "z2s exponents need t1 >= 1, got {}",
                        self
                    )));
                }
            }
        }
        Ok(())
    }

    /// Rejects signatures whose matrices would be too large to materialize.
    pub fn check_buildable(&self) -> Result<()> {
        self.validate()?;
        if self.size_log2() > MAX_LENGTH_EXPONENT + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} exceeds the supported length 2^{}",
                self, MAX_LENGTH_EXPONENT
            )));
        }
        Ok(())
    }

    /// `log2 |C|`, i.e. `t + 1` for a code of binary length `2^t`.
    pub fn size_log2(&self) -> u32 {
        match self {
            TypeSignature::Z2Z4Z8 { t1, t2, t3 } => 3 * t1 + 2 * t2 + t3,
            TypeSignature::Z2Z4 { t1, t2 } => 2 * t1 + t2,
            TypeSignature::Z2s { s, exponents } => exponents
                .iter()
                .enumerate()
                .map(|(i, &ti)| (s - i as u32) * ti)
                .sum(),
        }
    }

    /// Exponent `t` of the binary length `2^t` of the Gray image.
    pub fn length_log2(&self) -> u32 {
        self.size_log2() - 1
    }

    pub fn code_size(&self) -> u64 {
        1u64 << self.size_log2()
    }

    pub fn gray_length(&self) -> u64 {
        1u64 << self.length_log2()
    }

    /// Block widths for the mixed families: `(a1, a2, a3)`, with `a3 = 0`
    /// for the `Z2 x Z4` family.
    pub fn alphas(&self) -> Result<(u64, u64, u64)> {
        match self {
            TypeSignature::Z2Z4Z8 { t1, t2, t3 } => type_params(*t1, *t2, *t3),
            TypeSignature::Z2Z4 { t1, t2 } => {
                let (a1, a2) = type_params_z2z4(*t1, *t2)?;
                Ok((a1, a2, 0))
            }
            TypeSignature::Z2s { .. } => Err(Error::InvalidParameter(
                "z2s signatures have a column count, not block widths".into(),
            )),
        }
    }

    /// Number of ring columns for a `Z_{2^s}` signature.
    pub fn ring_columns(&self) -> Result<u64> {
        match self {
            TypeSignature::Z2s { s, exponents } => {
                self.validate()?;
                let mut log2_n = (*s) * (exponents[0] - 1);
                for (i, &ti) in exponents.iter().enumerate().skip(1) {
                    log2_n += (s - i as u32) * ti;
                }
                Ok(1u64 << log2_n)
            }
            _ => Err(Error::InvalidParameter(
                "only z2s signatures have a column count".into(),
            )),
        }
    }

    /// `family=...` / `s=...` / `t=...` descriptor block; round-trips via
    /// [`TypeSignature::parse_descriptor`].
    pub fn descriptor(&self) -> String {
        let ts = self
            .exponents()
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(",");
        match self {
            TypeSignature::Z2Z4Z8 { .. } => format!("family=z2z4z8\nt={}\n", ts),
            TypeSignature::Z2Z4 { .. } => format!("family=z2z4\nt={}\n", ts),
            TypeSignature::Z2s { s, .. } => format!("family=z2s\ns={}\nt={}\n", s, ts),
        }
    }

    pub fn parse_descriptor(text: &str) -> Result<Self> {
        let mut family: Option<&str> = None;
        let mut s: Option<u32> = None;
        let mut ts: Option<Vec<u32>> = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("descriptor line {:?} is not key=value", line)))?;
            match key.trim() {
                "family" => family = Some(value.trim()),
                "s" => {
                    s = Some(value.trim().parse().map_err(|_| {
                        Error::Parse(format!("bad s value {:?} in descriptor", value))
                    })?)
                }
                "t" => {
                    ts = Some(
                        value
                            .trim()
                            .split(',')
                            .map(|p| {
                                p.trim().parse().map_err(|_| {
                                    Error::Parse(format!("bad exponent {:?} in descriptor", p))
                                })
                            })
                            .collect::<Result<_>>()?,
                    )
                }
                other => {
                    return Err(Error::Parse(format!("unknown descriptor key {:?}", other)));
                }
            }
        }
        let family = family.ok_or_else(|| Error::Parse("descriptor missing family".into()))?;
        let ts = ts.ok_or_else(|| Error::Parse("descriptor missing t".into()))?;
        let sig = match family {
            "z2z4z8" => {
                if ts.len() != 3 {
                    return Err(Error::Parse("z2z4z8 needs t=t1,t2,t3".into()));
                }
                TypeSignature::Z2Z4Z8 {
                    t1: ts[0],
                    t2: ts[1],
                    t3: ts[2],
                }
            }
            "z2z4" => {
                if ts.len() != 2 {
                    return Err(Error::Parse("z2z4 needs t=t1,t2".into()));
                }
                TypeSignature::Z2Z4 {
                    t1: ts[0],
                    t2: ts[1],
                }
            }
            "z2s" => {
                let s = s.ok_or_else(|| Error::Parse("z2s descriptor missing s".into()))?;
                TypeSignature::Z2s { s, exponents: ts }
            }
            other => return Err(Error::Parse(format!("unknown family {:?}", other))),
        };
        sig.validate()?;
        Ok(sig)
    }
}

impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts = self
            .exponents()
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{}({})", self.family(), ts)
    }
}

fn pow2(e: u32) -> Result<u64> {
    if e >= 63 {
        return Err(Error::InvalidParameter(format!("2^{} overflows", e)));
    }
    Ok(1u64 << e)
}

/// Block widths `(a1, a2, a3)` of the matrix `A^{t1,t2,t3}`, from the
/// cumulative identities `a1 = 2^(t1+t2+t3-1)`,
/// `a1 + 2 a2 = 4^(t1+t2) 2^(t3-1)`, `a1 + 2 a2 + 4 a3 = 8^t1 4^t2 2^(t3-1)`.
/// Evaluated cumulatively so every intermediate stays an exact integer.
pub fn type_params(t1: u32, t2: u32, t3: u32) -> Result<(u64, u64, u64)> {
    TypeSignature::Z2Z4Z8 { t1, t2, t3 }.validate()?;
    let a1 = pow2(t1 + t2 + t3 - 1)?;
    let upto2 = pow2(2 * (t1 + t2) + t3 - 1)?;
    let upto3 = pow2(3 * t1 + 2 * t2 + t3 - 1)?;
    let a2 = (upto2 - a1) / 2;
    let a3 = (upto3 - upto2) / 4;
    Ok((a1, a2, a3))
}

/// Block widths `(a1, a2)` of the matrix `A^{t1,t2}` over `Z2 x Z4`:
/// `a1 = 2^(t-t1)` and `a2 = 2^(t-1) - 2^(t-t1-1)` with `t + 1 = 2 t1 + t2`.
pub fn type_params_z2z4(t1: u32, t2: u32) -> Result<(u64, u64)> {
    TypeSignature::Z2Z4 { t1, t2 }.validate()?;
    let t = 2 * t1 + t2 - 1;
    let a1 = pow2(t - t1)?;
    let a2 = pow2(t - 1)? - pow2(t - t1 - 1)?;
    Ok((a1, a2))
}

/// A generator matrix over `Z2 x Z4 x Z8` (or `Z2 x Z4` when `a3 = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedMatrix {
    signature: TypeSignature,
    rows: Vec<MixedVector>,
    row_orders: Vec<u32>,
}

impl MixedMatrix {
    pub fn signature(&self) -> &TypeSignature {
        &self.signature
    }

    pub fn rows(&self) -> &[MixedVector] {
        &self.rows
    }

    pub fn row_orders(&self) -> &[u32] {
        &self.row_orders
    }

    /// Block widths of the rows.
    pub fn shape(&self) -> (usize, usize, usize) {
        self.rows[0].shape()
    }

    /// Checks declared orders against computed ones, block widths against
    /// the signature, and the fixed first row.
    pub fn validate(&self) -> Result<()> {
        let (a1, a2, a3) = self.signature.alphas()?;
        let expected = (a1 as usize, a2 as usize, a3 as usize);
        for (i, row) in self.rows.iter().enumerate() {
            if row.shape() != expected {
                return Err(Error::Integrity(format!(
                    "row {} has shape {:?}, signature {} expects {:?}",
                    i,
                    row.shape(),
                    self.signature,
                    expected
                )));
            }
            if row.order() != self.row_orders[i] {
                return Err(Error::Integrity(format!(
                    "row {} has order {}, declared {}",
                    i,
                    row.order(),
                    self.row_orders[i]
                )));
            }
        }
        let first = all_constant_row(expected.0, expected.1, expected.2, 1, 2, 4);
        if self.rows[0] != first {
            return Err(Error::Integrity(
                "first row is not the all-(1|2|4) row".into(),
            ));
        }
        let mut declared: Vec<u32> = self.row_orders.clone();
        declared.sort_unstable();
        let mut expected_orders: Vec<u32> = Vec::new();
        match &self.signature {
            TypeSignature::Z2Z4Z8 { t1, t2, t3 } => {
                expected_orders.extend(std::iter::repeat_n(2, *t3 as usize));
                expected_orders.extend(std::iter::repeat_n(4, *t2 as usize));
                expected_orders.extend(std::iter::repeat_n(8, *t1 as usize));
            }
            TypeSignature::Z2Z4 { t1, t2 } => {
                expected_orders.extend(std::iter::repeat_n(2, *t2 as usize));
                expected_orders.extend(std::iter::repeat_n(4, *t1 as usize));
            }
            TypeSignature::Z2s { .. } => unreachable!("mixed matrix with ring signature"),
        }
        if declared != expected_orders {
            return Err(Error::Integrity(format!(
                "row order multiset {:?} does not match signature {}",
                self.row_orders, self.signature
            )));
        }
        Ok(())
    }

    /// One row per line in the `b|q|o` rendering.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_dump(signature: TypeSignature, text: &str) -> Result<Self> {
        let rows: Vec<MixedVector> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse())
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Err(Error::Parse("matrix dump has no rows".into()));
        }
        let row_orders = rows.iter().map(|r| r.order()).collect();
        let m = MixedMatrix {
            signature,
            rows,
            row_orders,
        };
        m.validate()?;
        Ok(m)
    }
}

/// A generator matrix over a single ring `Z_{2^s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix {
    signature: TypeSignature,
    rows: Vec<RingVector>,
    row_orders: Vec<u32>,
}

impl RingMatrix {
    pub fn signature(&self) -> &TypeSignature {
        &self.signature
    }

    pub fn rows(&self) -> &[RingVector] {
        &self.rows
    }

    pub fn row_orders(&self) -> &[u32] {
        &self.row_orders
    }

    pub fn columns(&self) -> usize {
        self.rows[0].len()
    }

    pub fn validate(&self) -> Result<()> {
        let expected = self.signature.ring_columns()? as usize;
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != expected {
                return Err(Error::Integrity(format!(
                    "row {} has {} columns, signature {} expects {}",
                    i,
                    row.len(),
                    self.signature,
                    expected
                )));
            }
            if row.order() != self.row_orders[i] {
                return Err(Error::Integrity(format!(
                    "row {} has order {}, declared {}",
                    i,
                    row.order(),
                    self.row_orders[i]
                )));
            }
        }
        Ok(())
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_dump(signature: TypeSignature, text: &str) -> Result<Self> {
        let rows: Vec<RingVector> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse())
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Err(Error::Parse("matrix dump has no rows".into()));
        }
        let row_orders = rows.iter().map(|r| r.order()).collect();
        let m = RingMatrix {
            signature,
            rows,
            row_orders,
        };
        m.validate()?;
        Ok(m)
    }
}

/// Either kind of generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorMatrix {
    Mixed(MixedMatrix),
    Ring(RingMatrix),
}

impl GeneratorMatrix {
    /// Builds the generator matrix for any validated signature.
    pub fn build(signature: &TypeSignature) -> Result<Self> {
        signature.validate()?;
        match signature {
            TypeSignature::Z2Z4Z8 { t1, t2, t3 } => {
                Ok(GeneratorMatrix::Mixed(build_248(*t1, *t2, *t3)?))
            }
            TypeSignature::Z2Z4 { t1, t2 } => Ok(GeneratorMatrix::Mixed(build_z2z4(*t1, *t2)?)),
            TypeSignature::Z2s { s, exponents } => {
                Ok(GeneratorMatrix::Ring(build_z2s(*s, exponents)?))
            }
        }
    }

    pub fn signature(&self) -> &TypeSignature {
        match self {
            GeneratorMatrix::Mixed(m) => m.signature(),
            GeneratorMatrix::Ring(m) => m.signature(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorMatrix::Mixed(m) => m.validate(),
            GeneratorMatrix::Ring(m) => m.validate(),
        }
    }

    pub fn dump(&self) -> String {
        match self {
            GeneratorMatrix::Mixed(m) => m.dump(),
            GeneratorMatrix::Ring(m) => m.dump(),
        }
    }

    pub fn parse_dump(signature: TypeSignature, text: &str) -> Result<Self> {
        match &signature {
            TypeSignature::Z2s { .. } => {
                Ok(GeneratorMatrix::Ring(RingMatrix::parse_dump(signature, text)?))
            }
            _ => Ok(GeneratorMatrix::Mixed(MixedMatrix::parse_dump(
                signature, text,
            )?)),
        }
    }
}

fn all_constant_row(a1: usize, a2: usize, a3: usize, b: u8, q: u8, o: u8) -> MixedVector {
    MixedVector::new(vec![b; a1], vec![q; a2], vec![o; a3]).expect("constant digits in range")
}

/// The two-row seed matrix `A^{1,0,1}` of type `(2,1,1; 1,0,1)`.
pub fn base_matrix_248() -> MixedMatrix {
    let rows = vec![
        MixedVector::new(vec![1, 1], vec![2], vec![4]).unwrap(),
        MixedVector::new(vec![0, 1], vec![1], vec![1]).unwrap(),
    ];
    MixedMatrix {
        signature: TypeSignature::Z2Z4Z8 { t1: 1, t2: 0, t3: 1 },
        row_orders: vec![2, 8],
        rows,
    }
}

/// Digit of the mixed-column block `{2} x {0,2}^(rows-1)`: column `c`, row
/// `i`, with row 1 the most significant selector bit.
fn m1_digit(i: usize, c: usize, free_rows: usize) -> u8 {
    if i == 0 {
        2
    } else {
        (2 * ((c >> (free_rows - i)) & 1)) as u8
    }
}

/// Digit of the block `{4} x {0,2,4,6}^(rows-1)`, base-4 selectors.
fn m2_digit(i: usize, c: usize, free_rows: usize) -> u8 {
    if i == 0 {
        4
    } else {
        (2 * ((c >> (2 * (free_rows - i))) & 3)) as u8
    }
}

fn repeat_block(block: &[u8], copies: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(block.len() * copies);
    for _ in 0..copies {
        out.extend_from_slice(block);
    }
    out
}

/// Constant runs `v0..v0 v1..v1 ...`, each of width `width`.
fn constant_runs(values: &[u8], width: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(values.len() * width);
    for &v in values {
        out.extend(std::iter::repeat_n(v, width));
    }
    out
}

/// Appends a row of order 8 to `A^{l-1,0,1}`, producing `A^{l,0,1}`.
pub fn extend_order8(a: &MixedMatrix) -> Result<MixedMatrix> {
    let (t1, t2, t3) = match a.signature {
        TypeSignature::Z2Z4Z8 { t1, t2, t3 } => (t1, t2, t3),
        _ => {
            return Err(Error::InvalidParameter(
                "order-8 extension applies to z2z4z8 matrices".into(),
            ))
        }
    };
    if t2 != 0 || t3 != 1 {
        return Err(Error::InvalidParameter(format!(
            "order-8 extension needs a matrix of shape (t1,0,1), got {}",
            a.signature
        )));
    }
    let ell = t1 as usize + 1;
    let (a1, a2, a3) = a.shape();
    let m1_cols = 1usize << (ell - 1);
    let m2_cols = 1usize << (2 * (ell - 1));

    let mut rows = Vec::with_capacity(a.rows.len() + 1);
    for (i, row) in a.rows.iter().enumerate() {
        let b = repeat_block(row.z2_block(), 2);
        let mut q: Vec<u8> = (0..m1_cols).map(|c| m1_digit(i, c, ell - 1)).collect();
        q.extend(repeat_block(row.z4_block(), 4));
        let mut o: Vec<u8> = (0..m2_cols).map(|c| m2_digit(i, c, ell - 1)).collect();
        o.extend(repeat_block(row.z8_block(), 8));
        rows.push(MixedVector::new(b, q, o)?);
    }
    let b = constant_runs(&[0, 1], a1);
    let mut q = vec![1u8; m1_cols];
    q.extend(constant_runs(&[0, 1, 2, 3], a2));
    let mut o = vec![1u8; m2_cols];
    o.extend(constant_runs(&[0, 1, 2, 3, 4, 5, 6, 7], a3));
    rows.push(MixedVector::new(b, q, o)?);

    let mut row_orders = a.row_orders.clone();
    row_orders.push(8);
    Ok(MixedMatrix {
        signature: TypeSignature::Z2Z4Z8 {
            t1: t1 + 1,
            t2: 0,
            t3: 1,
        },
        rows,
        row_orders,
    })
}

/// Appends a row of order 4 to `A^{t1,l-1,1}`, producing `A^{t1,l,1}`.
pub fn extend_order4(a: &MixedMatrix) -> Result<MixedMatrix> {
    let (t1, t2, t3) = match a.signature {
        TypeSignature::Z2Z4Z8 { t1, t2, t3 } => (t1, t2, t3),
        _ => {
            return Err(Error::InvalidParameter(
                "order-4 extension applies to z2z4z8 matrices".into(),
            ))
        }
    };
    if t3 != 1 {
        return Err(Error::InvalidParameter(format!(
            "order-4 extension needs a matrix of shape (t1,t2,1), got {}",
            a.signature
        )));
    }
    let free_rows = (t1 + t2) as usize;
    let (a1, a2, _a3) = a.shape();
    let m1_cols = 1usize << free_rows;

    let mut rows = Vec::with_capacity(a.rows.len() + 1);
    for (i, row) in a.rows.iter().enumerate() {
        let b = repeat_block(row.z2_block(), 2);
        let mut q: Vec<u8> = (0..m1_cols).map(|c| m1_digit(i, c, free_rows)).collect();
        q.extend(repeat_block(row.z4_block(), 4));
        let o = repeat_block(row.z8_block(), 4);
        rows.push(MixedVector::new(b, q, o)?);
    }
    let b = constant_runs(&[0, 1], a1);
    let mut q = vec![1u8; m1_cols];
    q.extend(constant_runs(&[0, 1, 2, 3], a2));
    let o = constant_runs(&[0, 2, 4, 6], a.shape().2);
    rows.push(MixedVector::new(b, q, o)?);

    let mut row_orders = a.row_orders.clone();
    row_orders.push(4);
    Ok(MixedMatrix {
        signature: TypeSignature::Z2Z4Z8 {
            t1,
            t2: t2 + 1,
            t3: 1,
        },
        rows,
        row_orders,
    })
}

/// Duplicates every block and appends the order-2 row
/// `(0..0,1..1 | 0..0,2..2 | 0..0,4..4)`; all block widths double.
pub fn extend_order2(a: &MixedMatrix) -> Result<MixedMatrix> {
    let (t1, t2, t3) = match a.signature {
        TypeSignature::Z2Z4Z8 { t1, t2, t3 } => (t1, t2, t3),
        _ => {
            return Err(Error::InvalidParameter(
                "order-2 extension applies to z2z4z8 matrices".into(),
            ))
        }
    };
    let (a1, a2, a3) = a.shape();
    let mut rows = Vec::with_capacity(a.rows.len() + 1);
    for row in &a.rows {
        rows.push(MixedVector::new(
            repeat_block(row.z2_block(), 2),
            repeat_block(row.z4_block(), 2),
            repeat_block(row.z8_block(), 2),
        )?);
    }
    rows.push(MixedVector::new(
        constant_runs(&[0, 1], a1),
        constant_runs(&[0, 2], a2),
        constant_runs(&[0, 4], a3),
    )?);
    let mut row_orders = a.row_orders.clone();
    row_orders.push(2);
    Ok(MixedMatrix {
        signature: TypeSignature::Z2Z4Z8 {
            t1,
            t2,
            t3: t3 + 1,
        },
        rows,
        row_orders,
    })
}

/// Builds `A^{t1,t2,t3}`: `t1 - 1` order-8 extensions, then `t2` order-4
/// extensions, then `t3 - 1` order-2 extensions from the seed. Deterministic
/// and bit-exact.
pub fn build_248(t1: u32, t2: u32, t3: u32) -> Result<MixedMatrix> {
    TypeSignature::Z2Z4Z8 { t1, t2, t3 }.check_buildable()?;
    let mut m = base_matrix_248();
    for _ in 1..t1 {
        m = extend_order8(&m)?;
    }
    for _ in 0..t2 {
        m = extend_order4(&m)?;
    }
    for _ in 1..t3 {
        m = extend_order2(&m)?;
    }
    debug_assert_eq!(m.signature, TypeSignature::Z2Z4Z8 { t1, t2, t3 });
    Ok(m)
}

/// Builds the `Z2 x Z4` matrix `A^{t1,t2}` with `t1` rows of order 4 and
/// `t2` rows of order 2, first row `(1..1|2..2)`, from the seed
/// `[(1,1|2),(0,1|1)]`.
pub fn build_z2z4(t1: u32, t2: u32) -> Result<MixedMatrix> {
    TypeSignature::Z2Z4 { t1, t2 }.check_buildable()?;
    let mut rows = vec![
        MixedVector::new(vec![1, 1], vec![2], vec![]).unwrap(),
        MixedVector::new(vec![0, 1], vec![1], vec![]).unwrap(),
    ];
    let mut row_orders = vec![2u32, 4];
    // Order-4 extensions: the new columns run over {2} x {0,2}^(rows-1).
    for ell in 2..=t1 as usize {
        let a1 = rows[0].shape().0;
        let a2 = rows[0].shape().1;
        let m1_cols = 1usize << (ell - 1);
        let mut next = Vec::with_capacity(rows.len() + 1);
        for (i, row) in rows.iter().enumerate() {
            let b = repeat_block(row.z2_block(), 2);
            let mut q: Vec<u8> = (0..m1_cols).map(|c| m1_digit(i, c, ell - 1)).collect();
            q.extend(repeat_block(row.z4_block(), 4));
            next.push(MixedVector::new(b, q, vec![])?);
        }
        let b = constant_runs(&[0, 1], a1);
        let mut q = vec![1u8; m1_cols];
        q.extend(constant_runs(&[0, 1, 2, 3], a2));
        next.push(MixedVector::new(b, q, vec![])?);
        rows = next;
        row_orders.push(4);
    }
    // Order-2 extensions: duplicate blocks, append (0..0,1..1 | 0..0,2..2).
    for _ in 1..t2 {
        let a1 = rows[0].shape().0;
        let a2 = rows[0].shape().1;
        let mut next = Vec::with_capacity(rows.len() + 1);
        for row in &rows {
            next.push(MixedVector::new(
                repeat_block(row.z2_block(), 2),
                repeat_block(row.z4_block(), 2),
                vec![],
            )?);
        }
        next.push(MixedVector::new(
            constant_runs(&[0, 1], a1),
            constant_runs(&[0, 2], a2),
            vec![],
        )?);
        rows = next;
        row_orders.push(2);
    }
    Ok(MixedMatrix {
        signature: TypeSignature::Z2Z4 { t1, t2 },
        rows,
        row_orders,
    })
}

/// Builds the `Z_{2^s}` matrix whose columns are exactly the tuples in
/// `{1} x T1^(t1-1) x T2^t2 x ... x Ts^ts`, where
/// `Ti = {j * 2^(i-1) : 0 <= j < 2^(s-i+1)}`. Columns are ordered
/// lexicographically with the topmost varying row most significant and
/// digits ascending.
pub fn build_z2s(s: u32, exponents: &[u32]) -> Result<RingMatrix> {
    let signature = TypeSignature::Z2s {
        s,
        exponents: exponents.to_vec(),
    };
    signature.check_buildable()?;
    let n = signature.ring_columns()? as usize;

    // Value set and declared order per row; row 0 is the fixed all-one row.
    let mut row_sets: Vec<Vec<u16>> = Vec::new();
    let mut row_orders: Vec<u32> = vec![1 << s];
    for (i, &ti) in exponents.iter().enumerate() {
        let step = 1u64 << i;
        let count = 1u64 << (s - i as u32);
        let set: Vec<u16> = (0..count).map(|j| (j * step) as u16).collect();
        let copies = if i == 0 { ti - 1 } else { ti };
        for _ in 0..copies {
            row_sets.push(set.clone());
            row_orders.push(1 << (s - i as u32));
        }
    }

    let free = row_sets.len();
    let mut strides = vec![1usize; free];
    for r in (0..free.saturating_sub(1)).rev() {
        strides[r] = strides[r + 1] * row_sets[r + 1].len();
    }

    let mut rows = Vec::with_capacity(free + 1);
    rows.push(RingVector::new(s, vec![1; n])?);
    for r in 0..free {
        let set = &row_sets[r];
        let digits: Vec<u16> = (0..n).map(|c| set[(c / strides[r]) % set.len()]).collect();
        rows.push(RingVector::new(s, digits)?);
    }
    Ok(RingMatrix {
        signature,
        rows,
        row_orders,
    })
}

/// All admissible exponent tuples for a binary length `2^t` in the given
/// family, sorted lexicographically.
pub fn enumerate_types(t: u32, family: Family) -> Result<Vec<TypeSignature>> {
    if t < 3 {
        return Err(Error::InvalidParameter(format!(
            "type enumeration needs t >= 3, got {}",
            t
        )));
    }
    let target = t + 1;
    let mut out = Vec::new();
    match family {
        Family::Z2Z4Z8 => {
            for t1 in 1..=target / 3 {
                for t2 in 0..=(target - 3 * t1) / 2 {
                    let rest = target - 3 * t1 - 2 * t2;
                    if rest >= 1 {
                        out.push(TypeSignature::Z2Z4Z8 { t1, t2, t3: rest });
                    }
                }
            }
        }
        Family::Z2Z4 => {
            for t1 in 1..=target / 2 {
                let rest = target - 2 * t1;
                if rest >= 1 {
                    out.push(TypeSignature::Z2Z4 { t1, t2: rest });
                }
            }
        }
        Family::Z2s(s) => {
            if !(2..=MAX_RING_EXPONENT).contains(&s) {
                return Err(Error::InvalidParameter(format!(
                    "z2s enumeration needs 2 <= s <= {}, got {}",
                    MAX_RING_EXPONENT, s
                )));
            }
            let mut exps = vec![0u32; s as usize];
            fill_z2s_types(s, target, 0, &mut exps, &mut out);
        }
    }
    out.sort();
    Ok(out)
}

fn fill_z2s_types(
    s: u32,
    remaining: u32,
    position: usize,
    exps: &mut Vec<u32>,
    out: &mut Vec<TypeSignature>,
) {
    if position == s as usize {
        if remaining == 0 && exps[0] >= 1 {
            out.push(TypeSignature::Z2s {
                s,
                exponents: exps.clone(),
            });
        }
        return;
    }
    let weight = s - position as u32;
    for ti in 0..=remaining / weight {
        exps[position] = ti;
        fill_z2s_types(s, remaining - weight * ti, position + 1, exps, out);
    }
    exps[position] = 0;
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z2z4z8" => Ok(Family::Z2Z4Z8),
            "z2z4" => Ok(Family::Z2Z4),
            "z2s" => Err(Error::Parse(
                "family z2s needs an explicit s; use Family::Z2s(s)".into(),
            )),
            other => Err(Error::Parse(format!("unknown family {:?}", other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed_rows(m: &MixedMatrix) -> Vec<String> {
        m.rows().iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn base_matrix_is_the_printed_seed() {
        let m = base_matrix_248();
        assert_eq!(mixed_rows(&m), ["11|2|4", "01|1|1"]);
        assert_eq!(m.row_orders(), [2, 8]);
        assert_eq!(m.signature().alphas().unwrap(), (2, 1, 1));
        m.validate().unwrap();
    }

    #[test]
    fn order8_extension_reproduces_a201() {
        let m = extend_order8(&base_matrix_248()).unwrap();
        assert_eq!(
            mixed_rows(&m),
            [
                "1111|222222|444444444444",
                "0101|021111|024611111111",
                "0011|110123|111101234567",
            ]
        );
        assert_eq!(m.row_orders(), [2, 8, 8]);
        assert_eq!(m.shape(), (4, 6, 12));
        m.validate().unwrap();
    }

    #[test]
    fn order8_extension_widths_for_three_rows_of_order_eight() {
        let m = extend_order8(&extend_order8(&base_matrix_248()).unwrap()).unwrap();
        // Frozen from the cumulative width identities for (3,0,1).
        assert_eq!(m.shape(), (8, 28, 112));
        assert_eq!(type_params(3, 0, 1).unwrap(), (8, 28, 112));
        m.validate().unwrap();
    }

    #[test]
    fn order4_extension_reproduces_a111() {
        let m = extend_order4(&base_matrix_248()).unwrap();
        assert_eq!(
            mixed_rows(&m),
            ["1111|222222|4444", "0101|021111|1111", "0011|110123|0246"]
        );
        assert_eq!(m.shape(), (4, 6, 4));
        assert_eq!(m.row_orders(), [2, 8, 4]);
        m.validate().unwrap();
    }

    #[test]
    fn order4_extension_on_a201_orders_its_new_columns() {
        // The four new Z4 columns of A^{2,1,1} run over (2,0,0), (2,0,2),
        // (2,2,0), (2,2,2) with the topmost varying row most significant.
        let m = extend_order4(&extend_order8(&base_matrix_248()).unwrap()).unwrap();
        let q: Vec<&[u8]> = m.rows().iter().map(|r| r.z4_block()).collect();
        let block: Vec<Vec<u8>> = (0..4).map(|r| q[r][..4].to_vec()).collect();
        assert_eq!(
            block,
            [
                vec![2, 2, 2, 2],
                vec![0, 0, 2, 2],
                vec![0, 2, 0, 2],
                vec![1, 1, 1, 1],
            ]
        );
        assert_eq!(m.shape(), (8, 28, 48));
        m.validate().unwrap();
    }

    #[test]
    fn order2_extension_reproduces_a112() {
        let m = extend_order2(&extend_order4(&base_matrix_248()).unwrap()).unwrap();
        assert_eq!(
            mixed_rows(&m),
            [
                "11111111|222222222222|44444444",
                "01010101|021111021111|11111111",
                "00110011|110123110123|02460246",
                "00001111|000000222222|00004444",
            ]
        );
        assert_eq!(m.shape(), (8, 12, 8));
        assert_eq!(m.row_orders(), [2, 8, 4, 2]);
        m.validate().unwrap();
    }

    #[test]
    fn order2_extension_doubles_widths() {
        let base = base_matrix_248();
        let twice = extend_order2(&extend_order2(&base).unwrap()).unwrap();
        assert_eq!(twice.shape(), (8, 4, 4));
        assert_eq!(type_params(1, 0, 3).unwrap(), (8, 4, 4));
        twice.validate().unwrap();
    }

    #[test]
    fn build_matches_stepwise_construction() {
        assert_eq!(build_248(1, 0, 1).unwrap(), base_matrix_248());
        assert_eq!(
            build_248(1, 1, 2).unwrap(),
            extend_order2(&extend_order4(&base_matrix_248()).unwrap()).unwrap()
        );
        assert!(build_248(0, 1, 1).is_err());
        assert!(build_248(1, 1, 0).is_err());
        // Determinism: rebuilding yields bit-identical matrices.
        assert_eq!(build_248(2, 1, 2).unwrap(), build_248(2, 1, 2).unwrap());
    }

    #[test]
    fn type_params_examples() {
        assert_eq!(type_params(1, 0, 1).unwrap(), (2, 1, 1));
        assert_eq!(type_params(1, 1, 1).unwrap(), (4, 6, 4));
        assert_eq!(type_params(2, 0, 1).unwrap(), (4, 6, 12));
        // Frozen from exact evaluation; N = 32 + 2*240 + 4*384 = 2048 = 2^11
        // and t + 1 = 3*2 + 2*2 + 2 = 12 agree.
        assert_eq!(type_params(2, 2, 2).unwrap(), (32, 240, 384));
        let sig = TypeSignature::Z2Z4Z8 { t1: 2, t2: 2, t3: 2 };
        assert_eq!(sig.gray_length(), 2048);
    }

    #[test]
    fn type_params_identities_up_to_six() {
        for t1 in 1..=6u32 {
            for t2 in 0..=6u32 {
                for t3 in 1..=6u32 {
                    let (a1, a2, a3) = type_params(t1, t2, t3).unwrap();
                    let s = t1 + t2;
                    assert_eq!(a1, 1u64 << (s + t3 - 1));
                    assert_eq!(a1 + 2 * a2, 1u64 << (2 * s + t3 - 1));
                    assert_eq!(a1 + 2 * a2 + 4 * a3, 1u64 << (3 * t1 + 2 * t2 + t3 - 1));
                    // Doubled closed forms, exact also at t2 = 0 or t3 = 1.
                    assert_eq!(4 * a2, (1u64 << (2 * s + t3)) - (1u64 << (s + t3)));
                    assert_eq!(
                        4 * a3,
                        (1u64 << (3 * t1 + 2 * t2 + t3 - 1)) - (1u64 << (2 * s + t3 - 1))
                    );
                    if t3 == 1 {
                        // The shape identities stated for A^{t1,t2,1}.
                        assert_eq!(1u64 << s, a1);
                        assert_eq!(1u64 << (2 * s), a1 + 2 * a2);
                        assert_eq!(1u64 << (3 * t1 + 2 * t2), a1 + 2 * a2 + 4 * a3);
                    }
                }
            }
        }
    }

    #[test]
    fn built_matrices_validate_and_match_type_params() {
        for t1 in 1..=3u32 {
            for t2 in 0..=2u32 {
                for t3 in 1..=2u32 {
                    let m = build_248(t1, t2, t3).unwrap();
                    m.validate().unwrap();
                    let (a1, a2, a3) = type_params(t1, t2, t3).unwrap();
                    assert_eq!(m.shape(), (a1 as usize, a2 as usize, a3 as usize));
                    let orders = m.row_orders();
                    assert_eq!(orders.iter().filter(|&&o| o == 8).count(), t1 as usize);
                    assert_eq!(orders.iter().filter(|&&o| o == 4).count(), t2 as usize);
                    assert_eq!(orders.iter().filter(|&&o| o == 2).count(), t3 as usize);
                }
            }
        }
    }

    #[test]
    fn z2z4_seed_and_growth() {
        let m = build_z2z4(1, 1).unwrap();
        assert_eq!(mixed_rows(&m), ["11|2|", "01|1|"]);
        assert_eq!(m.row_orders(), [2, 4]);

        let m = build_z2z4(2, 1).unwrap();
        assert_eq!(m.shape(), (4, 6, 0));
        assert_eq!(m.signature().code_size(), 32);
        assert_eq!(m.signature().gray_length(), 16);
        m.validate().unwrap();

        assert_eq!(build_z2z4(5, 2).unwrap().signature().gray_length(), 2048);
        assert!(build_z2z4(0, 1).is_err());
        assert!(build_z2z4(1, 0).is_err());
    }

    #[test]
    fn z2z4_widths_match_closed_form() {
        for t1 in 1..=5u32 {
            for t2 in 1..=4u32 {
                let m = build_z2z4(t1, t2).unwrap();
                let (a1, a2) = type_params_z2z4(t1, t2).unwrap();
                assert_eq!(m.shape(), (a1 as usize, a2 as usize, 0));
                m.validate().unwrap();
            }
        }
    }

    #[test]
    fn z2s_small_matrices() {
        let m = build_z2s(2, &[1, 0]).unwrap();
        assert_eq!(m.columns(), 1);
        assert_eq!(m.rows()[0].digits(), [1]);

        let m = build_z2s(2, &[2, 0]).unwrap();
        assert_eq!(m.rows().len(), 2);
        assert_eq!(m.rows()[0].digits(), [1, 1, 1, 1]);
        assert_eq!(m.rows()[1].digits(), [0, 1, 2, 3]);
        assert_eq!(m.row_orders(), [4, 4]);
        m.validate().unwrap();

        let m = build_z2s(3, &[2, 0, 6]).unwrap();
        assert_eq!(m.signature().gray_length(), 2048);
        assert_eq!(m.columns(), 512);
        m.validate().unwrap();

        assert!(build_z2s(3, &[0, 1, 1]).is_err());
        assert!(build_z2s(3, &[1, 1]).is_err());
    }

    #[test]
    fn z2s_columns_are_the_full_product_set() {
        // s=3, exponents (2,1,0): columns {1} x T1 x T2 with T1 = Z8 and
        // T2 = {0,2,4,6}, topmost varying row most significant.
        let m = build_z2s(3, &[2, 1, 0]).unwrap();
        assert_eq!(m.columns(), 32);
        let mut seen = std::collections::HashSet::new();
        for c in 0..32 {
            let col: Vec<u16> = m.rows().iter().map(|r| r.digits()[c]).collect();
            assert_eq!(col[0], 1);
            assert!(col[2].is_multiple_of(2));
            assert!(seen.insert(col));
        }
        assert_eq!(seen.len(), 32);
        // Lexicographic order: first column all-min, last column all-max.
        let first: Vec<u16> = m.rows().iter().map(|r| r.digits()[0]).collect();
        let last: Vec<u16> = m.rows().iter().map(|r| r.digits()[31]).collect();
        assert_eq!(first, [1, 0, 0]);
        assert_eq!(last, [1, 7, 6]);
    }

    #[test]
    fn enumerate_types_examples() {
        let tuples: Vec<Vec<u32>> = enumerate_types(11, Family::Z2Z4Z8)
            .unwrap()
            .iter()
            .map(|s| s.exponents())
            .collect();
        assert_eq!(
            tuples,
            [
                vec![1, 0, 9],
                vec![1, 1, 7],
                vec![1, 2, 5],
                vec![1, 3, 3],
                vec![1, 4, 1],
                vec![2, 0, 6],
                vec![2, 1, 4],
                vec![2, 2, 2],
                vec![3, 0, 3],
                vec![3, 1, 1],
            ]
        );

        let tuples: Vec<Vec<u32>> = enumerate_types(11, Family::Z2Z4)
            .unwrap()
            .iter()
            .map(|s| s.exponents())
            .collect();
        assert_eq!(
            tuples,
            [vec![1, 10], vec![2, 8], vec![3, 6], vec![4, 4], vec![5, 2]]
        );

        let tuples: Vec<Vec<u32>> = enumerate_types(5, Family::Z2Z4Z8)
            .unwrap()
            .iter()
            .map(|s| s.exponents())
            .collect();
        assert_eq!(tuples, [vec![1, 0, 3], vec![1, 1, 1]]);

        assert!(enumerate_types(2, Family::Z2Z4Z8).is_err());
    }

    #[test]
    fn enumerate_types_z2s_covers_all_weighted_compositions() {
        let types = enumerate_types(11, Family::Z2s(2)).unwrap();
        let tuples: Vec<Vec<u32>> = types.iter().map(|s| s.exponents()).collect();
        assert_eq!(
            tuples,
            [
                vec![1, 10],
                vec![2, 8],
                vec![3, 6],
                vec![4, 4],
                vec![5, 2],
                vec![6, 0],
            ]
        );
        for sig in &types {
            assert_eq!(sig.size_log2(), 12);
        }
        // s = 12 admits exactly the linear one-generator code at t = 11.
        let types = enumerate_types(11, Family::Z2s(12)).unwrap();
        assert_eq!(types.len(), 1);
        assert_eq!(types[0].exponents()[0], 1);
    }

    #[test]
    fn descriptor_roundtrip() {
        for sig in [
            TypeSignature::Z2Z4Z8 { t1: 1, t2: 1, t3: 2 },
            TypeSignature::Z2Z4 { t1: 5, t2: 2 },
            TypeSignature::Z2s { s: 3, exponents: vec![2, 0, 6] },
        ] {
            let text = sig.descriptor();
            assert_eq!(TypeSignature::parse_descriptor(&text).unwrap(), sig);
        }
        assert!(TypeSignature::parse_descriptor("family=z9\nt=1").is_err());
        assert!(TypeSignature::parse_descriptor("family=z2s\nt=1,1").is_err());
    }

    #[test]
    fn matrix_dump_roundtrip() {
        let m = build_248(2, 1, 1).unwrap();
        let text = m.dump();
        let parsed = MixedMatrix::parse_dump(m.signature().clone(), &text).unwrap();
        assert_eq!(parsed, m);

        let r = build_z2s(3, &[1, 1, 1]).unwrap();
        let parsed = RingMatrix::parse_dump(r.signature().clone(), &r.dump()).unwrap();
        assert_eq!(parsed, r);
    }

    #[test]
    fn corrupted_dump_is_rejected_with_named_invariant() {
        let m = build_248(1, 1, 1).unwrap();
        let mut text = m.dump();
        // Flip one digit of the first row: the fixed-first-row check fires.
        text = text.replacen("11|2", "01|2", 1);
        let err = MixedMatrix::parse_dump(m.signature().clone(), &text).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)), "got {:?}", err);
    }
}
