//! Integral Fourier matrices: validation, fusion structure constants, canonical forms and
//! exhaustive enumeration.

mod canon;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::integer_sqrt_u64;

pub(crate) use canon::{canonical_order, CanonInput};
pub use search::{
    enumerate_fourier, enumerate_fourier_for_norms, enumerate_fourier_with_stats,
    EnumerateOptions, EnumerationStats, SearchCheckpoint, DEFAULT_NODE_BUDGET,
};

/// An integer matrix satisfying the Fourier matrix axioms, with cached norms and degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntegralFourierMatrix {
    n: usize,
    s: Vec<Vec<i64>>,
    /// `d_i`, in stored row order.
    norms: Vec<u64>,
    /// `g_i = s_{1i}`.
    degrees: Vec<i64>,
}

/// The first axiom that fails, with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FourierViolation {
    NotSquare,
    FirstColumnNotOne { row: usize },
    ZeroDeterminant,
    NotOrthogonal { i: usize, j: usize },
    NotSymmetrizable { i: usize, j: usize },
    NonIntegralStructureConstant { i: usize, j: usize, l: usize },
}

impl fmt::Display for FourierViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FourierViolation::NotSquare => write!(f, "matrix is empty or not square"),
            FourierViolation::FirstColumnNotOne { row } => {
                write!(f, "first column entry of row {row} is not 1")
            }
            FourierViolation::ZeroDeterminant => write!(f, "determinant is zero"),
            FourierViolation::NotOrthogonal { i, j } => {
                write!(f, "s s^T is not diagonal: rows {i} and {j} are not orthogonal")
            }
            FourierViolation::NotSymmetrizable { i, j } => {
                write!(f, "not symmetrizable at ({i},{j})")
            }
            FourierViolation::NonIntegralStructureConstant { i, j, l } => {
                write!(f, "structure constant N_{{{i},{j}}}^{l} is not an integer")
            }
        }
    }
}

impl From<FourierViolation> for Error {
    fn from(v: FourierViolation) -> Self {
        Error::InvalidFourier(v.to_string())
    }
}

/// Checks the Fourier matrix axioms in order and returns the typed matrix.
pub fn validate(s: &[Vec<i64>]) -> std::result::Result<IntegralFourierMatrix, FourierViolation> {
    let n = s.len();
    if n == 0 || s.iter().any(|r| r.len() != n) {
        return Err(FourierViolation::NotSquare);
    }
    if let Some(i) = (0..n).find(|&i| s[i][0] != 1) {
        return Err(FourierViolation::FirstColumnNotOne { row: i + 1 });
    }
    let dot = |a: &[i64], b: &[i64]| -> i128 {
        a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
    };
    // Orthogonal rows with s_i1 = 1 give det(s)^2 = prod d_i > 0, so the determinant is
    // only needed to name the failure when orthogonality does not hold.
    for i in 0..n {
        for j in i + 1..n {
            if dot(&s[i], &s[j]) != 0 {
                if determinant(s).is_zero() {
                    return Err(FourierViolation::ZeroDeterminant);
                }
                return Err(FourierViolation::NotOrthogonal { i: i + 1, j: j + 1 });
            }
        }
    }
    let norms: Vec<u128> = s.iter().map(|r| dot(r, r) as u128).collect();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (s[i][j], s[j][i]);
            let lhs = norms[j] * (a as i128 * a as i128) as u128;
            let rhs = norms[i] * (b as i128 * b as i128) as u128;
            if lhs != rhs || a.signum() != b.signum() {
                return Err(FourierViolation::NotSymmetrizable { i: i + 1, j: j + 1 });
            }
        }
    }
    let norms: Vec<u64> = norms
        .into_iter()
        .map(|d| u64::try_from(d).expect("norm fits in 64 bits"))
        .collect();
    let m = IntegralFourierMatrix {
        n,
        degrees: s[0].clone(),
        s: s.to_vec(),
        norms,
    };
    if let Some((i, j, l)) = m.first_nonintegral_constant() {
        return Err(FourierViolation::NonIntegralStructureConstant {
            i: i + 1,
            j: j + 1,
            l: l + 1,
        });
    }
    Ok(m)
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(s: &[Vec<i64>]) -> BigInt {
    let n = s.len();
    let mut a: Vec<Vec<BigInt>> = s
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    prev * sign
}

impl IntegralFourierMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.s
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.s[i][j]
    }

    pub fn norms(&self) -> &[u64] {
        &self.norms
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// The size `d_1`.
    pub fn size(&self) -> u64 {
        self.norms[0]
    }

    /// For constructions whose output is valid by construction (Kronecker products).
    pub(crate) fn assume_valid(s: Vec<Vec<i64>>) -> Self {
        let norms = s
            .iter()
            .map(|r| r.iter().map(|&x| (x as i128 * x as i128) as u64).sum())
            .collect();
        IntegralFourierMatrix {
            n: s.len(),
            degrees: s[0].clone(),
            s,
            norms,
        }
    }

    /// `d_1 / d_k = g_k^2`.
    fn cofactor(&self, k: usize) -> i128 {
        (self.norms[0] / self.norms[k]) as i128
    }

    /// `d_1 * N_{ij}^l = sum_k g_k^2 s_ki s_kj s_kl`, or `None` on 128-bit overflow.
    fn scaled_constant_i128(&self, i: usize, j: usize, l: usize) -> Option<i128> {
        let mut acc: i128 = 0;
        for k in 0..self.n {
            let (a, b, c) = (self.s[k][i], self.s[k][j], self.s[k][l]);
            if a == 0 || b == 0 || c == 0 {
                continue;
            }
            let term = (a as i128)
                .checked_mul(b as i128)?
                .checked_mul(c as i128)?
                .checked_mul(self.cofactor(k))?;
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }

    /// `d_1 * N_{ij}^l`, exactly.
    fn scaled_constant(&self, i: usize, j: usize, l: usize) -> BigInt {
        match self.scaled_constant_i128(i, j, l) {
            Some(v) => BigInt::from(v),
            None => self.scaled_constant_big(i, j, l),
        }
    }

    fn scaled_constant_big(&self, i: usize, j: usize, l: usize) -> BigInt {
        (0..self.n)
            .map(|k| {
                BigInt::from(self.s[k][i])
                    * BigInt::from(self.s[k][j])
                    * BigInt::from(self.s[k][l])
                    * BigInt::from(self.cofactor(k))
            })
            .sum()
    }

    fn is_integral_constant(&self, i: usize, j: usize, l: usize) -> bool {
        match self.scaled_constant_i128(i, j, l) {
            Some(v) => v % self.norms[0] as i128 == 0,
            None => (self.scaled_constant_big(i, j, l) % BigInt::from(self.norms[0])).is_zero(),
        }
    }

    fn first_nonintegral_constant(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        (0..n).into_par_iter().find_map_first(|i| {
            (i..n).find_map(|j| (j..n).find(|&l| !self.is_integral_constant(i, j, l)).map(|l| (i, j, l)))
        })
    }

    /// Simultaneous permutation: the new row/column `k` is the old index `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        check_perm(perm, self.n)?;
        let s: Vec<Vec<i64>> = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.s[i][j]).collect())
            .collect();
        validate(&s).map_err(Error::from)
    }

    /// Permutes columns only (`perm[k]` is the old column placed at `k`); the result is revalidated.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        check_perm(perm, self.n)?;
        let s: Vec<Vec<i64>> = self
            .s
            .iter()
            .map(|r| perm.iter().map(|&j| r[j]).collect())
            .collect();
        validate(&s).map_err(Error::from)
    }

    /// Permutes rows only; the result is revalidated.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_perm(perm, self.n)?;
        let s: Vec<Vec<i64>> = perm.iter().map(|&i| self.s[i].clone()).collect();
        validate(&s).map_err(Error::from)
    }

    /// The symmetric matrix `s_ij * g_i`.
    pub fn sigma(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.s[i][j] * self.degrees[i]).collect())
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: MatrixJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}

fn check_perm(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// Wire format; norms and degrees are optional on input and checked when present.
#[derive(Deserialize)]
pub struct MatrixJson {
    pub n: Option<usize>,
    pub s: Vec<Vec<i64>>,
    pub norms: Option<Vec<u64>>,
    pub degrees: Option<Vec<i64>>,
}

impl TryFrom<MatrixJson> for IntegralFourierMatrix {
    type Error = Error;
    fn try_from(raw: MatrixJson) -> Result<Self> {
        let m = validate(&raw.s)?;
        if raw.n.is_some_and(|n| n != m.n) {
            return Err(Error::DimensionMismatch {
                expected: m.n,
                got: raw.n.unwrap_or(0),
            });
        }
        if raw.norms.as_ref().is_some_and(|d| *d != m.norms) {
            return Err(Error::InvalidFourier("stated norms differ from row norms".into()));
        }
        if raw.degrees.as_ref().is_some_and(|g| *g != m.degrees) {
            return Err(Error::InvalidFourier("stated degrees differ from first row".into()));
        }
        Ok(m)
    }
}

impl<'de> Deserialize<'de> for IntegralFourierMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for IntegralFourierMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .s
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for row in &self.s {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Structure constants `N_ij^l`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionTensor {
    pub n: usize,
    entries: Vec<i64>,
    pub min: i64,
    pub max: i64,
    pub nonnegative: bool,
}

impl FusionTensor {
    pub fn get(&self, i: usize, j: usize, l: usize) -> i64 {
        self.entries[(i * self.n + j) * self.n + l]
    }

    /// Associativity `sum_m N_ij^m N_ml^k = sum_m N_jl^m N_im^k` for all indices.
    pub fn is_associative(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for k in 0..n {
                        let lhs: i128 = (0..n)
                            .map(|m| self.get(i, j, m) as i128 * self.get(m, l, k) as i128)
                            .sum();
                        let rhs: i128 = (0..n)
                            .map(|m| self.get(j, l, m) as i128 * self.get(i, m, k) as i128)
                            .sum();
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|l| self.get(i, j, l) == self.get(j, i, l))))
    }
}

/// Evaluates `N_ij^l = sum_k s_ki s_kj s_kl / d_k`.
pub fn structure_constants(m: &IntegralFourierMatrix) -> Result<FusionTensor> {
    let n = m.n;
    let d1 = BigInt::from(m.size());
    let mut entries = vec![0i64; n * n * n];
    for i in 0..n {
        for j in i..n {
            for l in j..n {
                let scaled = m.scaled_constant(i, j, l);
                if !(&scaled % &d1).is_zero() {
                    return Err(Error::Internal(format!(
                        "non-integral structure constant at ({},{},{})",
                        i + 1,
                        j + 1,
                        l + 1
                    )));
                }
                let v: i64 = (scaled / &d1)
                    .try_into()
                    .map_err(|_| Error::Internal("structure constant exceeds 64 bits".into()))?;
                for (a, b, c) in [(i, j, l), (i, l, j), (j, i, l), (j, l, i), (l, i, j), (l, j, i)] {
                    entries[(a * n + b) * n + c] = v;
                }
            }
        }
    }
    let min = *entries.iter().min().expect("non-empty");
    let max = *entries.iter().max().expect("non-empty");
    Ok(FusionTensor {
        n,
        entries,
        min,
        max,
        nonnegative: min >= 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PfBound {
    pub holds: bool,
    /// 1-based `(i, j)` with `|s_ij| > s_1j`.
    pub witness: Option<(usize, usize)>,
}

/// Checks `|s_ij| <= s_1j` for all entries.
pub fn pf_bound_holds(m: &IntegralFourierMatrix) -> PfBound {
    for i in 0..m.n {
        for j in 0..m.n {
            if m.s[i][j].abs() > m.degrees[j] {
                return PfBound {
                    holds: false,
                    witness: Some((i + 1, j + 1)),
                };
            }
        }
    }
    PfBound {
        holds: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EqualNormClass {
    /// Entries are `+-1` and the fusion ring is the group ring of `(Z/2)^k`.
    ElementaryAbelian { k: u32 },
    /// The bound fails; the observed entry set is reported for the open `+-1` question.
    Unresolved { entries: BTreeSet<i64> },
}

pub fn classify_equal_norm(m: &IntegralFourierMatrix) -> Result<EqualNormClass> {
    if m.norms.iter().any(|&d| d != m.norms[0]) {
        return Err(Error::Precondition("norms are not all equal".into()));
    }
    let entries: BTreeSet<i64> = m.s.iter().flatten().copied().collect();
    if !pf_bound_holds(m).holds {
        return Ok(EqualNormClass::Unresolved { entries });
    }
    if entries.iter().any(|x| x.abs() != 1) || !m.n.is_power_of_two() {
        return Err(Error::Internal(format!(
            "equal norms with the bound but entries {entries:?} in dimension {}",
            m.n
        )));
    }
    Ok(EqualNormClass::ElementaryAbelian {
        k: m.n.trailing_zeros(),
    })
}

/// Lexicographically least simultaneous permutation fixing the first index.
///
/// Entries are compared in principal order: `(k,0),(0,k),(k,1),(1,k),...,(k,k)` for
/// `k = 0, 1, ...`, so that each prefix depends only on the first indices placed.
pub fn canonical_form(m: &IntegralFourierMatrix) -> IntegralFourierMatrix {
    let order = canonical_permutation(m);
    let s: Vec<Vec<i64>> = order
        .iter()
        .map(|&i| order.iter().map(|&j| m.s[i][j]).collect())
        .collect();
    IntegralFourierMatrix {
        n: m.n,
        degrees: s[0].clone(),
        norms: order.iter().map(|&i| m.norms[i]).collect(),
        s,
    }
}

/// The permutation realising [`canonical_form`] (`perm[k]` is the old index at position `k`).
pub fn canonical_permutation(m: &IntegralFourierMatrix) -> Vec<usize> {
    let n = m.n;
    let flat: Vec<i64> = m.s.iter().flatten().copied().collect();
    let colors: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = m.s[i].iter().map(|x| x.abs()).collect();
            row.sort_unstable();
            let mut col: Vec<i64> = (0..n).map(|k| m.s[k][i]).collect();
            col.sort_unstable();
            let mut c = vec![if i == 0 { 0 } else { 1 }, m.norms[i] as i64, m.s[i][i]];
            c.extend(row);
            c.extend(col);
            c
        })
        .collect();
    canonical_order(&CanonInput {
        n,
        matrix: &flat,
        colors: &colors,
        tail: None,
    })
}

/// Integer square root of the size when it is a perfect square.
pub fn size_root(m: &IntegralFourierMatrix) -> Option<u64> {
    integer_sqrt_u64(m.size())
}

/// `true` when some entry of the absolute matrix is zero.
pub fn has_zero_entry(m: &IntegralFourierMatrix) -> bool {
    m.s.iter().flatten().any(|&x| x == 0)
}

/// Whether `|x|` values of a matrix all equal one.
pub fn all_entries_unit(m: &IntegralFourierMatrix) -> bool {
    m.s.iter().flatten().all(|x| x.abs() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s21() -> IntegralFourierMatrix {
        validate(&[vec![1, 1], vec![1, -1]]).unwrap()
    }

    fn s41() -> IntegralFourierMatrix {
        validate(&[
            vec![1, 1, 1, 1],
            vec![1, 1, -1, -1],
            vec![1, -1, 1, -1],
            vec![1, -1, -1, 1],
        ])
        .unwrap()
    }

    #[test]
    fn validation_examples() {
        assert_eq!(s21().norms(), &[2, 2]);
        assert!(validate(&[vec![1]]).is_ok());
        assert_eq!(
            validate(&[vec![1, 1], vec![1, 1]]),
            Err(FourierViolation::ZeroDeterminant)
        );
        assert_eq!(
            validate(&[vec![1, 1], vec![2, -1]]),
            Err(FourierViolation::FirstColumnNotOne { row: 2 })
        );
        assert_eq!(validate(&[vec![1, 1]]), Err(FourierViolation::NotSquare));
        assert!(matches!(
            validate(&[vec![1, 2], vec![1, 1]]),
            Err(FourierViolation::NotOrthogonal { .. })
        ));
        // orthogonal with first column ones, but not symmetrizable
        assert!(matches!(
            validate(&[vec![1, 1, 0], vec![1, -1, 0], vec![1, 0, 5]]),
            Err(FourierViolation::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn structure_constants_of_z2() {
        let n = structure_constants(&s21()).unwrap();
        assert_eq!(n.get(1, 1, 0), 1);
        assert_eq!(n.get(1, 1, 1), 0);
        assert!(n.nonnegative && n.is_associative() && n.is_commutative());
        for j in 0..2 {
            for l in 0..2 {
                assert_eq!(n.get(0, j, l), (j == l) as i64);
            }
        }
    }

    #[test]
    fn equal_norm_classification() {
        assert_eq!(
            classify_equal_norm(&s21()).unwrap(),
            EqualNormClass::ElementaryAbelian { k: 1 }
        );
        assert_eq!(
            classify_equal_norm(&s41()).unwrap(),
            EqualNormClass::ElementaryAbelian { k: 2 }
        );
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let m = s41();
        let c = canonical_form(&m);
        assert_eq!(canonical_form(&c), c);
        let p = m.permute(&[0, 1, 3, 2]).unwrap();
        assert_eq!(canonical_form(&p), c);
    }

    #[test]
    fn json_round_trip() {
        let m = s41();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"norms\":[4,4,4,4]"));
        let back = IntegralFourierMatrix::from_json_str(&text).unwrap();
        assert_eq!(back, m);
        assert!(IntegralFourierMatrix::from_json_str(r#"{"s":[[1,1],[1,1]]}"#).is_err());
    }
}
