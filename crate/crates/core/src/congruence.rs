//! Congruence multiplication tables, the modulus invariant and two constructions of new
//! Fourier matrices (Kronecker product and the six-dimensional extension).

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{integer_sqrt_u64, Rational};
use crate::fourier::{pf_bound_holds, structure_constants, validate, IntegralFourierMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmtReport {
    pub is_square_size: bool,
    pub w: Option<u64>,
    /// `g_i s_ij = g_i g_j (mod w)` for all `i, j`; false when the size is not a square.
    pub congruence_holds: bool,
    /// `Sigma_ij = s_ij g_i`.
    pub sigma: Vec<Vec<i64>>,
}

impl CmtReport {
    pub fn is_cmt(&self) -> bool {
        self.is_square_size && self.congruence_holds
    }
}

pub fn is_cmt(m: &IntegralFourierMatrix) -> CmtReport {
    let sigma = m.sigma();
    let w = integer_sqrt_u64(m.size());
    let congruence_holds = match w {
        Some(w) => {
            let w = w as i128;
            let g = m.degrees();
            (0..m.n()).all(|i| {
                (0..m.n()).all(|j| (sigma[i][j] as i128 - g[i] as i128 * g[j] as i128) % w == 0)
            })
        }
        None => false,
    };
    CmtReport {
        is_square_size: w.is_some(),
        w,
        congruence_holds,
        sigma,
    }
}

/// Greatest `w` with `g_i s_ij = g_i g_j (mod w)`; infinite when every congruence is an equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modulus {
    Finite(u64),
    Infinite,
}

impl Modulus {
    pub fn gcd(self, other: Modulus) -> Modulus {
        match (self, other) {
            (Modulus::Infinite, x) | (x, Modulus::Infinite) => x,
            (Modulus::Finite(a), Modulus::Finite(b)) => Modulus::Finite(a.gcd(&b)),
        }
    }

    pub fn value(self) -> Option<u64> {
        match self {
            Modulus::Finite(v) => Some(v),
            Modulus::Infinite => None,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Finite(v) => write!(f, "{v}"),
            Modulus::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for Modulus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Modulus::Finite(v) => s.serialize_u64(*v),
            Modulus::Infinite => s.serialize_str("infinity"),
        }
    }
}

pub fn modulus(m: &IntegralFourierMatrix) -> Modulus {
    let g = m.degrees();
    let mut acc: u64 = 0;
    for i in 0..m.n() {
        for j in 0..m.n() {
            let diff = (g[i] as i128 * m.entry(i, j) as i128 - g[i] as i128 * g[j] as i128).unsigned_abs();
            acc = acc.gcd(&(diff as u64));
        }
    }
    if acc == 0 {
        Modulus::Infinite
    } else {
        Modulus::Finite(acc)
    }
}

/// Kronecker product; index pair `(i1, i2)` maps to `i1 * b.n() + i2`.
pub fn tensor(a: &IntegralFourierMatrix, b: &IntegralFourierMatrix) -> Result<IntegralFourierMatrix> {
    let (na, nb) = (a.n(), b.n());
    let n = na * nb;
    let mut rows = vec![vec![0i64; n]; n];
    for i1 in 0..na {
        for i2 in 0..nb {
            for j1 in 0..na {
                for j2 in 0..nb {
                    rows[i1 * nb + i2][j1 * nb + j2] = a
                        .entry(i1, j1)
                        .checked_mul(b.entry(i2, j2))
                        .ok_or_else(|| Error::InvalidArgument("tensor entry overflows".into()))?;
                }
            }
        }
    }
    // orthogonality, symmetrizability and the structure constants all factor over the product
    let m = IntegralFourierMatrix::assume_valid(rows);
    debug_assert!(n > 64 || validate(m.rows()).is_ok());
    Ok(m)
}

/// The extension by a `(Z/2)^2` block with `b = 2 sqrt(d_1)`, of dimension `n + 6` and size `16 d_1`.
pub fn plus6(m: &IntegralFourierMatrix) -> Result<IntegralFourierMatrix> {
    let rows: Vec<Vec<Rational>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    plus6_rational(&rows)
}

/// As [`plus6`] for a rational matrix whose doubled entries are integers; the result must
/// still pass full validation.
pub fn plus6_rational(s: &[Vec<Rational>]) -> Result<IntegralFourierMatrix> {
    let n = s.len();
    if n == 0 || s.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix must be square and nonempty".into()));
    }
    let d1: Rational = s[0].iter().map(|x| x * x).sum();
    let sqrt_part = |v: &num_bigint::BigInt| v.to_u64().and_then(integer_sqrt_u64);
    let root = match (sqrt_part(d1.numer()), sqrt_part(d1.denom())) {
        (Some(a), Some(c)) if a > 0 => Rational::new((a as i64).into(), (c as i64).into()),
        _ => return Err(Error::Precondition(format!("size {d1} is not the square of a rational"))),
    };
    let b2 = &root * &Rational::from_integer(2.into());
    let b = b2
        .to_integer()
        .to_i64()
        .filter(|_| b2.is_integer())
        .ok_or_else(|| Error::Precondition(format!("2 sqrt(size) = {b2} is not an integer")))?;
    let two = Rational::from_integer(2.into());
    let doubled = |x: &Rational| -> Result<i64> {
        let y = x * &two;
        if !y.is_integer() {
            return Err(Error::Precondition(format!("entry {x} is not a half-integer")));
        }
        y.to_integer()
            .to_i64()
            .ok_or_else(|| Error::InvalidArgument("entry overflows".into()))
    };
    let total = n + 6;
    let mut rows = Vec::with_capacity(total);
    let signs = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    for sg in signs {
        let mut r = vec![1i64; 4];
        for x in &s[0][1..] {
            r.push(doubled(x)?);
        }
        r.extend(sg.iter().map(|&e| e * b));
        rows.push(r);
    }
    for srow in &s[1..] {
        let mut r = vec![1i64; 4];
        for x in &srow[1..] {
            r.push(doubled(x)?);
        }
        r.extend([0, 0, 0]);
        rows.push(r);
    }
    for sg in [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]] {
        let mut r = vec![1, sg[0], sg[1], sg[2]];
        r.extend(std::iter::repeat(0).take(n + 2));
        rows.push(r);
    }
    validate(&rows).map_err(Error::from)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub holds: bool,
    /// First violating indices (0-based) when the property fails.
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongrestReport {
    pub w: u64,
    pub checks: Vec<PropertyCheck>,
    /// Number of degrees equal to one.
    pub unit_degrees: usize,
    /// Whether some degree equals `w / 2`; expected whenever `unit_degrees > 1` but unproven.
    pub has_half_degree: bool,
}

impl CongrestReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// True when the unproven half-degree observation is contradicted.
    pub fn half_degree_flagged(&self) -> bool {
        self.unit_degrees > 1 && !self.has_half_degree
    }
}

pub const PROP_SMALL_PRODUCT: &str = "small product forces sigma = g_i g_j";
pub const PROP_DIVISIBLE_PRODUCT: &str = "w | g_i g_j forces sigma = 0";
pub const PROP_LOWER_BOUND: &str = "g_i g_j < w forces sigma >= -w/2";
pub const PROP_UNIT_DEGREES: &str = "at most four unit degrees";
pub const PROP_UNIT_DEGREES_NONNEG: &str = "unit degree count in {1, 2, 4} when nonnegative";
pub const PROP_DEGREE_SUMS: &str = "small-product degree sum bounded by the rest";

/// Checks the consequences of the congruences for a table that also satisfies the
/// entry bound `|s_ij| <= g_j`.
pub fn congrest_check(m: &IntegralFourierMatrix) -> Result<CongrestReport> {
    let rep = is_cmt(m);
    if !rep.is_cmt() {
        return Err(Error::Precondition("matrix is not a congruence multiplication table".into()));
    }
    let pf = pf_bound_holds(m);
    if !pf.holds {
        return Err(Error::Precondition(format!(
            "entry bound fails at {:?}",
            pf.witness.map(|(i, j)| (i + 1, j + 1))
        )));
    }
    let w = rep.w.expect("square size") as i128;
    let g: Vec<i128> = m.degrees().iter().map(|&x| x as i128).collect();
    let n = m.n();
    let sig = &rep.sigma;
    let pairwise = |name: &str, ok: &dyn Fn(usize, usize) -> bool| {
        let witness = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !ok(i, j));
        PropertyCheck {
            name: name.into(),
            holds: witness.is_none(),
            witness,
        }
    };
    let mut checks = vec![
        pairwise(PROP_SMALL_PRODUCT, &|i, j| {
            let p = g[i] * g[j];
            2 * p >= w || sig[i][j] as i128 == p
        }),
        pairwise(PROP_DIVISIBLE_PRODUCT, &|i, j| {
            (g[i] * g[j]) % w != 0 || sig[i][j] == 0
        }),
        pairwise(PROP_LOWER_BOUND, &|i, j| {
            g[i] * g[j] >= w || 2 * sig[i][j] as i128 >= -w
        }),
    ];
    let unit = g.iter().filter(|&&x| x == 1).count();
    checks.push(PropertyCheck {
        name: PROP_UNIT_DEGREES.into(),
        holds: unit <= 4,
        witness: None,
    });
    let nonneg = structure_constants(m)?.nonnegative;
    checks.push(PropertyCheck {
        name: PROP_UNIT_DEGREES_NONNEG.into(),
        holds: !nonneg || matches!(unit, 1 | 2 | 4),
        witness: None,
    });
    let sums_fail = (0..n).find(|&i| {
        let (mut small, mut big) = (0i128, 0i128);
        for j in 0..n {
            if 2 * g[i] * g[j] < w {
                small += g[j] * g[j];
            } else {
                big += g[j] * g[j];
            }
        }
        small > big
    });
    checks.push(PropertyCheck {
        name: PROP_DEGREE_SUMS.into(),
        holds: sums_fail.is_none(),
        witness: sums_fail.map(|i| (i, i)),
    });
    Ok(CongrestReport {
        w: w as u64,
        checks,
        unit_degrees: unit,
        has_half_degree: g.iter().any(|&x| 2 * x == w),
    })
}

/// The three power sums `sum_i s_ij^p d_1 / d_i`, `p = 1, 2, 3`, reduced modulo `d_1`,
/// for each column `j`. All vanish for a valid matrix.
pub fn power_sum_residues(m: &IntegralFourierMatrix) -> Vec<[u64; 3]> {
    let n = m.n();
    let d1 = m.size() as i128;
    let g2: Vec<i128> = m.degrees().iter().map(|&x| (x as i128) * (x as i128)).collect();
    (0..n)
        .map(|j| {
            let mut out = [0u64; 3];
            for (p, slot) in out.iter_mut().enumerate() {
                let mut acc = num_bigint::BigInt::zero();
                for i in 0..n {
                    let x = num_bigint::BigInt::from(m.entry(i, j)).pow(p as u32 + 1);
                    acc += x * g2[i];
                }
                let r = acc.mod_floor(&d1.into());
                *slot = r.abs().to_u64().unwrap_or(u64::MAX);
            }
            out
        })
        .collect()
}
