//! Admissible norm vectors `d_1 >= ... >= d_n` of integral Fourier matrices.
//!
//! All `d_i` share one square-free part `p`, so writing `d_i = p e_i^2` turns the
//! condition `sum 1/d_i = 1` into `sum 1/e_i^2 = p`. The recursion picks the `e_i`
//! in ascending order; the largest one is forced to be the lcm of the others.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{CheckedMul, CheckedSub, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{integer_sqrt_u64, squarefree_part};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NormVector {
    /// Non-increasing.
    pub dims: Vec<u64>,
    /// `d_1 / d_i`.
    pub cofactors: Vec<u64>,
}

impl NormVector {
    pub fn new(dims: Vec<u64>) -> Result<Self> {
        let report = validate_norm_vector(&dims);
        if let Some(c) = report.first_failure() {
            return Err(Error::InvalidArgument(format!(
                "{dims:?} is not a norm vector: {c}"
            )));
        }
        let d1 = dims[0];
        let cofactors = dims.iter().map(|d| d1 / d).collect();
        Ok(NormVector { dims, cofactors })
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.dims[0]
    }

    /// Degrees `g_i = sqrt(d_1 / d_i)`.
    pub fn degrees(&self) -> Vec<u64> {
        self.cofactors
            .iter()
            .map(|&c| integer_sqrt_u64(c).expect("cofactor is a square"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormReport {
    pub checks: Vec<NormCheck>,
}

impl NormReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.checks.iter().find(|c| !c.holds).map(|c| c.name)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

pub const CHECK_NONEMPTY_POSITIVE: &str = "non-empty with positive entries";
pub const CHECK_SORTED: &str = "non-increasing";
pub const CHECK_SUM: &str = "sum of 1/d_i equals 1";
pub const CHECK_DIVIDES: &str = "d_i divides d_1";
pub const CHECK_SQUARE_RATIO: &str = "d_1/d_i is a perfect square";
pub const CHECK_LCM: &str = "d_1 = lcm(d_2..d_n)";
pub const CHECK_ODD_SQUARES: &str = "n odd implies every d_i is a square";
pub const CHECK_EVEN_SQUAREFREE: &str = "all d_i share one square-free part";

/// Checks every norm-vector condition separately.
pub fn validate_norm_vector(v: &[u64]) -> NormReport {
    let positive = !v.is_empty() && v.iter().all(|&d| d > 0);
    let mut checks = vec![NormCheck {
        name: CHECK_NONEMPTY_POSITIVE,
        holds: positive,
    }];
    let names = [
        CHECK_SORTED,
        CHECK_SUM,
        CHECK_DIVIDES,
        CHECK_SQUARE_RATIO,
        CHECK_LCM,
        CHECK_ODD_SQUARES,
        CHECK_EVEN_SQUAREFREE,
    ];
    if !positive {
        checks.extend(names.iter().map(|&name| NormCheck { name, holds: false }));
        return NormReport { checks };
    }
    let n = v.len();
    let d1 = v[0];
    let sorted = v.windows(2).all(|w| w[0] >= w[1]);
    let sum_is_one = {
        let l = v.iter().fold(1u128, |acc, &d| acc.lcm(&(d as u128)));
        v.iter().map(|&d| l / d as u128).sum::<u128>() == l
    };
    let divides = v.iter().all(|&d| d1 % d == 0);
    let square_ratio = divides && v.iter().all(|&d| integer_sqrt_u64(d1 / d).is_some());
    let lcm_ok = if n == 1 {
        true
    } else {
        v[1..].iter().fold(1u64, |acc, &d| acc.lcm(&d)) == d1
    };
    let odd_squares = n % 2 == 0 || v.iter().all(|&d| integer_sqrt_u64(d).is_some());
    let p = squarefree_part(v[0]);
    let same_sqf = v.iter().all(|&d| squarefree_part(d) == p);
    for (name, holds) in names.iter().zip([
        sorted,
        sum_is_one,
        divides,
        square_ratio,
        lcm_ok,
        odd_squares,
        same_sqf,
    ]) {
        checks.push(NormCheck { name, holds });
    }
    NormReport { checks }
}

/// Integer type the recursion runs in: `u128` first, `BigUint` when a subtree overflows.
trait Word: Clone + Ord + Integer + Roots + CheckedMul + CheckedSub + From<u64> + Send {}
impl Word for u128 {}
impl Word for BigUint {}

/// Raised when machine words overflow; the subtree is redone in big integers.
struct Overflow;

/// `a / b` in lowest terms, `b > 0`.
#[derive(Clone, Debug)]
struct Frac<T> {
    a: T,
    b: T,
}

impl<T: Word> Frac<T> {
    /// `a/b - 1/e^2`
    fn sub_inv_square(&self, e: &T) -> Result<Frac<T>, Overflow> {
        let e2 = e.checked_mul(e).ok_or(Overflow)?;
        let num = self
            .a
            .checked_mul(&e2)
            .ok_or(Overflow)?
            .checked_sub(&self.b)
            .ok_or(Overflow)?;
        let den = self.b.checked_mul(&e2).ok_or(Overflow)?;
        let g = num.gcd(&den);
        Ok(Frac {
            a: num / g.clone(),
            b: den / g,
        })
    }
}

fn mul<T: Word>(x: &T, y: &T) -> Result<T, Overflow> {
    x.checked_mul(y).ok_or(Overflow)
}

/// Ascending `e` values chosen so far are in `chosen`; `left` terms remain including the largest.
fn recurse<T: Word>(
    chosen: &mut Vec<T>,
    rem: &Frac<T>,
    lcm: &T,
    left: usize,
    out: &mut Vec<Vec<T>>,
) -> Result<(), Overflow> {
    let last = chosen.last().cloned().unwrap_or_else(T::one);
    if left == 1 {
        // The largest entry is the lcm of all others.
        if rem.a.is_one() && mul(lcm, lcm)? == rem.b {
            let mut v = chosen.clone();
            v.push(lcm.clone());
            out.push(v);
        }
        return Ok(());
    }
    if left == 2 {
        return last_pair(chosen, rem, lcm, &last, out);
    }
    // 1/e^2 < rem and left/e^2 >= rem.
    let lo = (rem.b.clone() / rem.a.clone()).sqrt() + T::one();
    let lo = lo.max(last);
    let hi = (mul(&rem.b, &T::from(left as u64))? / rem.a.clone()).sqrt();
    let mut e = lo;
    while e <= hi {
        let next = rem.sub_inv_square(&e)?;
        if !next.a.is_zero() {
            let l = mul(lcm, &(e.clone() / lcm.gcd(&e)))?;
            chosen.push(e.clone());
            recurse(chosen, &next, &l, left - 1, out)?;
            chosen.pop();
        }
        e = e + T::one();
    }
    Ok(())
}

/// Solves `1/e^2 + 1/lcm(L, e)^2 = rem` by writing `e = g u` with `g | L` and `gcd(u, L/g) = 1`,
/// which gives `u^2 = (L^2 + g^2) / (g^2 L^2 rem)`.
fn last_pair<T: Word>(
    chosen: &[T],
    rem: &Frac<T>,
    lcm: &T,
    last: &T,
    out: &mut Vec<Vec<T>>,
) -> Result<(), Overflow> {
    let l2 = mul(lcm, lcm)?;
    for g in divisors_word(lcm.clone()) {
        let g2 = mul(&g, &g)?;
        let num = mul(&(l2.clone() + g2.clone()), &rem.b)?;
        let den = mul(&mul(&g2, &l2)?, &rem.a)?;
        if !num.is_multiple_of(&den) {
            continue;
        }
        let u2 = num / den;
        let u = u2.sqrt();
        if u.clone() * u.clone() != u2 || !u.gcd(&(lcm.clone() / g.clone())).is_one() {
            continue;
        }
        let e = g * u.clone();
        if e < *last {
            continue;
        }
        let mut v = chosen.to_vec();
        v.push(e);
        v.push(mul(lcm, &u)?);
        out.push(v);
    }
    Ok(())
}

fn divisors_word<T: Word>(mut n: T) -> Vec<T> {
    let mut divs = vec![T::one()];
    let mut p = T::from(2);
    while p.clone() * p.clone() <= n {
        if n.is_multiple_of(&p) {
            let base = divs.clone();
            let mut pk = T::one();
            while n.is_multiple_of(&p) {
                n = n / p.clone();
                pk = pk * p.clone();
                divs.extend(base.iter().map(|d| d.clone() * pk.clone()));
            }
        }
        p = p + T::one();
    }
    if !n.is_one() {
        let base = divs.clone();
        divs.extend(base.into_iter().map(|d| d * n.clone()));
    }
    divs
}

fn search_from<T: Word>(n: usize, p: u64, e: u64) -> Result<Vec<Vec<T>>, Overflow> {
    let start = Frac {
        a: T::from(p),
        b: T::one(),
    };
    let e = T::from(e);
    let rem = start.sub_inv_square(&e)?;
    let mut out = Vec::new();
    if rem.a.is_zero() {
        return Ok(out);
    }
    let mut chosen = vec![e.clone()];
    recurse(&mut chosen, &rem, &e, n - 1, &mut out)?;
    Ok(out)
}

/// Every admissible norm vector of dimension `n`, sorted descending, without duplicates.
pub fn enumerate_norm_vectors(n: usize) -> Result<Vec<NormVector>> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if n == 1 {
        return Ok(vec![NormVector {
            dims: vec![1],
            cofactors: vec![1],
        }]);
    }
    let ps: Vec<u64> = if n % 2 == 1 {
        vec![1]
    } else {
        (1..=n as u64).filter(|&p| squarefree_part(p) == p).collect()
    };
    // Split on (p, smallest e) and run the subtrees in parallel.
    let mut starts = Vec::new();
    for &p in &ps {
        let mut e = 1u64;
        while p * e * e <= n as u64 {
            starts.push((p, e));
            e += 1;
        }
    }
    let found: Vec<(u64, Vec<Vec<BigUint>>)> = starts
        .par_iter()
        .map(|&(p, e)| {
            let es = match search_from::<u128>(n, p, e) {
                Ok(v) => v.into_iter().map(|es| es.into_iter().map(BigUint::from).collect()).collect(),
                Err(Overflow) => search_from::<BigUint>(n, p, e)
                    .unwrap_or_else(|_| unreachable!("big integers do not overflow")),
            };
            (p, es)
        })
        .collect();
    let mut set = BTreeSet::new();
    for (p, list) in found {
        for es in list {
            let dims: Vec<u64> = es
                .into_iter()
                .rev()
                .map(|e| {
                    (e.clone() * e * p)
                        .to_u64()
                        .ok_or_else(|| Error::Internal("norm exceeds 64 bits".into()))
                })
                .collect::<Result<_>>()?;
            set.insert(dims);
        }
    }
    let mut out = Vec::with_capacity(set.len());
    for dims in set.into_iter().rev() {
        let report = validate_norm_vector(&dims);
        if !report.all_pass() {
            // The recursion only guarantees sum, divisibility and lcm; parity rules filter here.
            continue;
        }
        let d1 = dims[0];
        let cofactors = dims.iter().map(|d| d1 / d).collect();
        out.push(NormVector { dims, cofactors });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_dimensions() {
        let dims = |n| -> Vec<Vec<u64>> {
            enumerate_norm_vectors(n)
                .unwrap()
                .into_iter()
                .map(|v| v.dims)
                .collect()
        };
        assert_eq!(dims(1), vec![vec![1]]);
        assert_eq!(dims(2), vec![vec![2, 2]]);
        assert!(dims(3).is_empty());
        assert!(dims(4).contains(&vec![4, 4, 4, 4]));
        assert!(dims(5).is_empty());
        assert!(enumerate_norm_vectors(0).is_err());
    }

    #[test]
    fn validation_examples() {
        assert!(validate_norm_vector(&[2, 2]).all_pass());
        let r = validate_norm_vector(&[3, 3, 3]);
        assert_eq!(r.get(CHECK_SQUARE_RATIO), Some(true));
        assert_eq!(r.get(CHECK_ODD_SQUARES), Some(false));
        let r = validate_norm_vector(&[4, 4, 2]);
        assert_eq!(r.get(CHECK_SUM), Some(true));
        assert_eq!(r.get(CHECK_SQUARE_RATIO), Some(false));
        assert!(!validate_norm_vector(&[]).all_pass());
    }

    #[test]
    fn outputs_pass_validation() {
        for n in 1..=9 {
            for v in enumerate_norm_vectors(n).unwrap() {
                assert!(validate_norm_vector(&v.dims).all_pass(), "{:?}", v.dims);
                assert_eq!(v.degrees()[0], 1);
            }
        }
    }
}
