//! Elements of cyclotomic fields `Q(zeta_n)` in the power basis `1, z, ..., z^(phi(n)-1)`.
//!
//! Reduction modulo the `n`-th cyclotomic polynomial makes the representation at a fixed
//! conductor canonical, so equality is a coefficient comparison. Binary operations on
//! elements of different conductors embed both operands into the field of the lcm.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{divisors, euler_phi, parse_rational, prime_factors, squarefree_decompose, Rational};
use crate::error::{Error, Result};

/// Upper bound on supported conductors; keeps the dense representation small.
pub const MAX_CONDUCTOR: u64 = 5040;

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    if let Some(p) = phi_cache().lock().expect("cache poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d a proper divisor of n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        num = exact_div_monic(&num, &den);
    }
    let arc = Arc::new(num);
    phi_cache()
        .lock()
        .expect("cache poisoned")
        .insert(n, arc.clone());
    arc
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &b) in den.iter().enumerate() {
                rem[k + j] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    /// Exactly `phi(conductor)` coefficients.
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    fn check_conductor(n: u64) -> Result<()> {
        if n == 0 || n > MAX_CONDUCTOR {
            return Err(Error::InvalidArgument(format!(
                "conductor {n} outside 1..={MAX_CONDUCTOR}"
            )));
        }
        Ok(())
    }

    /// Builds `sum_e c_e z(n)^e` from `(exponent, coefficient)` pairs; exponents are taken mod `n`.
    pub fn from_terms<I>(conductor: u64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        Self::check_conductor(conductor)?;
        let n = conductor as i64;
        let mut full = vec![Rational::zero(); conductor as usize];
        for (e, c) in terms {
            full[e.rem_euclid(n) as usize] += c;
        }
        Ok(Self::reduce_full(conductor, full))
    }

    /// Reduces a coefficient vector indexed by exponents (any length) modulo `Phi_n`.
    fn reduce_full(conductor: u64, mut full: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(conductor);
        let deg = phi.len() - 1;
        while full.len() > deg {
            let top = full.pop().expect("non-empty");
            if top.is_zero() {
                continue;
            }
            let shift = full.len() - deg;
            for (k, &c) in phi[..deg].iter().enumerate() {
                if c != 0 {
                    full[shift + k] -= &top * Rational::from_integer(BigInt::from(c));
                }
            }
        }
        full.resize(deg, Rational::zero());
        Cyclotomic {
            conductor,
            coeffs: full,
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `z(n)^e`, a primitive `n`-th root of unity raised to `e`.
    pub fn zeta_pow(n: u64, e: i64) -> Result<Self> {
        Self::from_terms(n, [(e, Rational::one())])
    }

    pub fn zeta(n: u64) -> Result<Self> {
        Self::zeta_pow(n, 1)
    }

    /// Positive square root of `d > 0`, or `i * sqrt(-d)` for `d < 0`, via quadratic Gauss sums.
    pub fn sqrt_int(d: i64) -> Result<Self> {
        if d == 0 {
            return Ok(Self::zero());
        }
        let (q, k) = squarefree_decompose(d.unsigned_abs());
        let mut acc = Self::from_int(k as i64);
        for p in prime_factors(q) {
            acc = &acc * &Self::sqrt_prime(p)?;
        }
        if d < 0 {
            acc = &acc * &Self::zeta_pow(4, 1)?;
        }
        Ok(acc)
    }

    /// Positive real square root of a prime.
    fn sqrt_prime(p: u64) -> Result<Self> {
        if p == 2 {
            // z8 + z8^-1
            return Self::from_terms(8, [(1, Rational::one()), (7, Rational::one())]);
        }
        let terms = (1..p).map(|a| {
            let s = legendre(a, p);
            (a as i64, Rational::from_integer(BigInt::from(s)))
        });
        let gauss = Self::from_terms(p, terms)?;
        if p % 4 == 1 {
            Ok(gauss)
        } else {
            // gauss = i*sqrt(p)
            Ok(&gauss * &Self::zeta_pow(4, 3)?)
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coefficients in the power basis of `Q(z(conductor))`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Non-zero `(exponent, coefficient)` pairs of the canonical form.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_one()
    }

    /// Re-expresses the value in `Q(z(new_conductor))`.
    pub fn embed(&self, new_conductor: u64) -> Result<Self> {
        Self::check_conductor(new_conductor)?;
        if new_conductor % self.conductor != 0 {
            return Err(Error::ConductorMismatch {
                from: self.conductor,
                to: new_conductor,
            });
        }
        if new_conductor == self.conductor {
            return Ok(self.clone());
        }
        let step = (new_conductor / self.conductor) as i64;
        Self::from_terms(
            new_conductor,
            self.terms().map(|(e, c)| (e as i64 * step, c.clone())),
        )
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let n = a.conductor.lcm(&b.conductor);
        (
            a.embed(n).expect("lcm conductor exceeds supported range"),
            b.embed(n).expect("lcm conductor exceeds supported range"),
        )
    }

    /// Applies the Galois automorphism `z -> z^k`, `gcd(k, conductor) = 1`.
    pub fn galois(&self, k: i64) -> Result<Self> {
        if (k.rem_euclid(self.conductor as i64) as u64).gcd(&self.conductor) != 1
            && self.conductor > 1
        {
            return Err(Error::InvalidArgument(format!(
                "{k} is not a unit modulo {}",
                self.conductor
            )));
        }
        Self::from_terms(
            self.conductor,
            self.terms().map(|(e, c)| (e as i64 * k, c.clone())),
        )
    }

    /// Complex conjugation `z -> z^-1`.
    pub fn conj(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        self.galois(-1).expect("-1 is always a unit")
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse, by solving the linear system of multiplication by `self`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("inverse of zero".into()));
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(q.recip()).embed(self.conductor)?);
        }
        let d = self.coeffs.len();
        // Column j of the matrix is self * z^j.
        let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d + 1]; d];
        for j in 0..d {
            let col = self * &Self::zeta_pow(self.conductor, j as i64)?;
            for i in 0..d {
                m[i][j] = col.coeffs[i].clone();
            }
        }
        m[0][d] = Rational::one();
        let sol = solve_dense(m).ok_or_else(|| Error::Internal("singular multiplication map".into()))?;
        Ok(Cyclotomic {
            conductor: self.conductor,
            coeffs: sol,
        })
    }

    /// Multiplicative order when the value is a root of unity, `None` otherwise.
    pub fn multiplicative_order(&self) -> Result<Option<u64>> {
        if self.is_zero() {
            return Err(Error::ZeroOrder);
        }
        // Roots of unity in Q(z_n) are +-z_n^k, so the order divides lcm(2, n).
        let bound = self.conductor.lcm(&2);
        for m in divisors(bound) {
            if self.pow(m).is_one() {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    /// Smallest conductor whose field contains the value.
    pub fn minimal_conductor(&self) -> u64 {
        let mut n = self.conductor;
        loop {
            let mut reduced = false;
            for p in prime_factors(n) {
                let m = n / p;
                if self.lies_in(m) {
                    n = m;
                    reduced = true;
                    break;
                }
            }
            if !reduced {
                return n;
            }
        }
    }

    fn lies_in(&self, m: u64) -> bool {
        // Fixed by every automorphism z -> z^k with k = 1 mod m.
        let n = self.conductor;
        let (x, step) = if n % m == 0 { (self.clone(), m) } else { return false };
        let mut k = 1 + step;
        while k < n + step * 2 && k < 2 * n {
            if k.gcd(&n) == 1 {
                let g = x.galois(k as i64).expect("unit");
                if g != x {
                    return false;
                }
            }
            k += step;
        }
        true
    }

    /// The same value represented at its minimal conductor.
    pub fn normalized(&self) -> Self {
        let m = self.minimal_conductor();
        if m == self.conductor {
            return self.clone();
        }
        // Find the preimage by solving in the smaller field: embed the basis of Q(z_m).
        let phi_m = euler_phi(m) as usize;
        let basis: Vec<Self> = (0..phi_m)
            .map(|j| Self::zeta_pow(m, j as i64).and_then(|z| z.embed(self.conductor)))
            .collect::<Result<_>>()
            .expect("basis embeds");
        let d = self.coeffs.len();
        let mut a = vec![vec![Rational::zero(); phi_m + 1]; d];
        for (j, b) in basis.iter().enumerate() {
            for i in 0..d {
                a[i][j] = b.coeffs[i].clone();
            }
        }
        for i in 0..d {
            a[i][phi_m] = self.coeffs[i].clone();
        }
        let sol = solve_overdetermined(a, phi_m).expect("value lies in subfield");
        Cyclotomic {
            conductor: m,
            coeffs: sol,
        }
    }

    /// Complex floating-point approximation (for display and heuristics only).
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (e, c) in self.terms() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * e as f64 / n;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Deterministic total order: by value embedded at the common conductor, coefficient-wise.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        let (a, b) = Self::common(self, other);
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Parses the text form produced by `Display`, e.g. `1/2 + -3*z(8)^3`.
    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty cyclotomic".into()));
        }
        let mut acc = Self::zero();
        for term in split_terms(&compact) {
            let (sign, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' => (true, &term[1..]),
                _ => (false, term),
            };
            let value = match body.find("z(") {
                None => Self::from_rational(parse_rational(body)?),
                Some(pos) => {
                    let coef = body[..pos].trim_end_matches('*');
                    let coef = if coef.is_empty() {
                        Rational::one()
                    } else if coef == "-" {
                        -Rational::one()
                    } else {
                        parse_rational(coef)?
                    };
                    let rest = &body[pos + 2..];
                    let close = rest
                        .find(')')
                        .ok_or_else(|| Error::Parse(format!("missing `)` in `{term}`")))?;
                    let n: u64 = rest[..close]
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad conductor in `{term}`")))?;
                    let after = &rest[close + 1..];
                    let e: i64 = if after.is_empty() {
                        1
                    } else {
                        after
                            .strip_prefix('^')
                            .and_then(|x| x.parse().ok())
                            .ok_or_else(|| Error::Parse(format!("bad exponent in `{term}`")))?
                    };
                    Self::from_terms(n, [(e, coef)])?
                }
            };
            acc = if sign { &acc - &value } else { &acc + &value };
        }
        Ok(acc)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let (a, b) = Self::common(self, other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(x, y)).collect();
        Cyclotomic {
            conductor: a.conductor,
            coeffs,
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.conductor == 1 {
            let q = &self.coeffs[0];
            return Cyclotomic {
                conductor: other.conductor,
                coeffs: other.coeffs.iter().map(|c| c * q).collect(),
            };
        }
        if other.conductor == 1 {
            return other.mul_ref(self);
        }
        let (a, b) = Self::common(self, other);
        let mut full = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    full[i + j] += x * y;
                }
            }
        }
        Self::reduce_full(a.conductor, full)
    }
}

fn split_terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut depth = 0;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if i > start && depth == 0 => {
                let prev = bytes[i - 1];
                if prev != b'^' && prev != b'*' && prev != b'+' && prev != b'-' && prev != b'/' {
                    out.push(&s[start..i]);
                    start = i;
                }
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else if r == 0 {
        0
    } else {
        -1
    }
}

/// Gaussian elimination on an augmented square system.
pub(crate) fn solve_dense(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (src, dst) = if r < col {
                    let (lo, hi) = m.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = m.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Solves a consistent system with `rows >= cols` unknowns; `None` when inconsistent.
fn solve_overdetermined(mut m: Vec<Vec<Rational>>, cols: usize) -> Option<Vec<Rational>> {
    let rows = m.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(piv) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, piv);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let prow = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (d, s) in row.iter_mut().zip(&prow) {
                    *d -= &f * s;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = m[r][cols].clone();
    }
    Some(sol)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{c}")?;
            } else if e == 1 {
                write!(f, "{c}*z({})", self.conductor)?;
            } else {
                write!(f, "{c}*z({})^{e}", self.conductor)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.mul_ref(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.conductor == rhs.conductor {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl Mul<&Rational> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Rational) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * rhs).collect(),
        }
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

#[allow(dead_code)]
fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;
    use proptest::prelude::*;

    fn z(n: u64, e: i64) -> Cyclotomic {
        Cyclotomic::zeta_pow(n, e).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(24), vec![1, 0, 0, 0, -1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn embedding_examples() {
        let minus_one = Cyclotomic::from_terms(2, [(1, Rational::one())]).unwrap();
        let e = minus_one.embed(24).unwrap();
        assert_eq!(e.to_rational(), Some(rational(-1, 1)));
        assert_eq!(e.conductor(), 24);
        assert_eq!(z(3, 1).embed(12).unwrap(), z(12, 4));
        let sqrt2 = &z(8, 1) + &z(8, -1);
        let s24 = sqrt2.embed(24).unwrap();
        assert_eq!((&s24 * &s24).to_rational(), Some(rational(2, 1)));
        assert!(z(8, 1).embed(12).is_err());
    }

    #[test]
    fn roots_of_unity_orders() {
        assert_eq!(z(24, 1).multiplicative_order().unwrap(), Some(24));
        assert_eq!(Cyclotomic::one().multiplicative_order().unwrap(), Some(1));
        assert_eq!(Cyclotomic::from_int(-1).multiplicative_order().unwrap(), Some(2));
        assert_eq!((-z(24, 7)).multiplicative_order().unwrap(), Some(24));
        assert_eq!((-z(3, 1)).multiplicative_order().unwrap(), Some(6));
        assert_eq!(Cyclotomic::from_int(2).multiplicative_order().unwrap(), None);
        assert!(Cyclotomic::zero().multiplicative_order().is_err());
        let half = &(&z(8, 1) + &z(8, -1)) * &rational(1, 2);
        assert_eq!(half.multiplicative_order().unwrap(), None);
    }

    #[test]
    fn square_roots_are_positive() {
        for d in [2i64, 3, 5, 6, 7, 12, 21, 36, 72, 1764] {
            let r = Cyclotomic::sqrt_int(d).unwrap();
            assert_eq!((&r * &r).to_rational(), Some(rational(d, 1)), "d={d}");
            let (re, im) = r.to_complex_f64();
            assert!((re - (d as f64).sqrt()).abs() < 1e-9 && im.abs() < 1e-9, "d={d}");
        }
        let i = Cyclotomic::sqrt_int(-1).unwrap();
        assert_eq!(i, z(4, 1));
        let r = Cyclotomic::sqrt_int(-3).unwrap();
        assert_eq!((&r * &r).to_rational(), Some(rational(-3, 1)));
    }

    #[test]
    fn inverse_and_conjugation() {
        let x = &z(12, 1) + &Cyclotomic::from_int(2);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let u = z(24, 5);
        assert!((&u * &u.conj()).is_one());
        assert!(Cyclotomic::zero().inv().is_err());
    }

    #[test]
    fn minimal_conductor_detection() {
        assert_eq!(z(12, 4).minimal_conductor(), 3);
        assert_eq!(Cyclotomic::sqrt_int(2).unwrap().embed(24).unwrap().minimal_conductor(), 8);
        assert_eq!(Cyclotomic::from_int(5).embed(24).unwrap().minimal_conductor(), 1);
        let n = z(24, 8).normalized();
        assert_eq!(n.conductor(), 3);
        assert_eq!(n, z(3, 1));
    }

    #[test]
    fn text_round_trip() {
        let x = &(&z(24, 1) * &rational(-3, 2)) + &Cyclotomic::from_int(7);
        let s = x.to_string();
        assert_eq!(Cyclotomic::parse(&s).unwrap(), x);
        assert_eq!(Cyclotomic::parse("z(24)").unwrap(), z(24, 1));
        assert_eq!(Cyclotomic::parse("-1*z(24)^7").unwrap(), -z(24, 7));
        assert_eq!(Cyclotomic::parse("0").unwrap(), Cyclotomic::zero());
        assert_eq!(Cyclotomic::zero().to_string(), "0");
    }

    fn arb_cyclo() -> impl Strategy<Value = Cyclotomic> {
        let conductors = prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 12, 15, 24]);
        (conductors, prop::collection::vec((0i64..24, -5i64..6, 1i64..4), 0..5)).prop_map(
            |(n, terms)| {
                Cyclotomic::from_terms(n, terms.into_iter().map(|(e, p, q)| (e, rational(p, q))))
                    .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb_cyclo(), y in arb_cyclo(), w in arb_cyclo()) {
            prop_assert_eq!(&(&x * &y) * &w, &x * &(&y * &w));
            prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
            prop_assert_eq!(&x * &y, &y * &x);
            // conjugation is a ring involution
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
            prop_assert_eq!(x.conj().conj(), x.clone());
        }

        #[test]
        fn roots_of_unity_have_unit_norm(n in 1u64..25, e in 0i64..48) {
            let u = Cyclotomic::zeta_pow(n, e).unwrap();
            prop_assert!((&u * &u.conj()).is_one());
            let m = u.multiplicative_order().unwrap().unwrap();
            prop_assert!(u.pow(m).is_one());
            for j in 1..m {
                prop_assert!(!u.pow(j).is_one());
            }
        }
    }
}
