//! Elements of `Q[x]/(f)` for a monic irreducible integer polynomial `f` of degree at most 4.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{format_poly, mul, parse_poly, rem_monic, trim};
use super::{cyclotomic_polynomial, divisors, euler_phi, integer_sqrt, Cyclotomic, Rational};
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 4;

/// Which root of the minimal polynomial the generator `x` denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootChoice {
    /// Purely symbolic; any root (all results are Galois-invariant statements).
    Abstract,
    /// The unique real root inside `[lo, hi]`.
    Interval(Rational, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    min_poly: Vec<BigInt>,
    rep: Vec<Rational>,
    root: RootChoice,
}

impl AlgebraicNumber {
    /// The generator `x` of `Q[x]/(f)`; `f` is given low degree first and must be monic irreducible.
    pub fn generator(min_poly: Vec<BigInt>, root: RootChoice) -> Result<Self> {
        let deg = min_poly.len().saturating_sub(1);
        if deg == 0 || deg > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "minimal polynomial degree {deg} outside 1..={MAX_DEGREE}"
            )));
        }
        if !min_poly[deg].is_one() {
            return Err(Error::InvalidArgument("minimal polynomial must be monic".into()));
        }
        if !is_irreducible(&min_poly) {
            return Err(Error::InvalidArgument(format!(
                "{} is reducible over the rationals",
                format_poly(&min_poly, "x")
            )));
        }
        if let RootChoice::Interval(lo, hi) = &root {
            let roots = count_sign_changes(&min_poly, lo, hi);
            if roots != 1 {
                return Err(Error::InvalidArgument(
                    "root interval must isolate exactly one simple real root".into(),
                ));
            }
        }
        let rep = if deg == 1 {
            vec![-Rational::from_integer(min_poly[0].clone())]
        } else {
            vec![Rational::zero(), Rational::one()]
        };
        Ok(AlgebraicNumber { min_poly, rep, root })
    }

    /// Element `p(x)` of the same field as `self`.
    pub fn with_rep(&self, rep: Vec<Rational>) -> Self {
        AlgebraicNumber {
            min_poly: self.min_poly.clone(),
            rep: rem_monic(rep, &self.min_poly),
            root: self.root.clone(),
        }
    }

    pub fn from_rational_in(&self, q: Rational) -> Self {
        self.with_rep(vec![q])
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn representative(&self) -> &[Rational] {
        &self.rep
    }

    pub fn root_choice(&self) -> &RootChoice {
        &self.root
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.rep.len() == 1 && self.rep[0].is_one()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self.rep.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.rep[0].clone()),
            _ => None,
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.min_poly != other.min_poly || self.root != other.root {
            return Err(Error::NoCommonField(format!(
                "{} vs {}",
                format_poly(&self.min_poly, "x"),
                format_poly(&other.min_poly, "x")
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let n = self.rep.len().max(other.rep.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.rep.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.rep.iter().enumerate() {
            out[i] += c;
        }
        trim(&mut out);
        Ok(self.with_rep(out))
    }

    pub fn neg(&self) -> Self {
        self.with_rep(self.rep.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with_rep(mul(&self.rep, &other.rep)))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.from_rational_in(Rational::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Inverse via the linear map of multiplication by `self` on the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("inverse of zero".into()));
        }
        let d = self.degree();
        let mut m = vec![vec![Rational::zero(); d + 1]; d];
        for j in 0..d {
            let mut xj = vec![Rational::zero(); j + 1];
            xj[j] = Rational::one();
            let col = rem_monic(mul(&self.rep, &xj), &self.min_poly);
            for (i, c) in col.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        m[0][d] = Rational::one();
        let sol = super::cyclotomic::solve_dense(m)
            .ok_or_else(|| Error::Internal("singular multiplication map".into()))?;
        let mut rep = sol;
        trim(&mut rep);
        Ok(self.with_rep(rep))
    }

    /// Multiplicative order when the element is a root of unity.
    pub fn multiplicative_order(&self) -> Result<Option<u64>> {
        if self.is_zero() {
            return Err(Error::ZeroOrder);
        }
        // An order-m root of unity generates Q(zeta_m), so phi(m) divides the degree.
        let deg = self.degree() as u64;
        let mut candidates: Vec<u64> = (1..=60u64)
            .filter(|&m| deg % euler_phi(m) == 0)
            .collect();
        candidates.sort_unstable();
        for m in candidates {
            if self.pow(m).is_one() {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    /// Real numerical value of the chosen root (interval choice only).
    fn real_root_f64(&self) -> Option<f64> {
        let RootChoice::Interval(lo, hi) = &self.root else {
            return None;
        };
        let f = |x: f64| {
            self.min_poly
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
        };
        let (mut a, mut b) = (lo.to_f64()?, hi.to_f64()?);
        let fa = f(a);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (f(mid) > 0.0) == (fa > 0.0) {
                a = mid;
            } else {
                b = mid;
            }
        }
        Some(0.5 * (a + b))
    }

    /// Embeds the value into a cyclotomic field when the generator is quadratic or a root of unity.
    pub fn to_cyclotomic(&self) -> Result<Cyclotomic> {
        if let Some(q) = self.to_rational() {
            return Ok(Cyclotomic::from_rational(q));
        }
        let d = self.degree();
        let gen = if d == 2 {
            // x = (-b + sign*sqrt(disc)) / 2
            let b = &self.min_poly[1];
            let c = &self.min_poly[0];
            let disc = b * b - BigInt::from(4) * c;
            let disc_i64 = disc
                .to_i64()
                .ok_or_else(|| Error::NoCommonField("discriminant too large".into()))?;
            let root = Cyclotomic::sqrt_int(disc_i64)?;
            let sign = match self.real_root_f64() {
                Some(v) => {
                    let plus = (-b.to_f64().unwrap_or(0.0) + (disc_i64 as f64).sqrt()) / 2.0;
                    if (v - plus).abs() < 1e-9 {
                        1
                    } else {
                        -1
                    }
                }
                None => 1,
            };
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            let signed = if sign > 0 { root } else { -root };
            &(&signed - &Cyclotomic::from_rational(Rational::from_integer(b.clone()))) * &half
        } else {
            // Only cyclotomic minimal polynomials embed; the generator is then zeta_m.
            let m = (1..=60u64)
                .find(|&m| {
                    cyclotomic_polynomial(m)
                        .iter()
                        .map(|&c| BigInt::from(c))
                        .collect::<Vec<_>>()
                        == self.min_poly
                })
                .ok_or_else(|| {
                    Error::NoCommonField(format!(
                        "{} is not quadratic or cyclotomic",
                        format_poly(&self.min_poly, "x")
                    ))
                })?;
            Cyclotomic::zeta(m)?
        };
        let mut acc = Cyclotomic::zero();
        let mut p = Cyclotomic::one();
        for c in &self.rep {
            acc = &acc + &(&p * c);
            p = &p * &gen;
        }
        Ok(acc)
    }

    /// Parses `poly mod minpoly` in the variable `x`, e.g. `x mod x^2+5*x+1`.
    pub fn parse(s: &str) -> Result<Self> {
        let (rep, rest) = s
            .split_once(" mod ")
            .ok_or_else(|| Error::Parse(format!("expected `poly mod minpoly`, got `{s}`")))?;
        let (poly_txt, root) = match rest.split_once(" in ") {
            Some((p, iv)) => (p, parse_interval(iv)?),
            None => (rest, RootChoice::Abstract),
        };
        let f = parse_poly(poly_txt, "x")?;
        if f.iter().any(|c| !c.is_integer()) {
            return Err(Error::Parse("minimal polynomial must have integer coefficients".into()));
        }
        let f: Vec<BigInt> = f.into_iter().map(|c| c.to_integer()).collect();
        let gen = Self::generator(f, root)?;
        Ok(gen.with_rep(parse_poly(rep, "x")?))
    }
}

fn parse_interval(s: &str) -> Result<RootChoice> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad interval `{s}`")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("bad interval `{s}`")))?;
    Ok(RootChoice::Interval(
        super::parse_rational(a)?,
        super::parse_rational(b)?,
    ))
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mod {}",
            format_poly(&self.rep, "x"),
            format_poly(&self.min_poly, "x")
        )?;
        if let RootChoice::Interval(lo, hi) = &self.root {
            write!(f, " in [{lo},{hi}]")?;
        }
        Ok(())
    }
}

/// Irreducibility over Q for monic integer polynomials of degree at most 4.
fn is_irreducible(f: &[BigInt]) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    // Integer roots divide the constant term.
    if f[0].is_zero() {
        return false;
    }
    let c0 = f[0].abs();
    let eval = |x: &BigInt| f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    for d in divisors_big(&c0) {
        if eval(&d).is_zero() || eval(&-d).is_zero() {
            return false;
        }
    }
    if deg <= 3 {
        return true;
    }
    // x^4 + p3 x^3 + p2 x^2 + p1 x + p0 = (x^2 + a x + b)(x^2 + c x + e)
    let (p0, p1, p2, p3) = (&f[0], &f[1], &f[2], &f[3]);
    for b in divisors_big(&c0).into_iter().flat_map(|d| [d.clone(), -d]) {
        let e = p0 / &b;
        let ac = p2 - &b - &e;
        let disc = p3 * p3 - BigInt::from(4) * &ac;
        let Some(r) = integer_sqrt(&disc) else { continue };
        if (p3 + &r).is_odd() {
            continue;
        }
        let a = (p3 + &r) / 2;
        let c = p3 - &a;
        if &a * &e + &b * &c == *p1 || &c * &e + &b * &a == *p1 {
            return false;
        }
    }
    true
}

fn divisors_big(n: &BigInt) -> Vec<BigInt> {
    match n.to_u64() {
        Some(v) => divisors(v).into_iter().map(BigInt::from).collect(),
        None => {
            let mut out = Vec::new();
            let mut d = BigInt::one();
            while &d * &d <= *n {
                if (n % &d).is_zero() {
                    out.push(d.clone());
                    out.push(n / &d);
                }
                d += 1;
            }
            out
        }
    }
}

/// Number of sign changes of `f` sampled at the interval ends (odd means a root inside).
fn count_sign_changes(f: &[BigInt], lo: &Rational, hi: &Rational) -> usize {
    let eval = |x: &Rational| {
        f.iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    };
    let (a, b) = (eval(lo), eval(hi));
    if lo >= hi {
        return 0;
    }
    // Refine on a grid so that two roots in the interval are detected for small degree.
    let steps = 64;
    let mut changes = 0;
    let mut prev = a.clone();
    for k in 1..=steps {
        let x = lo + (hi - lo) * Rational::new(BigInt::from(k), BigInt::from(steps));
        let v = if k == steps { b.clone() } else { eval(&x) };
        if v.is_zero() || (prev.is_positive() != v.is_positive() && !prev.is_zero()) {
            changes += 1;
        }
        prev = v;
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    fn alpha() -> AlgebraicNumber {
        AlgebraicNumber::parse("x mod x^2+5*x+1").unwrap()
    }

    #[test]
    fn alpha_is_not_a_root_of_unity() {
        assert_eq!(alpha().multiplicative_order().unwrap(), None);
        let inv = alpha().inv().unwrap();
        assert!(alpha().mul(&inv).unwrap().is_one());
        // alpha^-1 = -x - 5
        assert_eq!(inv.to_string(), "-x-5 mod x^2+5*x+1");
    }

    #[test]
    fn roots_of_unity_in_small_fields() {
        let w = AlgebraicNumber::parse("x mod x^2+x+1").unwrap();
        assert_eq!(w.multiplicative_order().unwrap(), Some(3));
        assert_eq!(w.neg().multiplicative_order().unwrap(), Some(6));
        let i = AlgebraicNumber::parse("x mod x^2+1").unwrap();
        assert_eq!(i.multiplicative_order().unwrap(), Some(4));
        let z8 = AlgebraicNumber::parse("x mod x^4+1").unwrap();
        assert_eq!(z8.multiplicative_order().unwrap(), Some(8));
        assert!(AlgebraicNumber::parse("0 mod x^2+1").unwrap().multiplicative_order().is_err());
    }

    #[test]
    fn reducible_polynomials_are_rejected() {
        assert!(AlgebraicNumber::parse("x mod x^2-1").is_err());
        assert!(AlgebraicNumber::parse("x mod x^4+4").is_err()); // (x^2+2x+2)(x^2-2x+2)
        assert!(AlgebraicNumber::parse("x mod x^4-5*x^2+6").is_err());
        assert!(AlgebraicNumber::parse("x mod x^4-2").is_ok());
    }

    #[test]
    fn quadratic_embedding_matches_minimal_polynomial() {
        let c = alpha().to_cyclotomic().unwrap();
        // alpha^2 + 5 alpha + 1 = 0
        let v = &(&(&c * &c) + &(&c * &rational(5, 1))) + &Cyclotomic::one();
        assert!(v.is_zero());
        assert_eq!(c.minimal_conductor(), 21);
        let chosen = AlgebraicNumber::parse("x mod x^2+5*x+1 in [-1,0]").unwrap();
        let (re, _) = chosen.to_cyclotomic().unwrap().to_complex_f64();
        assert!(re > -1.0 && re < 0.0);
        let other = AlgebraicNumber::parse("x mod x^2+5*x+1 in [-5,-4]").unwrap();
        let (re, _) = other.to_cyclotomic().unwrap().to_complex_f64();
        assert!(re > -5.0 && re < -4.0);
    }

    #[test]
    fn text_round_trip() {
        for s in ["x mod x^2+5*x+1", "-1/2*x+3 mod x^2+x+1", "x^3 mod x^4-2 in [1,2]"] {
            let a = AlgebraicNumber::parse(s).unwrap();
            assert_eq!(AlgebraicNumber::parse(&a.to_string()).unwrap(), a);
        }
    }
}
