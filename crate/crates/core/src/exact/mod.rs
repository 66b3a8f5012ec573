//! Exact arithmetic: big rationals, cyclotomic numbers and small number fields.

mod algebraic;
mod cyclotomic;
mod number;
mod poly;

pub use algebraic::{AlgebraicNumber, RootChoice};
pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};
pub use number::ExactNumber;
pub use poly::{format_poly, parse_poly};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer square root of a perfect square, `None` otherwise.
pub fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Machine-word variant of [`integer_sqrt`].
pub fn integer_sqrt_u64(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Largest `r` with `r*r <= n`.
pub fn isqrt_floor(n: u64) -> u64 {
    n.sqrt()
}

/// Square-free part of a positive integer: the unique square-free `q` with `n = q * k^2`.
pub fn squarefree_part(mut n: u64) -> u64 {
    assert!(n > 0, "square-free part of zero");
    let mut q = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            q *= p;
        }
        p += 1;
    }
    q * n
}

/// Splits `n = q * k^2` with `q` square-free and returns `(q, k)`.
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    let q = squarefree_part(n);
    let k = integer_sqrt_u64(n / q).expect("quotient by square-free part is a square");
    (q, k)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Prime factors of `n` (distinct, ascending).
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn rational_from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Returns the value as an integer when the rational is integral.
pub fn rational_to_i64(q: &Rational) -> Option<i64> {
    if q.denom().is_one() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integer_sqrt_examples() {
        assert_eq!(integer_sqrt(&BigInt::from(36)), Some(BigInt::from(6)));
        assert_eq!(integer_sqrt(&BigInt::from(0)), Some(BigInt::from(0)));
        assert_eq!(integer_sqrt(&BigInt::from(2)), None);
        assert_eq!(integer_sqrt(&BigInt::from(-4)), None);
    }

    #[test]
    fn integer_sqrt_of_squares_up_to_a_million() {
        for k in 0u64..=1_000_000 {
            assert_eq!(integer_sqrt_u64(k * k), Some(k));
        }
        let k = BigInt::from(1_000_000_007u64);
        assert_eq!(integer_sqrt(&(&k * &k)), Some(k.clone()));
        assert_eq!(integer_sqrt(&(&k * &k + 1)), None);
    }

    #[test]
    fn squarefree_helpers() {
        assert_eq!(squarefree_part(12), 3);
        assert_eq!(squarefree_part(36), 1);
        assert_eq!(squarefree_decompose(72), (2, 6));
        assert_eq!(euler_phi(24), 8);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6").unwrap(), rational(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rational_from_int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..30).prop_map(|(p, q)| rational(p, q))
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert!(a.denom().is_positive());
            if !a.is_zero() {
                prop_assert_eq!(&a * a.recip(), Rational::one());
            }
        }
    }
}
