//! Dense univariate polynomials over the rationals, coefficients stored low degree first.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{parse_rational, Rational};
use crate::error::{Error, Result};

pub(crate) fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `p` modulo the monic integer polynomial `m`.
pub(crate) fn rem_monic(mut p: Vec<Rational>, m: &[BigInt]) -> Vec<Rational> {
    let deg = m.len() - 1;
    debug_assert!(m[deg].is_one());
    while p.len() > deg {
        let top = p.pop().expect("non-empty");
        if top.is_zero() {
            continue;
        }
        let shift = p.len() - deg;
        for (k, c) in m[..deg].iter().enumerate() {
            if !c.is_zero() {
                p[shift + k] -= &top * Rational::from_integer(c.clone());
            }
        }
    }
    trim(&mut p);
    p
}

/// Formats a polynomial in `var`, e.g. `x^2+5*x+1`.
pub fn format_poly<T: std::fmt::Display + Zero + One + PartialEq + Signed + Clone>(
    coeffs: &[T],
    var: &str,
) -> String {
    let mut out = String::new();
    for (e, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let unit = mag.is_one();
        match e {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if !unit {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(var);
                if e > 1 {
                    out.push_str(&format!("^{e}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses the output of [`format_poly`] (rational coefficients, one variable).
pub fn parse_poly(s: &str, var: &str) -> Result<Vec<Rational>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'/' {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut coeffs: Vec<Rational> = Vec::new();
    for term in terms {
        let (sign, body) = match term.as_bytes()[0] {
            b'+' => (1, &term[1..]),
            b'-' => (-1, &term[1..]),
            _ => (1, term),
        };
        let (coef, exp) = if let Some(pos) = body.find(var) {
            let coef_part = body[..pos].trim_end_matches('*');
            let coef = if coef_part.is_empty() {
                Rational::one()
            } else {
                parse_rational(coef_part)?
            };
            let rest = &body[pos + var.len()..];
            let exp = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad exponent in `{term}`")))?
            };
            (coef, exp)
        } else {
            (parse_rational(body)?, 0)
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, Rational::zero());
        }
        let c = if sign < 0 { -coef } else { coef };
        coeffs[exp] += c;
    }
    trim(&mut coeffs);
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational_from_int;

    #[test]
    fn format_and_parse() {
        let p = vec![rational_from_int(1), rational_from_int(5), rational_from_int(1)];
        let s = format_poly(&p, "x");
        assert_eq!(s, "x^2+5*x+1");
        assert_eq!(parse_poly(&s, "x").unwrap(), p);
        let q = parse_poly("-1/2*x^3 - x + 2", "x").unwrap();
        assert_eq!(format_poly(&q, "x"), "-1/2*x^3-x+2");
    }

    #[test]
    fn remainder_modulo_monic() {
        // x^2 mod (x^2 + 5x + 1) = -5x - 1
        let p = vec![Rational::zero(), Rational::zero(), Rational::one()];
        let m = vec![BigInt::from(1), BigInt::from(5), BigInt::from(1)];
        assert_eq!(rem_monic(p, &m), vec![rational_from_int(-1), rational_from_int(-5)]);
    }
}
