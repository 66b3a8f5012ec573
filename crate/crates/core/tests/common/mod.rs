//! Helpers shared by the integration suites.
#![allow(dead_code)]

use fourier_core::catalog::{Catalog, EntryKind};
use fourier_core::fourier::IntegralFourierMatrix;
use fourier_core::norms::{enumerate_norm_vectors, validate_norm_vector};
use num_integer::Integer;

/// Every catalog entry, materialized, with its name.
pub fn fixtures() -> Vec<(String, IntegralFourierMatrix)> {
    let c = Catalog::builtin();
    c.entries.iter().map(|e| (e.name.clone(), c.get(&e.name).unwrap())).collect()
}

/// Catalog entries from the complete list of classes (dimension at most 12).
pub fn appendix_fixtures() -> Vec<(String, IntegralFourierMatrix)> {
    let c = Catalog::builtin();
    c.entries
        .iter()
        .filter(|e| e.kind == EntryKind::Appendix)
        .map(|e| (e.name.clone(), c.get(&e.name).unwrap()))
        .collect()
}

/// Largest denominator in an `n`-term unit-fraction decomposition of 1: `a_n - 1` for
/// `a_1 = 2, a_{k+1} = a_k^2 - a_k + 1`.
pub fn sylvester_bound(n: usize) -> u64 {
    let mut a = 2u64;
    for _ in 1..n {
        a = a.saturating_mul(a).saturating_sub(a).saturating_add(1);
    }
    a - 1
}

/// Multisets of `k` non-decreasing values from `cands` (starting at index `from`) whose squares sum to `target`.
fn square_sums(cands: &[u64], from: usize, k: usize, target: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if k == 0 {
        if target == 0 {
            out.push(acc.clone());
        }
        return;
    }
    for i in from..cands.len() {
        let g2 = cands[i] * cands[i];
        if g2 * k as u64 > target {
            break;
        }
        acc.push(cands[i]);
        square_sums(cands, i, k - 1, target - g2, acc, out);
        acc.pop();
    }
}

pub fn oracle(n: usize, max_size: u64) -> Vec<Vec<u64>> {
    let mut found = Vec::new();
    for size in 1..=max_size {
        if n % 2 == 1 && !is_square(size) {
            continue;
        }
        if n == 1 {
            if size == 1 {
                found.push(vec![1]);
            }
            continue;
        }
        let degrees: Vec<u64> = (1..).take_while(|g| g * g <= size).filter(|g| size % (g * g) == 0).collect();
        let mut sols = Vec::new();
        square_sums(&degrees, 0, n - 1, size - 1, &mut Vec::new(), &mut sols);
        for gs in sols {
            if gs.iter().fold(0u64, |a, g| a.gcd(g)) != 1 {
                continue;
            }
            let mut dims: Vec<u64> = std::iter::once(size).chain(gs.iter().map(|g| size / (g * g))).collect();
            dims.sort_unstable_by(|a, b| b.cmp(a));
            found.push(dims);
        }
    }
    found.sort();
    found.dedup();
    found
}

pub fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt().round() as u64;
    r * r == n
}

/// Compares the norm recursion with the direct search for one dimension.
pub fn norm_oracle_check(n: usize) -> Result<usize, String> {
    let horizon = sylvester_bound(n).min(20_000);
    let mut expected = oracle(n, horizon);
    if let Some(v) = expected.iter().find(|v| !validate_norm_vector(v).all_pass()) {
        return Err(format!("oracle produced invalid {v:?}"));
    }
    let mut got: Vec<Vec<u64>> = enumerate_norm_vectors(n).unwrap().into_iter().map(|v| v.dims).collect();
    if got.iter().any(|v| v[0] > horizon) {
        return Err(format!("n={n}: size beyond oracle horizon"));
    }
    expected.sort();
    got.sort();
    if got != expected {
        return Err(format!("n={n}: recursion {got:?} vs direct {expected:?}"));
    }
    Ok(got.len())
}
