//! Cross-checks the norm recursion against a direct search over sizes and degree multisets.

mod common;

use common::norm_oracle_check;
use fourier_core::norms::enumerate_norm_vectors;

#[test]
fn recursion_matches_direct_search_up_to_dimension_eight() {
    for n in 1..=8 {
        if let Err(e) = norm_oracle_check(n) {
            panic!("{e}");
        }
    }
}

#[test]
fn known_counts() {
    let counts: Vec<usize> = (1..=10).map(|n| enumerate_norm_vectors(n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 1, 0, 1, 0, 3, 1, 7, 5, 42]);
    let six: Vec<Vec<u64>> = enumerate_norm_vectors(6).unwrap().into_iter().map(|v| v.dims).collect();
    assert_eq!(six, vec![vec![36, 9, 9, 4, 4, 4], vec![12, 12, 12, 12, 3, 3], vec![6; 6]]);
}
