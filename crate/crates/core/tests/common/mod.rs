//! Independent oracles shared by the integration suites.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use toric_chow::builtins::Builtin;
use toric_chow::MonoidElement;

/// `C(n, k)` by the multiplicative formula; zero outside `0..=n`.
pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Enumerates every `β ∈ N^N` with `∑ β_i w_i <= bound` and counts them by
/// `∑ β_i v_i`. Generators are listed with repetition.
pub fn brute_force(gens: &[Vec<i64>], weights: &[i64], bound: i64) -> BTreeMap<Vec<i64>, BigInt> {
    assert_eq!(gens.len(), weights.len());
    assert!(weights.iter().all(|&w| w >= 1));
    let dim = gens.first().map_or(0, Vec::len);
    let mut out = BTreeMap::new();
    let mut lambda = vec![0i64; dim];
    walk(gens, weights, 0, bound, &mut lambda, &mut out);
    out
}

// Chooses the exponent of generator `i` and recurses on what is left of the budget.
fn walk(
    gens: &[Vec<i64>],
    weights: &[i64],
    i: usize,
    budget: i64,
    lambda: &mut Vec<i64>,
    out: &mut BTreeMap<Vec<i64>, BigInt>,
) {
    if i == gens.len() {
        *out.entry(lambda.clone()).or_insert_with(|| BigInt::from(0)) += 1;
        return;
    }
    let mut left = budget;
    let mut taken = 0;
    loop {
        walk(gens, weights, i + 1, left, lambda, out);
        left -= weights[i];
        if left < 0 {
            break;
        }
        for (l, x) in lambda.iter_mut().zip(&gens[i]) {
            *l += x;
        }
        taken += 1;
    }
    for (l, x) in lambda.iter_mut().zip(&gens[i]) {
        *l -= taken * x;
    }
}

/// Converts a series' support into plain vectors for comparison with oracles.
pub fn as_map<'a>(terms: impl Iterator<Item = (&'a MonoidElement, &'a BigInt)>) -> BTreeMap<Vec<i64>, BigInt> {
    terms.map(|(k, v)| (k.coords().to_vec(), v.clone())).collect()
}

/// Every builtin used by the suites: the small list plus larger members.
pub fn all_builtins() -> Vec<Builtin> {
    let mut v = Builtin::small();
    v.extend([Builtin::Pn(4), Builtin::Pn(5), Builtin::Product(2, 2), Builtin::BlowupPn(4)]);
    v
}
