//! Brute-force oracles and profile generators shared by the integration tests.
//!
//! The oracles read the definitions literally and search exhaustively, so they
//! share no code path with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use quadric_mdt::profile::{pattern_enumerate, I1Rules, QuadricProfile};

/// Alternating expansion found by search: exponents and the `m_i` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleExpansion {
    pub n: Vec<u32>,
    pub m: Vec<usize>,
}

/// Every value in `1..=limit` mapped to all exponent lists
/// `n_1 > ... > n_{j-1} > n_j + 1` whose alternating sum of powers of two
/// equals it. Exponents range over `0..=max_exp`.
pub fn alternating_expansions(limit: usize, max_exp: u32) -> BTreeMap<usize, Vec<Vec<u32>>> {
    let mut out: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
    for mask in 1u64..(1u64 << (max_exp + 1)) {
        let n: Vec<u32> = (0..=max_exp).rev().filter(|e| mask & (1 << e) != 0).collect();
        let j = n.len();
        if j >= 2 && n[j - 2] <= n[j - 1] + 1 {
            continue;
        }
        let total: i64 = n
            .iter()
            .enumerate()
            .map(|(k, &e)| if k % 2 == 0 { 1i64 << e } else { -(1i64 << e) })
            .sum();
        if total >= 1 && total as usize <= limit {
            out.entry(total as usize).or_default().push(n);
        }
    }
    out
}

/// `m_i` computed as the alternating tail starting at `n_i` minus `2^{n_i - 1}`,
/// for `i <= j'`.
pub fn oracle_m(value: usize, n: &[u32]) -> Vec<usize> {
    let j = n.len();
    let j_prime = if value.is_multiple_of(2) { j } else { j - 1 };
    (0..j_prime)
        .map(|i| {
            let tail: i64 = n[i..]
                .iter()
                .enumerate()
                .map(|(k, &e)| if k % 2 == 0 { 1i64 << e } else { -(1i64 << e) })
                .sum();
            (tail - (1i64 << (n[i] - 1))) as usize
        })
        .collect()
}

/// Excellent pairs `(a, b)` of a form of dimension `dim`, found by testing the
/// definition on every `a` and every `b` with `d_X - b` in `0..window` and every
/// witness `k`. Pairs witnessed by several `k` appear once per witness.
pub fn oracle_excellent_pairs(dim: usize, n: &[u32], m: &[usize], window: usize) -> Vec<(usize, usize, usize)> {
    let d = dim - 2;
    let bounds: Vec<(usize, usize, usize)> = (1..=m.len())
        .map(|k| (m[..k - 1].iter().sum(), m[..k].iter().sum(), 1usize << (n[k - 1] - 1)))
        .collect();
    let mut out = Vec::new();
    for a in 0..window {
        for c in 0..window.min(d + 1) {
            let b = d - c;
            for (k, &(before, upto, span)) in (1..).zip(&bounds) {
                let gap_ok = b >= a && b - a + 1 == span;
                let in_range = |x: usize| before <= x && x < upto;
                if gap_ok && in_range(a) && in_range(c) {
                    out.push((a, b, k));
                }
            }
        }
    }
    out.sort();
    out
}

/// Every profile with `dim <= max_dim` whose pattern passes the proven
/// first-index rules at each kernel.
pub fn proven_profiles(max_dim: usize) -> Vec<QuadricProfile> {
    let mut out = Vec::new();
    for dim in 2..=max_dim {
        for r in 1..=dim / 2 {
            let s = dim - 2 * r;
            for pattern in pattern_enumerate(r, s, &I1Rules::proven()) {
                out.push(QuadricProfile::new(dim, r, s, pattern).expect("enumerated patterns are valid"));
            }
        }
    }
    out
}

/// Every valid single-factor profile of type `(r, s)` for the given ranges.
pub fn small_profiles(max_r: usize, s_values: &[usize]) -> Vec<QuadricProfile> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        for &s in s_values {
            for pattern in pattern_enumerate(r, s, &I1Rules::base()) {
                out.push(QuadricProfile::new(2 * r + s, r, s, pattern).expect("enumerated patterns are valid"));
            }
        }
    }
    out
}
