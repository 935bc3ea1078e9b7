//! Brute-force reference implementations.
//!
//! Nothing here calls into the decomposition or dynamic-programming code;
//! the ranking and containment checks are re-implemented from scratch so
//! that agreement with the main modules is independent evidence.

use crate::error::{Error, Result};
use crate::perm::{Occurrence, Pattern, Permutation};

/// Largest input size the exhaustive LCP search accepts.
pub const ORACLE_LIMIT: usize = 12;

fn ranks(values: &[u32]) -> Vec<u32> {
    values
        .iter()
        .map(|&v| 1 + values.iter().filter(|&&w| w < v).count() as u32)
        .collect()
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order until
/// it returns true.
fn first_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return Some(idx);
        }
        // Advance the rightmost index that still has room.
        let mut p = k;
        loop {
            if p == 0 {
                return None;
            }
            p -= 1;
            if idx[p] < n - k + p {
                break;
            }
        }
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// 0-based positions of some occurrence of `pattern` in `host`.
fn occurrence(host: &[u32], pattern: &[u32]) -> Option<Vec<usize>> {
    first_combination(host.len(), pattern.len(), |idx| {
        let sub: Vec<u32> = idx.iter().map(|&p| host[p]).collect();
        ranks(&sub) == pattern
    })
}

/// A longest common pattern with one occurrence in each input, by trying
/// subsets of the smaller input in decreasing size.
pub fn oracle_lcp_witness(sigma: &Permutation, tau: &Permutation) -> Result<(Pattern, Occurrence, Occurrence)> {
    for p in [sigma, tau] {
        if p.len() > ORACLE_LIMIT {
            return Err(Error::TooLarge { size: p.len(), limit: ORACLE_LIMIT });
        }
    }
    let swap = tau.len() < sigma.len();
    let (small, large) = if swap { (tau.values(), sigma.values()) } else { (sigma.values(), tau.values()) };
    for k in (1..=small.len()).rev() {
        let mut hit = None;
        first_combination(small.len(), k, |idx| {
            let sub: Vec<u32> = idx.iter().map(|&p| small[p]).collect();
            let pattern = ranks(&sub);
            match occurrence(large, &pattern) {
                Some(found) => {
                    hit = Some((pattern, idx.to_vec(), found));
                    true
                }
                None => false,
            }
        });
        if let Some((pattern, in_small, in_large)) = hit {
            let occ = |v: Vec<usize>| Occurrence::new(v.into_iter().map(|p| p + 1).collect()).unwrap();
            let (os, ot) = if swap { (in_large, in_small) } else { (in_small, in_large) };
            return Ok((Pattern::new(pattern).unwrap(), occ(os), occ(ot)));
        }
    }
    Ok((Pattern::empty(), Occurrence::default(), Occurrence::default()))
}

pub fn oracle_lcp(sigma: &Permutation, tau: &Permutation) -> Result<Pattern> {
    oracle_lcp_witness(sigma, tau).map(|w| w.0)
}

/// True iff `pattern` occurs in `host`, by exhaustive subset search.
pub fn oracle_contains(host: &[u32], pattern: &[u32]) -> bool {
    occurrence(host, pattern).is_some()
}

/// Size at least 4 and no block of consecutive entries other than the
/// singletons and the whole permutation covers an interval of values.
pub fn oracle_is_simple(sigma: &Permutation) -> bool {
    let v = sigma.values();
    let n = v.len();
    if n < 4 {
        return false;
    }
    for lo in 0..n {
        for hi in lo + 1..n {
            if lo == 0 && hi == n - 1 {
                continue;
            }
            let block = &v[lo..=hi];
            let min = block.iter().min().unwrap();
            let max = block.iter().max().unwrap();
            if (max - min) as usize == hi - lo {
                return false;
            }
        }
    }
    true
}

/// Avoidance of 3 1 4 2 and 2 4 1 3.
pub fn oracle_separable(sigma: &Permutation) -> bool {
    !oracle_contains(sigma.values(), &[3, 1, 4, 2]) && !oracle_contains(sigma.values(), &[2, 4, 1, 3])
}
