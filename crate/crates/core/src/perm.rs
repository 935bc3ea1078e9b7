//! Permutations, patterns and occurrences.
//!
//! Positions and values are 1-based everywhere in the public API.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{1..n}` in one-line notation, with `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Validates that `values` is a bijection of `{1..values.len()}`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        check_bijection(&values)?;
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity of size 0");
        Permutation((1..=n as u32).collect())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at 1-based `position`.
    pub fn value(&self, position: usize) -> u32 {
        self.0[position - 1]
    }

    pub fn to_pattern(&self) -> Pattern {
        Pattern(self.0.clone())
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        Permutation::new(values)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl AsRef<[u32]> for Permutation {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_permutation(s)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_values(f, &self.0)
    }
}

/// A normalized permutation used as a pattern. May be empty (the pattern ε).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Pattern(Vec<u32>);

impl Pattern {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        check_bijection(&values)?;
        Ok(Pattern(values))
    }

    /// The empty pattern ε.
    pub fn empty() -> Self {
        Pattern(Vec::new())
    }

    /// The pattern `1`.
    pub fn singleton() -> Self {
        Pattern(vec![1])
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(check_bijection(&values).is_ok());
        Pattern(values)
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for ε.
    pub fn to_permutation(&self) -> Option<Permutation> {
        (!self.0.is_empty()).then(|| Permutation(self.0.clone()))
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl TryFrom<Vec<u32>> for Pattern {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        Pattern::new(values)
    }
}

impl From<Pattern> for Vec<u32> {
    fn from(p: Pattern) -> Self {
        p.0
    }
}

impl From<Permutation> for Pattern {
    fn from(p: Permutation) -> Self {
        Pattern(p.0)
    }
}

impl AsRef<[u32]> for Pattern {
    fn as_ref(&self) -> &[u32] {
        &self.0
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Like [`parse_permutation`], but blank input (or `ε`) yields ε.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "ε" {
            return Ok(Pattern::empty());
        }
        parse_permutation(t).map(Pattern::from)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        write_values(f, &self.0)
    }
}

/// Strictly increasing 1-based positions into a host permutation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Occurrence(Vec<usize>);

impl Occurrence {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        if positions.first() == Some(&0) || positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedToken(format!("{positions:?}")));
        }
        Ok(Occurrence(positions))
    }

    pub(crate) fn from_vec_unchecked(positions: Vec<usize>) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        Occurrence(positions)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Host entries at these positions.
    pub fn extract(&self, host: &[u32]) -> Vec<u32> {
        self.0.iter().map(|&p| host[p - 1]).collect()
    }

    /// True iff the positions lie inside `host` and the entries there are
    /// order-isomorphic to `pattern`.
    pub fn matches(&self, host: &[u32], pattern: &Pattern) -> bool {
        if self.0.len() != pattern.len() || self.0.last().is_some_and(|&p| p > host.len()) {
            return false;
        }
        normalize(&self.extract(host)).is_ok_and(|p| &p == pattern)
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

fn write_values(f: &mut fmt::Formatter<'_>, values: &[u32]) -> fmt::Result {
    let mut first = true;
    for v in values {
        if !first {
            f.write_str(" ")?;
        }
        first = false;
        write!(f, "{v}")?;
    }
    Ok(())
}

fn check_bijection(values: &[u32]) -> Result<()> {
    let n = values.len();
    let mut seen = vec![false; n + 1];
    for &v in values {
        let i = v as usize;
        if i == 0 || i > n {
            return Err(Error::OutOfRange { value: v.into(), size: n });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Duplicate(v.into()));
        }
    }
    Ok(())
}

/// Parses one-line notation: positive integers separated by runs of
/// whitespace or by single commas (optionally padded with whitespace).
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    if text.trim().is_empty() {
        return Err(Error::Empty);
    }
    let mut values = Vec::new();
    for chunk in text.split(',') {
        let mut tokens = chunk.split_whitespace().peekable();
        if tokens.peek().is_none() {
            return Err(Error::MalformedToken(chunk.to_string()));
        }
        for token in tokens {
            if !token.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::MalformedToken(token.to_string()));
            }
            let v: u64 = token.parse().map_err(|_| Error::MalformedToken(token.to_string()))?;
            let v = u32::try_from(v).map_err(|_| Error::MalformedToken(token.to_string()))?;
            values.push(v);
        }
    }
    Permutation::new(values)
}

/// Rank-reduces a sequence of pairwise distinct values to a pattern.
pub fn normalize<T: Ord>(values: &[T]) -> Result<Pattern> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| values[x].cmp(&values[y]));
    if order.windows(2).any(|w| values[w[0]] == values[w[1]]) {
        return Err(Error::NotDistinct);
    }
    let mut ranks = vec![0u32; values.len()];
    for (rank, &idx) in order.iter().enumerate() {
        ranks[idx] = rank as u32 + 1;
    }
    Ok(Pattern(ranks))
}

/// Searches for an occurrence of `pattern` in `host` by backtracking over
/// index choices. Exponential in the worst case.
pub fn find_occurrence(host: &[u32], pattern: &Pattern) -> Option<Occurrence> {
    let pi = pattern.values();
    let k = pi.len();
    if k > host.len() {
        return None;
    }
    // For entry l: the earlier entries holding the nearest smaller and larger
    // pattern values. Staying between their host values keeps the prefix
    // order-isomorphic.
    let mut below = vec![None; k];
    let mut above = vec![None; k];
    for l in 0..k {
        for m in 0..l {
            if pi[m] < pi[l] && below[l].map_or(true, |b: usize| pi[m] > pi[b]) {
                below[l] = Some(m);
            }
            if pi[m] > pi[l] && above[l].map_or(true, |a: usize| pi[m] < pi[a]) {
                above[l] = Some(m);
            }
        }
    }
    let mut chosen = Vec::with_capacity(k);
    if search(host, &below, &above, &mut chosen) {
        Some(Occurrence(chosen.into_iter().map(|p| p + 1).collect()))
    } else {
        None
    }
}

fn search(host: &[u32], below: &[Option<usize>], above: &[Option<usize>], chosen: &mut Vec<usize>) -> bool {
    let l = chosen.len();
    let k = below.len();
    if l == k {
        return true;
    }
    let start = chosen.last().map_or(0, |&p| p + 1);
    let lo = below[l].map_or(0, |m| host[chosen[m]]);
    let hi = above[l].map_or(u32::MAX, |m| host[chosen[m]]);
    for p in start..=host.len() - (k - l) {
        let v = host[p];
        if v > lo && v < hi {
            chosen.push(p);
            if search(host, below, above, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// True iff `host` contains no occurrence of `pattern`.
pub fn avoids(host: &[u32], pattern: &Pattern) -> bool {
    find_occurrence(host, pattern).is_none()
}
