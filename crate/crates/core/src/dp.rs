//! Dynamic programs for a longest common pattern, guided by the expanded
//! decomposition tree of one input.
//!
//! Cell `M(V, i, j, a, b)` holds the length of a longest common pattern
//! between `σ(V)` and the entries of `τ_i … τ_j` whose values lie in
//! `[a, b]`. Linear (binary) nodes try every split position `h` and split
//! value `c`; prime nodes labeled `ρ` try every pair of weakly increasing
//! cut sequences and combine children with `⊙_ρ`. Cells store a length plus
//! the winning split, and patterns are rebuilt from those back-references.
//!
//! Cells are evaluated top-down on demand. Ties go to the first candidate in
//! scan order: `h` ascending then `c` ascending on linear nodes, position cuts
//! then value cuts in lexicographic order on prime nodes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{concat_minus, concat_plus, concat_rho};
use crate::decomp::{
    decomposition_tree, expand_tree, max_prime_arity, tree_to_permutation, DecompTree, NodeId, NodeKind, Sign,
};
use crate::error::{Error, Result};
use crate::oracle;
use crate::perm::{Occurrence, Pattern, Permutation};

/// Largest supported size for either input.
pub const MAX_SIZE: usize = 255;

/// Prime arity from which [`complexity_warning`] fires.
pub const WARN_PRIME_ARITY: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpOptions {
    /// Skip candidates that provably cannot beat the incumbent. Results are
    /// identical either way; turning it off runs the literal recurrences.
    pub prune: bool,
    /// Materialize patterns and break ties toward the lexicographically
    /// smallest pattern of maximal length. Much slower.
    pub canonical: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { prune: true, canonical: false }
    }
}

/// 1-based address of a table cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellKey {
    pub node: NodeId,
    pub i: usize,
    pub j: usize,
    pub a: usize,
    pub b: usize,
}

impl CellKey {
    pub fn new(node: NodeId, i: usize, j: usize, a: usize, b: usize) -> Self {
        CellKey { node, i, j, a, b }
    }
}

/// How a cell's value was obtained. Positions and values are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Empty,
    /// The leaf matched `τ_position`.
    Leaf { position: usize },
    /// Left child on positions `i..split_position`, right child on
    /// `split_position..=j`; values split at `split_value` per the sign.
    Linear { sign: Sign, split_position: usize, split_value: usize },
    /// Inner cuts `h_1..h_{d-1}` and `c_1..c_{d-1}`.
    Prime { position_cuts: Vec<usize>, value_cuts: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpCell {
    pub length: usize,
    pub provenance: Provenance,
}

/// A common pattern of `σ(V)` and a slice of τ, with one occurrence in each.
/// `occ_sigma` indexes the whole guiding permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub pattern: Pattern,
    pub occ_sigma: Occurrence,
    pub occ_tau: Occurrence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Auto,
    Separable,
    General,
    Oracle,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Auto => "auto",
            Algorithm::Separable => "separable",
            Algorithm::General => "general",
            Algorithm::Oracle => "oracle",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Algorithm::Auto),
            "separable" => Ok(Algorithm::Separable),
            "general" => Ok(Algorithm::General),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(Error::MalformedToken(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpResult {
    pub pattern: Pattern,
    pub occ_sigma: Occurrence,
    pub occ_tau: Occurrence,
    /// The algorithm that actually ran (never `Auto`).
    pub algorithm: Algorithm,
}

impl LcpResult {
    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }

    fn swapped(self) -> Self {
        LcpResult { occ_sigma: self.occ_tau, occ_tau: self.occ_sigma, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexityWarning {
    pub arity: usize,
}

impl fmt::Display for ComplexityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "guiding tree has a prime node of arity {}; each table cell may cost O(n^{}) and the run can be very slow",
            self.arity,
            2 * self.arity - 2
        )
    }
}

/// Warns when the guiding tree has a prime node of arity at least
/// [`WARN_PRIME_ARITY`].
pub fn complexity_warning(tree: &DecompTree) -> Option<ComplexityWarning> {
    let arity = max_prime_arity(tree);
    (arity >= WARN_PRIME_ARITY).then_some(ComplexityWarning { arity })
}

// Packed cell: bits 0..8 length; leaf: bits 8..16 position h;
// linear: bits 8..16 h, 16..24 c; prime: bits 8..32 index into the cut arena.
const UNSET: u32 = u32::MAX;

fn pack(len: u32, payload: u32) -> u32 {
    debug_assert!(len <= 0xff);
    len | payload << 8
}

#[derive(Clone, Debug)]
enum Info {
    Leaf { position: usize },
    Linear { sign: Sign, left: usize, right: usize },
    Prime { label: Pattern, children: Vec<usize>, rho_inv: Vec<usize> },
}

/// Memo table `M` for one guiding tree and one τ.
#[derive(Clone, Debug)]
pub struct DpTable {
    tree: DecompTree,
    sigma: Permutation,
    tau: Vec<u32>,
    n: usize,
    pairs: usize,
    options: DpOptions,
    info: Vec<Info>,
    sizes: Vec<u32>,
    tables: Vec<Vec<u32>>,
    cuts: Vec<Vec<u8>>,
    patterns: HashMap<(usize, usize), Pattern>,
}

impl DpTable {
    /// Prepares an empty table. Trees that are not expanded are expanded.
    pub fn new(tree: &DecompTree, tau: &Permutation, options: DpOptions) -> Result<Self> {
        let tree = if tree.is_expanded() { tree.clone() } else { expand_tree(tree) };
        let sigma = tree_to_permutation(&tree)?;
        for size in [sigma.len(), tau.len()] {
            if size > MAX_SIZE {
                return Err(Error::TooLarge { size, limit: MAX_SIZE });
            }
        }
        let info = tree
            .nodes()
            .iter()
            .map(|node| match &node.kind {
                NodeKind::Leaf(_) => Info::Leaf { position: node.span.lo - 1 },
                NodeKind::Linear(sign) => Info::Linear {
                    sign: *sign,
                    left: node.children[0].0,
                    right: node.children[1].0,
                },
                NodeKind::Prime(label) => {
                    let mut rho_inv = vec![0; label.len() + 1];
                    for (k, &r) in label.values().iter().enumerate() {
                        rho_inv[r as usize] = k + 1;
                    }
                    Info::Prime {
                        label: label.clone(),
                        children: node.children.iter().map(|c| c.0).collect(),
                        rho_inv,
                    }
                }
            })
            .collect();
        let n = tau.len();
        Ok(DpTable {
            sizes: tree.nodes().iter().map(|node| node.size() as u32).collect(),
            tables: vec![Vec::new(); tree.len()],
            cuts: vec![Vec::new(); tree.len()],
            patterns: HashMap::new(),
            tau: tau.values().iter().map(|&v| v - 1).collect(),
            pairs: n * (n + 1) / 2,
            n,
            info,
            sigma,
            tree,
            options,
        })
    }

    /// The (expanded) guiding tree.
    pub fn tree(&self) -> &DecompTree {
        &self.tree
    }

    /// The guiding permutation σ.
    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn options(&self) -> DpOptions {
        self.options
    }

    /// Number of cells evaluated so far.
    pub fn computed_cells(&self) -> usize {
        self.tables.iter().map(|t| t.iter().filter(|&&c| c != UNSET).count()).sum()
    }

    fn slot(&self, i: usize, j: usize, a: usize, b: usize) -> usize {
        let p = |x: usize, y: usize| y * (y + 1) / 2 + x;
        p(i, j) * self.pairs + p(a, b)
    }

    fn stored(&self, v: usize, i: usize, j: usize, a: usize, b: usize) -> u32 {
        let table = &self.tables[v];
        if table.is_empty() {
            UNSET
        } else {
            table[self.slot(i, j, a, b)]
        }
    }

    fn store(&mut self, v: usize, i: usize, j: usize, a: usize, b: usize, packed: u32) {
        let slot = self.slot(i, j, a, b);
        let len = self.pairs * self.pairs;
        let table = &mut self.tables[v];
        if table.is_empty() {
            *table = vec![UNSET; len];
        }
        table[slot] = packed;
    }

    fn check_key(&self, key: &CellKey) {
        assert!(key.node.0 < self.tree.len(), "node {:?} outside the tree", key.node);
        assert!(
            1 <= key.i && key.i <= key.j && key.j <= self.n && 1 <= key.a && key.a <= key.b && key.b <= self.n,
            "cell ({}, {}, {}, {}) outside 1..={}",
            key.i,
            key.j,
            key.a,
            key.b,
            self.n
        );
    }

    /// Evaluates (if needed) and returns a cell.
    ///
    /// Panics if the key is outside the table.
    pub fn cell(&mut self, key: CellKey) -> DpCell {
        self.check_key(&key);
        let (v, i, j, a, b) = (key.node.0, key.i - 1, key.j - 1, key.a - 1, key.b - 1);
        self.eval(v, i, j, a, b);
        self.decode(v, i, j, a, b).expect("cell was just evaluated")
    }

    /// A cell, if it has been evaluated.
    pub fn peek(&self, key: CellKey) -> Option<DpCell> {
        self.check_key(&key);
        self.decode(key.node.0, key.i - 1, key.j - 1, key.a - 1, key.b - 1)
    }

    /// The child cells a cell's provenance points at, in child order;
    /// `None` marks an empty slice.
    pub fn sub_cells(&self, key: CellKey) -> Option<Vec<Option<CellKey>>> {
        let cell = self.peek(key)?;
        let children = &self.tree.node(key.node).children;
        let sub = |k: usize, i: usize, h: usize, a: usize, c: usize| {
            (i < h && a < c).then(|| CellKey::new(children[k], i, h - 1, a, c - 1))
        };
        Some(match cell.provenance {
            Provenance::Empty | Provenance::Leaf { .. } => Vec::new(),
            Provenance::Linear { sign: Sign::Plus, split_position: h, split_value: c } => {
                vec![sub(0, key.i, h, key.a, c), sub(1, h, key.j + 1, c, key.b + 1)]
            }
            Provenance::Linear { sign: Sign::Minus, split_position: h, split_value: c } => {
                vec![sub(0, key.i, h, c, key.b + 1), sub(1, h, key.j + 1, key.a, c)]
            }
            Provenance::Prime { position_cuts, value_cuts } => {
                let NodeKind::Prime(label) = &self.tree.node(key.node).kind else { unreachable!() };
                let hs = bracket(key.i, &position_cuts, key.j + 1);
                let cs = bracket(key.a, &value_cuts, key.b + 1);
                label
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(k, &r)| sub(k, hs[k], hs[k + 1], cs[r as usize - 1], cs[r as usize]))
                    .collect()
            }
        })
    }

    fn decode(&self, v: usize, i: usize, j: usize, a: usize, b: usize) -> Option<DpCell> {
        let packed = self.stored(v, i, j, a, b);
        if packed == UNSET {
            return None;
        }
        let length = (packed & 0xff) as usize;
        let payload = packed >> 8;
        let provenance = if length == 0 {
            Provenance::Empty
        } else {
            match &self.info[v] {
                Info::Leaf { .. } => Provenance::Leaf { position: payload as usize + 1 },
                Info::Linear { sign, .. } => Provenance::Linear {
                    sign: *sign,
                    split_position: (payload & 0xff) as usize + 1,
                    split_value: (payload >> 8 & 0xff) as usize + 1,
                },
                Info::Prime { label, .. } => {
                    let inner = label.len() - 1;
                    let rec = &self.cuts[v][payload as usize * 2 * inner..(payload as usize + 1) * 2 * inner];
                    Provenance::Prime {
                        position_cuts: rec[..inner].iter().map(|&h| h as usize + 1).collect(),
                        value_cuts: rec[inner..].iter().map(|&c| c as usize + 1).collect(),
                    }
                }
            }
        };
        Some(DpCell { length, provenance })
    }

    /// Length of `M(v, i..end_i, a..end_a)` with exclusive ends; empty slices
    /// are ε without touching the table.
    fn slice_len(&mut self, v: usize, i: usize, end_i: usize, a: usize, end_a: usize) -> u32 {
        if i >= end_i || a >= end_a {
            0
        } else {
            self.eval(v, i, end_i - 1, a, end_a - 1)
        }
    }

    fn eval(&mut self, v: usize, i: usize, j: usize, a: usize, b: usize) -> u32 {
        let packed = self.stored(v, i, j, a, b);
        if packed != UNSET {
            return packed & 0xff;
        }
        let packed = if self.options.canonical {
            self.eval_canonical(v, i, j, a, b)
        } else {
            match self.info[v].clone() {
                Info::Leaf { .. } => self.eval_leaf(i, j, a, b),
                Info::Linear { sign, left, right } => self.eval_linear(v, sign, left, right, i, j, a, b),
                Info::Prime { label, children, rho_inv } => {
                    self.eval_prime(v, &label, &children, &rho_inv, i, j, a, b)
                }
            }
        };
        self.store(v, i, j, a, b, packed);
        packed & 0xff
    }

    fn eval_leaf(&self, i: usize, j: usize, a: usize, b: usize) -> u32 {
        match (i..=j).find(|&h| (a as u32..=b as u32).contains(&self.tau[h])) {
            Some(h) => pack(1, h as u32),
            None => pack(0, 0),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn eval_linear(&mut self, v: usize, sign: Sign, left: usize, right: usize, i: usize, j: usize, a: usize, b: usize) -> u32 {
        let prune = self.options.prune;
        let (size_l, size_r) = (self.sizes[left], self.sizes[right]);
        let upper = self.sizes[v].min((j - i + 1) as u32).min((b - a + 1) as u32);
        let mut best = (0u32, 0usize, 0usize);
        'outer: for h in i..=j + 1 {
            if prune && size_l.min((h - i) as u32) + size_r.min((j + 1 - h) as u32) <= best.0 {
                continue;
            }
            for c in a..=b + 1 {
                let (l, r) = match sign {
                    Sign::Plus => {
                        let l = self.slice_len(left, i, h, a, c);
                        if prune && l + size_r.min((j + 1 - h) as u32).min((b + 1 - c) as u32) <= best.0 {
                            continue;
                        }
                        (l, self.slice_len(right, h, j + 1, c, b + 1))
                    }
                    Sign::Minus => {
                        let l = self.slice_len(left, i, h, c, b + 1);
                        if prune && l + size_r.min((j + 1 - h) as u32).min((c - a) as u32) <= best.0 {
                            continue;
                        }
                        (l, self.slice_len(right, h, j + 1, a, c))
                    }
                };
                if l + r > best.0 {
                    best = (l + r, h, c);
                    if prune && best.0 == upper {
                        break 'outer;
                    }
                }
            }
        }
        pack(best.0, (best.1 | best.2 << 8) as u32)
    }

    #[allow(clippy::too_many_arguments)]
    fn eval_prime(
        &mut self,
        v: usize,
        label: &Pattern,
        children: &[usize],
        rho_inv: &[usize],
        i: usize,
        j: usize,
        a: usize,
        b: usize,
    ) -> u32 {
        let d = label.len();
        let sizes: Vec<u32> = children.iter().map(|&c| self.sizes[c]).collect();
        let mut search = PrimeSearch {
            i,
            j,
            a,
            b,
            rho: label.values().iter().map(|&r| r as usize).collect(),
            rho_inv: rho_inv.to_vec(),
            children: children.to_vec(),
            suffix_size: (0..=d).map(|k| sizes[k..].iter().sum()).collect(),
            sizes,
            upper: self.sizes[v].min((j - i + 1) as u32).min((b - a + 1) as u32),
            hs: vec![i; d + 1],
            best: 0,
            best_hs: Vec::new(),
            best_cs: Vec::new(),
        };
        search.hs[d] = j + 1;
        if self.options.prune {
            self.prime_positions(&mut search, 1);
        } else {
            self.prime_exhaustive(&mut search);
        }
        if search.best == 0 {
            return pack(0, 0);
        }
        self.store_cuts(v, d, &search.best_hs, &search.best_cs, search.best)
    }

    fn store_cuts(&mut self, v: usize, d: usize, hs: &[usize], cs: &[usize], len: u32) -> u32 {
        let arena = &mut self.cuts[v];
        let index = arena.len() / (2 * (d - 1));
        arena.extend(hs[1..d].iter().map(|&h| h as u8));
        arena.extend(cs[1..d].iter().map(|&c| c as u8));
        assert!(index < 1 << 24, "prime cut arena overflow");
        pack(len, index as u32)
    }

    fn prime_child_len(&mut self, s: &PrimeSearch, hs: &[usize], cs: &[usize]) -> u32 {
        let mut total = 0;
        for k in 0..s.children.len() {
            let r = s.rho[k];
            total += self.slice_len(s.children[k], hs[k], hs[k + 1], cs[r - 1], cs[r]);
        }
        total
    }

    /// Literal recurrence: every pair of cut sequences, position cuts outer.
    fn prime_exhaustive(&mut self, s: &mut PrimeSearch) {
        let d = s.children.len();
        let hseqs = weak_sequences(s.i, s.j + 1, d);
        let cseqs = weak_sequences(s.a, s.b + 1, d);
        for hs in &hseqs {
            for cs in &cseqs {
                let total = self.prime_child_len(s, hs, cs);
                if total > s.best {
                    s.best = total;
                    s.best_hs = hs.clone();
                    s.best_cs = cs.clone();
                }
            }
        }
    }

    /// Chooses position cut `k` in lexicographic order, pruning prefixes that
    /// cannot beat the incumbent; complete position cuts are handed to
    /// [`Self::prime_values`]. Returns true once the upper bound is reached.
    fn prime_positions(&mut self, s: &mut PrimeSearch, k: usize) -> bool {
        let d = s.children.len();
        if k == d {
            let (total, cs) = self.prime_values(s);
            if total > s.best {
                s.best = total;
                s.best_hs = s.hs.clone();
                s.best_cs = cs;
            }
            return s.best == s.upper;
        }
        let mut prefix = 0;
        for m in 1..k {
            prefix += s.sizes[m - 1].min((s.hs[m] - s.hs[m - 1]) as u32);
        }
        for h in s.hs[k - 1]..=s.j + 1 {
            s.hs[k] = h;
            let bound = prefix
                + s.sizes[k - 1].min((h - s.hs[k - 1]) as u32)
                + s.suffix_size[k].min((s.j + 1 - h) as u32);
            if bound.min(s.upper) <= s.best {
                continue;
            }
            if self.prime_positions(s, k + 1) {
                return true;
            }
        }
        false
    }

    /// For fixed position cuts, the best value cuts by a chain recurrence
    /// over value slices in increasing order, preferring the smallest cut on
    /// ties (the lexicographically smallest optimal sequence).
    fn prime_values(&mut self, s: &PrimeSearch) -> (u32, Vec<usize>) {
        const NONE: i64 = -1;
        let d = s.children.len();
        let (a, end) = (s.a, s.b + 1);
        let width = end - a + 1;
        // gain[m][c - a]: best total for value slices m..d starting at cut c.
        let mut gain = vec![NONE; (d + 2) * width];
        let mut choice = vec![0usize; (d + 1) * width];
        gain[(d + 1) * width + width - 1] = 0;
        for m in (1..=d).rev() {
            let k = s.rho_inv[m] - 1;
            let (child, p0, p1) = (s.children[k], s.hs[k], s.hs[k + 1]);
            let cap = s.sizes[k].min((p1 - p0) as u32) as i64;
            for c in a..=end {
                let mut best = NONE;
                let mut pick = 0;
                for c2 in c..=end {
                    let next = gain[(m + 1) * width + c2 - a];
                    if next == NONE || (best != NONE && next + cap.min((c2 - c) as i64) <= best) {
                        continue;
                    }
                    let total = next + self.slice_len(child, p0, p1, c, c2) as i64;
                    if total > best {
                        best = total;
                        pick = c2;
                    }
                }
                gain[m * width + c - a] = best;
                choice[m * width + c - a] = pick;
            }
        }
        let mut cs = vec![a; d + 1];
        for m in 1..=d {
            cs[m] = choice[m * width + cs[m - 1] - a];
        }
        (gain[width] as u32, cs)
    }

    fn eval_canonical(&mut self, v: usize, i: usize, j: usize, a: usize, b: usize) -> u32 {
        // Longest first, then lexicographically smallest.
        fn improves(candidate: &Pattern, best: &Option<(Pattern, u32)>) -> bool {
            match best {
                None => true,
                Some((p, _)) => candidate.len() > p.len() || (candidate.len() == p.len() && candidate < p),
            }
        }
        let (pattern, packed) = match self.info[v].clone() {
            Info::Leaf { .. } => {
                let packed = self.eval_leaf(i, j, a, b);
                let p = if packed & 0xff == 1 { Pattern::singleton() } else { Pattern::empty() };
                (p, packed)
            }
            Info::Linear { sign, left, right } => {
                let mut best: Option<(Pattern, u32)> = None;
                for h in i..=j + 1 {
                    for c in a..=b + 1 {
                        let candidate = match sign {
                            Sign::Plus => concat_plus(
                                &self.slice_pattern(left, i, h, a, c),
                                &self.slice_pattern(right, h, j + 1, c, b + 1),
                            ),
                            Sign::Minus => concat_minus(
                                &self.slice_pattern(left, i, h, c, b + 1),
                                &self.slice_pattern(right, h, j + 1, a, c),
                            ),
                        };
                        if improves(&candidate, &best) {
                            best = Some((candidate, (h | c << 8) as u32));
                        }
                    }
                }
                let (p, payload) = best.expect("at least one split");
                let packed = pack(p.len() as u32, payload);
                (p, packed)
            }
            Info::Prime { label, children, .. } => {
                let d = label.len();
                let hseqs = weak_sequences(i, j + 1, d);
                let cseqs = weak_sequences(a, b + 1, d);
                let mut best: Option<(Pattern, u32)> = None;
                let mut best_cuts = (0, 0);
                for (x, hs) in hseqs.iter().enumerate() {
                    for (y, cs) in cseqs.iter().enumerate() {
                        let blocks: Vec<Pattern> = (0..d)
                            .map(|k| {
                                let r = label.values()[k] as usize;
                                self.slice_pattern(children[k], hs[k], hs[k + 1], cs[r - 1], cs[r])
                            })
                            .collect();
                        let candidate = concat_rho(&label, &blocks).expect("arity matches");
                        if improves(&candidate, &best) {
                            best = Some((candidate, 0));
                            best_cuts = (x, y);
                        }
                    }
                }
                let (p, _) = best.expect("at least one cut sequence");
                let packed = if p.is_empty() {
                    pack(0, 0)
                } else {
                    self.store_cuts(v, d, &hseqs[best_cuts.0], &cseqs[best_cuts.1], p.len() as u32)
                };
                (p, packed)
            }
        };
        let slot = self.slot(i, j, a, b);
        self.patterns.insert((v, slot), pattern);
        packed
    }

    fn slice_pattern(&mut self, v: usize, i: usize, end_i: usize, a: usize, end_a: usize) -> Pattern {
        if i >= end_i || a >= end_a {
            return Pattern::empty();
        }
        let (j, b) = (end_i - 1, end_a - 1);
        self.eval(v, i, j, a, b);
        self.patterns[&(v, self.slot(i, j, a, b))].clone()
    }

    /// Follows provenance from an evaluated cell and rebuilds its pattern and
    /// both occurrences.
    pub fn reconstruct(&self, key: CellKey) -> Result<Witness> {
        self.check_key(&key);
        let (pattern, pairs) = self.reconstruct_raw(key.node.0, key.i - 1, key.j - 1, key.a - 1, key.b - 1)?;
        Ok(Witness {
            pattern,
            occ_sigma: Occurrence::from_vec_unchecked(pairs.iter().map(|p| p.0 + 1).collect()),
            occ_tau: Occurrence::from_vec_unchecked(pairs.iter().map(|p| p.1 + 1).collect()),
        })
    }

    /// Evaluates a cell and reconstructs its witness.
    pub fn witness(&mut self, key: CellKey) -> Result<Witness> {
        self.cell(key);
        self.reconstruct(key)
    }

    /// 0-based (σ position, τ position) pairs.
    fn reconstruct_raw(&self, v: usize, i: usize, j: usize, a: usize, b: usize) -> Result<(Pattern, Vec<(usize, usize)>)> {
        let cell = self.decode(v, i, j, a, b).ok_or(Error::DanglingProvenance { node: v })?;
        let sub = |w: usize, i: usize, end_i: usize, a: usize, end_a: usize| {
            if i >= end_i || a >= end_a {
                Ok((Pattern::empty(), Vec::new()))
            } else {
                self.reconstruct_raw(w, i, end_i - 1, a, end_a - 1)
            }
        };
        let (pattern, pairs) = match (&self.info[v], cell.provenance) {
            (_, Provenance::Empty) => (Pattern::empty(), Vec::new()),
            (Info::Leaf { position }, Provenance::Leaf { position: h }) => (Pattern::singleton(), vec![(*position, h - 1)]),
            (Info::Linear { left, right, .. }, Provenance::Linear { sign, split_position, split_value }) => {
                let (h, c) = (split_position - 1, split_value - 1);
                let ((lp, mut lpairs), (rp, rpairs)) = match sign {
                    Sign::Plus => (sub(*left, i, h, a, c)?, sub(*right, h, j + 1, c, b + 1)?),
                    Sign::Minus => (sub(*left, i, h, c, b + 1)?, sub(*right, h, j + 1, a, c)?),
                };
                lpairs.extend(rpairs);
                let p = match sign {
                    Sign::Plus => concat_plus(&lp, &rp),
                    Sign::Minus => concat_minus(&lp, &rp),
                };
                (p, lpairs)
            }
            (Info::Prime { label, children, .. }, Provenance::Prime { position_cuts, value_cuts }) => {
                let hs = bracket(i, &position_cuts.iter().map(|h| h - 1).collect::<Vec<_>>(), j + 1);
                let cs = bracket(a, &value_cuts.iter().map(|c| c - 1).collect::<Vec<_>>(), b + 1);
                let mut blocks = Vec::with_capacity(children.len());
                let mut pairs = Vec::new();
                for (k, &r) in label.values().iter().enumerate() {
                    let r = r as usize;
                    let (p, ps) = sub(children[k], hs[k], hs[k + 1], cs[r - 1], cs[r])?;
                    blocks.push(p);
                    pairs.extend(ps);
                }
                (concat_rho(label, &blocks)?, pairs)
            }
            _ => return Err(Error::DanglingProvenance { node: v }),
        };
        if pattern.len() != cell.length {
            return Err(Error::DanglingProvenance { node: v });
        }
        Ok((pattern, pairs))
    }

    /// Evaluates the root cell over all of τ and reconstructs the result.
    pub fn solve(&mut self, algorithm: Algorithm) -> Result<LcpResult> {
        let root = CellKey::new(self.tree.root(), 1, self.n, 1, self.n);
        let w = self.witness(root)?;
        Ok(LcpResult { pattern: w.pattern, occ_sigma: w.occ_sigma, occ_tau: w.occ_tau, algorithm })
    }
}

struct PrimeSearch {
    i: usize,
    j: usize,
    a: usize,
    b: usize,
    rho: Vec<usize>,
    rho_inv: Vec<usize>,
    children: Vec<usize>,
    sizes: Vec<u32>,
    suffix_size: Vec<u32>,
    upper: u32,
    hs: Vec<usize>,
    best: u32,
    best_hs: Vec<usize>,
    best_cs: Vec<usize>,
}

fn bracket(first: usize, inner: &[usize], last: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(inner.len() + 2);
    out.push(first);
    out.extend_from_slice(inner);
    out.push(last);
    out
}

/// All `lo = x_0 <= x_1 <= … <= x_d = hi`, in lexicographic order.
fn weak_sequences(lo: usize, hi: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(seq: &mut Vec<usize>, hi: usize, d: usize, out: &mut Vec<Vec<usize>>) {
        if seq.len() == d {
            seq.push(hi);
            out.push(seq.clone());
            seq.pop();
            return;
        }
        for x in *seq.last().unwrap()..=hi {
            seq.push(x);
            go(seq, hi, d, out);
            seq.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut vec![lo], hi, d, &mut out);
    out
}

fn check_inputs(tau: &Permutation) -> Result<()> {
    if tau.is_empty() {
        return Err(Error::Empty);
    }
    Ok(())
}

/// The separable algorithm: the DP over a tree without prime nodes.
pub fn lcp_separable(t_sigma: &DecompTree, tau: &Permutation) -> Result<LcpResult> {
    lcp_separable_with(t_sigma, tau, DpOptions::default())
}

pub fn lcp_separable_with(t_sigma: &DecompTree, tau: &Permutation, options: DpOptions) -> Result<LcpResult> {
    if max_prime_arity(t_sigma) > 0 {
        return Err(Error::PrimeNode);
    }
    check_inputs(tau)?;
    DpTable::new(t_sigma, tau, options)?.solve(Algorithm::Separable)
}

/// The general algorithm: linear nodes as in the separable case, prime nodes by slicing.
pub fn lcp_general(t_sigma: &DecompTree, tau: &Permutation) -> Result<LcpResult> {
    lcp_general_with(t_sigma, tau, DpOptions::default())
}

pub fn lcp_general_with(t_sigma: &DecompTree, tau: &Permutation, options: DpOptions) -> Result<LcpResult> {
    check_inputs(tau)?;
    DpTable::new(t_sigma, tau, options)?.solve(Algorithm::General)
}

/// Longest common pattern of σ and τ with the requested algorithm.
///
/// `Auto` guides the search with whichever input has the smaller maximal
/// prime arity (then the shorter one, then σ) and uses the separable algorithm when that
/// tree has no prime node.
pub fn lcp(sigma: &Permutation, tau: &Permutation, algorithm: Algorithm) -> Result<LcpResult> {
    lcp_with(sigma, tau, algorithm, DpOptions::default())
}

pub fn lcp_with(sigma: &Permutation, tau: &Permutation, algorithm: Algorithm, options: DpOptions) -> Result<LcpResult> {
    check_inputs(sigma)?;
    check_inputs(tau)?;
    match algorithm {
        Algorithm::Separable => {
            let tree = decomposition_tree(sigma);
            if max_prime_arity(&tree) > 0 {
                return Err(Error::NotSeparable);
            }
            lcp_separable_with(&tree, tau, options)
        }
        Algorithm::General => lcp_general_with(&decomposition_tree(sigma), tau, options),
        Algorithm::Oracle => {
            let (pattern, occ_sigma, occ_tau) = oracle::oracle_lcp_witness(sigma, tau)?;
            Ok(LcpResult { pattern, occ_sigma, occ_tau, algorithm: Algorithm::Oracle })
        }
        Algorithm::Auto => {
            let (ts, tt) = (decomposition_tree(sigma), decomposition_tree(tau));
            let (ds, dt) = (max_prime_arity(&ts), max_prime_arity(&tt));
            let guide_tau = (dt, tau.len()) < (ds, sigma.len());
            let (tree, other, d) = if guide_tau { (&tt, sigma, dt) } else { (&ts, tau, ds) };
            let result = if d == 0 {
                lcp_separable_with(tree, other, options)?
            } else {
                lcp_general_with(tree, other, options)?
            };
            Ok(if guide_tau { result.swapped() } else { result })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{separating_tree, IntervalSpan};

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn weak_sequences_are_lexicographic() {
        let seqs = weak_sequences(2, 4, 2);
        assert_eq!(seqs, vec![vec![2, 2, 4], vec![2, 3, 4], vec![2, 4, 4]]);
        assert_eq!(weak_sequences(0, 3, 4).len(), 20);
    }

    #[test]
    fn cells_for_two_one() {
        let tree = separating_tree(&perm("2 1")).unwrap();
        let mut table = DpTable::new(&tree, &perm("6 4 2 5 3 1"), DpOptions::default()).unwrap();
        let root = tree.root();
        assert_eq!(table.cell(CellKey::new(root, 2, 4, 3, 5)).length, 1);
        let w = table.witness(CellKey::new(root, 2, 5, 3, 4)).unwrap();
        assert_eq!(w.pattern, pat("2 1"));
        let cell = table.cell(CellKey::new(root, 4, 5, 1, 2));
        assert_eq!(cell, DpCell { length: 0, provenance: Provenance::Empty });
        assert_eq!(table.reconstruct(CellKey::new(root, 4, 5, 1, 2)).unwrap().pattern, Pattern::empty());
    }

    #[test]
    fn leaf_prefers_smallest_position() {
        let tree = decomposition_tree(&perm("1"));
        let mut table = DpTable::new(&tree, &perm("3 1 2"), DpOptions::default()).unwrap();
        let cell = table.cell(CellKey::new(tree.root(), 1, 3, 1, 2));
        assert_eq!(cell.provenance, Provenance::Leaf { position: 2 });
    }

    #[test]
    fn provenance_points_to_children() {
        let tree = separating_tree(&perm("1 2")).unwrap();
        let mut table = DpTable::new(&tree, &perm("2 1 3"), DpOptions::default()).unwrap();
        let key = CellKey::new(tree.root(), 1, 3, 1, 3);
        let cell = table.cell(key);
        assert_eq!(cell.length, 2);
        let subs = table.sub_cells(key).unwrap();
        let lengths: Vec<usize> = subs.iter().flatten().map(|k| table.peek(*k).unwrap().length).collect();
        assert_eq!(lengths.iter().sum::<usize>(), 2);
    }

    #[test]
    fn self_lcp_through_prime_root() {
        let sigma = perm("3 1 4 2");
        let r = lcp(&sigma, &sigma, Algorithm::General).unwrap();
        assert_eq!(r.pattern, pat("3 1 4 2"));
        assert_eq!(r.occ_sigma.positions(), &[1, 2, 3, 4]);
        assert_eq!(r.occ_tau.positions(), &[1, 2, 3, 4]);
    }

    #[test]
    fn increasing_versus_decreasing() {
        for algo in [Algorithm::Auto, Algorithm::Separable, Algorithm::General, Algorithm::Oracle] {
            assert_eq!(lcp(&perm("1 2 3"), &perm("3 2 1"), algo).unwrap().len(), 1);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(lcp(&perm("3 1 4 2"), &perm("1 2"), Algorithm::Separable), Err(Error::NotSeparable));
        let tree = decomposition_tree(&perm("2 4 1 3"));
        assert_eq!(lcp_separable(&tree, &perm("1")), Err(Error::PrimeNode));
    }

    #[test]
    fn canonical_mode_picks_smallest_pattern() {
        // 2 1 and 1 2 both have length 2 against 1 3 2; canonical prefers 1 2.
        let sigma = perm("2 3 1");
        let tau = perm("1 3 2");
        let options = DpOptions { prune: false, canonical: true };
        let r = lcp_with(&sigma, &tau, Algorithm::General, options).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.occ_sigma.matches(sigma.values(), &r.pattern));
        assert!(r.occ_tau.matches(tau.values(), &r.pattern));
        assert_eq!(r.pattern, pat("1 2"));
    }

    #[test]
    fn complexity_warning_threshold() {
        assert_eq!(complexity_warning(&decomposition_tree(&perm("2 4 1 5 3"))), None);
        let w = complexity_warning(&decomposition_tree(&perm("2 4 6 1 3 5"))).unwrap();
        assert_eq!(w.arity, 6);
        assert!(w.to_string().contains("arity 6"));
    }

    #[test]
    fn auto_guides_with_lower_arity() {
        let sigma = perm("2 4 1 3");
        let tau = perm("1 2 3 4 5");
        let r = lcp(&sigma, &tau, Algorithm::Auto).unwrap();
        assert_eq!(r.algorithm, Algorithm::Separable);
        assert_eq!(r.len(), 2);
        assert!(r.occ_sigma.matches(sigma.values(), &r.pattern));
        assert!(r.occ_tau.matches(tau.values(), &r.pattern));
    }

    #[test]
    fn find_span_in_table_tree() {
        let tree = decomposition_tree(&perm("5 1 10 9 6 7 8 11 2 4 3"));
        let table = DpTable::new(&tree, &perm("1 2"), DpOptions::default()).unwrap();
        assert!(table.tree().is_expanded());
        assert!(table.tree().find_by_span(IntervalSpan::new(3, 4)).is_some());
    }
}
