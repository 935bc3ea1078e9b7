//! Pattern concatenations used to assemble sub-solutions.

use crate::error::{Error, Result};
use crate::perm::Pattern;

/// `π ⊕ π'`: `π'` placed after and above `π`.
pub fn concat_plus(left: &Pattern, right: &Pattern) -> Pattern {
    let k = left.len() as u32;
    let values = left
        .values()
        .iter()
        .copied()
        .chain(right.values().iter().map(|&v| v + k))
        .collect();
    Pattern::from_vec_unchecked(values)
}

/// `π ⊖ π'`: `π'` placed after and below `π`.
pub fn concat_minus(left: &Pattern, right: &Pattern) -> Pattern {
    let k = right.len() as u32;
    let values = left
        .values()
        .iter()
        .map(|&v| v + k)
        .chain(right.values().iter().copied())
        .collect();
    Pattern::from_vec_unchecked(values)
}

/// `⊙_ρ(π¹, …, π^d)`: block `i` keeps its position and is lifted above every
/// block `j` with `ρ_j < ρ_i`. Empty blocks are allowed.
pub fn concat_rho(rho: &Pattern, blocks: &[Pattern]) -> Result<Pattern> {
    if rho.is_empty() {
        return Err(Error::Empty);
    }
    if rho.len() != blocks.len() {
        return Err(Error::ArityMismatch { label: rho.len(), blocks: blocks.len() });
    }
    // offset[r] = total size of the blocks whose label is below r.
    let mut size_by_label = vec![0u32; rho.len() + 1];
    for (&r, block) in rho.values().iter().zip(blocks) {
        size_by_label[r as usize] = block.len() as u32;
    }
    let mut offset = vec![0u32; rho.len() + 1];
    for r in 1..rho.len() {
        offset[r + 1] = offset[r] + size_by_label[r];
    }
    let mut values = Vec::with_capacity(blocks.iter().map(Pattern::len).sum());
    for (&r, block) in rho.values().iter().zip(blocks) {
        values.extend(block.values().iter().map(|&v| v + offset[r as usize]));
    }
    Ok(Pattern::from_vec_unchecked(values))
}
