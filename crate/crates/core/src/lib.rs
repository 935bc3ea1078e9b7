//! Longest common patterns between permutations.
//!
//! The crate computes a longest permutation pattern contained in two
//! permutations at once. The search is a dynamic program guided by the
//! common-interval decomposition tree of one input: it runs in polynomial
//! time when that input is separable, and more generally whenever the prime
//! nodes of its decomposition tree have bounded arity.
//!
//! ```
//! use permpat_core::{lcp, Algorithm, Permutation};
//!
//! let sigma: Permutation = "1 4 2 5 6 3".parse().unwrap();
//! let tau: Permutation = "1 3 4 2".parse().unwrap();
//! let result = lcp(&sigma, &tau, Algorithm::Auto).unwrap();
//! assert_eq!(result.pattern.to_string(), "1 3 4 2");
//! ```

pub mod algebra;
pub mod decomp;
pub mod dp;
mod error;
pub mod export;
pub mod oracle;
pub mod perm;

pub use algebra::{concat_minus, concat_plus, concat_rho};
pub use decomp::{
    common_intervals, decomposition_tree, expand_tree, is_separable, is_simple, max_prime_arity,
    separating_tree, strong_intervals, tree_to_permutation, DecompNode, DecompTree, IntervalSpan,
    NodeId, NodeKind, Shape, Sign, ValueRange,
};
pub use dp::{
    complexity_warning, lcp, lcp_general, lcp_general_with, lcp_separable, lcp_separable_with, lcp_with, Algorithm, ComplexityWarning,
    DpCell, DpOptions, DpTable, LcpResult, Provenance, Witness,
};
pub use error::{Error, Result};
pub use perm::{avoids, find_occurrence, normalize, parse_permutation, Occurrence, Pattern, Permutation};
