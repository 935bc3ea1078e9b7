//! Input generators shared by the benchmarks.

use permpat_core::{DecompTree, Permutation, Shape, Sign};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut values: Vec<u32> = (1..=n as u32).collect();
    values.shuffle(rng);
    Permutation::new(values).unwrap()
}

/// A random binary separating tree with `k` leaves.
pub fn random_separating_tree<R: Rng>(rng: &mut R, k: usize) -> DecompTree {
    DecompTree::from_shape(&random_shape(rng, k)).unwrap()
}

fn random_shape<R: Rng>(rng: &mut R, k: usize) -> Shape {
    if k == 1 {
        return Shape::Leaf;
    }
    let left = rng.gen_range(1..k);
    let sign = if rng.gen() { Sign::Plus } else { Sign::Minus };
    Shape::Linear(sign, vec![random_shape(rng, left), random_shape(rng, k - left)])
}
