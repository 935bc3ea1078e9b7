#![allow(dead_code)]

use permpat_core::{DecompTree, Permutation, Shape, Sign};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every permutation of size `n`, in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    fn go(prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation::new(prefix.clone()).unwrap());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u32 + 1);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut v: Vec<u32> = (1..=n as u32).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

pub fn random_binary_shape<R: Rng>(rng: &mut R, k: usize) -> Shape {
    if k == 1 {
        return Shape::Leaf;
    }
    let left = rng.gen_range(1..k);
    let sign = if rng.gen() { Sign::Plus } else { Sign::Minus };
    Shape::Linear(sign, vec![random_binary_shape(rng, left), random_binary_shape(rng, k - left)])
}

pub fn random_separable<R: Rng>(rng: &mut R, k: usize) -> Permutation {
    DecompTree::from_shape(&random_binary_shape(rng, k))
        .unwrap()
        .decorated_permutation()
}

/// Every binary separating tree of `values`, built directly from the
/// splitting rule: a node splits into a prefix and a suffix whose values are
/// entirely below (`+`) or entirely above (`-`) one another.
pub fn all_separating_shapes(values: &[u32]) -> Vec<Shape> {
    if values.len() == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for m in 1..values.len() {
        let (l, r) = values.split_at(m);
        let (lmin, lmax) = (l.iter().min().unwrap(), l.iter().max().unwrap());
        let (rmin, rmax) = (r.iter().min().unwrap(), r.iter().max().unwrap());
        let sign = if lmax < rmin {
            Sign::Plus
        } else if lmin > rmax {
            Sign::Minus
        } else {
            continue;
        };
        let lefts = all_separating_shapes(l);
        let rights = all_separating_shapes(r);
        for ls in &lefts {
            for rs in &rights {
                out.push(Shape::Linear(sign, vec![ls.clone(), rs.clone()]));
            }
        }
    }
    out
}
