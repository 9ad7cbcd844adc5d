//! Brute-force reference implementations over `BTreeSet`s.

#![allow(dead_code)]

use std::collections::BTreeSet;

use jaccard_submod::{Rational, SubsetMask};
use num_traits::{One, Zero};

pub type Set = BTreeSet<usize>;

pub fn set(mask: SubsetMask) -> Set {
    (0..64).filter(|&i| mask.bits() >> i & 1 == 1).collect()
}

pub fn mask(s: &Set) -> SubsetMask {
    SubsetMask::from_elements(s.iter().copied())
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// |G ∩ A| / |G ∪ A|, with 1 for the empty union.
pub fn jaccard(g: &Set, a: &Set) -> Rational {
    let union = g.union(a).count();
    if union == 0 {
        return Rational::one();
    }
    frac(g.intersection(a).count() as i64, union as i64)
}

pub fn symdiff(a: &Set, b: &Set) -> Set {
    a.symmetric_difference(b).copied().collect()
}

pub fn with(a: &Set, x: usize) -> Set {
    let mut s = a.clone();
    s.insert(x);
    s
}

/// Violation counts over every `(A ⊆ B, x ∉ B)`, by the textbook loops.
pub fn naive_counts(n: usize, f: impl Fn(&Set) -> Rational) -> (u64, u64, u64) {
    let all: Vec<Set> = (0..1u64 << n)
        .map(|m| set(SubsetMask::from_bits(m)))
        .collect();
    let (mut checks, mut sub, mut sup) = (0, 0, 0);
    for b in &all {
        for a in all.iter().filter(|a| a.is_subset(b)) {
            for x in (0..n).filter(|x| !b.contains(x)) {
                let gap = (f(&with(a, x)) - f(a)) - (f(&with(b, x)) - f(b));
                checks += 1;
                if gap < Rational::zero() {
                    sub += 1;
                } else if gap > Rational::zero() {
                    sup += 1;
                }
            }
        }
    }
    (checks, sub, sup)
}
