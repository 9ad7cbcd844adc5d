//! Compiled value tables and the enumeration loops behind the certifiers.
//!
//! Exact functions whose values are small rationals are rescaled onto a common
//! denominator so the hot loops run on `i64` without losing exactness. Other
//! exact functions fall back to big rationals; float-backed functions use
//! `f64` with a tolerance.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::mask::SubsetMask;
use crate::setfn::SetFunction;
use crate::value::{ratio, Rational, Value};

/// Masks per work unit. Fixed so that chunk boundaries, and therefore merge
/// order, do not depend on the thread count.
const CHUNK: u64 = 1 << 10;

/// Largest magnitude kept in a scaled table; second differences of four such
/// entries stay below `2^62`.
const SCALED_LIMIT: u64 = 1 << 60;

pub(crate) enum Compiled {
    Scaled { values: Vec<i64>, denom: i64 },
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Compiled {
    pub(crate) fn build(f: &SetFunction) -> Compiled {
        if f.is_exact() {
            if let Some(scaled) = Self::scaled(f) {
                return scaled;
            }
            let values = f
                .tabulate()
                .expect("caller checked capacity")
                .into_iter()
                .map(|v| match v {
                    Value::Exact(r) => r,
                    Value::Approx(_) => unreachable!("exact handle produced a float"),
                })
                .collect();
            Compiled::Exact(values)
        } else {
            let values = (0..f.ground().subset_count())
                .into_par_iter()
                .map(|m| f.eval(SubsetMask::from_bits(m)).to_f64())
                .collect();
            Compiled::Float(values)
        }
    }

    fn scaled(f: &SetFunction) -> Option<Compiled> {
        let count = f.ground().subset_count();
        let denom = match f.denominator_hint() {
            Some(d) => d,
            None => (0..count)
                .into_par_iter()
                .map(|m| f.small_ratio(SubsetMask::from_bits(m)).map(|(_, q)| q))
                .try_fold(|| 1i64, |l, q| checked_lcm(l, q?))
                .try_reduce(|| 1i64, checked_lcm)?,
        };
        let values = (0..count)
            .into_par_iter()
            .map(|m| {
                let (p, q) = f.small_ratio(SubsetMask::from_bits(m))?;
                if denom % q != 0 {
                    return None;
                }
                p.checked_mul(denom / q)
                    .filter(|v| v.unsigned_abs() <= SCALED_LIMIT)
            })
            .collect::<Option<Vec<i64>>>()?;
        Some(Compiled::Scaled { values, denom })
    }

    pub(crate) fn is_exact(&self) -> bool {
        !matches!(self, Compiled::Float(_))
    }

    /// `t[hi] − t[lo]` as a value.
    pub(crate) fn difference(&self, hi: u64, lo: u64) -> Value {
        let (hi, lo) = (hi as usize, lo as usize);
        match self {
            Compiled::Scaled { values, denom } => {
                Value::Exact(ratio(values[hi] - values[lo], *denom))
            }
            Compiled::Exact(values) => Value::Exact(&values[hi] - &values[lo]),
            Compiled::Float(values) => Value::Approx(values[hi] - values[lo]),
        }
    }
}

fn checked_lcm(a: i64, b: i64) -> Option<i64> {
    if a % b == 0 {
        return Some(a);
    }
    (a / a.gcd(&b)).checked_mul(b)
}

/// Table entry arithmetic used by the loops. Second differences are formed
/// as `(hi_a − lo_a) − (hi_b − lo_b)` in the entry type itself.
pub(crate) trait Entry: Clone + Send + Sync + Sized {
    fn sub(&self, other: &Self) -> Self;
    fn sign(&self, tau: f64) -> Ordering;
    fn abs_cmp(&self, other: &Self) -> Ordering;

    #[inline(always)]
    fn gap(hi_a: &Self, lo_a: &Self, hi_b: &Self, lo_b: &Self) -> Self {
        hi_a.sub(lo_a).sub(&hi_b.sub(lo_b))
    }

    /// Records `lo[i] − hi[i]` for every `i`; `triple(i)` names the check.
    fn local_run(
        lo: &[Self],
        hi: &[Self],
        tau: f64,
        tally: &mut Tally<Self>,
        triple: impl Fn(usize) -> Triple,
    ) {
        for (i, (l, h)) in lo.iter().zip(hi).enumerate() {
            tally.record(triple(i), l.sub(h), tau);
        }
    }
}

impl Entry for i64 {
    #[inline(always)]
    fn sub(&self, other: &i64) -> i64 {
        self - other
    }

    #[inline(always)]
    fn sign(&self, _tau: f64) -> Ordering {
        self.cmp(&0)
    }

    #[inline(always)]
    fn abs_cmp(&self, other: &i64) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }

    fn local_run(
        lo: &[i64],
        hi: &[i64],
        _tau: f64,
        tally: &mut Tally<i64>,
        triple: impl Fn(usize) -> Triple,
    ) {
        let (mut sub, mut sup, mut min, mut max) = (0u64, 0u64, 0i64, 0i64);
        for (l, h) in lo.iter().zip(hi) {
            let gap = l - h;
            sub += (gap < 0) as u64;
            sup += (gap > 0) as u64;
            min = min.min(gap);
            max = max.max(gap);
        }
        tally.checks += lo.len() as u64;
        tally.sub += sub;
        tally.sup += sup;
        let first = |target: i64| {
            let i = lo
                .iter()
                .zip(hi)
                .position(|(l, h)| l - h == target)
                .unwrap();
            triple(i)
        };
        if sub > 0 && tally.worst_sub.as_ref().is_none_or(|(_, g)| min <= *g) {
            keep_worst(&mut tally.worst_sub, first(min), min);
        }
        if sup > 0 && tally.worst_sup.as_ref().is_none_or(|(_, g)| max >= *g) {
            keep_worst(&mut tally.worst_sup, first(max), max);
        }
    }
}

impl Entry for Rational {
    fn sub(&self, other: &Rational) -> Rational {
        self - other
    }

    fn sign(&self, _tau: f64) -> Ordering {
        self.cmp(&Rational::zero())
    }

    fn abs_cmp(&self, other: &Rational) -> Ordering {
        num_traits::Signed::abs(self).cmp(&num_traits::Signed::abs(other))
    }
}

impl Entry for f64 {
    #[inline(always)]
    fn sub(&self, other: &f64) -> f64 {
        self - other
    }

    #[inline(always)]
    fn sign(&self, tau: f64) -> Ordering {
        if *self > tau {
            Ordering::Greater
        } else if *self < -tau {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    fn abs_cmp(&self, other: &f64) -> Ordering {
        self.abs().total_cmp(&other.abs())
    }
}

/// `(A, B, x)` with `A ⊆ B`, `x ∉ B`; ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Triple {
    pub a: u64,
    pub b: u64,
    pub x: u32,
}

/// Violation counts and worst witnesses over some range of checks.
#[derive(Clone)]
pub(crate) struct Tally<T> {
    pub checks: u64,
    pub sub: u64,
    pub sup: u64,
    pub worst_sub: Option<(Triple, T)>,
    pub worst_sup: Option<(Triple, T)>,
}

impl<T> Default for Tally<T> {
    fn default() -> Self {
        Self {
            checks: 0,
            sub: 0,
            sup: 0,
            worst_sub: None,
            worst_sup: None,
        }
    }
}

/// Keeps the larger-magnitude gap; ties go to the lexicographically smaller triple.
fn keep_worst<T: Entry>(slot: &mut Option<(Triple, T)>, triple: Triple, gap: T) {
    let replace = match slot {
        None => true,
        Some((t, g)) => match gap.abs_cmp(g) {
            Ordering::Greater => true,
            Ordering::Equal => triple < *t,
            Ordering::Less => false,
        },
    };
    if replace {
        *slot = Some((triple, gap));
    }
}

impl<T: Entry> Tally<T> {
    #[inline(always)]
    fn record(&mut self, triple: Triple, gap: T, tau: f64) {
        self.checks += 1;
        match gap.sign(tau) {
            Ordering::Less => {
                self.sub += 1;
                keep_worst(&mut self.worst_sub, triple, gap);
            }
            Ordering::Greater => {
                self.sup += 1;
                keep_worst(&mut self.worst_sup, triple, gap);
            }
            Ordering::Equal => {}
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.checks += other.checks;
        self.sub += other.sub;
        self.sup += other.sup;
        if let Some((t, g)) = other.worst_sub {
            keep_worst(&mut self.worst_sub, t, g);
        }
        if let Some((t, g)) = other.worst_sup {
            keep_worst(&mut self.worst_sup, t, g);
        }
        self
    }
}

/// Merges partial tallies in the order given.
fn merge_all<T: Entry>(parts: Vec<Tally<T>>) -> Tally<T> {
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

/// Inserts a zero bit at position `pos`, shifting higher bits up.
#[inline(always)]
fn spread(k: u64, pos: u32) -> u64 {
    let low = (1u64 << pos) - 1;
    (k & low) | (k & !low) << 1
}

/// Checks `t(A+x) + t(A+y) ≥ t(A+x+y) + t(A)` for every `A` and every pair
/// `y < x` outside `A`, recorded as the triple `(A, A+y, x)`.
///
/// For each `x` the increments `d[k] = t(A+x) − t(A)` are built once over the
/// sets `A = spread(k, x)` avoiding `x`; each check is then `d[k] − d[k+y]`
/// over contiguous runs of `k` with bit `y` clear.
pub(crate) fn local<T: Entry>(t: &[T], n: usize, tau: f64) -> Tally<T> {
    if n < 2 {
        return Tally::default();
    }
    let half = 1u64 << (n - 1);
    let mut total = Tally::default();
    for x in 1..n as u32 {
        let bx = 1usize << x;
        let d: Vec<T> = (0..half)
            .into_par_iter()
            .map(|k| {
                let a = spread(k, x) as usize;
                t[a | bx].sub(&t[a])
            })
            .collect();
        let units: Vec<(u32, u64)> = (0..x)
            .flat_map(|y| {
                let step = CHUNK.max(2 << y);
                (0..half).step_by(step as usize).map(move |lo| (y, lo))
            })
            .collect();
        let parts = units
            .into_par_iter()
            .map(|(y, lo)| {
                let run = 1usize << y;
                let hi = (lo + CHUNK.max(2 << y)).min(half) as usize;
                let mut tally = Tally::default();
                for blk in (lo as usize..hi).step_by(2 * run) {
                    T::local_run(
                        &d[blk..blk + run],
                        &d[blk + run..blk + 2 * run],
                        tau,
                        &mut tally,
                        |i| {
                            let a = spread((blk + i) as u64, x);
                            Triple {
                                a,
                                b: a | 1 << y,
                                x,
                            }
                        },
                    );
                }
                tally
            })
            .collect();
        total = total.merge(merge_all(parts));
    }
    total
}

/// Checks the defining inequality on every `(A ⊆ B, x ∉ B)`.
pub(crate) fn definitional<T: Entry>(t: &[T], n: usize, tau: f64) -> Tally<T> {
    let full = (1u64 << n) - 1;
    let count = 1u64 << n;
    let parts = (0..count.div_ceil(CHUNK)).into_par_iter().map(|c| {
        let (lo, hi) = (c * CHUNK, ((c + 1) * CHUNK).min(count));
        let mut tally = Tally::default();
        for b in lo..hi {
            let tb = &t[b as usize];
            let free = full & !b;
            for a in SubsetMask::from_bits(b).submasks() {
                let a = a.bits();
                let ta = &t[a as usize];
                let mut xs = free;
                while xs != 0 {
                    let x = xs.trailing_zeros();
                    xs &= xs - 1;
                    let bit = 1u64 << x;
                    let gap = T::gap(&t[(a | bit) as usize], ta, &t[(b | bit) as usize], tb);
                    tally.record(Triple { a, b, x }, gap, tau);
                }
            }
        }
        tally
    });
    merge_all(parts.collect())
}

/// First triple in `(A, B, x)` order, over the local pairs `B = A ∪ {y}`,
/// `y < x`, whose gap has the given sign.
pub(crate) fn first_violation<T: Entry>(
    t: &[T],
    n: usize,
    tau: f64,
    want: Ordering,
) -> Option<Triple> {
    let pairs: Vec<(u32, u32)> = (1..n as u32)
        .flat_map(|x| (0..x).map(move |y| (y, x)))
        .collect();
    let count = if n < 2 { 0 } else { 1u64 << (n - 2) };
    pairs
        .into_par_iter()
        .filter_map(|(y, x)| {
            let (by, bx) = (1u64 << y, 1u64 << x);
            (0..count).find_map(|j| {
                let a = spread(spread(j, y), x);
                let ay = a | by;
                let gap = T::gap(
                    &t[(a | bx) as usize],
                    &t[a as usize],
                    &t[(ay | bx) as usize],
                    &t[ay as usize],
                );
                (gap.sign(tau) == want).then_some(Triple { a, b: ay, x })
            })
        })
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jaccard::JaccardFamily;
    use crate::mask::GroundSet;

    #[test]
    fn jaccard_tables_compile_to_scaled_integers() {
        let fam =
            JaccardFamily::new(GroundSet::new(6).unwrap(), SubsetMask::from_bits(0b101)).unwrap();
        for f in [fam.direct(), fam.misprediction(), fam.loss().negate()] {
            let c = Compiled::build(&f);
            let Compiled::Scaled { values, denom } = &c else {
                panic!("expected scaled table");
            };
            for m in f.ground().subsets() {
                assert_eq!(Value::ratio(values[m.bits() as usize], *denom), f.eval(m));
            }
        }
    }

    #[test]
    fn huge_denominators_fall_back_to_big_rationals() {
        let ground = GroundSet::new(2).unwrap();
        let big = Value::Exact(ratio(1, i64::MAX) + ratio(1, i64::MAX - 1));
        let f = SetFunction::tabulated(ground, vec![Value::zero(), big.clone(), Value::one(), big])
            .unwrap();
        assert!(matches!(Compiled::build(&f), Compiled::Exact(_)));
    }

    #[test]
    fn merge_prefers_magnitude_then_order() {
        let t1 = Triple { a: 0, b: 1, x: 2 };
        let t2 = Triple { a: 0, b: 2, x: 1 };
        let mut slot = None;
        keep_worst::<i64>(&mut slot, t2, -3);
        keep_worst::<i64>(&mut slot, t1, -3);
        assert_eq!(slot, Some((t1, -3)));
        keep_worst::<i64>(&mut slot, t2, -4);
        assert_eq!(slot, Some((t2, -4)));
        keep_worst::<i64>(&mut slot, t1, 2);
        assert_eq!(slot, Some((t2, -4)));
    }

    #[test]
    fn local_check_count() {
        // sum over A of C(n - |A|, 2) = C(n, 2) 2^(n-2)
        let f = SetFunction::zero(GroundSet::new(7).unwrap());
        let Compiled::Scaled { values, .. } = Compiled::build(&f) else {
            panic!()
        };
        assert_eq!(local(&values, 7, 0.0).checks, 21 * 32);
        // sum over B of 2^|B| (n - |B|) = n 3^(n-1)
        assert_eq!(definitional(&values, 7, 0.0).checks, 7 * 729);
    }

    fn naive_local(t: &[i64], n: usize) -> Tally<i64> {
        let mut tally = Tally::default();
        for a in 0..1u64 << n {
            for x in 0..n as u32 {
                for y in 0..x {
                    let (bx, by) = (1u64 << x, 1u64 << y);
                    if a & (bx | by) != 0 {
                        continue;
                    }
                    let ay = a | by;
                    let gap = i64::gap(
                        &t[(a | bx) as usize],
                        &t[a as usize],
                        &t[(ay | bx) as usize],
                        &t[ay as usize],
                    );
                    tally.record(Triple { a, b: ay, x }, gap, 0.0);
                }
            }
        }
        tally
    }

    #[test]
    fn local_kernel_matches_naive_loop() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 3, 5, 9, 12] {
            for _ in 0..4 {
                let range = rng.gen_range(1..6i64);
                let t: Vec<i64> = (0..1 << n).map(|_| rng.gen_range(-range..=range)).collect();
                let (fast, slow) = (local(&t, n, 0.0), naive_local(&t, n));
                assert_eq!(
                    (
                        fast.checks,
                        fast.sub,
                        fast.sup,
                        fast.worst_sub,
                        fast.worst_sup
                    ),
                    (
                        slow.checks,
                        slow.sub,
                        slow.sup,
                        slow.worst_sub,
                        slow.worst_sup
                    )
                );
                let r: Vec<Rational> = t.iter().map(|&v| ratio(v, 1)).collect();
                let exact = local(&r, n, 0.0);
                assert_eq!((exact.sub, exact.sup), (slow.sub, slow.sup));
                assert_eq!(exact.worst_sub.map(|w| w.0), slow.worst_sub.map(|w| w.0));
            }
        }
    }
}
