//! Ground sets and bit-encoded subsets.
//!
//! Element `i` of a ground set corresponds to bit `i` of a [`SubsetMask`].
//! Ground sets hold at most [`MAX_GROUND`] elements so that every subset,
//! including the full set, fits in a single `u64` word.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground-set size.
pub const MAX_GROUND: usize = 63;

/// A finite base set `{0, 1, ..., n - 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        crate::error::capacity("ground set", MAX_GROUND, n)?;
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The mask with every element of the ground set.
    pub fn full(&self) -> SubsetMask {
        SubsetMask((1u64 << self.n) - 1)
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> u64 {
        1u64 << self.n
    }

    pub fn contains(&self, mask: SubsetMask) -> bool {
        mask.0 >> self.n == 0
    }

    /// Returns `mask` unchanged if it lies inside the ground set.
    pub fn check(&self, mask: SubsetMask) -> Result<SubsetMask> {
        if self.contains(mask) {
            Ok(mask)
        } else {
            Err(Error::ForeignMask {
                mask: mask.to_string(),
                n: self.n,
            })
        }
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "element {x} is outside the ground set of size {}",
                self.n
            )))
        }
    }

    /// All subsets in ascending mask order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        (0..self.subset_count()).map(SubsetMask)
    }
}

/// A subset of a ground set, one bit per element.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub const fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(x: usize) -> Self {
        debug_assert!(x < 64);
        Self(1u64 << x)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements.into_iter().fold(Self::EMPTY, |acc, x| acc.with(x))
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    pub fn with(self, x: usize) -> Self {
        Self(self.0 | 1u64 << x)
    }

    pub fn without(self, x: usize) -> Self {
        Self(self.0 & !(1u64 << x))
    }

    /// Cardinality of the subset.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: Self) -> Self {
        Self(self.0 ^ other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Element indices in ascending order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Every subset of `self`, in ascending mask order.
    pub fn submasks(self) -> Submasks {
        Submasks {
            sup: self.0,
            next: Some(0),
        }
    }
}

/// Iterator over the elements of a mask.
#[derive(Clone, Debug)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

/// Ascending enumeration of the submasks of a fixed mask.
#[derive(Clone, Debug)]
pub struct Submasks {
    sup: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        // (cur - sup) & sup is the next larger submask; it wraps to 0 after sup itself.
        self.next = (cur != self.sup).then(|| cur.wrapping_sub(self.sup) & self.sup);
        Some(SubsetMask(cur))
    }
}

impl BitOr for SubsetMask {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl BitAnd for SubsetMask {
    type Output = Self;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl BitXor for SubsetMask {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        self.symmetric_difference(rhs)
    }
}

impl Sub for SubsetMask {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl Not for SubsetMask {
    type Output = Self;
    fn not(self) -> Self {
        Self(!self.0)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

impl FromStr for SubsetMask {
    type Err = Error;

    /// Parses `0x`-prefixed hexadecimal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .ok_or_else(|| Error::Parse(format!("mask {s:?} must start with 0x")))?;
        u64::from_str_radix(digits, 16)
            .map(SubsetMask)
            .map_err(|e| Error::Parse(format!("mask {s:?}: {e}")))
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SubsetMask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn ground_set_cap() {
        assert!(GroundSet::new(63).is_ok());
        assert!(matches!(
            GroundSet::new(64),
            Err(Error::Capacity {
                cap: 63,
                got: 64,
                ..
            })
        ));
        assert_eq!(GroundSet::new(0).unwrap().full(), SubsetMask::EMPTY);
        assert_eq!(GroundSet::new(63).unwrap().full().len(), 63);
    }

    #[test]
    fn foreign_masks_are_rejected() {
        let v = GroundSet::new(3).unwrap();
        assert!(v.check(SubsetMask::from_bits(0b111)).is_ok());
        assert!(v.check(SubsetMask::from_bits(0b1000)).is_err());
    }

    #[test]
    fn submasks_ascend_and_cover() {
        let m = SubsetMask::from_bits(0b10110);
        let subs: Vec<u64> = m.submasks().map(|s| s.bits()).collect();
        assert_eq!(subs, vec![0, 2, 4, 6, 16, 18, 20, 22]);
        assert_eq!(SubsetMask::EMPTY.submasks().count(), 1);
    }

    #[test]
    fn hex_text_form() {
        assert_eq!(SubsetMask::from_bits(5).to_string(), "0x5");
        assert_eq!(SubsetMask::EMPTY.to_string(), "0x0");
        assert_eq!("0x1f".parse::<SubsetMask>().unwrap().bits(), 31);
        assert!("1f".parse::<SubsetMask>().is_err());
        assert!("0xzz".parse::<SubsetMask>().is_err());
    }

    proptest! {
        #[test]
        fn set_ops_match_btreeset(a in 0u64..1 << 12, b in 0u64..1 << 12) {
            let (ma, mb) = (SubsetMask::from_bits(a), SubsetMask::from_bits(b));
            let sa: BTreeSet<usize> = ma.elements().collect();
            let sb: BTreeSet<usize> = mb.elements().collect();
            let back = |s: BTreeSet<usize>| SubsetMask::from_elements(s);
            prop_assert_eq!(ma | mb, back(&sa | &sb));
            prop_assert_eq!(ma & mb, back(&sa & &sb));
            prop_assert_eq!(ma - mb, back(&sa - &sb));
            prop_assert_eq!(ma ^ mb, back(&sa ^ &sb));
            prop_assert_eq!(ma.len(), sa.len());
            prop_assert_eq!(ma.is_subset_of(mb), sa.is_subset(&sb));
            prop_assert_eq!(ma ^ (ma ^ mb), mb);
            prop_assert_eq!(ma.to_string().parse::<SubsetMask>().unwrap(), ma);
        }
    }
}
