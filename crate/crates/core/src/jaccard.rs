//! Jaccard-index set functions in the prediction and misprediction domains.
//!
//! For a fixed ground truth `G ⊆ V`:
//!
//! * `f(A) = |G ∩ A| / |G ∪ A|` is the Jaccard index of a prediction `A`;
//! * `g(M) = |G \ M| / |G ∪ M|` is the same index written as a function of
//!   the misprediction set `M = A △ G`, so that `g(M) = f(M △ G)`;
//! * the Jaccard loss is `1 − g(M)`.
//!
//! `f` is in general neither submodular nor supermodular, while `g` is
//! supermodular (so the loss is submodular). Every value here is an exact
//! rational.

use crate::error::{Error, Result};
use crate::mask::{GroundSet, SubsetMask};
use crate::setfn::SetFunction;
use crate::value::{ratio, Rational};

/// Value assigned to `0/0`, which occurs only when `G = ∅` and the argument is `∅`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EmptyConvention {
    Zero,
    #[default]
    One,
}

impl EmptyConvention {
    fn value(self) -> u32 {
        match self {
            EmptyConvention::Zero => 0,
            EmptyConvention::One => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum JaccardForm {
    Direct,
    Misprediction,
    Loss,
}

/// A ground set together with a ground-truth subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JaccardFamily {
    ground: GroundSet,
    truth: SubsetMask,
    empty: EmptyConvention,
}

impl JaccardFamily {
    pub fn new(ground: GroundSet, truth: SubsetMask) -> Result<Self> {
        ground.check(truth)?;
        Ok(Self {
            ground,
            truth,
            empty: EmptyConvention::default(),
        })
    }

    pub fn with_empty_convention(mut self, empty: EmptyConvention) -> Self {
        self.empty = empty;
        self
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn truth(&self) -> SubsetMask {
        self.truth
    }

    pub fn empty_convention(&self) -> EmptyConvention {
        self.empty
    }

    /// Unreduced `(numerator, denominator)` of the chosen form at `mask`.
    pub(crate) fn parts(&self, form: JaccardForm, mask: SubsetMask) -> (u32, u32) {
        let g = self.truth;
        let den = (g | mask).len() as u32;
        let num = match form {
            JaccardForm::Direct => (g & mask).len() as u32,
            JaccardForm::Misprediction | JaccardForm::Loss => (g - mask).len() as u32,
        };
        if den == 0 {
            let c = self.empty.value();
            return match form {
                JaccardForm::Loss => (1 - c, 1),
                _ => (c, 1),
            };
        }
        match form {
            JaccardForm::Loss => (den - num, den),
            _ => (num, den),
        }
    }

    pub(crate) fn evaluate(&self, form: JaccardForm, mask: SubsetMask) -> Rational {
        let (p, q) = self.parts(form, mask);
        ratio(p.into(), q.into())
    }

    /// `f(A) = |G ∩ A| / |G ∪ A|`.
    pub fn jaccard_index(&self, a: SubsetMask) -> Result<Rational> {
        self.ground.check(a)?;
        Ok(self.evaluate(JaccardForm::Direct, a))
    }

    /// `g(M) = |G \ M| / |G ∪ M|`.
    pub fn misprediction_jaccard(&self, m: SubsetMask) -> Result<Rational> {
        self.ground.check(m)?;
        Ok(self.evaluate(JaccardForm::Misprediction, m))
    }

    /// `1 − g(M)`.
    pub fn jaccard_loss(&self, m: SubsetMask) -> Result<Rational> {
        self.ground.check(m)?;
        Ok(self.evaluate(JaccardForm::Loss, m))
    }

    /// Handle for `f` over predictions.
    pub fn direct(&self) -> SetFunction {
        SetFunction::jaccard(*self, JaccardForm::Direct)
    }

    /// Handle for `g` over mispredictions.
    pub fn misprediction(&self) -> SetFunction {
        SetFunction::jaccard(*self, JaccardForm::Misprediction)
    }

    /// Handle for the Jaccard loss `1 − g` over mispredictions.
    pub fn loss(&self) -> SetFunction {
        SetFunction::jaccard(*self, JaccardForm::Loss)
    }

    fn check_nested(&self, small: SubsetMask, large: SubsetMask, x: usize) -> Result<()> {
        self.ground.check(small)?;
        self.ground.check(large)?;
        self.ground.check_element(x)?;
        if !small.is_subset_of(large) {
            return Err(Error::Precondition(format!(
                "{small} is not a subset of {large}"
            )));
        }
        if large.contains(x) {
            return Err(Error::Precondition(format!(
                "element {x} belongs to {large}"
            )));
        }
        Ok(())
    }

    fn second_difference(
        &self,
        form: JaccardForm,
        small: SubsetMask,
        large: SubsetMask,
        x: usize,
    ) -> Rational {
        let v = |m| self.evaluate(form, m);
        (v(small.with(x)) - v(small)) - (v(large.with(x)) - v(large))
    }

    /// `1/|G ∪ A| − 1/|G ∪ B|`, the second difference of `f` when the added
    /// element lies in `G`. `None` when `G ∪ A` is empty.
    pub fn case_i_closed_form(&self, a: SubsetMask, b: SubsetMask) -> Option<Rational> {
        let ka = (self.truth | a).len() as i64;
        let kb = (self.truth | b).len() as i64;
        (ka > 0).then(|| ratio(1, ka) - ratio(1, kb))
    }

    /// `−1/|G ∪ M| + 1/|G ∪ N|`, the second difference of `g` when the added
    /// element lies in `G`. `None` when `G ∪ M` is empty.
    pub fn misprediction_case_i_closed_form(
        &self,
        m: SubsetMask,
        n: SubsetMask,
    ) -> Option<Rational> {
        self.case_i_closed_form(m, n).map(|r| -r)
    }

    /// `f(A ∪ {x}) − f(A) − (f(B ∪ {x}) − f(B))` for `A ⊆ B`, `x ∉ B`.
    ///
    /// When `x ∈ G` the result is checked against [`Self::case_i_closed_form`];
    /// when `x ∉ G`, `|G ∩ A| = |G ∩ B| = 1` and `|B| = |A| + 1` it is checked
    /// against [`case_ii_closed_form`] with `k = |G ∪ A|`. A disagreement is
    /// reported as [`Error::ClosedFormMismatch`].
    pub fn marginal_difference_f(
        &self,
        a: SubsetMask,
        b: SubsetMask,
        x: usize,
    ) -> Result<Rational> {
        self.check_nested(a, b, x)?;
        let direct = self.second_difference(JaccardForm::Direct, a, b, x);
        let g = self.truth;
        let closed = if g.contains(x) {
            self.case_i_closed_form(a, b).map(|c| ("case i", c))
        } else if (g & a).len() == 1 && (g & b).len() == 1 && b.len() == a.len() + 1 {
            Some(("case ii", case_ii_closed_form((g | a).len())))
        } else {
            None
        };
        match closed {
            Some((case, c)) if c != direct => Err(Error::ClosedFormMismatch {
                case,
                direct: direct.to_string(),
                closed: c.to_string(),
            }),
            _ => Ok(direct),
        }
    }

    /// `g(M ∪ {x}) − g(M) − (g(N ∪ {x}) − g(N))` for `M ⊆ N`, `x ∉ N`; never
    /// positive. Checked against the closed form when `x ∈ G`.
    pub fn marginal_difference_g(
        &self,
        m: SubsetMask,
        n: SubsetMask,
        x: usize,
    ) -> Result<Rational> {
        self.check_nested(m, n, x)?;
        let direct = self.second_difference(JaccardForm::Misprediction, m, n, x);
        if self.truth.contains(x) {
            if let Some(c) = self.misprediction_case_i_closed_form(m, n) {
                if c != direct {
                    return Err(Error::ClosedFormMismatch {
                        case: "misprediction case i",
                        direct: direct.to_string(),
                        closed: c.to_string(),
                    });
                }
            }
        }
        Ok(direct)
    }

    /// Whether `|G \ N| ≤ |G \ M| ≤ |G| ≤ |G ∪ M| ≤ |G ∪ N|` holds for `M ⊆ N`.
    pub fn chain_inequality_check(&self, m: SubsetMask, n: SubsetMask) -> Result<bool> {
        self.ground.check(m)?;
        self.ground.check(n)?;
        if !m.is_subset_of(n) {
            return Err(Error::Precondition(format!("{m} is not a subset of {n}")));
        }
        let g = self.truth;
        let chain = [
            (g - n).len(),
            (g - m).len(),
            g.len(),
            (g | m).len(),
            (g | n).len(),
        ];
        Ok(chain.windows(2).all(|w| w[0] <= w[1]))
    }
}

/// `1/(k+1) − 1/k − (1/(k+2) − 1/(k+1))`: the second difference of `f` when
/// `x ∉ G`, `|G ∩ A| = |G ∩ B| = 1`, `|B| = |A| + 1` and `k = |G ∪ A|`.
/// Negative for every `k ≥ 1`.
pub fn case_ii_closed_form(k: usize) -> Rational {
    assert!(k >= 1, "case ii needs |G ∪ A| >= 1");
    let k = k as i64;
    ratio(1, k + 1) - ratio(1, k) - (ratio(1, k + 2) - ratio(1, k + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, truth: &[usize]) -> JaccardFamily {
        JaccardFamily::new(GroundSet::new(n).unwrap(), m(truth)).unwrap()
    }

    fn m(elems: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(elems.iter().copied())
    }

    #[test]
    fn jaccard_index_examples() {
        assert_eq!(fam(2, &[0]).jaccard_index(m(&[0])).unwrap(), ratio(1, 1));
        assert_eq!(fam(2, &[0]).jaccard_index(m(&[0, 1])).unwrap(), ratio(1, 2));
        assert_eq!(fam(2, &[]).jaccard_index(m(&[])).unwrap(), ratio(1, 1));
        let zero = fam(2, &[]).with_empty_convention(EmptyConvention::Zero);
        assert_eq!(zero.jaccard_index(m(&[])).unwrap(), ratio(0, 1));
        assert!(fam(2, &[0]).jaccard_index(m(&[2])).is_err());
    }

    #[test]
    fn misprediction_examples() {
        let f = fam(3, &[0, 1]);
        assert_eq!(f.misprediction_jaccard(m(&[])).unwrap(), ratio(1, 1));
        assert_eq!(f.misprediction_jaccard(m(&[0])).unwrap(), ratio(1, 2));
        assert_eq!(f.jaccard_index(m(&[1])).unwrap(), ratio(1, 2));
        let f = fam(3, &[0]);
        assert_eq!(f.misprediction_jaccard(m(&[1, 2])).unwrap(), ratio(1, 3));
        assert_eq!(f.jaccard_index(m(&[0, 1, 2])).unwrap(), ratio(1, 3));
    }

    #[test]
    fn loss_examples() {
        assert_eq!(fam(2, &[0, 1]).jaccard_loss(m(&[])).unwrap(), ratio(0, 1));
        assert_eq!(fam(2, &[0]).jaccard_loss(m(&[0])).unwrap(), ratio(1, 1));
        assert_eq!(fam(2, &[0]).jaccard_loss(m(&[1])).unwrap(), ratio(1, 2));
        let empty = fam(2, &[]);
        assert_eq!(empty.jaccard_loss(m(&[])).unwrap(), ratio(0, 1));
        let zero = empty.with_empty_convention(EmptyConvention::Zero);
        assert_eq!(zero.jaccard_loss(m(&[])).unwrap(), ratio(1, 1));
    }

    #[test]
    fn marginal_difference_f_examples() {
        assert_eq!(
            fam(3, &[2])
                .marginal_difference_f(m(&[]), m(&[1]), 2)
                .unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            fam(3, &[0])
                .marginal_difference_f(m(&[0]), m(&[0, 1]), 2)
                .unwrap(),
            ratio(-1, 3)
        );
        let f = fam(4, &[1, 2]);
        for x in [0, 1, 3] {
            assert_eq!(
                f.marginal_difference_f(m(&[2]), m(&[2]), x).unwrap(),
                ratio(0, 1)
            );
        }
    }

    #[test]
    fn marginal_difference_g_examples() {
        assert_eq!(
            fam(2, &[0])
                .marginal_difference_g(m(&[]), m(&[1]), 0)
                .unwrap(),
            ratio(-1, 2)
        );
        assert_eq!(
            fam(3, &[0])
                .marginal_difference_g(m(&[]), m(&[1]), 2)
                .unwrap(),
            ratio(-1, 3)
        );
        assert_eq!(
            fam(3, &[0])
                .marginal_difference_g(m(&[1]), m(&[1]), 2)
                .unwrap(),
            ratio(0, 1)
        );
    }

    #[test]
    fn marginal_difference_preconditions() {
        let f = fam(3, &[0]);
        assert!(matches!(
            f.marginal_difference_f(m(&[1]), m(&[2]), 0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            f.marginal_difference_f(m(&[]), m(&[2]), 2),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            f.marginal_difference_g(m(&[0, 1]), m(&[0]), 2),
            Err(Error::Precondition(_))
        ));
        assert!(f.marginal_difference_g(m(&[]), m(&[]), 3).is_err());
    }

    #[test]
    fn chain_examples() {
        assert!(fam(3, &[0, 1])
            .chain_inequality_check(m(&[]), m(&[2]))
            .unwrap());
        for n in 0..4 {
            for g in GroundSet::new(n).unwrap().subsets() {
                let f = JaccardFamily::new(GroundSet::new(n).unwrap(), g).unwrap();
                assert!(f.chain_inequality_check(m(&[]), m(&[])).unwrap());
            }
        }
        assert!(fam(3, &[0])
            .chain_inequality_check(m(&[1]), m(&[2]))
            .is_err());
    }

    #[test]
    fn case_ii_closed_form_values() {
        assert_eq!(case_ii_closed_form(1), ratio(-1, 3));
        assert_eq!(case_ii_closed_form(2), ratio(-1, 12));
        for k in 1..200 {
            assert!(case_ii_closed_form(k) < ratio(0, 1));
        }
    }
}
