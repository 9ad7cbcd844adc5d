//! Explicit witnesses showing that the prediction-domain Jaccard index `f`
//! is neither supermodular nor submodular.

use crate::error::{Error, Result};
use crate::jaccard::{case_ii_closed_form, JaccardFamily};
use crate::mask::SubsetMask;
use crate::value::{Value, DEFAULT_TOLERANCE};

use super::{Counterexample, Property};

fn checked(
    fam: &JaccardFamily,
    a: SubsetMask,
    b: SubsetMask,
    x: usize,
    closed: Value,
    case: &'static str,
) -> Result<Counterexample> {
    let f = fam.direct();
    let witness = Counterexample::evaluate(&f, a, b, x)?;
    if witness.gap != closed {
        return Err(Error::ClosedFormMismatch {
            case,
            direct: witness.gap.to_string(),
            closed: closed.to_string(),
        });
    }
    debug_assert!(witness.verify(&f, DEFAULT_TOLERANCE));
    Ok(witness)
}

/// Supermodularity violation of `f`: `A = ∅`, `B = {b}` for the smallest
/// `b ∉ G`, and `x` the smallest element of `G`. The gap is
/// `1/|G ∪ A| − 1/|G ∪ B| = 1/|G| − 1/(|G| + 1) > 0`.
///
/// Needs `G ≠ ∅` and `G ≠ V`.
pub fn paper_counterexample_case_i(fam: &JaccardFamily) -> Result<Counterexample> {
    let g = fam.truth();
    let outside = fam.ground().full() - g;
    let (Some(x), Some(b)) = (g.first(), outside.first()) else {
        return Err(Error::Infeasible(format!(
            "case i needs |G| >= 1 and |V \\ G| >= 1, got |G| = {} and |V \\ G| = {}",
            g.len(),
            outside.len()
        )));
    };
    let a = SubsetMask::EMPTY;
    let b = SubsetMask::singleton(b);
    let closed = fam.case_i_closed_form(a, b).expect("G is non-empty");
    let w = checked(fam, a, b, x, Value::Exact(closed), "case i")?;
    debug_assert_eq!(w.violated, Property::Supermodularity);
    Ok(w)
}

/// Submodularity violation of `f`: `A = {g}` for the smallest `g ∈ G`,
/// `B = A ∪ {b}` and `x`, where `b < x` are the two smallest elements outside
/// `G`. With `k = |G ∪ A| = |G|` the gap is
/// `1/(k+1) − 1/k − 1/(k+2) + 1/(k+1) < 0`.
///
/// Needs `G ≠ ∅` and `|V \ G| ≥ 2`.
pub fn paper_counterexample_case_ii(fam: &JaccardFamily) -> Result<Counterexample> {
    let g = fam.truth();
    let mut outside = (fam.ground().full() - g).elements();
    let (Some(first), Some(b), Some(x)) = (g.first(), outside.next(), outside.next()) else {
        return Err(Error::Infeasible(format!(
            "case ii needs |G| >= 1 and |V \\ G| >= 2, got |G| = {} and |V \\ G| = {}",
            g.len(),
            (fam.ground().full() - g).len()
        )));
    };
    let a = SubsetMask::singleton(first);
    let b = a.with(b);
    let closed = case_ii_closed_form((g | a).len());
    let w = checked(fam, a, b, x, Value::Exact(closed), "case ii")?;
    debug_assert_eq!(w.violated, Property::Submodularity);
    Ok(w)
}
