//! The set-function abstraction: `P(V) -> values` over a finite ground set.

use std::fmt;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Result};
use crate::jaccard::{JaccardFamily, JaccardForm};
use crate::mask::{GroundSet, SubsetMask};
use crate::value::{Rational, Value};

/// Largest ground set that may be fully tabulated.
pub const MAX_TABULATE: usize = 24;

/// How a handle computes its values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    Tabulated,
    JaccardDirect,
    JaccardMisprediction,
    JaccardLoss,
    Modular,
    Coverage,
    Negated,
    Transformed,
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FunctionKind::Tabulated => "tabulated",
            FunctionKind::JaccardDirect => "jaccard-direct",
            FunctionKind::JaccardMisprediction => "jaccard-misprediction",
            FunctionKind::JaccardLoss => "jaccard-loss",
            FunctionKind::Modular => "modular",
            FunctionKind::Coverage => "coverage",
            FunctionKind::Negated => "negated",
            FunctionKind::Transformed => "transformed",
        };
        f.write_str(s)
    }
}

/// A shareable, immutable handle to a set function.
///
/// Handles are cheap to clone and `Send + Sync`; evaluation is pure.
#[derive(Clone)]
pub struct SetFunction {
    ground: GroundSet,
    exact: bool,
    inner: Arc<Inner>,
}

enum Inner {
    Table {
        values: Vec<Value>,
        small: Option<Vec<(i64, i64)>>,
    },
    Jaccard {
        family: JaccardFamily,
        form: JaccardForm,
    },
    Modular {
        weights: Vec<Value>,
    },
    Coverage {
        covers: Vec<u64>,
    },
    Negated(SetFunction),
    Transformed {
        inner: SetFunction,
        by: SubsetMask,
    },
}

fn small_parts(r: &Rational) -> Option<(i64, i64)> {
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}

impl SetFunction {
    fn from_inner(ground: GroundSet, exact: bool, inner: Inner) -> Self {
        Self {
            ground,
            exact,
            inner: Arc::new(inner),
        }
    }

    /// A function given by its full value table, indexed by mask.
    pub fn tabulated(ground: GroundSet, values: Vec<Value>) -> Result<Self> {
        capacity("tabulated function", MAX_TABULATE, ground.len())?;
        if values.len() as u64 != ground.subset_count() {
            return Err(Error::Invalid(format!(
                "table has {} entries, expected 2^{} = {}",
                values.len(),
                ground.len(),
                ground.subset_count()
            )));
        }
        let exact = values.iter().all(Value::is_exact);
        let small = if exact {
            values
                .iter()
                .map(|v| v.as_exact().and_then(small_parts))
                .collect()
        } else {
            None
        };
        Ok(Self::from_inner(
            ground,
            exact,
            Inner::Table { values, small },
        ))
    }

    /// Tabulates `eval` over every subset and wraps the result.
    pub fn from_evaluator<F>(ground: GroundSet, eval: F) -> Result<Self>
    where
        F: Fn(SubsetMask) -> Value + Sync,
    {
        capacity("tabulated function", MAX_TABULATE, ground.len())?;
        let values = (0..ground.subset_count())
            .into_par_iter()
            .map(|m| eval(SubsetMask::from_bits(m)))
            .collect();
        Self::tabulated(ground, values)
    }

    /// `A -> sum of weights[i] for i in A`; the ground set size is `weights.len()`.
    pub fn modular(weights: Vec<Value>) -> Result<Self> {
        let ground = GroundSet::new(weights.len())?;
        let exact = weights.iter().all(Value::is_exact);
        Ok(Self::from_inner(ground, exact, Inner::Modular { weights }))
    }

    /// The constant-zero function on `ground`.
    pub fn zero(ground: GroundSet) -> Self {
        Self::from_inner(
            ground,
            true,
            Inner::Modular {
                weights: vec![Value::zero(); ground.len()],
            },
        )
    }

    /// Unweighted coverage: `A -> |union of covers[i] for i in A|`, where
    /// each cover is a subset of a universe of at most 64 items.
    pub fn coverage(covers: Vec<u64>) -> Result<Self> {
        let ground = GroundSet::new(covers.len())?;
        Ok(Self::from_inner(ground, true, Inner::Coverage { covers }))
    }

    pub(crate) fn jaccard(family: JaccardFamily, form: JaccardForm) -> Self {
        Self::from_inner(family.ground(), true, Inner::Jaccard { family, form })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// True when every value is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn kind(&self) -> FunctionKind {
        match &*self.inner {
            Inner::Table { .. } => FunctionKind::Tabulated,
            Inner::Jaccard { form, .. } => match form {
                JaccardForm::Direct => FunctionKind::JaccardDirect,
                JaccardForm::Misprediction => FunctionKind::JaccardMisprediction,
                JaccardForm::Loss => FunctionKind::JaccardLoss,
            },
            Inner::Modular { .. } => FunctionKind::Modular,
            Inner::Coverage { .. } => FunctionKind::Coverage,
            Inner::Negated(_) => FunctionKind::Negated,
            Inner::Transformed { .. } => FunctionKind::Transformed,
        }
    }

    /// Evaluates the function at `mask`.
    ///
    /// # Panics
    ///
    /// If `mask` has bits outside the ground set; see [`SetFunction::try_eval`].
    pub fn eval(&self, mask: SubsetMask) -> Value {
        assert!(
            self.ground.contains(mask),
            "mask {mask} outside ground set of size {}",
            self.ground.len()
        );
        self.eval_in(mask)
    }

    pub fn try_eval(&self, mask: SubsetMask) -> Result<Value> {
        self.ground.check(mask)?;
        Ok(self.eval_in(mask))
    }

    fn eval_in(&self, mask: SubsetMask) -> Value {
        match &*self.inner {
            Inner::Table { values, .. } => values[mask.bits() as usize].clone(),
            Inner::Jaccard { family, form } => Value::Exact(family.evaluate(*form, mask)),
            Inner::Modular { weights } => mask
                .elements()
                .fold(Value::zero(), |acc, i| &acc + &weights[i]),
            Inner::Coverage { covers } => {
                let covered = mask.elements().fold(0u64, |acc, i| acc | covers[i]);
                Value::integer(covered.count_ones() as i64)
            }
            Inner::Negated(f) => -f.eval_in(mask),
            Inner::Transformed { inner, by } => inner.eval_in(mask ^ *by),
        }
    }

    /// Value at `mask` as an unreduced `(numerator, denominator)` pair of
    /// machine integers with positive denominator, when one exists.
    pub(crate) fn small_ratio(&self, mask: SubsetMask) -> Option<(i64, i64)> {
        if !self.exact {
            return None;
        }
        match &*self.inner {
            Inner::Table { small, .. } => small.as_ref().map(|s| s[mask.bits() as usize]),
            Inner::Jaccard { family, form } => {
                let (p, q) = family.parts(*form, mask);
                Some((p as i64, q as i64))
            }
            Inner::Coverage { covers } => {
                let covered = mask.elements().fold(0u64, |acc, i| acc | covers[i]);
                Some((covered.count_ones() as i64, 1))
            }
            Inner::Modular { .. } => match self.eval_in(mask) {
                Value::Exact(r) => small_parts(&r),
                Value::Approx(_) => None,
            },
            Inner::Negated(f) => {
                let (p, q) = f.small_ratio(mask)?;
                Some((p.checked_neg()?, q))
            }
            Inner::Transformed { inner, by } => inner.small_ratio(mask ^ *by),
        }
    }

    /// A common multiple of every denominator [`Self::small_ratio`] can
    /// return, when one is known without scanning the table.
    pub(crate) fn denominator_hint(&self) -> Option<i64> {
        if !self.exact {
            return None;
        }
        match &*self.inner {
            Inner::Jaccard { family, .. } => (1..=family.ground().len() as i64)
                .try_fold(1i64, |l, k| (l / num_integer::gcd(l, k)).checked_mul(k)),
            Inner::Coverage { .. } => Some(1),
            Inner::Negated(f) => f.denominator_hint(),
            Inner::Transformed { inner, .. } => inner.denominator_hint(),
            Inner::Table { .. } | Inner::Modular { .. } => None,
        }
    }

    /// `f(A ∪ {x}) − f(A)`.
    pub fn marginal_gain(&self, a: SubsetMask, x: usize) -> Result<Value> {
        self.ground.check(a)?;
        self.ground.check_element(x)?;
        if a.contains(x) {
            return Err(Error::Precondition(format!(
                "element {x} already belongs to {a}"
            )));
        }
        Ok(&self.eval_in(a.with(x)) - &self.eval_in(a))
    }

    /// The conjugate `M -> f(M △ by)`. Applying it twice with the same mask
    /// gives back the original values.
    pub fn symdiff_transform(&self, by: SubsetMask) -> Result<Self> {
        self.ground.check(by)?;
        Ok(Self::from_inner(
            self.ground,
            self.exact,
            Inner::Transformed {
                inner: self.clone(),
                by,
            },
        ))
    }

    /// `A -> −f(A)`.
    pub fn negate(&self) -> Self {
        Self::from_inner(self.ground, self.exact, Inner::Negated(self.clone()))
    }

    /// The full value table in ascending mask order.
    pub fn tabulate(&self) -> Result<Vec<Value>> {
        capacity("tabulate", MAX_TABULATE, self.ground.len())?;
        Ok((0..self.ground.subset_count())
            .into_par_iter()
            .map(|m| self.eval_in(SubsetMask::from_bits(m)))
            .collect())
    }

    /// True when `f(∅) = 0` exactly (or within zero for float handles).
    pub fn is_normalized(&self) -> bool {
        match self.eval_in(SubsetMask::EMPTY) {
            Value::Exact(r) => r.is_zero(),
            Value::Approx(v) => v == 0.0,
        }
    }
}

impl fmt::Debug for SetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFunction")
            .field("kind", &self.kind())
            .field("n", &self.ground.len())
            .field("exact", &self.exact)
            .finish()
    }
}
