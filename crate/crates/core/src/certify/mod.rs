//! Exhaustive certification of submodularity and supermodularity.
//!
//! Two independent certifiers are provided:
//!
//! * [`certify_definitional`] checks `f(A+x) − f(A) ≥ f(B+x) − f(B)` for every
//!   `A ⊆ B ⊆ V` and `x ∉ B`, about `n·3^(n−1)` checks;
//! * [`certify_local`] checks `f(A+x) + f(A+y) ≥ f(A+x+y) + f(A)` for every
//!   `A` and pair `x, y ∉ A`, about `n²·2^(n−3)` checks.
//!
//! Both count violations in each direction using strict inequality, exactly
//! for exact functions and with tolerance [`DEFAULT_TOLERANCE`] otherwise,
//! and keep the largest-magnitude witness per direction. Work is split into
//! fixed-size mask ranges that are merged in order, so reports do not depend
//! on the number of worker threads.

mod constructors;
mod enumerate;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{capacity, Result};
use crate::mask::SubsetMask;
use crate::setfn::SetFunction;
use crate::value::{Value, DEFAULT_TOLERANCE};

pub use constructors::{paper_counterexample_case_i, paper_counterexample_case_ii};
use enumerate::{Compiled, Entry, Tally, Triple};

/// Largest ground set accepted by [`certify_definitional`].
pub const MAX_DEFINITIONAL: usize = 16;
/// Largest ground set accepted by [`certify_local`] and [`find_counterexample`].
pub const MAX_LOCAL: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Submodular,
    Supermodular,
    Modular,
    Neither,
}

impl Verdict {
    fn from_counts(sub: u64, sup: u64) -> Self {
        match (sub, sup) {
            (0, 0) => Verdict::Modular,
            (0, _) => Verdict::Submodular,
            (_, 0) => Verdict::Supermodular,
            _ => Verdict::Neither,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Submodular => "submodular",
            Verdict::Supermodular => "supermodular",
            Verdict::Modular => "modular",
            Verdict::Neither => "neither",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Submodularity,
    Supermodularity,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Submodularity => "submodularity",
            Property::Supermodularity => "supermodularity",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Definitional,
    Local,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float { tau: f64 },
}

/// A concrete `(A, B, x)` whose marginal gains violate one of the inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub x: usize,
    pub gain_at_a: Value,
    pub gain_at_b: Value,
    /// `gain_at_a − gain_at_b`: negative for a submodularity violation,
    /// positive for a supermodularity violation.
    pub gap: Value,
    pub violated: Property,
}

impl Counterexample {
    /// Builds a witness by evaluating `f` directly.
    pub fn evaluate(f: &SetFunction, a: SubsetMask, b: SubsetMask, x: usize) -> Result<Self> {
        let gain_at_a = f.marginal_gain(a, x)?;
        let gain_at_b = f.marginal_gain(b, x)?;
        if !a.is_subset_of(b) {
            return Err(crate::Error::Precondition(format!(
                "{a} is not a subset of {b}"
            )));
        }
        let gap = &gain_at_a - &gain_at_b;
        let violated = match gap.signum(DEFAULT_TOLERANCE) {
            Ordering::Less => Property::Submodularity,
            Ordering::Greater => Property::Supermodularity,
            Ordering::Equal => {
                return Err(crate::Error::Precondition(format!(
                    "({a}, {b}, {x}) violates neither inequality"
                )))
            }
        };
        Ok(Self {
            a,
            b,
            x,
            gain_at_a,
            gain_at_b,
            gap,
            violated,
        })
    }

    /// Re-evaluates `f` and checks the stored gains, gap and sign: exactly for
    /// exact values, within `tau` otherwise.
    pub fn verify(&self, f: &SetFunction, tau: f64) -> bool {
        let structural = f.ground().contains(self.b)
            && self.a.is_subset_of(self.b)
            && self.x < f.ground().len()
            && !self.b.contains(self.x);
        if !structural {
            return false;
        }
        let (Ok(ga), Ok(gb)) = (
            f.marginal_gain(self.a, self.x),
            f.marginal_gain(self.b, self.x),
        ) else {
            return false;
        };
        let gap = &ga - &gb;
        let same = |x: &Value, y: &Value| match (x, y) {
            (Value::Exact(p), Value::Exact(q)) => p == q,
            _ => x.compare(y, tau) == Ordering::Equal,
        };
        let sign_ok = match self.violated {
            Property::Submodularity => gap.signum(tau) == Ordering::Less,
            Property::Supermodularity => gap.signum(tau) == Ordering::Greater,
        };
        same(&ga, &self.gain_at_a) && same(&gb, &self.gain_at_b) && same(&gap, &self.gap) && sign_ok
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub verdict: Verdict,
    pub n: usize,
    pub checks_performed: u64,
    pub submodularity_violations: u64,
    pub supermodularity_violations: u64,
    pub worst_submodularity_witness: Option<Counterexample>,
    pub worst_supermodularity_witness: Option<Counterexample>,
    pub method: Method,
    pub arithmetic: Arithmetic,
}

impl CertificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn witness(table: &Compiled, triple: Triple, violated: Property) -> Counterexample {
    let bit = 1u64 << triple.x;
    let gain_at_a = table.difference(triple.a | bit, triple.a);
    let gain_at_b = table.difference(triple.b | bit, triple.b);
    Counterexample {
        a: SubsetMask::from_bits(triple.a),
        b: SubsetMask::from_bits(triple.b),
        x: triple.x as usize,
        gap: &gain_at_a - &gain_at_b,
        gain_at_a,
        gain_at_b,
        violated,
    }
}

/// Counts and witness positions of one enumeration pass.
struct Summary {
    checks: u64,
    sub: u64,
    sup: u64,
    worst_sub: Option<Triple>,
    worst_sup: Option<Triple>,
}

impl<G> From<Tally<G>> for Summary {
    fn from(t: Tally<G>) -> Self {
        Summary {
            checks: t.checks,
            sub: t.sub,
            sup: t.sup,
            worst_sub: t.worst_sub.map(|(w, _)| w),
            worst_sup: t.worst_sup.map(|(w, _)| w),
        }
    }
}

fn pass<T: Entry>(values: &[T], n: usize, tau: f64, method: Method) -> Summary {
    match method {
        Method::Local => enumerate::local(values, n, tau).into(),
        Method::Definitional => enumerate::definitional(values, n, tau).into(),
    }
}

fn run(f: &SetFunction, method: Method) -> CertificationReport {
    let n = f.ground().len();
    let table = Compiled::build(f);
    let summary = match &table {
        Compiled::Scaled { values, .. } => pass(values, n, 0.0, method),
        Compiled::Exact(values) => pass(values, n, 0.0, method),
        Compiled::Float(values) => pass(values, n, DEFAULT_TOLERANCE, method),
    };
    let arithmetic = if table.is_exact() {
        Arithmetic::Exact
    } else {
        Arithmetic::Float {
            tau: DEFAULT_TOLERANCE,
        }
    };
    CertificationReport {
        verdict: Verdict::from_counts(summary.sub, summary.sup),
        n,
        checks_performed: summary.checks,
        submodularity_violations: summary.sub,
        supermodularity_violations: summary.sup,
        worst_submodularity_witness: summary
            .worst_sub
            .map(|t| witness(&table, t, Property::Submodularity)),
        worst_supermodularity_witness: summary
            .worst_sup
            .map(|t| witness(&table, t, Property::Supermodularity)),
        method,
        arithmetic,
    }
}

/// Certifies `f` against the defining inequality over all `(A ⊆ B, x ∉ B)`.
pub fn certify_definitional(f: &SetFunction) -> Result<CertificationReport> {
    capacity("certify_definitional", MAX_DEFINITIONAL, f.ground().len())?;
    Ok(run(f, Method::Definitional))
}

/// Certifies `f` with the pairwise local condition.
pub fn certify_local(f: &SetFunction) -> Result<CertificationReport> {
    capacity("certify_local", MAX_LOCAL, f.ground().len())?;
    Ok(run(f, Method::Local))
}

/// The first violation of `property` in ascending `(A, B, x)` order, where
/// `B = A ∪ {y}` ranges over single-element extensions of `A`.
pub fn find_counterexample(f: &SetFunction, property: Property) -> Result<Option<Counterexample>> {
    let n = f.ground().len();
    capacity("find_counterexample", MAX_LOCAL, n)?;
    let table = Compiled::build(f);
    let want = match property {
        Property::Submodularity => Ordering::Less,
        Property::Supermodularity => Ordering::Greater,
    };
    let hit = match &table {
        Compiled::Scaled { values, .. } => enumerate::first_violation(values, n, 0.0, want),
        Compiled::Exact(values) => enumerate::first_violation(values, n, 0.0, want),
        Compiled::Float(values) => enumerate::first_violation(values, n, DEFAULT_TOLERANCE, want),
    };
    Ok(hit.map(|t| witness(&table, t, property)))
}

#[cfg(test)]
mod tests;
