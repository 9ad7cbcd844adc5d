//! Lovász extension of a set function and empirical convexity probes.
//!
//! For a point `m ∈ [0,1]^n`, sort the coordinates in descending order (ties
//! by ascending element index) and walk the chain `∅ = S₀ ⊂ S₁ ⊂ … ⊂ Sₙ`.
//! The extension is `f(∅) + Σᵢ m_{πᵢ} (f(Sᵢ) − f(Sᵢ₋₁))` and the increments
//! form a subgradient. The extension is convex exactly when `f` is
//! submodular.
//!
//! Increments are computed in the function's own arithmetic (exact for
//! rational-backed functions) and converted to `f64` only for the final
//! weighted sum.

use num_traits::FromPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, Error, Result};
use crate::mask::{GroundSet, SubsetMask};
use crate::setfn::SetFunction;
use crate::value::{Rational, Value};

pub const MAX_LOVASZ: usize = 24;
pub const MAX_VERTEX_CHECK: usize = 12;

/// Slack allowed in the midpoint convexity probe.
pub const CONVEXITY_SLACK: f64 = 1e-12;
/// Slack allowed in the subgradient inequality probe.
pub const SUBGRADIENT_SLACK: f64 = 1e-9;
/// Tolerance for vertex agreement of float-backed functions.
pub const VERTEX_TOLERANCE: f64 = 1e-12;

/// A point of the unit cube `[0,1]^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelaxedPoint {
    coords: Vec<f64>,
}

impl RelaxedPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some((i, c)) = coords
            .iter()
            .enumerate()
            .find(|(_, c)| !(0.0..=1.0).contains(*c))
        {
            return Err(Error::Invalid(format!(
                "coordinate {i} = {c} lies outside [0, 1]"
            )));
        }
        Ok(Self { coords })
    }

    /// The 0/1 indicator vector of `mask`.
    pub fn indicator(ground: GroundSet, mask: SubsetMask) -> Self {
        let coords = (0..ground.len())
            .map(|i| if mask.contains(i) { 1.0 } else { 0.0 })
            .collect();
        Self { coords }
    }

    fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        Self {
            coords: (0..n).map(|_| rng.gen::<f64>()).collect(),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    fn midpoint(&self, other: &Self) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(u, v)| (u + v) / 2.0)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LovaszResult {
    pub value: f64,
    /// Elements in the order they join the chain.
    pub permutation: Vec<usize>,
    /// Indexed by element: the increment recorded when that element joined.
    pub subgradient: Vec<f64>,
}

/// Elements sorted by descending coordinate, ties by ascending index.
pub fn chain_order(point: &RelaxedPoint) -> Vec<usize> {
    let c = &point.coords;
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&i, &j| c[j].total_cmp(&c[i]).then(i.cmp(&j)));
    order
}

fn check(f: &SetFunction, point: &RelaxedPoint) -> Result<()> {
    capacity("lovasz_extension", MAX_LOVASZ, f.ground().len())?;
    if point.len() != f.ground().len() {
        return Err(Error::Invalid(format!(
            "point has {} coordinates, ground set has {} elements",
            point.len(),
            f.ground().len()
        )));
    }
    Ok(())
}

/// Chain order, the exact increments along it, and `f(∅)`.
pub fn chain_increments(
    f: &SetFunction,
    point: &RelaxedPoint,
) -> Result<(Vec<usize>, Vec<Value>, Value)> {
    check(f, point)?;
    let order = chain_order(point);
    let base = f.eval(SubsetMask::EMPTY);
    let mut set = SubsetMask::EMPTY;
    let mut prev = base.clone();
    let increments = order
        .iter()
        .map(|&i| {
            set = set.with(i);
            let cur = f.eval(set);
            let inc = &cur - &prev;
            prev = cur;
            inc
        })
        .collect();
    Ok((order, increments, base))
}

pub fn lovasz_extension(f: &SetFunction, point: &RelaxedPoint) -> Result<LovaszResult> {
    let (order, increments, base) = chain_increments(f, point)?;
    let mut subgradient = vec![0.0; order.len()];
    let mut value = 0.0;
    for (&i, inc) in order.iter().zip(&increments) {
        let s = inc.to_f64();
        subgradient[i] = s;
        value += point.coords[i] * s;
    }
    Ok(LovaszResult {
        value: value + base.to_f64(),
        permutation: order,
        subgradient,
    })
}

/// The extension evaluated in exact arithmetic (coordinates are dyadic
/// rationals). `None` for float-backed functions.
pub fn lovasz_value_exact(f: &SetFunction, point: &RelaxedPoint) -> Result<Option<Rational>> {
    if !f.is_exact() {
        check(f, point)?;
        return Ok(None);
    }
    let (order, increments, base) = chain_increments(f, point)?;
    let mut total = base.as_exact().cloned().expect("exact function");
    for (&i, inc) in order.iter().zip(&increments) {
        let weight = Rational::from_f64(point.coords[i]).expect("finite coordinate");
        total += weight * inc.as_exact().expect("exact increment");
    }
    Ok(Some(total))
}

/// True iff the extension reproduces `f` at every vertex of the cube: exactly
/// for exact functions, within [`VERTEX_TOLERANCE`] otherwise.
pub fn vertex_agreement_check(f: &SetFunction) -> Result<bool> {
    let ground = f.ground();
    capacity("vertex_agreement_check", MAX_VERTEX_CHECK, ground.len())?;
    let subsets: Vec<SubsetMask> = ground.subsets().collect();
    subsets
        .par_iter()
        .map(|&s| {
            let point = RelaxedPoint::indicator(ground, s);
            let expected = f.eval(s);
            Ok(match lovasz_value_exact(f, &point)? {
                Some(exact) => Some(&exact) == expected.as_exact(),
                None => {
                    (lovasz_extension(f, &point)?.value - expected.to_f64()).abs()
                        <= VERTEX_TOLERANCE
                }
            })
        })
        .collect::<Result<Vec<bool>>>()
        .map(|v| v.into_iter().all(|ok| ok))
}

/// Outcome of [`convexity_probe`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub seed: u64,
    pub trials: u64,
    pub violations: u64,
    /// Smallest observed `(LE(u) + LE(v))/2 − LE((u+v)/2)`.
    pub worst_gap: f64,
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Samples `trials` pairs `(u, v)` and tests midpoint convexity
/// `LE((u+v)/2) ≤ (LE(u) + LE(v))/2 + 1e−12`. Trial `t` draws from stream `t`
/// of a ChaCha8 generator seeded with `seed`, so results do not depend on
/// scheduling.
pub fn convexity_probe(f: &SetFunction, trials: u64, seed: u64) -> Result<ConvexityReport> {
    let n = f.ground().len();
    capacity("convexity_probe", MAX_LOVASZ, n)?;
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let slacks = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let u = RelaxedPoint::random(n, &mut rng);
            let v = RelaxedPoint::random(n, &mut rng);
            let lu = lovasz_extension(f, &u)?.value;
            let lv = lovasz_extension(f, &v)?.value;
            let lm = lovasz_extension(f, &u.midpoint(&v))?.value;
            Ok((lu + lv) / 2.0 - lm)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ConvexityReport {
        seed,
        trials,
        violations: slacks.iter().filter(|&&s| s < -CONVEXITY_SLACK).count() as u64,
        worst_gap: slacks.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

/// Outcome of [`subgradient_probe`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgradientReport {
    pub seed: u64,
    pub probes: u64,
    pub failures: u64,
    /// Smallest observed `LE(v) − LE(m) − s·(v − m)`.
    pub worst_slack: f64,
}

/// Tests `LE(v) ≥ LE(m) + s·(v − m) − 1e−9` at `probes` random points `v`,
/// where `s` is the subgradient returned at `m`.
pub fn subgradient_probe(
    f: &SetFunction,
    m: &RelaxedPoint,
    probes: u64,
    seed: u64,
) -> Result<SubgradientReport> {
    if probes == 0 {
        return Err(Error::Precondition("probes must be at least 1".into()));
    }
    let at_m = lovasz_extension(f, m)?;
    let n = m.len();
    let slacks = (0..probes)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let v = RelaxedPoint::random(n, &mut rng);
            let lv = lovasz_extension(f, &v)?.value;
            let linear: f64 = at_m
                .subgradient
                .iter()
                .zip(v.coords.iter().zip(&m.coords))
                .map(|(s, (vi, mi))| s * (vi - mi))
                .sum();
            Ok(lv - at_m.value - linear)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SubgradientReport {
        seed,
        probes,
        failures: slacks.iter().filter(|&&s| s < -SUBGRADIENT_SLACK).count() as u64,
        worst_slack: slacks.iter().copied().fold(f64::INFINITY, f64::min),
    })
}

/// True iff every probe of [`subgradient_probe`] passes.
pub fn subgradient_validity_check(
    f: &SetFunction,
    m: &RelaxedPoint,
    probes: u64,
    seed: u64,
) -> Result<bool> {
    Ok(subgradient_probe(f, m, probes, seed)?.failures == 0)
}
