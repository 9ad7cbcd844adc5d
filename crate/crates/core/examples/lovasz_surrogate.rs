//! The Lovász extension of the Jaccard loss as a convex surrogate.

use jaccard_submod::lovasz::{convexity_probe, lovasz_value_exact, subgradient_probe};
use jaccard_submod::{
    lovasz_extension, GroundSet, JaccardFamily, RelaxedPoint, SetFunction, SubsetMask, Value,
};

fn main() -> jaccard_submod::Result<()> {
    let fam = JaccardFamily::new(GroundSet::new(6)?, SubsetMask::from_elements([0, 1, 2]))?;
    let loss = fam.loss();

    // Soft misprediction scores, e.g. per-pixel error probabilities; dyadic so
    // the exact value below is a short fraction
    let errors = RelaxedPoint::new(vec![0.125, 0.75, 0.0, 0.375, 0.875, 0.25])?;
    let r = lovasz_extension(&loss, &errors)?;
    println!("surrogate loss {:.6}", r.value);
    println!(
        "exact          {}",
        lovasz_value_exact(&loss, &errors)?.unwrap()
    );
    println!("chain order    {:?}", r.permutation);
    println!("subgradient    {:?}", r.subgradient);

    let c = convexity_probe(&loss, 10_000, 1)?;
    let s = subgradient_probe(&loss, &errors, 1_000, 1)?;
    println!(
        "convexity: {} violations in {} trials, worst gap {:.2e}",
        c.violations, c.trials, c.worst_gap
    );
    println!(
        "subgradient: {} failures in {} probes",
        s.failures, s.probes
    );

    // The same construction on 1 - f is not convex
    let direct = fam.direct();
    let complement =
        SetFunction::from_evaluator(fam.ground(), |m| &Value::one() - &direct.eval(m))?;
    let c = convexity_probe(&complement, 10_000, 1)?;
    println!(
        "1 - f: {} convexity violations, worst gap {:.4}",
        c.violations, c.worst_gap
    );
    Ok(())
}
