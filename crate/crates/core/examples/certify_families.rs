//! Exhaustive certification of the Jaccard forms and a few reference functions.
//!
//! Pass a ground set size as the first argument (default 8).

use jaccard_submod::{
    certify_definitional, certify_local, GroundSet, JaccardFamily, SetFunction, SubsetMask, Value,
};

fn main() -> jaccard_submod::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("n must be a number"))
        .unwrap_or(8);
    let fam = JaccardFamily::new(GroundSet::new(n)?, SubsetMask::from_elements([0, 2]))?;

    let covers = (0..n as u64).map(|i| 0b111 << i).collect();
    let weights = (0..n as i64).map(|i| Value::ratio(i, 3)).collect();
    let functions = [
        ("f, Jaccard over predictions", fam.direct()),
        ("g, Jaccard over mispredictions", fam.misprediction()),
        ("1 - g, Jaccard loss", fam.loss()),
        ("-g", fam.misprediction().negate()),
        ("coverage", SetFunction::coverage(covers)?),
        ("modular", SetFunction::modular(weights)?),
    ];
    for (name, f) in &functions {
        let r = certify_local(f)?;
        println!(
            "{name:<32} {:<13} checks {:>7}  violations sub {:>6} sup {:>6}",
            r.verdict.to_string(),
            r.checks_performed,
            r.submodularity_violations,
            r.supermodularity_violations
        );
        if n <= 10 {
            assert_eq!(certify_definitional(f)?.verdict, r.verdict);
        }
    }

    let r = certify_local(&fam.direct())?;
    if let Some(w) = &r.worst_supermodularity_witness {
        println!("\nlargest supermodularity violation of f:");
        println!("{}", serde_json::to_string_pretty(w).unwrap());
    }
    Ok(())
}
