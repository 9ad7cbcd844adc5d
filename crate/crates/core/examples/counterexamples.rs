//! Explicit witnesses that the prediction-domain Jaccard index is neither
//! submodular nor supermodular, and a search that finds none for `g`.

use jaccard_submod::{
    find_counterexample, paper_counterexample_case_i, paper_counterexample_case_ii, Error,
    GroundSet, JaccardFamily, Property, SubsetMask,
};

fn main() -> jaccard_submod::Result<()> {
    let fam = JaccardFamily::new(GroundSet::new(5)?, SubsetMask::from_elements([0, 3]))?;
    let f = fam.direct();

    for w in [
        paper_counterexample_case_i(&fam)?,
        paper_counterexample_case_ii(&fam)?,
    ] {
        println!(
            "A = {:?}, B = {:?}, x = {}: gains {} and {}, gap {} ({} violated)",
            w.a, w.b, w.x, w.gain_at_a, w.gain_at_b, w.gap, w.violated
        );
        assert!(w.verify(&f, 0.0));
    }

    let first = find_counterexample(&f, Property::Submodularity)?.expect("f is not submodular");
    println!(
        "first submodularity violation by search: A = {:?}, B = {:?}, x = {}",
        first.a, first.b, first.x
    );

    let none = find_counterexample(&fam.misprediction(), Property::Supermodularity)?;
    println!("supermodularity violation of g: {none:?}");

    // With G = V there is nothing outside G to add
    let full = JaccardFamily::new(GroundSet::new(3)?, SubsetMask::from_bits(0b111))?;
    match paper_counterexample_case_i(&full) {
        Err(Error::Infeasible(why)) => println!("G = V: {why}"),
        other => panic!("unexpected {other:?}"),
    }
    Ok(())
}
