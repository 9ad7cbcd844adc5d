//! The Jaccard index over predictions and over mispredictions.

use jaccard_submod::{GroundSet, JaccardFamily, SubsetMask};

fn main() -> jaccard_submod::Result<()> {
    let ground = GroundSet::new(4)?;
    let truth = SubsetMask::from_elements([0, 1]);
    let fam = JaccardFamily::new(ground, truth)?;

    println!("G = {truth:?}");
    println!("{:>10} {:>8} {:>8} {:>8}", "set", "f(A)", "g(A)", "1-g(A)");
    for s in ground.subsets() {
        println!(
            "{:>10} {:>8} {:>8} {:>8}",
            format!("{s:?}"),
            fam.jaccard_index(s)?.to_string(),
            fam.misprediction_jaccard(s)?.to_string(),
            fam.jaccard_loss(s)?.to_string(),
        );
    }

    // A prediction A and its misprediction set M = A △ G score the same
    let a = SubsetMask::from_elements([1, 2]);
    let m = a ^ truth;
    assert_eq!(fam.jaccard_index(a)?, fam.misprediction_jaccard(m)?);
    println!("f({a:?}) = g({m:?}) = {}", fam.jaccard_index(a)?);
    Ok(())
}
