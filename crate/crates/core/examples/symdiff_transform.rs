//! Moving between the prediction and misprediction domains with `S ↦ S △ T`.

use jaccard_submod::{certify_local, GroundSet, JaccardFamily, SubsetMask};

fn main() -> jaccard_submod::Result<()> {
    let truth = SubsetMask::from_elements([1, 4]);
    let fam = JaccardFamily::new(GroundSet::new(6)?, truth)?;

    let f = fam.direct();
    let g = f.symdiff_transform(truth)?;
    assert_eq!(g.tabulate()?, fam.misprediction().tabulate()?);
    assert_eq!(g.symdiff_transform(truth)?.tabulate()?, f.tabulate()?);

    println!("f:          {}", certify_local(&f)?.verdict);
    println!("f(· △ G):   {}", certify_local(&g)?.verdict);
    println!("-f(· △ G):  {}", certify_local(&g.negate())?.verdict);

    // Transforming by anything other than G generally loses the structure
    let other = f.symdiff_transform(SubsetMask::from_elements([0]))?;
    println!("f(· △ {{0}}): {}", certify_local(&other)?.verdict);
    Ok(())
}
