//! Certifying an arbitrary function given as a value table.

use jaccard_submod::{certify_definitional, certify_local, GroundSet, SetFunction, Value};

fn main() -> jaccard_submod::Result<()> {
    let ground = GroundSet::new(3)?;
    // sqrt of cardinality, as floats: concave in |A| so submodular
    let concave = SetFunction::from_evaluator(ground, |m| Value::Approx((m.len() as f64).sqrt()))?;
    // |A|^2 with exact integers: convex in |A| so supermodular
    let values = ground
        .subsets()
        .map(|m| Value::integer((m.len() * m.len()) as i64))
        .collect();
    let square = SetFunction::tabulated(ground, values)?;
    // a mix of both
    let mixed: Vec<Value> = ["0", "1", "1", "3/2", "1", "2", "5/2", "2"]
        .iter()
        .map(|v| v.parse())
        .collect::<Result<_, _>>()?;
    let mixed = SetFunction::tabulated(ground, mixed)?;

    for (name, f) in [("sqrt|A|", concave), ("|A|^2", square), ("mixed", mixed)] {
        let d = certify_definitional(&f)?;
        let l = certify_local(&f)?;
        println!(
            "{name:<8} {} (definitional), {} (local)",
            d.verdict, l.verdict
        );
        println!("  {}", d.to_json());
    }
    Ok(())
}
