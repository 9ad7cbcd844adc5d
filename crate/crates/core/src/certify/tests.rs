use super::*;
use crate::jaccard::{EmptyConvention, JaccardFamily};
use crate::mask::GroundSet;
use crate::value::ratio;
use crate::Error;

fn fam(n: usize, truth: &[usize]) -> JaccardFamily {
    JaccardFamily::new(
        GroundSet::new(n).unwrap(),
        SubsetMask::from_elements(truth.iter().copied()),
    )
    .unwrap()
}

fn m(elems: &[usize]) -> SubsetMask {
    SubsetMask::from_elements(elems.iter().copied())
}

#[test]
fn definitional_examples() {
    let r = certify_definitional(&fam(4, &[0, 1]).misprediction()).unwrap();
    assert_eq!(r.verdict, Verdict::Supermodular);
    assert_eq!(r.supermodularity_violations, 0);
    assert_eq!(r.method, Method::Definitional);
    assert_eq!(r.arithmetic, Arithmetic::Exact);

    let r = certify_definitional(&fam(4, &[0]).direct()).unwrap();
    assert_eq!(r.verdict, Verdict::Neither);
    assert!(r.submodularity_violations > 0 && r.supermodularity_violations > 0);

    let w = SetFunction::modular(vec![Value::integer(1); 3]).unwrap();
    let r = certify_definitional(&w).unwrap();
    assert_eq!(r.verdict, Verdict::Modular);
    assert!(r.worst_submodularity_witness.is_none());
    assert!(r.worst_supermodularity_witness.is_none());
    assert_eq!(r.checks_performed, 3 * 9);
}

#[test]
fn local_examples() {
    let r = certify_local(&fam(10, &[0, 2]).misprediction()).unwrap();
    assert_eq!(r.verdict, Verdict::Supermodular);
    for truth in [&[][..], &[3], &[0, 9], &[1, 2, 5, 7]] {
        let r = certify_local(&fam(10, truth).misprediction().negate()).unwrap();
        assert_eq!(r.verdict, Verdict::Submodular, "G = {truth:?}");
    }
    let cover = SetFunction::coverage(vec![
        0b0011, 0b0110, 0b1100, 0b1001, 0b0101, 0b1111, 0b0001, 0,
    ])
    .unwrap();
    let local = certify_local(&cover).unwrap();
    let definitional = certify_definitional(&cover).unwrap();
    assert_eq!(local.verdict, Verdict::Submodular);
    assert_eq!(definitional.verdict, Verdict::Submodular);
}

#[test]
fn capacity_errors() {
    let big = SetFunction::zero(GroundSet::new(17).unwrap());
    assert!(matches!(
        certify_definitional(&big),
        Err(Error::Capacity {
            cap: 16,
            got: 17,
            ..
        })
    ));
    let huge = SetFunction::zero(GroundSet::new(25).unwrap());
    assert!(matches!(
        certify_local(&huge),
        Err(Error::Capacity { cap: 24, .. })
    ));
    assert!(find_counterexample(&huge, Property::Submodularity).is_err());
}

#[test]
fn witnesses_reverify() {
    for f in [
        fam(5, &[1]).direct(),
        fam(5, &[0, 3]).misprediction(),
        fam(4, &[2]).loss(),
    ] {
        for r in [
            certify_local(&f).unwrap(),
            certify_definitional(&f).unwrap(),
        ] {
            for w in r
                .worst_submodularity_witness
                .iter()
                .chain(&r.worst_supermodularity_witness)
            {
                assert!(w.verify(&f, DEFAULT_TOLERANCE), "{w:?}");
            }
        }
    }
}

#[test]
fn tampered_witness_fails_verification() {
    let f = fam(3, &[0]).direct();
    let mut w = find_counterexample(&f, Property::Submodularity)
        .unwrap()
        .unwrap();
    assert!(w.verify(&f, DEFAULT_TOLERANCE));
    w.gap = Value::ratio(-1, 4);
    assert!(!w.verify(&f, DEFAULT_TOLERANCE));
}

#[test]
fn first_counterexample_examples() {
    let w = find_counterexample(&fam(3, &[0]).direct(), Property::Submodularity)
        .unwrap()
        .unwrap();
    assert_eq!((w.a, w.b, w.x), (m(&[0]), m(&[0, 1]), 2));
    assert_eq!(w.gap, Value::ratio(-1, 3));
    assert_eq!(w.violated, Property::Submodularity);

    assert!(
        find_counterexample(&fam(6, &[0]).misprediction(), Property::Supermodularity)
            .unwrap()
            .is_none()
    );
    let zero = SetFunction::zero(GroundSet::new(5).unwrap());
    assert!(find_counterexample(&zero, Property::Submodularity)
        .unwrap()
        .is_none());
    assert!(find_counterexample(&zero, Property::Supermodularity)
        .unwrap()
        .is_none());
}

#[test]
fn case_i_examples() {
    let w = paper_counterexample_case_i(&fam(3, &[2])).unwrap();
    assert_eq!((w.a, w.b, w.x), (m(&[]), m(&[0]), 2));
    assert_eq!(w.gap, Value::ratio(1, 2));
    assert_eq!(w.violated, Property::Supermodularity);

    let w = paper_counterexample_case_i(&fam(2, &[1])).unwrap();
    assert_eq!((w.a, w.b, w.x), (m(&[]), m(&[0]), 1));
    assert_eq!(w.gap, Value::ratio(1, 2));

    assert!(matches!(
        paper_counterexample_case_i(&fam(2, &[0, 1])),
        Err(Error::Infeasible(_))
    ));
    assert!(matches!(
        paper_counterexample_case_i(&fam(2, &[])),
        Err(Error::Infeasible(_))
    ));
}

#[test]
fn case_ii_examples() {
    let w = paper_counterexample_case_ii(&fam(3, &[0])).unwrap();
    assert_eq!((w.a, w.b, w.x), (m(&[0]), m(&[0, 1]), 2));
    assert_eq!(w.gap, Value::ratio(-1, 3));

    let w = paper_counterexample_case_ii(&fam(4, &[0, 3])).unwrap();
    assert_eq!((w.a, w.b, w.x), (m(&[0]), m(&[0, 1]), 2));
    assert_eq!(w.gap, Value::Exact(ratio(-1, 12)));
    assert_eq!(w.violated, Property::Submodularity);

    for truth in 0..4u64 {
        let f =
            JaccardFamily::new(GroundSet::new(2).unwrap(), SubsetMask::from_bits(truth)).unwrap();
        assert!(matches!(
            paper_counterexample_case_ii(&f),
            Err(Error::Infeasible(_))
        ));
    }
}

#[test]
fn float_tables_use_tolerance() {
    let ground = GroundSet::new(3).unwrap();
    // modular plus noise far below tau
    let f = SetFunction::from_evaluator(ground, |s| {
        Value::Approx(s.len() as f64 + 1e-12 * (s.bits() as f64))
    })
    .unwrap();
    let r = certify_local(&f).unwrap();
    assert_eq!(r.verdict, Verdict::Modular);
    assert_eq!(
        r.arithmetic,
        Arithmetic::Float {
            tau: DEFAULT_TOLERANCE
        }
    );
}

#[test]
fn empty_truth_conventions() {
    for n in 2..=6 {
        let one = fam(n, &[]);
        let zero = one.with_empty_convention(EmptyConvention::Zero);
        assert_eq!(
            certify_local(&one.misprediction()).unwrap().verdict,
            Verdict::Supermodular
        );
        assert_eq!(
            certify_local(&zero.misprediction()).unwrap().verdict,
            Verdict::Modular
        );
    }
}

#[test]
fn reports_round_trip_through_json() {
    let r = certify_definitional(&fam(4, &[1]).direct()).unwrap();
    let text = r.to_json();
    let back: CertificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_json(), text);
}
