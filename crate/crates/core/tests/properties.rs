use proptest::prelude::*;

use typeprov::data::{data_equal, read_canonical, DataValue};
use typeprov::foo::DEFAULT_FUEL;
use typeprov::harness::safety::walk_provided;
use typeprov::inference::{infer_many, infer_one, InferenceConfig};
use typeprov::pipeline::{provide_normalized, shape_from_json, shape_to_json};
use typeprov::shapes::{csh, explain_not_preferred, is_preferred};

fn leaf() -> impl Strategy<Value = DataValue> {
    prop_oneof![
        Just(DataValue::Null),
        (-3i64..100).prop_map(DataValue::Int),
        (-4i32..40).prop_map(|n| DataValue::Float(f64::from(n) / 4.0)),
        any::<bool>().prop_map(DataValue::Bool),
        prop::sample::select(vec!["", "0", "1", "2.5", "true", "Jan", "2012-05-01"]).prop_map(DataValue::str),
    ]
}

fn value() -> impl Strategy<Value = DataValue> {
    let names = prop::sample::select(vec!["•", "•", "item", "row"]);
    let field = prop::sample::select(vec!["a", "b", "c", "id"]);
    leaf().prop_recursive(3, 24, 4, move |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(DataValue::List),
            (names.clone(), prop::collection::btree_map(field.clone(), inner, 0..4))
                .prop_map(|(name, fields)| { DataValue::record(name, fields.into_iter().collect()) }),
        ]
    })
}

fn configs() -> impl Strategy<Value = InferenceConfig> {
    prop_oneof![Just(InferenceConfig::default()), Just(InferenceConfig::core())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn every_sample_is_preferred_over_the_inferred_shape(ds in prop::collection::vec(value(), 1..4), cfg in configs()) {
        let sigma = infer_many(&ds, &cfg);
        for d in &ds {
            let s = infer_one(d, &cfg);
            prop_assert!(is_preferred(&s, &sigma), "{s} ⋢ {sigma}");
        }
    }

    #[test]
    fn csh_is_an_upper_bound(a in value(), b in value(), cfg in configs()) {
        let (sa, sb) = (infer_one(&a, &cfg), infer_one(&b, &cfg));
        let j = csh(&sa, &sb);
        prop_assert!(is_preferred(&sa, &j) && is_preferred(&sb, &j), "csh({sa}, {sb}) = {j}");
        prop_assert_eq!(csh(&sa, &sa), sa.clone());
    }

    #[test]
    fn reading_a_sample_never_gets_stuck(ds in prop::collection::vec(value(), 1..4), cfg in configs()) {
        let p = provide_normalized(&infer_many(&ds, &cfg));
        for d in &ds {
            let v = walk_provided(&p, d, DEFAULT_FUEL);
            prop_assert!(v.is_safe(), "{v} on {d}");
        }
    }

    #[test]
    fn explanations_agree_with_the_relation(a in value(), b in value(), cfg in configs()) {
        let (sa, sb) = (infer_one(&a, &cfg), infer_one(&b, &cfg));
        prop_assert_eq!(explain_not_preferred(&sa, &sb).is_none(), is_preferred(&sa, &sb));
    }

    #[test]
    fn canonical_text_round_trips(d in value()) {
        let back = read_canonical(&d.to_string()).unwrap();
        prop_assert!(data_equal(&back, &d), "{d} read back as {back}");
    }

    #[test]
    fn shape_files_round_trip(d in value(), cfg in configs()) {
        let s = infer_one(&d, &cfg);
        prop_assert_eq!(shape_from_json(&shape_to_json(&s)).unwrap(), s);
    }
}
