//! Checking inputs against a shape inferred from samples. When the input's
//! shape is preferred over the samples' shape, reading it cannot get stuck;
//! otherwise the first violation is reported with its path, and reading the
//! input may get stuck.
//!
//! `cargo run --example validate`

use typeprov::data::DataValue;
use typeprov::foo::DEFAULT_FUEL;
use typeprov::harness::safety::{check_relative_safety, walk_provided};
use typeprov::inference::{infer_many, infer_one, InferenceConfig};
use typeprov::ingest::{parse_json, IngestConfig};
use typeprov::pipeline::provide_normalized;
use typeprov::shapes::explain_not_preferred;

fn main() {
    let cfg = InferenceConfig::default();
    let DataValue::List(samples) =
        parse_json(include_str!("../fixtures/people.json"), &IngestConfig::default()).unwrap()
    else {
        unreachable!("the fixture is an array")
    };
    let sigma = infer_many(&samples, &cfg);
    println!("samples shape: {sigma}\n");

    let person = |name: DataValue, age: Option<DataValue>| {
        let mut fields = vec![("name", name)];
        fields.extend(age.map(|a| ("age", a)));
        DataValue::object(fields)
    };
    let inputs = [
        ("age dropped", person(DataValue::str("Eva"), None)),
        ("int age", person(DataValue::str("Eva"), Some(DataValue::Int(30)))),
        ("numeric name", person(DataValue::Int(1), None)),
        ("text age", person(DataValue::str("Eva"), Some(DataValue::str("old")))),
    ];
    for (label, input) in &inputs {
        match explain_not_preferred(&infer_one(input, &cfg), &sigma) {
            None => println!("{label:<13} subshape; {}", check_relative_safety(&samples, input, &cfg, DEFAULT_FUEL)),
            Some(v) => {
                let walk = walk_provided(&provide_normalized(&sigma), input, DEFAULT_FUEL);
                println!("{label:<13} not a subshape: {v}\n{:13} reading it anyway: {walk}", "");
            }
        }
    }
}
