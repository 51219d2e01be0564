//! Adding a sample changes the provided types; a program written against
//! the old types can be adapted with a few local rewrites and still gives
//! the same answer.
//!
//! `cargo run --example stability`

use typeprov::data::DataValue;
use typeprov::harness::stability::check_stability;
use typeprov::inference::InferenceConfig;

fn main() {
    let cfg = InferenceConfig::core();
    let person = |age: DataValue| DataValue::object(vec![("name", DataValue::str("Jan")), ("age", age)]);
    let samples = [person(DataValue::Int(25))];
    let input = person(DataValue::Int(25));
    let probe = "Age".parse().unwrap();
    let cases = [
        ("age missing", DataValue::object(vec![("name", DataValue::str("Tomas"))])),
        ("float age", person(DataValue::Float(3.5))),
        ("text age", person(DataValue::str("unknown"))),
        ("same shape", person(DataValue::Int(40))),
    ];
    for (label, new_sample) in cases {
        println!("{label:<11} {}", check_stability(&samples, &new_sample, &input, &probe, &cfg));
    }
}
