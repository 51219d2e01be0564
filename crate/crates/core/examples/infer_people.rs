//! Infers a shape from a JSON array of people and prints the provided type.
//!
//! `cargo run --example infer_people`

use typeprov::inference::{infer_one, InferenceConfig};
use typeprov::ingest::{parse_json, IngestConfig};
use typeprov::pipeline::provide_normalized;
use typeprov::provider::render_signatures;

fn main() {
    let d = parse_json(include_str!("../fixtures/people.json"), &IngestConfig::default()).unwrap();
    let shape = infer_one(&d, &InferenceConfig::default());
    println!("shape:\n  {shape}");
    let p = provide_normalized(&shape);
    println!("provided:\n  {}", render_signatures(&p));
    println!("root type: {}", p.root_type);
}
