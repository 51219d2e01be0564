//! Reading XML into the data model: attributes become fields and element
//! content goes under the `•` field.
//!
//! `cargo run --example xml_root`

use typeprov::inference::{infer_global_xml, infer_one, InferenceConfig};
use typeprov::ingest::{parse_xml, IngestConfig};
use typeprov::pipeline::provide_normalized;
use typeprov::provider::render_signatures;

fn main() {
    let d = parse_xml(include_str!("../fixtures/root.xml"), &IngestConfig::default()).unwrap();
    println!("value: {d}");
    let cfg = InferenceConfig::default();
    let shape = infer_one(&d, &cfg);
    println!("shape: {shape}");
    println!("global shape: {}", infer_global_xml(&d, &cfg).unwrap());
    println!("{}", render_signatures(&provide_normalized(&shape)));
}
