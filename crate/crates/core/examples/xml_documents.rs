//! A document of headings, paragraphs and images. With one element shape
//! per collection every element kind becomes an optional member, so a
//! document containing an unknown `<table>` still reads safely.
//!
//! `cargo run --example xml_documents`

use typeprov::access::eval_path;
use typeprov::foo::DEFAULT_FUEL;
use typeprov::harness::safety::check_relative_safety;
use typeprov::inference::{infer_one, InferenceConfig};
use typeprov::ingest::{parse_xml, IngestConfig};
use typeprov::pipeline::provide_normalized;
use typeprov::provider::render_signatures;

fn main() {
    let ingest = IngestConfig::default();
    let doc = parse_xml(include_str!("../fixtures/doc.xml"), &ingest).unwrap();
    let with_table = parse_xml(include_str!("../fixtures/doc_with_table.xml"), &ingest).unwrap();

    for hetero in [false, true] {
        let cfg = InferenceConfig { hetero_collections: hetero, ..InferenceConfig::default() };
        let shape = infer_one(&doc, &cfg);
        println!("hetero_collections = {hetero}\n  shape: {shape}");
        println!("  {}\n", render_signatures(&provide_normalized(&shape)));
    }

    let cfg = InferenceConfig { hetero_collections: false, ..InferenceConfig::default() };
    let p = provide_normalized(&infer_one(&doc, &cfg));
    for path in ["[0].Heading", "[1].Heading", "[1].P", "[2].P"] {
        let v = eval_path(&p, with_table.clone(), &path.parse().unwrap(), DEFAULT_FUEL).unwrap();
        println!("table variant {path:<12} = {v}");
    }
    println!("\nwalk of every member: {}", check_relative_safety(&[doc], &with_table, &cfg, DEFAULT_FUEL));
}
