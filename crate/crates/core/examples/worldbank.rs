//! The World Bank response: a two-element array holding a paging record and
//! a list of indicator values, inferred as a heterogeneous collection.
//!
//! `cargo run --example worldbank`

use typeprov::access::eval_path;
use typeprov::foo::DEFAULT_FUEL;
use typeprov::inference::{infer_one, InferenceConfig};
use typeprov::ingest::{parse_json, IngestConfig};
use typeprov::pipeline::provide_normalized;
use typeprov::provider::render_signatures;

fn main() {
    let d = parse_json(include_str!("../fixtures/worldbank.json"), &IngestConfig::default()).unwrap();
    let shape = infer_one(&d, &InferenceConfig::default());
    println!("shape:\n  {shape}\n");
    let p = provide_normalized(&shape);
    println!("{}\n", render_signatures(&p));
    for path in ["Record.Pages", "Array[0].Date", "Array[0].Value", "Array[1].Value"] {
        let v = eval_path(&p, d.clone(), &path.parse().unwrap(), DEFAULT_FUEL).unwrap();
        println!("{path:<16} = {v}");
    }
}
