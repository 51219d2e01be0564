//! Column types from a CSV file: a `#N/A` cell makes Temp nullable, a
//! non-ISO date makes Date a string, and a 0/1 column reads as bool.
//!
//! `cargo run --example csv_air_quality`

use typeprov::access::eval_path;
use typeprov::foo::DEFAULT_FUEL;
use typeprov::inference::{infer_one, InferenceConfig};
use typeprov::ingest::{parse_csv, IngestConfig, SourceFormat};
use typeprov::pipeline::provide_normalized;
use typeprov::provider::render_signatures;

fn main() {
    let ingest = IngestConfig::default();
    let d = parse_csv(include_str!("../fixtures/air_quality.csv"), &ingest).unwrap();
    let shape = infer_one(&d, &InferenceConfig::for_source(SourceFormat::Csv, &ingest));
    println!("shape: {shape}");
    let p = provide_normalized(&shape);
    println!("{}", render_signatures(&p));
    for path in ["[0].Ozone", "[3].Temp", "[2].Date", "[1].Autofilled"] {
        println!("{path:<16} = {}", eval_path(&p, d.clone(), &path.parse().unwrap(), DEFAULT_FUEL).unwrap());
    }
}
