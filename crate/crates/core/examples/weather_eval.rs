//! Member access on an OpenWeatherMap-style response, printing the
//! reduction steps of one access.
//!
//! `cargo run --example weather_eval`

use typeprov::access::{build_access, eval_path, AccessPath};
use typeprov::foo::{evaluate_traced, DEFAULT_FUEL};
use typeprov::inference::{infer_one, InferenceConfig};
use typeprov::ingest::{parse_json, IngestConfig};
use typeprov::pipeline::provide_normalized;

fn main() {
    let d = parse_json(include_str!("../fixtures/weather.json"), &IngestConfig::default()).unwrap();
    let p = provide_normalized(&infer_one(&d, &InferenceConfig::default()));
    for path in ["Main.Temp", "Wind.Speed", "Sys.Country", "Weather.Record.Description", "Main.Nope"] {
        let path: AccessPath = path.parse().unwrap();
        match eval_path(&p, d.clone(), &path, DEFAULT_FUEL) {
            Ok(v) => println!("{:<26} = {v}", path.to_string()),
            Err(e) => println!("{:<26} : {e}", path.to_string()),
        }
    }

    let path: AccessPath = "Main.Temp".parse().unwrap();
    let (e, ty) = build_access(&p, p.apply(d), &p.root_type, &path).unwrap();
    let mut steps = 0;
    let v = evaluate_traced(&p.classes, &e, DEFAULT_FUEL, |_| steps += 1).unwrap();
    println!("\nMain.Temp : {ty} reduces to {v} in {steps} steps");
}
