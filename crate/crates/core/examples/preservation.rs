//! Random well-typed programs over provided classes, type checked again
//! after every reduction step.
//!
//! `cargo run --release --example preservation -- 5000`

use rand::{Rng, SeedableRng};
use typeprov::foo::DEFAULT_FUEL;
use typeprov::harness::gen::{generate_subshape_input, random_samples, TrialRng};
use typeprov::harness::terms::{check_preservation, TermGen, TermOutcome};
use typeprov::inference::{infer_many, InferenceConfig};
use typeprov::pipeline::provide_normalized;

fn main() {
    let trials: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1000);
    let cfg = InferenceConfig::default();
    let (mut values, mut exns, mut steps, mut violations) = (0, 0, 0, 0);
    for seed in 0..trials {
        let mut rng = TrialRng::seed_from_u64(seed);
        let samples = random_samples(&mut rng);
        let sigma = infer_many(&samples, &cfg);
        let (input, _) = generate_subshape_input(&mut rng, &samples, &sigma, &cfg);
        let p = provide_normalized(&sigma);
        let size = rng.gen_range(4..48);
        let mut g = TermGen::new(&mut rng, &p, input);
        let ty = g.random_type();
        let e = g.gen(&ty, &[], size);
        if seed == 0 {
            println!("sample program : {ty}\n  {e}\n");
        }
        match check_preservation(&p.classes, &e, &ty, DEFAULT_FUEL) {
            Ok(TermOutcome::Value { steps: n }) => {
                values += 1;
                steps += n;
            }
            Ok(TermOutcome::Exn { steps: n }) => {
                exns += 1;
                steps += n;
            }
            Err(v) => {
                violations += 1;
                println!("seed {seed}: {v:?}");
            }
        }
    }
    println!("{trials} programs: {values} values, {exns} exceptions, {violations} violations, {steps} steps checked");
}
