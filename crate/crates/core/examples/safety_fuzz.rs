//! Random samples, random inputs whose shape is preferred over theirs, and
//! a walk of every provided member over each input.
//!
//! `cargo run --release --example safety_fuzz -- 2000`

use rand::SeedableRng;
use typeprov::foo::DEFAULT_FUEL;
use typeprov::harness::gen::{generate_subshape_input, random_samples, TrialRng};
use typeprov::harness::safety::check_relative_safety;
use typeprov::inference::{infer_many, InferenceConfig};

fn main() {
    let trials: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    let cfg = InferenceConfig::default();

    let mut rng = TrialRng::seed_from_u64(7);
    let samples = random_samples(&mut rng);
    let sigma = infer_many(&samples, &cfg);
    let (input, mutations) = generate_subshape_input(&mut rng, &samples, &sigma, &cfg);
    println!("one trial\n  samples shape: {sigma}\n  mutations: {mutations:?}\n  input: {input}\n");

    let (mut safe, mut members) = (0, 0);
    for seed in 0..trials {
        let mut rng = TrialRng::seed_from_u64(seed);
        let samples = random_samples(&mut rng);
        let sigma = infer_many(&samples, &cfg);
        let (input, _) = generate_subshape_input(&mut rng, &samples, &sigma, &cfg);
        match check_relative_safety(&samples, &input, &cfg, DEFAULT_FUEL) {
            typeprov::harness::safety::Verdict::Safe(stats) => {
                safe += 1;
                members += stats.members;
            }
            v => println!("seed {seed}: {v}"),
        }
    }
    println!("{safe}/{trials} safe, {members} members evaluated");
}
