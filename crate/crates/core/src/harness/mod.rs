//! Randomized and exhaustive checks of the safety properties.
//!
//! Every trial draws from its own generator seeded with a value derived from
//! the run seed, so a failing trial can be replayed on its own with
//! [`run_trial`].

pub mod gen;
pub mod oracle;
pub mod safety;
pub mod stability;
pub mod terms;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use self::gen::{generate_subshape_input, random_samples, random_value, vary, TrialRng};
use self::oracle::{erased_universe, LubOracle};
use self::safety::{check_relative_safety, Verdict};
use self::stability::{check_stability, random_probe, StabilityVerdict};
use self::terms::{check_preservation, TermGen, TermOutcome};
use crate::data::DataValue;
use crate::foo::DEFAULT_FUEL;
use crate::inference::{infer_many, InferenceConfig};
use crate::pipeline::provide_normalized;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lub,
    Safety,
    Preservation,
    Stability,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lub, Suite::Safety, Suite::Preservation, Suite::Stability];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lub => "lub",
            Suite::Safety => "safety",
            Suite::Preservation => "preservation",
            Suite::Stability => "stability",
        }
    }

    fn id(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown suite `{s}` (expected lub, safety, preservation or stability)"))
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub seed: u64,
    pub safety_trials: usize,
    pub preservation_trials: usize,
    pub stability_trials: usize,
    pub fuel: u64,
    /// Run stability trials with heterogeneous collections, outside the
    /// model the stability argument covers.
    pub hetero_stability: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            safety_trials: 1_000,
            preservation_trials: 10_000,
            stability_trials: 500,
            fuel: DEFAULT_FUEL,
            hetero_stability: false,
        }
    }
}

impl CheckConfig {
    /// Sets every randomized suite to `n` trials.
    pub fn with_trials(self, n: usize) -> Self {
        CheckConfig { safety_trials: n, preservation_trials: n, stability_trials: n, ..self }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    /// Replays the trial with [`run_trial`]; absent for exhaustive suites.
    pub trial_seed: Option<u64>,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u128,
    /// Suite-specific counts, e.g. members evaluated or rewrites used.
    pub notes: Vec<(String, u64)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// The seed of trial `i` of `suite` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, suite: Suite, i: usize) -> u64 {
    // splitmix64 finalizer over the combined inputs.
    let mut z = seed ^ suite.id().rotate_left(56) ^ (i as u64).wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Outcome of a single randomized trial.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialResult {
    Pass(Vec<(&'static str, u64)>),
    /// The trial had nothing to test, e.g. no probe path exists.
    Skip,
    Fail(String),
}

fn samples_text(samples: &[DataValue]) -> String {
    samples.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ;; ")
}

fn safety_trial(rng: &mut TrialRng, fuel: u64) -> TrialResult {
    let cfg = InferenceConfig::default();
    let samples = random_samples(rng);
    let sigma = infer_many(&samples, &cfg);
    let (input, mutations) = generate_subshape_input(rng, &samples, &sigma, &cfg);
    match check_relative_safety(&samples, &input, &cfg, fuel) {
        Verdict::Safe(stats) => TrialResult::Pass(vec![
            ("members evaluated", stats.members as u64),
            ("mutations applied", mutations.len() as u64),
        ]),
        v => TrialResult::Fail(format!("{v}; samples: {}; input: {input}", samples_text(&samples))),
    }
}

fn preservation_trial(rng: &mut TrialRng, fuel: u64) -> TrialResult {
    let cfg = InferenceConfig::default();
    let samples = random_samples(rng);
    let sigma = infer_many(&samples, &cfg);
    let (input, _) = generate_subshape_input(rng, &samples, &sigma, &cfg);
    let p = provide_normalized(&sigma);
    let size = rng.gen_range(4..48);
    let mut g = TermGen::new(rng, &p, input);
    let ty = g.random_type();
    let e = g.gen(&ty, &[], size);
    match check_preservation(&p.classes, &e, &ty, fuel) {
        Ok(TermOutcome::Value { steps }) => TrialResult::Pass(vec![("steps", steps as u64), ("values", 1)]),
        Ok(TermOutcome::Exn { steps }) => TrialResult::Pass(vec![("steps", steps as u64), ("exceptions", 1)]),
        Err(v) => TrialResult::Fail(format!("{v:?} in `{e}` : {ty}")),
    }
}

fn stability_trial(rng: &mut TrialRng, hetero: bool) -> TrialResult {
    let cfg = if hetero { InferenceConfig::default() } else { InferenceConfig::core() };
    let samples = random_samples(rng);
    let input = samples.choose(rng).expect("samples are never empty").clone();
    let new_sample = if rng.gen_bool(0.2) { random_value(rng, 3) } else { vary(rng, &samples[0], 0.5) };
    let old = provide_normalized(&infer_many(&samples, &cfg));
    let Some(probe) = random_probe(rng, &old, &input) else { return TrialResult::Skip };
    match check_stability(&samples, &new_sample, &input, &probe, &cfg) {
        StabilityVerdict::Stable { rewrites, .. } => TrialResult::Pass(vec![("rewrites", rewrites.len() as u64)]),
        v => TrialResult::Fail(format!(
            "{v}; probe {probe}; samples: {}; new sample: {new_sample}; input: {input}",
            samples_text(&samples)
        )),
    }
}

/// Runs one randomized trial from its seed.
pub fn run_trial(suite: Suite, trial_seed: u64, cfg: &CheckConfig) -> TrialResult {
    let mut rng = TrialRng::seed_from_u64(trial_seed);
    match suite {
        Suite::Lub => TrialResult::Skip,
        Suite::Safety => safety_trial(&mut rng, cfg.fuel),
        Suite::Preservation => preservation_trial(&mut rng, cfg.fuel),
        Suite::Stability => stability_trial(&mut rng, cfg.hetero_stability),
    }
}

fn add_notes(notes: &mut Vec<(String, u64)>, extra: &[(&'static str, u64)]) {
    for (k, v) in extra {
        match notes.iter_mut().find(|(n, _)| n == k) {
            Some((_, total)) => *total += v,
            None => notes.push((k.to_string(), *v)),
        }
    }
}

fn run_lub() -> SuiteReport {
    let start = Instant::now();
    let report = LubOracle::new(erased_universe()).check_all_pairs();
    let failures = report
        .mismatches
        .iter()
        .map(|m| {
            let oracle: Vec<String> = m.oracle.iter().map(ToString::to_string).collect();
            Failure {
                trial_seed: None,
                message: format!("csh({}, {}) = {}, oracle gives {{{}}}", m.a, m.b, m.csh, oracle.join(", ")),
            }
        })
        .collect();
    SuiteReport {
        suite: Suite::Lub,
        trials: report.pairs,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
        notes: vec![("universe size".into(), report.universe_size as u64)],
    }
}

fn run_randomized(suite: Suite, trials: usize, cfg: &CheckConfig) -> SuiteReport {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    let mut done = 0;
    let mut next = 0;
    let mut skipped = 0u64;
    // Skipped trials do not count, so draw seeds in batches until enough
    // trials have run.
    while done < trials {
        let batch = (trials - done).max(16);
        let results: Vec<(u64, TrialResult)> = (next..next + batch)
            .into_par_iter()
            .map(|i| {
                let s = trial_seed(cfg.seed, suite, i);
                (s, run_trial(suite, s, cfg))
            })
            .collect();
        next += batch;
        for (s, r) in results {
            if done == trials {
                break;
            }
            match r {
                TrialResult::Skip => skipped += 1,
                TrialResult::Pass(extra) => {
                    done += 1;
                    add_notes(&mut notes, &extra);
                }
                TrialResult::Fail(message) => {
                    done += 1;
                    failures.push(Failure { trial_seed: Some(s), message });
                }
            }
        }
    }
    if skipped > 0 {
        notes.push(("skipped".into(), skipped));
    }
    SuiteReport { suite, trials, failures, elapsed_ms: start.elapsed().as_millis(), notes }
}

pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> SuiteReport {
    match suite {
        Suite::Lub => run_lub(),
        Suite::Safety => run_randomized(suite, cfg.safety_trials, cfg),
        Suite::Preservation => run_randomized(suite, cfg.preservation_trials, cfg),
        Suite::Stability => run_randomized(suite, cfg.stability_trials, cfg),
    }
}

pub fn run_suites(suites: &[Suite], cfg: &CheckConfig) -> Report {
    Report { seed: cfg.seed, suites: suites.iter().map(|&s| run_suite(s, cfg)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_differ_and_replay() {
        let cfg = CheckConfig::default();
        assert_ne!(trial_seed(0, Suite::Safety, 0), trial_seed(0, Suite::Safety, 1));
        assert_ne!(trial_seed(0, Suite::Safety, 0), trial_seed(0, Suite::Stability, 0));
        let s = trial_seed(3, Suite::Preservation, 5);
        assert_eq!(run_trial(Suite::Preservation, s, &cfg), run_trial(Suite::Preservation, s, &cfg));
    }

    #[test]
    fn small_run_passes() {
        let cfg = CheckConfig::default().with_trials(20);
        let report = run_suites(&[Suite::Safety, Suite::Preservation, Suite::Stability], &cfg);
        assert!(report.passed(), "{}", report.to_json());
        assert!(report.suites.iter().all(|s| s.trials == 20));
        assert!(report.to_json().contains("\"suite\": \"stability\""));
    }
}
