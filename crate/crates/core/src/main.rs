use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use typeprov::access::{build_access, AccessPath};
use typeprov::foo::{evaluate_traced, EvalOutcome, DEFAULT_FUEL};
use typeprov::harness::{run_suites, run_trial, CheckConfig, Suite, TrialResult};
use typeprov::inference::{infer_one, InferenceConfig};
use typeprov::ingest::{IngestConfig, SourceFormat};
use typeprov::pipeline::{
    load_document, load_samples, provide_normalized, read_shape_file, write_shape_file, LoadError, LoadOptions,
    SampleSource,
};
use typeprov::provider::render_signatures;
use typeprov::shapes::explain_not_preferred;

#[derive(Parser)]
#[command(
    name = "typeprov",
    version,
    about = "Infer shapes from sample documents and read data through the provided types"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer a shape from samples; prints it and optionally writes a .shape file.
    Infer {
        #[command(flatten)]
        source: SourceArgs,
        /// Sample files or http(s) URLs.
        #[arg(required = true)]
        samples: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the provided type signatures and classes for a .shape file.
    Codegen {
        shape: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that an input document's shape is preferred over a .shape file.
    Validate {
        #[command(flatten)]
        source: SourceArgs,
        shape: PathBuf,
        input: String,
    },
    /// Read a member path from an input through types inferred from samples.
    Eval {
        #[command(flatten)]
        source: SourceArgs,
        /// Access path such as `Main.Temp` or `[1].Age`.
        #[arg(long)]
        path: String,
        /// Document to read; defaults to the first sample.
        #[arg(long)]
        input: Option<String>,
        /// Print every reduction step.
        #[arg(long)]
        trace: bool,
        #[arg(required = true)]
        samples: Vec<String>,
    },
    /// Run the property suites and write a JSON report.
    Check {
        /// Suites to run (lub, safety, preservation, stability); all by default.
        #[arg(long = "suite")]
        suites: Vec<Suite>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per randomized suite, overriding the per-suite defaults.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Run the stability suite with heterogeneous collections.
        #[arg(long)]
        hetero_stability: bool,
        /// Rerun one trial from the seed printed for a failure.
        #[arg(long, value_name = "TRIAL_SEED", requires = "suites")]
        replay: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// json, xml or csv; detected from the extension by default.
    #[arg(long)]
    format: Option<SourceFormat>,
    /// Unify all XML elements with the same name.
    #[arg(long)]
    global_xml: bool,
    /// Infer one element shape per collection instead of per-tag entries.
    #[arg(long)]
    no_hetero: bool,
    /// Cell text read as null; repeatable, replaces the defaults.
    #[arg(long = "missing-token")]
    missing_tokens: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    /// Directory caching fetched URLs.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// JSON file with `ingest` and `inference` settings.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    ingest: Option<IngestConfig>,
    inference: Option<InferenceConfig>,
}

enum Failure {
    /// Not a subshape, a failing suite, a stuck evaluation.
    Domain(String),
    Input(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

impl SourceArgs {
    fn config_file(&self) -> Result<ConfigFile, Failure> {
        let Some(path) = &self.config else { return Ok(ConfigFile::default()) };
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn load_options(&self, file: &ConfigFile) -> LoadOptions {
        let mut ingest = file.ingest.clone().unwrap_or_default();
        if !self.missing_tokens.is_empty() {
            ingest.missing_tokens = self.missing_tokens.iter().cloned().collect();
        }
        LoadOptions { format: self.format, ingest, cache_dir: self.cache_dir.clone() }
    }

    fn inference(&self, file: &ConfigFile, format: SourceFormat, ingest: &IngestConfig) -> InferenceConfig {
        let mut cfg = file.inference.clone().unwrap_or_else(|| InferenceConfig::for_source(format, ingest));
        cfg.global_xml |= self.global_xml;
        if self.no_hetero {
            cfg.hetero_collections = false;
        }
        cfg
    }
}

fn sources(args: &[String]) -> Vec<SampleSource> {
    args.iter().map(|s| SampleSource::parse(s)).collect()
}

fn write_out(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn infer(source: &SourceArgs, samples: &[String], out: Option<&Path>) -> Outcome {
    let file = source.config_file()?;
    let opts = source.load_options(&file);
    let loaded = load_samples(&sources(samples), &opts)?;
    let shape = loaded.infer(&source.inference(&file, loaded.format, &opts.ingest)).map_err(LoadError::from)?;
    println!("{shape}");
    if let Some(path) = out {
        write_shape_file(path, &shape)?;
    }
    Ok(())
}

fn codegen(shape: &Path, out: Option<&Path>) -> Outcome {
    let p = provide_normalized(&read_shape_file(shape)?);
    let text = format!("{}\n\n{}\n", render_signatures(&p), p.classes);
    match out {
        Some(path) => write_out(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate(source: &SourceArgs, shape: &Path, input: &str) -> Outcome {
    let sigma = read_shape_file(shape)?;
    let file = source.config_file()?;
    let opts = source.load_options(&file);
    let (format, d) = load_document(&SampleSource::parse(input), &opts)?;
    let cfg = source.inference(&file, format, &opts.ingest);
    match explain_not_preferred(&infer_one(&d, &cfg), &sigma) {
        None => {
            println!("subshape");
            Ok(())
        }
        Some(v) => Err(Failure::Domain(format!("not a subshape: {v}"))),
    }
}

fn eval(source: &SourceArgs, path: &str, input: Option<&str>, trace: bool, samples: &[String]) -> Outcome {
    let path: AccessPath = path.parse().map_err(|e: typeprov::access::AccessError| Failure::Input(e.to_string()))?;
    let file = source.config_file()?;
    let opts = source.load_options(&file);
    let loaded = load_samples(&sources(samples), &opts)?;
    let shape = loaded.infer(&source.inference(&file, loaded.format, &opts.ingest)).map_err(LoadError::from)?;
    let d = match input {
        Some(i) => load_document(&SampleSource::parse(i), &opts)?.1,
        None => loaded.documents[0].clone(),
    };
    let p = provide_normalized(&shape);
    let (e, ty) = build_access(&p, p.apply(d), &p.root_type, &path).map_err(|e| Failure::Domain(e.to_string()))?;
    let outcome = evaluate_traced(&p.classes, &e, source.fuel, |step| {
        if trace {
            eprintln!("  -> {step}");
        }
    })
    .map_err(|e| Failure::Domain(e.to_string()))?;
    match outcome {
        EvalOutcome::Stuck(s) => Err(Failure::Domain(format!("stuck: {s}"))),
        v => {
            println!("{v} : {ty}");
            Ok(())
        }
    }
}

fn check(suites: &[Suite], cfg: CheckConfig, replay: Option<u64>, out: Option<&Path>) -> Outcome {
    if let Some(trial_seed) = replay {
        let [suite] = suites else { return Err(Failure::Input("--replay needs exactly one --suite".into())) };
        return match run_trial(*suite, trial_seed, &cfg) {
            TrialResult::Pass(notes) => {
                println!("{suite} trial {trial_seed}: pass {notes:?}");
                Ok(())
            }
            TrialResult::Skip => {
                println!("{suite} trial {trial_seed}: nothing to check");
                Ok(())
            }
            TrialResult::Fail(m) => Err(Failure::Domain(format!("{suite} trial {trial_seed}: {m}"))),
        };
    }
    let suites = if suites.is_empty() { &Suite::ALL[..] } else { suites };
    let report = run_suites(suites, &cfg);
    for s in &report.suites {
        let status = if s.passed() { "pass" } else { "FAIL" };
        println!("{:<13} {status}  {} trials, {} failures, {} ms", s.suite, s.trials, s.failures.len(), s.elapsed_ms);
        for f in s.failures.iter().take(5) {
            match f.trial_seed {
                Some(seed) => println!("  seed {seed}: {}", f.message),
                None => println!("  {}", f.message),
            }
        }
    }
    if let Some(path) = out {
        write_out(path, &(report.to_json() + "\n"))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Domain(format!(
            "{} of {} suites failed",
            report.suites.iter().filter(|s| !s.passed()).count(),
            report.suites.len()
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Infer { source, samples, out } => infer(source, samples, out.as_deref()),
        Command::Codegen { shape, out } => codegen(shape, out.as_deref()),
        Command::Validate { source, shape, input } => validate(source, shape, input),
        Command::Eval { source, path, input, trace, samples } => eval(source, path, input.as_deref(), *trace, samples),
        Command::Check { suites, seed, trials, fuel, hetero_stability, replay, out } => {
            let mut cfg =
                CheckConfig { seed: *seed, fuel: *fuel, hetero_stability: *hetero_stability, ..CheckConfig::default() };
            if let Some(n) = trials {
                cfg = cfg.with_trials(*n);
            }
            check(suites, cfg, *replay, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
