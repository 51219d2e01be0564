//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed.

use std::panic;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use typeprov::access::eval_path;
use typeprov::foo::{EvalOutcome, FooType, FooValue, DEFAULT_FUEL};
use typeprov::harness::{run_suite, CheckConfig, Suite};
use typeprov::inference::{infer_one, InferenceConfig};
use typeprov::ingest::{parse_csv, parse_xml, IngestConfig, SourceFormat};
use typeprov::pipeline::{provide_normalized, read_shape_file};
use typeprov::provider::{render_signatures, RAW_MEMBER};
use typeprov::shapes::{Items, Multiplicity, Shape};

type Check = fn(&Path) -> Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: Check,
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn typeprov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_typeprov")).args(args).output().expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn infer_to(dir: &Path, name: &str, args: &[&str]) -> Result<PathBuf, String> {
    let out = dir.join(format!("{name}.shape"));
    let mut all = vec!["infer", "--out", out.to_str().unwrap()];
    all.extend_from_slice(args);
    let o = typeprov(&all);
    ensure(o.status.success(), || format!("infer {name} failed: {}", stderr(&o)))?;
    Ok(out)
}

fn codegen(shape: &Path) -> Result<String, String> {
    let o = typeprov(&["codegen", shape.to_str().unwrap()]);
    ensure(o.status.success(), || format!("codegen failed: {}", stderr(&o)))?;
    Ok(stdout(&o))
}

fn single_entry(shape: &Shape) -> Option<&Shape> {
    match shape {
        Shape::Collection(Items::Heterogeneous(es)) if es.len() == 1 => Some(&es[0].shape),
        Shape::Collection(Items::Homogeneous(s)) => Some(s),
        _ => None,
    }
}

fn people(dir: &Path) -> Result<String, String> {
    let shape_file = infer_to(dir, "people", &[&fixture("people.json")])?;
    let shape = read_shape_file(&shape_file).map_err(|e| e.to_string())?;
    let expected = Shape::record("•", vec![("name", Shape::Text), ("age", Shape::nullable(Shape::Float))]);
    let element = single_entry(&shape).ok_or_else(|| format!("not a collection of one shape: {shape}"))?;
    ensure(*element == expected, || format!("element shape {element}"))?;
    let listing = codegen(&shape_file)?;
    ensure(listing.lines().next() == Some("type Item = member Name : string, member Age : option<float>"), || {
        format!("listing starts {:?}", listing.lines().next())
    })?;
    Ok(format!("element {element}; member Age : option<float>"))
}

fn worldbank(dir: &Path) -> Result<String, String> {
    let shape_file = infer_to(dir, "worldbank", &[&fixture("worldbank.json")])?;
    let shape = read_shape_file(&shape_file).map_err(|e| e.to_string())?;
    let Shape::Collection(Items::Heterogeneous(entries)) = &shape else { return Err(format!("shape {shape}")) };
    let record =
        entries.iter().any(|e| matches!(e.shape, Shape::Record(_)) && e.multiplicity == Multiplicity::ExactlyOne);
    let list =
        entries.iter().any(|e| matches!(e.shape, Shape::Collection(_)) && e.multiplicity == Multiplicity::ExactlyOne);
    ensure(entries.len() == 2 && record && list, || format!("entries of {shape}"))?;
    let listing = codegen(&shape_file)?;
    for line in [
        "type C1 = member Record : Record, member Array : list<Item>",
        "type Item = member Indicator : string, member Date : int, member Value : option<float>",
    ] {
        ensure(listing.lines().any(|l| l == line), || format!("missing `{line}` in\n{listing}"))?;
    }
    Ok("record, 1 | collection, 1; Item has Date : int, Indicator : string, Value : option<float>".into())
}

fn xml_doc(_: &Path) -> Result<String, String> {
    let ingest = IngestConfig::default();
    let doc = parse_xml(include_str!("../fixtures/doc.xml"), &ingest).map_err(|e| e.to_string())?;
    let with_table = parse_xml(include_str!("../fixtures/doc_with_table.xml"), &ingest).map_err(|e| e.to_string())?;
    let cfg = InferenceConfig { hetero_collections: false, ..InferenceConfig::default() };
    let p = provide_normalized(&infer_one(&doc, &cfg));
    let element = p
        .classes
        .iter()
        .find(|c| c.member("Heading").is_some())
        .ok_or_else(|| format!("no class with Heading in\n{}", render_signatures(&p)))?;
    let members: Vec<_> = element.members.iter().filter(|m| m.name != RAW_MEMBER).collect();
    let names: Vec<_> = members.iter().map(|m| m.name.as_str()).collect();
    ensure(names == ["Heading", "P", "Image"], || format!("members {names:?}"))?;
    ensure(members.iter().all(|m| matches!(m.ty, FooType::Option(_))), || render_signatures(&p))?;
    let heading =
        |i: usize| eval_path(&p, with_table.clone(), &format!("[{i}].Heading").parse().unwrap(), DEFAULT_FUEL);
    let table = heading(1).map_err(|e| e.to_string())?;
    ensure(table == EvalOutcome::Value(FooValue::None), || format!("Heading of <table> = {table}"))?;
    let first = heading(0).map_err(|e| e.to_string())?;
    ensure(matches!(first, EvalOutcome::Value(FooValue::Some(_))), || format!("Heading of <heading> = {first}"))?;
    Ok(format!("{} has optional Heading, P, Image; <table>.Heading = None", element.name))
}

fn xml_root(_: &Path) -> Result<String, String> {
    let d = parse_xml(include_str!("../fixtures/root.xml"), &IngestConfig::default()).map_err(|e| e.to_string())?;
    let value = d.to_string();
    ensure(value == "root { id ↦ 1, • ↦ [item { • ↦ \"Hello!\" }] }", || format!("value {value}"))?;
    let listing = render_signatures(&provide_normalized(&infer_one(&d, &InferenceConfig::default())));
    ensure(listing == "type Root = member Id : int, member Item : string", || format!("listing {listing}"))?;
    Ok(format!("{value}; {listing}"))
}

fn csv(_: &Path) -> Result<String, String> {
    let ingest = IngestConfig::default();
    let d = parse_csv(include_str!("../fixtures/air_quality.csv"), &ingest).map_err(|e| e.to_string())?;
    let shape = infer_one(&d, &InferenceConfig::for_source(SourceFormat::Csv, &ingest));
    let expected = Shape::object(vec![
        ("Ozone", Shape::Float),
        ("Temp", Shape::nullable(Shape::Int)),
        ("Date", Shape::Text),
        ("Autofilled", Shape::Bit),
    ]);
    let element = single_entry(&shape).ok_or_else(|| format!("shape {shape}"))?;
    ensure(*element == expected, || format!("element {element}"))?;
    let listing = render_signatures(&provide_normalized(&shape));
    ensure(listing.contains("member Autofilled : bool"), || format!("listing {listing}"))?;
    Ok(format!("{element}; Autofilled : bool"))
}

fn weather(_: &Path) -> Result<String, String> {
    let weather = fixture("weather.json");
    let mut seen = Vec::new();
    for (path, expected) in
        [("Main.Temp", "5 : int"), ("Wind.Speed", "1.5 : float"), ("Sys.Country", "\"CZ\" : string")]
    {
        let o = typeprov(&["eval", "--path", path, &weather]);
        let got = stdout(&o);
        ensure(o.status.success() && got.trim() == expected, || format!("{path} printed {got:?} {}", stderr(&o)))?;
        seen.push(format!("{path} = {}", got.trim()));
    }
    Ok(seen.join(", "))
}

fn suite(suite: Suite, cfg: &CheckConfig) -> Result<String, String> {
    let report = run_suite(suite, cfg);
    let notes: Vec<String> = report.notes.iter().map(|(k, v)| format!("{k} {v}")).collect();
    match report.failures.first() {
        None => Ok(format!("{} trials, 0 failures; {}", report.trials, notes.join(", "))),
        Some(f) => Err(format!(
            "{} of {} failed; first (seed {:?}): {}",
            report.failures.len(),
            report.trials,
            f.trial_seed,
            f.message
        )),
    }
}

fn lub(_: &Path) -> Result<String, String> {
    suite(Suite::Lub, &CheckConfig::default())
}

fn safety(_: &Path) -> Result<String, String> {
    suite(Suite::Safety, &CheckConfig { safety_trials: 1_000, ..CheckConfig::default() })
}

fn preservation(_: &Path) -> Result<String, String> {
    suite(Suite::Preservation, &CheckConfig { preservation_trials: 10_000, ..CheckConfig::default() })
}

fn stability(_: &Path) -> Result<String, String> {
    suite(Suite::Stability, &CheckConfig { stability_trials: 500, ..CheckConfig::default() })
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn weather_with(edit: impl FnOnce(&mut Value)) -> Value {
    let mut v: Value = serde_json::from_str(include_str!("../fixtures/weather.json")).unwrap();
    edit(&mut v);
    v
}

fn negative_control(dir: &Path) -> Result<String, String> {
    let people = infer_to(dir, "people-neg", &[&fixture("people.json")])?;
    let weather = infer_to(dir, "weather-neg", &[&fixture("weather.json")])?;
    let air = infer_to(dir, "air-neg", &[&fixture("air_quality.csv")])?;
    let root = infer_to(dir, "root-neg", &[&fixture("root.xml")])?;
    let csv_path = dir.join("air-bad.csv");
    std::fs::write(&csv_path, "Ozone, Temp, Date, Autofilled\nhigh, 67, 2012-05-01, 0\n").unwrap();
    let xml_path = dir.join("root-bad.xml");
    std::fs::write(&xml_path, "<root id=\"first\"><item>Hello!</item></root>").unwrap();

    let cases: Vec<(&str, &Path, String, &str)> = vec![
        ("wrong primitive", &people, write_json(dir, "n1.json", &json!([{"name": 1}])), "[].name: int ⋢ string"),
        (
            "text for float",
            &people,
            write_json(dir, "n2.json", &json!([{"name": "Eva", "age": "old"}])),
            "[].age: string ⋢ float",
        ),
        ("missing required field", &people, write_json(dir, "n3.json", &json!([{"age": 3}])), "[].name: missing field"),
        ("record for list", &people, write_json(dir, "n4.json", &json!({"name": "Eva"})), ".: • { name: string }"),
        (
            "text for int",
            &weather,
            write_json(dir, "n5.json", &weather_with(|v| v["main"]["temp"] = json!("warm"))),
            ".main.temp: string ⋢ int",
        ),
        (
            "missing record",
            &weather,
            write_json(dir, "n6.json", &weather_with(|v| drop(v.as_object_mut().unwrap().remove("main")))),
            ".main: missing field",
        ),
        (
            "list for record",
            &weather,
            write_json(dir, "n7.json", &weather_with(|v| v["wind"] = json!([1.5, 150]))),
            ".wind: [",
        ),
        (
            "number for string",
            &weather,
            write_json(dir, "n8.json", &weather_with(|v| v["sys"]["country"] = json!(42))),
            ".sys.country: int ⋢ string",
        ),
        ("csv text for float", &air, csv_path.to_str().unwrap().to_string(), "[].Ozone: string ⋢ float"),
        ("xml attribute text for int", &root, xml_path.to_str().unwrap().to_string(), ".id: string ⋢ int"),
    ];
    let total = cases.len();
    for (label, shape, input, diagnostic) in cases {
        let o = typeprov(&["validate", shape.to_str().unwrap(), &input]);
        let err = stderr(&o);
        ensure(o.status.code() == Some(1), || format!("{label}: exit {:?}, stdout {}", o.status.code(), stdout(&o)))?;
        ensure(err.contains(diagnostic), || format!("{label}: expected `{diagnostic}` in {err:?}"))?;
    }
    let eva = write_json(dir, "ok.json", &json!([{"name": "Eva"}]));
    let o = typeprov(&["validate", people.to_str().unwrap(), &eva]);
    ensure(o.status.code() == Some(0) && stdout(&o).trim() == "subshape", || format!("control input: {}", stderr(&o)))?;
    Ok(format!("{total}/{total} rejected with exit 1 and a path; control accepted"))
}

fn main() {
    let second = Some(Duration::from_secs(1));
    let criteria = [
        Criterion { id: 1, name: "people example", limit: second, check: people },
        Criterion { id: 2, name: "world bank example", limit: second, check: worldbank },
        Criterion { id: 3, name: "xml document example", limit: second, check: xml_doc },
        Criterion { id: 4, name: "xml root example", limit: None, check: xml_root },
        Criterion { id: 5, name: "csv example", limit: None, check: csv },
        Criterion { id: 6, name: "weather member access", limit: None, check: weather },
        Criterion {
            id: 7,
            name: "csh against exhaustive lub oracle",
            limit: Some(Duration::from_secs(60)),
            check: lub,
        },
        Criterion { id: 8, name: "relative safety fuzz", limit: Some(Duration::from_secs(120)), check: safety },
        Criterion { id: 9, name: "preservation and progress fuzz", limit: None, check: preservation },
        Criterion { id: 10, name: "stability under new samples", limit: None, check: stability },
        Criterion { id: 11, name: "validate rejects non-subshapes", limit: None, check: negative_control },
    ];
    let dir = tempfile::tempdir().expect("temp dir");
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.id.to_string() == *f || c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(|| (c.check)(dir.path())).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        let limit = c.limit.map(|l| format!(", limit {l:?}")).unwrap_or_default();
        match result {
            Ok(detail) => println!("PASS {:>2} {}: {detail} ({elapsed:.2?}{limit})", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {}: {detail} ({elapsed:.2?}{limit})", c.id, c.name);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
