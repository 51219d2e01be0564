//! Compares the common preferred shape function against least upper
//! bounds computed by brute force over a finite universe of shapes.
//!
//! `cargo run --release --example lub_oracle`

use typeprov::harness::oracle::{erased_universe, LubOracle, OracleAnswer};
use typeprov::shapes::{csh, Shape};

fn main() {
    let oracle = LubOracle::new(erased_universe());
    let pairs = [
        (Shape::Int, Shape::Float),
        (Shape::Int, Shape::Null),
        (Shape::object(vec![("a", Shape::Int)]), Shape::object(vec![("b", Shape::Bool)])),
        (Shape::list(Shape::Int), Shape::Bool),
    ];
    for (a, b) in &pairs {
        let answer = match oracle.lub(a, b) {
            OracleAnswer::Least(least) => least.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | "),
            OracleAnswer::NoBound => "no bound in the universe".into(),
        };
        println!("csh({a}, {b}) = {}\n  oracle: {answer}", csh(a, b));
    }

    let t = std::time::Instant::now();
    let report = oracle.check_all_pairs();
    println!(
        "\n{} shapes, {} pairs, {} mismatches in {:?}",
        report.universe_size,
        report.pairs,
        report.mismatches.len(),
        t.elapsed()
    );
}
