//! Build, parse and measure functions: evaluation, relevant variables, distances under
//! several laws, and the exact distance to a class.
//!
//! `cargo run --example functions`

use bftest::boolfn::json::{function_to_value, parse_function};
use bftest::boolfn::{distance, distance_to_class, relevant_variables, ClassSpec, Distribution, FunctionSpec, Point};

fn main() {
    let f = parse_function(r#"{"n": 6, "class": "dnf", "body": [[1, -2], [3, 4]]}"#).unwrap();
    let x: Point = "101000".parse().unwrap();
    println!("f = {}", function_to_value(&f));
    println!("f({x}) = {}", f.evaluate(x));
    println!("relevant mask = {:06b}", relevant_variables(&f).unwrap());

    let parity = FunctionSpec::linear(6, 0b111).unwrap();
    let biased = Distribution::product(vec![0.9; 6]).unwrap();
    println!("dist(f, x1^x2^x3) uniform = {:.4}", distance(&f, &parity, &Distribution::Uniform).unwrap());
    println!("dist(f, x1^x2^x3) p=0.9   = {:.4}", distance(&f, &parity, &biased).unwrap());

    // Every literal or constant agrees with a 3-parity on exactly half the cube.
    let d = distance_to_class(&parity, &ClassSpec::Junta { k: 1 }, &Distribution::Uniform).unwrap();
    println!("dist(x1^x2^x3, 1-juntas) = {d}");
    let d = distance_to_class(&f, &ClassSpec::Dnf { s: 1, term_cap: None }, &Distribution::Uniform).unwrap();
    println!("dist(f, 1-term DNF) = {d}");
}
