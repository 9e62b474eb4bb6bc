// Weight-by-weight normal form of a regular surface, with the map that
// produces it.

use std::error::Error;

use paracr::cli::parse_poly;
use paracr::jetring::{Grading, Var};
use paracr::regnorm::{apply_map, normalize};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let text = "2 a + b x + a^2 + x^3 + 3 b^2 x^2 - a b x^3 + 1/2 b^3 x^3 + b^2 x^4";
    let f = parse_poly(text, &[Var::A, Var::B, Var::X], Grading::uniform(), 16)?;
    let r = normalize(&f, 8)?;
    println!("input       y = {f}");
    if let Some(p) = &r.preliminary {
        println!("preliminary X = {}, Y = {}, A = {}, B = {}", p.x, p.y, p.a, p.b);
    }
    let t = &r.transform;
    println!("transform   X = {}\n            Y = {}\n            A = {}\n            B = {}", t.x, t.y, t.a, t.b);
    println!("normal form {}", r.normalized);
    for (w, ms) in &r.eliminated_by_weight {
        let ms: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        println!("  weight {w}: removed {}", ms.join(", "));
    }
    println!("conditions (i)-(v) hold: {}", r.conditions.all());

    // the transform really does take the reduced jet to the normal form
    let reduced = paracr::regnorm::reduce(&f, 8)?;
    assert_eq!(apply_map(&reduced.jet, &r.transform)?, r.normalized);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
