// Finite type detection and the normal form of a singular surface.

use std::error::Error;

use paracr::cli::parse_poly;
use paracr::jetring::{Grading, Var};
use paracr::singnorm::{check_singular_normal, finite_type, forbidden, normalize_singular, TypeVerdict};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let vars = [Var::A, Var::B, Var::X];
    for text in ["a + b x", "a + b^2 x^3", "a + b^3 + x^4 + b x^2", "a + 2 b x^2 + b^2 x"] {
        let f = parse_poly(text, &vars, Grading::uniform(), 12)?;
        match finite_type(&f, 12)? {
            TypeVerdict::Finite(t) => {
                let gammas: String = t.gammas.iter().map(|(j, c)| format!(", gamma_{j} = {c}")).collect();
                println!("{text:24} k = {}, m = {}, n = {}{gammas}", t.k, t.m, t.n);
            }
            TypeVerdict::Undetermined { up_to } => println!("{text:24} no mixed term up to degree {up_to}"),
        }
    }

    let text = "2 a + b^2 + b^2 x^2 + x^5 + a b^2 x + b^3 x^4 + a x^2";
    let f = parse_poly(text, &vars, Grading::uniform(), 12)?;
    let r = normalize_singular(&f, 10)?;
    let t = &r.type_data;
    println!("\ninput        y = {f}");
    println!("normal form  {}", r.normalized);
    for (w, ms) in &r.eliminated_by_weight {
        let ms: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        println!("  weight {w}: removed {}", ms.join(", "));
    }
    let banned: Vec<String> = forbidden(t, 7).iter().map(|m| m.to_string()).collect();
    println!("forbidden at weight 7: {}", banned.join(", "));
    println!("normal: {}", check_singular_normal(&r.normalized, t, 10).is_normal());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
