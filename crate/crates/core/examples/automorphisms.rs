// Tangency of vector fields and the isotropy verdict for finite-type surfaces.

use std::error::Error;

use paracr::autodetect::{apply_field, isotropy_report, torus_field};
use paracr::jetring::{Grading, Var};
use paracr::cli::parse_poly;
use paracr::regnorm::SurfaceJet;
use paracr::singnorm::reduced_type;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let surfaces = [
        ("a + b^2 x^3", 5),
        ("a + b^2 x + b^4 x^2 + 5 b^6 x^3", 3),
        ("a + b^2 x + b^3 x^2", 3),
        ("a + b x^2 + 1/2 b^2 x", 3),
        ("a + b^2 x^2 + a b^3 x^3", 4),
    ];
    for (text, k) in surfaces {
        let f = SurfaceJet::new(parse_poly(text, &[Var::A, Var::B, Var::X], Grading::singular(k), 3 * k as i32)?)?;
        let r = isotropy_report(&f, f.order())?;
        println!("{text:36} {} (up to weight {})", r.verdict.label(), r.up_to);
        for (name, chi) in &r.fields {
            println!("    {name:6} {chi}");
        }
        let t = reduced_type(&f)?;
        let residual = apply_field(&torus_field(t.m, t.n, f.order()), &f)?;
        println!("    residual of n b∂b - m x∂x: {residual}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
