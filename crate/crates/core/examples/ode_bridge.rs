// Second-order ODEs and their solution surfaces in both directions.

use std::error::Error;

use paracr::cli::parse_poly;
use paracr::jetring::{int, rat, Grading, Var};
use paracr::odebridge::{
    check_ode_normal, linear_ode_surface, ode_to_surface, surface_to_ode, tresse_first_invariant, OdeJet,
};
use paracr::regnorm::normalize_jet;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let u = Grading::uniform();

    // y'' = p^2 has solutions y = a - ln(1 - b x)
    let b = OdeJet::new(parse_poly("p^2", &[Var::X, Var::Y, Var::P], u, 6)?)?;
    let f = ode_to_surface(&b, 8)?;
    println!("y'' = p^2      ->  {f}");
    let (back, data) = surface_to_ode(&f)?;
    println!("and back       ->  y'' = {}", back.rhs());
    println!("  a(x, y, p) = {}", data.a_series);
    println!("  phi        = {}", data.phi);

    // harmonic oscillator
    let b = OdeJet::new(parse_poly("-y", &[Var::X, Var::Y, Var::P], u, 8)?)?;
    println!("y'' = -y       ->  {}", ode_to_surface(&b, 8)?);

    // a linear equation is flat: its surface normalizes to a + b x
    let s = linear_ode_surface(&rat(3, 2), &int(-2), 8)?;
    let n = normalize_jet(&s)?;
    println!("y'' + 3/2 y' - 2 y = 0 normalizes to {}", n.normalized);

    // the ODE of a normalized surface is in ODE normal form
    let f = parse_poly("a + b x + b^2 x^4 + a b^3 x^5", &[Var::A, Var::B, Var::X], Grading::regular(), 12)?;
    let f = normalize_jet(&paracr::regnorm::SurfaceJet::new(f)?)?.normalized;
    let (b, _) = surface_to_ode(&f)?;
    println!("normalized surface gives y'' = {}", b.rhs());
    println!("  normal: {}, first invariant: {}", check_ode_normal(&b).normal, tresse_first_invariant(&b));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
