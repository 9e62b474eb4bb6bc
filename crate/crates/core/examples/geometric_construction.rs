// The step-by-step geometric normalization compared with the jet algorithm.

use std::error::Error;

use paracr::jetring::{rat, Grading, Monomial, WeightedPoly};
use paracr::regnorm::{check_normal_conditions, geometric_normalize, normalize_jet, SurfaceJet};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = Grading::regular();
    let l = 8;
    let terms = [
        (Monomial::new(0, 0, 3, 0, 0), rat(1, 1)),
        (Monomial::new(1, 1, 1, 0, 0), rat(2, 1)),
        (Monomial::new(0, 2, 2, 0, 0), rat(-1, 2)),
        (Monomial::new(0, 3, 2, 0, 0), rat(3, 1)),
        (Monomial::new(1, 3, 3, 0, 0), rat(1, 5)),
        (Monomial::new(0, 2, 4, 0, 0), rat(1, 1)),
    ];
    let f = SurfaceJet::regular(&WeightedPoly::from_terms(terms, g, l))?;
    println!("input      {f}");

    let geo = geometric_normalize(&f)?;
    println!("geometric  {}", geo.normalized);
    println!("  conditions: {:?}", check_normal_conditions(&geo.normalized).failures());

    let jet = normalize_jet(&f)?;
    println!("jet        {}", jet.normalized);

    // both are normal forms; they may differ by an isotropy of the model
    assert!(geo.conditions.all() && jet.conditions.all());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
