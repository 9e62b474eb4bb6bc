// Weighted jets: arithmetic, substitution and an implicit solve.

use std::error::Error;

use paracr::jetring::{implicit_solve_var, rat, Grading, Monomial, SeriesAssignment, Var, WeightedPoly};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = Grading::regular();
    let l = 8;
    let v = |var| WeightedPoly::var(var, g, l);

    // a + b x - 3/2 b^2 x^2, known up to weight 8
    let f = &(&v(Var::A) + &(&v(Var::B) * &v(Var::X)))
        + &WeightedPoly::monomial(rat(-3, 2), Monomial::new(0, 2, 2, 0, 0), g, l);
    println!("F        = {f}");
    println!("F^2      = {}", f.checked_mul(&f)?);
    println!("dF/dx    = {:?}", f.partial(Var::X, 1));

    // substitute b -> b + a b: weights never drop, so the order is kept
    let s = SeriesAssignment::new().with(Var::B, &v(Var::B) + &(&v(Var::A) * &v(Var::B)));
    println!("F(b+ab)  = {}", f.substitute(&s)?);

    // a = y - a x^2 solved order by order: a = y (1 + x^2)^(-1)
    let rhs = &v(Var::Y) - &(&v(Var::A) * &(&v(Var::X) * &v(Var::X)));
    let a = implicit_solve_var(&rhs, Var::A, l)?;
    println!("a(x, y)  = {a}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
