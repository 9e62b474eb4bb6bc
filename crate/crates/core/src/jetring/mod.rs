//! Exact truncated polynomial and power-series arithmetic over ℚ with
//! weighted gradings.

mod implicit;
mod monomial;
mod poly;
mod series;

pub use implicit::{implicit_solve, implicit_solve_system, implicit_solve_var};
pub use monomial::{Grading, Monomial, Var};
pub use poly::{format_rational, SeriesAssignment, WeightedPoly};
pub use series::{solve_ode_series, solve_ode_system, UniSeries};

/// Exact rational coefficients.
pub type Rational = num_rational::BigRational;

/// `n / d` as a rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `n` or `n/d`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if num_traits::Zero::is_zero(&d) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}
