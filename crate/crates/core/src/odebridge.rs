//! Second-order ODEs `y'' = B(x, y, p)` (with `p = y'`) and their solution
//! surfaces `y = F(a, b, x)` with `y(0) = a`, `y'(0) = b`.
//!
//! ODE jets and the surfaces built from them are truncated by total degree.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jetring::{
    implicit_solve, implicit_solve_system, solve_ode_series, Grading, Monomial, Rational, SeriesAssignment, UniSeries,
    Var, WeightedPoly,
};
use crate::regnorm::SurfaceJet;

/// Right-hand side `B(x, y, p)` truncated at total degree `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeJet {
    b: WeightedPoly,
}

impl OdeJet {
    pub fn new(b: WeightedPoly) -> Result<Self> {
        if b.grading() != Grading::uniform() {
            return Err(Error::GradingMismatch);
        }
        for v in [Var::A, Var::B] {
            if b.contains_var(v) {
                return Err(Error::UnexpectedVariable { var: v, context: "ODE right-hand side B(x,y,p)" });
            }
        }
        Ok(OdeJet { b })
    }

    pub fn rhs(&self) -> &WeightedPoly {
        &self.b
    }

    pub fn order(&self) -> i32 {
        self.b.order()
    }

    /// Coefficient `B_ij(y)` of `x^i p^j`.
    pub fn coefficient(&self, i: u16, j: u16) -> WeightedPoly {
        self.b.extract(&[(Var::X, i), (Var::P, j)])
    }
}

/// The series eliminating `(a, b)` in favour of `(x, y, p)`.
#[derive(Clone, Debug)]
pub struct EliminationData {
    pub a_series: WeightedPoly,
    pub b_series: WeightedPoly,
    /// `φ = ∫₀ˣ b dt − x p`.
    pub phi: WeightedPoly,
}

impl EliminationData {
    /// The coefficients `φ_n` of `x^n` in `φ`, as polynomials in `(y, p)`.
    pub fn phi_coefficients(&self) -> Vec<(u16, WeightedPoly)> {
        let max = self.phi.monomials().map(|m| m.exp(Var::X)).max().unwrap_or(0);
        (0..=max)
            .map(|n| (n, self.phi.extract(&[(Var::X, n)])))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Whether every `φ_n` is divisible by `p²`.
    pub fn phi_divisible_by_p2(&self) -> bool {
        self.phi.monomials().all(|m| m.exp(Var::P) >= 2)
    }
}

fn uniform_surface(f: &SurfaceJet) -> Result<WeightedPoly> {
    let g = f.grading();
    if g == Grading::uniform() {
        return Ok(f.f().clone());
    }
    // weight of a is k, so total degree d is safe while k·d ≤ L
    let d = f.order() / g.k() as i32;
    f.f().regrade(Grading::uniform(), d)
}

/// Solution surface of `y'' = B`: `F = a + b x + ∬ B(x, F, F_x)`, known to
/// total degree `min(L, deg B + 2)`.
pub fn ode_to_surface(b: &OdeJet, order: i32) -> Result<SurfaceJet> {
    let u = Grading::uniform();
    let order = order.min(b.order() + 2);
    let base = &WeightedPoly::var(Var::A, u, order)
        + &(&WeightedPoly::var(Var::B, u, order) * &WeightedPoly::var(Var::X, u, order));
    let f = implicit_solve(base.clone(), order, |f, w| {
        let s = SeriesAssignment::new().with(Var::Y, f.clone()).with(Var::P, f.partial(Var::X, 1).promote(w));
        let rhs = b.rhs().truncate(w).substitute(&s)?;
        Ok(&base.truncate(w) + &rhs.integrate(Var::X).integrate(Var::X))
    })?;
    SurfaceJet::new(f)
}

/// Solves `y = a + b x + f(x, a, b)`, `p = b + f_x(x, a, b)` for `(a, b)`.
pub fn eliminate(f: &SurfaceJet) -> Result<EliminationData> {
    let u = Grading::uniform();
    let ff = uniform_surface(f)?;
    let order = ff.order();
    let v = |var| WeightedPoly::var(var, u, order);
    let rem = &ff - &(&v(Var::A) + &(&v(Var::B) * &v(Var::X)));
    let rem_x = rem.partial(Var::X, 1).promote(order);
    let start = vec![v(Var::Y), v(Var::P)];
    let mut sol = implicit_solve_system(start, order, |cur, w| {
        let s = SeriesAssignment::new().with(Var::A, cur[0].clone()).with(Var::B, cur[1].clone());
        let x = WeightedPoly::var(Var::X, u, w);
        let a = &(&WeightedPoly::var(Var::Y, u, w) - &(&cur[1] * &x)) - &rem.truncate(w).substitute(&s)?;
        let b = &WeightedPoly::var(Var::P, u, w) - &rem_x.truncate(w).substitute(&s)?;
        Ok(vec![a, b])
    })?;
    let b_series = sol.pop().expect("two");
    let a_series = sol.pop().expect("two");
    let phi = (&b_series - &v(Var::P)).integrate(Var::X).truncate(order);
    Ok(EliminationData { a_series, b_series, phi })
}

/// `B(x, y, p) = F_xx(x, a(x, y, p), b(x, y, p))`, known to degree `L − 2`.
pub fn surface_to_ode(f: &SurfaceJet) -> Result<(OdeJet, EliminationData)> {
    let ff = uniform_surface(f)?;
    let data = eliminate(f)?;
    let s = SeriesAssignment::new().with(Var::A, data.a_series.clone()).with(Var::B, data.b_series.clone());
    let b = ff.partial(Var::X, 2).substitute(&s)?;
    Ok((OdeJet::new(b)?, data))
}

/// Families `(i, j)` of `x^i p^j` that must vanish in the ODE normal form.
pub fn is_forbidden_family(i: u16, j: u16) -> bool {
    j <= 1 || (i <= 1 && j <= 3)
}

/// Result of the ODE normal-form check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeNormalReport {
    pub normal: bool,
    /// Offending `(i, j)` families, sorted.
    pub offending: Vec<(u16, u16)>,
}

/// Checks that `B_ij = 0` for `(i, 0)`, `(i, 1)`, `(0, 2)`, `(0, 3)`,
/// `(1, 2)`, `(1, 3)`.
pub fn check_ode_normal(b: &OdeJet) -> OdeNormalReport {
    let mut offending: Vec<(u16, u16)> = b
        .rhs()
        .monomials()
        .map(|m| (m.exp(Var::X), m.exp(Var::P)))
        .filter(|&(i, j)| is_forbidden_family(i, j))
        .collect();
    offending.sort_unstable();
    offending.dedup();
    OdeNormalReport { normal: offending.is_empty(), offending }
}

/// `∂⁴B/∂p⁴`.
pub fn tresse_first_invariant(b: &OdeJet) -> WeightedPoly {
    b.rhs().partial(Var::P, 4)
}

/// Whether the vanishing data from the invariants forces `B = 0` on this
/// jet: returns `(premises, b_is_zero)`, where the premises are the normal
/// form, a zero first invariant and `B_i2 = B_i3 = 0` for `i ≥ 2`.
pub fn flatness_from_invariants(b: &OdeJet) -> (bool, bool) {
    let premises = check_ode_normal(b).normal
        && tresse_first_invariant(b).is_zero()
        && b.rhs().monomials().all(|m| !(m.exp(Var::X) >= 2 && matches!(m.exp(Var::P), 2 | 3)));
    (premises, b.rhs().is_zero())
}

/// `f' g − f g'`.
pub fn wronskian(f: &UniSeries, g: &UniSeries) -> UniSeries {
    f.derivative().mul(g).sub(&f.mul(&g.derivative()))
}

/// Fundamental solutions of `y'' + r y' + s y = 0` with `f1(0) = f2'(0) = 1`,
/// `f1'(0) = f2(0) = 0`, to degree `n`.
pub fn fundamental_solutions(r: &Rational, s: &Rational, n: usize) -> Result<(UniSeries, UniSeries)> {
    let rhs = |h: &[UniSeries]| Ok(h[1].scale(&-r.clone()).sub(&h[0].scale(s)));
    let one = Rational::from_integer(1.into());
    let zero = Rational::zero();
    let f1 = solve_ode_series(&[one.clone(), zero.clone()], n, rhs)?;
    let f2 = solve_ode_series(&[zero, one], n, rhs)?;
    Ok((f1, f2))
}

/// `B = −r p − s y`.
pub fn linear_ode(r: &Rational, s: &Rational, order: i32) -> OdeJet {
    let u = Grading::uniform();
    let b = WeightedPoly::from_terms(
        [(Monomial::var(Var::P), -r.clone()), (Monomial::var(Var::Y), -s.clone())],
        u,
        order,
    );
    OdeJet::new(b).expect("valid")
}

/// The solution surface `a f1(x) + b f2(x)` of `y'' + r y' + s y = 0`, in
/// the regular grading to weight `L`.
pub fn linear_ode_surface(r: &Rational, s: &Rational, order: i32) -> Result<SurfaceJet> {
    let g = Grading::regular();
    let n = order.max(1) as usize;
    let (f1, f2) = fundamental_solutions(r, s, n)?;
    let a = WeightedPoly::var(Var::A, g, order);
    let b = WeightedPoly::var(Var::B, g, order);
    let f = &(&a * &f1.to_poly(Var::X, g).promote(order)) + &(&b * &f2.to_poly(Var::X, g).promote(order));
    SurfaceJet::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::{int, rat};
    use num_traits::One;
    use proptest::prelude::*;

    fn u() -> Grading {
        Grading::uniform()
    }

    fn ode(terms: &[(Rational, [u16; 3])], l: i32) -> OdeJet {
        OdeJet::new(WeightedPoly::from_terms(
            terms.iter().map(|(c, [x, y, p])| (Monomial::new(0, 0, *x, *y, *p), c.clone())),
            u(),
            l,
        ))
        .unwrap()
    }

    fn surface(terms: &[(Rational, [u16; 3])], l: i32) -> SurfaceJet {
        SurfaceJet::new(WeightedPoly::from_terms(
            terms.iter().map(|(c, [a, b, x])| (Monomial::new(*a, *b, *x, 0, 0), c.clone())),
            u(),
            l,
        ))
        .unwrap()
    }

    fn factorial(n: u16) -> Rational {
        (1..=n).fold(Rational::one(), |acc, i| acc * int(i as i64))
    }

    #[test]
    fn zero_rhs_gives_flat_surface() {
        let f = ode_to_surface(&ode(&[], 6), 8).unwrap();
        assert_eq!(f, surface(&[(int(1), [1, 0, 0]), (int(1), [0, 1, 1])], 8));
        let (b, _) = surface_to_ode(&f).unwrap();
        assert!(b.rhs().is_zero());
    }

    #[test]
    fn harmonic_oscillator() {
        let f = ode_to_surface(&ode(&[(int(-1), [0, 1, 0])], 8), 10).unwrap();
        // a cos x + b sin x
        let mut terms = Vec::new();
        for n in 0..=9u16 {
            let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
            let c = int(sign) / factorial(n);
            if n % 2 == 0 {
                terms.push((c, [1, 0, n]));
            } else {
                terms.push((c, [0, 1, n]));
            }
        }
        assert_eq!(f, surface(&terms, 10));
    }

    #[test]
    fn logarithmic_solution() {
        // y'' = p², y = a − ln(1 − b x)
        let f = ode_to_surface(&ode(&[(int(1), [0, 0, 2])], 6), 8).unwrap();
        let mut terms = vec![(int(1), [1, 0, 0])];
        for n in 1..=4u16 {
            terms.push((rat(1, n as i64), [0, n, n]));
        }
        assert_eq!(f, surface(&terms, 8));
        let (b, data) = surface_to_ode(&f).unwrap();
        assert_eq!(b, ode(&[(int(1), [0, 0, 2])], 6));
        assert_eq!(data.a_series.extract(&[(Var::X, 0)]).to_string(), "y");
        assert_eq!(data.a_series.extract(&[(Var::X, 1)]).to_string(), "-p");
        assert_eq!(data.b_series.extract(&[(Var::X, 0)]).to_string(), "p");
    }

    #[test]
    fn normal_form_check_examples() {
        assert!(check_ode_normal(&ode(&[(int(1), [0, 0, 4])], 6)).normal);
        let r = check_ode_normal(&ode(&[(int(1), [1, 0, 2])], 6));
        assert!(!r.normal);
        assert_eq!(r.offending, vec![(1, 2)]);
        assert!(check_ode_normal(&ode(&[(int(1), [2, 0, 2])], 6)).normal);
    }

    #[test]
    fn first_invariant_examples() {
        assert!(tresse_first_invariant(&linear_ode(&int(2), &int(3), 6)).is_zero());
        assert_eq!(tresse_first_invariant(&ode(&[(int(1), [0, 0, 4])], 6)).to_string(), "24");
        assert!(tresse_first_invariant(&ode(&[(int(1), [2, 0, 3])], 6)).is_zero());
    }

    #[test]
    fn linear_surfaces_and_wronskians() {
        let f = linear_ode_surface(&int(0), &int(0), 8).unwrap();
        assert!(f.regular_remainder().is_zero());
        let (c, s) = fundamental_solutions(&int(0), &int(1), 10).unwrap();
        for n in 0..=10u16 {
            let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
            let expect = int(sign) / factorial(n);
            let (ec, es) = if n % 2 == 0 { (expect, int(0)) } else { (int(0), expect) };
            assert_eq!(c.coeff(n as usize), ec);
            assert_eq!(s.coeff(n as usize), es);
        }
        assert_eq!(wronskian(&s, &c), UniSeries::one(9));
        assert!(wronskian(&s, &s).is_zero());
        assert_eq!(wronskian(&UniSeries::t(5), &UniSeries::one(5)), UniSeries::one(4));
        let (f1, f2) = fundamental_solutions(&rat(1, 2), &int(-3), 8).unwrap();
        assert!(!wronskian(&f2, &f1).coeff(0).is_zero());
    }

    #[test]
    fn flatness_premises_force_zero() {
        let b = ode(&[(int(1), [2, 1, 2])], 6);
        assert_eq!(flatness_from_invariants(&b), (false, false));
        assert_eq!(flatness_from_invariants(&ode(&[], 6)), (true, true));
    }

    #[test]
    fn normalized_surfaces_give_normal_odes() {
        use crate::regnorm::normalize_jet;
        use rand::{Rng, SeedableRng};
        let g = Grading::regular();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..3 {
            let mut terms = Vec::new();
            for w in 3..=12u32 {
                for m in g.monomials_of_weight(&[Var::A, Var::B, Var::X], w) {
                    if rng.gen_bool(0.3) {
                        terms.push((m, rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))));
                    }
                }
            }
            let f = SurfaceJet::regular(&WeightedPoly::from_terms(terms, g, 12)).unwrap();
            let r = normalize_jet(&f).unwrap();
            let (b, data) = surface_to_ode(&r.normalized).unwrap();
            assert_eq!(b.order(), 4);
            assert!(data.phi_divisible_by_p2());
            assert_eq!(check_ode_normal(&b).offending, vec![]);
        }
    }

    fn arb_ode() -> impl Strategy<Value = OdeJet> {
        prop::collection::vec(((0u16..4, 0u16..3, 0u16..4), -3i64..4, 1i64..3), 0..6).prop_map(|ts| {
            OdeJet::new(WeightedPoly::from_terms(
                ts.into_iter().map(|((x, y, p), n, d)| (Monomial::new(0, 0, x, y, p), rat(n, d))),
                Grading::uniform(),
                6,
            ))
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ode_round_trip(b in arb_ode()) {
            let f = ode_to_surface(&b, 8).unwrap();
            prop_assert_eq!(f.order(), 8);
            let (back, _) = surface_to_ode(&f).unwrap();
            prop_assert_eq!(back, b);
        }

        #[test]
        fn flatness_premises_are_sufficient(b in arb_ode()) {
            let (premises, zero) = flatness_from_invariants(&b);
            prop_assert!(!premises || zero);
        }
    }
}
