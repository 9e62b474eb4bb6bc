//! The geometric normalization: a fixed sequence of coordinate changes,
//! each killing one family of terms, with univariate series ODEs fixing the
//! scalings along the distinguished curve.

use std::collections::BTreeMap;

use num_traits::One;

use super::{apply_map, check_normal_conditions, NormalFormReport, PointMap, SurfaceJet};
use crate::error::{Error, Result};
use crate::jetring::{
    implicit_solve_var, int, rat, solve_ode_series, solve_ode_system, Grading, Rational, SeriesAssignment,
    UniSeries, Var, WeightedPoly,
};


struct Ctx {
    g: Grading,
    l: i32,
    /// Degree of the univariate series in `a` or `y` (weight `2 · n`).
    n: usize,
}

impl Ctx {
    fn var(&self, v: Var) -> WeightedPoly {
        WeightedPoly::var(v, self.g, self.l)
    }

    fn identity(&self) -> PointMap {
        PointMap::identity(self.g, self.l)
    }

    /// Coefficient of `b^j x^l` in `f` as a series in `a`, padded with zeros
    /// beyond what the jet determines.
    fn coefficient(&self, f: &WeightedPoly, j: u16, l: u16) -> Result<UniSeries> {
        UniSeries::from_poly(&f.extract(&[(Var::B, j), (Var::X, l)]), Var::A, self.n)
    }

    fn poly(&self, s: &UniSeries, v: Var) -> WeightedPoly {
        s.to_poly(v, self.g).promote(self.l)
    }
}

fn step<T>(n: u8, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Step { step: n, source: Box::new(e) })
}

/// Solution `a(x, y)` of `y = a + f(a, 0, x)`.
fn a_of_xy(ctx: &Ctx, f: &WeightedPoly) -> Result<WeightedPoly> {
    let rhs = &ctx.var(Var::Y) - &f.set_zero(Var::B);
    implicit_solve_var(&rhs, Var::A, ctx.l)
}

/// `A = a + f(a, 0, 0)`: the curve `x = b = 0, y = a` becomes `Y = A`.
fn straighten_curve(ctx: &Ctx, f: &WeightedPoly) -> PointMap {
    let mut m = ctx.identity();
    m.a = &m.a + &f.restrict_zero(&[Var::B, Var::X]);
    m
}

/// `A = a + f(a, b, 0)`, `Y = y − f(a(x, y), 0, x)`.
fn clear_pure_terms(ctx: &Ctx, f: &WeightedPoly) -> Result<PointMap> {
    let mut m = ctx.identity();
    m.a = &m.a + &f.set_zero(Var::X);
    let a = a_of_xy(ctx, f)?;
    let g = f.set_zero(Var::B).substitute(&SeriesAssignment::new().with(Var::A, a))?;
    m.y = &m.y - &g;
    Ok(m)
}

/// `B = (1 + f_bx(a, 0, 0)) b`.
fn rescale_b(ctx: &Ctx, f: &WeightedPoly) -> PointMap {
    let mut m = ctx.identity();
    let c = f.extract(&[(Var::B, 1), (Var::X, 1)]).promote(ctx.l);
    m.b = &m.b + &(&c * &ctx.var(Var::B));
    m
}

/// `B = b + f_x(a, b, 0)`.
fn clear_linear_in_x(ctx: &Ctx, f: &WeightedPoly) -> PointMap {
    let mut m = ctx.identity();
    m.b = &m.b + &f.partial(Var::X, 1).set_zero(Var::X).promote(ctx.l);
    m
}

/// `X = x + f_b(a(x, y), 0, x)`.
fn clear_linear_in_b(ctx: &Ctx, f: &WeightedPoly) -> Result<PointMap> {
    let mut m = ctx.identity();
    let a = a_of_xy(ctx, f)?;
    let fb = f.partial(Var::B, 1).set_zero(Var::B).promote(ctx.l);
    m.x = &m.x + &fb.substitute(&SeriesAssignment::new().with(Var::A, a))?;
    Ok(m)
}

/// Inverse of `x = C(Y) X, b = B / C(A)`: shifts the `b² x²` coefficient by `C'/C`.
fn scale_by(ctx: &Ctx, c: &UniSeries) -> Result<PointMap> {
    let mut m = ctx.identity();
    m.x = &m.x * &ctx.poly(&c.recip()?, Var::Y);
    m.b = &m.b * &ctx.poly(c, Var::A);
    Ok(m)
}

/// Solves `C'/C = −f22` with `C(0) = 1`.
fn kill_f22(ctx: &Ctx, f: &WeightedPoly) -> Result<UniSeries> {
    let f22 = ctx.coefficient(f, 2, 2)?;
    solve_ode_series(&[Rational::one()], ctx.n, |h| Ok(h[0].mul(&f22.neg())))
}

/// The chain system: `C'/C = −(3/2) p'π' − f22`, `p'' − p'²π' = 2 f32 / C`,
/// `π'' + π'² p' = 2 C f23`, all data vanishing at 0 except `C(0) = 1`.
fn chain(ctx: &Ctx, f: &WeightedPoly) -> Result<(UniSeries, UniSeries, UniSeries)> {
    let f22 = ctx.coefficient(f, 2, 2)?;
    let f23 = ctx.coefficient(f, 2, 3)?;
    let f32 = ctx.coefficient(f, 3, 2)?;
    let zero = Rational::from_integer(0.into());
    let sol = solve_ode_system(
        &[1, 2, 2],
        &[vec![Rational::one()], vec![zero.clone(), zero.clone()], vec![zero.clone(), zero]],
        ctx.n,
        |h| {
            let c = &h[0][0];
            let (dp, dpi) = (&h[1][1], &h[2][1]);
            let dc = c.mul(&dp.mul(dpi).scale(&rat(-3, 2)).sub(&f22));
            let ddp = dp.mul(dp).mul(dpi).add(&f32.mul(&c.recip()?).scale(&int(2)));
            let ddpi = dpi.mul(dpi).mul(dp).neg().add(&f23.mul(c).scale(&int(2)));
            Ok(vec![dc, ddp, ddpi])
        },
    )?;
    let mut it = sol.into_iter();
    Ok((it.next().expect("C"), it.next().expect("p"), it.next().expect("π")))
}

/// `Σ_{r ≥ 0} w^r` for `w` of positive weight.
fn geometric_sum(ctx: &Ctx, w: &WeightedPoly) -> WeightedPoly {
    let mut acc = WeightedPoly::one(ctx.g, ctx.l);
    let mut term = acc.clone();
    loop {
        term = &term * w;
        if term.is_zero() {
            return acc;
        }
        acc = &acc + &term;
    }
}

/// The chain-straightening map in closed form, with `q' = 1 + p'π` and `ψ = q − πp`.
fn chain_map(ctx: &Ctx, p: &UniSeries, pi: &UniSeries) -> Result<PointMap> {
    let q = UniSeries::one(ctx.n).add(&p.derivative().mul(pi)).integral(Rational::from_integer(0.into()));
    let psi = q.sub(&pi.mul(p));
    let (x, b) = (ctx.var(Var::X), ctx.var(Var::B));
    let dpi_y = ctx.poly(&pi.derivative(), Var::Y);
    let dp_a = ctx.poly(&p.derivative(), Var::A);
    let inv_x = geometric_sum(ctx, &(&x * &dpi_y));
    let inv_b = geometric_sum(ctx, &-(&b * &dp_a));
    let x_over = &x * &inv_x;
    let b_over = &b * &inv_b;
    PointMap::new(
        &ctx.poly(p, Var::Y) + &x_over,
        &ctx.poly(&q, Var::Y) + &(&x_over * &ctx.poly(pi, Var::Y)),
        &ctx.poly(&psi, Var::A) - &(&b_over * &ctx.poly(p, Var::A)),
        &ctx.poly(pi, Var::A) + &b_over,
    )
}

/// Inverse of `x = √h'(Y) X, y = h(Y), a = h(A), b = √h'(A) B` with
/// `h''' − (3/2) h''²/h' + 12 f33(h) h'³ = 0`, `h(0) = h''(0) = 0`, `h'(0) = 1`.
fn kill_f33(ctx: &Ctx, f: &WeightedPoly) -> Result<PointMap> {
    let f33 = ctx.coefficient(f, 3, 3)?;
    let init = [Rational::from_integer(0.into()), Rational::one(), Rational::from_integer(0.into())];
    let h = solve_ode_series(&init, ctx.n, |d| {
        let (h, h1, h2) = (&d[0], &d[1], &d[2]);
        let first = h2.mul(h2).mul(&h1.recip()?).scale(&rat(3, 2));
        let second = f33.compose(h)?.mul(&h1.mul(h1).mul(h1)).scale(&int(12));
        Ok(first.sub(&second))
    })?;
    let s = h.derivative().promote(ctx.n).sqrt()?;
    let old = PointMap::new(
        &ctx.var(Var::X) * &ctx.poly(&s, Var::Y),
        ctx.poly(&h, Var::Y),
        ctx.poly(&h, Var::A),
        &ctx.var(Var::B) * &ctx.poly(&s, Var::A),
    )?;
    old.inverse()
}

struct Run {
    cur: SurfaceJet,
    transform: PointMap,
}

impl Run {
    fn apply(&mut self, n: u8, m: PointMap) -> Result<()> {
        if m.is_identity() {
            return Ok(());
        }
        self.cur = step(n, apply_map(&self.cur, &m))?;
        self.transform = step(n, self.transform.then(&m))?;
        Ok(())
    }

    fn rem(&self) -> WeightedPoly {
        self.cur.regular_remainder()
    }
}

/// Normalizes a regular jet `a + b x + (weight ≥ 3)` by the geometric steps:
/// straighten a curve, clear the pure and linear parts, fix the `b² x²`,
/// `b³ x²`, `b² x³` coefficients through the chain equations and the
/// `b³ x³` coefficient through a third-order series ODE. Sweeps repeat until
/// the conditions hold.
pub fn geometric_normalize(f: &SurfaceJet) -> Result<NormalFormReport> {
    run_sweeps(f).map(|(r, _)| r)
}

fn run_sweeps(f: &SurfaceJet) -> Result<(NormalFormReport, usize)> {
    let g = Grading::regular();
    if f.grading() != g || !check_normal_conditions(f).leading {
        return Err(Error::BadForm("expected a + b x + (terms of weight ≥ 3) in the regular grading".into()));
    }
    let l = f.order();
    let ctx = Ctx { g, l, n: (l.max(0) / 2) as usize };
    let mut run = Run { cur: f.clone(), transform: PointMap::identity(g, l) };
    // The chain equations only see the (2,2), (2,3), (3,2) coefficients;
    // higher terms feed back through p and π, so each sweep fixes at least
    // one more order in a and a bounded number of sweeps suffices.
    let max_sweeps = l.max(3) as usize;
    let mut sweeps = 0;
    while sweeps < max_sweeps && !check_normal_conditions(&run.cur).all() {
        sweeps += 1;
        run.apply(1, straighten_curve(&ctx, &run.rem()))?;
        let m = step(2, clear_pure_terms(&ctx, &run.rem()))?;
        run.apply(2, m)?;
        run.apply(3, rescale_b(&ctx, &run.rem()))?;
        run.apply(4, clear_linear_in_x(&ctx, &run.rem()))?;
        let m = step(5, clear_linear_in_b(&ctx, &run.rem()))?;
        run.apply(5, m)?;

        let (c, p, pi) = step(8, chain(&ctx, &run.rem()))?;
        let m = step(6, scale_by(&ctx, &c))?;
        run.apply(6, m)?;
        let m = step(8, chain_map(&ctx, &p, &pi))?;
        run.apply(8, m)?;
        let c = step(6, kill_f22(&ctx, &run.rem()))?;
        let m = step(6, scale_by(&ctx, &c))?;
        run.apply(6, m)?;
        let m = step(7, kill_f33(&ctx, &run.rem()))?;
        run.apply(7, m)?;
    }
    let conditions = check_normal_conditions(&run.cur);
    if !conditions.all() {
        return Err(Error::Invariant(format!(
            "geometric normalization left conditions {:?} unsatisfied",
            conditions.failures()
        )));
    }
    let before = f.regular_remainder();
    let mut eliminated = BTreeMap::new();
    for (w, part) in before.weighted_components() {
        let gone: Vec<_> = part.monomials().filter(|m| !crate::cmoperator::is_retained(m)).copied().collect();
        if !gone.is_empty() {
            eliminated.insert(w, gone);
        }
    }
    let report = NormalFormReport {
        normalized: run.cur,
        transform: run.transform,
        preliminary: None,
        eliminated_by_weight: eliminated,
        conditions,
    };
    Ok((report, sweeps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::Monomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g() -> Grading {
        Grading::regular()
    }

    fn jet(terms: &[(Rational, [u16; 3])], l: i32) -> SurfaceJet {
        let f = WeightedPoly::from_terms(
            terms.iter().map(|(c, [a, b, x])| (Monomial::new(*a, *b, *x, 0, 0), c.clone())),
            g(),
            l,
        );
        SurfaceJet::regular(&f).unwrap()
    }

    #[test]
    fn flat_surface_is_unchanged() {
        let f = jet(&[], 8);
        let r = geometric_normalize(&f).unwrap();
        assert_eq!(r.normalized, f);
        assert!(r.transform.is_identity());
    }

    #[test]
    fn f22_term_alone() {
        let f = jet(&[(int(3), [1, 2, 2])], 8);
        let r = geometric_normalize(&f).unwrap();
        assert!(r.conditions.all());
        assert_eq!(apply_map(&f, &r.transform).unwrap(), r.normalized);
    }

    #[test]
    fn each_step_family() {
        // one representative per family the steps address
        let cases: Vec<Vec<(Rational, [u16; 3])>> = vec![
            vec![(int(1), [2, 0, 0])],
            vec![(int(2), [0, 3, 0]), (int(-1), [1, 0, 2])],
            vec![(int(1), [1, 1, 1])],
            vec![(rat(1, 2), [0, 2, 1])],
            vec![(int(1), [0, 1, 2])],
            vec![(int(1), [0, 3, 2]), (int(-2), [0, 2, 3])],
            vec![(rat(1, 3), [0, 3, 3])],
            vec![(int(1), [1, 3, 2]), (int(1), [1, 3, 3])],
        ];
        for terms in cases {
            let f = jet(&terms, 8);
            let r = geometric_normalize(&f).unwrap();
            assert!(r.conditions.all(), "{f}");
            assert_eq!(apply_map(&f, &r.transform).unwrap(), r.normalized);
        }
    }

    #[test]
    fn random_jets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let mut terms = Vec::new();
            for w in 3..=8u32 {
                for m in g().monomials_of_weight(&[Var::A, Var::B, Var::X], w) {
                    if rng.gen_bool(0.4) {
                        let e = m.exps();
                        terms.push((rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)), [e[0], e[1], e[2]]));
                    }
                }
            }
            let f = jet(&terms, 8);
            let r = geometric_normalize(&f).unwrap();
            assert!(r.conditions.all());
        }
    }
}
