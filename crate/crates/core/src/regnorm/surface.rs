use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jetring::{implicit_solve_system, Grading, Monomial, Rational, SeriesAssignment, Var, WeightedPoly};

/// A defining function `y = F(a, b, x)` known to weighted order `L`.
/// The type parameter is the weight of `a` in the grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceJet {
    f: WeightedPoly,
}

impl SurfaceJet {
    /// Checks that `F` depends only on `a, b, x` and vanishes at the origin.
    pub fn new(f: WeightedPoly) -> Result<Self> {
        for v in [Var::Y, Var::P] {
            if f.contains_var(v) {
                return Err(Error::UnexpectedVariable { var: v, context: "defining function F(a,b,x)" });
            }
        }
        if !f.constant_term().is_zero() {
            return Err(Error::BadForm("the surface must pass through the origin (F(0) = 0)".into()));
        }
        Ok(SurfaceJet { f })
    }

    /// `a + b x + f` in the regular grading.
    pub fn regular(f: &WeightedPoly) -> Result<Self> {
        let l = f.order();
        let g = Grading::regular();
        let base = WeightedPoly::from_terms(
            [(Monomial::var(Var::A), Rational::one()), (Monomial::new(0, 1, 1, 0, 0), Rational::one())],
            g,
            l,
        );
        Self::new(f.checked_add(&base)?)
    }

    pub fn f(&self) -> &WeightedPoly {
        &self.f
    }

    pub fn grading(&self) -> Grading {
        self.f.grading()
    }

    pub fn k(&self) -> u32 {
        self.f.grading().k()
    }

    pub fn order(&self) -> i32 {
        self.f.order()
    }

    /// `F − a − (weight-k part in b, x)`: the part beyond the model.
    pub fn remainder(&self) -> WeightedPoly {
        let k = self.k();
        self.f.filter(|m| self.grading().weight(m) > k)
    }

    /// `F − a − b x` for a regular surface.
    pub fn regular_remainder(&self) -> WeightedPoly {
        let g = self.grading();
        let l = self.order();
        let base = WeightedPoly::from_terms(
            [(Monomial::var(Var::A), Rational::one()), (Monomial::new(0, 1, 1, 0, 0), Rational::one())],
            g,
            l,
        );
        &self.f - &base
    }
}

impl fmt::Display for SurfaceJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y = {}", self.f)
    }
}

/// A product-preserving change of coordinates, given by the new
/// coordinates as series in the old ones: `X(x, y)`, `Y(x, y)`, `A(a, b)`,
/// `B(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    pub x: WeightedPoly,
    pub y: WeightedPoly,
    pub a: WeightedPoly,
    pub b: WeightedPoly,
}

impl PointMap {
    pub fn new(x: WeightedPoly, y: WeightedPoly, a: WeightedPoly, b: WeightedPoly) -> Result<Self> {
        let m = PointMap { x, y, a, b };
        let g = m.x.grading();
        for (name, p, allowed) in m.parts() {
            if p.grading() != g {
                return Err(Error::GradingMismatch);
            }
            if let Some(v) = p.variables().into_iter().find(|v| !allowed.contains(v)) {
                let _ = name;
                return Err(Error::UnexpectedVariable { var: v, context: "point map component" });
            }
            if !p.constant_term().is_zero() {
                return Err(Error::BadForm(format!("point map component {name} must fix the origin")));
            }
        }
        Ok(m)
    }

    fn parts(&self) -> [(&'static str, &WeightedPoly, [Var; 2]); 4] {
        [
            ("X", &self.x, [Var::X, Var::Y]),
            ("Y", &self.y, [Var::X, Var::Y]),
            ("A", &self.a, [Var::A, Var::B]),
            ("B", &self.b, [Var::A, Var::B]),
        ]
    }

    pub fn identity(grading: Grading, order: i32) -> Self {
        let v = |var| WeightedPoly::var(var, grading, order);
        PointMap { x: v(Var::X), y: v(Var::Y), a: v(Var::A), b: v(Var::B) }
    }

    pub fn grading(&self) -> Grading {
        self.x.grading()
    }

    pub fn order(&self) -> i32 {
        [&self.x, &self.y, &self.a, &self.b].iter().map(|p| p.order()).min().expect("four parts")
    }

    pub fn truncate(&self, order: i32) -> Self {
        PointMap {
            x: self.x.truncate(order),
            y: self.y.truncate(order),
            a: self.a.truncate(order),
            b: self.b.truncate(order),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.grading(), self.order())
    }

    /// Substitution taking every old coordinate to its image.
    pub fn as_assignment(&self) -> SeriesAssignment {
        SeriesAssignment::new()
            .with(Var::X, self.x.clone())
            .with(Var::Y, self.y.clone())
            .with(Var::A, self.a.clone())
            .with(Var::B, self.b.clone())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PointMap) -> Result<PointMap> {
        let s = self.as_assignment();
        Ok(PointMap {
            x: next.x.substitute(&s)?,
            y: next.y.substitute(&s)?,
            a: next.a.substitute(&s)?,
            b: next.b.substitute(&s)?,
        })
    }

    /// The inverse map, solved order by order. Each component must contain
    /// its own coordinate with a nonzero coefficient and the rest of its
    /// lowest-weight part must be triangular.
    pub fn inverse(&self) -> Result<PointMap> {
        let order = self.order();
        let g = self.grading();
        let (sx, sy) = invert_pair(&self.x, &self.y, Var::X, Var::Y, g, order)?;
        let (sa, sb) = invert_pair(&self.a, &self.b, Var::A, Var::B, g, order)?;
        Ok(PointMap { x: sx, y: sy, a: sa, b: sb })
    }
}

fn diagonal(p: &WeightedPoly, v: Var) -> Result<Rational> {
    let c = p.coeff(&Monomial::var(v));
    if c.is_zero() {
        return Err(Error::NotInvertible("point map component lacks its own coordinate"));
    }
    Ok(c)
}

/// Solves `(u, v)(s, t) = (U, V)` for `(s, t)` as series in `(U, V)`, with the
/// result written in the same variable names.
fn invert_pair(
    u: &WeightedPoly,
    v: &WeightedPoly,
    s: Var,
    t: Var,
    g: Grading,
    order: i32,
) -> Result<(WeightedPoly, WeightedPoly)> {
    let cu = diagonal(u, s)?;
    let cv = diagonal(v, t)?;
    let (iu, iv) = (cu.recip(), cv.recip());
    let start = vec![WeightedPoly::zero(g, order), WeightedPoly::zero(g, order)];
    let mut sol = implicit_solve_system(start, order, |cur, w| {
        let sub = SeriesAssignment::new().with(s, cur[0].clone()).with(t, cur[1].clone());
        let su = u.truncate(w).substitute(&sub)?;
        let sv = v.truncate(w).substitute(&sub)?;
        // s = (U − (u(s,t) − cu s)) / cu
        let ns = (&(&WeightedPoly::var(s, g, w) - &su) + &cur[0].scale(&cu)).scale(&iu);
        let nt = (&(&WeightedPoly::var(t, g, w) - &sv) + &cur[1].scale(&cv)).scale(&iv);
        Ok(vec![ns, nt])
    })?;
    let second = sol.pop().expect("two");
    let first = sol.pop().expect("two");
    Ok((first, second))
}

/// Transforms the surface by the map: returns `F*` with
/// `Y(x, F) = F*(A, B, X(x, F))` modulo weight `L + 1`.
pub fn apply_map(f: &SurfaceJet, m: &PointMap) -> Result<SurfaceJet> {
    let g = f.grading();
    if m.grading() != g {
        return Err(Error::GradingMismatch);
    }
    let order = f.order().min(m.order());
    let ff = f.f().truncate(order);
    let m = m.truncate(order);

    // old (a, b) as series in the new (a, b)
    let inv_ab = {
        let (sa, sb) = invert_pair(&m.a, &m.b, Var::A, Var::B, g, order)?;
        SeriesAssignment::new().with(Var::A, sa).with(Var::B, sb)
    };
    // F with old (a, b) eliminated; x is still the old x
    let g1 = ff.substitute(&inv_ab)?;
    let on_surface = SeriesAssignment::new().with(Var::Y, g1.clone());
    // Ξ(a, b, x) = X(x, G(a, b, x)); the new X is carried by the spare variable p
    let xi = m.x.substitute(&on_surface)?;
    let cx = diagonal(&m.x, Var::X)?;
    let icx = cx.recip();
    let old_x = crate::jetring::implicit_solve(WeightedPoly::zero(g, order), order, |cur, w| {
        let s = xi.truncate(w).substitute(&SeriesAssignment::new().with(Var::X, cur.clone()))?;
        Ok((&(&WeightedPoly::var(Var::P, g, w) - &s) + &cur.scale(&cx)).scale(&icx))
    })?;
    let at_old_x = SeriesAssignment::new().with(Var::X, old_x);
    let y_new = m.y.substitute(&on_surface)?.substitute(&at_old_x)?;
    let fstar = y_new.rename(&[(Var::P, Var::X)])?;
    let out = SurfaceJet::new(fstar)?;

    // residual: Y(x, F) − F*(A, B, X(x, F)) must vanish to the working order
    let lhs = m.y.substitute(&SeriesAssignment::new().with(Var::Y, ff.clone()))?;
    let x_on = m.x.substitute(&SeriesAssignment::new().with(Var::Y, ff))?;
    let rhs = out
        .f()
        .substitute(&SeriesAssignment::new().with(Var::A, m.a.clone()).with(Var::B, m.b.clone()).with(Var::X, x_on))?;
    let diff = lhs.checked_sub(&rhs)?;
    if let Some(w) = diff.min_weight() {
        return Err(Error::Invariant(format!("transformed surface fails the defining identity at weight {w}")));
    }
    Ok(out)
}
