//! Preliminary reduction of `y = F(a, b, x)` to `y = a + b^m x^n + Σ γ_j b^j x^(k−j) + …`.

use num_traits::{One, Zero};

use super::surface::{apply_map, PointMap, SurfaceJet};
use crate::error::{Error, Result};
use crate::jetring::{Grading, Monomial, Rational, Var, WeightedPoly};

/// Finite-type data of a reduced surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeData {
    pub k: u32,
    pub m: u32,
    pub n: u32,
    /// `(j, γ_j)` for the remaining weight-`k` terms `γ_j b^j x^(k−j)`, `j > m`.
    pub gammas: Vec<(u32, Rational)>,
}

impl TypeData {
    pub fn is_regular(&self) -> bool {
        self.k == 2
    }

    /// The weight-`k` model polynomial `b^m x^n + Σ γ_j b^j x^(k−j)` in
    /// the singular grading of type `k`.
    pub fn model(&self, order: i32) -> WeightedPoly {
        let g = Grading::singular(self.k);
        let mut terms = vec![(Monomial::new(0, self.m as u16, self.n as u16, 0, 0), Rational::one())];
        for (j, c) in &self.gammas {
            terms.push((Monomial::new(0, *j as u16, (self.k - j) as u16, 0, 0), c.clone()));
        }
        WeightedPoly::from_terms(terms, g, order)
    }
}

/// Outcome of the finite-type scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeVerdict {
    Finite(TypeData),
    /// No mixed term was found up to this total degree.
    Undetermined { up_to: u32 },
}

/// Result of the preliminary reduction.
#[derive(Clone, Debug)]
pub struct Reduced {
    /// The reduced surface in the singular grading of its type.
    pub jet: SurfaceJet,
    /// The reducing map, graded by total degree.
    pub map: PointMap,
    pub type_data: TypeData,
}

fn check_input(f: &WeightedPoly) -> Result<()> {
    for v in [Var::Y, Var::P] {
        if f.contains_var(v) {
            return Err(Error::UnexpectedVariable { var: v, context: "defining function F(a,b,x)" });
        }
    }
    if !f.constant_term().is_zero() {
        return Err(Error::BadForm("the surface must pass through the origin (F(0) = 0)".into()));
    }
    if f.coeff(&Monomial::var(Var::A)).is_zero() {
        return Err(Error::NotAGraph);
    }
    Ok(())
}

/// Absorbs the pure `(a, b)` part into `A` and the pure `x` part into `Y`,
/// treating `F` as an exact polynomial truncated at total degree `degree`.
fn absorb(f: &WeightedPoly, degree: i32) -> Result<(SurfaceJet, PointMap)> {
    check_input(f)?;
    let u = Grading::uniform();
    let exact = WeightedPoly::from_terms(f.terms().map(|(m, c)| (*m, c.clone())), u, degree);
    let ab = exact.set_zero(Var::X);
    let xs = exact.restrict_zero(&[Var::A, Var::B]);
    let map = PointMap::new(
        WeightedPoly::var(Var::X, u, degree),
        &WeightedPoly::var(Var::Y, u, degree) - &xs,
        ab,
        WeightedPoly::var(Var::B, u, degree),
    )?;
    let jet = apply_map(&SurfaceJet::new(exact)?, &map)?;
    Ok((jet, map))
}

fn scan_type(f: &WeightedPoly) -> Option<TypeData> {
    let mut best: Option<(u32, u32)> = None;
    for (m, _) in f.terms() {
        let (i, j, l) = (m.exp(Var::A), m.exp(Var::B) as u32, m.exp(Var::X) as u32);
        if i != 0 || j == 0 || l == 0 {
            continue;
        }
        let key = (j + l, j);
        if best.map_or(true, |b| key < b) {
            best = Some(key);
        }
    }
    let (k, m) = best?;
    let n = k - m;
    let lead = f.coeff(&Monomial::new(0, m as u16, n as u16, 0, 0));
    let gammas = (m + 1..k)
        .filter_map(|j| {
            let c = f.coeff(&Monomial::new(0, j as u16, (k - j) as u16, 0, 0));
            // value after the leading coefficient is scaled to 1 (see `reduce`)
            let scale = match (m, n) {
                (1, _) => pow(&lead, j),
                (_, 1) => pow(&lead, k - j),
                _ => lead.clone(),
            };
            (!c.is_zero()).then(|| (j, c / scale))
        })
        .collect();
    Some(TypeData { k, m, n, gammas })
}

fn pow(c: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * c)
}

/// Finite type of `y = F(a, b, x)`, looking at mixed terms up to total
/// degree `max_degree` after the pure `(a, b)` part has been absorbed.
pub fn finite_type(f: &WeightedPoly, max_degree: u32) -> Result<TypeVerdict> {
    let (jet, _) = absorb(f, max_degree as i32)?;
    Ok(match scan_type(jet.f()) {
        Some(t) => TypeVerdict::Finite(t),
        None => TypeVerdict::Undetermined { up_to: max_degree },
    })
}

/// Brings `F` to the form `a + b^m x^n + Σ_{j>m} γ_j b^j x^(k−j) + (weight > k)`
/// and regrades it to weighted order `order` in the singular grading of
/// type `k`. The input is treated as an exact polynomial.
pub fn reduce(f: &WeightedPoly, order: i32) -> Result<Reduced> {
    let u = Grading::uniform();
    let (jet, absorb_map) = absorb(f, order)?;
    let t = scan_type(jet.f()).ok_or(Error::InfiniteType { up_to: order.max(0) as u32 })?;
    let lead = jet.f().coeff(&Monomial::new(0, t.m as u16, t.n as u16, 0, 0));
    let mut scale = PointMap::identity(u, order);
    if t.m == 1 {
        scale.b = scale.b.scale(&lead);
    } else if t.n == 1 {
        scale.x = scale.x.scale(&lead);
    } else {
        let inv = lead.recip();
        scale.y = scale.y.scale(&inv);
        scale.a = scale.a.scale(&inv);
    }
    let scaled = apply_map(&jet, &scale)?;
    let map = absorb_map.then(&scale)?;
    let t = scan_type(scaled.f()).expect("scaling keeps the type");
    let regraded = scaled.f().regrade(Grading::singular(t.k), order)?;
    Ok(Reduced { jet: SurfaceJet::new(regraded)?, map, type_data: t })
}
