//! Normal form of weighted jets of singular surfaces
//! `y = a + b^m x^n + Σ γ_j b^j x^(k−j) + …` with `k = m + n > 2`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cmoperator::{apply_t_model, field_basis, poly_basis, poly_coordinates, Component, VFieldJet};
use crate::error::{Error, Result};
use crate::jetring::{Grading, Monomial, Rational, Var, WeightedPoly};
use crate::linalg::Matrix;
use crate::regnorm::{apply_map, reduce, PointMap, SurfaceJet};

pub use crate::regnorm::{finite_type, Reduced, TypeData, TypeVerdict};

/// Monomials that the normal form forbids at weight `nu` for the leading
/// term `b^m x^n`, sorted.
pub fn forbidden(t: &TypeData, nu: u32) -> Vec<Monomial> {
    let (k, m, n) = (t.k, t.m, t.n);
    let mut out = Vec::new();
    let mut push = |i: u32, j: u32, l: u32| out.push(Monomial::new(i as u16, j as u16, l as u16, 0, 0));
    for i in 0..=nu / k {
        // a^i x^j, a^i b^j
        let j = nu - k * i;
        push(i, 0, j);
        push(i, j, 0);
        // a^i b^m x^(n−1+j), a^i b^(m−1+j) x^n with k(i+1) + j − 1 = ν
        if let Some(j) = (nu + 1).checked_sub(k * (i + 1)) {
            push(i, m, n - 1 + j);
            push(i, m - 1 + j, n);
        }
        if k * (i + 2) == nu {
            push(i, 2 * m, 2 * n);
        }
        if k * (i + 3) == nu {
            push(i, 3 * m, 3 * n);
        }
        if m == 1 && k * i + 1 + 2 * n == nu {
            push(i, 1, 2 * n);
        }
        if n == 1 && k * i + 2 * m + 1 == nu {
            push(i, 2 * m, 1);
        }
    }
    out.retain(|mo| !mo.is_one());
    out.sort();
    out.dedup();
    out
}

/// Reads `(k, m, n, γ)` off a jet already in the reduced form.
pub fn reduced_type(f: &SurfaceJet) -> Result<TypeData> {
    let g = f.grading();
    let k = g.k();
    let bad = |msg: &str| Error::BadForm(format!("expected a + b^m x^n + Σ γ_j b^j x^(k−j) + (weight > k): {msg}"));
    if f.f().min_weight().is_some_and(|w| w < k) {
        return Err(bad("terms below the leading weight"));
    }
    let lead = &f.f().component(k) - &WeightedPoly::var(Var::A, g, f.order()).component(k);
    let mut mixed: Vec<(u32, Rational)> = Vec::new();
    for (mo, c) in lead.terms() {
        let j = mo.exp(Var::B) as u32;
        if mo.exp(Var::A) > 0 || j == 0 || j == k {
            return Err(bad("weight-k part must be a plus mixed b^j x^(k−j) terms"));
        }
        mixed.push((j, c.clone()));
    }
    mixed.sort_by_key(|(j, _)| *j);
    let Some((m, lead_c)) = mixed.first().cloned() else {
        return Err(bad("no leading term"));
    };
    if !lead_c.is_one() {
        return Err(bad("leading coefficient must be 1"));
    }
    Ok(TypeData { k, m, n: k - m, gammas: mixed[1..].to_vec() })
}

/// Result of the singular normal-form check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularNormalCheck {
    /// The weight-`k` part is `a` plus the model.
    pub leading: bool,
    /// Forbidden monomials present, with their weight.
    pub offending: Vec<(u32, Monomial)>,
}

impl SingularNormalCheck {
    pub fn is_normal(&self) -> bool {
        self.leading && self.offending.is_empty()
    }
}

/// Checks a jet against the normal form for `t` at weights `k < ν ≤ order`.
pub fn check_singular_normal(f: &SurfaceJet, t: &TypeData, order: i32) -> SingularNormalCheck {
    let g = Grading::singular(t.k);
    let leading = f.grading() == g
        && f.f().min_weight().map_or(true, |w| w >= t.k)
        && f.f().component(t.k) == (&WeightedPoly::var(Var::A, g, f.order()) + &t.model(f.order())).component(t.k);
    let mut offending = Vec::new();
    for nu in t.k + 1..=order.max(0) as u32 {
        let part = f.f().component(nu);
        for mo in forbidden(t, nu) {
            if !part.coeff(&mo).is_zero() {
                offending.push((nu, mo));
            }
        }
    }
    SingularNormalCheck { leading, offending }
}

/// Outcome of a singular normalization.
#[derive(Clone, Debug)]
pub struct SingularNormalReport {
    pub normalized: SurfaceJet,
    /// Map taking the reduced input to `normalized`.
    pub transform: PointMap,
    /// Reduction applied before `transform`, graded by total degree.
    pub preliminary: Option<PointMap>,
    pub type_data: TypeData,
    /// Forbidden monomials present at each weight before elimination.
    pub eliminated_by_weight: BTreeMap<u32, Vec<Monomial>>,
}

fn rank_component(c: Component) -> u8 {
    match c {
        Component::Alpha => 0,
        Component::Beta => 1,
        Component::Eta => 2,
        Component::Xi => 3,
    }
}

/// Writes the weight-`nu` part as `−T(v) + normal` with `normal` free of
/// forbidden monomials. Allowed monomials come first in the solve, then the
/// fields in the order α, β, η, ξ; free parameters are zero.
fn split_weight(t: &TypeData, nu: u32, part: &WeightedPoly) -> Result<(VFieldJet, WeightedPoly)> {
    let g = Grading::singular(t.k);
    let ell = nu as i32;
    let model = t.model(ell);
    let codomain = poly_basis(g, nu);
    let banned = forbidden(t, nu);
    let allowed: Vec<Monomial> = codomain.iter().filter(|m| !banned.contains(m)).copied().collect();
    let mut domain = field_basis(g, nu);
    domain.sort_by_key(|e| rank_component(e.component));

    let unit = |m: &Monomial| codomain.iter().map(|c| if c == m { Rational::one() } else { Rational::zero() }).collect();
    let mut cols: Vec<Vec<Rational>> = allowed.iter().map(unit).collect();
    for e in &domain {
        let v = VFieldJet::from_coordinates(&[*e], &[Rational::one()], g, ell);
        let image = apply_t_model(&v, &model, ell);
        cols.push(poly_coordinates(&image, &codomain)?.into_iter().map(|c| -c).collect());
    }
    let rhs = poly_coordinates(&part.promote(ell), &codomain)?;
    let z = Matrix::from_columns(codomain.len(), &cols).solve(&rhs).ok_or(Error::Infeasible { weight: nu })?;
    let (zn, zv) = z.split_at(allowed.len());
    let normal = WeightedPoly::from_terms(allowed.iter().copied().zip(zn.iter().cloned()), g, ell);
    let v = VFieldJet::from_coordinates(&domain, zv, g, ell);
    Ok((v, normal))
}

/// Weight-by-weight normalization of a jet in reduced form, from weight
/// `k + 1` up to its order.
pub fn normalize_singular_jet(f: &SurfaceJet) -> Result<SingularNormalReport> {
    let t = reduced_type(f)?;
    if t.k <= 2 {
        return Err(Error::BadForm("type 2 surfaces are regular".into()));
    }
    let g = f.grading();
    let l = f.order();
    let mut cur = f.clone();
    let mut transform = PointMap::identity(g, l);
    let mut eliminated = BTreeMap::new();
    for nu in t.k + 1..=l.max(0) as u32 {
        let part = cur.f().component(nu);
        let banned = forbidden(&t, nu);
        let present: Vec<Monomial> = part.monomials().filter(|m| banned.contains(m)).copied().collect();
        if present.is_empty() {
            continue;
        }
        eliminated.insert(nu, present);
        let (v, normal) = split_weight(&t, nu, &part)?;
        let phi = PointMap::new(
            &WeightedPoly::var(Var::X, g, l) + &v.xi.promote(l),
            &WeightedPoly::var(Var::Y, g, l) + &v.eta.promote(l),
            &WeightedPoly::var(Var::A, g, l) + &v.alpha.promote(l),
            &WeightedPoly::var(Var::B, g, l) + &v.beta.promote(l),
        )?;
        cur = apply_map(&cur, &phi)?;
        transform = transform.then(&phi)?;
        if cur.f().component(nu) != normal.promote(l) {
            return Err(Error::Invariant(format!("weight {nu} not normalized")));
        }
    }
    let check = check_singular_normal(&cur, &t, l);
    if !check.is_normal() {
        return Err(Error::Invariant(format!("normalized jet keeps forbidden terms {:?}", check.offending)));
    }
    Ok(SingularNormalReport {
        normalized: cur,
        transform,
        preliminary: None,
        type_data: t,
        eliminated_by_weight: eliminated,
    })
}

/// Reduces an arbitrary defining polynomial and normalizes it to weighted
/// order `order`.
pub fn normalize_singular(f: &WeightedPoly, order: i32) -> Result<SingularNormalReport> {
    let reduced = reduce(f, order)?;
    let mut report = normalize_singular_jet(&reduced.jet)?;
    if !reduced.map.is_identity() {
        report.preliminary = Some(reduced.map);
    }
    Ok(report)
}
