//! Normal forms of regular surfaces `y = a + b x + f(a, b, x)`: the
//! weight-by-weight jet algorithm and the step-by-step geometric
//! construction.

mod geometric;
mod prelim;
mod surface;

use std::collections::BTreeMap;

pub use geometric::geometric_normalize;
pub use prelim::{finite_type, reduce, Reduced, TypeData, TypeVerdict};
pub use surface::{apply_map, PointMap, SurfaceJet};

use crate::cmoperator::{decompose, is_retained};
use crate::error::{Error, Result};
use crate::jetring::{Grading, Monomial, Var, WeightedPoly};

/// Which of the normal-form conditions (i)–(v) hold on a jet, plus whether
/// the weight-2 part is exactly `a + b x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalConditions {
    pub leading: bool,
    /// `f` vanishes on `x = 0` and on `b = 0`.
    pub i: bool,
    /// first derivatives of `f` across those planes vanish.
    pub ii: bool,
    /// no `a^i b^2 x^2`.
    pub iii: bool,
    /// no `a^i b^3 x^2`, `a^i b^2 x^3`.
    pub iv: bool,
    /// no `a^i b^3 x^3`.
    pub v: bool,
}

impl NormalConditions {
    pub fn all(&self) -> bool {
        self.leading && self.i && self.ii && self.iii && self.iv && self.v
    }

    /// The failing conditions by name.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.leading, "leading"),
            (self.i, "i"),
            (self.ii, "ii"),
            (self.iii, "iii"),
            (self.iv, "iv"),
            (self.v, "v"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

/// Evaluates the normal-form conditions on `F = a + b x + f`.
pub fn check_normal_conditions(f: &SurfaceJet) -> NormalConditions {
    let rem = f.regular_remainder();
    let has = |pred: &dyn Fn(u16, u16) -> bool| {
        rem.monomials().any(|m| pred(m.exp(Var::B), m.exp(Var::X)))
    };
    let g = f.grading();
    NormalConditions {
        leading: g == Grading::regular() && rem.monomials().all(|m| g.weight(m) >= 3),
        i: !has(&|j, l| j == 0 || l == 0),
        ii: !has(&|j, l| j == 1 || l == 1),
        iii: !has(&|j, l| (j, l) == (2, 2)),
        iv: !has(&|j, l| (j, l) == (3, 2) || (j, l) == (2, 3)),
        v: !has(&|j, l| (j, l) == (3, 3)),
    }
}

/// Outcome of a normalization.
#[derive(Clone, Debug)]
pub struct NormalFormReport {
    pub normalized: SurfaceJet,
    /// Map taking the (reduced) input to `normalized`.
    pub transform: PointMap,
    /// Reduction applied before `transform`, graded by total degree, when
    /// the input was not already of the form `a + b x + …`.
    pub preliminary: Option<PointMap>,
    /// Monomials removed at each weight.
    pub eliminated_by_weight: BTreeMap<u32, Vec<Monomial>>,
    pub conditions: NormalConditions,
}

/// Weight-by-weight normalization of `F = a + b x + (weight ≥ 3)`.
pub fn normalize_jet(f: &SurfaceJet) -> Result<NormalFormReport> {
    let g = Grading::regular();
    if f.grading() != g {
        return Err(Error::GradingMismatch);
    }
    let first = check_normal_conditions(f);
    if !first.leading {
        return Err(Error::BadForm("expected a + b x + (terms of weight ≥ 3)".into()));
    }
    let l = f.order();
    let mut cur = f.clone();
    let mut transform = PointMap::identity(g, l);
    let mut eliminated = BTreeMap::new();
    for nu in 3..=l.max(2) as u32 {
        let part = cur.regular_remainder().component(nu);
        if part.is_zero() {
            continue;
        }
        let (v, normal) = decompose(&part.promote(nu as i32))?;
        let removed: Vec<Monomial> = part.monomials().filter(|m| !is_retained(m)).copied().collect();
        if !removed.is_empty() {
            eliminated.insert(nu, removed);
        }
        if v.is_zero() {
            debug_assert_eq!(normal, part.promote(nu as i32));
            continue;
        }
        let phi = PointMap::new(
            &WeightedPoly::var(Var::X, g, l) + &v.xi.promote(l),
            &WeightedPoly::var(Var::Y, g, l) + &v.eta.promote(l),
            &WeightedPoly::var(Var::A, g, l) + &v.alpha.promote(l),
            &WeightedPoly::var(Var::B, g, l) + &v.beta.promote(l),
        )?;
        cur = apply_map(&cur, &phi)?;
        transform = transform.then(&phi)?;
        let now = cur.regular_remainder().component(nu);
        if now != normal.promote(l) {
            return Err(Error::Invariant(format!("weight {nu} not normalized")));
        }
    }
    let conditions = check_normal_conditions(&cur);
    if !conditions.all() {
        return Err(Error::Invariant(format!(
            "normalized jet violates conditions {:?}",
            conditions.failures()
        )));
    }
    Ok(NormalFormReport { normalized: cur, transform, preliminary: None, eliminated_by_weight: eliminated, conditions })
}

/// Reduces an arbitrary defining polynomial and normalizes it to weighted
/// order `order`.
pub fn normalize(f: &WeightedPoly, order: i32) -> Result<NormalFormReport> {
    let reduced = reduce(f, order)?;
    if !reduced.type_data.is_regular() {
        return Err(Error::NotRegular { k: reduced.type_data.k });
    }
    let mut report = normalize_jet(&reduced.jet)?;
    if !reduced.map.is_identity() {
        report.preliminary = Some(reduced.map);
    }
    Ok(report)
}
