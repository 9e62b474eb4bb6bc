use super::{SeriesAssignment, Var, WeightedPoly};
use crate::error::{Error, Result};

/// Solves the fixed-point system `s = rhs(s)` order by order in weight.
///
/// `rhs(s, w)` must return the right-hand sides known at least to weight
/// `w`, given unknowns known to weight `w`. The right-hand side must be
/// contractive: its weight-`w` part may only depend on lower-weight parts of
/// the unknowns, possibly through a triangular chain between components.
/// Every solution is checked by plugging it back in at full order.
pub fn implicit_solve_system<F>(
    initial: Vec<WeightedPoly>,
    order: i32,
    mut rhs: F,
) -> Result<Vec<WeightedPoly>>
where
    F: FnMut(&[WeightedPoly], i32) -> Result<Vec<WeightedPoly>>,
{
    let passes = initial.len() + 2;
    let mut s: Vec<WeightedPoly> = initial.iter().map(|p| p.truncate(order)).collect();
    for w in 0..=order {
        let mut settled = false;
        for _ in 0..passes {
            let cur: Vec<WeightedPoly> = s.iter().map(|p| p.promote(w)).collect();
            let next: Vec<WeightedPoly> =
                rhs(&cur, w)?.into_iter().map(|p| p.truncate(w)).collect();
            if next.iter().zip(cur.iter()).all(|(n, c)| n == c) {
                settled = true;
                break;
            }
            s = next;
        }
        if !settled {
            return Err(Error::ImplicitStall { weight: w.max(0) as u32 });
        }
    }
    let s: Vec<WeightedPoly> = s.into_iter().map(|p| p.promote(order)).collect();
    let check = rhs(&s, order)?;
    for (lhs, r) in s.iter().zip(check.iter()) {
        let diff = lhs.checked_sub(&r.truncate(order))?;
        if let Some(w) = diff.min_weight() {
            return Err(Error::ImplicitStall { weight: w });
        }
    }
    Ok(s)
}

/// Scalar version of [`implicit_solve_system`].
pub fn implicit_solve<F>(initial: WeightedPoly, order: i32, mut rhs: F) -> Result<WeightedPoly>
where
    F: FnMut(&WeightedPoly, i32) -> Result<WeightedPoly>,
{
    let mut out = implicit_solve_system(vec![initial], order, |s, w| Ok(vec![rhs(&s[0], w)?]))?;
    Ok(out.remove(0))
}

/// Solves `v = rhs` where `rhs` is a polynomial that may contain `v`; the
/// answer is a series in the remaining variables.
pub fn implicit_solve_var(rhs: &WeightedPoly, v: Var, order: i32) -> Result<WeightedPoly> {
    let start = WeightedPoly::zero(rhs.grading(), order);
    implicit_solve(start, order, |s, w| {
        rhs.truncate(w).substitute(&SeriesAssignment::new().with(v, s.clone()))
    })
}
