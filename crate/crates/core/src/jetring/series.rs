use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Grading, Monomial, Rational, Var, WeightedPoly};
use crate::error::{Error, Result};

/// A univariate power series `Σ c_i t^i` known modulo `t^(order+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniSeries {
    coeffs: Vec<Rational>,
}

fn int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl UniSeries {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        UniSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        UniSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        UniSeries { coeffs: self.coeffs[..=n].to_vec() }
    }

    /// Re-declares the order, padding with zeros.
    pub fn promote(&self, order: usize) -> Self {
        (0..=order).map(|i| self.coeff(i)).collect::<Vec<_>>().into()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect::<Vec<_>>().into()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect::<Vec<_>>().into()
    }

    pub fn neg(&self) -> Self {
        self.coeffs.iter().map(|c| -c).collect::<Vec<_>>().into()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.coeffs.iter().map(|v| v * c).collect::<Vec<_>>().into()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        out.into()
    }

    /// Derivative; the order drops by one (a constant's derivative is `0 + O(t)`
    /// only when the order is positive).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        (1..=self.order())
            .map(|i| &self.coeffs[i] * int(i))
            .collect::<Vec<_>>()
            .into()
    }

    /// Antiderivative with the given constant term; the order rises by one.
    pub fn integral(&self, c0: Rational) -> Self {
        let mut out = vec![c0];
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c / int(i + 1));
        }
        out.into()
    }

    /// Multiplicative inverse.
    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible("series with zero constant term"));
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = vec![inv0.clone()];
        for k in 1..=n {
            let mut s = Rational::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &out[k - i];
            }
            out.push(-s * &inv0);
        }
        Ok(out.into())
    }

    /// Square root of a series with constant term 1.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NotInvertible("square root needs constant term 1"));
        }
        let n = self.order();
        let two = int(2);
        let mut out: Vec<Rational> = vec![Rational::one()];
        for k in 1..=n {
            let mut s = self.coeffs[k].clone();
            for i in 1..k {
                s -= &out[i] * &out[k - i];
            }
            out.push(s / &two);
        }
        Ok(out.into())
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NotInvertible("inner series must vanish at 0"));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for i in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[i];
        }
        Ok(acc)
    }

    /// Compositional inverse of a series `c1 t + …` with `c1 ≠ 0`.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.coeff(1).is_zero() {
            return Err(Error::NotInvertible("reversion needs s(0)=0, s'(0)≠0"));
        }
        let n = self.order();
        let c1inv = self.coeffs[1].recip();
        let mut g = Self::t(n).scale(&c1inv);
        // fix one more coefficient per round: g <- g - (s(g) - t) / c1
        for _ in 1..n {
            let r = self.compose(&g)?.sub(&Self::t(n));
            g = g.sub(&r.scale(&c1inv));
        }
        Ok(g)
    }

    /// The series as a polynomial in `v`; `t^i` has weight `i·weight(v)`.
    pub fn to_poly(&self, v: Var, grading: Grading) -> WeightedPoly {
        let w = grading.weight_of(v) as i32;
        WeightedPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(v).with_exp(v, i as u16), c.clone())),
            grading,
            self.order() as i32 * w,
        )
    }

    /// Reads a polynomial in the single variable `v`, of the given order.
    pub fn from_poly(p: &WeightedPoly, v: Var, order: usize) -> Result<Self> {
        if let Some(bad) = p.variables().into_iter().find(|u| *u != v) {
            return Err(Error::UnexpectedVariable { var: bad, context: "univariate series" });
        }
        Ok((0..=order)
            .map(|i| p.coeff(&Monomial::ONE.with_exp(v, i as u16)))
            .collect::<Vec<_>>()
            .into())
    }
}

impl From<Vec<Rational>> for UniSeries {
    fn from(coeffs: Vec<Rational>) -> Self {
        UniSeries::new(coeffs)
    }
}

/// Solves `h^(n) = rhs(h, h', …, h^(n-1))` with `init = [h(0), …, h^(n-1)(0)]`
/// to order `order`, by coefficient matching.
pub fn solve_ode_series<F>(init: &[Rational], order: usize, rhs: F) -> Result<UniSeries>
where
    F: Fn(&[UniSeries]) -> Result<UniSeries>,
{
    let n = init.len();
    let mut sol = solve_ode_system(&[n], &[init.to_vec()], order, |hs| Ok(vec![rhs(&hs[0])?]))?;
    Ok(sol.remove(0))
}

/// Solves a system `h_i^(n_i) = rhs_i(all derivatives)` where `rhs` receives,
/// for each unknown, the list `[h_i, h_i', …, h_i^(n_i - 1)]`.
pub fn solve_ode_system<F>(
    orders: &[usize],
    init: &[Vec<Rational>],
    order: usize,
    rhs: F,
) -> Result<Vec<UniSeries>>
where
    F: Fn(&[Vec<UniSeries>]) -> Result<Vec<UniSeries>>,
{
    if orders.len() != init.len() {
        return Err(Error::BadForm("one initial-condition list per unknown".into()));
    }
    for (&n, ic) in orders.iter().zip(init.iter()) {
        if n == 0 || ic.len() != n {
            return Err(Error::Underdetermined { order: n });
        }
    }
    // h_i known to degree n_i - 1 from the initial data
    let mut hs: Vec<Vec<Rational>> = orders
        .iter()
        .zip(init.iter())
        .map(|(&n, ic)| {
            let mut fact = Rational::one();
            (0..n)
                .map(|j| {
                    if j > 0 {
                        fact *= int(j);
                    }
                    &ic[j] / &fact
                })
                .collect()
        })
        .collect();
    let min_order = *orders.iter().min().expect("nonempty");
    let derivs = |hs: &Vec<Vec<Rational>>| -> Vec<Vec<UniSeries>> {
        hs.iter()
            .zip(orders.iter())
            .map(|(c, &n)| {
                let mut list = vec![UniSeries::new(c.clone())];
                for _ in 1..n {
                    let d = list.last().expect("nonempty").derivative();
                    list.push(d);
                }
                list
            })
            .collect()
    };
    for m in 0..=order.saturating_sub(min_order) {
        let args = derivs(&hs);
        let vals = rhs(&args)?;
        for (i, &n) in orders.iter().enumerate() {
            let deg = m + n;
            if deg > order || hs[i].len() != deg {
                continue;
            }
            if vals[i].order() < m {
                return Err(Error::Underdetermined { order: n });
            }
            let mut falling = Rational::one();
            for j in 0..n {
                falling *= int(m + 1 + j);
            }
            hs[i].push(vals[i].coeff(m) / falling);
        }
    }
    for h in hs.iter_mut() {
        h.truncate(order + 1);
    }
    // residual check
    let args = derivs(&hs);
    let vals = rhs(&args)?;
    for (i, &n) in orders.iter().enumerate() {
        if order < n {
            continue;
        }
        let mut top = args[i].last().expect("nonempty").derivative();
        top = top.truncate(order - n);
        let r = top.sub(&vals[i].truncate(order - n));
        if !r.is_zero() {
            return Err(Error::Invariant(format!(
                "series ODE residual nonzero for unknown {i}"
            )));
        }
    }
    Ok(hs.into_iter().map(UniSeries::new).collect())
}
