use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Grading, Monomial, Rational, Var};
use crate::error::{Error, Result};

/// A sparse exact-rational polynomial in `a, b, x, y, p`, known modulo
/// terms of weight strictly above `order`.
///
/// Terms with zero coefficient or weight above `order` are never stored.
/// A negative order means nothing is known (only produced by differentiation).
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedPoly {
    terms: BTreeMap<Monomial, Rational>,
    grading: Grading,
    order: i32,
}

impl WeightedPoly {
    pub fn zero(grading: Grading, order: i32) -> Self {
        WeightedPoly { terms: BTreeMap::new(), grading, order }
    }

    pub fn constant(c: Rational, grading: Grading, order: i32) -> Self {
        Self::monomial(c, Monomial::ONE, grading, order)
    }

    pub fn one(grading: Grading, order: i32) -> Self {
        Self::constant(Rational::one(), grading, order)
    }

    pub fn var(v: Var, grading: Grading, order: i32) -> Self {
        Self::monomial(Rational::one(), Monomial::var(v), grading, order)
    }

    pub fn monomial(c: Rational, m: Monomial, grading: Grading, order: i32) -> Self {
        Self::from_terms([(m, c)], grading, order)
    }

    /// Builds a polynomial, summing repeated monomials and dropping terms
    /// above the truncation order.
    pub fn from_terms<I>(terms: I, grading: Grading, order: i32) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            if grading.weight(&m) as i64 > order as i64 || c.is_zero() {
                continue;
            }
            let slot = map.entry(m).or_insert_with(Rational::zero);
            *slot += c;
        }
        map.retain(|_, c| !c.is_zero());
        WeightedPoly { terms: map, grading, order }
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    pub fn weight_of(&self, m: &Monomial) -> u32 {
        self.grading.weight(m)
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.grading.weight(m)).min()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.grading.weight(m)).max()
    }

    /// Variables occurring in some term.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m.contains(*v)))
            .collect()
    }

    pub fn depends_only_on(&self, vars: &[Var]) -> bool {
        self.variables().iter().all(|v| vars.contains(v))
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    /// Drops everything above weight `order` and lowers the truncation order.
    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        self.with_order_unchecked(order)
    }

    /// Re-declares the truncation order, treating the stored terms as exact.
    /// Terms above the new order are dropped.
    pub fn promote(&self, order: i32) -> Self {
        self.with_order_unchecked(order)
    }

    fn with_order_unchecked(&self, order: i32) -> Self {
        let g = self.grading;
        WeightedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| g.weight(m) as i64 <= order as i64)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            grading: g,
            order,
        }
    }

    fn check(&self, other: &Self) -> Result<i32> {
        if self.grading != other.grading {
            return Err(Error::GradingMismatch);
        }
        Ok(self.order.min(other.order))
    }

    /// Sum; the result is known to the smaller of the two orders.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let order = self.check(other)?;
        let mut out = self.truncate(order);
        for (m, c) in other.terms.iter() {
            if self.grading.weight(m) as i64 > order as i64 {
                continue;
            }
            let slot = out.terms.entry(*m).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                out.terms.remove(m);
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    /// Truncated product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let order = self.check(other)?;
        Ok(WeightedPoly {
            terms: mul_kernel(&self.terms, &other.terms, self.grading, order),
            grading: self.grading,
            order,
        })
    }

    pub fn neg_ref(&self) -> Self {
        WeightedPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
            grading: self.grading,
            order: self.order,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.grading, self.order);
        }
        WeightedPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
            grading: self.grading,
            order: self.order,
        }
    }

    /// Multiplies every term by the monomial `m`.
    pub fn mul_monomial(&self, c: &Rational, m: &Monomial) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(t, v)| (t.mul(m), v * c)),
            self.grading,
            self.order,
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.grading, self.order);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The weight-`w` homogeneous part.
    pub fn component(&self, w: u32) -> Self {
        let g = self.grading;
        WeightedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| g.weight(m) == w)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            grading: g,
            order: self.order,
        }
    }

    /// Homogeneous parts in increasing weight; empty parts are skipped.
    pub fn weighted_components(&self) -> Vec<(u32, WeightedPoly)> {
        let mut parts: BTreeMap<u32, BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            parts
                .entry(self.grading.weight(m))
                .or_default()
                .insert(*m, c.clone());
        }
        parts
            .into_iter()
            .map(|(w, terms)| {
                (w, WeightedPoly { terms, grading: self.grading, order: self.order })
            })
            .collect()
    }

    /// Iterated partial derivative. The truncation order drops by
    /// `n * weight(v)`.
    pub fn partial(&self, v: Var, n: u32) -> Self {
        let order = self.order - (n * self.grading.weight_of(v)) as i32;
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let e = m.exp(v) as u32;
            if e < n {
                continue;
            }
            let mut factor = BigInt::one();
            for i in 0..n {
                factor *= BigInt::from(e - i);
            }
            terms.insert(m.with_exp(v, (e - n) as u16), c * Rational::from_integer(factor));
        }
        WeightedPoly { terms, grading: self.grading, order }.truncate(order)
    }

    /// Antiderivative in `v` vanishing at `v = 0`. The order rises by `weight(v)`.
    pub fn integrate(&self, v: Var) -> Self {
        let order = self.order + self.grading.weight_of(v) as i32;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e = m.exp(v) + 1;
                (m.with_exp(v, e), c / Rational::from_integer(BigInt::from(e)))
            })
            .collect();
        WeightedPoly { terms, grading: self.grading, order }
    }

    /// Restriction to the hyperplane `v = 0`.
    pub fn set_zero(&self, v: Var) -> Self {
        WeightedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.contains(v))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            grading: self.grading,
            order: self.order,
        }
    }

    /// Coefficient of `∏ v^e` over the listed variables, as a polynomial in
    /// the remaining ones. Terms with other exponents in the listed variables
    /// are discarded.
    pub fn extract(&self, pattern: &[(Var, u16)]) -> Self {
        let strip = Monomial::from_pairs(pattern);
        let order = self.order - self.grading.weight(&strip) as i32;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| pattern.iter().all(|&(v, e)| m.exp(v) == e))
            .map(|(m, c)| (m.div(&strip).expect("pattern divides"), c.clone()))
            .collect();
        WeightedPoly { terms, grading: self.grading, order }
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        WeightedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            grading: self.grading,
            order: self.order,
        }
    }

    /// Renames variables. Each pair `(from, to)` must have equal weights;
    /// all renamings happen simultaneously.
    pub fn rename(&self, pairs: &[(Var, Var)]) -> Result<Self> {
        for &(from, to) in pairs {
            if self.grading.weight_of(from) != self.grading.weight_of(to) {
                return Err(Error::NotFiltrationPreserving { var: from });
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = *m;
                for &(from, _) in pairs {
                    out = out.with_exp(from, 0);
                }
                for &(from, to) in pairs {
                    out = out.with_exp(to, out.exp(to) + m.exp(from));
                }
                (out, c.clone())
            })
            .collect::<Vec<_>>();
        Ok(Self::from_terms(terms, self.grading, self.order))
    }

    /// Reinterprets the polynomial in another grading. Fails unless every
    /// monomial of new weight at most `order` had old weight at most the old
    /// order, so that no unknown information is invented.
    pub fn regrade(&self, grading: Grading, order: i32) -> Result<Self> {
        if order >= 0 {
            for v in Var::ALL {
                let old = self.grading.weight_of(v) as i64;
                let new = grading.weight_of(v) as i64;
                let max_exp = order as i64 / new;
                if max_exp * old > self.order as i64 {
                    return Err(Error::BadForm(format!(
                        "cannot regrade: weight-{order} jet needs {v}^{max_exp}, unknown at order {}",
                        self.order
                    )));
                }
            }
        }
        Ok(Self::from_terms(
            self.terms.iter().map(|(m, c)| (*m, c.clone())),
            grading,
            order,
        ))
    }

    /// Formal composition `p(s(…))`. Variables without an assignment are
    /// kept. Every assigned series must have weighted order at least the
    /// weight of the variable it replaces.
    pub fn substitute(&self, s: &SeriesAssignment) -> Result<Self> {
        let mut order = self.order;
        let mut vars = Vec::new();
        for v in Var::ALL {
            let Some(val) = s.get(v) else { continue };
            if val.grading != self.grading {
                return Err(Error::GradingMismatch);
            }
            if let Some(w) = val.min_weight() {
                if w < self.grading.weight_of(v) {
                    return Err(Error::NotFiltrationPreserving { var: v });
                }
            }
            if !self.contains_var(v) {
                continue;
            }
            order = order.min(val.order);
            if val.terms.len() == 1 && val.coeff(&Monomial::var(v)).is_one() {
                continue;
            }
            vars.push(v);
        }
        let terms: Vec<(Monomial, Rational)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        let mut cache = PowerCache::new(s, self.grading, order);
        Ok(self.eval_nested(&vars, terms, &mut cache, order))
    }

    fn eval_nested(
        &self,
        vars: &[Var],
        terms: Vec<(Monomial, Rational)>,
        cache: &mut PowerCache,
        order: i32,
    ) -> Self {
        let Some((&v, rest)) = vars.split_first() else {
            return Self::from_terms(terms, self.grading, order);
        };
        let mut groups: BTreeMap<u16, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in terms {
            groups.entry(m.exp(v)).or_default().push((m.with_exp(v, 0), c));
        }
        let mut acc = Self::zero(self.grading, order);
        for (e, group) in groups {
            let inner = self.eval_nested(rest, group, cache, order);
            if e == 0 {
                acc = &acc + &inner;
            } else {
                let pw = cache.power(v, e);
                acc = &acc + &(pw * &inner);
            }
        }
        acc
    }

    /// Evaluates at the origin in the listed variables (sets them to zero).
    pub fn restrict_zero(&self, vars: &[Var]) -> Self {
        self.filter(|m| vars.iter().all(|v| !m.contains(*v)))
    }
}

/// Simultaneous assignment `var ↦ series`.
#[derive(Clone, Debug, Default)]
pub struct SeriesAssignment {
    values: [Option<WeightedPoly>; 5],
}

impl SeriesAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: WeightedPoly) -> Self {
        self.values[v.index()] = Some(value);
        self
    }

    pub fn set(&mut self, v: Var, value: WeightedPoly) {
        self.values[v.index()] = Some(value);
    }

    pub fn get(&self, v: Var) -> Option<&WeightedPoly> {
        self.values[v.index()].as_ref()
    }
}

struct PowerCache<'a> {
    s: &'a SeriesAssignment,
    grading: Grading,
    order: i32,
    powers: [Vec<WeightedPoly>; 5],
}

impl<'a> PowerCache<'a> {
    fn new(s: &'a SeriesAssignment, grading: Grading, order: i32) -> Self {
        PowerCache { s, grading, order, powers: Default::default() }
    }

    fn power(&mut self, v: Var, e: u16) -> &WeightedPoly {
        let list = &mut self.powers[v.index()];
        if list.is_empty() {
            list.push(WeightedPoly::one(self.grading, self.order));
        }
        let base = self.s.get(v).expect("assigned").truncate(self.order);
        while list.len() <= e as usize {
            let next = list.last().expect("nonempty") * &base;
            list.push(next);
        }
        &list[e as usize]
    }
}

fn mul_kernel(
    a: &BTreeMap<Monomial, Rational>,
    b: &BTreeMap<Monomial, Rational>,
    g: Grading,
    order: i32,
) -> BTreeMap<Monomial, Rational> {
    if a.is_empty() || b.is_empty() || order < 0 {
        return BTreeMap::new();
    }
    let sa = Scaled::new(a, g);
    let mut sb = Scaled::new(b, g);
    sb.terms.sort_by_key(|t| t.1);
    let den = &sa.den * &sb.den;
    let pairs = sa.terms.len() * sb.terms.len();
    let bound = sa.max_bits + sb.max_bits + (usize::BITS - pairs.leading_zeros()) as u64;
    let limit = order as u32;

    let mut out = BTreeMap::new();
    if bound < 126 {
        let an: Vec<i128> = sa.terms.iter().map(|t| t.2.to_i128().expect("bounded")).collect();
        let bn: Vec<i128> = sb.terms.iter().map(|t| t.2.to_i128().expect("bounded")).collect();
        let mut acc: HashMap<Monomial, i128> = HashMap::new();
        for (ta, ca) in sa.terms.iter().zip(an.iter()) {
            if ta.1 > limit {
                continue;
            }
            let room = limit - ta.1;
            for (tb, cb) in sb.terms.iter().zip(bn.iter()) {
                if tb.1 > room {
                    break;
                }
                *acc.entry(ta.0.mul(&tb.0)).or_insert(0) += ca * cb;
            }
        }
        for (m, c) in acc {
            if c != 0 {
                out.insert(m, Rational::new(BigInt::from(c), den.clone()));
            }
        }
    } else {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for ta in sa.terms.iter() {
            if ta.1 > limit {
                continue;
            }
            let room = limit - ta.1;
            for tb in sb.terms.iter() {
                if tb.1 > room {
                    break;
                }
                *acc.entry(ta.0.mul(&tb.0)).or_insert_with(BigInt::zero) += &ta.2 * &tb.2;
            }
        }
        for (m, c) in acc {
            if !c.is_zero() {
                out.insert(m, Rational::new(c, den.clone()));
            }
        }
    }
    out
}

/// Coefficients brought to a common denominator.
struct Scaled {
    den: BigInt,
    terms: Vec<(Monomial, u32, BigInt)>,
    max_bits: u64,
}

impl Scaled {
    fn new(map: &BTreeMap<Monomial, Rational>, g: Grading) -> Self {
        let mut den = BigInt::one();
        for c in map.values() {
            if !c.denom().is_one() {
                den = den.lcm(c.denom());
            }
        }
        let mut max_bits = 0;
        let terms = map
            .iter()
            .map(|(m, c)| {
                let n = c.numer() * (&den / c.denom());
                max_bits = max_bits.max(n.abs().bits());
                (*m, g.weight(m), n)
            })
            .collect();
        Scaled { den, terms, max_bits }
    }
}

impl Add for &WeightedPoly {
    type Output = WeightedPoly;
    fn add(self, rhs: &WeightedPoly) -> WeightedPoly {
        self.checked_add(rhs).expect("grading mismatch in +")
    }
}

impl Sub for &WeightedPoly {
    type Output = WeightedPoly;
    fn sub(self, rhs: &WeightedPoly) -> WeightedPoly {
        self.checked_sub(rhs).expect("grading mismatch in -")
    }
}

impl Mul for &WeightedPoly {
    type Output = WeightedPoly;
    fn mul(self, rhs: &WeightedPoly) -> WeightedPoly {
        self.checked_mul(rhs).expect("grading mismatch in *")
    }
}

impl Neg for &WeightedPoly {
    type Output = WeightedPoly;
    fn neg(self) -> WeightedPoly {
        self.neg_ref()
    }
}

impl Add for WeightedPoly {
    type Output = WeightedPoly;
    fn add(self, rhs: WeightedPoly) -> WeightedPoly {
        &self + &rhs
    }
}

impl Sub for WeightedPoly {
    type Output = WeightedPoly;
    fn sub(self, rhs: WeightedPoly) -> WeightedPoly {
        &self - &rhs
    }
}

impl Mul for WeightedPoly {
    type Output = WeightedPoly;
    fn mul(self, rhs: WeightedPoly) -> WeightedPoly {
        &self * &rhs
    }
}

impl Neg for WeightedPoly {
    type Output = WeightedPoly;
    fn neg(self) -> WeightedPoly {
        self.neg_ref()
    }
}

/// Formats a rational as `n` or `n/d`.
pub fn format_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{} {m}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [O({})]", self.order + 1)
    }
}
