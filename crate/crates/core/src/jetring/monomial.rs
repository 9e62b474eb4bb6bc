use std::cmp::Ordering;
use std::fmt;

/// Coordinate names. `p` stands for `y'` in ODE contexts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    A,
    B,
    X,
    Y,
    P,
}

impl Var {
    pub const ALL: [Var; 5] = [Var::A, Var::B, Var::X, Var::Y, Var::P];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Var::A => 'a',
            Var::B => 'b',
            Var::X => 'x',
            Var::Y => 'y',
            Var::P => 'p',
        }
    }

    pub fn from_char(c: char) -> Option<Var> {
        match c {
            'a' => Some(Var::A),
            'b' => Some(Var::B),
            'x' => Some(Var::X),
            'y' => Some(Var::Y),
            'p' => Some(Var::P),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A power product of the five coordinates.
///
/// Ordered graded-lexicographically: lower total degree first, and within a
/// degree the larger exponent of the earlier variable (`a < b < x < y < p`)
/// comes first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u16; 5]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 5]);

    pub fn var(v: Var) -> Self {
        let mut e = [0; 5];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn new(a: u16, b: u16, x: u16, y: u16, p: u16) -> Self {
        Monomial([a, b, x, y, p])
    }

    pub fn from_pairs(pairs: &[(Var, u16)]) -> Self {
        let mut e = [0; 5];
        for &(v, k) in pairs {
            e[v.index()] += k;
        }
        Monomial(e)
    }

    pub fn exps(&self) -> [u16; 5] {
        self.0
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn with_exp(mut self, v: Var, k: u16) -> Self {
        self.0[v.index()] = k;
        self
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 5]
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0[v.index()] > 0
    }

    /// Variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = Var> + '_ {
        Var::ALL.into_iter().filter(|v| self.contains(*v))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x += *y;
        }
        Monomial(e)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x = x.checked_sub(*y)?;
        }
        Some(Monomial(e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in self.support() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match self.exp(v) {
                1 => write!(f, "{v}")?,
                k => write!(f, "{v}^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Positive integer weights on the coordinates.
///
/// `k` is the type parameter; it always equals the weight of `a` (and `y`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    weights: [u32; 5],
    k: u32,
}

impl Grading {
    /// `a, y ↦ 2`, `b, x, p ↦ 1`.
    pub fn regular() -> Self {
        Self::singular(2)
    }

    /// `a, y ↦ k`, `b, x, p ↦ 1`.
    pub fn singular(k: u32) -> Self {
        assert!(k >= 1, "type parameter must be positive");
        Grading { weights: [k, 1, 1, k, 1], k }
    }

    /// Every variable has weight one: truncation by total degree.
    pub fn uniform() -> Self {
        Self::singular(1)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn weight_of(&self, v: Var) -> u32 {
        self.weights[v.index()]
    }

    pub fn weight(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(self.weights.iter())
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    }

    /// All monomials in `vars` of exact weight `w`, in canonical order.
    pub fn monomials_of_weight(&self, vars: &[Var], w: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Monomial::ONE;
        self.enumerate(vars, w, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, vars: &[Var], rest: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => {
                if rest == 0 {
                    out.push(*cur);
                }
            }
            Some((&v, tail)) => {
                let wv = self.weight_of(v);
                let mut e = 0u32;
                while e * wv <= rest {
                    *cur = cur.with_exp(v, e as u16);
                    self.enumerate(tail, rest - e * wv, cur, out);
                    e += 1;
                }
                *cur = cur.with_exp(v, 0);
            }
        }
    }
}
