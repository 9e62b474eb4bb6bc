//! The Chern–Moser operator `T(V) = V(y − a − P)|_{y = a + P}` on graded
//! vector fields, its kernel and image, and the splitting of a homogeneous
//! polynomial into an eliminable part and a normal-form remainder.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jetring::{Grading, Monomial, Rational, SeriesAssignment, Var, WeightedPoly};
use crate::linalg::Matrix;

/// The vector field `η ∂y + α ∂a + β ∂b + ξ ∂x` with `η, ξ` in `(x, y)` and
/// `α, β` in `(a, b)`. Components are treated as exact polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VFieldJet {
    pub eta: WeightedPoly,
    pub alpha: WeightedPoly,
    pub beta: WeightedPoly,
    pub xi: WeightedPoly,
}

/// Which coefficient of a vector field a basis element sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Eta,
    Alpha,
    Beta,
    Xi,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::Eta, Component::Alpha, Component::Beta, Component::Xi];

    /// Coordinate the component differentiates.
    pub fn direction(self) -> Var {
        match self {
            Component::Eta => Var::Y,
            Component::Alpha => Var::A,
            Component::Beta => Var::B,
            Component::Xi => Var::X,
        }
    }

    /// Variables the coefficient may depend on.
    pub fn arguments(self) -> [Var; 2] {
        match self {
            Component::Eta | Component::Xi => [Var::X, Var::Y],
            Component::Alpha | Component::Beta => [Var::A, Var::B],
        }
    }
}

/// One elementary field `m ∂v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldElem {
    pub component: Component,
    pub monomial: Monomial,
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomial.is_one() {
            write!(f, "∂{}", self.component.direction())
        } else {
            write!(f, "{} ∂{}", self.monomial, self.component.direction())
        }
    }
}

impl VFieldJet {
    pub fn new(
        eta: WeightedPoly,
        alpha: WeightedPoly,
        beta: WeightedPoly,
        xi: WeightedPoly,
    ) -> Result<Self> {
        let g = eta.grading();
        if [&alpha, &beta, &xi].iter().any(|p| p.grading() != g) {
            return Err(Error::GradingMismatch);
        }
        let v = VFieldJet { eta, alpha, beta, xi };
        for c in Component::ALL {
            if let Some(bad) = v.get(c).variables().into_iter().find(|u| !c.arguments().contains(u)) {
                return Err(Error::UnexpectedVariable { var: bad, context: "vector field component" });
            }
        }
        Ok(v)
    }

    pub fn zero(grading: Grading, order: i32) -> Self {
        let z = WeightedPoly::zero(grading, order);
        VFieldJet { eta: z.clone(), alpha: z.clone(), beta: z.clone(), xi: z }
    }

    pub fn grading(&self) -> Grading {
        self.eta.grading()
    }

    pub fn get(&self, c: Component) -> &WeightedPoly {
        match c {
            Component::Eta => &self.eta,
            Component::Alpha => &self.alpha,
            Component::Beta => &self.beta,
            Component::Xi => &self.xi,
        }
    }

    fn get_mut(&mut self, c: Component) -> &mut WeightedPoly {
        match c {
            Component::Eta => &mut self.eta,
            Component::Alpha => &mut self.alpha,
            Component::Beta => &mut self.beta,
            Component::Xi => &mut self.xi,
        }
    }

    /// Field from coordinates in a basis of elementary fields.
    pub fn from_coordinates(basis: &[FieldElem], coords: &[Rational], grading: Grading, order: i32) -> Self {
        let mut v = Self::zero(grading, order);
        for (e, c) in basis.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            let slot = v.get_mut(e.component);
            *slot = &*slot + &WeightedPoly::monomial(c.clone(), e.monomial, grading, order);
        }
        v
    }

    /// Coordinates in the given basis; components outside the basis are ignored.
    pub fn coordinates(&self, basis: &[FieldElem]) -> Vec<Rational> {
        basis.iter().map(|e| self.get(e.component).coeff(&e.monomial)).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VFieldJet {
            eta: self.eta.scale(c),
            alpha: self.alpha.scale(c),
            beta: self.beta.scale(c),
            xi: self.xi.scale(c),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        VFieldJet {
            eta: &self.eta + &other.eta,
            alpha: &self.alpha + &other.alpha,
            beta: &self.beta + &other.beta,
            xi: &self.xi + &other.xi,
        }
    }

    pub fn is_zero(&self) -> bool {
        Component::ALL.iter().all(|c| self.get(*c).is_zero())
    }

    /// Re-declares every component's truncation order (components are exact).
    pub fn promote(&self, order: i32) -> Self {
        VFieldJet {
            eta: self.eta.promote(order),
            alpha: self.alpha.promote(order),
            beta: self.beta.promote(order),
            xi: self.xi.promote(order),
        }
    }
}

impl fmt::Display for VFieldJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in Component::ALL {
            let p = self.get(c);
            if p.is_zero() {
                continue;
            }
            let d = c.direction();
            if p.len() == 1 {
                let (m, coef) = p.terms().next().expect("one term");
                let neg = coef.is_negative();
                let text = WeightedPoly::monomial(coef.abs(), *m, p.grading(), p.order()).to_string();
                let text = if text == "1" { String::new() } else { format!("{text} ") };
                match (first, neg) {
                    (true, true) => write!(f, "-{text}∂{d}")?,
                    (true, false) => write!(f, "{text}∂{d}")?,
                    (false, true) => write!(f, " - {text}∂{d}")?,
                    (false, false) => write!(f, " + {text}∂{d}")?,
                }
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "({p}) ∂{d}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The regular model `P = b x`, declared exact to at least weight 2.
pub fn regular_model(order: i32) -> WeightedPoly {
    let g = Grading::regular();
    WeightedPoly::monomial(Rational::one(), Monomial::new(0, 1, 1, 0, 0), g, order.max(2))
}

/// `T(V) = η − α − xβ − bξ` with `y = a + bx`, computed to weight `order`.
pub fn apply_t(v: &VFieldJet, order: i32) -> WeightedPoly {
    apply_t_model(v, &regular_model(order), order)
}

/// The operator for the model `y = a + P(b, x)`:
/// `η − α − β P_b − ξ P_x` with `y = a + P`.
pub fn apply_t_model(v: &VFieldJet, model: &WeightedPoly, order: i32) -> WeightedPoly {
    let g = model.grading();
    let v = v.promote(order);
    // the model is exact; keep it whole even when `order` is below its weight
    let model = model.promote(order.max(model.order()));
    let y = &WeightedPoly::var(Var::A, g, model.order()) + &model;
    let on_model = SeriesAssignment::new().with(Var::Y, y);
    let eta = v.eta.substitute(&on_model).expect("filtration preserving");
    let xi = v.xi.substitute(&on_model).expect("filtration preserving");
    let pb = model.partial(Var::B, 1).promote(order);
    let px = model.partial(Var::X, 1).promote(order);
    &(&(&eta - &v.alpha) - &(&v.beta * &pb)) - &(&xi * &px)
}

/// Elementary fields whose image under the operator has weight `ell`:
/// `η, α` of weight `ell` and `β, ξ` of weight `ell − k + 1`, listed
/// component by component in the order η, α, β, ξ.
pub fn field_basis(grading: Grading, ell: u32) -> Vec<FieldElem> {
    let k = grading.k();
    let mut out = Vec::new();
    for c in Component::ALL {
        let w = match c {
            Component::Eta | Component::Alpha => Some(ell),
            Component::Beta | Component::Xi => (ell + 1).checked_sub(k),
        };
        let Some(w) = w else { continue };
        for m in grading.monomials_of_weight(&c.arguments(), w) {
            out.push(FieldElem { component: c, monomial: m });
        }
    }
    out
}

/// Monomials in `(a, b, x)` of weight `ell`, in canonical order.
pub fn poly_basis(grading: Grading, ell: u32) -> Vec<Monomial> {
    grading.monomials_of_weight(&[Var::A, Var::B, Var::X], ell)
}

/// Coordinates of a polynomial in a monomial basis. Fails if the polynomial
/// has a term outside the basis.
pub fn poly_coordinates(p: &WeightedPoly, basis: &[Monomial]) -> Result<Vec<Rational>> {
    if let Some(m) = p.monomials().find(|m| !basis.contains(m)) {
        return Err(Error::Invariant(format!("term {m} outside the coordinate basis")));
    }
    Ok(basis.iter().map(|m| p.coeff(m)).collect())
}

/// Matrix of the operator restricted to one weight.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub ell: u32,
    pub matrix: Matrix,
    pub domain: Vec<FieldElem>,
    pub codomain: Vec<Monomial>,
    pub model: WeightedPoly,
}

/// The operator at weight `ell` for the regular model.
pub fn operator_matrix(ell: u32) -> OperatorMatrix {
    operator_matrix_model(&regular_model(ell as i32), ell)
}

/// The operator at weight `ell` for the model `y = a + P`.
pub fn operator_matrix_model(model: &WeightedPoly, ell: u32) -> OperatorMatrix {
    let g = model.grading();
    let order = ell as i32;
    let domain = field_basis(g, ell);
    let codomain = poly_basis(g, ell);
    let cols: Vec<Vec<Rational>> = domain
        .iter()
        .map(|e| {
            let v = VFieldJet::from_coordinates(&[*e], &[Rational::one()], g, order);
            let image = apply_t_model(&v, model, order);
            poly_coordinates(&image, &codomain).expect("operator is weight homogeneous")
        })
        .collect();
    OperatorMatrix {
        ell,
        matrix: Matrix::from_columns(codomain.len(), &cols),
        domain,
        codomain,
        model: model.clone(),
    }
}

impl OperatorMatrix {
    pub fn field(&self, coords: &[Rational]) -> VFieldJet {
        VFieldJet::from_coordinates(&self.domain, coords, self.model.grading(), self.ell as i32)
    }

    pub fn kernel_basis(&self) -> Vec<VFieldJet> {
        self.matrix.nullspace().iter().map(|v| self.field(v)).collect()
    }

    /// Images of the pivot columns: a basis of the image.
    pub fn image_basis(&self) -> Vec<WeightedPoly> {
        let g = self.model.grading();
        self.matrix
            .rref()
            .pivots
            .into_iter()
            .map(|j| {
                WeightedPoly::from_terms(
                    self.codomain.iter().copied().zip(self.matrix.column(j)),
                    g,
                    self.ell as i32,
                )
            })
            .collect()
    }
}

/// Kernel of the regular operator at weight `ell`.
pub fn kernel_basis(ell: u32) -> Vec<VFieldJet> {
    operator_matrix(ell).kernel_basis()
}

/// Whether a monomial `a^i b^j x^l` is kept by the regular normal form.
pub fn is_retained(m: &Monomial) -> bool {
    let j = m.exp(Var::B);
    let l = m.exp(Var::X);
    j >= 2 && l >= 2 && !(j <= 3 && l <= 3)
}

/// Weight-`ell` monomials retained by the regular normal form: `j, l ≥ 2`
/// and `(j, l) ∉ {2, 3}²`.
pub fn normal_complement_monomials(ell: u32) -> Vec<Monomial> {
    poly_basis(Grading::regular(), ell).into_iter().filter(is_retained).collect()
}

/// Dimensions and bases of the operator at one weight.
#[derive(Clone, Debug)]
pub struct OperatorReport {
    pub ell: u32,
    pub domain_dim: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub kernel_basis: Vec<VFieldJet>,
    pub image_basis: Vec<WeightedPoly>,
    pub complement_monomials: Vec<Monomial>,
}

pub fn operator_report(ell: u32) -> OperatorReport {
    let op = operator_matrix(ell);
    let kernel = op.kernel_basis();
    let image = op.image_basis();
    OperatorReport {
        ell,
        domain_dim: op.domain.len(),
        image_dim: image.len(),
        kernel_dim: kernel.len(),
        kernel_basis: kernel,
        image_basis: image,
        complement_monomials: normal_complement_monomials(ell),
    }
}

/// Writes a homogeneous `P` of weight `ell` as `−T(v) + normal` with
/// `normal` supported on the retained monomials. Free parameters of the
/// solve are set to zero.
pub fn decompose(p: &WeightedPoly) -> Result<(VFieldJet, WeightedPoly)> {
    let op = match p.max_weight() {
        Some(w) => operator_matrix(w),
        None => return Ok((VFieldJet::zero(Grading::regular(), 0), p.clone())),
    };
    let complement = normal_complement_monomials(op.ell);
    decompose_with(&op, &complement, p)
}

/// Solves `P = −T(v) + Σ c_m m` over the given complement monomials.
pub fn decompose_with(
    op: &OperatorMatrix,
    complement: &[Monomial],
    p: &WeightedPoly,
) -> Result<(VFieldJet, WeightedPoly)> {
    let g = op.model.grading();
    let ell = op.ell as i32;
    if p.grading() != g {
        return Err(Error::GradingMismatch);
    }
    if p.min_weight().is_some_and(|w| w != op.ell) || p.max_weight().is_some_and(|w| w != op.ell) {
        return Err(Error::BadForm(format!("decompose needs a homogeneous polynomial of weight {ell}")));
    }
    let rhs = poly_coordinates(p, &op.codomain)?;
    let n = op.codomain.len();
    let mut cols: Vec<Vec<Rational>> =
        (0..op.matrix.cols()).map(|j| op.matrix.column(j).iter().map(|c| -c).collect()).collect();
    for m in complement {
        cols.push(op.codomain.iter().map(|c| if c == m { Rational::one() } else { Rational::zero() }).collect());
    }
    let system = Matrix::from_columns(n, &cols);
    let z = system
        .solve(&rhs)
        .ok_or_else(|| Error::Invariant(format!("weight-{ell} part not in image ⊕ complement")))?;
    let nf = op.domain.len();
    let v = op.field(&z[..nf]);
    let normal = WeightedPoly::from_terms(complement.iter().copied().zip(z[nf..].iter().cloned()), g, ell);
    let back = &(-apply_t_model(&v, &op.model, ell)) + &normal;
    if back != p.promote(ell) {
        return Err(Error::Invariant("decomposition does not reproduce the input".into()));
    }
    Ok((v, normal))
}
