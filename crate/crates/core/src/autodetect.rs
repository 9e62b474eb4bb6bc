//! Infinitesimal automorphisms of surface jets: the tangency residual of a
//! vector field and the isotropy verdict for surfaces of finite type.


use crate::cmoperator::VFieldJet;
use crate::error::{Error, Result};
use crate::jetring::{Grading, Monomial, Rational, SeriesAssignment, Var, WeightedPoly};
use crate::regnorm::SurfaceJet;
use crate::singnorm::reduced_type;

/// `χ(y − F)` restricted to `y = F`:
/// `η(x, F) − ξ(x, F) F_x − α F_a − β F_b`, to the order of `F`.
pub fn apply_field(chi: &VFieldJet, f: &SurfaceJet) -> Result<WeightedPoly> {
    if chi.grading() != f.grading() {
        return Err(Error::GradingMismatch);
    }
    let l = f.order();
    let chi = chi.promote(l);
    let on_surface = SeriesAssignment::new().with(Var::Y, f.f().clone());
    let eta = chi.eta.substitute(&on_surface)?;
    let xi = chi.xi.substitute(&on_surface)?;
    let d = |v| f.f().partial(v, 1).promote(l);
    Ok(&(&(&eta - &(&xi * &d(Var::X))) - &(&chi.alpha * &d(Var::A))) - &(&chi.beta * &d(Var::B)))
}

/// Whether the residual vanishes up to weight `order`.
pub fn is_infinitesimal_automorphism(chi: &VFieldJet, f: &SurfaceJet, order: i32) -> Result<bool> {
    Ok(apply_field(chi, f)?.truncate(order.min(f.order())).is_zero())
}

fn term(c: Rational, a: u16, b: u16, x: u16, y: u16, g: Grading, l: i32) -> WeightedPoly {
    WeightedPoly::monomial(c, Monomial::new(a, b, x, y, 0), g, l)
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `x∂x + b∂b + k a∂a + k y∂y`.
pub fn weighted_euler_field(k: u32, order: i32) -> VFieldJet {
    let g = Grading::singular(k);
    let k = r(k as i64);
    VFieldJet::new(
        term(k.clone(), 0, 0, 0, 1, g, order),
        term(k, 1, 0, 0, 0, g, order),
        term(r(1), 0, 1, 0, 0, g, order),
        term(r(1), 0, 0, 1, 0, g, order),
    )
    .expect("valid field")
}

/// `n b∂b − m x∂x`.
pub fn torus_field(m: u32, n: u32, order: i32) -> VFieldJet {
    let g = Grading::singular(m + n);
    let z = WeightedPoly::zero(g, order);
    VFieldJet::new(z.clone(), z, term(r(n as i64), 0, 1, 0, 0, g, order), term(r(-(m as i64)), 0, 0, 1, 0, g, order))
        .expect("valid field")
}

/// `a²∂a + (1/m) ab∂b + (1/n) xy∂x + y²∂y`.
pub fn quadratic_field(m: u32, n: u32, order: i32) -> VFieldJet {
    let g = Grading::singular(m + n);
    let inv = |d: u32| Rational::new(1.into(), (d as i64).into());
    VFieldJet::new(
        term(r(1), 0, 0, 0, 2, g, order),
        term(r(1), 2, 0, 0, 0, g, order),
        term(inv(m), 1, 1, 0, 0, g, order),
        term(inv(n), 0, 0, 1, 1, g, order),
    )
    .expect("valid field")
}

/// Whether `f = F − a − b^m x^n` is built from powers of `b^m x^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternCheck {
    /// Every monomial has `(b, x)`-degree on the ray through `(m, n)`;
    /// coefficients may depend on `a`.
    pub with_a_coefficients: bool,
    /// Same, and no monomial involves `a`.
    pub constant_coefficients: bool,
}

/// Checks the `(b^m x^n)^r` pattern. The ray is the primitive lattice
/// direction `(m, n)/gcd(m, n)`, which is exactly where `n b∂b − m x∂x`
/// acts trivially.
pub fn monomial_pattern_check(f: &SurfaceJet, m: u32, n: u32) -> PatternCheck {
    let g = f.grading();
    let l = f.order();
    let lead = &WeightedPoly::var(Var::A, g, l) + &term(r(1), 0, m as u16, n as u16, 0, g, l);
    let rest = f.f() - &lead;
    let on_ray = |mo: &Monomial| n * mo.exp(Var::B) as u32 == m * mo.exp(Var::X) as u32;
    let with_a = rest.monomials().all(on_ray);
    let constant = with_a && rest.monomials().all(|mo| mo.exp(Var::A) == 0);
    PatternCheck { with_a_coefficients: with_a, constant_coefficients: constant }
}

/// Integer multiple reading: `(b, x)`-degree equal to `r (m, n)` with `r`
/// an integer. Coincides with the ray test when `gcd(m, n) = 1`.
pub fn is_integer_power_pattern(mo: &Monomial, m: u32, n: u32) -> bool {
    let (j, l) = (mo.exp(Var::B) as u32, mo.exp(Var::X) as u32);
    j % m == 0 && l % n == 0 && j / m == l / n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsotropyVerdict {
    /// `f = 0`: the model fields that are tangent are listed.
    Model,
    /// The torus field `n b∂b − m x∂x` is tangent up to the order.
    OneParameter,
    /// No nontrivial isotropic automorphism up to the order.
    Trivial,
}

impl IsotropyVerdict {
    pub fn label(self) -> &'static str {
        match self {
            IsotropyVerdict::Model => "MODEL",
            IsotropyVerdict::OneParameter => "ONE_PARAMETER",
            IsotropyVerdict::Trivial => "TRIVIAL",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsotropyReport {
    pub verdict: IsotropyVerdict,
    pub k: u32,
    pub m: u32,
    pub n: u32,
    /// Named fields confirmed tangent up to `up_to`.
    pub fields: Vec<(&'static str, VFieldJet)>,
    pub pattern: PatternCheck,
    pub up_to: i32,
}

/// Isotropy verdict for a jet in reduced (and normalized) form, valid up to
/// weight `order`.
pub fn isotropy_report(f: &SurfaceJet, order: i32) -> Result<IsotropyReport> {
    let t = reduced_type(f)?;
    let l = order.min(f.order());
    let g = f.grading();
    let pattern = monomial_pattern_check(f, t.m, t.n);
    let candidates = [
        ("chi_0", weighted_euler_field(t.k, l)),
        ("chi", torus_field(t.m, t.n, l)),
        ("chi_k", quadratic_field(t.m, t.n, l)),
    ];
    let mut fields = Vec::new();
    for (name, chi) in candidates {
        if is_infinitesimal_automorphism(&chi, f, l)? {
            fields.push((name, chi));
        }
    }
    let exact = f.f().truncate(l);
    let is_model = exact == &WeightedPoly::var(Var::A, g, l) + &t.model(l);
    let torus_ok = fields.iter().any(|(name, _)| *name == "chi");
    let verdict = if is_model {
        IsotropyVerdict::Model
    } else if pattern.with_a_coefficients && torus_ok {
        IsotropyVerdict::OneParameter
    } else {
        IsotropyVerdict::Trivial
    };
    if verdict == IsotropyVerdict::Trivial {
        fields.clear();
    }
    if verdict == IsotropyVerdict::OneParameter {
        fields.retain(|(name, _)| *name == "chi");
    }
    Ok(IsotropyReport { verdict, k: t.k, m: t.m, n: t.n, fields, pattern, up_to: l })
}

/// `n j − m l` for `b^j x^l`: the torus field sends a term `c b^j x^l` of
/// `F` to the residual term `−(n j − m l) c b^j x^l`.
pub fn torus_weight(mo: &Monomial, m: u32, n: u32) -> Rational {
    r(n as i64 * mo.exp(Var::B) as i64 - m as i64 * mo.exp(Var::X) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::{int, rat};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn surface(k: u32, terms: &[(Rational, [u16; 3])], l: i32) -> SurfaceJet {
        let g = Grading::singular(k);
        SurfaceJet::new(WeightedPoly::from_terms(
            terms.iter().map(|(c, [a, b, x])| (Monomial::new(*a, *b, *x, 0, 0), c.clone())),
            g,
            l,
        ))
        .unwrap()
    }

    fn model(m: u16, n: u16, extra: &[(Rational, [u16; 3])], l: i32) -> SurfaceJet {
        let mut t = vec![(int(1), [1, 0, 0]), (int(1), [0, m, n])];
        t.extend_from_slice(extra);
        surface((m + n) as u32, &t, l)
    }

    #[test]
    fn model_fields_annihilate_models() {
        for k in 2..=8u16 {
            for m in 1..k {
                let n = k - m;
                let l = 3 * k as i32;
                let f = model(m, n, &[], l);
                for chi in [
                    weighted_euler_field(k as u32, l),
                    torus_field(m as u32, n as u32, l),
                    quadratic_field(m as u32, n as u32, l),
                ] {
                    assert!(apply_field(&chi, &f).unwrap().is_zero(), "k={k} m={m} {chi}");
                }
            }
        }
    }

    #[test]
    fn tangency_examples() {
        let chi = torus_field(2, 1, 10);
        let f = model(2, 1, &[(int(1), [0, 6, 3])], 10);
        assert!(is_infinitesimal_automorphism(&chi, &f, 10).unwrap());
        let f = model(2, 1, &[(int(1), [0, 3, 2])], 10);
        assert!(!is_infinitesimal_automorphism(&chi, &f, 10).unwrap());
        let res = apply_field(&chi, &f).unwrap();
        assert_eq!(res.coeff(&Monomial::new(0, 3, 2, 0, 0)), int(1));
        let zero = VFieldJet::zero(Grading::singular(3), 10);
        assert!(is_infinitesimal_automorphism(&zero, &f, 10).unwrap());
    }

    #[test]
    fn pattern_examples() {
        let f = model(2, 1, &[(int(1), [0, 4, 2]), (int(5), [0, 6, 3])], 12);
        assert!(monomial_pattern_check(&f, 2, 1).constant_coefficients);
        let f = model(2, 1, &[(int(1), [0, 3, 2])], 12);
        assert!(!monomial_pattern_check(&f, 2, 1).with_a_coefficients);
        let f = model(2, 1, &[(int(1), [1, 4, 2])], 12);
        let p = monomial_pattern_check(&f, 2, 1);
        assert!(p.with_a_coefficients && !p.constant_coefficients);
        assert!(monomial_pattern_check(&model(2, 3, &[], 12), 2, 3).constant_coefficients);
        assert!(is_integer_power_pattern(&Monomial::new(0, 4, 2, 0, 0), 2, 1));
        assert!(!is_integer_power_pattern(&Monomial::new(0, 3, 3, 0, 0), 2, 2));
    }

    #[test]
    fn isotropy_examples() {
        let r = isotropy_report(&model(2, 3, &[], 15), 15).unwrap();
        assert_eq!(r.verdict, IsotropyVerdict::Model);
        let names: Vec<_> = r.fields.iter().map(|(n, _)| *n).collect();
        assert_eq!(names, vec!["chi_0", "chi", "chi_k"]);
        assert_eq!(r.fields[1].1.to_string(), "3 b ∂b - 2 x ∂x");

        let r = isotropy_report(&model(2, 1, &[(int(1), [0, 4, 2])], 9), 9).unwrap();
        assert_eq!(r.verdict, IsotropyVerdict::OneParameter);
        assert_eq!(r.fields[0].1.to_string(), "b ∂b - 2 x ∂x");

        let r = isotropy_report(&model(2, 1, &[(int(1), [0, 3, 2])], 9), 9).unwrap();
        assert_eq!(r.verdict, IsotropyVerdict::Trivial);
        assert!(r.fields.is_empty());

        // a non-monomial model keeps only the Euler field
        let f = model(1, 2, &[(rat(1, 2), [0, 2, 1])], 9);
        let r = isotropy_report(&f, 9).unwrap();
        assert_eq!(r.verdict, IsotropyVerdict::Model);
        assert_eq!(r.fields.iter().map(|(n, _)| *n).collect::<Vec<_>>(), vec!["chi_0"]);
    }

    fn arb_field(k: u32) -> impl Strategy<Value = VFieldJet> {
        let g = Grading::singular(k);
        prop::collection::vec((0usize..4, 0u16..3, 0u16..3, -3i64..4), 0..6).prop_map(move |ts| {
            let mut v = VFieldJet::zero(g, 12);
            for (c, e1, e2, n) in ts {
                let one = |mo| WeightedPoly::monomial(int(n), mo, g, 12);
                let add = match c {
                    0 => VFieldJet { eta: one(Monomial::new(0, 0, e1, e2, 0)), ..VFieldJet::zero(g, 12) },
                    1 => VFieldJet { alpha: one(Monomial::new(e1, e2, 0, 0, 0)), ..VFieldJet::zero(g, 12) },
                    2 => VFieldJet { beta: one(Monomial::new(e1, e2, 0, 0, 0)), ..VFieldJet::zero(g, 12) },
                    _ => VFieldJet { xi: one(Monomial::new(0, 0, e1, e2, 0)), ..VFieldJet::zero(g, 12) },
                };
                v = v.add(&add);
            }
            v
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn residual_is_linear(v in arb_field(3), w in arb_field(3), c in -3i64..4) {
            let f = model(2, 1, &[(rat(1, 2), [1, 1, 1]), (int(2), [0, 3, 3])], 12);
            let lhs = apply_field(&v.scale(&int(c)).add(&w), &f).unwrap();
            let rhs = &apply_field(&v, &f).unwrap().scale(&int(c)) + &apply_field(&w, &f).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn off_pattern_monomial_breaks_tangency(m in 1u16..4, n in 1u16..4, j in 0u16..6, l in 0u16..6, c in 1i64..5) {
            let k = m + n;
            let extra = Monomial::new(0, j, l, 0, 0);
            let l_ord = 3 * k as i32;
            let w = Grading::singular(k as u32).weight(&extra);
            prop_assume!(w > k as u32 && w as i32 <= l_ord);
            let f = model(m, n, &[(int(c), [0, j, l]), (int(2), [0, 2 * m, 2 * n])], l_ord);
            let chi = torus_field(m as u32, n as u32, l_ord);
            let tangent = is_infinitesimal_automorphism(&chi, &f, l_ord).unwrap();
            prop_assert_eq!(tangent, torus_weight(&extra, m as u32, n as u32).is_zero());
            let report = isotropy_report(&f, l_ord).unwrap();
            if !monomial_pattern_check(&f, m as u32, n as u32).with_a_coefficients {
                prop_assert_ne!(report.verdict, IsotropyVerdict::OneParameter);
            }
        }
    }
}
