// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use paracr::autodetect::{is_infinitesimal_automorphism, apply_field, quadratic_field, torus_field, weighted_euler_field};
use paracr::cli::run;
use paracr::cmoperator::{
    field_basis, normal_complement_monomials, operator_matrix, operator_report, poly_basis, poly_coordinates,
    Component, FieldElem, VFieldJet,
};
use paracr::jetring::{int, rat, Grading, Monomial, Rational, Var, WeightedPoly};
use paracr::linalg::Matrix;
use paracr::odebridge::{
    check_ode_normal, linear_ode, linear_ode_surface, ode_to_surface, surface_to_ode, tresse_first_invariant, OdeJet,
};
use paracr::regnorm::{apply_map, check_normal_conditions, geometric_normalize, normalize_jet, SurfaceJet};
use paracr::singnorm::{check_singular_normal, normalize_singular_jet, TypeData};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Option<f64>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let res = f();
    let secs = start.elapsed().as_secs_f64();
    let detail = res?;
    match limit {
        Some(l) if secs >= l => Err(format!("{detail}; took {secs:.2} s, limit {l} s")),
        Some(l) => Ok(format!("{detail}; {secs:.2} s (limit {l} s)")),
        None => Ok(format!("{detail}; {secs:.2} s")),
    }
}

fn reg() -> Grading {
    Grading::regular()
}

fn random_regular_jet(rng: &mut ChaCha8Rng, l: i32, density: f64) -> SurfaceJet {
    let mut terms = Vec::new();
    for w in 3..=l as u32 {
        for m in reg().monomials_of_weight(&[Var::A, Var::B, Var::X], w) {
            if rng.gen_bool(density) {
                terms.push((m, rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
            }
        }
    }
    SurfaceJet::regular(&WeightedPoly::from_terms(terms, reg(), l)).expect("valid jet")
}

fn field(terms: &[(Component, Monomial, i64)], ell: u32) -> VFieldJet {
    let basis: Vec<FieldElem> = terms.iter().map(|(c, m, _)| FieldElem { component: *c, monomial: *m }).collect();
    let coords: Vec<Rational> = terms.iter().map(|(_, _, c)| int(*c)).collect();
    VFieldJet::from_coordinates(&basis, &coords, reg(), ell as i32)
}

fn m(a: u16, b: u16, x: u16, y: u16) -> Monomial {
    Monomial::new(a, b, x, y, 0)
}

/// Kernels listed for weights 0..4, with the weight-1 entry `b∂a − ∂x`
/// (the listed `b∂a − ∂b` is not annihilated).
fn reference_kernels() -> Vec<Vec<VFieldJet>> {
    use Component::*;
    vec![
        vec![field(&[(Eta, m(0, 0, 0, 0), 1), (Alpha, m(0, 0, 0, 0), 1)], 0)],
        vec![
            field(&[(Eta, m(0, 0, 1, 0), 1), (Beta, m(0, 0, 0, 0), 1)], 1),
            field(&[(Alpha, m(0, 1, 0, 0), 1), (Xi, m(0, 0, 0, 0), -1)], 1),
        ],
        vec![
            field(&[(Eta, m(0, 0, 0, 1), 1), (Alpha, m(1, 0, 0, 0), 1), (Beta, m(0, 1, 0, 0), 1)], 2),
            field(&[(Beta, m(0, 1, 0, 0), 1), (Xi, m(0, 0, 1, 0), -1)], 2),
        ],
        vec![
            field(&[(Alpha, m(1, 1, 0, 0), 1), (Beta, m(0, 2, 0, 0), 1), (Xi, m(0, 0, 0, 1), -1)], 3),
            field(&[(Eta, m(0, 0, 1, 1), 1), (Xi, m(0, 0, 2, 0), 1), (Beta, m(1, 0, 0, 0), 1)], 3),
        ],
        vec![field(
            &[(Eta, m(0, 0, 0, 2), 1), (Xi, m(0, 0, 1, 1), 1), (Alpha, m(2, 0, 0, 0), 1), (Beta, m(1, 1, 0, 0), 1)],
            4,
        )],
    ]
}

fn rank_of(vectors: &[Vec<Rational>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(dim, vectors).rank()
}

fn criterion_1() -> Outcome {
    timed(Some(1.0), || {
        let dims = [(2, 1), (4, 2), (6, 2), (8, 2), (10, 1)];
        for (ell, refs) in reference_kernels().into_iter().enumerate() {
            let r = operator_report(ell as u32);
            ensure((r.domain_dim, r.kernel_dim) == dims[ell], || {
                format!("weight {ell}: (domain, kernel) = ({}, {})", r.domain_dim, r.kernel_dim)
            })?;
            let basis = field_basis(reg(), ell as u32);
            let ours: Vec<Vec<Rational>> = r.kernel_basis.iter().map(|v| v.coordinates(&basis)).collect();
            let theirs: Vec<Vec<Rational>> = refs.iter().map(|v| v.coordinates(&basis)).collect();
            let both: Vec<Vec<Rational>> = ours.iter().chain(&theirs).cloned().collect();
            let (a, b, c) = (rank_of(&ours, basis.len()), rank_of(&theirs, basis.len()), rank_of(&both, basis.len()));
            ensure(a == b && b == c, || format!("weight {ell}: ranks ours {a}, reference {b}, joint {c}"))?;
        }
        Ok("(domain, kernel) dims (2,1),(4,2),(6,2),(8,2),(10,1), kernel spans equal by exact rank (weight-1 element read as b∂a - ∂x)".into())
    })
}

fn criterion_2() -> Outcome {
    timed(Some(5.0), || {
        for ell in 5..=12 {
            let k = operator_matrix(ell).kernel_basis().len();
            ensure(k == 0, || format!("weight {ell}: kernel dimension {k}"))?;
        }
        Ok("kernel dimension 0 at every weight".into())
    })
}

fn criterion_3() -> Outcome {
    timed(Some(5.0), || {
        let mut sizes = Vec::new();
        for ell in 3..=12u32 {
            let op = operator_matrix(ell);
            let image = op.image_basis();
            let comp = normal_complement_monomials(ell);
            let space = poly_basis(reg(), ell);
            ensure(image.len() + comp.len() == space.len(), || {
                format!("weight {ell}: image {} + complement {} != {}", image.len(), comp.len(), space.len())
            })?;
            let mut cols: Vec<Vec<Rational>> =
                image.iter().map(|p| poly_coordinates(p, &space).expect("weight homogeneous")).collect();
            for c in &comp {
                cols.push(space.iter().map(|s| if s == c { int(1) } else { int(0) }).collect());
            }
            let r = rank_of(&cols, space.len());
            ensure(r == space.len(), || format!("weight {ell}: joint rank {r} < {}", space.len()))?;
            if ell <= 6 {
                sizes.push(comp.len());
            }
        }
        ensure(sizes == [0, 0, 0, 2], || format!("complement sizes at weights 3..6: {sizes:?}"))?;
        Ok("weights 3..12: image + complement = whole weight space with full joint rank; complement sizes 0,0,0,2 at 3..6".into())
    })
}

fn criterion_4() -> Outcome {
    timed(Some(60.0), || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 200;
        for i in 0..n {
            let f = random_regular_jet(&mut rng, 8, 0.5);
            let r = normalize_jet(&f).map_err(|e| format!("jet {i}: {e}"))?;
            ensure(check_normal_conditions(&r.normalized).all(), || format!("jet {i}: conditions fail"))?;
            let mapped = apply_map(&f, &r.transform).map_err(|e| format!("jet {i}: {e}"))?;
            ensure(mapped == r.normalized, || format!("jet {i}: transform does not reproduce the normal form"))?;
        }
        Ok(format!("{n} random jets at L=8: conditions hold and the transform reproduces the output exactly"))
    })
}

fn criterion_5() -> Outcome {
    timed(Some(120.0), || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 50;
        for i in 0..n {
            let f = random_regular_jet(&mut rng, 8, 0.5);
            let r = geometric_normalize(&f).map_err(|e| format!("jet {i}: {e}"))?;
            let c = check_normal_conditions(&r.normalized);
            ensure(c.all(), || format!("jet {i}: conditions {:?} fail", c.failures()))?;
            let mapped = apply_map(&f, &r.transform).map_err(|e| format!("jet {i}: {e}"))?;
            ensure(mapped == r.normalized, || format!("jet {i}: transform does not reproduce the output"))?;
        }
        Ok(format!("{n} random jets at L=8: geometric construction output satisfies all conditions"))
    })
}

fn criterion_6() -> Outcome {
    timed(None, || {
        let flat = SurfaceJet::regular(&WeightedPoly::zero(reg(), 8)).expect("flat");
        let r = normalize_jet(&flat).map_err(|e| e.to_string())?;
        ensure(r.normalized == flat && r.transform.is_identity(), || "flat surface moved".into())?;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut nonflat = 0;
        for i in 0..100 {
            let f = random_regular_jet(&mut rng, 8, 0.4);
            let r = normalize_jet(&f).map_err(|e| format!("jet {i}: {e}"))?;
            if let Some(w) = r.normalized.regular_remainder().min_weight() {
                nonflat += 1;
                ensure(w >= 6, || format!("jet {i}: lowest weight {w}"))?;
            }
        }
        Ok(format!("a + b x fixed with identity map; {nonflat} non-flat normal forms all start at weight >= 6"))
    })
}

fn criterion_7() -> Outcome {
    timed(Some(30.0), || {
        let u = Grading::uniform();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 200;
        for i in 0..n {
            let mut terms = Vec::new();
            for d in 0..=6 {
                for mo in u.monomials_of_weight(&[Var::X, Var::Y, Var::P], d) {
                    if rng.gen_bool(0.25) {
                        terms.push((mo, rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))));
                    }
                }
            }
            let b = OdeJet::new(WeightedPoly::from_terms(terms, u, 6)).expect("ode");
            let f = ode_to_surface(&b, 8).map_err(|e| format!("ode {i}: {e}"))?;
            let (back, _) = surface_to_ode(&f).map_err(|e| format!("ode {i}: {e}"))?;
            ensure(back == b, || format!("ode {i}: B -> F -> B differs"))?;

            let a = WeightedPoly::var(Var::A, u, 6);
            let bx = &WeightedPoly::var(Var::B, u, 6) * &WeightedPoly::var(Var::X, u, 6);
            let mut rest = Vec::new();
            for d in 2..=6 {
                for mo in u.monomials_of_weight(&[Var::A, Var::B, Var::X], d) {
                    if mo.exp(Var::X) >= 2 && rng.gen_bool(0.25) {
                        rest.push((mo, rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))));
                    }
                }
            }
            let surf = SurfaceJet::new(&(&a + &bx) + &WeightedPoly::from_terms(rest, u, 6)).expect("surface");
            let (ode, _) = surface_to_ode(&surf).map_err(|e| format!("surface {i}: {e}"))?;
            let again = ode_to_surface(&ode, 6).map_err(|e| format!("surface {i}: {e}"))?;
            ensure(again == surf, || format!("surface {i}: F -> B -> F differs"))?;
        }
        Ok(format!("{n} random pairs: B (degree 6) -> F -> B and F (degree 6) -> B -> F are exact identities"))
    })
}

fn criterion_8() -> Outcome {
    timed(None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = 100;
        for i in 0..n {
            let f = random_regular_jet(&mut rng, 12, 0.3);
            let r = normalize_jet(&f).map_err(|e| format!("jet {i}: {e}"))?;
            let (b, data) = surface_to_ode(&r.normalized).map_err(|e| format!("jet {i}: {e}"))?;
            let c = check_ode_normal(&b);
            ensure(c.normal, || format!("jet {i}: offending families {:?}", c.offending))?;
            ensure(data.phi_divisible_by_p2(), || format!("jet {i}: some phi_n not divisible by p^2"))?;
        }
        Ok(format!(
            "{n} random jets normalized at L=12: the ODE (to degree 4) has B_i0 = B_i1 = B_02 = B_03 = B_12 = B_13 = 0 and p^2 divides every phi_n"
        ))
    })
}

fn criterion_9() -> Outcome {
    timed(None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..10 {
            let r = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            let s = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
            let f = linear_ode_surface(&r, &s, 8).map_err(|e| e.to_string())?;
            let n = normalize_jet(&f).map_err(|e| format!("pair {i}: {e}"))?;
            ensure(n.normalized.regular_remainder().is_zero(), || {
                format!("pair {i} (r={r}, s={s}): normal form {}", n.normalized)
            })?;
            ensure(tresse_first_invariant(&linear_ode(&r, &s, 6)).is_zero(), || format!("pair {i}: invariant"))?;
        }
        Ok("10 random (r, s): surface of y'' + r y' + s y = 0 normalizes to a + b x through weight 8, first invariant 0".into())
    })
}

fn random_singular_jet(rng: &mut ChaCha8Rng, t: &TypeData, l: i32) -> SurfaceJet {
    let g = Grading::singular(t.k);
    let mut f = &WeightedPoly::var(Var::A, g, l) + &t.model(l);
    let mut terms = Vec::new();
    for w in t.k + 1..=l as u32 {
        for mo in poly_basis(g, w) {
            if rng.gen_bool(0.35) {
                terms.push((mo, rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))));
            }
        }
    }
    f = &f + &WeightedPoly::from_terms(terms, g, l);
    SurfaceJet::new(f).expect("valid jet")
}

fn criterion_10() -> Outcome {
    timed(Some(120.0), || {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let per_k = 50;
        for k in 3..=5u32 {
            let l = k as i32 + 6;
            for i in 0..per_k {
                let m = rng.gen_range(1..k);
                let mut gammas = Vec::new();
                for j in m + 1..k {
                    if rng.gen_bool(0.5) {
                        gammas.push((j, rat(rng.gen_range(1..=4), rng.gen_range(1..=3))));
                    }
                }
                let t = TypeData { k, m, n: k - m, gammas };
                let g = Grading::singular(k);
                let model = SurfaceJet::new(&WeightedPoly::var(Var::A, g, l) + &t.model(l)).expect("model");
                let fixed = normalize_singular_jet(&model).map_err(|e| format!("k={k} model: {e}"))?;
                ensure(fixed.normalized == model && fixed.transform.is_identity(), || format!("k={k} m={m}: model moved"))?;

                let f = random_singular_jet(&mut rng, &t, l);
                let r = normalize_singular_jet(&f).map_err(|e| format!("k={k} jet {i}: {e}"))?;
                let c = check_singular_normal(&r.normalized, &t, l);
                ensure(c.is_normal(), || format!("k={k} jet {i}: forbidden terms {:?}", c.offending))?;
                let mapped = apply_map(&f, &r.transform).map_err(|e| format!("k={k} jet {i}: {e}"))?;
                ensure(mapped == r.normalized, || format!("k={k} jet {i}: transform does not reproduce the output"))?;
            }
        }
        Ok(format!("k = 3, 4, 5 with {per_k} random jets each at L = k+6: normal, transform exact, models fixed"))
    })
}

fn on_ray(mo: &Monomial, m: u16, n: u16) -> bool {
    n * mo.exp(Var::B) == m * mo.exp(Var::X)
}

fn criterion_11() -> Outcome {
    timed(None, || {
        let mut flips = 0;
        for k in 2..=8u16 {
            for m in 1..k {
                let n = k - m;
                let (ku, mu, nu) = (k as u32, m as u32, n as u32);
                let l = 3 * k as i32;
                let g = Grading::singular(ku);
                let model = &WeightedPoly::var(Var::A, g, l) + &WeightedPoly::monomial(int(1), Monomial::new(0, m, n, 0, 0), g, l);
                let fm = SurfaceJet::new(model.clone()).expect("model");
                for (name, chi) in [
                    ("chi_0", weighted_euler_field(ku, l)),
                    ("chi", torus_field(mu, nu, l)),
                    ("chi_k", quadratic_field(mu, nu, l)),
                ] {
                    let res = apply_field(&chi, &fm).map_err(|e| e.to_string())?;
                    ensure(res.is_zero(), || format!("(m,n)=({m},{n}): {name} residual {res}"))?;
                }
                let chi = torus_field(mu, nu, l);
                let pattern = &model
                    + &WeightedPoly::from_terms(
                        [(Monomial::new(0, 2 * m, 2 * n, 0, 0), rat(3, 2)), (Monomial::new(0, 3 * m, 3 * n, 0, 0), int(-2))],
                        g,
                        l,
                    );
                let fp = SurfaceJet::new(pattern.clone()).expect("pattern");
                ensure(is_infinitesimal_automorphism(&chi, &fp, l).map_err(|e| e.to_string())?, || {
                    format!("(m,n)=({m},{n}): pattern surface not preserved")
                })?;
                for w in ku + 1..=3 * ku {
                    for mo in poly_basis(g, w) {
                        if on_ray(&mo, m, n) {
                            continue;
                        }
                        let f = SurfaceJet::new(&pattern + &WeightedPoly::monomial(int(1), mo, g, l)).expect("jet");
                        let tangent = is_infinitesimal_automorphism(&chi, &f, l).map_err(|e| e.to_string())?;
                        ensure(!tangent, || format!("(m,n)=({m},{n}): injecting {mo} keeps tangency"))?;
                        flips += 1;
                    }
                }
            }
        }
        Ok(format!(
            "m+n <= 8: chi_0, chi, chi_k annihilate every model exactly; pattern surfaces preserved at L=3k; {flips} single off-ray injections all flip the verdict"
        ))
    })
}

fn criterion_12() -> Outcome {
    timed(None, || {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
        let dims = [(2, 1), (4, 2), (6, 2), (8, 2), (10, 1)];
        for ell in 0..=4usize {
            let out = run(["paracr", "tables", "--ell", &ell.to_string(), "--json"]);
            ensure(out.code == 0, || format!("tables --ell {ell} exited {}", out.code))?;
            let path = dir.join(format!("tables_ell{ell}.json"));
            let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            ensure(out.stdout == golden, || format!("tables --ell {ell} differs from {}", path.display()))?;
            let v: serde_json::Value = serde_json::from_str(&golden).map_err(|e| e.to_string())?;
            let row = &v["rows"][0];
            let got = (row["domain_dim"].as_u64().unwrap_or(0), row["kernel_dim"].as_u64().unwrap_or(0));
            ensure(got == (dims[ell].0, dims[ell].1), || format!("golden weight {ell}: dims {got:?}"))?;
        }
        Ok("property checks above plus CLI golden files for the weight 0..4 operator table (byte-identical)".into())
    })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("model operator kernels, weights 0..4", criterion_1),
        ("trivial kernel, weights 5..12", criterion_2),
        ("image and retained monomials form a direct sum", criterion_3),
        ("jet normalization is sound", criterion_4),
        ("geometric construction reaches normal form", criterion_5),
        ("flat surface is rigid", criterion_6),
        ("ODE and surface round trips", criterion_7),
        ("normalized surfaces give normalized ODEs", criterion_8),
        ("linear ODEs are flat", criterion_9),
        ("singular normal form", criterion_10),
        ("automorphism certificates", criterion_11),
        ("CLI golden files", criterion_12),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {title}: {detail} (tolerance 0, exact arithmetic)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
