//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.

use std::f64::consts::PI;
use std::process::Command;

use frontlab::bundle::{bundle_point_unchecked, curvature_sample, gauss_density, torsion_residual, Role};
use frontlab::catalog::{build, list};
use frontlab::error::FrontError;
use frontlab::gauss_bonnet::{GbConfig, Report, Session};
use frontlab::geometry::{eval_jet, finite_difference_jet, norm, sub, Mode, Point2, Surface};
use frontlab::regions::{decompose_regions, integrate_region, Integrand, RegionLabel};
use frontlab::singular::{a3_sign, classify_singular_point, singular_curvature, ClassifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n}: {detail}");
}

fn surface(name: &str, params: &[(&str, f64)]) -> Box<dyn Surface> {
    let p: Vec<(String, f64)> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    build(name, &p).unwrap()
}

fn check(s: &dyn Surface, id: &str) -> Report {
    Session::new(s, GbConfig::default()).check(id).unwrap()
}

fn random_points(s: &dyn Surface, n: usize, seed: u64) -> Vec<Point2> {
    let d = s.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pad = 0.02;
    (0..n)
        .map(|_| {
            [
                rng.gen_range(d.u_range.0 + pad..d.u_range.1 - pad),
                rng.gen_range(d.v_range.0 + pad..d.v_range.1 - pad),
            ]
        })
        .collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn criterion_01_jet_oracle() {
    let mut worst: f64 = 0.0;
    let mut entries = 0;
    for e in list() {
        let s = build(e.name, &[]).unwrap();
        entries += 1;
        for q in random_points(s.as_ref(), 200, 11) {
            let jet = eval_jet(s.as_ref(), q).unwrap();
            let (f, nu) = finite_difference_jet(s.as_ref(), q, 1e-3).unwrap();
            let mut pairs = vec![(*jet.f(), f)];
            if let (Some(a), Some(b)) = (jet.nu(), nu) {
                pairs.push((*a, b));
            }
            for (a, b) in pairs {
                let scale = a.entries().iter().map(|x| norm(*x)).fold(1.0, f64::max);
                for (x, y) in a.entries().iter().zip(b.entries().iter()) {
                    worst = worst.max(norm(sub(*x, *y)) / scale);
                }
            }
        }
    }
    verdict(1, worst < 1e-6, format!("{entries} entries x 200 points, max relative jet difference {worst:.2e}"));
}

#[test]
fn criterion_02_pointwise_identities() {
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    let mut psi_singular = Vec::new();
    let mut failures = Vec::new();
    for e in list().into_iter().filter(|e| e.mode != Mode::Map) {
        let s = build(e.name, &[]).unwrap();
        let c = s.ambient().curvature();
        let (mut used, mut sharp) = (0, 0);
        for q in random_points(s.as_ref(), 400, 5) {
            if used == 100 {
                break;
            }
            let Ok(k) = curvature_sample(s.as_ref(), q) else { continue };
            let (Some(ls), Some(kk), Some(ke)) = (k.lambda_sharp, k.k, k.k_ext) else { continue };
            if k.lambda.abs() < 1e-3 {
                continue;
            }
            used += 1;
            let mut rel = |a: f64, b: f64, what: &str| {
                let r = (a - b).abs() / a.abs().max(b.abs()).max(1.0);
                worst = worst.max(r);
                if r > 1e-8 {
                    failures.push(format!("{} {what} at {q:?}: {a} vs {b}", e.name));
                }
            };
            rel(kk, c + ke, "K = c + K^ext");
            rel(ls, ke * k.lambda, "lambda# = K^ext lambda");
            for role in [Role::Phi, Role::Psi] {
                let t = norm(torsion_residual(s.as_ref(), q, role).unwrap());
                rel(t, 0.0, "torsion");
            }
            // the remaining identities need psi regular as well
            let (Some(kes), Some(ks)) = (k.k_ext_sharp, k.k_sharp) else { continue };
            if ls.abs() < 1e-3 {
                continue;
            }
            sharp += 1;
            rel(ke * kes, 1.0, "K^ext K#^ext = 1");
            rel(kk * k.lambda, ks * ls, "K lambda = K# lambda#");
            if c == 0.0 {
                rel(ks, 1.0, "K# = 1");
            }
        }
        assert!(used >= 50, "{}: only {used} regular points", e.name);
        if sharp == 0 {
            psi_singular.push(e.name);
        }
        tested += 1;
    }
    verdict(
        2,
        failures.is_empty(),
        format!(
            "{tested} front-mode entries, max relative residual {worst:.2e}, psi nowhere regular on {psi_singular:?} {:?}",
            failures.first()
        ),
    );
}

/// Geodesic curvature at `t = 0` of the image parabola `(ε t², -t)`, run so
/// that the image `x ≥ ε y²` of `f_ε` is on its left.
fn parabola_curvature(eps: f64) -> f64 {
    let d1 = [0.0, -1.0];
    let d2 = [2.0 * eps, 0.0];
    (d1[0] * d2[1] - d1[1] * d2[0]) / (d1[0] * d1[0] + d1[1] * d1[1]).powf(1.5)
}

#[test]
fn criterion_03_fold_curvature() {
    let mut ok = true;
    let mut detail = Vec::new();
    for eps in [1.0, -1.0] {
        let s = surface("fold_map", &[("eps", eps)]);
        let k = singular_curvature(s.as_ref(), [0.0, 0.0], Role::Phi).unwrap().kappa.unwrap();
        let oracle = parabola_curvature(eps);
        ok &= (k - oracle).abs() < 1e-6 && k.signum() == eps;
        detail.push(format!("eps {eps:+}: kappa {k:.9} oracle {oracle}"));
    }
    verdict(3, ok, detail.join(", "));
}

#[test]
fn criterion_04_classifier() {
    let mut got = Vec::new();
    let mut ok = true;
    for (name, want) in [
        ("fold_nf", "A2"),
        ("cusp_nf", "A3+"),
        ("butterfly_nf", "butterfly"),
        ("lips_nf", "lips"),
        ("beaks_nf", "beaks"),
    ] {
        let s = surface(name, &[]);
        let opts = ClassifyOptions::for_surface(s.as_ref(), Role::Phi);
        let r = classify_singular_point(s.as_ref(), [0.0, 0.0], Role::Phi, &opts).unwrap();
        ok &= r.class.label() == want;
        got.push(format!("{name}={}", r.class.label()));
    }
    let signs: Vec<i8> = [1.0, -1.0]
        .iter()
        .map(|&refl| {
            let s = surface("cusp_nf", &[("reflect", refl)]);
            let opts = ClassifyOptions::for_surface(s.as_ref(), Role::Phi);
            a3_sign(&classify_singular_point(s.as_ref(), [0.0, 0.0], Role::Phi, &opts).unwrap()).unwrap()
        })
        .collect();
    ok &= signs == [1, -1];
    verdict(4, ok, format!("{} cusp signs {signs:?}", got.join(" ")));
}

#[test]
fn criterion_05_torus() {
    let s = surface("torus", &[("R", 2.0), ("r", 1.0)]);
    let cfg = GbConfig::default();
    let d = decompose_regions(s.as_ref(), Role::Psi, cfg.grid, cfg.refine_tol).unwrap();
    let c = s.ambient().curvature();
    let w = |q: Point2| gauss_density(&bundle_point_unchecked(s.as_ref(), q), c);
    // an immersion has λ > 0, so K dA is the smooth density itself
    let plus = integrate_region(s.as_ref(), &d, RegionLabel::Plus, Integrand::Smooth(&w), cfg.quad_tol).unwrap().value;
    let minus = integrate_region(s.as_ref(), &d, RegionLabel::Minus, Integrand::Smooth(&w), cfg.quad_tol).unwrap().value;
    let th_c = check(s.as_ref(), "c");
    let quine = check(s.as_ref(), "quine");
    let id = check(s.as_ref(), "id");
    let ok = close(plus, 4.0 * PI, 1e-3)
        && close(minus, -4.0 * PI, 1e-3)
        && th_c.pass
        && close(th_c.lhs, -4.0 * PI, 1e-2)
        && close(th_c.rhs, -4.0 * PI, 1e-2)
        && quine.pass
        && quine.lhs == 0.0
        && quine.rhs == 0.0
        && id.residual < 1e-2 * 4.0 * PI;
    verdict(
        5,
        ok,
        format!(
            "int_M+ K dA {plus:.6}, int_M- K dA {minus:.6}, theorem c {:.6} = {:.6}, quine {} = {}, id residual {:.2e}",
            th_c.lhs, th_c.rhs, quine.lhs, quine.rhs, id.residual
        ),
    );
}

#[test]
fn criterion_06_ellipsoid_parallel() {
    let s = surface("ellipsoid_parallel", &[("t", 5.5)]);
    let sess = Session::new(s.as_ref(), GbConfig::default());
    let a = sess.analysis(Role::Phi).unwrap();
    let signs: Vec<i8> = a.curves().iter().flat_map(|c| c.a3_markers.iter().map(|m| m.sign)).collect();
    let b = sess.check("b").unwrap();
    let ok = signs.len() == 4 && signs.iter().all(|&x| x == -1) && a.chi_minus == -2 && b.pass && b.lhs == -4.0 && b.rhs == -4.0;
    verdict(
        6,
        ok,
        format!("A3 signs {signs:?}, chi(M-) {}, theorem b {} = {}", a.chi_minus, b.lhs, b.rhs),
    );
}

#[test]
fn criterion_07_cycloid_torus() {
    let s = surface("cycloid_B", &[]);
    let cfg = GbConfig::default();
    let sess = Session::new(s.as_ref(), cfg);
    let g = sess.check("g").unwrap();
    let m = sess.check("1m").unwrap();
    let bdd = sess.check("bdd").unwrap();
    let ok = g.pass
        && g.terms["k_ext_max"] < 0.0
        && g.terms["max_abs_log_k_ext"] < 50.0
        && m.residual < 1e-3 * 2.0 * PI
        && bdd.pass
        && bdd.terms["sign_k_ext"] == -1.0
        && bdd.terms["set_distance"] <= 10.0 * cfg.refine_tol
        && bdd.terms["density_mismatch"] < 1e-6;
    verdict(
        7,
        ok,
        format!(
            "K^ext in [{:.4}, {:.4}], 1m residual {:.2e}, set distance {:.2e}, density mismatch {:.2e}",
            g.terms["k_ext_min"], g.terms["k_ext_max"], m.residual, bdd.terms["set_distance"], bdd.terms["density_mismatch"]
        ),
    );
}

#[test]
fn criterion_08_clifford_torus() {
    let s = surface("clifford", &[]);
    let worst = random_points(s.as_ref(), 200, 3)
        .into_iter()
        .map(|q| (curvature_sample(s.as_ref(), q).unwrap().k_ext.unwrap() + 1.0).abs())
        .fold(0.0, f64::max);
    let sess = Session::new(s.as_ref(), GbConfig::default());
    let singular: usize = [Role::Phi, Role::Psi]
        .iter()
        .map(|&r| {
            let a = sess.analysis(r).unwrap();
            a.curves().len() + a.critical_points.len()
        })
        .sum();
    let e = sess.check("e").unwrap();
    let g = sess.check("g").unwrap();
    let ok = worst < 1e-12 && singular == 0 && e.pass && g.pass && g.lhs == 0.0;
    verdict(
        8,
        ok,
        format!("max |K^ext + 1| {worst:.1e}, singular curves {singular}, e {} = {}, chi {}", e.lhs, e.rhs, g.lhs),
    );
}

#[test]
fn criterion_09_infty() {
    let s = surface("ellipsoid_parallel", &[]);
    let r = check(s.as_ref(), "infty");
    verdict(
        9,
        r.pass && r.terms["markers"] == 4.0,
        format!(
            "markers {}, max kappa {:.4}, min growth {:.4}, density variation {:.4}",
            r.terms["markers"], r.terms["max_kappa"], r.terms["min_growth"], r.terms["density_variation"]
        ),
    );
}

fn integer_of(sess: &Session, role: Role) -> Result<i64, FrontError> {
    let a = sess.analysis(role)?;
    a.require_a2_a3()?;
    Ok(a.chi_plus - a.chi_minus + a.s_plus - a.s_minus)
}

#[test]
fn criterion_10_integer_consistency() {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut tested = 0;
    for e in list().into_iter().filter(|e| e.closed) {
        let s = build(e.name, &[]).unwrap();
        let roles: &[Role] = if e.mode == Mode::Map { &[Role::Phi] } else { &[Role::Phi, Role::Psi] };
        for &role in roles {
            let id = if role == Role::Phi { "1p" } else { "2p" };
            let coarse = Session::new(s.as_ref(), GbConfig::default());
            let r = match coarse.check(id) {
                Ok(r) => r,
                Err(FrontError::Hypothesis(_) | FrontError::UnsupportedSingularity(_)) => continue,
                Err(err) => panic!("{} {id}: {err}", e.name),
            };
            let n = integer_of(&coarse, role).unwrap();
            let fine = Session::new(s.as_ref(), GbConfig { grid: (512, 512), ..GbConfig::default() });
            let m = integer_of(&fine, role);
            let t = r.lhs / (2.0 * PI);
            let good = (t - n as f64).abs() < 1e-3 && m.as_ref().ok() == Some(&n);
            if !good {
                lines.push(format!("{} {id}: {t:.6} vs {n}, refined {m:?}", e.name));
            }
            ok &= good;
            tested += 1;
        }
    }
    verdict(10, ok && tested > 10, format!("{tested} surface/role pairs {lines:?}"));
}

#[test]
fn criterion_11_levine() {
    let sp = check(surface("sphere_projection", &[]).as_ref(), "levine");
    let bp = check(surface("bumpy_sphere_projection", &[]).as_ref(), "levine");
    let ok = sp.pass
        && sp.terms["curves"] == 1.0
        && sp.terms["rotation_index_0"] == 1.0
        && sp.lhs == 2.0
        && bp.pass
        && bp.terms["sum_rotation_index"] == 1.0
        && bp.terms["cusps"] > 0.0;
    verdict(
        11,
        ok,
        format!(
            "sphere I(C1) {}, bumpy sum I {} over {} curves with {} cusps",
            sp.terms["rotation_index_0"], bp.terms["sum_rotation_index"], bp.terms["curves"], bp.terms["cusps"]
        ),
    );
}

#[test]
fn criterion_12_determinism() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_frontlab"))
            .args(["verify", "--surface", "torus", "--target", "all", "--json"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    let ok = a.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    verdict(12, ok, format!("{} bytes, exit {:?}", a.stdout.len(), a.status.code()));
}
