use frontlab::catalog::{build, list};
use frontlab::geometry::{
    dot, eval_jet, finite_difference_jet, norm, sub, AVec, Fiber, Jet2, Mode, Point2, Surface,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

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

fn max_diff(a: &Jet2, b: &Jet2) -> (f64, f64) {
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (x, y) in a.entries().iter().zip(b.entries().iter()) {
        diff = diff.max(norm(sub(*x, *y)));
        scale = scale.max(norm(*x));
    }
    (diff, scale)
}

#[test]
fn analytic_jets_match_finite_differences() {
    for entry in list() {
        let s = build(entry.name, &[]).unwrap();
        for q in random_points(&*s, 100, 7) {
            let jet = eval_jet(&*s, q).unwrap();
            let (f, nu) = finite_difference_jet(&*s, q, 1e-3).unwrap();
            let (d, sc) = max_diff(jet.f(), &f);
            assert!(d <= 1e-6 * sc.max(1.0), "{} f at {q:?}: {d}", entry.name);
            if let (Some(a), Some(b)) = (jet.nu(), nu) {
                let (d, sc) = max_diff(a, &b);
                assert!(d <= 1e-6 * sc.max(1.0), "{} nu at {q:?}: {d}", entry.name);
            }
        }
    }
}

#[test]
fn spec_points() {
    let sph = build("sphere", &[]).unwrap();
    let j = eval_jet(&*sph, [std::f64::consts::FRAC_PI_2, 0.0]).unwrap();
    assert!(norm(sub(j.f().p, [1.0, 0.0, 0.0, 0.0])) < 1e-15);
    assert!(norm(sub(j.nu().unwrap().p, [1.0, 0.0, 0.0, 0.0])) < 1e-15);

    let fold = build("fold_map", &[("box".into(), 3.0)]).unwrap();
    let j = eval_jet(&*fold, [1.0, 2.0]).unwrap();
    assert!(norm(sub(j.f().p, [5.0, 2.0, 0.0, 0.0])) < 1e-15);
    assert!(norm(sub(j.f().p_u, [2.0, 0.0, 0.0, 0.0])) < 1e-15);
    assert!(norm(sub(j.f().p_v, [4.0, 1.0, 0.0, 0.0])) < 1e-15);

    let t = build("torus", &[]).unwrap();
    let j = eval_jet(&*t, [0.0, 0.0]).unwrap();
    assert!(norm(sub(j.f().p, [3.0, 0.0, 0.0, 0.0])) < 1e-15);
    assert!(norm(sub(j.nu().unwrap().p, [1.0, 0.0, 0.0, 0.0])) < 1e-15);
}

#[test]
fn pole_and_outside_points_are_rejected() {
    let sph = build("sphere", &[]).unwrap();
    assert!(eval_jet(&*sph, [0.0, 1.0]).is_err());
    let fold = build("fold_map", &[]).unwrap();
    assert!(eval_jet(&*fold, [1.5, 0.0]).is_err());
    assert!(finite_difference_jet(&*fold, [0.0, 0.0], 1e-9).is_err());
}

#[test]
fn frontal_condition_and_unit_normal() {
    for entry in list().into_iter().filter(|e| e.mode != Mode::Map) {
        let s = build(entry.name, &[]).unwrap();
        for q in random_points(&*s, 100, 11) {
            let j = eval_jet(&*s, q).unwrap();
            let nu = j.nu().unwrap();
            let model = s.ambient();
            assert!((model.inner(nu.p, nu.p) - 1.0).abs() < 1e-12, "{}", entry.name);
            let sc = norm(j.f().p_u) + norm(j.f().p_v) + 1.0;
            assert!(model.inner(j.f().p_u, nu.p).abs() < 1e-10 * sc, "{}", entry.name);
            assert!(model.inner(j.f().p_v, nu.p).abs() < 1e-10 * sc, "{}", entry.name);
        }
    }
}

fn fiber_strategy() -> impl Strategy<Value = (Fiber, AVec, AVec)> {
    let v = || prop::array::uniform4(-2.0f64..2.0);
    (0usize..3, 0.1f64..3.0, 0.1f64..6.0, v(), v()).prop_map(|(kind, th, ph, x, y)| {
        let n = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos(), 0.0];
        let fb = match kind {
            0 => Fiber {
                model: frontlab::AmbientKind::Euclidean3,
                p: [0.0; 4],
                nu: Some(n),
            },
            1 => {
                // point and normal on the unit 3-sphere, orthogonal to each other
                let p = [n[1], -n[0], 0.0, 1.0];
                let pn = norm(p);
                Fiber {
                    model: frontlab::AmbientKind::Sphere3,
                    p: [p[0] / pn, p[1] / pn, 0.0, 1.0 / pn],
                    nu: Some(n),
                }
            }
            _ => Fiber {
                model: frontlab::AmbientKind::SphereTarget2,
                p: n,
                nu: None,
            },
        };
        let x3 = if fb.model.dim() == 3 { [x[0], x[1], x[2], 0.0] } else { x };
        let y3 = if fb.model.dim() == 3 { [y[0], y[1], y[2], 0.0] } else { y };
        (fb, x3, y3)
    })
}

proptest! {
    #[test]
    fn projection_is_idempotent_and_self_adjoint((fb, x, y) in fiber_strategy()) {
        let px = fb.project(x);
        prop_assert!(norm(sub(fb.project(px), px)) < 1e-12);
        let lhs = fb.inner(fb.project(x), y);
        let rhs = fb.inner(x, fb.project(y));
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn mu_is_alternating_and_unit_on_frames((fb, x, y) in fiber_strategy()) {
        let (e1, e2) = fb.frame();
        prop_assert!((fb.mu(e1, e2) - 1.0).abs() < 1e-12);
        let (px, py) = (fb.project(x), fb.project(y));
        prop_assert!((fb.mu(px, py) + fb.mu(py, px)).abs() < 1e-12);
        prop_assert!(fb.mu(px, px).abs() < 1e-12);
        let z = [px[0] * 2.0 + py[0], px[1] * 2.0 + py[1], px[2] * 2.0 + py[2], px[3] * 2.0 + py[3]];
        prop_assert!((fb.mu(z, py) - 2.0 * fb.mu(px, py)).abs() < 1e-10);
        let _ = dot(x, y);
    }
}
