use std::f64::consts::TAU;

use frontlab::gauss_bonnet::rotation_index;
use proptest::prelude::*;

// circle traversed w times with a small wobble; regular, index w
fn wobbly(w: i32, eps: f64, n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            let r = 1.0 + eps * (3.0 * t).cos();
            let a = w as f64 * t;
            [r * a.cos(), r * a.sin()]
        })
        .collect()
}

// hypocycloid with c cusps: (c-1)cos t + cos((c-1)t), (c-1)sin t - sin((c-1)t)
fn hypocycloid(c: usize, n: usize) -> Vec<[f64; 2]> {
    let m = (c - 1) as f64;
    (0..n)
        .map(|k| {
            let t = TAU * (k as f64 + 0.37) / n as f64;
            [m * t.cos() + (m * t).cos(), m * t.sin() - (m * t).sin()]
        })
        .collect()
}

fn transform(pts: &[[f64; 2]], theta: f64, s: f64, shift: [f64; 2], start: usize) -> Vec<[f64; 2]> {
    let (sn, cs) = theta.sin_cos();
    let n = pts.len();
    (0..n)
        .map(|k| {
            let [x, y] = pts[(k + start) % n];
            [s * (cs * x - sn * y) + shift[0], s * (sn * x + cs * y) + shift[1]]
        })
        .collect()
}

#[test]
fn hypocycloid_indices() {
    // c cusps: the tangent line turns by -(c-2)/2
    assert_eq!(rotation_index(&hypocycloid(3, 600)).unwrap(), -0.5);
    assert_eq!(rotation_index(&hypocycloid(4, 600)).unwrap(), -1.0);
    assert_eq!(rotation_index(&hypocycloid(5, 800)).unwrap(), -1.5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn regular_curves_keep_their_index(
        w in prop_oneof![-3i32..=-1, 1i32..=3],
        eps in 0.0..0.05f64,
        theta in 0.0..TAU,
        s in 0.01..100.0f64,
        dx in -10.0..10.0f64,
        dy in -10.0..10.0f64,
        start in 0usize..400,
    ) {
        let base = wobbly(w, eps, 400);
        let moved = transform(&base, theta, s, [dx, dy], start);
        prop_assert_eq!(rotation_index(&moved).unwrap(), w as f64);
        let mut rev = moved.clone();
        rev.reverse();
        prop_assert_eq!(rotation_index(&rev).unwrap(), -(w as f64));
    }

    #[test]
    fn cusped_curves_keep_their_index(
        c in 3usize..=5,
        theta in 0.0..TAU,
        s in 0.01..100.0f64,
        start in 0usize..800,
    ) {
        let base = hypocycloid(c, 800);
        let expected = rotation_index(&base).unwrap();
        let moved = transform(&base, theta, s, [0.5, -2.0], start);
        prop_assert_eq!(rotation_index(&moved).unwrap(), expected);
        let mut rev = moved;
        rev.reverse();
        prop_assert_eq!(rotation_index(&rev).unwrap(), -expected);
    }
}
