//! Null directions, λ-derivatives along them, classification of singular
//! points and singular curvature.

use serde::Serialize;

use crate::bundle::{
    bundle_point, bundle_point_unchecked, check_role, lambda_taylor_unchecked, sym_eigen,
    BundlePoint, Role,
};
use crate::error::{FrontError, Result};
use crate::geometry::{eval_jet, norm, Point2, Surface};

/// Global orientation of the A₃ sign relative to `sgn(λ″)`.
pub const A3_SIGN_CONVENTION: f64 = 1.0;

/// Value, gradient and Hessian of λ at a point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LocalLambda {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

impl LocalLambda {
    pub fn grad_norm(&self) -> f64 {
        self.grad[0].hypot(self.grad[1])
    }

    /// Unit tangent of the level curve with the positive side on its left.
    pub fn tangent(&self) -> Option<Point2> {
        let g = self.grad_norm();
        (g > 0.0).then(|| [self.grad[1] / g, -self.grad[0] / g])
    }
}

pub fn local_lambda(surface: &dyn Surface, q: Point2, role: Role) -> LocalLambda {
    let q = surface.domain().wrap(q);
    let t = lambda_taylor_unchecked(surface, q, role);
    LocalLambda {
        value: t.value(),
        grad: [t.deriv(1, 0), t.deriv(0, 1)],
        hess: [
            [t.deriv(2, 0), t.deriv(1, 1)],
            [t.deriv(1, 1), t.deriv(0, 2)],
        ],
    }
}

/// Kernel direction of the homomorphism (smallest singular vector) with the
/// two singular values.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NullData {
    pub eta: Point2,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

fn null_data(bp: &BundlePoint, role: Role) -> Result<NullData> {
    let m = bp.metric(role)?;
    let (l, v) = sym_eigen(m);
    let sigma_min = l[0].max(0.0).sqrt();
    let sigma_max = l[1].max(0.0).sqrt();
    let jet = match role {
        Role::Phi => bp.jet.f(),
        Role::Psi => bp.jet.nu().expect("role checked"),
    };
    let second = norm(jet.p_uu) + norm(jet.p_uv) + norm(jet.p_vv);
    if sigma_max <= 1e-8 * (1.0 + second) {
        return Err(FrontError::Rank(format!(
            "homomorphism {} has rank 0 (front condition violated)",
            role.label()
        )));
    }
    Ok(NullData {
        eta: v[0],
        sigma_min,
        sigma_max,
    })
}

fn det(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Null direction at `q`. With a curve tangent, `(γ̇, η)` is made positively
/// oriented; otherwise the first non-negligible component is made positive.
pub fn null_direction(
    surface: &dyn Surface,
    q: Point2,
    role: Role,
    tangent: Option<Point2>,
) -> Result<Point2> {
    check_role(surface, role)?;
    let bp = bundle_point(surface, q)?;
    let mut eta = null_data(&bp, role)?.eta;
    let flip = match tangent {
        Some(t) if det(t, eta).abs() > 1e-12 => det(t, eta) < 0.0,
        _ if eta[0].abs() > 1e-12 => eta[0] < 0.0,
        _ => eta[1] < 0.0,
    };
    if flip {
        eta = [-eta[0], -eta[1]];
    }
    Ok(eta)
}

/// Null field at `q`, sign-aligned with `reference`.
pub(crate) fn null_field(surface: &dyn Surface, q: Point2, role: Role, reference: Point2) -> Result<Point2> {
    let bp = bundle_point_unchecked(surface, surface.domain().wrap(q));
    let eta = null_data(&bp, role)?.eta;
    Ok(if eta[0] * reference[0] + eta[1] * reference[1] < 0.0 {
        [-eta[0], -eta[1]]
    } else {
        eta
    })
}

/// `λ′ = dλ(η̃)` at `q` with the null field aligned to `reference`.
pub fn lambda_prime(surface: &dyn Surface, q: Point2, role: Role, reference: Point2) -> Result<f64> {
    let eta = null_field(surface, q, role, reference)?;
    let ll = local_lambda(surface, q, role);
    Ok(ll.grad[0] * eta[0] + ll.grad[1] * eta[1])
}

const W1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];

/// Largest step `h <= 1e-3` whose stencil of half-width `reach * h` stays in
/// the domain.
fn stencil_step(surface: &dyn Surface, q: Point2, dir: Point2, reach: f64) -> Result<f64> {
    let dom = surface.domain();
    let mut h = 1e-3;
    loop {
        let ok = [-reach, reach].iter().all(|&s| {
            let p = [q[0] + s * h * dir[0], q[1] + s * h * dir[1]];
            dom.contains(p) && dom.pole_distance(dom.wrap(p)[0]) > 1e-9
        });
        if ok {
            return Ok(h);
        }
        h *= 0.5;
        if h < 1e-6 {
            return Err(FrontError::Stencil(format!(
                "finite-difference stencil at ({}, {}) leaves the domain",
                q[0], q[1]
            )));
        }
    }
}

fn derivative_along(
    f: &dyn Fn(Point2) -> Result<f64>,
    q: Point2,
    dir: Point2,
    h: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for (k, w) in W1.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let s = (k as f64 - 2.0) * h;
        acc += w * f([q[0] + s * dir[0], q[1] + s * dir[1]])?;
    }
    Ok(acc / (12.0 * h))
}

/// `(λ, λ′, λ″, λ‴)` along the null field through `q`.
pub fn lambda_jet_along_null(surface: &dyn Surface, q: Point2, role: Role) -> Result<[f64; 4]> {
    check_role(surface, role)?;
    eval_jet(surface, q)?;
    let eta = null_direction(surface, q, role, None)?;
    let ll = local_lambda(surface, q, role);
    let l1 = |p: Point2| lambda_prime(surface, p, role, eta);
    let h = stencil_step(surface, q, eta, 4.0)?;
    let l2 = |p: Point2| -> Result<f64> {
        let e = null_field(surface, p, role, eta)?;
        derivative_along(&l1, p, e, h)
    };
    let lam1 = ll.grad[0] * eta[0] + ll.grad[1] * eta[1];
    let lam2 = l2(q)?;
    let lam3 = derivative_along(&l2, q, eta, h)?;
    Ok([ll.value, lam1, lam2, lam3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularClass {
    A2,
    A3 { sign: i8 },
    Lips,
    Beaks,
    Butterfly,
    DegenerateUnclassified,
}

impl SingularClass {
    pub fn label(&self) -> &'static str {
        match self {
            SingularClass::A2 => "A2",
            SingularClass::A3 { sign } if *sign > 0 => "A3+",
            SingularClass::A3 { .. } => "A3-",
            SingularClass::Lips => "lips",
            SingularClass::Beaks => "beaks",
            SingularClass::Butterfly => "butterfly",
            SingularClass::DegenerateUnclassified => "degenerate-unclassified",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassifyOptions {
    /// Absolute threshold on `|∇λ|`.
    pub nondegen_tol: f64,
    /// Relative threshold for "derivative does not vanish".
    pub deriv_tol: f64,
    /// Lips and beaks require definite Hessians (positive, resp. negative).
    pub strict_beaks: bool,
}

impl ClassifyOptions {
    /// Thresholds scaled by the largest `|∇λ|` on a coarse sample.
    pub fn for_surface(surface: &dyn Surface, role: Role) -> Self {
        let dom = surface.domain();
        let n = 32;
        let mut g: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let u = dom.u_range.0 + dom.u_len() * (i as f64 + 0.5) / n as f64;
                let v = dom.v_range.0 + dom.v_len() * (j as f64 + 0.5) / n as f64;
                g = g.max(local_lambda(surface, [u, v], role).grad_norm());
            }
        }
        ClassifyOptions {
            nondegen_tol: 1e-6 * g,
            deriv_tol: 1e-5,
            strict_beaks: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SingularPointRecord {
    pub q: Point2,
    pub role: Role,
    pub class: SingularClass,
    pub lambda: f64,
    pub grad: [f64; 2],
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub hess_eigenvalues: [f64; 2],
    pub null_direction: Point2,
}

pub fn classify_singular_point(
    surface: &dyn Surface,
    q: Point2,
    role: Role,
    opts: &ClassifyOptions,
) -> Result<SingularPointRecord> {
    check_role(surface, role)?;
    let bp = bundle_point(surface, q)?;
    null_data(&bp, role)?;
    let ll = local_lambda(surface, q, role);
    let gn = ll.grad_norm();
    let hnorm = ll.hess.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if ll.value.abs() > 1e-6 * (gn + hnorm).max(f64::MIN_POSITIVE) {
        return Err(FrontError::Hypothesis(format!(
            "({}, {}) is not a singular point: lambda = {:e}",
            q[0], q[1], ll.value
        )));
    }
    let [_, l1, l2, l3] = lambda_jet_along_null(surface, q, role)?;
    let eta = null_direction(surface, q, role, None)?;
    let (heig, _) = sym_eigen(ll.hess);
    let s2 = hnorm.max(gn).max(f64::MIN_POSITIVE);
    let nz1 = l1.abs() > opts.deriv_tol * gn;
    let nz2 = l2.abs() > opts.deriv_tol * s2;
    let nz3 = l3.abs() > opts.deriv_tol * s2;
    let class = if gn > opts.nondegen_tol {
        if nz1 {
            SingularClass::A2
        } else if nz2 {
            SingularClass::A3 {
                sign: if l2 * A3_SIGN_CONVENTION > 0.0 { 1 } else { -1 },
            }
        } else if nz3 {
            SingularClass::Butterfly
        } else {
            SingularClass::DegenerateUnclassified
        }
    } else {
        let det_h = heig[0] * heig[1];
        let definite_tol = opts.deriv_tol * hnorm * hnorm;
        if opts.strict_beaks {
            if heig[0] > 0.0 && det_h > definite_tol {
                SingularClass::Lips
            } else if heig[1] < 0.0 && det_h > definite_tol && nz2 {
                SingularClass::Beaks
            } else {
                SingularClass::DegenerateUnclassified
            }
        } else if det_h > definite_tol {
            SingularClass::Lips
        } else if det_h < -definite_tol && nz2 {
            SingularClass::Beaks
        } else {
            SingularClass::DegenerateUnclassified
        }
    };
    Ok(SingularPointRecord {
        q,
        role,
        class,
        lambda: ll.value,
        grad: ll.grad,
        lambda1: l1,
        lambda2: l2,
        lambda3: l3,
        hess_eigenvalues: heig,
        null_direction: eta,
    })
}

/// Sign of an A₃ point: `sgn(λ″)` under the fixed orientations.
pub fn a3_sign(record: &SingularPointRecord) -> Result<i8> {
    match record.class {
        SingularClass::A3 { sign } => Ok(sign),
        _ => Err(FrontError::Unclassified(format!(
            "point ({}, {}) is {}, not an A3 point",
            record.q[0],
            record.q[1],
            record.class.label()
        ))),
    }
}

/// Singular curvature data at a point of an A₂/A₃-type curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePointData {
    /// Unit domain tangent, positive side on the left.
    pub tangent: Point2,
    /// `None` where `φ(γ̇)` vanishes.
    pub kappa: Option<f64>,
    /// `κ |φ(γ̇)|` per unit domain arclength.
    pub density: f64,
    pub speed: f64,
}

/// Singular curvature with the tangent taken from `∇λ`.
pub fn singular_curvature(surface: &dyn Surface, q: Point2, role: Role) -> Result<CurvePointData> {
    check_role(surface, role)?;
    eval_jet(surface, q)?;
    curve_point_data(surface, surface.domain().wrap(q), role)
}

pub(crate) fn curve_point_data(surface: &dyn Surface, q: Point2, role: Role) -> Result<CurvePointData> {
    let ll = local_lambda(surface, q, role);
    let gdot = ll.tangent().ok_or_else(|| {
        FrontError::UnsupportedSingularity(format!(
            "grad lambda vanishes at ({}, {}); no singular curve through it",
            q[0], q[1]
        ))
    })?;
    let bp = bundle_point_unchecked(surface, q);
    let eta = null_data(&bp, role)?.eta;
    let jet = match role {
        Role::Phi => *bp.jet.f(),
        Role::Psi => *bp.jet.nu().expect("role checked"),
    };
    let fb = &bp.fiber;
    // image line spanned by P = φ(ξ), ξ ⊥ η; on Σ, φ(ξ′) ∥ φ(η) = 0 so
    // D_t P is the second jet applied to (γ̇, ξ)
    let xi = [-eta[1], eta[0]];
    let p = fb.project(jet.apply(xi));
    let dp = fb.project(jet.hessian_apply(gdot, xi));
    let pn = fb.norm(p);
    let t = fb.project(jet.apply(gdot));
    let speed = fb.norm(t);
    // (γ̇, η) positive with η on the left: sgn dλ(η) = sgn(∇λ · left(γ̇))
    let left = [-gdot[1], gdot[0]];
    let s = (ll.grad[0] * left[0] + ll.grad[1] * left[1]).signum();
    let density = s * fb.mu(p, dp) / (pn * pn);
    let [pu, pv] = bp.images(role)?;
    let ref_speed = fb.norm(pu) + fb.norm(pv);
    Ok(CurvePointData {
        tangent: gdot,
        kappa: (speed > 1e-8 * ref_speed).then(|| density / speed),
        density,
        speed,
    })
}

/// `κ |φ(γ̇)|`, the integrand of `κ dτ` per unit domain arclength.
pub fn curvature_density(surface: &dyn Surface, q: Point2, role: Role) -> Result<f64> {
    Ok(singular_curvature(surface, q, role)?.density)
}

/// Newton projection onto the zero set of λ along `∇λ`.
pub fn project_to_singular(surface: &dyn Surface, q: Point2, role: Role) -> Result<Point2> {
    let dom = surface.domain();
    let mut q = dom.wrap(q);
    for _ in 0..30 {
        let ll = local_lambda(surface, q, role);
        let g2 = ll.grad[0] * ll.grad[0] + ll.grad[1] * ll.grad[1];
        if g2 == 0.0 {
            return Err(FrontError::UnsupportedSingularity(
                "grad lambda vanishes during projection".into(),
            ));
        }
        let step = [ll.value * ll.grad[0] / g2, ll.value * ll.grad[1] / g2];
        q = dom.wrap([q[0] - step[0], q[1] - step[1]]);
        if step[0].hypot(step[1]) < 1e-15 * (1.0 + dom.diameter()) {
            return Ok(q);
        }
    }
    Ok(q)
}

fn tangent_at(surface: &dyn Surface, q: Point2, role: Role) -> Result<Point2> {
    local_lambda(surface, q, role)
        .tangent()
        .ok_or_else(|| FrontError::UnsupportedSingularity("grad lambda vanishes on the walk".into()))
}

/// Walks a signed domain arclength along the singular curve through `q`
/// (positive: along the tangent with the positive side on the left), by RK4
/// on the unit tangent field with Newton projection after every step.
pub fn walk_singular(surface: &dyn Surface, q: Point2, role: Role, dist: f64, max_step: f64) -> Result<Point2> {
    let dom = surface.domain();
    let n = ((dist.abs() / max_step).ceil() as usize).max(1);
    let h = dist / n as f64;
    let mut p = project_to_singular(surface, q, role)?;
    for _ in 0..n {
        let k1 = tangent_at(surface, p, role)?;
        let k2 = tangent_at(surface, [p[0] + 0.5 * h * k1[0], p[1] + 0.5 * h * k1[1]], role)?;
        let k3 = tangent_at(surface, [p[0] + 0.5 * h * k2[0], p[1] + 0.5 * h * k2[1]], role)?;
        let k4 = tangent_at(surface, [p[0] + h * k3[0], p[1] + h * k3[1]], role)?;
        let next = [
            p[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if !dom.contains(next) {
            return Err(FrontError::Domain("walk left the parameter domain".into()));
        }
        p = project_to_singular(surface, next, role)?;
    }
    Ok(p)
}

/// The same density computed from a seeded fiber frame field:
/// `s (θ̇ + ⟨D_t e₁, e₂⟩)`, with derivatives by finite differences along the
/// curve.
pub fn curvature_density_framed(surface: &dyn Surface, q: Point2, role: Role, seed: usize) -> Result<f64> {
    check_role(surface, role)?;
    let q = project_to_singular(surface, q, role)?;
    let h = 1e-3;
    let mut theta = [0.0; 5];
    let mut e1s = [[0.0; 4]; 5];
    let mut e2_mid = [0.0; 4];
    let mut s = 1.0;
    for k in 0..5 {
        let t = (k as f64 - 2.0) * h;
        let p = if k == 2 { q } else { walk_singular(surface, q, role, t, h)? };
        let bp = bundle_point_unchecked(surface, p);
        let ll = local_lambda(surface, p, role);
        let gdot = ll.tangent().expect("regular curve");
        let (e1, e2) = bp.fiber.frame_with_seed(Some(seed));
        let x = bp.apply(role, gdot)?;
        theta[k] = bp.fiber.inner(x, e2).atan2(bp.fiber.inner(x, e1));
        e1s[k] = e1;
        if k == 2 {
            e2_mid = e2;
            let left = [-gdot[1], gdot[0]];
            s = (ll.grad[0] * left[0] + ll.grad[1] * left[1]).signum();
        }
    }
    for k in 1..5 {
        while theta[k] - theta[k - 1] > std::f64::consts::PI {
            theta[k] -= 2.0 * std::f64::consts::PI;
        }
        while theta[k] - theta[k - 1] < -std::f64::consts::PI {
            theta[k] += 2.0 * std::f64::consts::PI;
        }
    }
    let d = |vals: &dyn Fn(usize) -> f64| -> f64 {
        (0..5).map(|k| W1[k] * vals(k)).sum::<f64>() / (12.0 * h)
    };
    let theta_dot = d(&|k| theta[k]);
    let de1 = [
        d(&|k| e1s[k][0]),
        d(&|k| e1s[k][1]),
        d(&|k| e1s[k][2]),
        d(&|k| e1s[k][3]),
    ];
    let bp = bundle_point_unchecked(surface, q);
    let omega = bp.fiber.inner(de1, e2_mid);
    Ok(s * (theta_dot + omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;

    fn s(name: &str, params: &[(&str, f64)]) -> Box<dyn Surface> {
        let p: Vec<(String, f64)> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        build(name, &p).unwrap()
    }

    fn opts(f: &dyn Surface) -> ClassifyOptions {
        ClassifyOptions::for_surface(f, Role::Phi)
    }

    #[test]
    fn null_directions_of_models() {
        let f = s("fold_map", &[]);
        let eta = null_direction(&*f, [0.0, 0.4], Role::Phi, None).unwrap();
        assert!((eta[0].abs() - 1.0).abs() < 1e-12);
        let c = s("cusp_nf", &[]);
        let eta = null_direction(&*c, [0.0, 0.0], Role::Phi, None).unwrap();
        assert!((eta[1].abs() - 1.0).abs() < 1e-12);
        let cyc = s("cycloid_B", &[]);
        let eta = null_direction(&*cyc, [0.0, 0.7], Role::Phi, None).unwrap();
        assert!((eta[0].abs() - 1.0).abs() < 1e-12);
        let eta = null_direction(&*f, [0.0, 0.4], Role::Phi, Some([0.0, -1.0])).unwrap();
        assert!(det([0.0, -1.0], eta) > 0.0);
    }

    #[test]
    fn lambda_jets_of_models() {
        let f = s("fold_nf", &[]);
        let j = lambda_jet_along_null(&*f, [0.0, 0.0], Role::Phi).unwrap();
        assert!((j[1].abs() - 2.0).abs() < 1e-8);
        let c = s("cusp_nf", &[]);
        let j = lambda_jet_along_null(&*c, [0.0, 0.0], Role::Phi).unwrap();
        assert!(j[1].abs() < 1e-10);
        assert!((j[2] - 6.0).abs() < 1e-6, "{j:?}");
        let b = s("butterfly_nf", &[]);
        let j = lambda_jet_along_null(&*b, [0.0, 0.0], Role::Phi).unwrap();
        assert!(j[1].abs() < 1e-10 && j[2].abs() < 1e-6);
        assert!((j[3].abs() - 24.0).abs() < 1e-3, "{j:?}");
    }

    #[test]
    fn classification_of_models() {
        let cases = [
            ("fold_nf", "A2"),
            ("cusp_nf", "A3+"),
            ("lips_nf", "lips"),
            ("beaks_nf", "beaks"),
            ("butterfly_nf", "butterfly"),
        ];
        for (name, label) in cases {
            let f = s(name, &[]);
            let r = classify_singular_point(&*f, [0.0, 0.0], Role::Phi, &opts(&*f)).unwrap();
            assert_eq!(r.class.label(), label, "{name}");
        }
        let c = s("cusp_nf", &[("reflect", -1.0)]);
        let r = classify_singular_point(&*c, [0.0, 0.0], Role::Phi, &opts(&*c)).unwrap();
        assert_eq!(a3_sign(&r).unwrap(), -1);
        let b = s("beaks_nf", &[]);
        let mut o = opts(&*b);
        o.strict_beaks = true;
        let r = classify_singular_point(&*b, [0.0, 0.0], Role::Phi, &o).unwrap();
        assert_eq!(r.class, SingularClass::DegenerateUnclassified);
        let f = s("fold_nf", &[]);
        let r = classify_singular_point(&*f, [0.0, 0.0], Role::Phi, &opts(&*f)).unwrap();
        assert!(a3_sign(&r).is_err());
        assert!(matches!(
            classify_singular_point(&*f, [0.0, 0.5], Role::Phi, &opts(&*f)),
            Err(FrontError::Hypothesis(_))
        ));
    }

    #[test]
    fn fold_curvature_signs() {
        let f = s("fold_map", &[]);
        let d = singular_curvature(&*f, [0.0, 0.0], Role::Phi).unwrap();
        assert!((d.kappa.unwrap() - 2.0).abs() < 1e-12);
        assert!((d.density - 2.0).abs() < 1e-12);
        let g = s("fold_map", &[("eps", -1.0)]);
        let d = singular_curvature(&*g, [0.0, 0.0], Role::Phi).unwrap();
        assert!((d.kappa.unwrap() + 2.0).abs() < 1e-12);
        let c = s("cylinder_fold", &[]);
        let d = singular_curvature(&*c, [0.0, 0.3], Role::Phi).unwrap();
        assert!(d.density.abs() < 1e-12);
    }

    #[test]
    fn framed_density_agrees() {
        for (name, q, role) in [
            ("fold_map", [0.0, 0.2], Role::Phi),
            ("sphere_projection", [std::f64::consts::FRAC_PI_2, 0.3], Role::Phi),
            ("cycloid_B", [0.0, 0.5], Role::Phi),
        ] {
            let f = s(name, &[]);
            let a = curvature_density(&*f, q, role).unwrap();
            let b = curvature_density_framed(&*f, q, role, 0).unwrap();
            let c = curvature_density_framed(&*f, q, role, 1).unwrap();
            assert!((a - b).abs() < 1e-8, "{name}: {a} {b}");
            assert!((b - c).abs() < 1e-8, "{name}: {b} {c}");
        }
    }

    #[test]
    fn walker_stays_on_the_fold() {
        let f = s("fold_map", &[]);
        let p = walk_singular(&*f, [0.0, 0.0], Role::Phi, 0.5, 0.01).unwrap();
        assert!(p[0].abs() < 1e-14);
        assert!((p[1] + 0.5).abs() < 1e-12);
    }
}
