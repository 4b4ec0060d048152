//! Pointwise quantities of the coherent tangent bundle.

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::taylor::{Scalar, Taylor};
use crate::geometry::{
    axpy, eval_jet, jet_unchecked, scale, AVec, AmbientKind, Fiber, Mode, Point2, Surface,
    SurfaceJet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Phi,
    Psi,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::Phi => "phi",
            Role::Psi => "psi",
        }
    }

    pub fn other(self) -> Role {
        match self {
            Role::Phi => Role::Psi,
            Role::Psi => Role::Phi,
        }
    }
}

impl std::str::FromStr for Role {
    type Err = FrontError;
    fn from_str(s: &str) -> Result<Role> {
        match s.to_ascii_lowercase().as_str() {
            "phi" | "first" | "first-hom" => Ok(Role::Phi),
            "psi" | "second" | "second-hom" => Ok(Role::Psi),
            _ => Err(FrontError::Param(format!("unknown role `{s}`"))),
        }
    }
}

/// Relative floor below which a 2×2 determinant counts as degenerate.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// Fiber images of the coordinate fields at one point.
#[derive(Debug, Clone, Copy)]
pub struct BundlePoint {
    pub jet: SurfaceJet,
    pub fiber: Fiber,
    pub phi: [AVec; 2],
    pub psi: Option<[AVec; 2]>,
}

impl BundlePoint {
    pub fn from_jet(model: AmbientKind, jet: SurfaceJet) -> Self {
        let fiber = Fiber::from_jet(model, &jet);
        let f = jet.f();
        let phi = [fiber.project(f.p_u), fiber.project(f.p_v)];
        let psi = jet
            .nu()
            .map(|n| [fiber.project(n.p_u), fiber.project(n.p_v)]);
        BundlePoint {
            jet,
            fiber,
            phi,
            psi,
        }
    }

    pub fn images(&self, role: Role) -> Result<[AVec; 2]> {
        match role {
            Role::Phi => Ok(self.phi),
            Role::Psi => self
                .psi
                .ok_or_else(|| FrontError::Mode("second homomorphism needs a unit normal".into())),
        }
    }

    pub fn lambda(&self, role: Role) -> Result<f64> {
        let [a, b] = self.images(role)?;
        Ok(self.fiber.mu(a, b))
    }

    /// Image of a domain vector under the homomorphism.
    pub fn apply(&self, role: Role, x: Point2) -> Result<AVec> {
        let [a, b] = self.images(role)?;
        Ok(axpy(scale(a, x[0]), x[1], b))
    }

    fn gram(&self, a: [AVec; 2], b: [AVec; 2]) -> [[f64; 2]; 2] {
        let ip = |x, y| self.fiber.inner(x, y);
        [
            [ip(a[0], b[0]), ip(a[0], b[1])],
            [ip(a[1], b[0]), ip(a[1], b[1])],
        ]
    }

    /// First fundamental form of the given role (`I` for φ, `III` for ψ).
    pub fn metric(&self, role: Role) -> Result<[[f64; 2]; 2]> {
        let a = self.images(role)?;
        Ok(self.gram(a, a))
    }
}

/// Evaluates the bundle data at `q` with domain checks.
pub fn bundle_point(surface: &dyn Surface, q: Point2) -> Result<BundlePoint> {
    Ok(BundlePoint::from_jet(surface.ambient(), eval_jet(surface, q)?))
}

pub fn bundle_point_unchecked(surface: &dyn Surface, q: Point2) -> BundlePoint {
    BundlePoint::from_jet(surface.ambient(), jet_unchecked(surface, q))
}

pub(crate) fn check_role(surface: &dyn Surface, role: Role) -> Result<()> {
    if role == Role::Psi && surface.mode() == Mode::Map {
        return Err(FrontError::Mode(format!(
            "`{}` is a map; the second homomorphism is undefined",
            surface.name()
        )));
    }
    Ok(())
}

fn det3g<S: Scalar>(a: &[S; 4], b: &[S; 4], c: &[S; 4]) -> S {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn det4g<S: Scalar>(a: &[S; 4], b: &[S; 4], c: &[S; 4], d: &[S; 4]) -> S {
    let m = [a, b, c, d];
    let mut acc = S::cst(0.0);
    for r in 0..4 {
        let rows: Vec<usize> = (0..4).filter(|&k| k != r).collect();
        let pick = |v: &[S; 4]| [v[rows[0]], v[rows[1]], v[rows[2]], S::cst(0.0)];
        let minor = det3g(&pick(m[1]), &pick(m[2]), &pick(m[3]));
        let term = m[0][r] * minor;
        acc = if r % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// The co-orientation form applied to `(X, Y)` with generic scalars.
pub fn mu_generic<S: Scalar>(
    model: AmbientKind,
    p: &[S; 4],
    nu: Option<&[S; 4]>,
    x: &[S; 4],
    y: &[S; 4],
) -> S {
    let e3 = [S::cst(0.0), S::cst(0.0), S::cst(1.0), S::cst(0.0)];
    match model {
        AmbientKind::PlaneTarget2 => x[0] * y[1] - x[1] * y[0],
        AmbientKind::SphereTarget2 => det3g(x, y, p),
        AmbientKind::Euclidean3 | AmbientKind::FlatQuotient3 => det3g(x, y, nu.unwrap_or(&e3)),
        AmbientKind::Sphere3 | AmbientKind::Hyperbolic3 => {
            let zero = [S::cst(0.0); 4];
            det4g(p, x, y, nu.unwrap_or(&zero))
        }
    }
}

/// Second-order expansion of λ (or λ#) around `q`, without domain checks.
pub fn lambda_taylor_unchecked(surface: &dyn Surface, q: Point2, role: Role) -> Taylor {
    let e = surface.expand(q);
    let model = surface.ambient();
    let (x, y) = match role {
        Role::Phi => (e.f.map(|t| t.du()), e.f.map(|t| t.dv())),
        Role::Psi => {
            let nu = e.nu.as_ref().expect("second homomorphism needs a normal");
            (nu.map(|t| t.du()), nu.map(|t| t.dv()))
        }
    };
    mu_generic(model, &e.f, e.nu.as_ref(), &x, &y)
}

pub fn lambda_taylor(surface: &dyn Surface, q: Point2, role: Role) -> Result<Taylor> {
    check_role(surface, role)?;
    let _ = eval_jet(surface, q)?;
    Ok(lambda_taylor_unchecked(surface, surface.domain().wrap(q), role))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HomFrameData {
    pub e1: AVec,
    pub e2: AVec,
    /// Rows are the frame coordinates of `φ_u` and `φ_v`.
    pub g: [[f64; 2]; 2],
    pub g_sharp: Option<[[f64; 2]; 2]>,
}

pub fn det2x2(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn hom_frame(surface: &dyn Surface, q: Point2) -> Result<HomFrameData> {
    let bp = bundle_point(surface, q)?;
    let (e1, e2) = bp.fiber.frame();
    let ip = |x, y| bp.fiber.inner(x, y);
    let coords = |v: [AVec; 2]| {
        [
            [ip(v[0], e1), ip(v[0], e2)],
            [ip(v[1], e1), ip(v[1], e2)],
        ]
    };
    Ok(HomFrameData {
        e1,
        e2,
        g: coords(bp.phi),
        g_sharp: bp.psi.map(coords),
    })
}

pub fn jacobian(surface: &dyn Surface, q: Point2, role: Role) -> Result<f64> {
    check_role(surface, role)?;
    bundle_point(surface, q)?.lambda(role)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvatureSample {
    pub lambda: f64,
    pub lambda_sharp: Option<f64>,
    pub k: Option<f64>,
    pub k_ext: Option<f64>,
    pub k_ext_sharp: Option<f64>,
    pub k_sharp: Option<f64>,
    pub i: [[f64; 2]; 2],
    pub ii: Option<[[f64; 2]; 2]>,
    pub iii: Option<[[f64; 2]; 2]>,
}

fn nondegenerate(det: f64, m: [[f64; 2]; 2]) -> bool {
    let tr = m[0][0] + m[1][1];
    det.abs() > DEGENERACY_FLOOR * tr * tr
}

impl CurvatureSample {
    pub fn from_point(bp: &BundlePoint, c: f64) -> Self {
        let i = bp.gram(bp.phi, bp.phi);
        let lambda = bp.fiber.mu(bp.phi[0], bp.phi[1]);
        let det_i = det2x2(i);
        let phi_regular = nondegenerate(det_i, i);
        let Some(psi) = bp.psi else {
            return CurvatureSample {
                lambda,
                lambda_sharp: None,
                k: phi_regular.then_some(c),
                k_ext: None,
                k_ext_sharp: None,
                k_sharp: None,
                i,
                ii: None,
                iii: None,
            };
        };
        let mut ii = bp.gram(bp.phi, psi);
        for row in ii.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        let iii = bp.gram(psi, psi);
        let lambda_sharp = bp.fiber.mu(psi[0], psi[1]);
        let det_ii = det2x2(ii);
        let det_iii = det2x2(iii);
        let psi_regular = nondegenerate(det_iii, iii);
        let k_ext = phi_regular.then(|| det_ii / det_i);
        let k_ext_sharp = psi_regular.then(|| det_ii / det_iii);
        let k = k_ext.map(|e| c + e);
        let k_sharp = if !psi_regular {
            None
        } else if c == 0.0 {
            Some(1.0)
        } else {
            // K# dÂ# = K dÂ
            k.map(|k| k * lambda / lambda_sharp)
        };
        CurvatureSample {
            lambda,
            lambda_sharp: Some(lambda_sharp),
            k,
            k_ext,
            k_ext_sharp,
            k_sharp,
            i,
            ii: Some(ii),
            iii: Some(iii),
        }
    }
}

pub fn curvature_sample(surface: &dyn Surface, q: Point2) -> Result<CurvatureSample> {
    let bp = bundle_point(surface, q)?;
    Ok(CurvatureSample::from_point(&bp, surface.ambient().curvature()))
}

/// Gaussian curvature of the third fundamental form; `None` at ψ-singular points.
pub fn k_sharp(surface: &dyn Surface, q: Point2) -> Result<Option<f64>> {
    check_role(surface, Role::Psi)?;
    Ok(curvature_sample(surface, q)?.k_sharp)
}

/// Smooth density `K dÂ = w du dv`, defined across the singular set.
///
/// Front mode: `w = c λ + λ#`; map mode: `w = K̃ λ`.
pub fn gauss_density(bp: &BundlePoint, c: f64) -> f64 {
    let lambda = bp.fiber.mu(bp.phi[0], bp.phi[1]);
    match bp.psi {
        Some(psi) => c * lambda + bp.fiber.mu(psi[0], psi[1]),
        None => c * lambda,
    }
}

/// Smallest eigenvalue of `I + III`; positive exactly for fronts.
pub fn front_condition(surface: &dyn Surface, q: Point2) -> Result<f64> {
    check_role(surface, Role::Psi)?;
    let s = curvature_sample(surface, q)?;
    let iii = s.iii.expect("front has third form");
    let m = [
        [s.i[0][0] + iii[0][0], s.i[0][1] + iii[0][1]],
        [s.i[1][0] + iii[1][0], s.i[1][1] + iii[1][1]],
    ];
    Ok(sym_eigen(m).0[0])
}

/// Eigenvalues (ascending) and unit eigenvectors of a symmetric 2×2 matrix.
pub fn sym_eigen(m: [[f64; 2]; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
    let a = m[0][0];
    let b = 0.5 * (m[0][1] + m[1][0]);
    let d = m[1][1];
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let (l0, l1) = (mean - r, mean + r);
    // eigenvector of the smaller eigenvalue, from the better-conditioned row
    let v0 = if (a - l0).abs() >= (d - l0).abs() {
        [-b, a - l0]
    } else {
        [d - l0, -b]
    };
    let v0 = {
        let n = (v0[0] * v0[0] + v0[1] * v0[1]).sqrt();
        if n > 0.0 {
            [v0[0] / n, v0[1] / n]
        } else if a <= d {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        }
    };
    let v1 = [-v0[1], v0[0]];
    ([l0, l1], [v0, v1])
}

/// `D_{∂u} φ(∂v) − D_{∂v} φ(∂u)`, with the covariant derivatives of the
/// fiber sections taken by sixth-order differences of projected fields.
pub fn torsion_residual(surface: &dyn Surface, q: Point2, role: Role) -> Result<AVec> {
    check_role(surface, role)?;
    let here = bundle_point(surface, q)?;
    let h = 1e-3;
    let w = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
    let mut du_phi_v = [0.0; 4];
    let mut dv_phi_u = [0.0; 4];
    for (k, wk) in w.iter().enumerate() {
        if *wk == 0.0 {
            continue;
        }
        let t = (k as f64 - 3.0) * h;
        let a = bundle_point(surface, [q[0] + t, q[1]])?.images(role)?;
        let b = bundle_point(surface, [q[0], q[1] + t])?.images(role)?;
        du_phi_v = axpy(du_phi_v, wk / (60.0 * h), a[1]);
        dv_phi_u = axpy(dv_phi_u, wk / (60.0 * h), b[0]);
    }
    let r = axpy(du_phi_v, -1.0, dv_phi_u);
    Ok(here.fiber.project(r))
}

#[derive(Debug, Clone, Serialize)]
pub struct ParallelFrame {
    pub frames: Vec<(AVec, AVec)>,
    /// Continuous angle of the image of the path velocity.
    pub theta: Vec<f64>,
    /// Samples where the image vanished; their angles are interpolated.
    pub excluded: Vec<usize>,
}

/// Transports a fiber frame along a sampled path by repeated projection and
/// measures the angle of `φ(γ̇)` (or `ψ(γ̇)`) against it.
pub fn parallel_frame(surface: &dyn Surface, path: &[Point2], role: Role) -> Result<ParallelFrame> {
    check_role(surface, role)?;
    let n = path.len();
    if n < 3 {
        return Err(FrontError::Sampling("path needs at least three samples".into()));
    }
    let dom = surface.domain();
    let pts: Vec<BundlePoint> = path
        .iter()
        .map(|&q| bundle_point(surface, q))
        .collect::<Result<_>>()?;
    let mut frames = Vec::with_capacity(n);
    let mut raw = Vec::with_capacity(n);
    let mut excluded = Vec::new();
    let mut prev: Option<AVec> = None;
    for (i, bp) in pts.iter().enumerate() {
        let fb = &bp.fiber;
        let e1 = match prev {
            None => fb.frame().0,
            Some(p) => {
                let pr = fb.project(p);
                let nn = fb.norm(pr);
                if nn < std::f64::consts::FRAC_1_SQRT_2 {
                    return Err(FrontError::Sampling(format!(
                        "fiber frame turned by more than pi/4 at sample {i}"
                    )));
                }
                scale(pr, 1.0 / nn)
            }
        };
        let e2 = fb.rotate(e1);
        prev = Some(e1);
        frames.push((e1, e2));
        let (a, b) = match i {
            0 => (0, 1),
            _ if i == n - 1 => (n - 2, n - 1),
            _ => (i - 1, i + 1),
        };
        let d = dom.delta(path[a], path[b]);
        let gdot = [d[0] / (b - a) as f64, d[1] / (b - a) as f64];
        let x = bp.apply(role, gdot)?;
        let scale_ref = (bp.fiber.norm(bp.images(role)?[0]) + bp.fiber.norm(bp.images(role)?[1]))
            * (gdot[0].abs() + gdot[1].abs());
        if fb.norm(x) <= 1e-12 * scale_ref.max(1e-300) {
            excluded.push(i);
            raw.push(None);
        } else {
            raw.push(Some(fb.inner(x, e2).atan2(fb.inner(x, e1))));
        }
    }
    let theta = unwrap_with_gaps(&raw)?;
    Ok(ParallelFrame {
        frames,
        theta,
        excluded,
    })
}

/// Unwraps angles to a continuous sequence, linearly interpolating gaps.
pub fn unwrap_with_gaps(raw: &[Option<f64>]) -> Result<Vec<f64>> {
    use std::f64::consts::PI;
    let known: Vec<usize> = (0..raw.len()).filter(|&i| raw[i].is_some()).collect();
    if known.is_empty() {
        return Err(FrontError::Sampling("image vanishes on the whole path".into()));
    }
    let mut out = vec![0.0; raw.len()];
    let mut last = raw[known[0]].unwrap();
    out[known[0]] = last;
    for w in known.windows(2) {
        let mut a = raw[w[1]].unwrap();
        while a - last > PI {
            a -= 2.0 * PI;
        }
        while a - last < -PI {
            a += 2.0 * PI;
        }
        for j in w[0] + 1..w[1] {
            let t = (j - w[0]) as f64 / (w[1] - w[0]) as f64;
            out[j] = last + t * (a - last);
        }
        out[w[1]] = a;
        last = a;
    }
    let first = known[0];
    for j in 0..first {
        out[j] = out[first];
    }
    let lastk = *known.last().unwrap();
    for j in lastk + 1..raw.len() {
        out[j] = out[lastk];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;
    use crate::geometry::norm;
    use std::f64::consts::PI;

    fn s(name: &str) -> Box<dyn Surface> {
        build(name, &[]).unwrap()
    }

    #[test]
    fn fold_map_jacobian() {
        let f = s("fold_map");
        assert!((jacobian(&*f, [1.0, 0.0], Role::Phi).unwrap() - 2.0).abs() < 1e-14);
        assert!(jacobian(&*f, [0.0, 0.3], Role::Phi).unwrap().abs() < 1e-14);
        assert!(matches!(
            jacobian(&*f, [0.5, 0.0], Role::Psi),
            Err(FrontError::Mode(_))
        ));
        let hf = hom_frame(&*f, [0.0, 0.4]).unwrap();
        assert!(det2x2(hf.g).abs() < 1e-14);
    }

    #[test]
    fn hom_frame_matches_jacobian() {
        for name in ["torus", "clifford_torus", "ellipsoid_parallel", "cycloid_B"] {
            let f = s(name);
            let q = [0.7, 1.9];
            let hf = hom_frame(&*f, q).unwrap();
            let bp = bundle_point(&*f, q).unwrap();
            assert!((bp.fiber.mu(hf.e1, hf.e2) - 1.0).abs() < 1e-12);
            assert!((det2x2(hf.g) - bp.lambda(Role::Phi).unwrap()).abs() < 1e-10);
            let gs = hf.g_sharp.unwrap();
            assert!((det2x2(gs) - bp.lambda(Role::Psi).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn sphere_and_torus_curvatures() {
        let sph = s("sphere");
        let c = curvature_sample(&*sph, [1.0, 2.0]).unwrap();
        assert!((c.k.unwrap() - 1.0).abs() < 1e-12);
        assert!((c.k_ext_sharp.unwrap() - 1.0).abs() < 1e-12);
        assert!(c.lambda > 0.0);
        let t = s("torus");
        let c = curvature_sample(&*t, [0.0, 0.3]).unwrap();
        assert!((c.k.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((c.k_ext_sharp.unwrap() - 3.0).abs() < 1e-12);
        assert!(jacobian(&*t, [PI / 2.0, 0.4], Role::Psi).unwrap().abs() < 1e-14);
        let c = curvature_sample(&*t, [PI / 2.0, 0.4]).unwrap();
        assert!(c.k_sharp.is_none());
    }

    #[test]
    fn clifford_torus_is_flat() {
        let f = s("clifford_torus");
        let c = curvature_sample(&*f, [0.3, 1.1]).unwrap();
        assert!(c.lambda > 0.0);
        assert!((c.k_ext.unwrap() + 1.0).abs() < 1e-12);
        assert!(c.k.unwrap().abs() < 1e-12);
        assert!(c.k_sharp.unwrap().abs() < 1e-12);
    }

    #[test]
    fn torsion_vanishes() {
        for name in ["torus", "cycloid_A", "ellipsoid_parallel", "clifford_torus", "cylinder_fold"] {
            let f = s(name);
            for role in [Role::Phi, Role::Psi] {
                let r = torsion_residual(&*f, [0.4, 0.6], role).unwrap();
                assert!(norm(r) < 1e-8, "{name} {role:?}: {}", norm(r));
            }
        }
        let r = torsion_residual(&*s("fold_map"), [0.2, 0.1], Role::Phi).unwrap();
        assert!(norm(r) < 1e-10);
    }

    #[test]
    fn closed_flat_loop_turns_by_whole_turns() {
        let f = s("fold_map");
        let path: Vec<Point2> = (0..=400)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 400.0;
                [0.5 + 0.2 * t.cos(), 0.2 * t.sin()]
            })
            .collect();
        let pf = parallel_frame(&*f, &path, Role::Phi).unwrap();
        let turn = (pf.theta[400] - pf.theta[0]) / (2.0 * PI);
        assert!((turn - turn.round()).abs() < 1e-2, "{turn}");
        assert!(turn.round().abs() == 1.0);
    }

    #[test]
    fn line_image_has_constant_angle() {
        let f = s("fold_map");
        // u ↦ (u², 0)
        let path: Vec<Point2> = (0..50).map(|i| [0.2 + 0.01 * i as f64, 0.0]).collect();
        let pf = parallel_frame(&*f, &path, Role::Phi).unwrap();
        for t in &pf.theta {
            assert!((t - pf.theta[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_expansion_matches_pointwise_values() {
        for name in ["torus", "clifford_torus", "cycloid_B", "bumpy_sphere_gauss", "fold_map"] {
            let f = s(name);
            let q = [0.45, 0.3];
            let roles: &[Role] = if f.mode() == Mode::Map { &[Role::Phi] } else { &[Role::Phi, Role::Psi] };
            for &role in roles {
                let t = lambda_taylor(&*f, q, role).unwrap();
                let direct = jacobian(&*f, q, role).unwrap();
                assert!((t.value() - direct).abs() < 1e-12, "{name}");
                let h = 1e-5;
                let fd = (jacobian(&*f, [q[0] + h, q[1]], role).unwrap()
                    - jacobian(&*f, [q[0] - h, q[1]], role).unwrap())
                    / (2.0 * h);
                assert!((t.deriv(1, 0) - fd).abs() < 1e-6, "{name}");
                let fdvv = (jacobian(&*f, [q[0], q[1] + h], role).unwrap() - 2.0 * direct
                    + jacobian(&*f, [q[0], q[1] - h], role).unwrap())
                    / (h * h);
                assert!((t.deriv(0, 2) - fdvv).abs() < 1e-3, "{name}");
            }
        }
    }

    #[test]
    fn eigen_decomposition() {
        let (l, v) = sym_eigen([[2.0, 1.0], [1.0, 2.0]]);
        assert!((l[0] - 1.0).abs() < 1e-14 && (l[1] - 3.0).abs() < 1e-14);
        assert!((v[0][0] + v[0][1]).abs() < 1e-14);
        let (l, v) = sym_eigen([[0.0, 0.0], [0.0, 5.0]]);
        assert_eq!(l[0], 0.0);
        assert!((v[0][0].abs() - 1.0).abs() < 1e-14);
    }
}
