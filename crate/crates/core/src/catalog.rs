//! Closed-form surface families.
//!
//! Every entry is written once, generically over [`Scalar`], and supplies a
//! closed-form unit normal whenever it is a front or an immersion. Jets are
//! obtained by evaluating the same formula on Taylor polynomials.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{FrontError, Result};
use crate::geometry::{AVec, AmbientKind, Expansion, Mode, ParamDomain, Point2, Surface};
use crate::taylor::{Scalar, Taylor};

/// Position and optional unit normal, padded to four components.
pub type Eval<S> = ([S; 4], Option<[S; 4]>);

pub trait Parametrization: Send + Sync + 'static {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S>;
}

fn v4<S: Scalar>(a: S, b: S, c: S, d: S) -> [S; 4] {
    [a, b, c, d]
}

fn z<S: Scalar>() -> S {
    S::cst(0.0)
}

/// Catalog surface: a parametrization plus its metadata.
pub struct Analytic<P> {
    name: String,
    params: Vec<(String, f64)>,
    mode: Mode,
    ambient: AmbientKind,
    domain: ParamDomain,
    closed: bool,
    inner: P,
}

impl<P: Parametrization> Surface for Analytic<P> {
    fn name(&self) -> &str {
        &self.name
    }
    fn params(&self) -> Vec<(String, f64)> {
        self.params.clone()
    }
    fn mode(&self) -> Mode {
        self.mode
    }
    fn ambient(&self) -> AmbientKind {
        self.ambient
    }
    fn domain(&self) -> &ParamDomain {
        &self.domain
    }
    fn closed(&self) -> bool {
        self.closed
    }
    fn expand(&self, q: Point2) -> Expansion {
        let (f, nu) = self.inner.eval(Taylor::var_u(q[0]), Taylor::var_v(q[1]));
        Expansion { f, nu }
    }
    fn value(&self, q: Point2) -> (AVec, Option<AVec>) {
        self.inner.eval(q[0], q[1])
    }
}

// ---------------------------------------------------------------------------
// Families

/// `(u² + ε v², v)` in the plane.
pub struct FoldMap {
    pub eps: f64,
}

impl Parametrization for FoldMap {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        (v4(u * u + v * v * self.eps, v, z(), z()), None)
    }
}

/// Planar map germs `(u, g(u, v))`.
#[derive(Clone, Copy)]
pub enum NormalForm {
    Fold,
    Cusp,
    Butterfly,
    Lips,
    Beaks,
}

pub struct NormalFormMap {
    pub form: NormalForm,
    /// +1, or -1 to compose with the reflection of the target's second axis.
    pub reflect: f64,
}

impl Parametrization for NormalFormMap {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let g = match self.form {
            NormalForm::Fold => v * v,
            NormalForm::Cusp => v * v * v + u * v,
            NormalForm::Butterfly => v.powi(4) + u * v,
            NormalForm::Lips => v * v * v + u * u * v,
            NormalForm::Beaks => v * v * v - u * u * v,
        };
        (v4(u, g * self.reflect, z(), z()), None)
    }
}

/// Unit sphere in the polar chart, `θ = u`, `φ = v`.
fn unit_sphere<S: Scalar>(u: S, v: S) -> [S; 4] {
    let s = u.sin();
    v4(s * v.cos(), s * v.sin(), u.cos(), z())
}

pub struct SphereIdentity;

impl Parametrization for SphereIdentity {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        (unit_sphere(u, v), None)
    }
}

/// Orthogonal projection of the unit sphere to the `xy`-plane.
pub struct SphereProjection;

impl Parametrization for SphereProjection {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let p = unit_sphere(u, v);
        (v4(p[0], p[1], z(), z()), None)
    }
}

/// Round sphere of radius `radius`, outward normal.
pub struct RoundSphere {
    pub radius: f64,
}

impl Parametrization for RoundSphere {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let n = unit_sphere(u, v);
        let f = v4(n[0] * self.radius, n[1] * self.radius, n[2] * self.radius, z());
        (f, Some(n))
    }
}

/// Torus of revolution `((R + r cos u) cos v, (R + r cos u) sin v, -r sin u)`.
pub struct Torus {
    pub big_r: f64,
    pub small_r: f64,
}

impl Parametrization for Torus {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let (cu, su, cv, sv) = (u.cos(), u.sin(), v.cos(), v.sin());
        let rho = cu * self.small_r + self.big_r;
        let f = v4(rho * cv, rho * sv, -(su * self.small_r), z());
        let nu = v4(cu * cv, cu * sv, -su, z());
        (f, Some(nu))
    }
}

/// Ellipsoid with semi-axes `(a, b, c)` and its parallel front at distance `t`
/// along the inward normal.
pub struct Ellipsoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t: f64,
}

impl Parametrization for Ellipsoid {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        // v reversed so that det(f_u, f_v, nu) > 0 with the inward normal
        let s = unit_sphere(u, -v);
        let f = [s[0] * self.a, s[1] * self.b, s[2] * self.c];
        let g = [s[0] / self.a, s[1] / self.b, s[2] / self.c];
        let inv = -(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt().recip();
        let nu = [g[0] * inv, g[1] * inv, g[2] * inv];
        let ft = v4(
            f[0] + nu[0] * self.t,
            f[1] + nu[1] * self.t,
            f[2] + nu[2] * self.t,
            z(),
        );
        (ft, Some(v4(nu[0], nu[1], nu[2], z())))
    }
}

/// Radial graph `r(x) x` over the unit sphere with
/// `r = 1 + a · Re((x + i y)^k) · (1 + s z)`.
pub struct BumpySphere {
    pub a: f64,
    pub k: i32,
    pub s: f64,
}

impl BumpySphere {
    /// Radius and Euclidean gradient of the radial function at a unit vector.
    fn radius<S: Scalar>(&self, x: S, y: S, zz: S) -> (S, [S; 3]) {
        // (x + i y)^(k-1) and (x + i y)^k
        let (mut re, mut im) = (S::cst(1.0), S::cst(0.0));
        for _ in 0..(self.k - 1) {
            let nre = re * x - im * y;
            let nim = re * y + im * x;
            re = nre;
            im = nim;
        }
        let (pre, pim) = (re, im);
        let q = pre * x - pim * y;
        let kf = self.k as f64;
        let qx = pre * kf;
        let qy = -(pim * kf);
        let w = zz * self.s + 1.0;
        let r = q * w * self.a + 1.0;
        let grad = [qx * w * self.a, qy * w * self.a, q * (self.s * self.a)];
        (r, grad)
    }
}

impl Parametrization for BumpySphere {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let x = unit_sphere(u, v);
        let (r, g) = self.radius(x[0], x[1], x[2]);
        let gx = g[0] * x[0] + g[1] * x[1] + g[2] * x[2];
        // spherical gradient of r
        let gs = [g[0] - x[0] * gx, g[1] - x[1] * gx, g[2] - x[2] * gx];
        let n = [x[0] * r - gs[0], x[1] * r - gs[1], x[2] * r - gs[2]];
        let inv = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt().recip();
        let f = v4(x[0] * r, x[1] * r, x[2] * r, z());
        (f, Some(v4(n[0] * inv, n[1] * inv, n[2] * inv, z())))
    }
}

/// Rotation of the sine curve, `(u cos v, u sin v, cos u)`.
pub struct SineRotation;

impl Parametrization for SineRotation {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let (cv, sv) = (v.cos(), v.sin());
        let f = v4(u * cv, u * sv, u.cos(), z());
        let su = u.sin();
        let inv = (su * su + 1.0).sqrt().recip();
        let nu = v4(su * cv * inv, su * sv * inv, inv, z());
        (f, Some(nu))
    }
}

/// Rotations of a cycloid, `((2 + σ cos u) cos v, (2 + σ cos u) sin v, u - sin u)`
/// with `σ = -1` (positive curvature) or `σ = +1` (negative curvature).
pub struct CycloidRotation {
    pub sigma: f64,
}

impl Parametrization for CycloidRotation {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let (cv, sv) = (v.cos(), v.sin());
        let rho = u.cos() * self.sigma + 2.0;
        let f = v4(rho * cv, rho * sv, u - u.sin(), z());
        let h = u * 0.5;
        let (sh, ch) = (h.sin(), h.cos());
        let nu = v4(sh * cv, sh * sv, ch * self.sigma, z());
        (f, Some(nu))
    }
}

/// Clifford torus `(cos u, sin u, cos v, sin v)/√2` in the unit 3-sphere.
pub struct CliffordTorus;

impl Parametrization for CliffordTorus {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let k = std::f64::consts::FRAC_1_SQRT_2;
        let (cu, su, cv, sv) = (u.cos(), u.sin(), v.cos(), v.sin());
        let f = v4(cu * k, su * k, cv * k, sv * k);
        let nu = v4(cu * k, su * k, -(cv * k), -(sv * k));
        (f, Some(nu))
    }
}

/// Periodic surface of revolution `r(u) = 1 - amp cos(2π u / period)` about
/// the vertical axis, compact in the quotient `R² × S¹`.
pub struct Unduloid {
    pub period: f64,
    pub amp: f64,
}

impl Parametrization for Unduloid {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let w = 2.0 * PI / self.period;
        let arg = u * w;
        let r = -(arg.cos() * self.amp) + 1.0;
        let dr = arg.sin() * (self.amp * w);
        let (cv, sv) = (v.cos(), v.sin());
        let f = v4(r * cv, r * sv, u, z());
        // inward-pointing so that (f_u, f_v, ν) is positively oriented
        let inv = (dr * dr + 1.0).sqrt().recip();
        let nu = v4(-(cv * inv), -(sv * inv), dr * inv, z());
        (f, Some(nu))
    }
}

/// Cylinder over the plane cusp `(u², u³)`: a straight cuspidal edge.
pub struct CuspidalCylinder;

impl Parametrization for CuspidalCylinder {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let f = v4(u * u, u * u * u, v, z());
        let inv = (u * u * 9.0 + 4.0).sqrt().recip();
        let nu = v4(u * 3.0 * inv, -(inv * 2.0), z(), z());
        (f, Some(nu))
    }
}

/// Unit normal of a front in Euclidean space, viewed as a map to the 2-sphere.
pub struct GaussMap<P>(pub P);

impl<P: Parametrization> Parametrization for GaussMap<P> {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let (_, nu) = self.0.eval(u, v);
        (nu.expect("Gauss map of a surface without a normal"), None)
    }
}

/// Orthogonal projection of a surface in Euclidean space onto the plane
/// spanned by two orthonormal vectors.
pub struct PlaneProjection<P> {
    pub inner: P,
    pub e1: [f64; 3],
    pub e2: [f64; 3],
}

impl<P: Parametrization> Parametrization for PlaneProjection<P> {
    fn eval<S: Scalar>(&self, u: S, v: S) -> Eval<S> {
        let (f, _) = self.inner.eval(u, v);
        let dotp = |e: [f64; 3]| f[0] * e[0] + f[1] * e[1] + f[2] * e[2];
        (v4(dotp(self.e1), dotp(self.e2), z(), z()), None)
    }
}

/// Orthonormal basis of the plane orthogonal to the unit direction with polar
/// angle `tilt` in the `xz`-plane.
fn projection_basis(tilt: f64) -> ([f64; 3], [f64; 3]) {
    let (s, c) = tilt.sin_cos();
    // view direction d = (s, 0, c); e1 × e2 = d
    ([c, 0.0, -s], [0.0, 1.0, 0.0])
}

// ---------------------------------------------------------------------------
// Registry

#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub min: f64,
    pub max: f64,
}

const fn p(name: &'static str, default: f64, min: f64, max: f64) -> ParamSpec {
    ParamSpec {
        name,
        default,
        min,
        max,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub mode: Mode,
    pub ambient: AmbientKind,
    pub topology: crate::geometry::Topology,
    pub closed: bool,
    pub params: Vec<ParamSpec>,
    pub doc: &'static str,
}

struct EntryDef {
    name: &'static str,
    mode: Mode,
    ambient: AmbientKind,
    params: fn() -> Vec<ParamSpec>,
    doc: &'static str,
    build: fn(&[f64]) -> Result<Box<dyn Surface>>,
}

fn unit_square() -> ParamDomain {
    ParamDomain::patch((-1.0, 1.0), (-1.0, 1.0))
}

fn boxed<P: Parametrization>(
    def_name: &str,
    spec: &[ParamSpec],
    vals: &[f64],
    mode: Mode,
    ambient: AmbientKind,
    domain: ParamDomain,
    closed: bool,
    inner: P,
) -> Box<dyn Surface> {
    let params = spec
        .iter()
        .zip(vals)
        .map(|(s, v)| (s.name.to_string(), *v))
        .collect();
    let closed = closed && domain.topology().is_closed();
    Box::new(Analytic {
        name: def_name.to_string(),
        params,
        mode,
        ambient,
        domain,
        closed,
        inner,
    })
}

fn normal_form(name: &'static str, doc: &'static str) -> EntryDef {
    EntryDef {
        name,
        mode: Mode::Map,
        ambient: AmbientKind::PlaneTarget2,
        params: || vec![p("reflect", 1.0, -1.0, 1.0)],
        doc,
        build: match name {
            "fold_nf" => |v| nf_build("fold_nf", NormalForm::Fold, v),
            "cusp_nf" => |v| nf_build("cusp_nf", NormalForm::Cusp, v),
            "butterfly_nf" => |v| nf_build("butterfly_nf", NormalForm::Butterfly, v),
            "lips_nf" => |v| nf_build("lips_nf", NormalForm::Lips, v),
            _ => |v| nf_build("beaks_nf", NormalForm::Beaks, v),
        },
    }
}

fn nf_build(name: &str, form: NormalForm, v: &[f64]) -> Result<Box<dyn Surface>> {
    let reflect = v[0];
    if reflect != 1.0 && reflect != -1.0 {
        return Err(FrontError::Param("reflect must be 1 or -1".into()));
    }
    Ok(boxed(
        name,
        &[p("reflect", 1.0, -1.0, 1.0)],
        v,
        Mode::Map,
        AmbientKind::PlaneTarget2,
        unit_square(),
        false,
        NormalFormMap { form, reflect },
    ))
}

fn fold_params() -> Vec<ParamSpec> {
    vec![p("eps", 1.0, -1.0, 1.0), p("box", 1.0, 0.1, 10.0)]
}

fn bumpy_params() -> Vec<ParamSpec> {
    vec![
        p("a", 0.3, 0.0, 0.45),
        p("k", 3.0, 2.0, 6.0),
        p("s", 0.0, -1.0, 1.0),
    ]
}

// larger bumps than the Gauss-map default so that the contour has cusps
fn projection_params() -> Vec<ParamSpec> {
    let mut ps = bumpy_params();
    ps[0].default = 0.4;
    ps.push(p("tilt", 0.6, -PI, PI));
    ps
}

fn bumpy_from(v: &[f64]) -> Result<BumpySphere> {
    if v[1].fract() != 0.0 {
        return Err(FrontError::Param("k must be an integer".into()));
    }
    Ok(BumpySphere {
        a: v[0],
        k: v[1] as i32,
        s: v[2],
    })
}

fn ellipsoid_params(t: f64) -> Vec<ParamSpec> {
    vec![
        p("a", 5.0, 1e-3, 1e3),
        p("b", 4.0, 1e-3, 1e3),
        p("c", 1.0, 1e-3, 1e3),
        p("t", t, -1e3, 1e3),
    ]
}

fn ellipsoid_build(name: &str, v: &[f64], t_default: f64) -> Result<Box<dyn Surface>> {
    let mode = if v[3] == 0.0 { Mode::Immersion } else { Mode::Front };
    Ok(boxed(
        name,
        &ellipsoid_params(t_default),
        v,
        mode,
        AmbientKind::Euclidean3,
        ParamDomain::sphere(),
        true,
        Ellipsoid {
            a: v[0],
            b: v[1],
            c: v[2],
            t: v[3],
        },
    ))
}

fn registry() -> Vec<EntryDef> {
    vec![
        normal_form(
            "beaks_nf",
            "beaks normal form (u, v^3 - u^2 v) on [-1,1]^2",
        ),
        EntryDef {
            name: "bumpy_sphere",
            mode: Mode::Immersion,
            ambient: AmbientKind::Euclidean3,
            params: bumpy_params,
            doc: "radial graph r = 1 + a Re((x+iy)^k)(1 + s z) over the unit sphere; non-convex for a >= 0.2",
            build: |v| {
                Ok(boxed(
                    "bumpy_sphere",
                    &bumpy_params(),
                    v,
                    Mode::Immersion,
                    AmbientKind::Euclidean3,
                    ParamDomain::sphere(),
                    true,
                    bumpy_from(v)?,
                ))
            },
        },
        EntryDef {
            name: "bumpy_sphere_gauss",
            mode: Mode::Map,
            ambient: AmbientKind::SphereTarget2,
            params: bumpy_params,
            doc: "Gauss map of bumpy_sphere, a map S^2 -> S^2 of degree one with folds and cusps",
            build: |v| {
                Ok(boxed(
                    "bumpy_sphere_gauss",
                    &bumpy_params(),
                    v,
                    Mode::Map,
                    AmbientKind::SphereTarget2,
                    ParamDomain::sphere(),
                    true,
                    GaussMap(bumpy_from(v)?),
                ))
            },
        },
        EntryDef {
            name: "bumpy_sphere_projection",
            mode: Mode::Map,
            ambient: AmbientKind::PlaneTarget2,
            params: || {
                projection_params()
            },
            doc: "orthogonal projection of bumpy_sphere to the plane normal to (sin tilt, 0, cos tilt)",
            build: |v| {
                let (e1, e2) = projection_basis(v[3]);
                let ps = projection_params();
                Ok(boxed(
                    "bumpy_sphere_projection",
                    &ps,
                    v,
                    Mode::Map,
                    AmbientKind::PlaneTarget2,
                    ParamDomain::sphere(),
                    true,
                    PlaneProjection {
                        inner: bumpy_from(&v[..3])?,
                        e1,
                        e2,
                    },
                ))
            },
        },
        normal_form(
            "butterfly_nf",
            "butterfly normal form (u, v^4 + u v) on [-1,1]^2",
        ),
        EntryDef {
            name: "clifford_torus",
            mode: Mode::Immersion,
            ambient: AmbientKind::Sphere3,
            params: Vec::new,
            doc: "Clifford torus (cos u, sin u, cos v, sin v)/sqrt2, a flat torus in S^3 with K_ext = -1",
            build: |v| {
                Ok(boxed(
                    "clifford_torus",
                    &[],
                    v,
                    Mode::Immersion,
                    AmbientKind::Sphere3,
                    ParamDomain::torus((0.0, 2.0 * PI), (0.0, 2.0 * PI)),
                    true,
                    CliffordTorus,
                ))
            },
        },
        normal_form(
            "cusp_nf",
            "cusp normal form (u, v^3 + u v) on [-1,1]^2; reflect=-1 flips the target",
        ),
        EntryDef {
            name: "cycloid_A",
            mode: Mode::Front,
            ambient: AmbientKind::FlatQuotient3,
            params: Vec::new,
            doc: "rotation of a cycloid ((2 - cos u) cos v, (2 - cos u) sin v, u - sin u); K = 1/(4(2 - cos u)) > 0; double cover u in [0, 4pi) in R^2 x S^1",
            build: |v| {
                Ok(boxed(
                    "cycloid_A",
                    &[],
                    v,
                    Mode::Front,
                    AmbientKind::FlatQuotient3,
                    ParamDomain::torus((0.0, 4.0 * PI), (0.0, 2.0 * PI)),
                    true,
                    CycloidRotation { sigma: -1.0 },
                ))
            },
        },
        EntryDef {
            name: "cycloid_B",
            mode: Mode::Front,
            ambient: AmbientKind::FlatQuotient3,
            params: Vec::new,
            doc: "rotation of a cycloid ((2 + cos u) cos v, (2 + cos u) sin v, u - sin u); K = -1/(4(2 + cos u)) < 0; a torus front in R^2 x S^1 (double cover u in [0, 4pi))",
            build: |v| {
                Ok(boxed(
                    "cycloid_B",
                    &[],
                    v,
                    Mode::Front,
                    AmbientKind::FlatQuotient3,
                    ParamDomain::torus((0.0, 4.0 * PI), (0.0, 2.0 * PI)),
                    true,
                    CycloidRotation { sigma: 1.0 },
                ))
            },
        },
        EntryDef {
            name: "cylinder_fold",
            mode: Mode::Front,
            ambient: AmbientKind::Euclidean3,
            params: Vec::new,
            doc: "cylinder (u^2, u^3, v) over a plane cusp: a straight cuspidal edge with zero singular curvature",
            build: |v| {
                Ok(boxed(
                    "cylinder_fold",
                    &[],
                    v,
                    Mode::Front,
                    AmbientKind::Euclidean3,
                    unit_square(),
                    false,
                    CuspidalCylinder,
                ))
            },
        },
        EntryDef {
            name: "ellipsoid",
            mode: Mode::Immersion,
            ambient: AmbientKind::Euclidean3,
            params: || ellipsoid_params(0.0),
            doc: "ellipsoid (x/a)^2 + (y/b)^2 + (z/c)^2 = 1 and its parallel front f + t nu, nu inward (t = 0: the ellipsoid)",
            build: |v| ellipsoid_build("ellipsoid", v, 0.0),
        },
        EntryDef {
            name: "ellipsoid_parallel",
            mode: Mode::Front,
            ambient: AmbientKind::Euclidean3,
            params: || ellipsoid_params(5.5),
            doc: "parallel front f + t nu of the (5,4,1) ellipsoid; t = 11/2 has four negative swallowtails",
            build: |v| ellipsoid_build("ellipsoid_parallel", v, 5.5),
        },
        EntryDef {
            name: "fold_map",
            mode: Mode::Map,
            ambient: AmbientKind::PlaneTarget2,
            params: fold_params,
            doc: "planar map (u^2 + eps v^2, v) on [-box, box]^2; folds of positive (eps = 1) or negative (eps = -1) singular curvature",
            build: |v| {
                if v[0] != 1.0 && v[0] != -1.0 {
                    return Err(FrontError::Param("eps must be 1 or -1".into()));
                }
                Ok(boxed(
                    "fold_map",
                    &fold_params(),
                    v,
                    Mode::Map,
                    AmbientKind::PlaneTarget2,
                    ParamDomain::patch((-v[1], v[1]), (-v[1], v[1])),
                    false,
                    FoldMap { eps: v[0] },
                ))
            },
        },
        normal_form(
            "fold_nf",
            "fold normal form (u, v^2) on [-1,1]^2",
        ),
        normal_form(
            "lips_nf",
            "lips normal form (u, v^3 + u^2 v) on [-1,1]^2",
        ),
        EntryDef {
            name: "sine_rotation",
            mode: Mode::Immersion,
            ambient: AmbientKind::Euclidean3,
            params: Vec::new,
            doc: "rotation of the sine curve (u cos v, u sin v, cos u), 0.1 <= u <= pi - 0.1; its Gauss map has folds of positive singular curvature",
            build: |v| {
                Ok(boxed(
                    "sine_rotation",
                    &[],
                    v,
                    Mode::Immersion,
                    AmbientKind::Euclidean3,
                    ParamDomain::new((0.1, PI - 0.1), (0.0, 2.0 * PI), false, true, false, false)?,
                    false,
                    SineRotation,
                ))
            },
        },
        EntryDef {
            name: "sphere",
            mode: Mode::Immersion,
            ambient: AmbientKind::Euclidean3,
            params: || vec![p("radius", 1.0, 1e-3, 1e3)],
            doc: "round sphere of the given radius with outward normal",
            build: |v| {
                Ok(boxed(
                    "sphere",
                    &[p("radius", 1.0, 1e-3, 1e3)],
                    v,
                    Mode::Immersion,
                    AmbientKind::Euclidean3,
                    ParamDomain::sphere(),
                    true,
                    RoundSphere { radius: v[0] },
                ))
            },
        },
        EntryDef {
            name: "sphere_identity",
            mode: Mode::Map,
            ambient: AmbientKind::SphereTarget2,
            params: Vec::new,
            doc: "identity map of the unit sphere (the Gauss map of the round sphere)",
            build: |v| {
                Ok(boxed(
                    "sphere_identity",
                    &[],
                    v,
                    Mode::Map,
                    AmbientKind::SphereTarget2,
                    ParamDomain::sphere(),
                    true,
                    SphereIdentity,
                ))
            },
        },
        EntryDef {
            name: "sphere_projection",
            mode: Mode::Map,
            ambient: AmbientKind::PlaneTarget2,
            params: Vec::new,
            doc: "orthogonal projection of the unit sphere to the xy-plane; fold along the equator",
            build: |v| {
                Ok(boxed(
                    "sphere_projection",
                    &[],
                    v,
                    Mode::Map,
                    AmbientKind::PlaneTarget2,
                    ParamDomain::sphere(),
                    true,
                    SphereProjection,
                ))
            },
        },
        EntryDef {
            name: "torus",
            mode: Mode::Immersion,
            ambient: AmbientKind::Euclidean3,
            params: || vec![p("R", 2.0, 1e-3, 1e3), p("r", 1.0, 1e-3, 1e3)],
            doc: "torus of revolution with radii R > r; its Gauss map folds along the top and bottom circles",
            build: |v| {
                if !(v[0] > v[1]) {
                    return Err(FrontError::Param("torus requires R > r".into()));
                }
                Ok(boxed(
                    "torus",
                    &[p("R", 2.0, 1e-3, 1e3), p("r", 1.0, 1e-3, 1e3)],
                    v,
                    Mode::Immersion,
                    AmbientKind::Euclidean3,
                    ParamDomain::torus((0.0, 2.0 * PI), (0.0, 2.0 * PI)),
                    true,
                    Torus {
                        big_r: v[0],
                        small_r: v[1],
                    },
                ))
            },
        },
        EntryDef {
            name: "torus_gauss",
            mode: Mode::Map,
            ambient: AmbientKind::SphereTarget2,
            params: || vec![p("R", 2.0, 1e-3, 1e3), p("r", 1.0, 1e-3, 1e3)],
            doc: "Gauss map of the torus of revolution, a degree-zero map T^2 -> S^2 with two fold circles",
            build: |v| {
                if !(v[0] > v[1]) {
                    return Err(FrontError::Param("torus requires R > r".into()));
                }
                Ok(boxed(
                    "torus_gauss",
                    &[p("R", 2.0, 1e-3, 1e3), p("r", 1.0, 1e-3, 1e3)],
                    v,
                    Mode::Map,
                    AmbientKind::SphereTarget2,
                    ParamDomain::torus((0.0, 2.0 * PI), (0.0, 2.0 * PI)),
                    true,
                    GaussMap(Torus {
                        big_r: v[0],
                        small_r: v[1],
                    }),
                ))
            },
        },
        EntryDef {
            name: "unduloid",
            mode: Mode::Immersion,
            ambient: AmbientKind::FlatQuotient3,
            params: || vec![p("period", two_pi_default(), 0.5, 100.0), p("amp", 0.5, 0.0, 0.9)],
            doc: "periodic surface of revolution r(z) = 1 - amp cos(2 pi z / period) as a torus in R^2 x S^1; contains an annulus of negative curvature",
            build: |v| {
                Ok(boxed(
                    "unduloid",
                    &[p("period", two_pi_default(), 0.5, 100.0), p("amp", 0.5, 0.0, 0.9)],
                    v,
                    Mode::Immersion,
                    AmbientKind::FlatQuotient3,
                    ParamDomain::torus((0.0, v[0]), (0.0, 2.0 * PI)),
                    true,
                    Unduloid {
                        period: v[0],
                        amp: v[1],
                    },
                ))
            },
        },
    ]
}

fn two_pi_default() -> f64 {
    2.0 * PI
}

/// Canonical catalog name for a user-supplied one (case-insensitive, `-` ≡ `_`,
/// plus a few short aliases).
pub fn canonical_name(name: &str) -> Option<&'static str> {
    let key = name.trim().to_ascii_lowercase().replace('-', "_");
    let alias = match key.as_str() {
        "clifford" => "clifford_torus",
        "cyc" | "cycloid_b" => "cycloid_B",
        "cycloid_a" => "cycloid_A",
        "unit_sphere" => "sphere",
        _ => "",
    };
    let target = if alias.is_empty() { key.as_str() } else { alias };
    registry()
        .into_iter()
        .map(|e| e.name)
        .find(|n| n.eq_ignore_ascii_case(target))
}

/// Stable, lexicographically ordered listing.
pub fn list() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = registry()
        .into_iter()
        .map(|e| {
            let params = (e.params)();
            let defaults: Vec<f64> = params.iter().map(|p| p.default).collect();
            let s = (e.build)(&defaults).expect("defaults are valid");
            CatalogEntry {
                name: e.name,
                mode: e.mode,
                ambient: e.ambient,
                topology: s.domain().topology(),
                closed: s.closed(),
                params,
                doc: e.doc,
            }
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(b.name));
    out
}

/// Builds a catalog surface, overriding defaults with `params`.
pub fn build(name: &str, params: &[(String, f64)]) -> Result<Box<dyn Surface>> {
    let canon =
        canonical_name(name).ok_or_else(|| FrontError::UnknownSurface(name.to_string()))?;
    let def = registry()
        .into_iter()
        .find(|e| e.name == canon)
        .expect("canonical name is registered");
    let spec = (def.params)();
    let mut vals: Vec<f64> = spec.iter().map(|p| p.default).collect();
    for (k, v) in params {
        let idx = spec.iter().position(|p| p.name == k).ok_or_else(|| {
            FrontError::Param(format!("surface `{canon}` has no parameter `{k}`"))
        })?;
        let ps = &spec[idx];
        if !v.is_finite() || *v < ps.min || *v > ps.max {
            return Err(FrontError::Param(format!(
                "parameter {k}={v} outside [{}, {}]",
                ps.min, ps.max
            )));
        }
        vals[idx] = *v;
    }
    (def.build)(&vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_is_sorted_and_complete() {
        let names: Vec<&str> = list().iter().map(|e| e.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for nf in ["fold_nf", "cusp_nf", "butterfly_nf", "lips_nf", "beaks_nf"] {
            assert!(names.contains(&nf));
        }
        assert!(names.contains(&"cycloid_B"));
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(canonical_name("ellipsoid-parallel"), Some("ellipsoid_parallel"));
        assert_eq!(canonical_name("clifford"), Some("clifford_torus"));
        assert_eq!(canonical_name("CYCLOID_B"), Some("cycloid_B"));
        assert!(canonical_name("trinoid").is_none());
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(matches!(
            build("torus", &[("R".into(), 1.0), ("r".into(), 2.0)]),
            Err(FrontError::Param(_))
        ));
        assert!(matches!(
            build("torus", &[("q".into(), 1.0)]),
            Err(FrontError::Param(_))
        ));
        assert!(matches!(build("nope", &[]), Err(FrontError::UnknownSurface(_))));
    }

    #[test]
    fn not_closed_entries_are_flagged() {
        assert!(!build("fold_map", &[]).unwrap().closed());
        assert!(!build("sine_rotation", &[]).unwrap().closed());
        assert!(build("torus", &[]).unwrap().closed());
    }
}
