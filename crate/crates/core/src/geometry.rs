//! Parameter domains, ambient models and 2-jets.
//!
//! Curved ambients are realized extrinsically: the 3-sphere inside Euclidean
//! 4-space and hyperbolic 3-space inside Lorentzian 4-space. The fiber of the
//! coherent tangent bundle at a point is then the orthogonal complement of the
//! position vector (curved models) and of the unit normal (front mode), and
//! the connection is the orthogonal projection of ordinary derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::taylor::Taylor;

pub type Point2 = [f64; 2];
/// Ambient vector; models of dimension below four leave trailing entries zero.
pub type AVec = [f64; 4];

pub const ZERO: AVec = [0.0; 4];

pub fn add(a: AVec, b: AVec) -> AVec {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn sub(a: AVec, b: AVec) -> AVec {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub fn scale(a: AVec, s: f64) -> AVec {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

/// `a + s * b`
pub fn axpy(a: AVec, s: f64, b: AVec) -> AVec {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2], a[3] + s * b[3]]
}

pub fn dot(a: AVec, b: AVec) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub fn norm(a: AVec) -> f64 {
    dot(a, a).sqrt()
}

pub fn cross3(a: AVec, b: AVec) -> AVec {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
        0.0,
    ]
}

pub fn det2(a: AVec, b: AVec) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn det3(a: AVec, b: AVec, c: AVec) -> f64 {
    dot(cross3(a, b), c)
}

pub fn det4(a: AVec, b: AVec, c: AVec, d: AVec) -> f64 {
    let m = [a, b, c, d];
    // Laplace expansion along the first column vector's entries
    let minor = |skip: usize| -> f64 {
        let rows: Vec<usize> = (0..4).filter(|&r| r != skip).collect();
        let col = |k: usize| -> AVec { [m[k][rows[0]], m[k][rows[1]], m[k][rows[2]], 0.0] };
        det3(col(1), col(2), col(3))
    };
    (0..4)
        .map(|r| {
            let s = if r % 2 == 0 { 1.0 } else { -1.0 };
            s * m[0][r] * minor(r)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmbientKind {
    Euclidean3,
    Sphere3,
    Hyperbolic3,
    FlatQuotient3,
    PlaneTarget2,
    SphereTarget2,
}

impl AmbientKind {
    /// Constant sectional curvature of the ambient (or of the map target).
    pub fn curvature(self) -> f64 {
        match self {
            AmbientKind::Euclidean3 | AmbientKind::FlatQuotient3 | AmbientKind::PlaneTarget2 => 0.0,
            AmbientKind::Sphere3 | AmbientKind::SphereTarget2 => 1.0,
            AmbientKind::Hyperbolic3 => -1.0,
        }
    }

    /// Dimension of the linear space the model is realized in.
    pub fn dim(self) -> usize {
        match self {
            AmbientKind::PlaneTarget2 => 2,
            AmbientKind::Euclidean3 | AmbientKind::FlatQuotient3 | AmbientKind::SphereTarget2 => 3,
            AmbientKind::Sphere3 | AmbientKind::Hyperbolic3 => 4,
        }
    }

    pub fn is_map_target(self) -> bool {
        matches!(self, AmbientKind::PlaneTarget2 | AmbientKind::SphereTarget2)
    }

    /// Inner product of the realizing linear space (Lorentzian for H³).
    pub fn inner(self, a: AVec, b: AVec) -> f64 {
        match self {
            AmbientKind::Hyperbolic3 => -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3],
            _ => dot(a, b),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AmbientKind::Euclidean3 => "E3",
            AmbientKind::Sphere3 => "S3",
            AmbientKind::Hyperbolic3 => "H3",
            AmbientKind::FlatQuotient3 => "R2xS1",
            AmbientKind::PlaneTarget2 => "R2",
            AmbientKind::SphereTarget2 => "S2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    PlanePatch,
    Cylinder,
    Torus,
    Sphere,
}

impl Topology {
    pub fn euler_characteristic(self) -> i64 {
        match self {
            Topology::PlanePatch => 1,
            Topology::Cylinder | Topology::Torus => 0,
            Topology::Sphere => 2,
        }
    }

    pub fn is_closed(self) -> bool {
        matches!(self, Topology::Torus | Topology::Sphere)
    }

    /// First Betti number.
    pub fn betti1(self) -> i64 {
        match self {
            Topology::PlanePatch | Topology::Sphere => 0,
            Topology::Cylinder => 1,
            Topology::Torus => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamDomain {
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub u_periodic: bool,
    pub v_periodic: bool,
    pub pole_at_u_min: bool,
    pub pole_at_u_max: bool,
}

impl ParamDomain {
    pub fn new(
        u_range: (f64, f64),
        v_range: (f64, f64),
        u_periodic: bool,
        v_periodic: bool,
        pole_at_u_min: bool,
        pole_at_u_max: bool,
    ) -> Result<Self> {
        if !(u_range.1 > u_range.0) || !(v_range.1 > v_range.0) {
            return Err(FrontError::Domain("degenerate parameter range".into()));
        }
        if (pole_at_u_min || pole_at_u_max) && !v_periodic {
            return Err(FrontError::Domain("pole rows require a periodic v".into()));
        }
        if (pole_at_u_min || pole_at_u_max) && u_periodic {
            return Err(FrontError::Domain("pole rows require a non-periodic u".into()));
        }
        Ok(ParamDomain {
            u_range,
            v_range,
            u_periodic,
            v_periodic,
            pole_at_u_min,
            pole_at_u_max,
        })
    }

    pub fn patch(u_range: (f64, f64), v_range: (f64, f64)) -> Self {
        Self::new(u_range, v_range, false, false, false, false).expect("valid patch")
    }

    pub fn torus(u_range: (f64, f64), v_range: (f64, f64)) -> Self {
        Self::new(u_range, v_range, true, true, false, false).expect("valid torus")
    }

    /// Polar chart `(θ, φ) ∈ [0, π] × [0, 2π)` of the 2-sphere.
    pub fn sphere() -> Self {
        Self::new(
            (0.0, std::f64::consts::PI),
            (0.0, 2.0 * std::f64::consts::PI),
            false,
            true,
            true,
            true,
        )
        .expect("valid sphere")
    }

    pub fn topology(&self) -> Topology {
        match (self.u_periodic, self.v_periodic) {
            (true, true) => Topology::Torus,
            (false, true) if self.pole_at_u_min && self.pole_at_u_max => Topology::Sphere,
            (false, false) => Topology::PlanePatch,
            _ => Topology::Cylinder,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.topology().euler_characteristic()
    }

    pub fn has_poles(&self) -> bool {
        self.pole_at_u_min || self.pole_at_u_max
    }

    pub fn u_len(&self) -> f64 {
        self.u_range.1 - self.u_range.0
    }

    pub fn v_len(&self) -> f64 {
        self.v_range.1 - self.v_range.0
    }

    pub fn diameter(&self) -> f64 {
        self.u_len().hypot(self.v_len())
    }

    /// Wraps periodic coordinates into their fundamental interval.
    pub fn wrap(&self, q: Point2) -> Point2 {
        let w = |x: f64, (a, b): (f64, f64), periodic: bool| {
            if periodic {
                a + (x - a).rem_euclid(b - a)
            } else {
                x
            }
        };
        [
            w(q[0], self.u_range, self.u_periodic),
            w(q[1], self.v_range, self.v_periodic),
        ]
    }

    /// Shortest coordinate difference `b - a` respecting periodicity.
    pub fn delta(&self, a: Point2, b: Point2) -> Point2 {
        let d = |x: f64, len: f64, periodic: bool| {
            if periodic {
                x - len * (x / len).round()
            } else {
                x
            }
        };
        [
            d(b[0] - a[0], self.u_len(), self.u_periodic),
            d(b[1] - a[1], self.v_len(), self.v_periodic),
        ]
    }

    pub fn distance(&self, a: Point2, b: Point2) -> f64 {
        let d = self.delta(a, b);
        d[0].hypot(d[1])
    }

    pub fn contains(&self, q: Point2) -> bool {
        let q = self.wrap(q);
        let tol = 1e-9 * (1.0 + self.diameter());
        let inside = |x: f64, (a, b): (f64, f64)| x >= a - tol && x <= b + tol;
        inside(q[0], self.u_range) && inside(q[1], self.v_range)
    }

    /// Distance (in u) to the nearest pole row, or infinity without poles.
    pub fn pole_distance(&self, u: f64) -> f64 {
        let mut d = f64::INFINITY;
        if self.pole_at_u_min {
            d = d.min((u - self.u_range.0).abs());
        }
        if self.pole_at_u_max {
            d = d.min((self.u_range.1 - u).abs());
        }
        d
    }

    /// Positive factor vanishing at pole rows; dividing a Jacobian by it gives
    /// a chart-independent sign near the poles.
    pub fn chart_weight(&self, u: f64) -> f64 {
        if self.has_poles() {
            let s = std::f64::consts::PI * (u - self.u_range.0) / self.u_len();
            s.sin()
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Immersion,
    Front,
    Map,
}

impl Mode {
    pub fn has_normal(self) -> bool {
        !matches!(self, Mode::Map)
    }
}

/// Position with first and second partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub p: AVec,
    pub p_u: AVec,
    pub p_v: AVec,
    pub p_uu: AVec,
    pub p_uv: AVec,
    pub p_vv: AVec,
}

impl Jet2 {
    pub fn from_taylor(t: &[Taylor; 4]) -> Self {
        let pick = |i: u8, j: u8| -> AVec {
            [
                t[0].deriv(i, j),
                t[1].deriv(i, j),
                t[2].deriv(i, j),
                t[3].deriv(i, j),
            ]
        };
        Jet2 {
            p: pick(0, 0),
            p_u: pick(1, 0),
            p_v: pick(0, 1),
            p_uu: pick(2, 0),
            p_uv: pick(1, 1),
            p_vv: pick(0, 2),
        }
    }

    pub fn entries(&self) -> [AVec; 6] {
        [self.p, self.p_u, self.p_v, self.p_uu, self.p_uv, self.p_vv]
    }

    /// `d/dX` of the position for a domain vector `X`.
    pub fn apply(&self, x: Point2) -> AVec {
        axpy(scale(self.p_u, x[0]), x[1], self.p_v)
    }

    /// Second derivative along `X` then `Y`.
    pub fn hessian_apply(&self, x: Point2, y: Point2) -> AVec {
        let a = scale(self.p_uu, x[0] * y[0]);
        let b = scale(self.p_uv, x[0] * y[1] + x[1] * y[0]);
        let c = scale(self.p_vv, x[1] * y[1]);
        add(add(a, b), c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontJet {
    pub f: Jet2,
    pub nu: Jet2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapJet {
    pub f: Jet2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceJet {
    Front(FrontJet),
    Map(MapJet),
}

impl SurfaceJet {
    pub fn f(&self) -> &Jet2 {
        match self {
            SurfaceJet::Front(j) => &j.f,
            SurfaceJet::Map(j) => &j.f,
        }
    }

    pub fn nu(&self) -> Option<&Jet2> {
        match self {
            SurfaceJet::Front(j) => Some(&j.nu),
            SurfaceJet::Map(_) => None,
        }
    }
}

/// Third-order expansions of the position and (when present) unit normal.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub f: [Taylor; 4],
    pub nu: Option<[Taylor; 4]>,
}

/// A parametrized surface, front or map with analytic jets.
pub trait Surface: Send + Sync {
    fn name(&self) -> &str;
    fn params(&self) -> Vec<(String, f64)>;
    fn mode(&self) -> Mode;
    fn ambient(&self) -> AmbientKind;
    fn domain(&self) -> &ParamDomain;
    /// Whether Gauss-Bonnet machinery may run on this surface.
    fn closed(&self) -> bool {
        self.domain().topology().is_closed()
    }
    /// Expansion at `q` with no domain checks.
    fn expand(&self, q: Point2) -> Expansion;
    /// Position and normal values at `q` with no domain checks.
    fn value(&self, q: Point2) -> (AVec, Option<AVec>);
}

fn check_point(surface: &dyn Surface, q: Point2) -> Result<Point2> {
    let dom = surface.domain();
    if !q[0].is_finite() || !q[1].is_finite() {
        return Err(FrontError::Domain("non-finite point".into()));
    }
    if !dom.contains(q) {
        return Err(FrontError::Domain(format!(
            "point ({}, {}) outside the parameter domain",
            q[0], q[1]
        )));
    }
    let q = dom.wrap(q);
    if dom.pole_distance(q[0]) < 1e-12 {
        return Err(FrontError::Domain(format!(
            "point ({}, {}) lies on a pole of the chart",
            q[0], q[1]
        )));
    }
    Ok(q)
}

/// Analytic 2-jet of the surface (and of its normal in front mode).
pub fn eval_jet(surface: &dyn Surface, q: Point2) -> Result<SurfaceJet> {
    let q = check_point(surface, q)?;
    Ok(jet_unchecked(surface, q))
}

pub(crate) fn jet_unchecked(surface: &dyn Surface, q: Point2) -> SurfaceJet {
    let e = surface.expand(q);
    let f = Jet2::from_taylor(&e.f);
    match (surface.mode(), e.nu) {
        (Mode::Map, _) | (_, None) => SurfaceJet::Map(MapJet { f }),
        (_, Some(nu)) => SurfaceJet::Front(FrontJet {
            f,
            nu: Jet2::from_taylor(&nu),
        }),
    }
}

/// Fourth-order central-difference estimate of the jets at `q`.
pub fn finite_difference_jet(
    surface: &dyn Surface,
    q: Point2,
    h: f64,
) -> Result<(Jet2, Option<Jet2>)> {
    if !(h >= 1e-8) {
        return Err(FrontError::Step(format!("step {h} below 1e-8")));
    }
    let w1 = [1.0, -8.0, 0.0, 8.0, -1.0];
    let w2 = [-1.0, 16.0, -30.0, 16.0, -1.0];
    let mut vals_f = [[ZERO; 5]; 5];
    let mut vals_n = [[ZERO; 5]; 5];
    let mut has_nu = false;
    for (i, row_f) in vals_f.iter_mut().enumerate() {
        for (j, cell) in row_f.iter_mut().enumerate() {
            let du = (i as f64 - 2.0) * h;
            let dv = (j as f64 - 2.0) * h;
            let (f, n) = surface.value([q[0] + du, q[1] + dv]);
            *cell = f;
            if let Some(n) = n {
                vals_n[i][j] = n;
                has_nu = true;
            }
        }
    }
    let build = |vals: &[[AVec; 5]; 5]| -> Jet2 {
        let mut jet = Jet2 {
            p: vals[2][2],
            ..Default::default()
        };
        for k in 0..5 {
            jet.p_u = axpy(jet.p_u, w1[k] / (12.0 * h), vals[k][2]);
            jet.p_v = axpy(jet.p_v, w1[k] / (12.0 * h), vals[2][k]);
            jet.p_uu = axpy(jet.p_uu, w2[k] / (12.0 * h * h), vals[k][2]);
            jet.p_vv = axpy(jet.p_vv, w2[k] / (12.0 * h * h), vals[2][k]);
            for l in 0..5 {
                jet.p_uv = axpy(jet.p_uv, w1[k] * w1[l] / (144.0 * h * h), vals[k][l]);
            }
        }
        jet
    };
    let f = build(&vals_f);
    let nu = has_nu.then(|| build(&vals_n));
    Ok((f, nu))
}

/// Fiber of the coherent tangent bundle at one point, with its metric and
/// co-orientation.
#[derive(Debug, Clone, Copy)]
pub struct Fiber {
    pub model: AmbientKind,
    /// Position in the realizing space.
    pub p: AVec,
    /// Unit normal in front mode.
    pub nu: Option<AVec>,
}

impl Fiber {
    pub fn from_jet(model: AmbientKind, jet: &SurfaceJet) -> Self {
        Fiber {
            model,
            p: jet.f().p,
            nu: jet.nu().map(|n| n.p),
        }
    }

    pub fn inner(&self, a: AVec, b: AVec) -> f64 {
        self.model.inner(a, b)
    }

    pub fn norm(&self, a: AVec) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }

    /// Directions removed by the projection onto the fiber.
    fn removed(&self) -> ([AVec; 2], usize) {
        let mut out = [ZERO; 2];
        let mut n = 0;
        if let Some(nu) = self.nu {
            out[n] = nu;
            n += 1;
        }
        let curved_position = matches!(
            self.model,
            AmbientKind::Sphere3 | AmbientKind::Hyperbolic3 | AmbientKind::SphereTarget2
        );
        if curved_position {
            out[n] = self.p;
            n += 1;
        }
        (out, n)
    }

    /// Orthogonal projection of an ambient vector onto the fiber.
    pub fn project(&self, x: AVec) -> AVec {
        let (dirs, n) = self.removed();
        let mut y = x;
        for d in &dirs[..n] {
            let dd = self.inner(*d, *d);
            if dd.abs() > 0.0 {
                y = axpy(y, -self.inner(y, *d) / dd, *d);
            }
        }
        y
    }

    /// Co-orientation form evaluated on two fiber vectors.
    pub fn mu(&self, x: AVec, y: AVec) -> f64 {
        match self.model {
            AmbientKind::PlaneTarget2 => det2(x, y),
            AmbientKind::SphereTarget2 => det3(x, y, self.p),
            AmbientKind::Euclidean3 | AmbientKind::FlatQuotient3 => {
                det3(x, y, self.nu.unwrap_or([0.0, 0.0, 1.0, 0.0]))
            }
            AmbientKind::Sphere3 | AmbientKind::Hyperbolic3 => {
                det4(self.p, x, y, self.nu.unwrap_or(ZERO))
            }
        }
    }

    /// Positive orthonormal fiber frame seeded from the coordinate axis with
    /// the largest fiber projection (smallest normal component); ties go to
    /// the lower axis index.
    pub fn frame(&self) -> (AVec, AVec) {
        self.frame_with_seed(None)
    }

    /// As [`Fiber::frame`], optionally forcing the seed axis.
    pub fn frame_with_seed(&self, seed: Option<usize>) -> (AVec, AVec) {
        let dim = self.model.dim();
        let axis = |k: usize| {
            let mut a = ZERO;
            a[k] = 1.0;
            a
        };
        let best_axis = |exclude: Option<AVec>| -> usize {
            let mut best = 0;
            let mut best_n = -1.0;
            for k in 0..dim {
                let mut pr = self.project(axis(k));
                if let Some(e) = exclude {
                    pr = axpy(pr, -self.inner(pr, e), e);
                }
                let n = self.norm(pr);
                if n > best_n + 1e-12 {
                    best_n = n;
                    best = k;
                }
            }
            best
        };
        let k1 = seed.unwrap_or_else(|| best_axis(None));
        let mut e1 = self.project(axis(k1));
        e1 = scale(e1, 1.0 / self.norm(e1));
        let k2 = best_axis(Some(e1));
        let mut e2 = self.project(axis(k2));
        e2 = axpy(e2, -self.inner(e2, e1), e1);
        e2 = scale(e2, 1.0 / self.norm(e2));
        if self.mu(e1, e2) < 0.0 {
            e2 = scale(e2, -1.0);
        }
        (e1, e2)
    }

    /// Rotation by +90° inside the fiber: `mu(x, J x) = |x|²`.
    pub fn rotate(&self, x: AVec) -> AVec {
        let (e1, e2) = self.frame();
        let a = self.inner(x, e1);
        let b = self.inner(x, e2);
        axpy(scale(e1, -b), a, e2)
    }
}

/// Component of `x` orthogonal to the fiber's normal directions.
pub fn fiber_project(model: AmbientKind, jet: &SurfaceJet, x: AVec) -> AVec {
    Fiber::from_jet(model, jet).project(x)
}

pub fn mu_form(model: AmbientKind, jet: &SurfaceJet, x: AVec, y: AVec) -> f64 {
    Fiber::from_jet(model, jet).mu(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e3_fiber() -> Fiber {
        let n = [0.6, 0.0, 0.8, 0.0];
        Fiber {
            model: AmbientKind::Euclidean3,
            p: [1.0, 2.0, 3.0, 0.0],
            nu: Some(n),
        }
    }

    #[test]
    fn determinant_helpers() {
        let e = |k: usize| {
            let mut a = ZERO;
            a[k] = 1.0;
            a
        };
        assert_eq!(det3(e(0), e(1), e(2)), 1.0);
        assert_eq!(det4(e(0), e(1), e(2), e(3)), 1.0);
        assert_eq!(det4(e(1), e(0), e(2), e(3)), -1.0);
        let a = [1.0, 2.0, 0.5, -1.0];
        let b = [0.0, 1.0, 3.0, 2.0];
        let c = [2.0, -1.0, 1.0, 0.0];
        let d = [1.0, 1.0, 1.0, 1.0];
        // expansion along a different column must agree
        let dt = det4(a, b, c, d);
        assert!((det4(b, a, c, d) + dt).abs() < 1e-12);
        assert!((det4(a, b, d, c) + dt).abs() < 1e-12);
    }

    #[test]
    fn projection_removes_normal_and_is_idempotent() {
        let fb = e3_fiber();
        let nu = fb.nu.unwrap();
        assert!(norm(fb.project(nu)) < 1e-15);
        let x = [0.3, -1.2, 2.0, 0.0];
        let px = fb.project(x);
        let ppx = fb.project(px);
        assert!(norm(sub(px, ppx)) < 1e-15);
        let tangent = [0.0, 1.0, 0.0, 0.0];
        assert_eq!(fb.project(tangent), tangent);
    }

    #[test]
    fn sphere3_projection_removes_position() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let fb = Fiber {
            model: AmbientKind::Sphere3,
            p: [s, 0.0, s, 0.0],
            nu: Some([s, 0.0, -s, 0.0]),
        };
        assert!(norm(fb.project(fb.p)) < 1e-15);
        let (e1, e2) = fb.frame();
        assert!((fb.mu(e1, e2) - 1.0).abs() < 1e-12);
        assert!(fb.inner(e1, e2).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_frame_is_lorentz_orthonormal() {
        // point (cosh a, sinh a, 0, 0) with spacelike unit normal e3
        let a: f64 = 0.7;
        let fb = Fiber {
            model: AmbientKind::Hyperbolic3,
            p: [a.cosh(), a.sinh(), 0.0, 0.0],
            nu: Some([0.0, 0.0, 0.0, 1.0]),
        };
        assert!((fb.inner(fb.p, fb.p) + 1.0).abs() < 1e-12);
        let (e1, e2) = fb.frame();
        assert!((fb.inner(e1, e1) - 1.0).abs() < 1e-12);
        assert!((fb.inner(e2, e2) - 1.0).abs() < 1e-12);
        assert!(fb.inner(e1, fb.p).abs() < 1e-12);
        assert!((fb.mu(e1, e2).abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mu_is_alternating() {
        let fb = e3_fiber();
        let (e1, e2) = fb.frame();
        assert!((fb.mu(e1, e2) - 1.0).abs() < 1e-12);
        assert!((fb.mu(e2, e1) + 1.0).abs() < 1e-12);
        assert_eq!(fb.mu(e1, e1), 0.0);
        let j = fb.rotate(e1);
        assert!(norm(sub(j, e2)) < 1e-12);
    }

    #[test]
    fn domain_validation_and_topology() {
        assert!(ParamDomain::new((0.0, 0.0), (0.0, 1.0), false, false, false, false).is_err());
        assert!(ParamDomain::new((0.0, 1.0), (0.0, 1.0), false, false, true, false).is_err());
        assert_eq!(ParamDomain::sphere().topology(), Topology::Sphere);
        assert_eq!(ParamDomain::sphere().euler_characteristic(), 2);
        let t = ParamDomain::torus((0.0, 1.0), (0.0, 1.0));
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(t.wrap([1.25, -0.25]), [0.25, 0.75]);
        let d = t.delta([0.95, 0.5], [0.05, 0.5]);
        assert!((d[0] - 0.1).abs() < 1e-12);
    }
}
