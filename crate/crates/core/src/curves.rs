//! Traced singular curves with per-sample diagnostics.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::Role;
use crate::error::{FrontError, Result};
use crate::geometry::{Point2, Surface};
use crate::grid::{CellCut, EdgeKey, SignGrid};
use crate::singular::{
    classify_singular_point, curve_point_data, lambda_prime, null_direction, null_field,
    local_lambda, project_to_singular, ClassifyOptions, SingularClass, A3_SIGN_CONVENTION,
};

/// Vertices closer than this (in domain arclength) to an A₃ marker are dropped.
const MARKER_CLEARANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SampleKind {
    A2,
    A3 { sign: i8 },
    /// λ′ vanishes at the sample (null direction tangent to the curve).
    Degenerate,
}

impl SampleKind {
    pub fn label(&self) -> &'static str {
        match self {
            SampleKind::A2 => "A2",
            SampleKind::A3 { sign } if *sign > 0 => "A3+",
            SampleKind::A3 { .. } => "A3-",
            SampleKind::Degenerate => "degenerate-unclassified",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveSample {
    pub t: f64,
    pub q: Point2,
    pub lambda_prime: f64,
    /// `None` where the image tangent degenerates.
    pub kappa: Option<f64>,
    pub density: f64,
    pub speed: f64,
    pub kind: SampleKind,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct A3Marker {
    pub t: f64,
    pub q: Point2,
    pub sign: i8,
    /// One-sided extrapolations of the density from before and after.
    pub density_before: f64,
    pub density_after: f64,
}

impl A3Marker {
    /// Relative disagreement of the two one-sided limits.
    pub fn extrapolation_gap(&self) -> f64 {
        let (a, b) = (self.density_before, self.density_after);
        (a - b).abs() / a.abs().max(b.abs()).max(1e-12)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularCurve {
    pub role: Role,
    pub samples: Vec<CurveSample>,
    /// Density at the projected midpoint of each panel; panel `k` joins
    /// samples `k` and `k+1` (the last one closes the loop on closed curves).
    pub midpoint_density: Vec<f64>,
    pub closed: bool,
    pub a3_markers: Vec<A3Marker>,
    /// `λ′` vanishes along most of the curve (null direction tangent to it).
    pub degenerate: bool,
    /// Total trace length.
    pub length: f64,
}

impl SingularCurve {
    pub fn panels(&self) -> usize {
        if self.closed {
            self.samples.len()
        } else {
            self.samples.len().saturating_sub(1)
        }
    }

    /// Trace-parameter width of panel `k`.
    pub fn panel_width(&self, k: usize) -> f64 {
        let a = self.samples[k].t;
        if k + 1 < self.samples.len() {
            self.samples[k + 1].t - a
        } else {
            self.length - a
        }
    }

    pub fn panel_end(&self, k: usize) -> &CurveSample {
        &self.samples[(k + 1) % self.samples.len()]
    }
}

/// Links the directed segments of a cut into polylines of root keys.
fn link(grid: &SignGrid, cuts: &[CellCut]) -> Vec<(Vec<Point2>, bool)> {
    let dom = &grid.domain;
    let mut next: HashMap<EdgeKey, (EdgeKey, Point2, Point2)> = HashMap::new();
    let mut prev: HashMap<EdgeKey, EdgeKey> = HashMap::new();
    let mut order = Vec::new();
    for cut in cuts {
        for &(a, b) in &cut.segments {
            let ka = grid.root_key(cut.i, cut.j, a);
            let kb = grid.root_key(cut.i, cut.j, b);
            let pa = dom.wrap(grid.root_point(cut.i, cut.j, a));
            let pb = dom.wrap(grid.root_point(cut.i, cut.j, b));
            next.insert(ka, (kb, pa, pb));
            prev.insert(kb, ka);
            order.push(ka);
        }
    }
    let mut used: HashMap<EdgeKey, bool> = HashMap::new();
    let mut out = Vec::new();
    for &seed in &order {
        if used.contains_key(&seed) {
            continue;
        }
        // walk back to the start of an open chain
        let mut start = seed;
        let mut closed = false;
        while let Some(&p) = prev.get(&start) {
            if !next.contains_key(&p) {
                break;
            }
            start = p;
            if start == seed {
                closed = true;
                break;
            }
        }
        let mut pts = Vec::new();
        let mut k = start;
        loop {
            used.insert(k, true);
            let (kb, pa, pb) = next[&k];
            pts.push(pa);
            if kb == start {
                closed = true;
                break;
            }
            if !next.contains_key(&kb) {
                pts.push(pb);
                break;
            }
            k = kb;
        }
        out.push((pts, closed));
    }
    out
}

struct Vertex {
    q: Point2,
    marker: Option<(i8, f64)>,
}

/// Traces the singular set of `role` on a `grid.0 × grid.1` grid.
pub fn trace_singular_curves(
    surface: &dyn Surface,
    role: Role,
    grid: (usize, usize),
    refine_tol: f64,
) -> Result<Vec<SingularCurve>> {
    let sg = SignGrid::new(surface, role, grid, refine_tol)?;
    let cuts = sg.cut_all(surface);
    trace_on_grid(surface, &sg, &cuts)
}

pub(crate) fn trace_on_grid(surface: &dyn Surface, sg: &SignGrid, cuts: &[CellCut]) -> Result<Vec<SingularCurve>> {
    let opts = ClassifyOptions::for_surface(surface, sg.role);
    link(sg, cuts)
        .into_iter()
        .map(|(pts, closed)| build_curve(surface, sg.role, pts, closed, &opts))
        .collect()
}

fn build_curve(
    surface: &dyn Surface,
    role: Role,
    pts: Vec<Point2>,
    closed: bool,
    opts: &ClassifyOptions,
) -> Result<SingularCurve> {
    let dom = surface.domain();
    let n = pts.len();
    // continuous null field along the polyline
    let first_tangent = dom.delta(pts[0], pts[1.min(n - 1)]);
    let mut etas = Vec::with_capacity(n);
    let mut reference = null_direction(surface, pts[0], role, Some(first_tangent))?;
    for &q in &pts {
        let e = null_field(surface, q, role, reference)?;
        etas.push(e);
        reference = e;
    }
    let lp: Vec<f64> = pts
        .par_iter()
        .zip(etas.par_iter())
        .map(|(&q, &e)| lambda_prime(surface, q, role, e))
        .collect::<Result<_>>()?;
    let flat: Vec<bool> = pts
        .iter()
        .zip(&lp)
        .map(|(&q, l)| l.abs() <= opts.deriv_tol * local_lambda(surface, q, role).grad_norm())
        .collect();
    // λ′ ≡ 0 along the curve: no isolated A₃ points to locate
    let degenerate = 2 * flat.iter().filter(|&&f| f).count() > n;

    let mut verts: Vec<Vertex> = Vec::new();
    let panels = if closed { n } else { n - 1 };
    let mut found = Vec::new();
    for k in 0..panels {
        let k1 = (k + 1) % n;
        let flip = if etas[k][0] * etas[k1][0] + etas[k][1] * etas[k1][1] < 0.0 { -1.0 } else { 1.0 };
        if !degenerate && lp[k] * lp[k1] * flip < 0.0 {
            found.push(k);
        }
    }
    let markers: Vec<(usize, Point2, i8)> = found
        .par_iter()
        .map(|&k| {
            let (q, s) = locate_marker(surface, role, pts[k], pts[(k + 1) % n], etas[k], lp[k], opts)?;
            Ok((k, q, s))
        })
        .collect::<Result<_>>()?;
    let mut mi = 0;
    for k in 0..n {
        verts.push(Vertex { q: pts[k], marker: None });
        while mi < markers.len() && markers[mi].0 == k {
            verts.push(Vertex {
                q: markers[mi].1,
                marker: Some((markers[mi].2, 0.0)),
            });
            mi += 1;
        }
    }
    // drop vertices crowding a marker
    let nv = verts.len();
    let keep: Vec<bool> = (0..nv)
        .map(|k| {
            if verts[k].marker.is_some() {
                return true;
            }
            let near = |j: usize| {
                verts[j].marker.is_some() && dom.distance(verts[j].q, verts[k].q) < MARKER_CLEARANCE
            };
            let before = if k > 0 { Some(k - 1) } else if closed { Some(nv - 1) } else { None };
            let after = if k + 1 < nv { Some(k + 1) } else if closed { Some(0) } else { None };
            !(before.is_some_and(near) || after.is_some_and(near))
        })
        .collect();
    let verts: Vec<Vertex> = verts.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect();
    let nv = verts.len();
    let npan = if closed { nv } else { nv - 1 };

    // midpoints and panel lengths
    let mids: Vec<(Point2, f64)> = (0..npan)
        .into_par_iter()
        .map(|k| {
            let a = verts[k].q;
            let b = verts[(k + 1) % nv].q;
            let d = dom.delta(a, b);
            let m = project_to_singular(surface, [a[0] + 0.5 * d[0], a[1] + 0.5 * d[1]], role)?;
            let chord = d[0].hypot(d[1]);
            let two = dom.distance(a, m) + dom.distance(m, b);
            Ok((m, (4.0 * two - chord) / 3.0))
        })
        .collect::<Result<_>>()?;
    let mut ts = Vec::with_capacity(nv);
    let mut t = 0.0;
    for k in 0..nv {
        ts.push(t);
        if k < npan {
            t += mids[k].1;
        }
    }
    let length = t;

    let vdata: Vec<Option<_>> = verts
        .par_iter()
        .map(|v| match v.marker {
            Some(_) => Ok(None),
            None => curve_point_data(surface, v.q, role).map(Some),
        })
        .collect::<Result<_>>()?;
    let mdata: Vec<f64> = mids
        .par_iter()
        .map(|(m, _)| curve_point_data(surface, *m, role).map(|d| d.density))
        .collect::<Result<_>>()?;

    // vertex λ′ re-evaluated with the aligned field (markers carry ≈ 0)
    let mut samples = Vec::with_capacity(nv);
    let mut a3_markers = Vec::new();
    let mut ref_eta = etas[0];
    let mut orig = 0;
    for k in 0..nv {
        let q = verts[k].q;
        let lpk = match verts[k].marker {
            Some(_) => 0.0,
            None => {
                let e = null_field(surface, q, role, ref_eta)?;
                ref_eta = e;
                lambda_prime(surface, q, role, e)?
            }
        };
        match (verts[k].marker, vdata[k]) {
            (None, Some(d)) => {
                while dom.distance(pts[orig], q) > 0.0 {
                    orig += 1;
                }
                samples.push(CurveSample {
                    t: ts[k],
                    q,
                    lambda_prime: lpk,
                    kappa: d.kappa,
                    density: d.density,
                    speed: d.speed,
                    kind: if flat[orig] { SampleKind::Degenerate } else { SampleKind::A2 },
                })
            }
            (Some((sign, _)), _) => {
                let (before, after) = one_sided(&ts, &vdata, &mdata, &mids, k, closed, length);
                let density = 0.5 * (before + after);
                a3_markers.push(A3Marker {
                    t: ts[k],
                    q,
                    sign,
                    density_before: before,
                    density_after: after,
                });
                samples.push(CurveSample {
                    t: ts[k],
                    q,
                    lambda_prime: lpk,
                    kappa: None,
                    density,
                    speed: 0.0,
                    kind: SampleKind::A3 { sign },
                });
            }
            _ => unreachable!(),
        }
    }
    Ok(SingularCurve {
        role,
        samples,
        midpoint_density: mdata,
        closed,
        a3_markers,
        degenerate,
        length,
    })
}

/// Quadratic extrapolation of the density to the marker at vertex `k` from
/// the three nearest finite data points on each side.
fn one_sided(
    ts: &[f64],
    vdata: &[Option<crate::singular::CurvePointData>],
    mdata: &[f64],
    mids: &[(Point2, f64)],
    k: usize,
    closed: bool,
    length: f64,
) -> (f64, f64) {
    let nv = ts.len();
    let npan = mids.len();
    // data stream: vertex j at ts[j], midpoint j at ts[j] + w_j / 2
    let mut stream: Vec<(f64, Option<f64>)> = Vec::with_capacity(2 * nv);
    for j in 0..nv {
        stream.push((ts[j], vdata[j].map(|d| d.density)));
        if j < npan {
            stream.push((ts[j] + 0.5 * mids[j].1, Some(mdata[j])));
        }
    }
    let ns = stream.len() as isize;
    let at = |i: isize| -> Option<(f64, f64)> {
        let (wrapped, shift) = if closed {
            (i.rem_euclid(ns), length * i.div_euclid(ns) as f64)
        } else if i < 0 || i >= ns {
            return None;
        } else {
            (i, 0.0)
        };
        let (t, d) = stream[wrapped as usize];
        d.filter(|x| x.is_finite()).map(|x| (t + shift, x))
    };
    let pos = 2 * k as isize;
    let t0 = ts[k];
    let side = |dir: isize| -> f64 {
        let mut pts = Vec::new();
        let mut i = pos + dir;
        while pts.len() < 3 && (i - pos).abs() < ns {
            if let Some(p) = at(i) {
                pts.push(p);
            } else if !closed && (i < 0 || i >= ns) {
                break;
            }
            i += dir;
        }
        lagrange_at(&pts, t0)
    };
    (side(-1), side(1))
}

fn lagrange_at(pts: &[(f64, f64)], t: f64) -> f64 {
    if pts.is_empty() {
        return f64::NAN;
    }
    let mut acc = 0.0;
    for (i, &(ti, yi)) in pts.iter().enumerate() {
        let mut w = 1.0;
        for (j, &(tj, _)) in pts.iter().enumerate() {
            if i != j {
                w *= (t - tj) / (ti - tj);
            }
        }
        acc += w * yi;
    }
    acc
}

/// Bisection for the zero of λ′ on the projected segment `a → b`.
fn locate_marker(
    surface: &dyn Surface,
    role: Role,
    a: Point2,
    b: Point2,
    eta_a: Point2,
    lp_a: f64,
    opts: &ClassifyOptions,
) -> Result<(Point2, i8)> {
    let dom = surface.domain();
    let d = dom.delta(a, b);
    let len = d[0].hypot(d[1]);
    let at = |tau: f64| project_to_singular(surface, [a[0] + tau * d[0], a[1] + tau * d[1]], role);
    let (mut lo, mut hi) = (0.0, 1.0);
    while (hi - lo) * len > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let v = lambda_prime(surface, at(mid)?, role, eta_a)?;
        if v * lp_a > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = at(0.5 * (lo + hi))?;
    // sign from the curve: λ″ = sgn(η·γ̇) dλ′/dt
    let eta = null_field(surface, q, role, eta_a)?;
    let along = (eta[0] * d[0] + eta[1] * d[1]).signum();
    let rising = if lp_a < 0.0 { 1.0 } else { -1.0 };
    let curve_sign: i8 = if along * rising * A3_SIGN_CONVENTION > 0.0 { 1 } else { -1 };
    let rec = classify_singular_point(surface, q, role, opts)?;
    match rec.class {
        SingularClass::A3 { sign } if sign == curve_sign => Ok((q, sign)),
        SingularClass::A3 { sign } => Err(FrontError::Inconsistency(format!(
            "A3 sign at ({}, {}): pointwise {sign}, along the curve {curve_sign}",
            q[0], q[1]
        ))),
        other => Err(FrontError::Unclassified(format!(
            "zero of lambda' at ({}, {}) classified as {}",
            q[0],
            q[1],
            other.label()
        ))),
    }
}

/// CSV export: `curve_id,t,u,v,lambda_prime,kappa,density,speed,class`.
pub fn write_curves_csv(curves: &[SingularCurve], mut w: impl Write) -> Result<()> {
    let io = |e: std::io::Error| FrontError::Io(e.to_string());
    writeln!(w, "curve_id,t,u,v,lambda_prime,kappa,density,speed,class").map_err(io)?;
    for (id, c) in curves.iter().enumerate() {
        for s in &c.samples {
            let kappa = s.kappa.map_or_else(|| "diverged".to_string(), |k| k.to_string());
            writeln!(
                w,
                "{id},{},{},{},{},{kappa},{},{},{}",
                s.t,
                s.q[0],
                s.q[1],
                s.lambda_prime,
                s.density,
                s.speed,
                s.kind.label()
            )
            .map_err(io)?;
        }
    }
    Ok(())
}
