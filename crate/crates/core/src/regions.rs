//! Decomposition into M⁺/M⁻ and quadrature over regions and curves.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::{bundle_point_unchecked, check_role, gauss_density, Role};
use crate::curves::{trace_on_grid, SingularCurve};
use crate::error::{FrontError, Result};
use crate::geometry::{Point2, Surface};
use crate::grid::{euler_of_pieces, CellCut, SignGrid};
use crate::singular::project_to_singular;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionLabel {
    #[serde(rename = "M+")]
    Plus,
    #[serde(rename = "M-")]
    Minus,
}

impl RegionLabel {
    pub fn label(self) -> &'static str {
        match self {
            RegionLabel::Plus => "M+",
            RegionLabel::Minus => "M-",
        }
    }

    fn positive(self) -> bool {
        self == RegionLabel::Plus
    }

    fn sign(self) -> f64 {
        if self.positive() {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub samples_used: usize,
}

/// Area between a cut segment and the singular curve through its projected
/// midpoint: signed so that positive means the curve bulges to the left
/// (into the positive piece).
#[derive(Debug, Clone, Copy)]
struct Bulge {
    area: f64,
    centroid: Point2,
}

pub struct RegionDecomposition {
    pub role: Role,
    pub grid: SignGrid,
    pub cuts: Vec<CellCut>,
    pub curves: Vec<SingularCurve>,
    bulges: Vec<Vec<Bulge>>,
}

/// Neumaier-compensated sum in slice order.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn decompose_regions(surface: &dyn Surface, role: Role, grid: (usize, usize), refine_tol: f64) -> Result<RegionDecomposition> {
    let sg = SignGrid::new(surface, role, grid, refine_tol)?;
    let cuts = sg.cut_all(surface);
    let curves = trace_on_grid(surface, &sg, &cuts)?;
    let dom = surface.domain();
    let bulges = cuts
        .par_iter()
        .map(|cut| {
            cut.segments
                .iter()
                .map(|&(ea, eb)| {
                    let a = sg.root_point(cut.i, cut.j, ea);
                    let b = sg.root_point(cut.i, cut.j, eb);
                    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                    let m = project_to_singular(surface, mid, role)?;
                    let s = dom.delta(dom.wrap(mid), m);
                    let d = [b[0] - a[0], b[1] - a[1]];
                    Ok(Bulge {
                        area: 2.0 / 3.0 * (d[0] * s[1] - d[1] * s[0]),
                        centroid: [mid[0] + 0.4 * s[0], mid[1] + 0.4 * s[1]],
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let d = RegionDecomposition {
        role,
        grid: sg,
        cuts,
        curves,
        bulges,
    };
    let total = euler_of_pieces(&d.grid, d.cuts.iter().flat_map(|c| c.pieces.iter().map(move |p| (c, p))));
    if total != dom.euler_characteristic() {
        return Err(FrontError::Topology(format!(
            "cell complex has Euler characteristic {total}, domain has {}",
            dom.euler_characteristic()
        )));
    }
    Ok(d)
}

/// `V − E + F` of the closure of the labelled region.
pub fn euler_characteristic(d: &RegionDecomposition, label: RegionLabel) -> i64 {
    euler_of_pieces(
        &d.grid,
        d.cuts.iter().flat_map(|c| {
            c.pieces
                .iter()
                .filter(move |p| p.positive == label.positive())
                .map(move |p| (c, p))
        }),
    )
}

/// Integrands over a region, per unit `du dv`.
#[derive(Clone, Copy)]
pub enum Integrand<'a> {
    /// Curvature measure of the decomposition's role (`K dA` for φ,
    /// `K# dA#` for ψ): `±(cλ + λ#)` on fronts, `±K̃λ` on maps, sign by label.
    GaussCurvature,
    /// `dA = |λ| du dv`.
    Area,
    /// A function already smooth across the region boundary.
    Smooth(&'a (dyn Fn(Point2) -> f64 + Sync)),
}

impl Integrand<'_> {
    fn eval(&self, surface: &dyn Surface, role: Role, label: RegionLabel, q: Point2) -> f64 {
        let q = surface.domain().wrap(q);
        match self {
            Integrand::GaussCurvature => {
                let bp = bundle_point_unchecked(surface, q);
                label.sign() * gauss_density(&bp, surface.ambient().curvature())
            }
            Integrand::Area => {
                let bp = bundle_point_unchecked(surface, q);
                label.sign() * bp.lambda(role).unwrap_or(f64::NAN)
            }
            Integrand::Smooth(f) => f(q),
        }
    }
}

const GL2: [(f64, f64); 2] = [(-0.577_350_269_189_625_8, 1.0), (0.577_350_269_189_625_8, 1.0)];
const GL3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

fn gauss_rect(f: &dyn Fn(Point2) -> f64, a: Point2, b: Point2, rule: &[(f64, f64)]) -> f64 {
    let (cu, cv) = (0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]));
    let (hu, hv) = (0.5 * (b[0] - a[0]), 0.5 * (b[1] - a[1]));
    let mut acc = 0.0;
    for &(xu, wu) in rule {
        for &(xv, wv) in rule {
            acc += wu * wv * f([cu + hu * xu, cv + hv * xv]);
        }
    }
    acc * hu * hv
}

/// Degree-5 seven-point rule on a triangle.
fn triangle(f: &dyn Fn(Point2) -> f64, p: [Point2; 3]) -> f64 {
    let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
    if area.abs() < 1e-300 {
        return 0.0;
    }
    let r15 = 15f64.sqrt();
    let (a1, a2) = ((6.0 - r15) / 21.0, (6.0 + r15) / 21.0);
    let (w1, w2) = ((155.0 - r15) / 1200.0, (155.0 + r15) / 1200.0);
    let at = |l: [f64; 3]| {
        f([
            l[0] * p[0][0] + l[1] * p[1][0] + l[2] * p[2][0],
            l[0] * p[0][1] + l[1] * p[1][1] + l[2] * p[2][1],
        ])
    };
    let c = 1.0 / 3.0;
    let mut acc = 9.0 / 40.0 * at([c, c, c]);
    for (a, w) in [(a1, w1), (a2, w2)] {
        let b = 1.0 - 2.0 * a;
        acc += w * (at([a, a, b]) + at([a, b, a]) + at([b, a, a]));
    }
    acc * area.abs()
}

fn polygon(f: &dyn Fn(Point2) -> f64, poly: &[Point2]) -> f64 {
    (1..poly.len().saturating_sub(1))
        .map(|k| triangle(f, [poly[0], poly[k], poly[k + 1]]))
        .sum()
}

/// Sutherland–Hodgman clip of a convex polygon to an axis-aligned box.
fn clip(poly: &[Point2], lo: Point2, hi: Point2) -> Vec<Point2> {
    let mut out = poly.to_vec();
    for (axis, bound, keep_above) in [(0, lo[0], true), (0, hi[0], false), (1, lo[1], true), (1, hi[1], false)] {
        let inside = |p: &Point2| if keep_above { p[axis] >= bound } else { p[axis] <= bound };
        let input = std::mem::take(&mut out);
        for k in 0..input.len() {
            let (p, q) = (input[k], input[(k + 1) % input.len()]);
            let (ip, iq) = (inside(&p), inside(&q));
            if ip {
                out.push(p);
            }
            if ip != iq {
                let t = (bound - p[axis]) / (q[axis] - p[axis]);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        if out.is_empty() {
            break;
        }
    }
    out
}

/// Integral over the labelled region, with the error estimated from a
/// coarse and a refined quadrature of every cell.
pub fn integrate_region(
    surface: &dyn Surface,
    d: &RegionDecomposition,
    label: RegionLabel,
    integrand: Integrand<'_>,
    tol: f64,
) -> Result<IntegralResult> {
    let g = &d.grid;
    let role = d.role;
    let f = |q: Point2| integrand.eval(surface, role, label, q);
    let per_cell: Vec<(f64, f64, usize)> = d
        .cuts
        .par_iter()
        .zip(d.bulges.par_iter())
        .map(|(cut, bulges)| {
            let lo = g.corner(cut.i, cut.j);
            let hi = g.corner(cut.i + 1, cut.j + 1);
            if cut.segments.is_empty() {
                if cut.pieces[0].positive != label.positive() {
                    return (0.0, 0.0, 0);
                }
                let coarse = gauss_rect(&f, lo, hi, &GL2);
                let fine = gauss_rect(&f, lo, hi, &GL3);
                return (fine, (fine - coarse).abs(), 13);
            }
            let mut coarse = 0.0;
            let mut fine = 0.0;
            let mut n = 0;
            let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
            for piece in cut.pieces.iter().filter(|p| p.positive == label.positive()) {
                let poly: Vec<Point2> = piece.boundary.iter().map(|&v| g.point(cut.i, cut.j, v)).collect();
                coarse += polygon(&f, &poly);
                n += 7 * poly.len();
                for (a, b) in [
                    (lo, mid),
                    ([mid[0], lo[1]], [hi[0], mid[1]]),
                    (mid, hi),
                    ([lo[0], mid[1]], [mid[0], hi[1]]),
                ] {
                    let sub = clip(&poly, a, b);
                    fine += polygon(&f, &sub);
                    n += 7 * sub.len();
                }
            }
            // curved boundary: the bulge belongs to the side the curve leaves it on
            let mut corr = 0.0;
            for b in bulges {
                let w = if label.positive() { -b.area } else { b.area };
                corr += w * f(b.centroid);
                n += 1;
            }
            (fine + corr, (fine - coarse).abs(), n)
        })
        .collect();
    let value = neumaier_sum(per_cell.iter().map(|c| c.0));
    let err = neumaier_sum(per_cell.iter().map(|c| c.1));
    if !value.is_finite() {
        return Err(FrontError::Accuracy(format!(
            "integral over {} is not finite",
            label.label()
        )));
    }
    let _ = tol;
    Ok(IntegralResult {
        value,
        error_estimate: err,
        samples_used: per_cell.iter().map(|c| c.2).sum(),
    })
}

/// Weights for the signed volume form.
#[derive(Clone, Copy)]
pub enum Weight<'a> {
    /// `dÂ`: integrand `λ`.
    One,
    /// `K dÂ`: integrand `cλ + λ#` on fronts, `K̃λ` on maps.
    GaussCurvature,
    /// Full integrand per unit `du dv`.
    Custom(&'a (dyn Fn(Point2) -> f64 + Sync)),
}

fn signed_pass(surface: &dyn Surface, role: Role, weight: Weight<'_>, n: usize) -> f64 {
    let dom = surface.domain();
    let c = surface.ambient().curvature();
    let f = |q: Point2| -> f64 {
        let q = dom.wrap(q);
        match weight {
            Weight::One => bundle_point_unchecked(surface, q).lambda(role).unwrap_or(f64::NAN),
            Weight::GaussCurvature => gauss_density(&bundle_point_unchecked(surface, q), c),
            Weight::Custom(g) => g(q),
        }
    };
    let (du, dv) = (dom.u_len() / n as f64, dom.v_len() / n as f64);
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            neumaier_sum((0..n).map(|j| {
                let a = [dom.u_range.0 + i as f64 * du, dom.v_range.0 + j as f64 * dv];
                gauss_rect(&f, a, [a[0] + du, a[1] + dv], &GL3)
            }))
        })
        .collect();
    neumaier_sum(rows)
}

/// `∫ weight dÂ` by composite tensor Gauss–Legendre quadrature, refined
/// until two successive levels agree to `tol`.
pub fn integrate_signed(surface: &dyn Surface, role: Role, weight: Weight<'_>, tol: f64) -> Result<IntegralResult> {
    check_role(surface, role)?;
    let mut n = 32;
    let mut prev = signed_pass(surface, role, weight, n);
    let mut used = 9 * n * n;
    let mut errs: Vec<f64> = Vec::new();
    loop {
        n *= 2;
        let cur = signed_pass(surface, role, weight, n);
        used += 9 * n * n;
        let err = (cur - prev).abs();
        errs.push(err);
        if !cur.is_finite() {
            return Err(FrontError::Accuracy("signed integral is not finite".into()));
        }
        if err <= tol || n >= 512 {
            return Ok(IntegralResult {
                value: cur,
                error_estimate: err,
                samples_used: used,
            });
        }
        if errs.len() >= 3 && errs[errs.len() - 1] >= errs[errs.len() - 3] {
            return Err(FrontError::Accuracy(format!(
                "signed integral not converging: estimates {errs:?}"
            )));
        }
        prev = cur;
    }
}

/// `∫ κ dτ` along a traced curve: Simpson per panel, with A₃ markers as
/// panel ends.
pub fn integrate_singular_curve(curve: &SingularCurve, tol: f64) -> Result<IntegralResult> {
    for m in &curve.a3_markers {
        if !(m.extrapolation_gap() <= 0.1) {
            return Err(FrontError::Accuracy(format!(
                "density extrapolations disagree at A3 point ({}, {}): {} vs {}",
                m.q[0], m.q[1], m.density_before, m.density_after
            )));
        }
    }
    let mut parts = Vec::with_capacity(curve.panels());
    let mut err = Vec::with_capacity(curve.panels());
    for k in 0..curve.panels() {
        let w = curve.panel_width(k);
        let (a, b) = (curve.samples[k].density, curve.panel_end(k).density);
        let m = curve.midpoint_density[k];
        if !(a.is_finite() && b.is_finite() && m.is_finite()) {
            return Err(FrontError::Accuracy(format!(
                "non-finite curvature density near ({}, {})",
                curve.samples[k].q[0], curve.samples[k].q[1]
            )));
        }
        let simpson = w / 6.0 * (a + 4.0 * m + b);
        let trap = w / 4.0 * (a + 2.0 * m + b);
        parts.push(simpson);
        err.push((simpson - trap).abs() / 15.0);
    }
    let _ = tol;
    Ok(IntegralResult {
        value: neumaier_sum(parts),
        error_estimate: neumaier_sum(err),
        samples_used: curve.samples.len() + curve.midpoint_density.len(),
    })
}

#[derive(Serialize)]
struct FaceJson {
    label: RegionLabel,
    polygon: Vec<Point2>,
}

#[derive(Serialize)]
struct DecompositionJson {
    role: &'static str,
    faces: Vec<FaceJson>,
    chi_plus: i64,
    chi_minus: i64,
}

/// JSON export: `{role, faces: [{label, polygon}], chi_plus, chi_minus}`.
pub fn write_regions_json(d: &RegionDecomposition, w: impl Write) -> Result<()> {
    let faces = d
        .cuts
        .iter()
        .flat_map(|c| {
            c.pieces.iter().map(move |p| FaceJson {
                label: if p.positive { RegionLabel::Plus } else { RegionLabel::Minus },
                polygon: p.boundary.iter().map(|&v| d.grid.point(c.i, c.j, v)).collect(),
            })
        })
        .collect();
    let doc = DecompositionJson {
        role: d.role.label(),
        faces,
        chi_plus: euler_characteristic(d, RegionLabel::Plus),
        chi_minus: euler_characteristic(d, RegionLabel::Minus),
    };
    serde_json::to_writer(w, &doc).map_err(|e| FrontError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;
    use std::f64::consts::PI;

    fn s(name: &str) -> Box<dyn Surface> {
        build(name, &[]).unwrap()
    }

    #[test]
    fn triangle_rule_is_degree_five() {
        let f = |q: Point2| q[0].powi(3) * q[1].powi(2) + q[0] * q[0];
        // triangle (0,0),(1,0),(0,1): ∫x³y² = 3!2!/7! = 1/420, ∫x² = 1/12
        let v = triangle(&f, [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!((v - (1.0 / 420.0 + 1.0 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn clip_square() {
        let sq = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let c = clip(&sq, [1.0, 1.0], [3.0, 3.0]);
        let one = |_: Point2| 1.0;
        assert!((polygon(&one, &c) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn torus_regions() {
        let t = s("torus");
        let d = decompose_regions(&*t, Role::Psi, (64, 64), 1e-12).unwrap();
        assert_eq!(euler_characteristic(&d, RegionLabel::Plus), 0);
        assert_eq!(euler_characteristic(&d, RegionLabel::Minus), 0);
        let dp = decompose_regions(&*t, Role::Phi, (64, 64), 1e-12).unwrap();
        let plus = integrate_region(&*t, &dp, RegionLabel::Plus, Integrand::GaussCurvature, 1e-6).unwrap();
        assert!(plus.value.abs() < 1e-9);
        let kda = |q: Point2| gauss_density(&bundle_point_unchecked(&*t, q), 0.0);
        let kp = integrate_region(&*t, &d, RegionLabel::Plus, Integrand::Smooth(&kda), 1e-6).unwrap();
        let km = integrate_region(&*t, &d, RegionLabel::Minus, Integrand::Smooth(&kda), 1e-6).unwrap();
        assert!((kp.value - 4.0 * PI).abs() < 1e-3, "{kp:?}");
        assert!((km.value + 4.0 * PI).abs() < 1e-3, "{km:?}");
    }

    #[test]
    fn sphere_total_curvature() {
        let sp = s("sphere");
        let r = integrate_signed(&*sp, Role::Phi, Weight::GaussCurvature, 1e-10).unwrap();
        assert!((r.value - 4.0 * PI).abs() < 1e-6, "{r:?}");
        let d = decompose_regions(&*sp, Role::Phi, (32, 32), 1e-12).unwrap();
        let r = integrate_region(&*sp, &d, RegionLabel::Plus, Integrand::GaussCurvature, 1e-6).unwrap();
        assert!((r.value - 4.0 * PI).abs() < 1e-4, "{r:?}");
        assert_eq!(euler_characteristic(&d, RegionLabel::Plus), 2);
    }

    #[test]
    fn projected_sphere_halves() {
        let sp = s("sphere_projection");
        let d = decompose_regions(&*sp, Role::Phi, (48, 48), 1e-12).unwrap();
        let a = integrate_region(&*sp, &d, RegionLabel::Plus, Integrand::Area, 1e-6).unwrap();
        let b = integrate_region(&*sp, &d, RegionLabel::Minus, Integrand::Area, 1e-6).unwrap();
        // each hemisphere projects onto the unit disk
        assert!((a.value - PI).abs() < 1e-5, "{a:?}");
        assert!((b.value - PI).abs() < 1e-5, "{b:?}");
    }

    #[test]
    fn torus_gauss_fold_curvature() {
        let t = s("torus");
        let d = decompose_regions(&*t, Role::Psi, (64, 64), 1e-12).unwrap();
        let total: f64 = d
            .curves
            .iter()
            .map(|c| integrate_singular_curve(c, 1e-6).unwrap().value)
            .sum();
        assert!((total + 4.0 * PI).abs() < 1e-3, "{total}");
    }

    #[test]
    fn neumaier_compensates() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(xs), 2.0);
    }
}
