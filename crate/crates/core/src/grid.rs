//! Sampled sign field of a Jacobian function and its marching-squares cut.
//!
//! Corners of cell `(i, j)` are `c0 = (i, j)`, `c1 = (i+1, j)`,
//! `c2 = (i+1, j+1)`, `c3 = (i, j+1)`; edge `e_k` runs from `c_k` to
//! `c_{k+1}`. Values `>= 0` count as positive.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::bundle::{check_role, lambda_taylor_unchecked, Role};
use crate::error::{FrontError, Result};
use crate::geometry::{ParamDomain, Point2, Surface};

/// Irrational node offset, as a fraction of a cell.
pub const GRID_OFFSET: f64 = 0.103_553_390_593_273_76; // (√2 − 1)/4

/// Minimum distance of the singular set from a chart pole.
pub const POLE_CLEARANCE: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct Axis {
    pub cells: usize,
    pub periodic: bool,
    pub pole_lo: bool,
    pub pole_hi: bool,
    start: f64,
    len: f64,
}

impl Axis {
    fn new(range: (f64, f64), cells: usize, periodic: bool, pole_lo: bool, pole_hi: bool) -> Self {
        Axis {
            cells,
            periodic,
            pole_lo,
            pole_hi,
            start: range.0,
            len: range.1 - range.0,
        }
    }

    pub fn nodes(&self) -> usize {
        if self.periodic {
            self.cells
        } else {
            self.cells + 1
        }
    }

    /// Node index of corner `i` (`0..=cells`).
    pub fn node(&self, i: usize) -> usize {
        if self.periodic {
            i % self.cells
        } else {
            i
        }
    }

    /// Unwrapped coordinate of corner `i`.
    pub fn coord(&self, i: usize) -> f64 {
        let n = self.cells as f64;
        let x = i as f64;
        if self.periodic {
            self.start + (x + GRID_OFFSET) * self.len / n
        } else if self.pole_lo || self.pole_hi {
            // poles stay on nodes; interior nodes are nudged off rational positions
            let r = x / n;
            self.start + self.len * (r + GRID_OFFSET / n * (std::f64::consts::PI * r).sin())
        } else {
            self.start + (x + GRID_OFFSET) * self.len / (n + 1.0)
        }
    }

    pub fn is_pole(&self, i: usize) -> bool {
        (self.pole_lo && i == 0) || (self.pole_hi && i == self.cells)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    /// 0: along u, 1: along v.
    pub dir: u8,
    pub iu: u32,
    pub iv: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Node(u32, u32),
    PoleLo,
    PoleHi,
    Root(EdgeKey),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceVertex {
    Corner(usize),
    Root(usize),
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub positive: bool,
    pub boundary: Vec<PieceVertex>,
}

#[derive(Debug, Clone)]
pub struct CellCut {
    pub i: usize,
    pub j: usize,
    /// Directed segments between edge roots, positive side on the left.
    pub segments: Vec<(usize, usize)>,
    pub pieces: Vec<Piece>,
}

pub struct SignGrid {
    pub role: Role,
    pub domain: ParamDomain,
    pub u: Axis,
    pub v: Axis,
    /// Sign field `λ / w` at the nodes, `w` the chart weight.
    pub values: Vec<f64>,
    /// Largest `|λ / w|` over the nodes.
    pub scale: f64,
    pub refine_tol: f64,
    roots: HashMap<EdgeKey, f64>,
}

fn positive(x: f64) -> bool {
    x >= 0.0
}

/// Sign field `λ / w` at a domain point.
pub fn sign_field(surface: &dyn Surface, role: Role, q: Point2) -> f64 {
    let dom = surface.domain();
    let q = dom.wrap(q);
    lambda_taylor_unchecked(surface, q, role).value() / dom.chart_weight(q[0])
}

/// Root of `g` on `[0, 1]` given opposite signs at the ends; Illinois
/// regula falsi with periodic bisection steps.
pub fn refine_root(g: impl Fn(f64) -> f64, g0: f64, g1: f64, width_tol: f64) -> f64 {
    let (mut a, mut b, mut fa, mut fb) = (0.0, 1.0, g0, g1);
    let mut side = 0i8;
    for it in 0..200 {
        if b - a <= width_tol {
            break;
        }
        let mut x = if it % 3 == 2 || fa == fb {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = g(x);
        if fx == 0.0 {
            return x;
        }
        if positive(fx) == positive(fa) {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    // the secant point inside the final bracket
    if fa != fb {
        let x = (a * fb - b * fa) / (fb - fa);
        if x >= a && x <= b {
            return x;
        }
    }
    0.5 * (a + b)
}

impl SignGrid {
    pub fn new(
        surface: &dyn Surface,
        role: Role,
        grid: (usize, usize),
        refine_tol: f64,
    ) -> Result<SignGrid> {
        check_role(surface, role)?;
        if grid.0 < 16 || grid.1 < 16 {
            return Err(FrontError::Param(format!(
                "grid {}x{} below the 16x16 minimum",
                grid.0, grid.1
            )));
        }
        let dom = surface.domain().clone();
        let u = Axis::new(dom.u_range, grid.0, dom.u_periodic, dom.pole_at_u_min, dom.pole_at_u_max);
        let v = Axis::new(dom.v_range, grid.1, dom.v_periodic, false, false);
        let (nu, nv) = (u.nodes(), v.nodes());
        let pole_shift = 1e-7 * dom.u_len();
        let values: Vec<f64> = (0..nu * nv)
            .into_par_iter()
            .map(|k| {
                let (iu, iv) = (k / nv, k % nv);
                let mut uc = u.coord(iu);
                if u.pole_lo && iu == 0 {
                    uc += pole_shift;
                } else if u.pole_hi && iu == u.cells {
                    uc -= pole_shift;
                }
                sign_field(surface, role, [uc, v.coord(iv)])
            })
            .collect();
        let mut g = SignGrid {
            role,
            domain: dom,
            u,
            v,
            scale: values.iter().fold(0.0f64, |m, x| m.max(x.abs())),
            values,
            refine_tol,
            roots: HashMap::new(),
        };
        g.check_poles(surface)?;
        g.find_roots(surface)?;
        Ok(g)
    }

    /// Averages the pole rows and refuses singular sets near a pole.
    fn check_poles(&mut self, surface: &dyn Surface) -> Result<()> {
        let nv = self.v.nodes();
        for (flag, row) in [(self.u.pole_lo, 0), (self.u.pole_hi, self.u.cells)] {
            if !flag {
                continue;
            }
            let mean = (0..nv).map(|j| self.values[row * nv + j]).sum::<f64>() / nv as f64;
            let ring_u = if row == 0 {
                self.domain.u_range.0 + POLE_CLEARANCE
            } else {
                self.domain.u_range.1 - POLE_CLEARANCE
            };
            let mut near: Vec<f64> = (0..nv).map(|j| self.values[row * nv + j]).collect();
            near.extend((0..nv).map(|j| sign_field(surface, self.role, [ring_u, self.v.coord(j)])));
            for i in 0..=self.u.cells {
                let d = if row == 0 {
                    self.u.coord(i) - self.domain.u_range.0
                } else {
                    self.domain.u_range.1 - self.u.coord(i)
                };
                if d <= POLE_CLEARANCE {
                    near.extend((0..nv).map(|j| self.values[self.u.node(i) * nv + j]));
                }
            }
            if near.iter().any(|&x| positive(x) != positive(mean)) {
                return Err(FrontError::Domain(format!(
                    "singular set of {} within {POLE_CLEARANCE} of a chart pole",
                    self.role.label()
                )));
            }
            for j in 0..nv {
                self.values[row * nv + j] = mean;
            }
        }
        Ok(())
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.u.node(i) * self.v.nodes() + self.v.node(j)]
    }

    /// Unwrapped coordinates of corner `(i, j)`.
    pub fn corner(&self, i: usize, j: usize) -> Point2 {
        [self.u.coord(i), self.v.coord(j)]
    }

    fn corners(i: usize, j: usize) -> [(usize, usize); 4] {
        [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
    }

    fn edge_key(&self, i: usize, j: usize, k: usize) -> EdgeKey {
        let (dir, ci, cj) = match k {
            0 => (0, i, j),
            1 => (1, i + 1, j),
            2 => (0, i, j + 1),
            _ => (1, i, j),
        };
        EdgeKey {
            dir,
            iu: self.u.node(ci) as u32,
            iv: self.v.node(cj) as u32,
        }
    }

    /// Endpoints of an edge as corner indices, in increasing coordinate.
    fn edge_ends(&self, i: usize, j: usize, k: usize) -> ((usize, usize), (usize, usize)) {
        match k {
            0 | 2 => {
                let jj = if k == 0 { j } else { j + 1 };
                ((i, jj), (i + 1, jj))
            }
            _ => {
                let ii = if k == 1 { i + 1 } else { i };
                ((ii, j), (ii, j + 1))
            }
        }
    }

    fn collapsed(&self, i: usize, k: usize) -> bool {
        (k == 3 && self.u.pole_lo && i == 0) || (k == 1 && self.u.pole_hi && i + 1 == self.u.cells)
    }

    fn crossing(&self, i: usize, j: usize, k: usize) -> bool {
        if self.collapsed(i, k) {
            return false;
        }
        let (a, b) = self.edge_ends(i, j, k);
        positive(self.value(a.0, a.1)) != positive(self.value(b.0, b.1))
    }

    fn find_roots(&mut self, surface: &dyn Surface) -> Result<()> {
        let mut jobs: Vec<(EdgeKey, Point2, Point2, f64, f64)> = Vec::new();
        let mut seen = BTreeSet::new();
        for i in 0..self.u.cells {
            for j in 0..self.v.cells {
                let vals = Self::corners(i, j).map(|(a, b)| self.value(a, b).abs());
                if vals.iter().all(|&x| x < self.refine_tol) {
                    return Err(FrontError::GridTooCoarse(format!(
                        "all corners of cell ({i}, {j}) have |lambda| below {}",
                        self.refine_tol
                    )));
                }
                for k in [0, 3] {
                    if !self.crossing(i, j, k) {
                        continue;
                    }
                    let key = self.edge_key(i, j, k);
                    if seen.insert(key) {
                        let (a, b) = self.edge_ends(i, j, k);
                        jobs.push((
                            key,
                            self.corner(a.0, a.1),
                            self.corner(b.0, b.1),
                            self.value(a.0, a.1),
                            self.value(b.0, b.1),
                        ));
                    }
                }
            }
        }
        // right and top edges on non-periodic boundaries
        if !self.v.periodic {
            let j = self.v.cells - 1;
            for i in 0..self.u.cells {
                self.push_edge(i, j, 2, &mut jobs, &mut seen);
            }
        }
        if !self.u.periodic {
            let i = self.u.cells - 1;
            for j in 0..self.v.cells {
                self.push_edge(i, j, 1, &mut jobs, &mut seen);
            }
        }
        let role = self.role;
        let tol = self.refine_tol;
        let roots: Vec<(EdgeKey, f64)> = jobs
            .par_iter()
            .map(|&(key, a, b, fa, fb)| {
                let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                let g = |t: f64| {
                    sign_field(surface, role, [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])])
                };
                (key, refine_root(g, fa, fb, tol / len))
            })
            .collect();
        self.roots = roots.into_iter().collect();
        Ok(())
    }

    fn push_edge(
        &self,
        i: usize,
        j: usize,
        k: usize,
        jobs: &mut Vec<(EdgeKey, Point2, Point2, f64, f64)>,
        seen: &mut BTreeSet<EdgeKey>,
    ) {
        if !self.crossing(i, j, k) {
            return;
        }
        let key = self.edge_key(i, j, k);
        if seen.insert(key) {
            let (a, b) = self.edge_ends(i, j, k);
            jobs.push((
                key,
                self.corner(a.0, a.1),
                self.corner(b.0, b.1),
                self.value(a.0, a.1),
                self.value(b.0, b.1),
            ));
        }
    }

    /// Root on edge `k` of cell `(i, j)`, in that cell's unwrapped coordinates.
    pub fn root_point(&self, i: usize, j: usize, k: usize) -> Point2 {
        let t = self.roots[&self.edge_key(i, j, k)];
        let (a, b) = self.edge_ends(i, j, k);
        let (pa, pb) = (self.corner(a.0, a.1), self.corner(b.0, b.1));
        [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
    }

    pub fn root_key(&self, i: usize, j: usize, k: usize) -> EdgeKey {
        self.edge_key(i, j, k)
    }

    pub fn vertex_id(&self, i: usize, j: usize, v: PieceVertex) -> VertexId {
        match v {
            PieceVertex::Root(k) => VertexId::Root(self.edge_key(i, j, k)),
            PieceVertex::Corner(k) => {
                let (a, b) = Self::corners(i, j)[k];
                if self.u.pole_lo && a == 0 {
                    VertexId::PoleLo
                } else if self.u.pole_hi && a == self.u.cells {
                    VertexId::PoleHi
                } else {
                    VertexId::Node(self.u.node(a) as u32, self.v.node(b) as u32)
                }
            }
        }
    }

    pub fn point(&self, i: usize, j: usize, v: PieceVertex) -> Point2 {
        match v {
            PieceVertex::Root(k) => self.root_point(i, j, k),
            PieceVertex::Corner(k) => {
                let (a, b) = Self::corners(i, j)[k];
                self.corner(a, b)
            }
        }
    }

    /// Marching-squares cut of one cell. `center` is the sign-field value at
    /// the cell center, consulted only for saddles.
    pub fn cut_cell(&self, i: usize, j: usize, center: impl FnOnce() -> f64) -> CellCut {
        let s: [bool; 4] = Self::corners(i, j).map(|(a, b)| positive(self.value(a, b)));
        let cross: Vec<usize> = (0..4).filter(|&k| self.crossing(i, j, k)).collect();
        let mut segments = Vec::new();
        let mut pieces = Vec::new();
        match cross.len() {
            0 => pieces.push(Piece {
                positive: s[0],
                boundary: (0..4).map(PieceVertex::Corner).collect(),
            }),
            2 => {
                let (ea, eb) = (cross[0], cross[1]);
                // corners ea+1 ..= eb lie to the right of ea -> eb
                let right_pos = s[(ea + 1) % 4];
                if right_pos {
                    segments.push((eb, ea));
                } else {
                    segments.push((ea, eb));
                }
                let mut p1 = vec![PieceVertex::Root(ea)];
                p1.extend((ea + 1..=eb).map(PieceVertex::Corner));
                p1.push(PieceVertex::Root(eb));
                let mut p2 = vec![PieceVertex::Root(eb)];
                p2.extend((eb + 1..=ea + 4).map(|k| PieceVertex::Corner(k % 4)));
                p2.push(PieceVertex::Root(ea));
                pieces.push(Piece {
                    positive: right_pos,
                    boundary: p1,
                });
                pieces.push(Piece {
                    positive: !right_pos,
                    boundary: p2,
                });
            }
            4 => {
                let c = positive(center());
                let mut central = Vec::new();
                for k in 0..4 {
                    let prev = (k + 3) % 4;
                    if s[k] == c {
                        central.push(PieceVertex::Corner(k));
                    } else {
                        // cut off corner k; it lies right of e_{k-1} -> e_k
                        if s[k] {
                            segments.push((k, prev));
                        } else {
                            segments.push((prev, k));
                        }
                        pieces.push(Piece {
                            positive: s[k],
                            boundary: vec![
                                PieceVertex::Root(prev),
                                PieceVertex::Corner(k),
                                PieceVertex::Root(k),
                            ],
                        });
                    }
                    central.push(PieceVertex::Root(k));
                }
                pieces.push(Piece {
                    positive: c,
                    boundary: central,
                });
            }
            _ => unreachable!("a closed edge cycle crosses an even number of times"),
        }
        CellCut {
            i,
            j,
            segments,
            pieces,
        }
    }

    /// Cuts every cell, in row-major order.
    pub fn cut_all(&self, surface: &dyn Surface) -> Vec<CellCut> {
        let cells: Vec<(usize, usize)> = (0..self.u.cells)
            .flat_map(|i| (0..self.v.cells).map(move |j| (i, j)))
            .collect();
        cells
            .par_iter()
            .map(|&(i, j)| {
                self.cut_cell(i, j, || {
                    let a = self.corner(i, j);
                    let b = self.corner(i + 1, j + 1);
                    sign_field(surface, self.role, [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])])
                })
            })
            .collect()
    }
}

/// `V − E + F` of the closed subcomplex spanned by the selected pieces.
pub fn euler_of_pieces<'a>(
    grid: &SignGrid,
    cuts: impl Iterator<Item = (&'a CellCut, &'a Piece)>,
) -> i64 {
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut faces = 0i64;
    for (cut, piece) in cuts {
        let mut ids: Vec<VertexId> = piece
            .boundary
            .iter()
            .map(|&pv| grid.vertex_id(cut.i, cut.j, pv))
            .collect();
        ids.dedup();
        while ids.len() > 1 && ids.first() == ids.last() {
            ids.pop();
        }
        if ids.len() < 3 {
            continue;
        }
        faces += 1;
        for k in 0..ids.len() {
            let (a, b) = (ids[k], ids[(k + 1) % ids.len()]);
            verts.insert(a);
            edges.insert(if a < b { (a, b) } else { (b, a) });
        }
    }
    verts.len() as i64 - edges.len() as i64 + faces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;

    #[test]
    fn root_refinement_is_tight() {
        let x = refine_root(|t| (t - 0.3).powi(3) + (t - 0.3), -0.327, 0.7 + 0.343, 1e-14);
        assert!((x - 0.3).abs() < 1e-12);
    }

    #[test]
    fn offset_avoids_rational_nodes() {
        let ax = Axis::new((0.0, std::f64::consts::PI), 64, false, true, true);
        assert_eq!(ax.coord(0), 0.0);
        assert!((ax.coord(64) - std::f64::consts::PI).abs() < 1e-15);
        assert!((ax.coord(32) - std::f64::consts::FRAC_PI_2).abs() > 1e-3);
        let ax = Axis::new((-1.0, 1.0), 64, false, false, false);
        assert!((0..=64).all(|i| ax.coord(i).abs() > 1e-4));
    }

    fn total_euler(name: &str, role: Role, n: usize) -> (i64, i64, i64) {
        let s = build(name, &[]).unwrap();
        let g = SignGrid::new(&*s, role, (n, n), 1e-10).unwrap();
        let cuts = g.cut_all(&*s);
        let all = euler_of_pieces(&g, cuts.iter().flat_map(|c| c.pieces.iter().map(move |p| (c, p))));
        let plus = euler_of_pieces(
            &g,
            cuts.iter().flat_map(|c| c.pieces.iter().filter(|p| p.positive).map(move |p| (c, p))),
        );
        let minus = euler_of_pieces(
            &g,
            cuts.iter().flat_map(|c| c.pieces.iter().filter(|p| !p.positive).map(move |p| (c, p))),
        );
        (all, plus, minus)
    }

    #[test]
    fn euler_characteristics_of_whole_domains() {
        assert_eq!(total_euler("sphere", Role::Phi, 32), (2, 2, 0));
        assert_eq!(total_euler("torus", Role::Phi, 32), (0, 0, 0));
        assert_eq!(total_euler("torus", Role::Psi, 32), (0, 0, 0));
        assert_eq!(total_euler("sphere_projection", Role::Phi, 32), (2, 1, 1));
        assert_eq!(total_euler("fold_map", Role::Phi, 32), (1, 1, 1));
    }

    #[test]
    fn small_grids_are_refused() {
        let s = build("sphere_projection", &[]).unwrap();
        assert!(SignGrid::new(&*s, Role::Phi, (32, 32), 1e-10).is_ok());
        assert!(matches!(
            SignGrid::new(&*s, Role::Phi, (8, 32), 1e-10),
            Err(FrontError::Param(_))
        ));
    }
}
