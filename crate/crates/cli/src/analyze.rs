use std::collections::BTreeMap;
use std::io::Write;

use frontlab::curves::SingularCurve;
use frontlab::error::{FrontError, Result};
use frontlab::gauss_bonnet::Session;
use frontlab::regions::integrate_singular_curve;
use serde::Serialize;

use crate::{write_err, Run};

#[derive(Serialize)]
struct KappaStats {
    min: Option<f64>,
    max: Option<f64>,
    integral: Option<f64>,
    integral_error: Option<f64>,
}

#[derive(Serialize)]
struct PointOut {
    u: f64,
    v: f64,
    class: &'static str,
    sign: i8,
    curve: Option<usize>,
}

#[derive(Serialize)]
struct CurveOut {
    closed: bool,
    degenerate: bool,
    samples: usize,
    length: f64,
    a3: usize,
    kappa: KappaStats,
}

#[derive(Serialize)]
struct AnalysisOut {
    surface: String,
    params: BTreeMap<String, f64>,
    role: &'static str,
    grid: [usize; 2],
    curves: Vec<CurveOut>,
    points: Vec<PointOut>,
    s_plus: i64,
    s_minus: i64,
    chi_plus: i64,
    chi_minus: i64,
    kappa: KappaStats,
}

fn stats(curves: &[&SingularCurve], tol: f64) -> KappaStats {
    let ks = curves.iter().flat_map(|c| c.samples.iter().filter_map(|s| s.kappa));
    let (min, max) = ks.fold((None, None), |(lo, hi): (Option<f64>, Option<f64>), k| {
        (Some(lo.map_or(k, |x| x.min(k))), Some(hi.map_or(k, |x| x.max(k))))
    });
    // degenerate curves carry no usable κ
    let ints: Option<Vec<_>> = curves
        .iter()
        .filter(|c| !c.degenerate)
        .map(|c| integrate_singular_curve(c, tol).ok())
        .collect();
    let ints = ints.filter(|v| !v.is_empty());
    KappaStats {
        min,
        max,
        integral: ints.as_ref().map(|v| v.iter().map(|r| r.value).sum::<f64>() + 0.0),
        integral_error: ints.as_ref().map(|v| v.iter().map(|r| r.error_estimate).sum::<f64>() + 0.0),
    }
}

pub fn run(run: &Run) -> Result<bool> {
    let sess = Session::new(run.surface.as_ref(), run.cfg);
    let a = sess.analysis(run.role)?;
    let tol = run.cfg.quad_tol;
    let mut points = Vec::new();
    for (i, c) in a.curves().iter().enumerate() {
        for m in &c.a3_markers {
            points.push(PointOut {
                u: m.q[0],
                v: m.q[1],
                class: if m.sign > 0 { "A3+" } else { "A3-" },
                sign: m.sign,
                curve: Some(i),
            });
        }
    }
    for p in &a.critical_points {
        points.push(PointOut {
            u: p.q[0],
            v: p.q[1],
            class: p.class.label(),
            sign: 0,
            curve: None,
        });
    }
    let out = AnalysisOut {
        surface: run.surface.name().to_string(),
        params: run.surface.params().into_iter().collect(),
        role: run.role.label(),
        grid: [run.cfg.grid.0, run.cfg.grid.1],
        curves: a.curves().iter().map(|c| CurveOut {
            closed: c.closed,
            degenerate: c.degenerate,
            samples: c.samples.len(),
            length: c.length,
            a3: c.a3_markers.len(),
            kappa: stats(&[c], tol),
        })
        .collect(),
        points,
        s_plus: a.s_plus,
        s_minus: a.s_minus,
        chi_plus: a.chi_plus,
        chi_minus: a.chi_minus,
        kappa: stats(&a.curves().iter().collect::<Vec<_>>(), tol),
    };
    let mut w = run.writer()?;
    if run.json {
        serde_json::to_writer_pretty(&mut w, &out).map_err(|e| FrontError::Io(e.to_string()))?;
        writeln!(w).map_err(write_err)?;
    } else {
        text(&out, &mut w).map_err(write_err)?;
    }
    w.flush().map_err(write_err)?;
    Ok(true)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.9}"))
}

fn text(o: &AnalysisOut, w: &mut dyn Write) -> std::io::Result<()> {
    let params: Vec<String> = o.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(w, "surface {} ({}) role {} grid {}x{}", o.surface, params.join(" "), o.role, o.grid[0], o.grid[1])?;
    writeln!(w, "curves {}", o.curves.len())?;
    for (i, c) in o.curves.iter().enumerate() {
        writeln!(
            w,
            "  [{i}] {}{} samples {} length {:.6} A3 {} kappa min {} max {} integral {}",
            if c.closed { "closed" } else { "open" },
            if c.degenerate { " degenerate" } else { "" },
            c.samples,
            c.length,
            c.a3,
            opt(c.kappa.min),
            opt(c.kappa.max),
            opt(c.kappa.integral)
        )?;
    }
    writeln!(w, "points {}", o.points.len())?;
    for p in &o.points {
        writeln!(w, "  {:<24} u {:.9} v {:.9}", p.class, p.u, p.v)?;
    }
    writeln!(w, "S+ {} S- {}", o.s_plus, o.s_minus)?;
    writeln!(w, "chi(M+) {} chi(M-) {}", o.chi_plus, o.chi_minus)?;
    writeln!(
        w,
        "kappa min {} max {} integral {} (error {})",
        opt(o.kappa.min),
        opt(o.kappa.max),
        opt(o.kappa.integral),
        opt(o.kappa.integral_error)
    )
}
