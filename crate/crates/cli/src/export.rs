use std::io::Write;

use frontlab::bundle::curvature_sample;
use frontlab::curves::{trace_singular_curves, write_curves_csv};
use frontlab::error::Result;
use frontlab::regions::{decompose_regions, write_regions_json};

use crate::{write_err, Run};

pub fn curves(run: &Run) -> Result<()> {
    let c = trace_singular_curves(run.surface.as_ref(), run.role, run.cfg.grid, run.cfg.refine_tol)?;
    let mut w = run.writer()?;
    write_curves_csv(&c, &mut w)?;
    w.flush().map_err(write_err)
}

pub fn regions(run: &Run) -> Result<()> {
    let d = decompose_regions(run.surface.as_ref(), run.role, run.cfg.grid, run.cfg.refine_tol)?;
    let mut w = run.writer()?;
    write_regions_json(&d, &mut w)?;
    writeln!(w).map_err(write_err)?;
    w.flush().map_err(write_err)
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:.17e}"))
}

/// λ, λ#, K and K^ext at the cell centers of the grid; blank where undefined.
pub fn fields(run: &Run) -> Result<()> {
    let s = run.surface.as_ref();
    let dom = s.domain();
    let (n, m) = run.cfg.grid;
    let mut w = run.writer()?;
    writeln!(w, "u,v,lambda,lambda_sharp,K,K_ext").map_err(write_err)?;
    for i in 0..n {
        let u = dom.u_range.0 + dom.u_len() * (i as f64 + 0.5) / n as f64;
        for j in 0..m {
            let v = dom.v_range.0 + dom.v_len() * (j as f64 + 0.5) / m as f64;
            let c = curvature_sample(s, [u, v])?;
            writeln!(
                w,
                "{u:.17e},{v:.17e},{:.17e},{},{},{}",
                c.lambda,
                cell(c.lambda_sharp),
                cell(c.k),
                cell(c.k_ext)
            )
            .map_err(write_err)?;
        }
    }
    w.flush().map_err(write_err)
}
