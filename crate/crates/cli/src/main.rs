mod analyze;
mod export;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frontlab::bundle::Role;
use frontlab::catalog;
use frontlab::error::{FrontError, Result};
use frontlab::gauss_bonnet::{verify, GbConfig, Outcome};
use frontlab::geometry::Surface;

#[derive(Parser)]
#[command(name = "frontlab", version, about = "Singular curvature and Gauss-Bonnet checks for fronts and maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog surfaces and their parameters
    List {
        #[arg(long)]
        json: bool,
    },
    /// Trace and classify the singular set of one homomorphism
    Analyze(RunArgs),
    /// Check a formula or theorem (`1p`, `2m`, `c`, ..., or `all`)
    Verify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "all")]
        target: String,
    },
    /// Write curves (CSV), fields (CSV) or regions (JSON)
    Export {
        what: ExportKind,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    Curves,
    Fields,
    Regions,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    surface: String,
    /// Parameter override, `name=value`; repeatable
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// `phi` (first homomorphism) or `psi` (second)
    #[arg(long, default_value = "phi")]
    role: String,
    /// Sampling grid, `NxM`
    #[arg(long, default_value = "256x256")]
    grid: String,
    /// Quadrature tolerance
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Root refinement tolerance along grid edges
    #[arg(long, default_value_t = 1e-10)]
    refine_tol: f64,
    /// Beaks and lips need definite Hessians
    #[arg(long)]
    strict_beaks: bool,
    #[arg(long)]
    json: bool,
    /// Output file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

pub struct Run {
    pub surface: Box<dyn Surface>,
    pub role: Role,
    pub cfg: GbConfig,
    pub json: bool,
    out: Option<PathBuf>,
}

impl Run {
    fn new(a: RunArgs) -> Result<Run> {
        let params = a
            .params
            .iter()
            .map(|kv| {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| FrontError::Param(format!("expected name=value, got `{kv}`")))?;
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| FrontError::Param(format!("`{v}` is not a number")))?;
                Ok((k.trim().to_string(), v))
            })
            .collect::<Result<Vec<_>>>()?;
        let grid = parse_grid(&a.grid)?;
        if !(a.tol > 0.0) || !(a.refine_tol > 0.0) {
            return Err(FrontError::Param("tolerances must be positive".into()));
        }
        Ok(Run {
            surface: catalog::build(&a.surface, &params)?,
            role: a.role.parse()?,
            cfg: GbConfig {
                grid,
                refine_tol: a.refine_tol,
                quad_tol: a.tol,
                strict_beaks: a.strict_beaks,
            },
            json: a.json,
            out: a.out,
        })
    }

    pub fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_err(p, e))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || FrontError::Param(format!("grid `{s}` is not of the form NxM"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let n: usize = a.trim().parse().map_err(|_| bad())?;
    let m: usize = b.trim().parse().map_err(|_| bad())?;
    if n < 4 || m < 4 {
        return Err(FrontError::Param("grid needs at least 4 cells per side".into()));
    }
    Ok((n, m))
}

fn io_err(p: &std::path::Path, e: io::Error) -> FrontError {
    FrontError::Io(format!("{}: {e}", p.display()))
}

pub fn write_err(e: io::Error) -> FrontError {
    FrontError::Io(e.to_string())
}

fn list(json: bool) -> Result<bool> {
    let entries = catalog::list();
    let mut w = BufWriter::new(io::stdout().lock());
    if json {
        serde_json::to_writer_pretty(&mut w, &entries).map_err(|e| FrontError::Io(e.to_string()))?;
        writeln!(w).map_err(write_err)?;
    } else {
        for e in &entries {
            let params: Vec<String> = e.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
            writeln!(w, "{:<26} {:<9} {:<14} {}", e.name, format!("{:?}", e.mode), format!("{:?}", e.ambient), params.join(" "))
                .map_err(write_err)?;
        }
    }
    w.flush().map_err(write_err)?;
    Ok(true)
}

fn run_verify(run: &Run, target: &str) -> Result<bool> {
    let out = verify(run.surface.as_ref(), target, run.cfg)?;
    let mut w = run.writer()?;
    if run.json {
        serde_json::to_writer_pretty(&mut w, &out).map_err(|e| FrontError::Io(e.to_string()))?;
        writeln!(w).map_err(write_err)?;
    } else {
        for o in &out {
            match o {
                Outcome::Report(r) => {
                    let id = r.formula.as_deref().or(r.theorem.as_deref()).unwrap_or("?");
                    writeln!(
                        w,
                        "{:<7} {:<5} lhs {:.9} rhs {:.9} residual {:.3e} tol {:.3e}",
                        id,
                        if r.pass { "pass" } else { "FAIL" },
                        r.lhs + 0.0,
                        r.rhs + 0.0,
                        r.residual,
                        r.tolerance
                    )
                    .map_err(write_err)?;
                }
                Outcome::Skipped(s) => {
                    writeln!(w, "{:<7} skip  {}", s.target, s.reason).map_err(write_err)?;
                }
            }
        }
    }
    w.flush().map_err(write_err)?;
    Ok(out.iter().all(Outcome::pass))
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List { json } => list(json),
        Command::Analyze(a) => analyze::run(&Run::new(a)?),
        Command::Verify { run, target } => run_verify(&Run::new(run)?, &target),
        Command::Export { what, run } => {
            let run = Run::new(run)?;
            match what {
                ExportKind::Curves => export::curves(&run),
                ExportKind::Fields => export::fields(&run),
                ExportKind::Regions => export::regions(&run),
            }
            .map(|()| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // reader went away (`| head`)
        Err(FrontError::Io(m)) if m.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(e) => {
            let doc = serde_json::json!({
                "error": e.kind(),
                "message": e.to_string(),
                "exit_code": e.exit_code(),
            });
            eprintln!("{doc}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
