//! Command-line front end. [`run`] returns the process exit code: 0 when every
//! executed check passes, 1 on a failed check or computation, 2 on bad input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::poincare::{NuForms, ThirdKind, TwoPointForm};
use crate::schottky::{reference_surface, shell_size, Enumeration};
use crate::suites::{FullReport, Session, Suite, SuiteReport};
use crate::variation::{period_matrix, rauch_check};
use crate::C64;

#[derive(Parser, Debug)]
#[command(name = "schottky-gem", version, about = "Schottky surfaces, Bers series, canonical GEM forms and Rauch checks")]
pub struct Cli {
    /// Run config or bare surface JSON; the reference genus-two surface when absent.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the truncation length L.
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for random-word checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Writes the JSON output here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum What {
    Bers,
    ThirdKind,
    Nu,
    Gem,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Checks disc disjointness of the surface.
    Validate,
    /// Enumerates reduced words up to length L.
    Enumerate {
        /// Lists every word with its matrix as CSV.
        #[arg(long)]
        list: bool,
    },
    /// Samples a form on an x-grid as CSV.
    Eval {
        #[arg(long, value_enum)]
        what: What,
        /// x0,x1,nx,y0,y1,ny
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Second point re,im for two-point forms.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// Handle index for nu.
        #[arg(long, default_value_t = 1)]
        handle: usize,
    },
    /// Basis selection and canonical residuals as JSON.
    Basis,
    /// Runs property suites.
    Check {
        #[arg(long, required = true)]
        suite: Vec<String>,
    },
    /// Period matrix as JSON.
    PeriodMatrix,
    /// Rauch comparison at the given points (re,im), or default samples.
    Rauch {
        #[arg(long, allow_hyphen_values = true)]
        x: Vec<String>,
    },
    /// Runs suites and writes one combined report.
    Report {
        #[arg(long)]
        all: bool,
        #[arg(long)]
        suite: Vec<String>,
    },
}

fn parse_complex(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| Error::Config(format!("bad number '{t}' in '{s}'")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(Error::Config(format!("expected re,im, got '{s}'"))),
    }
}

/// `x0,x1,nx,y0,y1,ny` as row-major grid points.
pub fn parse_grid(s: &str) -> Result<Vec<C64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(Error::Config(format!("grid needs x0,x1,nx,y0,y1,ny, got '{s}'")));
    }
    let f = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| Error::Config(format!("bad grid bound '{t}'")))
    };
    let u = |t: &str| {
        t.parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("bad grid count '{t}'")))
    };
    let (x0, x1, nx, y0, y1, ny) = (f(parts[0])?, f(parts[1])?, u(parts[2])?, f(parts[3])?, f(parts[4])?, u(parts[5])?);
    let step = |a: f64, b: f64, n: usize, i: usize| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
    Ok((0..ny)
        .flat_map(|j| (0..nx).map(move |i| C64::new(step(x0, x1, nx, i), step(y0, y1, ny, j))))
        .collect())
}

fn parse_suites(names: &[String], all: bool) -> Result<Vec<Suite>> {
    if all {
        return Ok(Suite::ALL.to_vec());
    }
    if names.is_empty() {
        return Err(Error::Config("no suite selected (use --suite or --all)".into()));
    }
    names
        .iter()
        .flat_map(|n| n.split(','))
        .map(str::parse)
        .collect()
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::new(reference_surface()),
    };
    if let Some(l) = cli.max_len {
        cfg.max_len = l;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.check()?;
    Ok(cfg)
}

fn emit(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn print_suite(r: &SuiteReport) {
    eprintln!("suite {}: {}", r.suite, if r.passed { "PASS" } else { "FAIL" });
    for c in &r.checks {
        let bound = match c.bound {
            crate::suites::Bound::Max => "<=",
            crate::suites::Bound::Min => ">=",
            crate::suites::Bound::Equal => "==",
        };
        eprintln!(
            "  {} {:<40} {:.3e} {bound} {:.3e}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
    if let Some(e) = &r.error {
        eprintln!("  error: {e}");
    }
}

/// Exit code classification of an error that escaped a command.
fn error_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Json(_) | Error::Io(_) | Error::InvalidParams(_) | Error::ZeroRho | Error::Capacity { .. } => 2,
        _ => 1,
    }
}

fn omega_json(pm: &crate::variation::PeriodMatrix) -> serde_json::Value {
    json!(pm.omega)
}

fn run_command(cli: &Cli) -> Result<i32> {
    let cfg = load_config(cli)?;
    let out = cli.json.as_deref();
    match &cli.command {
        Command::Validate => {
            let report = cfg.surface.validate();
            let valid = report.is_valid();
            emit(
                out,
                &json!({
                    "valid": valid,
                    "genus": cfg.surface.genus(),
                    "min_separation": cfg.surface.min_separation(),
                    "violations": report.violations,
                    "zero_rho": report.zero_rho,
                }),
            )?;
            Ok(if valid { 0 } else { 1 })
        }
        Command::Enumerate { list } => {
            let e = Enumeration::new(&cfg.surface, cfg.max_len, cfg.word_cap)?;
            if *list {
                let mut w = std::io::BufWriter::new(std::io::stdout().lock());
                writeln!(w, "word,a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im")?;
                for i in 0..e.len() {
                    let m = e.map(i);
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{},{}",
                        e.word(i),
                        m.a.re,
                        m.a.im,
                        m.b.re,
                        m.b.im,
                        m.c.re,
                        m.c.im,
                        m.d.re,
                        m.d.im
                    )?;
                }
            } else {
                let g = cfg.surface.genus();
                emit(
                    out,
                    &json!({
                        "genus": g,
                        "L": cfg.max_len,
                        "count": e.len(),
                        "shell_sizes": (0..=cfg.max_len).map(|l| shell_size(g, l)).collect::<Vec<_>>(),
                    }),
                )?;
            }
            Ok(0)
        }
        Command::Eval { what, grid, y, handle } => {
            let xs = parse_grid(grid)?;
            let session = Session::new(cfg)?;
            let surface = session.surface();
            let y = match y {
                Some(s) => parse_complex(s)?,
                None => crate::suites::y_grid(surface, 5)[0],
            };
            let eval: Box<dyn Fn(C64) -> Result<C64> + Sync> = match what {
                What::Bers => {
                    let f = session.bers()?;
                    Box::new(move |x| f.value(x, y))
                }
                What::Gem => {
                    let f = session.gem()?;
                    Box::new(move |x| f.value(x, y))
                }
                What::ThirdKind => {
                    let f = ThirdKind::new(surface.clone())?;
                    Box::new(move |x| f.value(x, y))
                }
                What::Nu => {
                    if *handle == 0 || *handle > surface.genus() {
                        return Err(Error::Config(format!("no handle {handle}")));
                    }
                    let f = NuForms::new(surface.clone())?;
                    let a = *handle - 1;
                    Box::new(move |x| Ok(f.values(x)?[a]))
                }
            };
            let y_col = match what {
                What::Nu => surface.probe(),
                _ => y,
            };
            use rayon::prelude::*;
            let values: Vec<C64> = xs
                .par_iter()
                .map(|&x| eval(x).unwrap_or(C64::new(f64::NAN, f64::NAN)))
                .collect();
            let mut text = String::from("re_x,im_x,re_y,im_y,re_value,im_value\n");
            for (x, v) in xs.iter().zip(&values) {
                text.push_str(&format!("{},{},{},{},{},{}\n", x.re, x.im, y_col.re, y_col.im, v.re, v.im));
            }
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Basis => {
            let session = Session::new(cfg)?;
            let report = session.run(Suite::Canonical);
            print_suite(&report);
            let gem = match session.gem() {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(1);
                }
            };
            let sel = gem.selection();
            let value = |name: &str| report.checks.iter().find(|c| c.name == name).map(|c| c.value);
            let residuals: serde_json::Map<String, serde_json::Value> = report
                .checks
                .iter()
                .map(|c| (c.name.clone(), json!(c.value)))
                .collect();
            emit(
                out,
                &json!({
                    "J": sel.j,
                    "rows": sel.rows,
                    "singular_values": sel.singular_values,
                    "rank": sel.rank,
                    "gap": sel.gap,
                    "condition": gem.condition(),
                    "duality_error": value("duality_max_error"),
                    "canonical_residuals": residuals,
                    "passed": report.passed,
                }),
            )?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Check { suite } => {
            let suites = parse_suites(suite, false)?;
            let session = Session::new(cfg)?;
            let report = session.run_all(&suites);
            for r in &report.suites {
                print_suite(r);
            }
            emit(out, &serde_json::to_value(&report)?)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::PeriodMatrix => {
            let session = Session::new(cfg)?;
            let pm = period_matrix(session.surface())?;
            emit(
                out,
                &json!({
                    "omega": omega_json(&pm),
                    "symmetry_error": pm.symmetry_error,
                    "rauch_max_rel_error": null,
                    "h": null,
                    "L": session.config().max_len,
                    "doubling_residual": pm.doubling_residual,
                }),
            )?;
            Ok(0)
        }
        Command::Rauch { x } => {
            let session = Session::new(cfg)?;
            let xs = if x.is_empty() {
                session.x_samples()
            } else {
                x.iter().map(|s| parse_complex(s)).collect::<Result<_>>()?
            };
            let pm = period_matrix(session.surface())?;
            let gem = session.gem2()?;
            let h = session.config().h;
            let r = rauch_check(gem, &xs, h)?;
            let passed = r.max_rel_error <= session.config().tolerances.rauch;
            emit(
                out,
                &json!({
                    "omega": omega_json(&pm),
                    "symmetry_error": pm.symmetry_error,
                    "rauch_max_rel_error": r.max_rel_error,
                    "h": h,
                    "L": session.config().max_len,
                    "samples": r.samples,
                    "passed": passed,
                }),
            )?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Report { all, suite } => {
            let suites = parse_suites(suite, *all)?;
            let session = Session::new(cfg)?;
            let report: FullReport = session.run_all(&suites);
            for r in &report.suites {
                print_suite(r);
            }
            emit(out, &serde_json::to_value(&report)?)?;
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(k) = cli.workers {
        if k == 0 {
            eprintln!("error: --workers must be positive");
            return 2;
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    match run_command(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0,1,3,-1,1,2").unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], C64::new(0.0, -1.0));
        assert_eq!(g[5], C64::new(1.0, 1.0));
        assert!(parse_grid("0,1,3").is_err());
        assert!(parse_grid("0,1,0,0,1,1").is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.5,-2").unwrap(), C64::new(0.5, -2.0));
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert!(parse_complex("a,b").is_err());
    }

    #[test]
    fn unknown_suite_is_config_error() {
        assert_eq!(run(["schottky-gem", "check", "--suite", "bogus"]), 2);
    }
}
