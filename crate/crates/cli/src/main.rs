use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use blendstring::mathieu::{
    forced_residual, generalized_eigenfunction, mathieu_pair, modified_even_value, MathieuParams,
};
use blendstring::ode::solve_ivp;
use blendstring::oracles::{self, Polynomial, RecipGamma, Reciprocal};
use blendstring::parse::{parse_complex, parse_list};
use blendstring::problem::ProblemSpec;
use blendstring::stability::{sho_amplification, stability_threshold, MAX_THRESHOLD_GRADE};
use blendstring::taylor::SeriesOracle;
use blendstring::Blendstring;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

const DEFAULT_GRADE: usize = 8;
const DEFAULT_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "blendstring",
    version,
    about = "Piecewise Hermite interpolants and a collocation ODE solver"
)]
struct Cli {
    /// Residual tolerance for solvers.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Taylor grade m at each knot.
    #[arg(long, global = true)]
    grade: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Blendstring document (JSON).
    Doc,
    /// Point table.
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a blendstring from a registry function.
    Build {
        /// exp, sin, cos, identity, recip-gamma, poly or recip.
        function: String,
        /// Coefficient list for `poly` and `recip`, lowest order first.
        #[arg(allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// Comma-separated knots, e.g. `-1,-1/3,1/3,1` or `0,1+1i`.
        #[arg(long, allow_hyphen_values = true)]
        knots: String,
    },
    /// Evaluate a blendstring and its derivatives on a refined grid.
    Deval {
        input: PathBuf,
        /// Interior points per segment; defaults to 2(m+1).
        #[arg(long)]
        n_refine: Option<usize>,
        /// Highest derivative order.
        #[arg(long, default_value_t = 0)]
        nder: usize,
    },
    /// Integrate a blendstring along its path.
    Integrate {
        input: PathBuf,
        /// Print the integral over the whole path instead of writing the antiderivative.
        #[arg(long)]
        definite: bool,
    },
    /// Solve the initial value problem in a TOML problem file.
    Solve {
        problem: PathBuf,
        /// Step log file; defaults to `<out>.steps.csv` when --out is given.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Stability thresholds and amplification factors for the harmonic oscillator.
    Stability {
        /// Grades, e.g. `1..3` or `2`.
        range: String,
        /// Step sizes nu at which C_m(nu) is tabulated.
        #[arg(long, allow_hyphen_values = true)]
        samples: Option<String>,
    },
    /// Generalized even Mathieu eigenfunction via the Green's function construction.
    MathieuDemo {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Point at which the modified function is reported.
        #[arg(long, default_value_t = 1.485)]
        xi0: f64,
    },
}

fn complex(text: &str) -> Result<Complex64> {
    parse_complex::<Complex64>(text).map_err(|e| anyhow::anyhow!("bad number `{text}`: {e}"))
}

fn list(text: &str, what: &str) -> Result<Vec<Complex64>> {
    parse_list::<Complex64>(text).map_err(|e| anyhow::anyhow!("bad {what} list: {e}"))
}

/// Shortest decimal form that reads back to the same value.
fn show(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("cannot write to standard output"),
    }
}

fn load(path: &Path) -> Result<Blendstring<Complex64>> {
    Blendstring::from_document(&read(path)?).with_context(|| path.display().to_string())
}

fn table_only(format: Option<Format>, command: &str) -> Result<()> {
    if format == Some(Format::Doc) {
        bail!("`{command}` writes a point table; --format doc is not available");
    }
    Ok(())
}

fn emit(cli: &Cli, b: &Blendstring<Complex64>, nder: usize) -> Result<()> {
    let text = match cli.format.unwrap_or(Format::Doc) {
        Format::Doc => b.to_document()?,
        Format::Csv => b.deval(b.default_refinement(), nder)?.to_csv(),
    };
    write_out(cli.out.as_deref(), &text)
}

fn registry(name: &str, coeffs: Option<&str>) -> Result<Box<dyn SeriesOracle<Complex64>>> {
    let needs_coeffs = matches!(name, "poly" | "recip");
    if needs_coeffs != coeffs.is_some() {
        if needs_coeffs {
            bail!("`{name}` needs a coefficient list");
        }
        bail!("`{name}` takes no coefficient list");
    }
    let poly = || -> Result<Polynomial<Complex64>> {
        Ok(Polynomial::new(list(coeffs.unwrap_or(""), "coefficient")?)?)
    };
    Ok(match name {
        "exp" => Box::new(oracles::exp),
        "sin" => Box::new(oracles::sin),
        "cos" => Box::new(oracles::cos),
        "identity" => Box::new(oracles::identity),
        "recip-gamma" => Box::new(RecipGamma::<f64>::new()),
        "poly" => Box::new(poly()?),
        "recip" => Box::new(Reciprocal(poly()?)),
        other => bail!("unknown function `{other}` (expected exp, sin, cos, identity, recip-gamma, poly or recip)"),
    })
}

fn grades(range: &str) -> Result<Vec<usize>> {
    let parse = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("bad grade `{s}` in range `{range}`"))
    };
    let (lo, hi) = match range.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => (parse(range)?, parse(range)?),
    };
    if lo == 0 || hi > MAX_THRESHOLD_GRADE || lo > hi {
        bail!("grade range `{range}` must lie within 1..{MAX_THRESHOLD_GRADE}");
    }
    Ok((lo..=hi).collect())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Build {
            function,
            coeffs,
            knots,
        } => {
            let oracle = registry(function, coeffs.as_deref())?;
            let knots = list(knots, "knot")?;
            let b =
                Blendstring::build(&knots, cli.grade.unwrap_or(DEFAULT_GRADE), oracle.as_ref())?;
            emit(cli, &b, 0)
        }
        Command::Deval {
            input,
            n_refine,
            nder,
        } => {
            table_only(cli.format, "deval")?;
            let b = load(input)?;
            let table = b.deval(n_refine.unwrap_or_else(|| b.default_refinement()), *nder)?;
            write_out(cli.out.as_deref(), &table.to_csv())
        }
        Command::Integrate { input, definite } => {
            let b = load(input)?;
            if *definite {
                let value = b.definite_integral()?;
                write_out(cli.out.as_deref(), &format!("{}\n", show(value)))
            } else {
                emit(cli, &b.indefinite_integral()?, 0)
            }
        }
        Command::Solve { problem, log } => {
            let spec = ProblemSpec::from_toml(&read(problem)?)
                .with_context(|| problem.display().to_string())?;
            let mut p = spec.problem;
            if let Some(tol) = cli.tol {
                p.tol = tol;
            }
            if let Some(grade) = cli.grade {
                p.grade = grade;
            }
            let result = solve_ivp(&p)?;
            emit(cli, &result.solution, 1)?;
            let log = log.clone().or_else(|| {
                cli.out.as_ref().map(|o| {
                    let mut name = o.clone().into_os_string();
                    name.push(".steps.csv");
                    PathBuf::from(name)
                })
            });
            if let Some(path) = log {
                write_out(Some(&path), &result.step_log_csv())?;
            }
            Ok(())
        }
        Command::Stability { range, samples } => {
            table_only(cli.format, "stability")?;
            let ms = grades(range)?;
            let nus: Vec<f64> = match samples {
                Some(s) => list(s, "sample")?
                    .into_iter()
                    .map(|z| {
                        if z.im == 0.0 {
                            Ok(z.re)
                        } else {
                            bail!("sample {} is not real", show(z))
                        }
                    })
                    .collect::<Result<_>>()?,
                None => Vec::new(),
            };
            let mut out = String::from("m,nu_star,nu_star_over_pi");
            for nu in &nus {
                out.push_str(&format!(",C_m({nu})"));
            }
            out.push('\n');
            for m in ms {
                let t = stability_threshold(m)?;
                out.push_str(&format!("{m},{t:.10},{:.10}", t / PI));
                for &nu in &nus {
                    out.push_str(&format!(",{:.16e}", sho_amplification(m, nu)?.0));
                }
                out.push('\n');
            }
            write_out(cli.out.as_deref(), &out)
        }
        Command::MathieuDemo { a, q, xi0 } => {
            let params = MathieuParams::new(complex(a)?, complex(q)?);
            let grade = cli.grade.unwrap_or(15);
            let tol = cli.tol.unwrap_or(DEFAULT_TOL);
            let pair = mathieu_pair(
                &params,
                &[Complex64::new(0.0, 0.0), Complex64::new(2.0 * PI, 0.0)],
                grade,
                tol,
            )?;
            let u = generalized_eigenfunction(&pair.w1, &pair.w2, &pair.w1)?;
            let residual = forced_residual(&params, &u, &pair.w1, u.default_refinement())?
                .iter()
                .map(|(_, r)| r.norm())
                .fold(0.0, f64::max);
            let ce = modified_even_value(&params, *xi0, grade, tol)?;
            let value = ce
                .solution
                .records()
                .last()
                .map(|r| r.coeffs()[0])
                .unwrap_or_default();
            eprintln!(
                "steps {} (wI) {} (wII); max residual {residual:.3e}; Ce0({xi0}) = {} with ce0(0) = 1",
                pair.steps1.iter().filter(|s| s.accepted).count(),
                pair.steps2.iter().filter(|s| s.accepted).count(),
                show(value)
            );
            emit(cli, &u, 2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", first.trim());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let reason = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {reason}");
            ExitCode::FAILURE
        }
    }
}
