//! Command-line front end.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::geometry::Window;
use crate::io::Json;
use crate::oracle::grid_compare;
use crate::oresato::decompose;
use crate::rat::{format_rat, parse_rat};
use crate::structure::{build_structure, closed_form_eval, split_factorial, to_pochhammer, Eval, Undefined};
use crate::termratio::TermSpec;

#[derive(Parser, Debug)]
#[command(name = "hyperterm", version, about = "Analyze multivariate hypergeometric terms given by their shift quotients")]
pub struct Cli {
    /// Increase log verbosity (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Term specification (JSON); `-` reads standard input.
    pub input: PathBuf,

    /// Write the result here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Override the seed, e.g. `--seed "0,0=1"`.
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,

    /// Emit a human-readable summary instead of JSON.
    #[arg(long)]
    pub text: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the compatibility conditions of the generators.
    Check(Common),
    /// Compute the Ore–Sato decomposition.
    Decompose(Common),
    /// Build the piecewise closed-form structure.
    Structure(Common),
    /// Emit per-region factorial forms.
    Factorial(Common),
    /// Emit per-region Pochhammer forms.
    Pochhammer(Common),
    /// Evaluate the closed form at one point.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Point as comma-separated integers, e.g. `--at -2` or `--at 3,1`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Compare the closed form with recurrence propagation on a window.
    Compare {
        #[command(flatten)]
        common: Common,
        /// One `lo:hi` range per axis, e.g. `-6:6,-6:6` (default `-8:8` on each axis).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
}

/// Parses `a:b,c:d,...`.
pub fn parse_window(s: &str, k: usize) -> Result<Window> {
    let usage = |msg: String| Error::Precondition(format!("--window: {msg}"));
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in s.split(',') {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| usage(format!("expected lo:hi, got {part:?}")))?;
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| usage(format!("{x:?}: {e}")));
        lo.push(parse(a)?);
        hi.push(parse(b)?);
    }
    if lo.len() != k {
        return Err(Error::dim(k, lo.len()));
    }
    Window::new(lo, hi)
}

/// Parses `z1,...,zk`.
pub fn parse_point(s: &str, k: usize) -> Result<Vec<i64>> {
    let z = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| Error::Precondition(format!("point coordinate {x:?}: {e}")))
        })
        .collect::<Result<Vec<i64>>>()?;
    if z.len() != k {
        return Err(Error::dim(k, z.len()));
    }
    Ok(z)
}

/// Parses `z1,...,zk=p/q`.
pub fn parse_seed(s: &str, k: usize) -> Result<(Vec<i64>, crate::Rat)> {
    let (point, value) = s
        .split_once('=')
        .ok_or_else(|| Error::Precondition(format!("--seed: expected z1,...,zk=value, got {s:?}")))?;
    Ok((parse_point(point, k)?, parse_rat(value.trim())?))
}

fn load_spec(c: &Common) -> Result<TermSpec> {
    let text = if c.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&c.input)?
    };
    let spec = TermSpec::from_json(&text)?;
    match &c.seed {
        Some(s) => {
            let (point, value) = parse_seed(s, spec.arity())?;
            spec.with_seed(point, value)
        }
        None => Ok(spec),
    }
}

/// Result of a command: output text and whether it signals a mathematical
/// failure.
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

fn ok(text: String) -> Result<Outcome> {
    Ok(Outcome { text, failed: false })
}

fn point_str(z: &[i64]) -> String {
    format!("({})", z.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Runs one command and returns its output.
pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Check(c) => {
            let spec = load_spec(c)?;
            let compatible = spec.check_compatibility();
            Ok(Outcome {
                text: if compatible { "compatible" } else { "incompatible" }.into(),
                failed: !compatible,
            })
        }
        Command::Decompose(c) => {
            let form = decompose(&load_spec(c)?)?;
            if !c.text {
                return ok(form.to_json());
            }
            let mut s = format!("C = {}\nD = {}\ngamma = [{}]\n", form.c_string(), form.d_string(), {
                form.gamma.iter().map(format_rat).collect::<Vec<_>>().join(", ")
            });
            for ch in &form.chains {
                let _ = writeln!(s, "v = {:?}: a = {}, b = {}", ch.v, ch.a_poly(), ch.b_poly());
            }
            ok(s.trim_end().to_string())
        }
        Command::Structure(c) => {
            let ps = build_structure(&load_spec(c)?)?;
            if !c.text {
                return ok(ps.to_json());
            }
            let mut s = format!("{} pieces, {} hyperplanes in H\n", ps.pieces.len(), ps.h.len());
            for (i, p) in ps.pieces.iter().enumerate() {
                let f0 = p.f0.as_ref().map_or("unknown".into(), format_rat);
                let _ = writeln!(
                    s,
                    "piece {i}: {} constraints, z0 = {}, f0 = {f0}",
                    p.region.constraints().len(),
                    point_str(&p.z0)
                );
            }
            ok(s.trim_end().to_string())
        }
        Command::Factorial(c) => {
            let ffs = split_factorial(&build_structure(&load_spec(c)?)?)?;
            if !c.text {
                return ok(ffs.to_json());
            }
            let mut s = String::new();
            for (i, f) in ffs.iter().enumerate() {
                let _ = writeln!(s, "form {i} (piece {}): {} chains", f.piece, f.chains.len());
                for ch in &f.chains {
                    let _ = writeln!(
                        s,
                        "  prod_{{j=1}}^{{{:?}.z + {}}} ({}) / ({})",
                        ch.w,
                        ch.n,
                        crate::oresato::uni_product_string(&ch.a),
                        crate::oresato::uni_product_string(&ch.b)
                    );
                }
            }
            ok(s.trim_end().to_string())
        }
        Command::Pochhammer(c) => {
            let ffs = split_factorial(&build_structure(&load_spec(c)?)?)?;
            let pfs = ffs.iter().map(to_pochhammer).collect::<Result<Vec<_>>>()?;
            if !c.text {
                return ok(pfs.to_json());
            }
            let mut s = String::new();
            for (i, p) in pfs.iter().enumerate() {
                let g = p.gamma.iter().map(format_rat).collect::<Vec<_>>().join(", ");
                let sym = |xs: &[crate::structure::PochSymbol]| {
                    xs.iter()
                        .map(|x| format!("({})_{{{:?}.z + {}}}", format_rat(&x.m), x.v, x.r))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let _ = writeln!(s, "form {i}: gamma = [{g}], num: {}, den: {}", sym(&p.num), sym(&p.den));
            }
            ok(s.trim_end().to_string())
        }
        Command::Eval { common, at } => {
            let spec = load_spec(common)?;
            let z = parse_point(at, spec.arity())?;
            let ps = build_structure(&spec)?;
            ok(match closed_form_eval(&ps, &z)? {
                Eval::Value(v) => format_rat(&v),
                Eval::Undefined(u) => format!(
                    "undefined ({})",
                    match u {
                        Undefined::OnH => "on the exceptional set H",
                        Undefined::DZero => "D vanishes",
                        Undefined::UnknownValue => "piece value not reachable from the seed",
                        Undefined::OutsideRegion => "outside region",
                    }
                ),
            })
        }
        Command::Compare { common, window } => {
            let spec = load_spec(common)?;
            let k = spec.arity();
            let w = match window {
                Some(s) => parse_window(s, k)?,
                None => Window::symmetric(k, 8),
            };
            let ps = build_structure(&spec)?;
            let rep = grid_compare(&ps, &spec, &w)?;
            let text = if common.text {
                format!(
                    "checked {}, equal {}, on H {}, D zero {}, unknown {}, blocked {}, mismatches {}",
                    rep.checked,
                    rep.equal,
                    rep.on_h,
                    rep.d_zero,
                    rep.unknown,
                    rep.blocked,
                    rep.mismatches.len()
                )
            } else {
                rep.to_json()
            };
            Ok(Outcome {
                text,
                failed: !rep.ok(),
            })
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Check(c)
        | Command::Decompose(c)
        | Command::Structure(c)
        | Command::Factorial(c)
        | Command::Pochhammer(c) => c,
        Command::Eval { common, .. } | Command::Compare { common, .. } => common,
    }
}

/// Parses arguments, runs the command and maps the outcome to an exit code:
/// 0 on success, 1 on mathematical failure, 2 on usage errors.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = run(&cli.command).and_then(|out| {
        match &common(&cli.command).output {
            Some(path) => std::fs::write(path, format!("{}\n", out.text))?,
            None => println!("{}", out.text),
        }
        Ok(out.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_mathematical() { 1 } else { 2 })
        }
    }
}
