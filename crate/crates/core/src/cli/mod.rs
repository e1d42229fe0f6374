//! Command-line front end.
//!
//! Every command prints one JSON document. Exit codes: 0 on success, 1 when the
//! analysis ran but a check or verdict failed, 2 when it could not run.

mod parse;

pub use parse::{monomial_poly, parse_poly, parse_rational, ParseError};

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::audit::{bounds_from_data, char_pair_contradiction, full_report, AuditOptions};
use crate::dependence::{build_dependence, verify_dependence};
use crate::geometry::{
    dependence_polytope, newton_polygon, shape_audit_polytope, trapezoid_membership,
};
use crate::puiseux::{all_branches, residual, Direction};
use crate::series::{expand_g_in_f, ExpansionMode, ExpansionOptions, ExpansionStatus};
use crate::{FracPoly, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "jacpoly",
    version,
    about = "Newton polygons, Puiseux branches and dependence polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Inputs {
    /// First polynomial, e.g. "y^2 - x"
    #[arg(long = "f")]
    pub f: Option<String>,
    /// Second polynomial
    #[arg(long = "g")]
    pub g: Option<String>,
    /// File with one `name = poly` binding per line (names f and g)
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirArg {
    Inc,
    Dec,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
pub enum ModeArg {
    #[default]
    Unimodular,
    Complete,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton polygon of f with the trapezoid check
    Polygon {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Newton polytope of P(x, F, G) (given as --f) or of the dependence of --f and --g
    Polytope {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Puiseux branches of f(x, y) = 0
    Puiseux {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "5")]
        order: String,
        #[arg(long, value_enum, default_value = "inc")]
        dir: DirArg,
    },
    /// Dependence polynomial P with P(x, f, g) = 0
    Depend {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Expansion of g in powers of f
    Expand {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
        floor: i64,
        #[arg(long, value_enum, default_value = "unimodular")]
        mode: ModeArg,
        /// Skip the J(f, g) = 1 precondition
        #[arg(long)]
        no_jacobian_check: bool,
    },
    /// All pair checks, dependence, polytope shape and bounds
    Audit {
        #[command(flatten)]
        inputs: Inputs,
        /// General-position shift "c1,c2"
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
    },
    /// Bounds from "m,n,a0,b0"
    Bounds {
        #[arg(long)]
        params: String,
    },
    /// Two-characteristic-pair check from "a,b,a0,b0"
    Charpair {
        #[arg(long)]
        params: String,
    },
}

/// Outcome of a command: exit code and the JSON document to print.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
}

impl Outcome {
    fn ok(json: Value, pass: bool) -> Self {
        Outcome {
            code: if pass { 0 } else { 1 },
            json,
        }
    }

    fn error(stage: &str, message: impl ToString) -> Self {
        Outcome {
            code: 2,
            json: json!({"error": {"message": message.to_string(), "stage": stage}}),
        }
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
        s.push('\n');
        s
    }
}

type Staged<T> = Result<T, Outcome>;

fn parse_file(path: &PathBuf) -> Staged<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::error("input", format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, poly) = line.split_once('=').ok_or_else(|| {
            Outcome::error("input", format!("line {}: expected `name = poly`", k + 1))
        })?;
        out.push((name.trim().to_string(), poly.trim().to_string()));
    }
    Ok(out)
}

impl Inputs {
    fn text(&self, name: &str) -> Staged<Option<String>> {
        let flag = if name == "f" { &self.f } else { &self.g };
        if let Some(t) = flag {
            return Ok(Some(t.clone()));
        }
        match &self.file {
            Some(path) => Ok(parse_file(path)?
                .into_iter()
                .find(|(n, _)| n == name)
                .map(|(_, p)| p)),
            None => Ok(None),
        }
    }

    fn poly(&self, name: &str) -> Staged<FracPoly> {
        let text = self
            .text(name)?
            .ok_or_else(|| Outcome::error("input", format!("missing --{name}")))?;
        parse_poly(&text).map_err(|e| Outcome::error("parse", format!("{name}: {e}")))
    }

    fn has(&self, name: &str) -> Staged<bool> {
        Ok(self.text(name)?.is_some())
    }
}

fn int_list(text: &str, len: usize) -> Staged<Vec<i64>> {
    let parts: Result<Vec<i64>, _> = text.split(',').map(|s| s.trim().parse::<i64>()).collect();
    match parts {
        Ok(v) if v.len() == len => Ok(v),
        _ => Err(Outcome::error(
            "input",
            format!("expected {len} comma-separated integers, got {text:?}"),
        )),
    }
}

fn rational_pair(text: &str) -> Staged<(Rational, Rational)> {
    let parsed: Vec<_> = text.split(',').map(|s| parse_rational(s.trim())).collect();
    match parsed.as_slice() {
        [Ok(a), Ok(b)] => Ok((a.clone(), b.clone())),
        _ => Err(Outcome::error(
            "input",
            format!("expected \"c1,c2\", got {text:?}"),
        )),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command),
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            Outcome {
                code: 0,
                json: json!({"help": e.to_string()}),
            }
        }
        Err(e) => Outcome::error("arguments", e.to_string().trim_end()),
    }
}

pub fn run(cmd: &Command) -> Outcome {
    dispatch(cmd).unwrap_or_else(|o| o)
}

fn dispatch(cmd: &Command) -> Staged<Outcome> {
    Ok(match cmd {
        Command::Polygon { inputs } => {
            let f = inputs.poly("f")?;
            let poly = newton_polygon(&f).map_err(|e| Outcome::error("geometry", e))?;
            let trap = trapezoid_membership(&f).map_err(|e| Outcome::error("geometry", e))?;
            Outcome::ok(
                json!({"polygon": poly.to_json(), "trapezoid": trap.to_json()}),
                true,
            )
        }
        Command::Polytope { inputs } => {
            let p = if inputs.has("g")? {
                let d = build_dependence(&inputs.poly("f")?, &inputs.poly("g")?)
                    .map_err(|e| Outcome::error("dependence", e))?;
                d.p
            } else {
                inputs.poly("f")?
            };
            let poly = dependence_polytope(&p).map_err(|e| Outcome::error("geometry", e))?;
            let (shape, pass) = match shape_audit_polytope(&poly) {
                Ok(s) => (s.to_json(), s.passes()),
                Err(e) => (
                    json!({"error": {"message": e.to_string(), "stage": "shape"}}),
                    false,
                ),
            };
            Outcome::ok(
                json!({"P": p.to_string(), "polytope": poly.to_json(), "shape": shape}),
                pass,
            )
        }
        Command::Puiseux { inputs, order, dir } => {
            let f = inputs.poly("f")?;
            let order = parse_rational(order)
                .map_err(|e| Outcome::error("parse", format!("order: {e}")))?;
            let dir = match dir {
                DirArg::Inc => Direction::Increasing,
                DirArg::Dec => Direction::Decreasing,
            };
            let branches =
                all_branches(&f, dir, &order).map_err(|e| Outcome::error("puiseux", e))?;
            let rows: Vec<Value> = branches
                .iter()
                .map(|b| {
                    let mut j = b.to_json();
                    if let Some(r) = residual(&f, b) {
                        j["residual_beyond_order"] = json!(r.beyond(&order));
                    }
                    j
                })
                .collect();
            Outcome::ok(
                json!({"branches": rows, "direction": dir.name(), "order": crate::algebra::format_rational(&order)}),
                true,
            )
        }
        Command::Depend { inputs } => {
            let (f, g) = (inputs.poly("f")?, inputs.poly("g")?);
            let d = build_dependence(&f, &g).map_err(|e| Outcome::error("dependence", e))?;
            let verified = verify_dependence(&d.p, &f, &g);
            let mut j = d.to_json();
            j["verified"] = json!(verified);
            Outcome::ok(j, verified)
        }
        Command::Expand {
            inputs,
            floor,
            mode,
            no_jacobian_check,
        } => {
            let (f, g) = (inputs.poly("f")?, inputs.poly("g")?);
            let opts = ExpansionOptions {
                mode: match mode {
                    ModeArg::Unimodular => ExpansionMode::UntilUnimodular,
                    ModeArg::Complete => ExpansionMode::Complete,
                },
                check_jacobian: !no_jacobian_check,
                ..Default::default()
            };
            let e =
                expand_g_in_f(&f, &g, *floor, &opts).map_err(|e| Outcome::error("expansion", e))?;
            let mut j = e.to_json();
            // the remainder formula only speaks about unimodular termination
            j["formula_holds"] = match e.status {
                ExpansionStatus::TerminatedUnimodular => json!(e.formula_holds()),
                _ => Value::Null,
            };
            Outcome::ok(j, e.status != ExpansionStatus::BudgetExhausted)
        }
        Command::Audit { inputs, shift } => {
            let (f, g) = (inputs.poly("f")?, inputs.poly("g")?);
            let shift = shift.as_deref().map(rational_pair).transpose()?;
            let r = full_report(&f, &g, &AuditOptions { shift })
                .map_err(|e| Outcome::error("audit", e))?;
            Outcome::ok(r.to_json(), r.all_pass())
        }
        Command::Bounds { params } => {
            let v = int_list(params, 4)?;
            let b = bounds_from_data(v[0], v[1], v[2], v[3])
                .map_err(|e| Outcome::error("bounds", e))?;
            Outcome::ok(b.to_json(), true)
        }
        Command::Charpair { params } => {
            let v = int_list(params, 4)?;
            let c = char_pair_contradiction(v[0], v[1], v[2], v[3])
                .map_err(|e| Outcome::error("charpair", e))?;
            Outcome::ok(c.to_json(), c.contradiction)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        run_args(std::iter::once("jacpoly").chain(args.iter().copied()))
    }

    #[test]
    fn depend_command() {
        let o = run(&["depend", "--f", "y^2", "--g", "y^3+y"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.json["poly"], "G^2 - F^3 - 2*F^2 - F");
        assert_eq!(o.json["verified"], true);
    }

    #[test]
    fn charpair_command() {
        let o = run(&["charpair", "--params", "1,2,2,3"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.json["rho_lower"], "2/9");
        assert_eq!(o.json["rho_upper"], "2/9");
        assert_eq!(o.json["contradiction"], true);
    }

    #[test]
    fn puiseux_command() {
        let o = run(&["puiseux", "--f", "y^2-x", "--dir", "dec", "--order", "5"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.json["branches"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn errors_and_exit_codes() {
        let o = run(&["bounds", "--params", "3,3,2,3"]);
        assert_eq!(o.code, 2);
        assert_eq!(o.json["error"]["stage"], "bounds");
        assert_eq!(o.json["error"]["message"], "n > m violated");
        assert_eq!(
            run(&["depend", "--f", "y^2", "--g", "y^3 +"]).json["error"]["stage"],
            "parse"
        );
        assert_eq!(
            run(&["depend", "--f", "y", "--g", "y", "--bogus", "1"]).code,
            2
        );
        assert_eq!(run(&["audit", "--f", "x + y^2", "--g", "y"]).code, 1);
    }

    #[test]
    fn deterministic_output() {
        let args = ["audit", "--f", "x + y^2", "--g", "y", "--shift", "1,1"];
        assert_eq!(run(&args).render(), run(&args).render());
    }
}
