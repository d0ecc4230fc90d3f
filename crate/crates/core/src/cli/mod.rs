//! Command-line front end: expression language, evaluation, the
//! conformance suite and argument handling.

pub mod conformance;
pub mod eval;
pub mod expr;
pub mod sample;

use clap::{Parser, Subcommand, ValueEnum};

use crate::dynamics::{classical_flow_series, commutator_flow_series, pmb_flow_series};
use crate::ordering::OrderParam;
use crate::phase::PhasePoly;
use crate::render::{Format, Render};
use crate::scalar::SRule;
use crate::weyl::OpPoly;
use crate::wwgm::ms_inverse;
use eval::{evaluate, parse_gaussian, Context, Value};
use expr::ParseError;

pub const SEED_ENV: &str = "WEYLFORGE_SEED";

#[derive(Parser, Debug)]
#[command(name = "weylforge", version, about = "Exact s-ordered phase-space and operator algebra")]
struct Cli {
    /// Number of degrees of freedom (raised automatically by indexed variables).
    #[arg(long, global = true, default_value_t = 1)]
    dof: usize,
    /// Numeric ordering parameter such as 0, 1, -1 or 1/2*i; formal s when absent.
    #[arg(long = "s-value", global = true, allow_hyphen_values = true)]
    s_value: Option<String>,
    /// Output format: text, json or latex.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Seed for randomized checks; WEYLFORGE_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// How conjugation treats the formal s.
    #[arg(long = "s-rule", global = true, value_enum, default_value_t = RuleArg::Fix)]
    s_rule: RuleArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    /// s is real under conjugation.
    Fix,
    /// s is imaginary under conjugation.
    Negate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BracketArg {
    Pmb,
    Commutator,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression and print its canonical form.
    Eval { expr: String },
    /// Run the conformance suite and print a report (JSON unless --format is given).
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Print the normal form of t(s) for exponent pairs n1 m1 [n2 m2 ...].
    T {
        #[arg(required = true, num_args = 2..)]
        exponents: Vec<u32>,
        /// Ordering parameter for this monomial; overrides --s-value.
        #[arg(long = "s", allow_hyphen_values = true)]
        s: Option<String>,
    },
    /// Taylor coefficients of the flow of an observable.
    Evolve {
        #[arg(long, allow_hyphen_values = true)]
        observable: String,
        #[arg(long, allow_hyphen_values = true)]
        hamiltonian: String,
        #[arg(long)]
        order: usize,
        /// Generator of the operator flow.
        #[arg(long, value_enum, default_value_t = BracketArg::Pmb)]
        bracket: BracketArg,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn usage(stderr: String) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr }
    }
}

fn expression_error(what: &str, input: &str, e: &ParseError) -> Outcome {
    let caret = format!("{}^", " ".repeat(e.col.saturating_sub(1)));
    Outcome::usage(format!("error in {what}: {e}\n  {input}\n  {caret}"))
}

fn order_from(text: Option<&str>) -> Result<OrderParam, Outcome> {
    match text {
        None => Ok(OrderParam::formal()),
        Some(t) if t.trim() == "s" => Ok(OrderParam::formal()),
        Some(t) => parse_gaussian(t).map(OrderParam::value).map_err(|e| expression_error("s value", t, &e)),
    }
}

/// Run one invocation; `args` includes the program name.
pub fn run_command<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::usage(text) } else { Outcome::ok(text) };
        }
    };
    match dispatch(cli) {
        Ok(o) | Err(o) => o,
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, Outcome> {
    if cli.dof == 0 {
        return Err(Outcome::usage("error: --dof must be at least 1".into()));
    }
    let ctx = Context {
        dof: cli.dof,
        order: order_from(cli.s_value.as_deref())?,
        s_rule: match cli.s_rule {
            RuleArg::Fix => SRule::FixS,
            RuleArg::Negate => SRule::NegateS,
        },
    };
    let format = cli.format.unwrap_or_default();
    match cli.command {
        Command::Eval { expr } => {
            let v = evaluate(&expr, &ctx).map_err(|e| expression_error("expression", &expr, &e))?;
            Ok(Outcome::ok(v.render(format)))
        }
        Command::Check { suite } => {
            let seed = match std::env::var(SEED_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Outcome::usage(format!("error: {SEED_ENV}='{v}' is not an unsigned integer")))?,
                Err(_) => cli.seed,
            };
            let report = conformance::run_suite(&suite, seed).map_err(|e| Outcome::usage(format!("error: {e}")))?;
            let stdout = match cli.format.unwrap_or(Format::Json) {
                Format::Text => report.to_text(),
                Format::Json | Format::Latex => report.to_json(),
            };
            Ok(Outcome { code: if report.passed { 0 } else { 1 }, stdout, stderr: String::new() })
        }
        Command::T { exponents, s } => {
            if exponents.len() % 2 != 0 {
                return Err(Outcome::usage("error: t takes exponent pairs n1 m1 [n2 m2 ...]".into()));
            }
            let order = match s {
                Some(text) => order_from(Some(&text))?,
                None => ctx.order.clone(),
            };
            let dof = ctx.dof.max(exponents.len() / 2);
            let mut e = crate::terms::Exponents::one(dof);
            for (i, pair) in exponents.chunks(2).enumerate() {
                e.set(i, (pair[0], pair[1]));
            }
            let t = crate::weyl::t_monomial_exps(&e, &order, crate::weyl::TForm::QForm);
            Ok(Outcome::ok(t.render(format)))
        }
        Command::Evolve { observable, hamiltonian, order, bracket } => {
            let eval_at = |ctx: &Context| -> Result<(Value, Value), Outcome> {
                let f0 = evaluate(&observable, ctx).map_err(|e| expression_error("observable", &observable, &e))?;
                let h = evaluate(&hamiltonian, ctx).map_err(|e| expression_error("hamiltonian", &hamiltonian, &e))?;
                Ok((f0, h))
            };
            // evaluate twice so both sides share the larger dof
            let (f0, h) = eval_at(&ctx)?;
            let dof = value_dof(&f0).max(value_dof(&h)).max(ctx.dof);
            let ctx = Context { dof, ..ctx };
            let (f0, h) = eval_at(&ctx)?;
            let h = match h {
                Value::Scalar(x) => PhasePoly::constant(dof, x),
                Value::Phase(h) => h,
                Value::Op(h) => ms_inverse(&h, &ctx.order),
                _ => return Err(Outcome::usage("error: the Hamiltonian must be a polynomial".into())),
            };
            let series = match f0 {
                Value::Phase(f) => Value::PhaseFlow(engine(classical_flow_series(&f, &h, order))?),
                Value::Scalar(x) => {
                    Value::OpFlow(engine(pmb_flow_series(&OpPoly::constant(dof, x), &h, &ctx.order, order))?)
                }
                Value::Op(f) => Value::OpFlow(match bracket {
                    BracketArg::Pmb => engine(pmb_flow_series(&f, &h, &ctx.order, order))?,
                    BracketArg::Commutator => engine(commutator_flow_series(&f, &h, &ctx.order, order))?,
                }),
                _ => return Err(Outcome::usage("error: the observable must be a polynomial".into())),
            };
            Ok(Outcome::ok(series.render(format)))
        }
    }
}

fn value_dof(v: &Value) -> usize {
    match v {
        Value::Phase(f) => f.dof(),
        Value::Op(f) => f.dof(),
        _ => 1,
    }
}

fn engine<T>(r: crate::Result<T>) -> Result<T, Outcome> {
    r.map_err(|e| Outcome::usage(format!("error: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        run_command(std::iter::once("weylforge").chain(args.iter().copied()))
    }

    #[test]
    fn t_command() {
        let o = run(&["t", "1", "2", "--s-value", "0", "--format", "text"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "qh*ph^2 - i*hbar*ph"));
        let o = run(&["t", "1", "1", "--s", "-1"]);
        assert_eq!(o.stdout, "qh*ph - i*hbar");
        assert_eq!(run(&["t", "1"]).code, 2);
    }

    #[test]
    fn eval_command() {
        let o = run(&["eval", "PMB(t(1,0,s), t(0,1,s))"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "-1"));
        let o = run(&["eval", "q +"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("column 3"), "{}", o.stderr);
    }

    #[test]
    fn check_and_usage_codes() {
        let o = run(&["check", "--suite", "winf"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["suite"], "winf");
        assert_eq!(run(&["check", "--suite", "bogus"]).code, 2);
        assert_eq!(run(&["frobnicate"]).code, 2);
        assert_eq!(run(&["--help"]).code, 0);
    }

    #[test]
    fn evolve_command() {
        let o = run(&["evolve", "--observable", "qh", "--hamiltonian", "1/2*q^2 + 1/2*p^2", "--order", "1"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "t^0: qh\nt^1: ph"));
        let o = run(&["evolve", "--observable", "q", "--hamiltonian", "q*p", "--order", "1"]);
        assert_eq!(o.stdout, "t^0: q\nt^1: q");
    }
}
