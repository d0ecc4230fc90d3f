//! Evaluation of parsed expressions into algebra values.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::expr::{parse, Expr, ExprKind, Func, ParseError, VarKind};
use crate::dynamics::{classical_flow_series, pmb_flow_series, FlowSeries};
use crate::ordering::OrderParam;
use crate::phase::{PhasePoly, Var};
use crate::render::{Format, Render};
use crate::scalar::{GaussianRational, SRule, Scalar};
use crate::superop::{diamond, pmb, PmbForm};
use crate::terms::Exponents;
use crate::weyl::{t_monomial_exps, Generator, OpPoly, TForm};
use crate::wwgm::{ms, ms_inverse};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(Scalar),
    Phase(PhasePoly),
    Op(OpPoly),
    PhaseFlow(FlowSeries<PhasePoly>),
    OpFlow(FlowSeries<OpPoly>),
}

impl Value {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Phase(_) => "phase-space polynomial",
            Value::Op(_) => "operator polynomial",
            Value::PhaseFlow(_) | Value::OpFlow(_) => "flow series",
        }
    }

    /// Equality that lets a scalar stand for the matching constant polynomial.
    pub fn same_as(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Scalar(x), Value::Phase(f)) | (Value::Phase(f), Value::Scalar(x)) => {
                *f == PhasePoly::constant(f.dof(), x.clone())
            }
            (Value::Scalar(x), Value::Op(f)) | (Value::Op(f), Value::Scalar(x)) => {
                *f == OpPoly::constant(f.dof(), x.clone())
            }
            _ => self == other,
        }
    }
}

impl Render for Value {
    fn render(&self, format: Format) -> String {
        match self {
            Value::Scalar(x) => x.render(format),
            Value::Phase(f) => f.render(format),
            Value::Op(f) => f.render(format),
            Value::PhaseFlow(f) => f.render(format),
            Value::OpFlow(f) => f.render(format),
        }
    }
}

/// Settings shared by every evaluation.
#[derive(Clone, Debug)]
pub struct Context {
    pub dof: usize,
    pub order: OrderParam,
    pub s_rule: SRule,
}

impl Default for Context {
    fn default() -> Self {
        Context { dof: 1, order: OrderParam::formal(), s_rule: SRule::FixS }
    }
}

/// Number of degrees of freedom an expression needs.
fn required_dof(e: &Expr) -> usize {
    let own = match &e.kind {
        ExprKind::Call(Func::T, args) => args.len() / 2,
        _ => 0,
    };
    let nested = match &e.kind {
        ExprKind::Neg(a) | ExprKind::Pow(a, _) => required_dof(a),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => required_dof(a).max(required_dof(b)),
        ExprKind::Call(_, args) => args.iter().map(required_dof).max().unwrap_or(0),
        _ => 0,
    };
    own.max(nested).max(e.max_index())
}

/// Parse and evaluate `input`. The effective dof is the larger of the
/// context's and the one the expression needs.
pub fn evaluate(input: &str, ctx: &Context) -> Result<Value, ParseError> {
    let e = parse(input)?;
    let ctx = Context { dof: ctx.dof.max(required_dof(&e)), ..ctx.clone() };
    Evaluator { ctx: &ctx }.eval(&e)
}

/// Parse a scalar constant such as `1/2*i` or `-3`.
pub fn parse_gaussian(input: &str) -> Result<GaussianRational, ParseError> {
    match evaluate(input, &Context::default())? {
        Value::Scalar(x) if x.is_zero() => Ok(GaussianRational::zero()),
        Value::Scalar(x) => x.as_constant().ok_or_else(|| ParseError::new(1, "expected a number free of s and hbar")),
        other => Err(ParseError::new(1, format!("expected a number, got a {}", other.kind_name()))),
    }
}

const MIXING: &str = "cannot mix commutative and operator variables outside a map call";

struct Evaluator<'a> {
    ctx: &'a Context,
}

fn at(col: usize) -> impl Fn(crate::Error) -> ParseError {
    move |e| ParseError::new(col, e.to_string())
}

impl Evaluator<'_> {
    fn dof(&self) -> usize {
        self.ctx.dof
    }

    fn eval(&self, e: &Expr) -> Result<Value, ParseError> {
        let col = e.col;
        Ok(match &e.kind {
            ExprKind::Rational(n, d) => {
                Value::Scalar(Scalar::constant(GaussianRational::from_rational(BigRational::new(n.clone(), d.clone()))))
            }
            ExprKind::I => Value::Scalar(Scalar::i()),
            ExprKind::Hbar => Value::Scalar(Scalar::hbar()),
            ExprKind::S => Value::Scalar(Scalar::s()),
            ExprKind::Var(kind, index) => {
                let i = index - 1;
                match kind {
                    VarKind::Q => Value::Phase(PhasePoly::var(self.dof(), Var::Q, i).map_err(at(col))?),
                    VarKind::P => Value::Phase(PhasePoly::var(self.dof(), Var::P, i).map_err(at(col))?),
                    VarKind::Qh => Value::Op(OpPoly::generator(self.dof(), Generator::q(i)).map_err(at(col))?),
                    VarKind::Ph => Value::Op(OpPoly::generator(self.dof(), Generator::p(i)).map_err(at(col))?),
                }
            }
            ExprKind::Neg(a) => match self.eval(a)? {
                Value::Scalar(x) => Value::Scalar(-x),
                Value::Phase(f) => Value::Phase(-&f),
                Value::Op(f) => Value::Op(-&f),
                _ => return Err(ParseError::new(col, "a flow series cannot be negated")),
            },
            ExprKind::Add(a, b) => self.binary(col, a, b, BinOp::Add)?,
            ExprKind::Sub(a, b) => self.binary(col, a, b, BinOp::Sub)?,
            ExprKind::Mul(a, b) => self.binary(col, a, b, BinOp::Mul)?,
            ExprKind::Pow(a, k) => self.power(col, self.eval(a)?, *k)?,
            ExprKind::Call(func, args) => self.call(col, *func, args)?,
        })
    }

    fn binary(&self, col: usize, a: &Expr, b: &Expr, op: BinOp) -> Result<Value, ParseError> {
        let (x, y) = (self.eval(a)?, self.eval(b)?);
        let d = self.dof();
        Ok(match (x, y) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                BinOp::Mul => &x * &y,
            }),
            (Value::Scalar(x), Value::Phase(g)) => phase_op(op, &PhasePoly::constant(d, x), &g),
            (Value::Phase(f), Value::Scalar(y)) => phase_op(op, &f, &PhasePoly::constant(d, y)),
            (Value::Phase(f), Value::Phase(g)) => phase_op(op, &f, &g),
            (Value::Scalar(x), Value::Op(g)) => op_op(op, &OpPoly::constant(d, x), &g),
            (Value::Op(f), Value::Scalar(y)) => op_op(op, &f, &OpPoly::constant(d, y)),
            (Value::Op(f), Value::Op(g)) => op_op(op, &f, &g),
            (Value::Phase(_), Value::Op(_)) | (Value::Op(_), Value::Phase(_)) => {
                return Err(ParseError::new(col, MIXING));
            }
            _ => return Err(ParseError::new(col, "flow series cannot be combined arithmetically")),
        })
    }

    fn power(&self, col: usize, base: Value, k: i64) -> Result<Value, ParseError> {
        let exp = u32::try_from(k.unsigned_abs()).map_err(|_| ParseError::new(col, "exponent too large"))?;
        if k < 0 {
            let Value::Scalar(x) = base else {
                return Err(ParseError::new(col, "negative powers are only defined for scalar monomials"));
            };
            let inv = x
                .inv_monomial()
                .ok_or_else(|| ParseError::new(col, "negative powers need a nonzero scalar monomial"))?;
            return Ok(Value::Scalar(inv.pow(exp)));
        }
        Ok(match base {
            Value::Scalar(x) => Value::Scalar(x.pow(exp)),
            Value::Phase(f) => {
                let mut acc = PhasePoly::one(f.dof());
                for _ in 0..exp {
                    acc = &acc * &f;
                }
                Value::Phase(acc)
            }
            Value::Op(f) => {
                let mut acc = OpPoly::identity(f.dof());
                for _ in 0..exp {
                    acc = &acc * &f;
                }
                Value::Op(acc)
            }
            _ => return Err(ParseError::new(col, "a flow series cannot be raised to a power")),
        })
    }

    fn phase_arg(&self, e: &Expr) -> Result<PhasePoly, ParseError> {
        match self.eval(e)? {
            Value::Scalar(x) => Ok(PhasePoly::constant(self.dof(), x)),
            Value::Phase(f) => Ok(f),
            other => {
                Err(ParseError::new(e.col, format!("expected a phase-space polynomial, got a {}", other.kind_name())))
            }
        }
    }

    fn op_arg(&self, e: &Expr) -> Result<OpPoly, ParseError> {
        match self.eval(e)? {
            Value::Scalar(x) => Ok(OpPoly::constant(self.dof(), x)),
            Value::Op(f) => Ok(f),
            other => {
                Err(ParseError::new(e.col, format!("expected an operator polynomial, got a {}", other.kind_name())))
            }
        }
    }

    fn order_arg(&self, e: Option<&Expr>) -> Result<OrderParam, ParseError> {
        let Some(e) = e else {
            return Ok(self.ctx.order.clone());
        };
        match self.eval(e)? {
            Value::Scalar(x) if x.terms().all(|(k, _)| k.hbar == 0) => Ok(OrderParam::from_scalar(x)),
            Value::Scalar(_) => Err(ParseError::new(e.col, "the ordering parameter must not depend on hbar")),
            other => {
                Err(ParseError::new(e.col, format!("expected an ordering parameter, got a {}", other.kind_name())))
            }
        }
    }

    fn uint_arg(&self, e: &Expr) -> Result<u32, ParseError> {
        let bad = || ParseError::new(e.col, "expected a non-negative integer");
        let Value::Scalar(x) = self.eval(e)? else {
            return Err(bad());
        };
        if x.is_zero() {
            return Ok(0);
        }
        let c = x.as_constant().ok_or_else(bad)?;
        if !c.im().is_zero() || !c.re().is_integer() || c.re().is_negative() {
            return Err(bad());
        }
        c.re().to_integer().to_u32().ok_or_else(bad)
    }

    fn call(&self, col: usize, func: Func, args: &[Expr]) -> Result<Value, ParseError> {
        let err = at(col);
        Ok(match func {
            Func::Pb => {
                Value::Phase(self.phase_arg(&args[0])?.poisson_bracket(&self.phase_arg(&args[1])?).map_err(err)?)
            }
            Func::Mb => {
                let order = self.order_arg(args.get(2))?;
                Value::Phase(self.phase_arg(&args[0])?.moyal_bracket(&self.phase_arg(&args[1])?, &order).map_err(err)?)
            }
            Func::Star => {
                let order = self.order_arg(args.get(2))?;
                Value::Phase(self.phase_arg(&args[0])?.star_product(&self.phase_arg(&args[1])?, &order).map_err(err)?)
            }
            Func::Pmb => {
                let order = self.order_arg(args.get(2))?;
                let (f, g) = (self.op_arg(&args[0])?, self.op_arg(&args[1])?);
                Value::Op(pmb(&f, &g, &order, PmbForm::GOnF).map_err(err)?)
            }
            Func::Diamond => {
                let order = self.order_arg(args.get(2))?;
                let (f, g) = (self.op_arg(&args[0])?, self.op_arg(&args[1])?);
                Value::Op(diamond(&f, &g, &order).map_err(err)?)
            }
            Func::Ms => {
                let order = self.order_arg(args.get(1))?;
                Value::Op(ms(&self.phase_arg(&args[0])?, &order))
            }
            Func::MsInv => {
                let order = self.order_arg(args.get(1))?;
                Value::Phase(ms_inverse(&self.op_arg(&args[0])?, &order))
            }
            Func::Commutator => Value::Op(self.op_arg(&args[0])?.commutator(&self.op_arg(&args[1])?).map_err(err)?),
            Func::Dagger => Value::Op(self.op_arg(&args[0])?.dagger(self.ctx.s_rule)),
            Func::T => {
                let (pairs, order) = if args.len() % 2 == 1 {
                    (&args[..args.len() - 1], self.order_arg(args.last())?)
                } else {
                    (args, self.ctx.order.clone())
                };
                let mut exps = Exponents::one(self.dof());
                for (i, pair) in pairs.chunks(2).enumerate() {
                    exps.set(i, (self.uint_arg(&pair[0])?, self.uint_arg(&pair[1])?));
                }
                Value::Op(t_monomial_exps(&exps, &order, TForm::QForm))
            }
            Func::Evolve => {
                let order = self.order_arg(args.get(3))?;
                let n = self.uint_arg(&args[2])? as usize;
                let h = match self.eval(&args[1])? {
                    Value::Scalar(x) => PhasePoly::constant(self.dof(), x),
                    Value::Phase(h) => h,
                    Value::Op(h) => ms_inverse(&h, &order),
                    other => {
                        return Err(ParseError::new(
                            args[1].col,
                            format!("expected a Hamiltonian, got a {}", other.kind_name()),
                        ));
                    }
                };
                match self.eval(&args[0])? {
                    Value::Phase(f) => Value::PhaseFlow(classical_flow_series(&f, &h, n).map_err(err)?),
                    Value::Scalar(x) => {
                        Value::OpFlow(pmb_flow_series(&OpPoly::constant(self.dof(), x), &h, &order, n).map_err(err)?)
                    }
                    Value::Op(f) => Value::OpFlow(pmb_flow_series(&f, &h, &order, n).map_err(err)?),
                    other => {
                        return Err(ParseError::new(
                            args[0].col,
                            format!("expected an observable, got a {}", other.kind_name()),
                        ));
                    }
                }
            }
        })
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
}

fn phase_op(op: BinOp, f: &PhasePoly, g: &PhasePoly) -> Value {
    Value::Phase(match op {
        BinOp::Add => f + g,
        BinOp::Sub => f - g,
        BinOp::Mul => f * g,
    })
}

fn op_op(op: BinOp, f: &OpPoly, g: &OpPoly) -> Value {
    Value::Op(match op {
        BinOp::Add => f + g,
        BinOp::Sub => f - g,
        BinOp::Mul => f * g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(input: &str) -> String {
        evaluate(input, &Context::default()).unwrap().render(Format::Text)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(text("MB(q,p)"), "-i*hbar");
        assert_eq!(text("PMB(t(1,0,s), t(0,1,s))"), "-1");
        assert_eq!(text("t(1,2,0)"), "qh*ph^2 - i*hbar*ph");
        assert_eq!(text("PB(q, p)"), "-1");
        assert_eq!(text("commutator(qh, ph)"), "i*hbar");
    }

    #[test]
    fn mixing_is_rejected_outside_maps() {
        let err = evaluate("q + qh", &Context::default()).unwrap_err();
        assert_eq!(err.col, 3);
        assert!(err.message.contains("cannot mix"));
        assert!(evaluate("ms(q) + qh", &Context::default()).is_ok());
    }

    #[test]
    fn dof_follows_indices() {
        let v = evaluate("MB(q1, p2)", &Context::default()).unwrap();
        assert!(matches!(v, Value::Phase(ref f) if f.dof() == 2 && f.is_zero()));
        let v = evaluate("t(1,0,0,1)", &Context::default()).unwrap();
        assert_eq!(v.render(Format::Text), "qh1*ph2");
    }

    #[test]
    fn scalars_and_powers() {
        assert_eq!(text("(2*hbar)^-1"), "1/2*hbar^-1");
        assert_eq!(text("(1 + i)^2"), "2*i");
        assert!(evaluate("(1 + hbar)^-1", &Context::default()).is_err());
        assert_eq!(
            parse_gaussian("-1/2*i").unwrap(),
            GaussianRational::new(BigRational::zero(), BigRational::new((-1).into(), 2.into()))
        );
    }

    #[test]
    fn evolve_flows() {
        let v = evaluate("evolve(qh, (q^2 + p^2)/1*1/2, 2)", &Context::default());
        assert!(v.is_err());
        let v = evaluate("evolve(qh, 1/2*q^2 + 1/2*p^2, 2)", &Context::default()).unwrap();
        assert_eq!(v.render(Format::Text), "t^0: qh\nt^1: ph\nt^2: -1/2*qh");
    }
}
