//! The conformance suite behind `check`: exhaustive and seeded randomized
//! checks of every identity the engine relies on, with a deterministic
//! JSON report.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::eval::{evaluate, Context, Value};
use super::sample::Sampler;
use crate::dynamics::{
    classical_flow_series, commutator_flow_series, hamilton_rhs, kinetic_plus_potential, observable_rhs,
    pmb_flow_series,
};
use crate::ordering::OrderParam;
use crate::phase::{inv_i_hbar, winf_mb_closed_form, winf_pb_structure, PhasePoly, Var};
use crate::render::{scalar_json, scalar_text, to_json_string};
use crate::render::{Format, Render};
use crate::scalar::{GaussianRational, SRule, Scalar};
use crate::superop::{diamond, ordering_super_apply, pmb, Liouvillian, PmbForm};
use crate::terms::Exponents;
use crate::weyl::{normalize, t_monomial, Generator, OpPoly, OpWord, TForm};
use crate::wwgm::{antihom_check, commutator_classical_limit, derivative_image, ms, ms_inverse};

type Outcome = Result<(), String>;

/// One entry of the catalogue.
pub struct Check {
    pub id: &'static str,
    pub suite: &'static str,
    /// Named identity the check exercises.
    pub anchor: &'static str,
    pub params: &'static str,
    /// Acceptance criterion this check contributes to, if any.
    pub criterion: Option<u8>,
    run: fn(&mut Sampler) -> Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub anchor: String,
    pub params: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConformanceReport {
    pub seed: u64,
    pub suite: String,
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

impl ConformanceReport {
    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {} suite {}\n", self.seed, self.suite);
        for c in &self.checks {
            out.push_str(&format!("{} {} [{}] {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.anchor, c.params));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
        }
        out.push_str(&format!("{}/{} passed", self.total - self.failed, self.total));
        out
    }
}

pub const SUITES: [&str; 11] =
    ["all", "scalar", "phase", "winf", "weyl", "superop", "pmb", "wwgm", "dynamics", "subalgebra", "cli"];

pub fn catalogue() -> &'static [Check] {
    CHECKS
}

/// Run every check of `suite` ("all" selects everything).
pub fn run_suite(suite: &str, seed: u64) -> Result<ConformanceReport, String> {
    if !SUITES.contains(&suite) {
        return Err(format!("unknown suite '{suite}' (expected one of {})", SUITES.join(", ")));
    }
    let selected: Vec<&Check> = CHECKS.iter().filter(|c| suite == "all" || c.suite == suite).collect();
    let checks: Vec<CheckResult> = selected.par_iter().map(|c| run_check(c, seed)).collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(ConformanceReport { seed, suite: suite.to_string(), passed: failed == 0, total: checks.len(), failed, checks })
}

fn run_check(check: &Check, seed: u64) -> CheckResult {
    let mut sampler = Sampler::new(seed, check.id);
    let outcome = catch_unwind(AssertUnwindSafe(|| (check.run)(&mut sampler))).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        Err(format!("panic: {msg}"))
    });
    CheckResult {
        id: check.id.into(),
        anchor: check.anchor.into(),
        params: check.params.into(),
        passed: outcome.is_ok(),
        witness: outcome.err(),
    }
}

trait Show {
    fn show(&self) -> String;
}

impl Show for Scalar {
    fn show(&self) -> String {
        scalar_text(self)
    }
}

impl Show for PhasePoly {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for OpPoly {
    fn show(&self) -> String {
        self.to_string()
    }
}

fn same<T: PartialEq + Show>(what: impl std::fmt::Display, lhs: &T, rhs: &T) -> Outcome {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: lhs = {}, rhs = {}", lhs.show(), rhs.show()))
    }
}

fn holds(what: impl std::fmt::Display, ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn eng<T>(r: crate::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("engine error: {e}"))
}

fn formal() -> OrderParam {
    OrderParam::formal()
}

fn gauss(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    GaussianRational::new(BigRational::new(re.0.into(), re.1.into()), BigRational::new(im.0.into(), im.1.into()))
}

fn dof_of(k: usize) -> usize {
    1 + k % 2
}

fn t(n: u32, m: u32, order: &OrderParam) -> OpPoly {
    t_monomial(n, m, order, TForm::QForm)
}

fn q_op(dof: usize, i: usize) -> OpPoly {
    OpPoly::generator(dof, Generator::q(i)).expect("index below dof")
}

fn p_op(dof: usize, i: usize) -> OpPoly {
    OpPoly::generator(dof, Generator::p(i)).expect("index below dof")
}

/// `-(i hbar)^{-1}`, i.e. `i / hbar`.
fn i_over_hbar() -> Scalar {
    -inv_i_hbar()
}

fn minus_i_hbar() -> Scalar {
    Scalar::monomial(gauss((0, 1), (-1, 1)), 1, 0)
}

fn tuples(bound: u32) -> impl Iterator<Item = (u32, u32, u32, u32)> {
    (0..=bound).flat_map(move |n| {
        (0..=bound).flat_map(move |m| (0..=bound).flat_map(move |k| (0..=bound).map(move |l| (n, m, k, l))))
    })
}

// ---------------------------------------------------------------- scalar

fn scalar_ring(s: &mut Sampler) -> Outcome {
    for case in 0..1000 {
        let (a, b, c) = (s.scalar(), s.scalar(), s.scalar());
        same(format!("case {case} additive associativity"), &(&(&a + &b) + &c), &(&a + &(&b + &c)))?;
        same(format!("case {case} additive commutativity"), &(&a + &b), &(&b + &a))?;
        same(format!("case {case} multiplicative associativity"), &(&(&a * &b) * &c), &(&a * &(&b * &c)))?;
        same(format!("case {case} multiplicative commutativity"), &(&a * &b), &(&b * &a))?;
        same(format!("case {case} distributivity"), &(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)))?;
        same(format!("case {case} identities"), &(&(&a * &Scalar::one()) + &Scalar::zero()), &a)?;
        holds(format!("case {case} additive inverse"), (&a + &(-&a)).is_zero())?;
    }
    Ok(())
}

fn scalar_conjugate(s: &mut Sampler) -> Outcome {
    for case in 0..300 {
        let (a, b) = (s.scalar(), s.scalar());
        for rule in [SRule::FixS, SRule::NegateS] {
            same(format!("case {case} involution {rule:?}"), &a.conjugate(rule).conjugate(rule), &a)?;
            same(
                format!("case {case} multiplicativity {rule:?}"),
                &(&a * &b).conjugate(rule),
                &(&a.conjugate(rule) * &b.conjugate(rule)),
            )?;
        }
    }
    Ok(())
}

fn scalar_substitute(s: &mut Sampler) -> Outcome {
    for case in 0..300 {
        let (a, b) = (s.scalar(), s.scalar());
        let sv = s.chance(0.7).then(|| s.gaussian());
        let hv = s.chance(0.7).then(|| s.nonzero_rational());
        let sub = |x: &Scalar| eng(x.substitute(sv.as_ref(), hv.as_ref()));
        same(format!("case {case} product"), &sub(&(&a * &b))?, &(&sub(&a)? * &sub(&b)?))?;
        same(format!("case {case} sum"), &sub(&(&a + &b))?, &(&sub(&a)? + &sub(&b)?))?;
    }
    Ok(())
}

fn scalar_canonical(s: &mut Sampler) -> Outcome {
    for case in 0..200 {
        let (a, b, c) = (s.scalar(), s.scalar(), s.scalar());
        let x = &(&a + &b) - &c;
        let y = &(&(&b - &c) + &a) + &(&a + &(-&a));
        holds(format!("case {case} zero coefficient stored"), x.terms().all(|(_, v)| !v.is_zero()))?;
        holds(
            format!("case {case} serialisation differs for {}", x.show()),
            to_json_string(&scalar_json(&x)) == to_json_string(&scalar_json(&y)),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------- phase

fn star_associative(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..60 {
        let d = dof_of(case);
        let (f, g, h) = (s.phase(d, 4), s.phase(d, 4), s.phase(d, 4));
        let lhs = eng(eng(f.star_product(&g, &o))?.star_product(&h, &o))?;
        let rhs = eng(f.star_product(&eng(g.star_product(&h, &o))?, &o))?;
        same(format!("case {case} f={} g={} h={}", f, g, h), &lhs, &rhs)?;
    }
    Ok(())
}

fn star_identity(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let f = s.phase(d, 4);
        let one = PhasePoly::one(d);
        same(format!("case {case} right"), &eng(f.star_product(&one, &o))?, &f)?;
        same(format!("case {case} left"), &eng(one.star_product(&f, &o))?, &f)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn lie_axioms<T: PartialEq + Show + Clone>(
    label: &str,
    s: &mut Sampler,
    cases: usize,
    mut draw: impl FnMut(&mut Sampler, usize) -> T,
    bracket: impl Fn(&T, &T) -> Result<T, String>,
    add: impl Fn(&T, &T) -> T,
    scale: impl Fn(&T, &Scalar) -> T,
    is_zero: impl Fn(&T) -> bool,
) -> Outcome {
    for case in 0..cases {
        let d = dof_of(case);
        let (f, g, h) = (draw(s, d), draw(s, d), draw(s, d));
        let fg = bracket(&f, &g)?;
        let gf = bracket(&g, &f)?;
        holds(format!("{label} case {case} antisymmetry: f={} g={}", f.show(), g.show()), is_zero(&add(&fg, &gf)))?;
        let jacobi = add(&add(&bracket(&f, &bracket(&g, &h)?)?, &bracket(&g, &bracket(&h, &f)?)?), &bracket(&h, &fg)?);
        holds(format!("{label} case {case} Jacobi: f={} g={} h={}", f.show(), g.show(), h.show()), is_zero(&jacobi))?;
        let a = s.coefficient(true);
        let lhs = bracket(&add(&scale(&f, &a), &h), &g)?;
        let rhs = add(&scale(&fg, &a), &bracket(&h, &g)?);
        same(format!("{label} case {case} bilinearity"), &lhs, &rhs)?;
    }
    Ok(())
}

fn pb_lie(s: &mut Sampler) -> Outcome {
    lie_axioms(
        "PB",
        s,
        100,
        |s, d| s.phase(d, 3),
        |a, b| eng(a.poisson_bracket(b)),
        |a, b| a + b,
        |a, c| a.scale(c),
        PhasePoly::is_zero,
    )?;
    for case in 0..100 {
        let d = dof_of(case);
        let (f, g, h) = (s.phase(d, 3), s.phase(d, 3), s.phase(d, 3));
        let lhs = eng(f.poisson_bracket(&(&g * &h)))?;
        let rhs = &(&eng(f.poisson_bracket(&g))? * &h) + &(&g * &eng(f.poisson_bracket(&h))?);
        same(format!("Leibniz case {case}"), &lhs, &rhs)?;
    }
    Ok(())
}

fn mb_lie(s: &mut Sampler) -> Outcome {
    let o = formal();
    lie_axioms(
        "MB",
        s,
        100,
        |s, d| s.phase(d, 3),
        |a, b| eng(a.moyal_bracket(b, &o)),
        |a, b| a + b,
        |a, c| a.scale(c),
        PhasePoly::is_zero,
    )
}

fn mb_hbar_divisible(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let (f, g) = (s.phase(d, 4), s.phase(d, 4));
        let mb = eng(f.moyal_bracket(&g, &o))?;
        holds(
            format!("case {case}: {{{f}, {g}}}_MB = {mb} has an hbar^0 part"),
            mb.terms().min_hbar_power().is_none_or(|k| k >= 1),
        )?;
    }
    Ok(())
}

fn dof_separation(_: &mut Sampler) -> Outcome {
    let o = formal();
    let q1 = eng(PhasePoly::var(2, Var::Q, 0))?;
    let p1 = eng(PhasePoly::var(2, Var::P, 0))?;
    let p2 = eng(PhasePoly::var(2, Var::P, 1))?;
    holds("{q1, p2}_MB != 0", eng(q1.moyal_bracket(&p2, &o))?.is_zero())?;
    holds("{q1, p2}_PB != 0", eng(q1.poisson_bracket(&p2))?.is_zero())?;
    same("{q1, p1}_PB", &eng(q1.poisson_bracket(&p1))?, &PhasePoly::constant(2, Scalar::integer(-1)))?;
    same("{q1, p1}_MB", &eng(q1.moyal_bracket(&p1, &o))?, &PhasePoly::constant(2, minus_i_hbar()))
}

fn classical_limit(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let (f, g) = (s.classical(d, 4), s.classical(d, 4));
        same(
            format!("case {case} f={f} g={g}"),
            &eng(f.classical_limit_bracket(&g, &o))?,
            &eng(f.poisson_bracket(&g))?,
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------- winf

fn winf_pb(_: &mut Sampler) -> Outcome {
    for (n, m, k, l) in tuples(5) {
        same(
            format!("({n},{m},{k},{l})"),
            &eng(PhasePoly::qp(n, m).poisson_bracket(&PhasePoly::qp(k, l)))?,
            &winf_pb_structure(n, m, k, l),
        )?;
    }
    Ok(())
}

fn winf_mb(_: &mut Sampler) -> Outcome {
    let o = formal();
    let mut mismatches = Vec::new();
    for (n, m, k, l) in tuples(4) {
        let direct = eng(PhasePoly::qp(n, m).moyal_bracket(&PhasePoly::qp(k, l), &o))?;
        let closed = winf_mb_closed_form(n, m, k, l, &o);
        if direct != closed {
            mismatches.push(format!("({n},{m},{k},{l}): closed form = {closed}, star product = {direct}"));
        }
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(mismatches.join("; "))
    }
}

fn winf_pmb(_: &mut Sampler) -> Outcome {
    let o = formal();
    for (n, m, k, l) in tuples(4) {
        let got = eng(pmb(&t(n, m, &o), &t(k, l, &o), &o, PmbForm::GOnF))?;
        let c = i64::from(m * k) - i64::from(n * l);
        let expect = if n + k == 0 || m + l == 0 {
            OpPoly::zero(1)
        } else {
            t(n + k - 1, m + l - 1, &o).scale(&Scalar::integer(c))
        };
        same(format!("({n},{m},{k},{l})"), &got, &expect)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- weyl

fn q_form_p_form(_: &mut Sampler) -> Outcome {
    let o = formal();
    for n in 0..=5 {
        for m in 0..=5 {
            same(format!("t_{n}{m}"), &t_monomial(n, m, &o, TForm::QForm), &t_monomial(n, m, &o, TForm::PForm))?;
        }
    }
    Ok(())
}

fn word(powers: &[(Var, u32)]) -> OpPoly {
    normalize(&OpWord::from_powers(powers), &Scalar::one())
}

fn standard_antistandard(_: &mut Sampler) -> Outcome {
    let (std, anti) = (OrderParam::integer(1), OrderParam::integer(-1));
    for n in 0..=5 {
        for m in 0..=5 {
            same(format!("s=1 t_{n}{m}"), &t(n, m, &std), &OpPoly::qp(n, m))?;
            same(format!("s=-1 t_{n}{m}"), &t(n, m, &anti), &word(&[(Var::P, m), (Var::Q, n)]))?;
        }
    }
    Ok(())
}

fn three_way_weyl(_: &mut Sampler) -> Outcome {
    let qpp = word(&[(Var::Q, 1), (Var::P, 2)]);
    let pqp = word(&[(Var::P, 1), (Var::Q, 1), (Var::P, 1)]);
    let ppq = word(&[(Var::P, 2), (Var::Q, 1)]);
    let half = (&qpp + &ppq).scale(&Scalar::ratio(1, 2));
    let quarter = (&(&qpp + &pqp.scale(&Scalar::integer(2))) + &ppq).scale(&Scalar::ratio(1, 4));
    let third = (&(&qpp + &pqp) + &ppq).scale(&Scalar::ratio(1, 3));
    same("half vs quarter", &half, &quarter)?;
    same("half vs third", &half, &third)?;
    same("t(0)_12", &t(1, 2, &OrderParam::integer(0)), &half)?;
    let normal = &OpPoly::qp(1, 2) - &OpPoly::qp(0, 1).scale(&Scalar::monomial(GaussianRational::i(), 1, 0));
    same("normal form", &half, &normal)
}

fn recursion(_: &mut Sampler) -> Outcome {
    let o = formal();
    let (q, p) = (OpPoly::qp(1, 0), OpPoly::qp(0, 1));
    let sq = &Scalar::s() * &Scalar::s();
    let a = &Scalar::one() - &sq;
    let b = o.one_plus().pow(2);
    let c = o.one_minus().pow(2);
    for n in 0..=3 {
        for m in 0..=3 {
            let tt = t(n, m, &o);
            let sym = &(&(&q * &p) * &tt) + &(&(&tt * &p) * &q);
            let rhs = &(&sym.scale(&a) + &(&(&q * &tt) * &p).scale(&b)) + &(&(&p * &tt) * &q).scale(&c);
            same(format!("t_{}{}", n + 1, m + 1), &t(n + 1, m + 1, &o), &rhs.scale(&Scalar::ratio(1, 4)))?;
        }
    }
    Ok(())
}

fn hermiticity(_: &mut Sampler) -> Outcome {
    let hermitian = [
        ("0", OrderParam::integer(0)),
        ("i/2", OrderParam::value(gauss((0, 1), (1, 2)))),
        ("-i", OrderParam::value(gauss((0, 1), (-1, 1)))),
    ];
    for n in 0..=3 {
        for m in 0..=3 {
            for (label, o) in &hermitian {
                let tt = t(n, m, o);
                same(format!("s={label} t_{n}{m}"), &tt.dagger(SRule::FixS), &tt)?;
            }
            let tt = t(n, m, &OrderParam::integer(1));
            let self_adjoint = tt.dagger(SRule::FixS) == tt;
            holds(
                format!("s=1 t_{n}{m}: self-adjointness {self_adjoint} expected {}", n == 0 || m == 0),
                self_adjoint == (n == 0 || m == 0),
            )?;
            let f = formal();
            let tf = t(n, m, &f);
            same(format!("formal real s t_{n}{m}"), &tf.dagger(SRule::FixS), &t(n, m, &f.negated()))?;
            same(format!("formal imaginary s t_{n}{m}"), &tf.dagger(SRule::NegateS), &tf)?;
        }
    }
    Ok(())
}

fn dagger_laws(s: &mut Sampler) -> Outcome {
    for case in 0..100 {
        let d = dof_of(case);
        let (f, g) = (s.op(d, 3), s.op(d, 3));
        for rule in [SRule::FixS, SRule::NegateS] {
            same(format!("case {case} involution {rule:?}"), &f.dagger(rule).dagger(rule), &f)?;
            same(
                format!("case {case} reverses products {rule:?}"),
                &(&f * &g).dagger(rule),
                &(&g.dagger(rule) * &f.dagger(rule)),
            )?;
        }
    }
    Ok(())
}

fn op_associative(s: &mut Sampler) -> Outcome {
    for case in 0..100 {
        let d = dof_of(case);
        let (f, g, h) = (s.op(d, 3), s.op(d, 3), s.op(d, 3));
        same(format!("case {case} f={f} g={g} h={h}"), &(&(&f * &g) * &h), &(&f * &(&g * &h)))?;
        let id = OpPoly::identity(d);
        same(format!("case {case} identity"), &(&(&id * &f) * &id), &f)?;
    }
    Ok(())
}

/// Rewrite a word to normal order by firing `p_i q_i -> q_i p_i - i hbar`
/// and free swaps across dofs at random positions until none applies.
fn rewrite_randomly(word: &OpWord, s: &mut Sampler) -> OpPoly {
    let key = |g: &Generator| (g.index, g.var == Var::P);
    let mut pending = vec![(Scalar::one(), word.letters().to_vec())];
    let mut done = OpPoly::zero(word.dof());
    while let Some((c, mut letters)) = pending.pop() {
        let inversions: Vec<usize> =
            (0..letters.len().saturating_sub(1)).filter(|&j| key(&letters[j]) > key(&letters[j + 1])).collect();
        if inversions.is_empty() {
            let mut e = Exponents::one(word.dof());
            for g in &letters {
                let (n, m) = e.get(g.index);
                e.set(g.index, if g.var == Var::Q { (n + 1, m) } else { (n, m + 1) });
            }
            done = &done + &OpPoly::monomial(e, c);
            continue;
        }
        let j = *s.pick(&inversions);
        let (a, b) = (letters[j], letters[j + 1]);
        if a.index == b.index {
            let mut shorter = letters.clone();
            shorter.drain(j..=j + 1);
            pending.push((&c * &minus_i_hbar(), shorter));
        }
        letters.swap(j, j + 1);
        pending.push((c, letters));
        if s.chance(0.5) {
            let last = pending.len() - 1;
            let k = s.below(pending.len() as u32) as usize;
            pending.swap(last, k);
        }
    }
    done
}

fn confluence(s: &mut Sampler) -> Outcome {
    for case in 0..200 {
        let w = s.word(dof_of(case), 6);
        let oracle = rewrite_randomly(&w, s);
        same(format!("case {case} word {:?}", w.letters()), &normalize(&w, &Scalar::one()), &oracle)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- superop

fn ordering_action(s: &mut Sampler) -> Outcome {
    let o = formal();
    for n in 0..=4 {
        for m in 0..=4 {
            let e = Exponents::new(vec![(n, m)]);
            same(format!("t_{n}{m}"), &ordering_super_apply(&e, &o, &OpPoly::identity(1)), &t(n, m, &o))?;
        }
    }
    for case in 0..20 {
        let e = s.exponents(2, 4);
        let got = ordering_super_apply(&e, &o, &OpPoly::identity(2));
        same(format!("case {case} {:?}", e.pairs()), &got, &crate::weyl::t_monomial_exps(&e, &o, TForm::QForm))?;
    }
    Ok(())
}

fn liouvillian_commute(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..30 {
        let d = dof_of(case);
        let (f, g, a) = (s.phase(d, 3), s.phase(d, 3), s.op(d, 2));
        let (lf, lg) = (Liouvillian::new(f.clone(), o.clone()), Liouvillian::new(g.clone(), o.clone()));
        same(format!("case {case} f={f} g={g} A={a}"), &eng(lf.compose(&lg, &a))?, &eng(lg.compose(&lf, &a))?)?;
    }
    Ok(())
}

fn diamond_commutative(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..50 {
        let d = dof_of(case);
        let (f, g) = (s.op(d, 3), s.op(d, 3));
        same(format!("case {case} F={f} G={g}"), &eng(diamond(&f, &g, &o))?, &eng(diamond(&g, &f, &o))?)?;
    }
    Ok(())
}

fn diamond_associative(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..30 {
        let d = dof_of(case);
        let (f, g, h) = (s.op(d, 2), s.op(d, 2), s.op(d, 2));
        let lhs = eng(diamond(&eng(diamond(&f, &g, &o))?, &h, &o))?;
        let rhs = eng(diamond(&f, &eng(diamond(&g, &h, &o))?, &o))?;
        same(format!("case {case} F={f} G={g} H={h}"), &lhs, &rhs)?;
    }
    Ok(())
}

fn diamond_intertwines(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..50 {
        let d = dof_of(case);
        let (f, g) = (s.op(d, 3), s.op(d, 3));
        let lhs = ms_inverse(&eng(diamond(&f, &g, &o))?, &o);
        same(format!("case {case} F={f} G={g}"), &lhs, &(&ms_inverse(&f, &o) * &ms_inverse(&g, &o)))?;
    }
    Ok(())
}

fn diamond_monomials(_: &mut Sampler) -> Outcome {
    let o = formal();
    for (n1, m1, n2, m2) in tuples(3) {
        same(
            format!("t_{n1}{m1} <> t_{n2}{m2}"),
            &eng(diamond(&t(n1, m1, &o), &t(n2, m2, &o), &o))?,
            &t(n1 + n2, m1 + m2, &o),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------- pmb

fn pmb_four_forms(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..200 {
        let d = dof_of(case);
        let (f, g) = (s.op(d, 4), s.op(d, 4));
        let reference = eng(pmb(&f, &g, &o, PmbForm::GOnF))?;
        for form in &PmbForm::ALL[1..] {
            same(format!("case {case} {} F={f} G={g}", form.name()), &eng(pmb(&f, &g, &o, *form))?, &reference)?;
        }
    }
    Ok(())
}

fn pmb_lie(s: &mut Sampler) -> Outcome {
    let o = formal();
    lie_axioms(
        "PMB",
        s,
        100,
        |s, d| s.op(d, 3),
        |a, b| eng(pmb(a, b, &o, PmbForm::GOnF)),
        |a, b| a + b,
        |a, c| a.scale(c),
        OpPoly::is_zero,
    )
}

fn affine_reduction(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let (f, h) = (s.affine_op(d), s.op(d, 4));
        let expect = eng(f.commutator(&h))?.scale(&-inv_i_hbar());
        same(format!("case {case} F={f} H={h}"), &eng(pmb(&f, &h, &o, PmbForm::GOnF))?, &expect)?;
    }
    Ok(())
}

fn generator_brackets(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..50 {
        let d = dof_of(case);
        let h = ms(&s.phase(d, 4), &o);
        for i in 0..d {
            for (name, g) in [("q", q_op(d, i)), ("p", p_op(d, i))] {
                let expect = eng(g.commutator(&h))?.scale(&i_over_hbar());
                same(format!("case {case} {name}{} H={h}", i + 1), &eng(pmb(&g, &h, &o, PmbForm::GOnF))?, &expect)?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- wwgm

fn homomorphism(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..200 {
        let d = dof_of(case);
        let (f, g) = (s.phase(d, 4), s.phase(d, 4));
        let lhs = ms(&eng(f.poisson_bracket(&g))?, &o);
        let rhs = eng(pmb(&ms(&f, &o), &ms(&g, &o), &o, PmbForm::GOnF))?;
        same(format!("case {case} f={f} g={g}"), &lhs, &rhs)?;
    }
    Ok(())
}

fn antihomomorphism(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..200 {
        let d = dof_of(case);
        let (f, g) = (s.phase(d, 4), s.phase(d, 4));
        let w = eng(antihom_check(&f, &g, &o))?;
        same(format!("case {case} f={f} g={g}"), &w.image_of_bracket, &w.negated_commutator)?;
    }
    Ok(())
}

fn star_image(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let (f, g) = (s.phase(d, 3), s.phase(d, 3));
        let lhs = ms(&eng(f.star_product(&g, &o))?, &o);
        same(format!("case {case} f={f} g={g}"), &lhs, &(&ms(&g, &o) * &ms(&f, &o)))?;
    }
    Ok(())
}

fn bijective(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let (f, op) = (s.phase(d, 4), s.op(d, 4));
        same(format!("case {case} inverse after ms"), &ms_inverse(&ms(&f, &o), &o), &f)?;
        same(format!("case {case} ms after inverse"), &ms(&ms_inverse(&op, &o), &o), &op)?;
    }
    Ok(())
}

fn linear(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let (f, g, a) = (s.phase(d, 4), s.phase(d, 4), s.coefficient(true));
        let lhs = ms(&(&f.scale(&a) + &g), &o);
        same(format!("case {case} ms"), &lhs, &(&ms(&f, &o).scale(&a) + &ms(&g, &o)))?;
        let (x, y) = (s.op(d, 4), s.op(d, 4));
        let lhs = ms_inverse(&(&x.scale(&a) + &y), &o);
        same(format!("case {case} inverse"), &lhs, &(&ms_inverse(&x, &o).scale(&a) + &ms_inverse(&y, &o)))?;
    }
    Ok(())
}

fn derivative_images(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let f = s.phase(d, 4);
        for i in 0..d {
            for var in [Var::Q, Var::P] {
                same(
                    format!("case {case} d{var:?}{} f={f}", i + 1),
                    &eng(derivative_image(&f, var, i, &o))?,
                    &ms(&eng(f.derivative(var, i))?, &o),
                )?;
            }
        }
    }
    Ok(())
}

fn commutator_limit(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..100 {
        let d = dof_of(case);
        let (fo, go) = (s.op(d, 4), s.op(d, 4));
        let f0 = eng(ms_inverse(&fo, &o).limit_hbar_zero())?;
        let g0 = eng(ms_inverse(&go, &o).limit_hbar_zero())?;
        same(
            format!("case {case} F={fo} G={go}"),
            &eng(commutator_classical_limit(&fo, &go, &o))?,
            &eng(f0.poisson_bracket(&g0))?,
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------- dynamics

fn s_values() -> Vec<(&'static str, OrderParam)> {
    vec![
        ("formal", formal()),
        ("0", OrderParam::integer(0)),
        ("1", OrderParam::integer(1)),
        ("i/2", OrderParam::value(gauss((0, 1), (1, 2)))),
    ]
}

fn ehrenfest(s: &mut Sampler) -> Outcome {
    for (case, degree) in (1..=5).enumerate() {
        let v = s.potential(1, degree);
        let mass = s.nonzero_rational();
        let h = eng(kinetic_plus_potential(&mass, &v))?;
        let inv_mass = Scalar::constant(GaussianRational::from_rational(mass.recip()));
        let expect_q = OpPoly::qp(0, 1).scale(&inv_mass);
        let expect_p = -&ms(&eng(v.derivative(Var::Q, 0))?, &formal());
        for (label, o) in s_values() {
            let rhs = eng(hamilton_rhs(&h, &o))?;
            same(format!("case {case} s={label} V={v} dq/dt"), &rhs[0].0, &expect_q)?;
            same(format!("case {case} s={label} V={v} dp/dt"), &rhs[0].1, &expect_p)?;
        }
    }
    Ok(())
}

fn oscillator() -> PhasePoly {
    (&PhasePoly::qp(2, 0) + &PhasePoly::qp(0, 2)).scale(&Scalar::ratio(1, 2))
}

fn oscillator_series(_: &mut Sampler) -> Outcome {
    let o = formal();
    let h = oscillator();
    for f0 in [PhasePoly::qp(1, 0), PhasePoly::qp(0, 1)] {
        let quantum = eng(pmb_flow_series(&ms(&f0, &o), &h, &o, 6))?;
        let classical = eng(classical_flow_series(&f0, &h, 6))?;
        for (k, (a, b)) in quantum.coefficients().iter().zip(classical.coefficients()).enumerate() {
            same(format!("f0={f0} order {k}"), a, &ms(b, &o))?;
        }
    }
    let series = eng(pmb_flow_series(&OpPoly::qp(1, 0), &h, &o, 6))?;
    let mut fact = 1i64;
    for (k, c) in series.coefficients().iter().enumerate() {
        if k > 0 {
            fact *= k as i64;
        }
        let base = [OpPoly::qp(1, 0), OpPoly::qp(0, 1), -&OpPoly::qp(1, 0), -&OpPoly::qp(0, 1)][k % 4].clone();
        same(format!("period-4 order {k}"), c, &base.scale(&Scalar::ratio(1, fact)))?;
    }
    Ok(())
}

fn energy_conservation(s: &mut Sampler) -> Outcome {
    let o = formal();
    let mut hams = vec![oscillator()];
    for case in 0..4 {
        hams.push(s.phase(dof_of(case), 3));
    }
    for (case, h) in hams.iter().enumerate() {
        let series = eng(pmb_flow_series(&ms(h, &o), h, &o, 4))?;
        for (k, c) in series.coefficients().iter().enumerate().skip(1) {
            holds(format!("case {case} H={h} order {k}: {c}"), c.is_zero())?;
        }
    }
    Ok(())
}

fn flow_equivalence(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..20 {
        let d = dof_of(case);
        let (f0, h) = (s.phase(d, 3), s.phase(d, 3));
        let n = 1 + s.below(4) as usize;
        let quantum = eng(pmb_flow_series(&ms(&f0, &o), &h, &o, n))?;
        let classical = eng(classical_flow_series(&f0, &h, n))?;
        same(format!("case {case} f0={f0} H={h} N={n}"), &quantum, &classical.map(|c| ms(c, &o)))?;
    }
    Ok(())
}

impl Show for crate::dynamics::FlowSeries<OpPoly> {
    fn show(&self) -> String {
        self.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
    }
}

fn affine_flow(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..30 {
        let d = dof_of(case);
        let f0 = s.affine_op(d);
        let h = s.phase(d, 2);
        same(
            format!("case {case} quadratic H={h} F0={f0}"),
            &eng(pmb_flow_series(&f0, &h, &o, 4))?,
            &eng(commutator_flow_series(&f0, &h, &o, 4))?,
        )?;
        let h = s.phase(d, 4);
        same(
            format!("case {case} first order H={h} F0={f0}"),
            &eng(pmb_flow_series(&f0, &h, &o, 1))?,
            &eng(commutator_flow_series(&f0, &h, &o, 1))?,
        )?;
    }
    Ok(())
}

fn observable_equations(s: &mut Sampler) -> Outcome {
    let o = formal();
    for case in 0..30 {
        let d = dof_of(case);
        let f = s.potential(d, 3);
        let g = s.momentum_function(d, 3);
        let v = s.potential(d, 3);
        let mass = s.nonzero_rational();
        let h = ms(&eng(kinetic_plus_potential(&mass, &v))?, &o);
        let (fd, gd) = eng(observable_rhs(&f, &g, &mass, &v, &o))?;
        same(format!("case {case} f={f} V={v}"), &fd, &eng(pmb(&h, &ms(&f, &o), &o, PmbForm::GOnF))?)?;
        same(format!("case {case} g={g} V={v}"), &gd, &eng(pmb(&h, &ms(&g, &o), &o, PmbForm::GOnF))?)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- subalgebras

fn family(member: fn(u32, u32) -> bool, abelian: bool) -> Outcome {
    let o = formal();
    let gens: Vec<(u32, u32)> =
        (0..=4).flat_map(|n| (0..=4).map(move |m| (n, m))).filter(|&(n, m)| member(n, m)).collect();
    for &(n, m) in &gens {
        for &(k, l) in &gens {
            let (a, b) = (t(n, m, &o), t(k, l, &o));
            let bracket = eng(pmb(&a, &b, &o, PmbForm::GOnF))?;
            let scaled_commutator = eng(a.commutator(&b))?.scale(&-inv_i_hbar());
            if bracket != scaled_commutator {
                let w = OrderParam::integer(0);
                let (aw, bw) = (t(n, m, &w), t(k, l, &w));
                let at_weyl = eng(pmb(&aw, &bw, &w, PmbForm::GOnF))? == eng(aw.commutator(&bw))?.scale(&-inv_i_hbar());
                return Err(format!(
                    "t_{n}{m}, t_{k}{l}: [F,G]_PMB = {bracket} but -(i hbar)^-1 [F,G] = {scaled_commutator}; at s = 0 the two {}",
                    if at_weyl { "agree" } else { "also differ" }
                ));
            }
            for (e, _) in bracket.to_t_basis(&o).iter() {
                let (x, y) = e.get(0);
                holds(format!("t_{n}{m}, t_{k}{l}: leaves the family via t_{x}{y}"), member(x, y))?;
            }
            if abelian {
                holds(format!("t_{n}{m}, t_{k}{l}: not abelian ({bracket})"), bracket.is_zero())?;
            }
        }
    }
    Ok(())
}

fn sub_n0(_: &mut Sampler) -> Outcome {
    family(|n, _| n == 0, true)
}

fn sub_m0(_: &mut Sampler) -> Outcome {
    family(|_, m| m == 0, true)
}

fn sub_cartan(_: &mut Sampler) -> Outcome {
    family(|n, m| n == m, true)
}

fn sub_hw(_: &mut Sampler) -> Outcome {
    family(|n, m| n + m <= 1, false)
}

fn sub_sp2(_: &mut Sampler) -> Outcome {
    family(|n, m| n + m == 2, false)
}

fn sub_isp2(_: &mut Sampler) -> Outcome {
    family(|n, m| n + m <= 2, false)
}

fn sub_m1(_: &mut Sampler) -> Outcome {
    family(|_, m| m == 1, false)
}

fn sub_n1(_: &mut Sampler) -> Outcome {
    family(|n, _| n == 1, false)
}

// ---------------------------------------------------------------- cli

fn round_trip(s: &mut Sampler) -> Outcome {
    for case in 0..1000 {
        let dof = 1 + s.below(3) as usize;
        let value = match s.below(3) {
            0 => Value::Scalar(s.scalar()),
            1 => Value::Phase(s.phase(dof, 4)),
            _ => Value::Op(s.op(dof, 4)),
        };
        let text = value.render(Format::Text);
        let ctx = Context { dof, ..Context::default() };
        let back = evaluate(&text, &ctx).map_err(|e| format!("case {case}: '{text}' does not parse: {e}"))?;
        holds(format!("case {case}: '{text}' reads back as '{}'", back.render(Format::Text)), back.same_as(&value))?;
        holds(
            format!("case {case}: '{text}' renders differently after a round trip"),
            back.render(Format::Text) == text,
        )?;
    }
    Ok(())
}

macro_rules! check {
    ($id:literal, $suite:literal, $anchor:literal, $params:literal, $crit:expr, $run:ident) => {
        Check { id: $id, suite: $suite, anchor: $anchor, params: $params, criterion: $crit, run: $run }
    };
}

static CHECKS: &[Check] = &[
    check!("scalar.ring_axioms", "scalar", "coefficient-ring", "1000 random triples", None, scalar_ring),
    check!("scalar.conjugate", "scalar", "conjugation", "300 pairs, both s rules", None, scalar_conjugate),
    check!("scalar.substitute", "scalar", "evaluation-homomorphism", "300 pairs", None, scalar_substitute),
    check!("scalar.canonical_form", "scalar", "canonical-form", "200 triples", None, scalar_canonical),
    check!(
        "phase.star_associative",
        "phase",
        "star-product",
        "60 triples, degree <= 4, d in {1,2}",
        None,
        star_associative
    ),
    check!("phase.star_identity", "phase", "star-product", "100 samples, degree <= 4", None, star_identity),
    check!("phase.pb_lie", "phase", "poisson-bracket", "100 triples, degree <= 3, plus Leibniz", Some(6), pb_lie),
    check!("phase.mb_lie", "phase", "moyal-bracket", "100 triples, degree <= 3, formal s", Some(6), mb_lie),
    check!("phase.mb_hbar_divisible", "phase", "moyal-bracket", "100 pairs, degree <= 4", None, mb_hbar_divisible),
    check!("phase.dof_separation", "phase", "moyal-bracket", "d = 2 generators", None, dof_separation),
    check!(
        "phase.classical_limit",
        "phase",
        "moyal-classical-limit",
        "100 pairs, degree <= 4",
        Some(5),
        classical_limit
    ),
    check!("winf.pb_structure", "winf", "w-infinity-pb", "0 <= n,m,k,l <= 5", None, winf_pb),
    check!("winf.mb_closed_form", "winf", "w-infinity-mb", "0 <= n,m,k,l <= 4, formal s", Some(4), winf_mb),
    check!("winf.pmb_structure", "winf", "w-infinity-pmb", "0 <= n,m,k,l <= 4, formal s", Some(3), winf_pmb),
    check!("weyl.q_form_p_form", "weyl", "s-ordered-monomial", "0 <= n,m <= 5, formal s", Some(7), q_form_p_form),
    check!(
        "weyl.standard_antistandard",
        "weyl",
        "standard-antistandard",
        "0 <= n,m <= 5, s = 1 and s = -1",
        Some(7),
        standard_antistandard
    ),
    check!("weyl.three_way_weyl", "weyl", "weyl-symmetrisation", "t(0)_12 displays", Some(7), three_way_weyl),
    check!("weyl.recursion", "weyl", "s-ordering-recursion", "0 <= n,m <= 3, formal s", Some(7), recursion),
    check!("weyl.hermiticity", "weyl", "hermiticity", "0 <= n,m <= 3, s in {0, i/2, -i, 1}", Some(7), hermiticity),
    check!("weyl.dagger_laws", "weyl", "adjoint", "100 pairs, degree <= 3", None, dagger_laws),
    check!("weyl.op_mul_associative", "weyl", "operator-product", "100 triples, degree <= 3", None, op_associative),
    check!("weyl.normalize_confluent", "weyl", "normal-ordering", "200 words, length <= 6", None, confluence),
    check!(
        "superop.ordering_action",
        "superop",
        "ordering-superoperator",
        "0 <= n,m <= 4 and 20 samples at d = 2",
        None,
        ordering_action
    ),
    check!("superop.liouvillian_commute", "superop", "liouvillian", "30 triples", None, liouvillian_commute),
    check!(
        "superop.diamond_commutative",
        "superop",
        "diamond-product",
        "50 pairs, degree <= 3",
        Some(8),
        diamond_commutative
    ),
    check!(
        "superop.diamond_associative",
        "superop",
        "diamond-product",
        "30 triples, degree <= 2",
        Some(8),
        diamond_associative
    ),
    check!(
        "superop.diamond_intertwines",
        "superop",
        "diamond-product",
        "50 pairs, degree <= 3",
        Some(8),
        diamond_intertwines
    ),
    check!("superop.diamond_monomial_law", "superop", "diamond-product", "exponents <= 3", Some(8), diamond_monomials),
    check!(
        "pmb.four_forms",
        "pmb",
        "pmb-four-forms",
        "200 pairs, degree <= 4, d in {1,2}, formal s",
        Some(1),
        pmb_four_forms
    ),
    check!("pmb.lie", "pmb", "pmb-lie-bracket", "100 triples, degree <= 3", Some(6), pmb_lie),
    check!("pmb.affine_reduction", "pmb", "affine-reduction", "100 pairs, degree <= 4", None, affine_reduction),
    check!(
        "pmb.generator_brackets",
        "pmb",
        "pmb-of-generators",
        "50 Hamiltonians, both q and p slots",
        None,
        generator_brackets
    ),
    check!("wwgm.homomorphism", "wwgm", "pb-homomorphism", "200 pairs, degree <= 4, d in {1,2}", Some(2), homomorphism),
    check!("wwgm.antihomomorphism", "wwgm", "mb-antihomomorphism", "200 pairs, degree <= 4", Some(9), antihomomorphism),
    check!("wwgm.star_image", "wwgm", "product-hierarchy", "100 pairs, degree <= 3", None, star_image),
    check!("wwgm.bijective", "wwgm", "association-map", "100 samples, degree <= 4", None, bijective),
    check!("wwgm.linear", "wwgm", "association-map", "100 samples, degree <= 4", None, linear),
    check!("wwgm.derivative_images", "wwgm", "derivative-images", "100 samples, degree <= 4", None, derivative_images),
    check!(
        "wwgm.commutator_limit",
        "wwgm",
        "commutator-classical-limit",
        "100 pairs, degree <= 4",
        Some(5),
        commutator_limit
    ),
    check!(
        "dynamics.ehrenfest",
        "dynamics",
        "ehrenfest",
        "5 potentials, s in {formal, 0, 1, i/2}",
        Some(10),
        ehrenfest
    ),
    check!("dynamics.oscillator", "dynamics", "oscillator-flow", "order 6", Some(10), oscillator_series),
    check!(
        "dynamics.energy_conservation",
        "dynamics",
        "energy-conservation",
        "5 Hamiltonians, order 4",
        Some(10),
        energy_conservation
    ),
    check!(
        "dynamics.flow_equivalence",
        "dynamics",
        "flow-homomorphism",
        "20 samples, degree <= 3, N <= 4",
        None,
        flow_equivalence
    ),
    check!("dynamics.affine_flow", "dynamics", "affine-evolution", "30 samples", None, affine_flow),
    check!(
        "dynamics.observable_equations",
        "dynamics",
        "observable-evolution",
        "30 samples, degree <= 3",
        None,
        observable_equations
    ),
    check!("subalgebra.n_zero", "subalgebra", "abelian-p-powers", "n = 0, m <= 4", Some(11), sub_n0),
    check!("subalgebra.m_zero", "subalgebra", "abelian-q-powers", "m = 0, n <= 4", Some(11), sub_m0),
    check!("subalgebra.cartan", "subalgebra", "cartan-subalgebra", "n = m <= 4", Some(11), sub_cartan),
    check!("subalgebra.heisenberg_weyl", "subalgebra", "heisenberg-weyl", "n + m <= 1", Some(11), sub_hw),
    check!("subalgebra.sp2", "subalgebra", "symplectic", "n + m = 2", Some(11), sub_sp2),
    check!("subalgebra.isp2", "subalgebra", "inhomogeneous-symplectic", "n + m <= 2", Some(11), sub_isp2),
    check!("subalgebra.m_one", "subalgebra", "virasoro-type", "m = 1, n <= 4", Some(11), sub_m1),
    check!("subalgebra.n_one", "subalgebra", "virasoro-type", "n = 1, m <= 4", Some(11), sub_n1),
    check!("cli.round_trip", "cli", "parse-render-round-trip", "1000 generated values, d <= 3", Some(12), round_trip),
];
