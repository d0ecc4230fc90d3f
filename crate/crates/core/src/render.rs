//! Deterministic text, LaTeX and JSON output for scalars, polynomials and
//! flow series. The text form is valid input for the expression parser.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dynamics::FlowSeries;
use crate::phase::PhasePoly;
use crate::scalar::{GaussianRational, Scalar, ScalarKey};
use crate::terms::{Exponents, Terms};
use crate::weyl::OpPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            other => Err(format!("unknown format '{other}' (expected text, json or latex)")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    Text,
    Latex,
}

/// A rendered summand: sign and the unsigned product of factors.
struct Piece {
    negative: bool,
    factors: Vec<String>,
}

fn join_pieces(pieces: &[Piece], style: Style) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    let sep = if style == Style::Text { "*" } else { " " };
    let mut out = String::new();
    for (idx, piece) in pieces.iter().enumerate() {
        let body = if piece.factors.is_empty() { "1".to_string() } else { piece.factors.join(sep) };
        match (idx, piece.negative) {
            (0, true) => {
                out.push('-');
                if style == Style::Latex {
                    out.push(' ');
                }
            }
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn rational(r: &BigRational, style: Style) -> String {
    match style {
        Style::Text => r.to_string(),
        Style::Latex if r.denom().is_one() => r.numer().to_string(),
        Style::Latex => format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom()),
    }
}

fn power(base: &str, exp: impl std::fmt::Display + PartialEq + From<u8>, style: Style) -> String {
    if exp == 1u8.into() {
        return base.to_string();
    }
    match style {
        Style::Text => format!("{base}^{exp}"),
        Style::Latex => format!("{base}^{{{exp}}}"),
    }
}

/// Sign and factors of a Gaussian rational used as a multiplier. `None` as
/// the factor means the magnitude is one.
fn gaussian_factor(c: &GaussianRational, style: Style) -> (bool, Option<String>) {
    let i = "i";
    match (c.re().is_zero(), c.im().is_zero()) {
        (_, true) => {
            let mag = c.re().abs();
            (c.re().is_negative(), (!mag.is_one()).then(|| rational(&mag, style)))
        }
        (true, false) => {
            let mag = c.im().abs();
            let f = if mag.is_one() {
                i.to_string()
            } else {
                let sep = if style == Style::Text { "*" } else { " " };
                format!("{}{sep}{i}", rational(&mag, style))
            };
            (c.im().is_negative(), Some(f))
        }
        (false, false) => {
            let inner = join_pieces(
                &[
                    Piece { negative: c.re().is_negative(), factors: vec![rational(&c.re().abs(), style)] },
                    Piece {
                        negative: c.im().is_negative(),
                        factors: if c.im().abs().is_one() {
                            vec![i.to_string()]
                        } else {
                            vec![rational(&c.im().abs(), style), i.to_string()]
                        },
                    },
                ],
                style,
            );
            (false, Some(paren(&inner, style)))
        }
    }
}

fn paren(s: &str, style: Style) -> String {
    match style {
        Style::Text => format!("({s})"),
        Style::Latex => format!("\\left({s}\\right)"),
    }
}

fn scalar_term_piece(key: ScalarKey, c: &GaussianRational, style: Style) -> Piece {
    let (negative, g) = gaussian_factor(c, style);
    let mut factors: Vec<String> = g.into_iter().collect();
    let hbar = if style == Style::Text { "hbar" } else { "\\hbar" };
    if key.hbar != 0 {
        factors.push(power(hbar, key.hbar as i64, style));
    }
    if key.s != 0 {
        factors.push(power("s", key.s as i64, style));
    }
    Piece { negative, factors }
}

fn scalar_pieces(x: &Scalar, style: Style) -> Vec<Piece> {
    x.terms().map(|(k, c)| scalar_term_piece(k, c, style)).collect()
}

/// Sign and factor list of a scalar used as the coefficient of a monomial.
fn coefficient_piece(x: &Scalar, style: Style) -> Piece {
    if x.len() == 1 {
        let (k, c) = x.terms().next().unwrap();
        let mut piece = scalar_term_piece(k, c, style);
        // a lone multiplier of one contributes no factor
        piece.factors.retain(|f| f != "1");
        return piece;
    }
    Piece { negative: false, factors: vec![paren(&join_pieces(&scalar_pieces(x, style), style), style)] }
}

fn monomial_factors(e: &Exponents, op: bool, style: Style) -> Vec<String> {
    let multi = e.dof() > 1;
    let mut out = Vec::new();
    for (i, &(n, m)) in e.pairs().iter().enumerate() {
        for (var, k) in [("q", n), ("p", m)] {
            if k == 0 {
                continue;
            }
            let base = match (style, op) {
                (Style::Text, true) => format!("{var}h"),
                (Style::Text, false) => var.to_string(),
                (Style::Latex, true) => format!("\\hat{{{var}}}"),
                (Style::Latex, false) => var.to_string(),
            };
            let base = match (multi, style) {
                (false, _) => base,
                (true, Style::Text) => format!("{base}{}", i + 1),
                (true, Style::Latex) => format!("{base}_{{{}}}", i + 1),
            };
            out.push(power(&base, k as i64, style));
        }
    }
    out
}

fn terms_pieces(terms: &Terms, op: bool, style: Style) -> Vec<Piece> {
    let mut out = Vec::new();
    for (e, c) in terms.iter() {
        if e.is_one() {
            // a constant term reads the same as the bare scalar
            out.extend(scalar_pieces(c, style));
            continue;
        }
        let mut piece = coefficient_piece(c, style);
        piece.factors.extend(monomial_factors(e, op, style));
        out.push(piece);
    }
    out
}

pub(crate) fn text_terms(terms: &Terms, _dof: usize, op: bool) -> String {
    join_pieces(&terms_pieces(terms, op, Style::Text), Style::Text)
}

pub fn scalar_text(x: &Scalar) -> String {
    join_pieces(&scalar_pieces(x, Style::Text), Style::Text)
}

pub fn scalar_latex(x: &Scalar) -> String {
    join_pieces(&scalar_pieces(x, Style::Latex), Style::Latex)
}

pub fn phase_latex(f: &PhasePoly) -> String {
    join_pieces(&terms_pieces(f.terms(), false, Style::Latex), Style::Latex)
}

pub fn op_latex(f: &OpPoly) -> String {
    join_pieces(&terms_pieces(f.terms(), true, Style::Latex), Style::Latex)
}

#[derive(Serialize)]
pub struct CoeffJson {
    pub hbar_pow: i32,
    pub s_pow: u32,
    pub re: String,
    pub im: String,
}

#[derive(Serialize)]
pub struct TermJson {
    pub exponents: Vec<[u32; 2]>,
    pub coeff: CoeffJson,
}

#[derive(Serialize)]
pub struct PolyJson {
    pub kind: &'static str,
    pub dof: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize)]
pub struct FlowJson {
    pub kind: &'static str,
    pub dof: usize,
    pub order: usize,
    pub coefficients: Vec<PolyJson>,
}

fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn terms_json(kind: &'static str, dof: usize, terms: &Terms) -> PolyJson {
    let mut out = Vec::new();
    for (e, c) in terms.iter() {
        for (k, g) in c.terms() {
            out.push(TermJson {
                exponents: e.pairs().iter().map(|&(n, m)| [n, m]).collect(),
                coeff: CoeffJson { hbar_pow: k.hbar, s_pow: k.s, re: ratio_string(g.re()), im: ratio_string(g.im()) },
            });
        }
    }
    PolyJson { kind, dof, terms: out }
}

pub fn phase_json(f: &PhasePoly) -> PolyJson {
    terms_json("phase_poly", f.dof(), f.terms())
}

pub fn op_json(f: &OpPoly) -> PolyJson {
    terms_json("op_poly", f.dof(), f.terms())
}

pub fn scalar_json(x: &Scalar) -> PolyJson {
    let mut t = Terms::new();
    t.add_term(Exponents::new(Vec::new()), x);
    terms_json("scalar", 0, &t)
}

pub fn to_json_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable value")
}

/// Anything the CLI can print.
pub trait Render {
    fn render(&self, format: Format) -> String;
}

impl Render for Scalar {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => scalar_text(self),
            Format::Latex => scalar_latex(self),
            Format::Json => to_json_string(&scalar_json(self)),
        }
    }
}

impl Render for PhasePoly {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Latex => phase_latex(self),
            Format::Json => to_json_string(&phase_json(self)),
        }
    }
}

impl Render for OpPoly {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Latex => op_latex(self),
            Format::Json => to_json_string(&op_json(self)),
        }
    }
}

trait SeriesEntry {
    fn entry_json(&self) -> PolyJson;
    fn entry_dof(&self) -> usize;
}

impl SeriesEntry for PhasePoly {
    fn entry_json(&self) -> PolyJson {
        phase_json(self)
    }

    fn entry_dof(&self) -> usize {
        self.dof()
    }
}

impl SeriesEntry for OpPoly {
    fn entry_json(&self) -> PolyJson {
        op_json(self)
    }

    fn entry_dof(&self) -> usize {
        self.dof()
    }
}

impl<T: Render + SeriesEntry> Render for FlowSeries<T> {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json_string(&FlowJson {
                kind: "flow_series",
                dof: self.initial().entry_dof(),
                order: self.order(),
                coefficients: self.coefficients().iter().map(SeriesEntry::entry_json).collect(),
            }),
            Format::Text => self
                .coefficients()
                .iter()
                .enumerate()
                .map(|(k, c)| format!("t^{k}: {}", c.render(Format::Text)))
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Latex => self
                .coefficients()
                .iter()
                .enumerate()
                .map(|(k, c)| format!("t^{{{k}}}: {}", c.render(Format::Latex)))
                .collect::<Vec<_>>()
                .join("\n"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ih(c: i64) -> Scalar {
        Scalar::monomial(GaussianRational::new(BigRational::zero(), BigRational::from_integer(c.into())), 1, 0)
    }

    #[test]
    fn text_forms() {
        let op = &OpPoly::qp(1, 2) - &OpPoly::qp(0, 1).scale(&ih(1));
        assert_eq!(op.render(Format::Text), "qh*ph^2 - i*hbar*ph");
        assert_eq!(OpPoly::constant(1, Scalar::integer(-1)).render(Format::Text), "-1");
        assert_eq!(OpPoly::zero(1).render(Format::Text), "0");
        let mixed = PhasePoly::qp(1, 0).scale(&(Scalar::one() + Scalar::s()));
        assert_eq!(mixed.render(Format::Text), "(1 + s)*q");
        let c = PhasePoly::qp(0, 1).scale(&Scalar::constant(GaussianRational::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer((-3).into()),
        )));
        assert_eq!(c.render(Format::Text), "(1/2 - 3*i)*p");
    }

    #[test]
    fn latex_forms() {
        let f = PhasePoly::qp(2, 0).scale(&Scalar::integer(2));
        assert_eq!(f.render(Format::Latex), "2 q^{2}");
        let op = &OpPoly::qp(1, 1) - &OpPoly::constant(1, &ih(1) * &Scalar::ratio(1, 2));
        assert_eq!(op.render(Format::Latex), "\\hat{q} \\hat{p} - \\frac{1}{2} i \\hbar");
    }

    #[test]
    fn flow_text() {
        let series = FlowSeries::new(vec![OpPoly::qp(1, 0), OpPoly::qp(0, 1)]);
        assert_eq!(series.render(Format::Text), "t^0: qh\nt^1: ph");
    }

    #[test]
    fn json_is_flat_per_scalar_term() {
        let op = &OpPoly::qp(1, 1) - &OpPoly::constant(1, ih(1));
        let got = op.render(Format::Json);
        assert_eq!(got, op.render(Format::Json));
        let v: serde_json::Value = serde_json::from_str(&got).unwrap();
        assert_eq!(v["kind"], "op_poly");
        assert_eq!(v["terms"][1]["coeff"]["im"], "-1/1");
        assert_eq!(v["terms"][1]["coeff"]["hbar_pow"], 1);
        assert_eq!(v["terms"][0]["exponents"][0][0], 1);
    }
}
