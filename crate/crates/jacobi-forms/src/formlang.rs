//! A small expression language for building forms.
//!
//! ```text
//! form  := term { ("*" | "(x)") term }
//! term  := atom [ "/eta^" INT ] | atom "*eta^" INT
//! atom  := NAME [ "(" INT { "," INT } ")" ] | "(" form ")"
//!        | "pull" "(" form ";" INT { "," INT } ")"
//!        | "sub" "(" form ";" INT ")"
//!        | "q2" "(" form ")"
//! ```

use std::collections::HashMap;
use std::fmt;

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::forms;
use crate::linalg::QMat;
use crate::series::FourierSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug)]
pub struct FormExpr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Atom(String, Vec<i64>),
    Mul(Box<FormExpr>, Box<FormExpr>),
    Tensor(Box<FormExpr>, Box<FormExpr>),
    EtaPow(Box<FormExpr>, i64),
    /// `z -> c z`
    Sub(Box<FormExpr>, i64),
    /// restriction to the orthogonal complement of a frame vector
    Pull(Box<FormExpr>, Vec<i64>),
    /// `tau -> c tau`
    QRescale(Box<FormExpr>, i64),
}

impl PartialEq for FormExpr {
    fn eq(&self, o: &FormExpr) -> bool {
        self.kind == o.kind
    }
}

/// `(name, allowed argument counts)`.
pub const NAMES: &[(&str, &[usize])] = &[
    ("theta", &[0]),
    ("theta32", &[0]),
    ("eta", &[0]),
    ("E", &[1]),
    ("thetaD", &[1]),
    ("thetaD3", &[1]),
    ("thetaA", &[1]),
    ("thetaA3", &[1]),
    ("thetaD4_2", &[0]),
    ("thetaD4_3", &[0]),
    ("thetaD2_1", &[0]),
    ("sigmaA2", &[0]),
    ("quark", &[2]),
    ("thetaE6", &[0]),
    ("latTheta", &[2, 3]),
];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Semi,
    Star,
    Slash,
    Caret,
    Tensor,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name(n) => format!("name `{n}`"),
        Tok::Int(i) => format!("integer {i}"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Tensor => "`(x)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' if b[i..].starts_with(b"(x)") => {
                i += 3;
                Tok::Tensor
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b';' => {
                i += 1;
                Tok::Semi
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'/' => {
                i += 1;
                Tok::Slash
            }
            b'^' => {
                i += 1;
                Tok::Caret
            }
            b'-' | b'0'..=b'9' => {
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                if text == "-" {
                    return Err(Error::Parse { offset: start, message: "expected integer after `-`".into() });
                }
                let v = text
                    .parse::<i64>()
                    .map_err(|_| Error::Parse { offset: start, message: format!("integer {text} out of range") })?;
                Tok::Int(v)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                Tok::Name(src[start..i].to_string())
            }
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(Error::Parse { offset: start, message: format!("unexpected character {ch:?}") });
            }
        };
        out.push((tok, Span { start, end: i }));
    }
    out.push((Tok::End, Span { start: src.len(), end: src.len() }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        let (t, s) = &self.toks[self.pos];
        let exp = if expected.len() == 1 { expected[0].to_string() } else { format!("one of {}", expected.join(", ")) };
        Err(Error::Parse { offset: s.start, message: format!("expected {exp}, found {}", describe(t)) })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<Span> {
        if *self.peek(0) == t {
            Ok(self.bump().1)
        } else {
            self.fail(&[what])
        }
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek(0) {
            Tok::Int(v) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn int_list(&mut self) -> Result<Vec<i64>> {
        let mut v = vec![self.int()?];
        while *self.peek(0) == Tok::Comma {
            self.bump();
            v.push(self.int()?);
        }
        Ok(v)
    }

    fn form(&mut self) -> Result<FormExpr> {
        let mut acc = self.term()?;
        loop {
            let tensor = match self.peek(0) {
                Tok::Star => false,
                Tok::Tensor => true,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            let span = Span { start: acc.span.start, end: rhs.span.end };
            let kind = if tensor {
                ExprKind::Tensor(Box::new(acc), Box::new(rhs))
            } else {
                ExprKind::Mul(Box::new(acc), Box::new(rhs))
            };
            acc = FormExpr { kind, span };
        }
    }

    fn eta_power_follows(&self) -> bool {
        matches!(self.peek(1), Tok::Name(n) if n == "eta") && *self.peek(2) == Tok::Caret
    }

    fn term(&mut self) -> Result<FormExpr> {
        let a = self.atom()?;
        let sign = match self.peek(0) {
            Tok::Slash => -1,
            Tok::Star if self.eta_power_follows() => 1,
            _ => return Ok(a),
        };
        if sign == -1 && !self.eta_power_follows() {
            self.bump();
            return self.fail(&["`eta^`"]);
        }
        self.bump();
        self.bump();
        self.bump();
        let p = self.int()?;
        let end = self.toks[self.pos - 1].1.end;
        let span = Span { start: a.span.start, end };
        Ok(FormExpr { kind: ExprKind::EtaPow(Box::new(a), sign * p), span })
    }

    fn atom(&mut self) -> Result<FormExpr> {
        let start = self.span().start;
        match self.peek(0).clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.form()?;
                let end = self.expect(Tok::RParen, "`)`")?.end;
                Ok(FormExpr { kind: inner.kind, span: Span { start, end } })
            }
            Tok::Name(name) => {
                let name_span = self.span();
                self.bump();
                match name.as_str() {
                    "pull" | "sub" | "q2" => return self.operator(&name, start),
                    _ => {}
                }
                let Some((_, arities)) = NAMES.iter().find(|(n, _)| *n == name) else {
                    return Err(Error::Parse { offset: name_span.start, message: format!("unknown name `{name}`") });
                };
                let mut args = Vec::new();
                let mut end = name_span.end;
                if *self.peek(0) == Tok::LParen && !arities.contains(&0) {
                    self.bump();
                    args = self.int_list()?;
                    end = self.expect(Tok::RParen, "`)`")?.end;
                } else if !arities.contains(&0) {
                    return self.fail(&["`(`"]);
                }
                if !arities.contains(&args.len()) {
                    return Err(Error::Parse {
                        offset: name_span.start,
                        message: format!("`{name}` takes {:?} arguments, got {}", arities, args.len()),
                    });
                }
                check_args(&name, &args).map_err(|m| Error::Parse { offset: name_span.start, message: m })?;
                Ok(FormExpr { kind: ExprKind::Atom(name, args), span: Span { start, end } })
            }
            _ => self.fail(&["name", "`(`"]),
        }
    }

    fn operator(&mut self, name: &str, start: usize) -> Result<FormExpr> {
        self.expect(Tok::LParen, "`(`")?;
        let inner = Box::new(self.form()?);
        let kind = match name {
            "q2" => ExprKind::QRescale(inner, 2),
            "sub" => {
                self.expect(Tok::Semi, "`;`")?;
                let at = self.span().start;
                let c = self.int()?;
                if c == 0 {
                    return Err(Error::Parse { offset: at, message: "sub needs a nonzero factor".into() });
                }
                ExprKind::Sub(inner, c)
            }
            _ => {
                self.expect(Tok::Semi, "`;`")?;
                let at = self.span().start;
                let v = self.int_list()?;
                if v.iter().all(|x| *x == 0) {
                    return Err(Error::Parse { offset: at, message: "pull needs a nonzero vector".into() });
                }
                ExprKind::Pull(inner, v)
            }
        };
        let end = self.expect(Tok::RParen, "`)`")?.end;
        Ok(FormExpr { kind, span: Span { start, end } })
    }
}

fn check_args(name: &str, a: &[i64]) -> std::result::Result<(), String> {
    let bad = |m: &str| Err(format!("`{name}`: {m}"));
    match name {
        "E" if a[0] < 4 || a[0] % 2 != 0 => bad("weight must be even and >= 4"),
        "thetaD" | "thetaD3" | "thetaA" | "thetaA3" if !(1..=64).contains(&a[0]) => bad("rank must lie in 1..=64"),
        "quark" if a[0] < 1 || a[1] < 1 => bad("arguments must be positive"),
        "latTheta" => {
            let ok = match a[0] {
                0 => a[1] >= 1,
                1 => a[1] >= 1,
                2 => (6..=8).contains(&a[1]),
                _ => false,
            };
            if !ok || a[1] > 64 {
                return bad("unsupported root lattice");
            }
            if a.len() == 3 && a[2] < 0 {
                return bad("class index must be >= 0");
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

pub fn parse_form(src: &str) -> Result<FormExpr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.form()?;
    if *p.peek(0) != Tok::End {
        return p.fail(&["`*`", "`(x)`", "`/eta^`", "end of input"]);
    }
    Ok(e)
}

fn is_atom(e: &FormExpr) -> bool {
    !matches!(e.kind, ExprKind::Mul(..) | ExprKind::Tensor(..) | ExprKind::EtaPow(..))
}

fn is_term(e: &FormExpr) -> bool {
    !matches!(e.kind, ExprKind::Mul(..) | ExprKind::Tensor(..))
}

fn wrap(e: &FormExpr, ok: bool) -> String {
    if ok {
        e.to_string()
    } else {
        format!("({e})")
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Atom(n, a) if a.is_empty() => write!(f, "{n}"),
            ExprKind::Atom(n, a) => {
                let s: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "{n}({})", s.join(","))
            }
            ExprKind::Mul(l, r) => write!(f, "{l} * {}", wrap(r, is_term(r))),
            ExprKind::Tensor(l, r) => write!(f, "{l} (x) {}", wrap(r, is_term(r))),
            ExprKind::EtaPow(e, p) if *p < 0 => write!(f, "{}/eta^{}", wrap(e, is_atom(e)), -p),
            ExprKind::EtaPow(e, p) => write!(f, "{}*eta^{p}", wrap(e, is_atom(e))),
            ExprKind::Sub(e, c) => write!(f, "sub({e}; {c})"),
            ExprKind::Pull(e, v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "pull({e}; {})", s.join(","))
            }
            ExprKind::QRescale(e, _) => write!(f, "q2({e})"),
        }
    }
}

/// Evaluator with a cache of shared subexpressions.
#[derive(Default)]
pub struct Evaluator {
    cache: HashMap<(String, i64), FourierSeries>,
}

const MAX_RETRIES: usize = 12;

impl Evaluator {
    pub fn new() -> Evaluator {
        Evaluator::default()
    }

    /// Evaluates to exactly precision `n24`.
    pub fn eval(&mut self, e: &FormExpr, n24: i64) -> Result<FourierSeries> {
        let key = (e.to_string(), n24);
        if let Some(s) = self.cache.get(&key) {
            return Ok(s.clone());
        }
        let mut req = n24;
        for _ in 0..MAX_RETRIES {
            let s = self.step(e, req)?;
            if s.prec >= n24 {
                let s = s.truncated(n24);
                self.cache.insert(key, s.clone());
                return Ok(s);
            }
            req += (n24 - s.prec).max(1);
        }
        Err(Error::Precision { need: n24, have: req })
    }

    fn step(&mut self, e: &FormExpr, n: i64) -> Result<FourierSeries> {
        match &e.kind {
            ExprKind::Atom(name, a) => atom(name, a, n),
            ExprKind::Mul(l, r) => {
                let (x, y) = (self.eval(l, n)?, self.eval(r, n)?);
                x.mul(&y)
            }
            ExprKind::Tensor(l, r) => {
                let (x, y) = (self.eval(l, n)?, self.eval(r, n)?);
                x.tensor(&y)
            }
            ExprKind::EtaPow(x, p) => self.eval(x, n + (-p).max(0))?.eta_quotient(*p),
            ExprKind::Sub(x, c) => {
                let s = self.eval(x, n)?;
                let r = s.shape.frame_rank();
                let a = QMat::identity(r).scale(&int(*c));
                let t = &s.shape.t * int(c * c);
                s.substitute(&a, s.shape.lattice.clone(), t)
            }
            ExprKind::Pull(x, v) => {
                let s = self.eval(x, n)?;
                let v: Vec<Rational> = v.iter().map(|c| int(*c)).collect();
                s.pullback_perp(&v)
            }
            ExprKind::QRescale(x, c) => self.eval(x, (n + c - 1) / c)?.q_rescale(*c),
        }
    }
}

fn atom(name: &str, a: &[i64], n: i64) -> Result<FourierSeries> {
    let u = |i: usize| a[i] as usize;
    match name {
        "theta" => forms::theta(n),
        "theta32" => forms::theta32(n),
        "eta" => forms::eta(n),
        "E" => forms::eisenstein(a[0], n),
        "thetaD" => forms::theta_d(u(0), n),
        "thetaD3" => forms::theta_d3(u(0), n),
        "thetaA" => forms::theta_a(u(0), n),
        "thetaA3" => forms::theta_a3(u(0), n),
        "thetaD4_2" => forms::theta_d4_2(n),
        "thetaD4_3" => forms::theta_d4_3(n),
        "thetaD2_1" => forms::theta_d2_1(n),
        "sigmaA2" => forms::sigma_a2(n),
        "quark" => forms::quark(a[0], a[1], n),
        "thetaE6" => forms::theta_e6(n),
        "latTheta" => forms::lat_theta(a[0], u(1), a.get(2).map_or(0, |i| *i as usize), n),
        _ => Err(Error::Parse { offset: 0, message: format!("unknown name `{name}`") }),
    }
}

pub fn eval_form(e: &FormExpr, n24: i64) -> Result<FourierSeries> {
    Evaluator::new().eval(e, n24)
}

/// Parses and evaluates.
pub fn eval_str(src: &str, n24: i64) -> Result<FourierSeries> {
    eval_form(&parse_form(src)?, n24)
}

/// Named forms with their defining expressions.
pub const REGISTRY: &[(&str, &str)] = &[
    ("theta", "theta"),
    ("theta32", "theta32"),
    ("eta", "eta"),
    ("E4", "E(4)"),
    ("E6", "E(6)"),
    ("thetaA1", "thetaA(1)"),
    ("thetaA2", "thetaA(2)"),
    ("thetaA4", "thetaA(4)"),
    ("thetaA6", "thetaA(6)"),
    ("thetaA2_3", "thetaA3(2)"),
    ("thetaD1", "thetaD(1)"),
    ("thetaD4", "thetaD(4)"),
    ("thetaD8", "thetaD(8)"),
    ("thetaD4_2", "thetaD4_2"),
    ("thetaD4_3", "thetaD4_3"),
    ("thetaD2_1", "thetaD2_1"),
    ("thetaD3_3", "thetaD3(3)"),
    ("theta4A1", "theta (x) theta (x) theta (x) theta"),
    ("sigmaA2", "sigmaA2"),
    ("quark11", "quark(1,1)"),
    ("quark12", "quark(1,2)"),
    ("quark23", "quark(2,3)"),
    ("thetaE6", "thetaE6"),
    ("thetaE8", "latTheta(2,8)"),
    ("kappa2A4", "(thetaA(4) (x) thetaA(4))/eta^1"),
    ("kappaA4A6", "(thetaA(4) (x) thetaA(6))/eta^1"),
    ("deltain", "theta*eta^9"),
    ("k4in", "(theta (x) theta)*eta^6"),
    ("lift3A1in", "(theta (x) theta (x) theta)*eta^3"),
    ("delta1in", "theta*eta^1"),
    ("nabla3in", "theta*eta^1 * q2(eta*eta^3)"),
];

/// Singular-weight forms with trivial character on lattices of rank at most 12.
pub const SINGULAR_CORPUS: &[(&str, &str)] = &[
    ("3A2", "sigmaA2 (x) sigmaA2 (x) sigmaA2"),
    ("D8", "thetaD(8)"),
    ("2D4", "thetaD(4) (x) thetaD(4)"),
    ("8A1", "thetaD2_1 (x) thetaD2_1 (x) thetaD2_1 (x) thetaD2_1"),
    ("D7+D3(3)", "thetaD(7) (x) thetaD3(3)"),
    ("A2+D4+D4(3)", "sigmaA2 (x) thetaD(4) (x) thetaD3(4)"),
    ("D6+D6(3)", "thetaD(6) (x) thetaD3(6)"),
    ("2A2+D8(3)", "sigmaA2 (x) sigmaA2 (x) thetaD3(8)"),
    ("6A2", "sigmaA2 (x) sigmaA2 (x) sigmaA2 (x) sigmaA2 (x) sigmaA2 (x) sigmaA2"),
];

pub fn registry_expr(name: &str) -> Option<&'static str> {
    REGISTRY.iter().chain(SINGULAR_CORPUS).find(|(n, _)| *n == name).map(|(_, e)| *e)
}
