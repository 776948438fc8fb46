//! Closed-form integer expressions for segment values.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | primary ('^' factor)?
//! primary:= INT | VAR | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than `*`. A `-` directly in
//! front of an integer literal (not followed by `^`) is folded into a
//! negative literal, so `-3` parses as `Int(-3)` while `-x` and `-2^x`
//! parse as negations.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// A variable of a segment expression: one index `i<k>` or the component
/// index `t` of an ω-family template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Index(usize),
    Component,
}

impl Var {
    pub fn parse(name: &str) -> Option<Var> {
        if name == "t" {
            return Some(Var::Component);
        }
        let digits = name.strip_prefix('i')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        // reject "i01" so that names round-trip
        if digits.len() > 1 && digits.starts_with('0') {
            return None;
        }
        digits.parse().ok().map(Var::Index)
    }

    pub fn name(&self) -> String {
        match self {
            Var::Index(k) => format!("i{k}"),
            Var::Component => "t".to_string(),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Index(k) => write!(f, "i{k}"),
            Var::Component => f.write_str("t"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SegmentExpr {
    Int(i128),
    Var(Var),
    Add(Box<SegmentExpr>, Box<SegmentExpr>),
    Sub(Box<SegmentExpr>, Box<SegmentExpr>),
    Mul(Box<SegmentExpr>, Box<SegmentExpr>),
    Neg(Box<SegmentExpr>),
    Pow(Box<SegmentExpr>, Box<SegmentExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared variable `{name}` at offset {pos}")]
    UndeclaredVariable { name: String, pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("negative exponent {0}")]
    NegativeExponent(i128),
    #[error("arithmetic overflow")]
    ArithmeticOverflow,
    #[error("variable `{0}` is not bound")]
    Unbound(String),
    #[error("index {index} lies outside the table (length {len})")]
    OutsideTable { index: i64, len: usize },
    #[error("inner value {0} falls outside the outer index domain")]
    OutsideDomain(i128),
}

/// Positional bindings: the component index and the index tuple.
#[derive(Debug, Clone, Copy)]
pub struct Env<'a> {
    pub component: i64,
    pub indices: &'a [i64],
}

impl SegmentExpr {
    pub fn int(v: i128) -> Self {
        SegmentExpr::Int(v)
    }

    pub fn var(k: usize) -> Self {
        SegmentExpr::Var(Var::Index(k))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(l: SegmentExpr, r: SegmentExpr) -> Self {
        SegmentExpr::Add(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(l: SegmentExpr, r: SegmentExpr) -> Self {
        SegmentExpr::Sub(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(l: SegmentExpr, r: SegmentExpr) -> Self {
        SegmentExpr::Mul(Box::new(l), Box::new(r))
    }

    pub fn pow(b: SegmentExpr, e: SegmentExpr) -> Self {
        SegmentExpr::Pow(Box::new(b), Box::new(e))
    }

    /// Negation that cancels double negation and folds literals.
    pub fn negate(e: SegmentExpr) -> Self {
        match e {
            SegmentExpr::Neg(inner) => *inner,
            SegmentExpr::Int(v) if v != i128::MIN => SegmentExpr::Int(-v),
            other => SegmentExpr::Neg(Box::new(other)),
        }
    }

    pub fn eval(&self, env: Env<'_>) -> Result<i128, EvalError> {
        use SegmentExpr::*;
        match self {
            Int(v) => Ok(*v),
            Var(crate::expr::Var::Component) => Ok(env.component as i128),
            Var(crate::expr::Var::Index(k)) => env
                .indices
                .get(*k)
                .map(|&v| v as i128)
                .ok_or_else(|| EvalError::Unbound(format!("i{k}"))),
            Add(l, r) => l
                .eval(env)?
                .checked_add(r.eval(env)?)
                .ok_or(EvalError::ArithmeticOverflow),
            Sub(l, r) => l
                .eval(env)?
                .checked_sub(r.eval(env)?)
                .ok_or(EvalError::ArithmeticOverflow),
            Mul(l, r) => {
                let a = l.eval(env)?;
                if a == 0 {
                    // still evaluate the right side so errors are not masked
                    r.eval(env)?;
                    return Ok(0);
                }
                a.checked_mul(r.eval(env)?).ok_or(EvalError::ArithmeticOverflow)
            }
            Neg(e) => e.eval(env)?.checked_neg().ok_or(EvalError::ArithmeticOverflow),
            Pow(b, e) => int_pow(b.eval(env)?, e.eval(env)?),
        }
    }

    /// Evaluates against named bindings (`i0`, `i1`, ..., `t`).
    pub fn eval_with(&self, bindings: &HashMap<String, i128>) -> Result<i128, EvalError> {
        let subst = self.substitute(&|v| bindings.get(&v.name()).map(|&x| SegmentExpr::Int(x)));
        if let Some(v) = subst.vars().into_iter().next() {
            return Err(EvalError::Unbound(v.name()));
        }
        subst.eval(Env { component: 0, indices: &[] })
    }

    /// Replaces every variable `v` for which `f(v)` is `Some`.
    pub fn substitute(&self, f: &dyn Fn(Var) -> Option<SegmentExpr>) -> SegmentExpr {
        use SegmentExpr::*;
        match self {
            Int(v) => Int(*v),
            Var(v) => f(*v).unwrap_or(Var(*v)),
            Add(l, r) => SegmentExpr::add(l.substitute(f), r.substitute(f)),
            Sub(l, r) => SegmentExpr::sub(l.substitute(f), r.substitute(f)),
            Mul(l, r) => SegmentExpr::mul(l.substitute(f), r.substitute(f)),
            Neg(e) => SegmentExpr::negate(e.substitute(f)),
            Pow(b, e) => SegmentExpr::pow(b.substitute(f), e.substitute(f)),
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        use SegmentExpr::*;
        match self {
            Int(_) => {}
            Var(v) => out.push(*v),
            Add(l, r) | Sub(l, r) | Mul(l, r) | Pow(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Neg(e) => e.collect_vars(out),
        }
    }

    fn precedence(&self) -> u8 {
        use SegmentExpr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) => 2,
            Neg(_) => 3,
            Int(v) if *v < 0 => 3,
            Pow(..) => 4,
            Int(_) | Var(_) => 5,
        }
    }

    fn render(&self, min: u8, out: &mut String) {
        use SegmentExpr::*;
        let paren = self.precedence() < min;
        if paren {
            out.push('(');
        }
        match self {
            Int(v) => out.push_str(&v.to_string()),
            Var(v) => out.push_str(&v.name()),
            Add(l, r) => {
                l.render(1, out);
                out.push_str(" + ");
                r.render(2, out);
            }
            Sub(l, r) => {
                l.render(1, out);
                out.push_str(" - ");
                r.render(2, out);
            }
            Mul(l, r) => {
                l.render(2, out);
                out.push('*');
                r.render(3, out);
            }
            Neg(e) => {
                out.push('-');
                if matches!(**e, Int(v) if v >= 0) {
                    // "-3" would reparse as a negative literal
                    out.push('(');
                    e.render(0, out);
                    out.push(')');
                } else {
                    e.render(3, out);
                }
            }
            Pow(b, e) => {
                b.render(5, out);
                out.push('^');
                e.render(3, out);
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for SegmentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        f.write_str(&s)
    }
}

fn int_pow(base: i128, exp: i128) -> Result<i128, EvalError> {
    if exp < 0 {
        return Err(EvalError::NegativeExponent(exp));
    }
    match base {
        0 => return Ok(if exp == 0 { 1 } else { 0 }),
        1 => return Ok(1),
        -1 => return Ok(if exp % 2 == 0 { 1 } else { -1 }),
        _ => {}
    }
    let exp = u32::try_from(exp).map_err(|_| EvalError::ArithmeticOverflow)?;
    base.checked_pow(exp).ok_or(EvalError::ArithmeticOverflow)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => toks.push((Tok::Plus, start)),
            b'-' => toks.push((Tok::Minus, start)),
            b'*' => toks.push((Tok::Star, start)),
            b'^' => toks.push((Tok::Caret, start)),
            b'(' => toks.push((Tok::LParen, start)),
            b')' => toks.push((Tok::RParen, start)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let v = lit.parse::<i128>().map_err(|_| ExprError::Syntax {
                    pos: start,
                    msg: format!("integer literal `{lit}` out of range"),
                })?;
                toks.push((Tok::Int(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        }
        i += 1;
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    allowed: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.pos + ahead).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<SegmentExpr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = SegmentExpr::add(lhs, self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = SegmentExpr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<SegmentExpr, ExprError> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            lhs = SegmentExpr::mul(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<SegmentExpr, ExprError> {
        if let Some(Tok::Minus) = self.peek() {
            if let Some(Tok::Int(v)) = self.peek_at(1) {
                if self.peek_at(2) != Some(&Tok::Caret) {
                    let v = *v;
                    self.pos += 2;
                    return Ok(SegmentExpr::Int(-v));
                }
            }
            self.pos += 1;
            return Ok(SegmentExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let exp = self.factor()?;
            return Ok(SegmentExpr::pow(base, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<SegmentExpr, ExprError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(SegmentExpr::Int(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if !self.allowed.contains(&name.as_str()) {
                    return Err(ExprError::UndeclaredVariable { name, pos: at });
                }
                match Var::parse(&name) {
                    Some(v) => Ok(SegmentExpr::Var(v)),
                    None => Err(ExprError::UndeclaredVariable { name, pos: at }),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => self.error(format!("unexpected token {t:?}")),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses `text`, accepting only the variable names in `allowed_vars`.
pub fn parse_expr(text: &str, allowed_vars: &[&str]) -> Result<SegmentExpr, ExprError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ExprError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), allowed: allowed_vars };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.error("trailing input");
    }
    Ok(e)
}

/// Names `i0 .. i{arity-1}`, plus `t` when `with_component` is set.
pub fn index_var_names(arity: usize, with_component: bool) -> Vec<String> {
    let mut names: Vec<String> = (0..arity).map(|k| format!("i{k}")).collect();
    if with_component {
        names.push("t".into());
    }
    names
}

pub fn eval_expr(e: &SegmentExpr, bindings: &HashMap<String, i128>) -> Result<i128, EvalError> {
    e.eval_with(bindings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str) -> SegmentExpr {
        parse_expr(text, &["i0", "i1", "i2", "t"]).unwrap()
    }

    fn at(e: &SegmentExpr, idx: &[i64]) -> Result<i128, EvalError> {
        e.eval(Env { component: 0, indices: idx })
    }

    #[test]
    fn parses_three_ladder_formula() {
        use SegmentExpr as E;
        let e = parse_expr("3*i1 + i0 + 1", &["i0", "i1"]).unwrap();
        let want = E::add(E::add(E::mul(E::int(3), E::var(1)), E::var(0)), E::int(1));
        assert_eq!(e, want);
        assert_eq!(at(&e, &[0, 2]), Ok(7));
        assert_eq!(at(&e, &[1, 3]), Ok(11));
        assert_eq!(at(&e, &[2, 4]), Ok(15));
    }

    #[test]
    fn parses_power() {
        let e = parse_expr("2^i0", &["i0"]).unwrap();
        assert_eq!(e, SegmentExpr::pow(SegmentExpr::int(2), SegmentExpr::var(0)));
        assert_eq!(parse_expr("i0", &["i0"]).unwrap(), SegmentExpr::var(0));
    }

    #[test]
    fn power_is_right_associative_and_tighter_than_mul() {
        let e = p("2^3^2");
        assert_eq!(at(&e, &[]), Ok(512));
        assert_eq!(at(&p("2*3^2"), &[]), Ok(18));
        assert_eq!(at(&p("-2^2"), &[]), Ok(-4));
        assert_eq!(at(&p("(-2)^2"), &[]), Ok(4));
        assert_eq!(p("-3"), SegmentExpr::Int(-3));
        assert_eq!(p("-i0"), SegmentExpr::Neg(Box::new(SegmentExpr::var(0))));
    }

    #[test]
    fn sharkovskii_snake_value() {
        let e = p("(-2*i1+1)*2^(-1-i0)");
        assert_eq!(at(&e, &[-3, -4]), Ok(36));
        assert_eq!(at(&e, &[-1, -1]), Ok(3));
        assert_eq!(at(&e, &[-2, -3]), Ok(14));
        assert_eq!(at(&e, &[0, 0]), Err(EvalError::NegativeExponent(-1)));
    }

    #[test]
    fn named_bindings() {
        let e = p("i0");
        let b: HashMap<String, i128> = [("i0".to_string(), 5)].into();
        assert_eq!(eval_expr(&e, &b), Ok(5));
        let e = p("i0 + i1");
        assert_eq!(eval_expr(&e, &b), Err(EvalError::Unbound("i1".into())));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("", &["i0"]), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expr("i0 +", &["i0"]), Err(ExprError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_expr("(i0", &["i0"]), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expr("i0 i0", &["i0"]), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expr("3 / 2", &[]), Err(ExprError::Syntax { pos: 2, .. })));
        assert_eq!(
            parse_expr("i0 + i1", &["i0"]),
            Err(ExprError::UndeclaredVariable { name: "i1".into(), pos: 5 })
        );
        assert!(matches!(parse_expr("x", &["x"]), Err(ExprError::UndeclaredVariable { .. })));
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(at(&p("2^200"), &[]), Err(EvalError::ArithmeticOverflow));
        assert_eq!(at(&p("3^i0"), &[100]), Err(EvalError::ArithmeticOverflow));
        assert_eq!(at(&p("0^i0"), &[0]), Ok(1));
        assert_eq!(at(&p("0^i0"), &[7]), Ok(0));
        assert_eq!(at(&p("(-1)^i0"), &[1 << 40]), Ok(1));
        assert_eq!(
            at(&p("170141183460469231731687303715884105727 + 1"), &[]),
            Err(EvalError::ArithmeticOverflow)
        );
    }

    #[test]
    fn render_examples() {
        assert_eq!(p("3*i1 + i0 + 1").to_string(), "3*i1 + i0 + 1");
        assert_eq!(p("(-2*i1+1)*2^(-1-i0)").to_string(), "(-2*i1 + 1)*2^(-1 - i0)");
        assert_eq!(p("i0 - (i1 - 1)").to_string(), "i0 - (i1 - 1)");
        assert_eq!(p("-(3)").to_string(), "-(3)");
        assert_eq!(p("(-1)^i0").to_string(), "(-1)^i0");
    }

    #[test]
    fn negate_cancels() {
        let e = p("i0");
        let twice = e
            .substitute(&|v| Some(SegmentExpr::negate(SegmentExpr::Var(v))))
            .substitute(&|v| Some(SegmentExpr::negate(SegmentExpr::Var(v))));
        assert_eq!(twice, e);
    }

    fn arb_expr() -> impl Strategy<Value = SegmentExpr> {
        let leaf = prop_oneof![
            (-20i128..20).prop_map(SegmentExpr::Int),
            (0usize..3).prop_map(SegmentExpr::var),
            Just(SegmentExpr::Var(Var::Component)),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| SegmentExpr::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| SegmentExpr::sub(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| SegmentExpr::mul(a, b)),
                inner.clone().prop_map(|a| SegmentExpr::Neg(Box::new(a))),
                (inner.clone(), inner).prop_map(|(a, b)| SegmentExpr::pow(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_reparses_identically(e in arb_expr()) {
            let text = e.to_string();
            let back = parse_expr(&text, &["i0", "i1", "i2", "t"]).unwrap();
            prop_assert_eq!(back, e);
        }

        #[test]
        fn eval_respects_substitution(e in arb_expr(), a in -6i64..6, b in -6i64..6, c in -6i64..6, t in 0i64..5) {
            let idx = [a, b, c];
            let direct = e.eval(Env { component: t, indices: &idx });
            let closed = e.substitute(&|v| Some(SegmentExpr::Int(match v {
                Var::Index(k) => idx[k] as i128,
                Var::Component => t as i128,
            })));
            prop_assert!(closed.vars().is_empty());
            prop_assert_eq!(closed.eval(Env { component: 0, indices: &[] }), direct);
        }
    }
}
