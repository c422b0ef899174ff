// SPDX-License-Identifier: Apache-2.0
//! Bracket-expression syntax: lexer, AST, parser and printer.

use std::fmt;
use std::sync::Arc;

use super::algebra::{FreeLie, LieElement};
use crate::rat::Rat;

/// Byte range into the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span { start: self.start.min(other.start), end: self.end.max(other.end) }
    }

    /// 1-based line and column (in chars) of the start.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        let upto = &src[..self.start.min(src.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
        (line, col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic { span, severity: Severity::Error, message: message.into() }
    }

    pub fn warning(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic { span, severity: Severity::Warning, message: message.into() }
    }

    /// `line:col: severity: message`
    pub fn render(&self, src: &str) -> String {
        let (l, c) = self.span.line_col(src);
        format!("{l}:{c}: {}: {}", self.severity, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(Rat),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(r) => write!(f, "`{r}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const PUNCTS: [&str; 17] = ["->", "..", "~", "{", "}", "[", "]", "(", ")", ",", ":", "=", "+", "-", "*", "^", ";"];

/// Tokenize; `#` starts a line comment. Bad characters become diagnostics and are skipped.
pub fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut toks = Vec::new();
    let mut diags = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().expect("in bounds");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c == '#' {
            while i < src.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < src.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            toks.push(Token { tok: Tok::Ident(src[start..i].to_string()), span: Span::new(start, i) });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < src.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < src.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < src.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let span = Span::new(start, i);
            match src[start..i].parse::<Rat>() {
                Ok(r) => toks.push(Token { tok: Tok::Number(r), span }),
                Err(_) => diags.push(Diagnostic::error(span, format!("invalid rational `{}`", &src[start..i]))),
            }
            continue;
        }
        if let Some(p) = PUNCTS.iter().find(|p| src[i..].starts_with(**p)) {
            toks.push(Token { tok: Tok::Punct(p), span: Span::new(i, i + p.len()) });
            i += p.len();
            continue;
        }
        let span = Span::new(i, i + c.len_utf8());
        diags.push(Diagnostic::error(span, format!("unexpected character `{c}`")));
        i += c.len_utf8();
    }
    toks.push(Token { tok: Tok::Eof, span: Span::new(src.len(), src.len()) });
    (toks, diags)
}

/// Polynomial-form monomials `t^k` and `t^k dt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub t_power: u32,
    pub dt: bool,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.t_power, self.dt) {
            (0, false) => f.write_str("1"),
            (0, true) => f.write_str("dt"),
            (1, d) => write!(f, "t{}", if d { " * dt" } else { "" }),
            (k, d) => write!(f, "t^{k}{}", if d { " * dt" } else { "" }),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Number(Rat),
    Ident(String),
    Bracket(Box<Expr>, Box<Expr>),
    Scale(Rat, Box<Expr>),
    Sum(Vec<Expr>),
    Call(String, Vec<Expr>),
    /// Form-valued coefficient: `t^k * e` or `dt * e`.
    Form(Monomial, Box<Expr>),
}

/// Expression node; equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for ExprKind {
    fn eq(&self, other: &ExprKind) -> bool {
        use ExprKind::*;
        match (self, other) {
            (Number(a), Number(b)) => a == b,
            (Ident(a), Ident(b)) => a == b,
            (Bracket(a, b), Bracket(c, d)) => a == c && b == d,
            (Scale(a, x), Scale(b, y)) => a == b && x == y,
            (Sum(a), Sum(b)) => a == b,
            (Call(f, a), Call(g, b)) => f == g && a == b,
            (Form(m, x), Form(n, y)) => m == n && x == y,
            _ => false,
        }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

pub const RESERVED: [&str; 4] = ["t", "dt", "exp_ad", "exp_tad"];

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    /// Generator or reference names used, in order of appearance.
    pub fn idents(&self) -> Vec<(String, Span)> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let ExprKind::Ident(n) = &e.kind {
                out.push((n.clone(), e.span));
            }
        });
        out
    }

    pub fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match &self.kind {
            ExprKind::Number(_) | ExprKind::Ident(_) => {}
            ExprKind::Bracket(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            ExprKind::Scale(_, x) | ExprKind::Form(_, x) => x.walk(f),
            ExprKind::Sum(xs) | ExprKind::Call(_, xs) => xs.iter().for_each(|x| x.walk(f)),
        }
    }

    pub fn uses_forms(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if matches!(&e.kind, ExprKind::Form(..)) || matches!(&e.kind, ExprKind::Call(n, _) if n == "exp_tad") {
                found = true;
            }
        });
        found
    }

    /// Evaluate a plain Lie expression (no forms) in `ctx`, where identifiers are generators.
    pub fn eval_lie(&self, ctx: &Arc<FreeLie>) -> Result<LieElement, Diagnostic> {
        Ok(match &self.kind {
            ExprKind::Number(r) if r.is_zero() => LieElement::zero(ctx),
            ExprKind::Number(_) => return Err(Diagnostic::error(self.span, "a nonzero scalar is not a Lie element")),
            ExprKind::Ident(n) => LieElement::named(ctx, n)
                .map_err(|_| Diagnostic::error(self.span, format!("unknown generator {n}")))?,
            ExprKind::Bracket(a, b) => a.eval_lie(ctx)?.bracket(&b.eval_lie(ctx)?),
            ExprKind::Scale(c, x) => x.eval_lie(ctx)?.scale(c),
            ExprKind::Sum(xs) => {
                let mut acc = LieElement::zero(ctx);
                for x in xs {
                    acc = acc.add(&x.eval_lie(ctx)?);
                }
                acc
            }
            ExprKind::Call(name, args) if name == "exp_ad" => {
                if args.len() != 2 {
                    return Err(Diagnostic::error(self.span, "exp_ad takes two arguments"));
                }
                let x = args[0].eval_lie(ctx)?;
                let y = args[1].eval_lie(ctx)?;
                if !x.is_of_degree(0) {
                    return Err(Diagnostic::error(args[0].span, "exp_ad needs a degree-0 element"));
                }
                let mut acc = y.clone();
                let mut term = y;
                for k in 1..=ctx.cap() {
                    term = x.bracket(&term).scale(&Rat::new(1, k as i64));
                    if term.is_zero() {
                        break;
                    }
                    acc = acc.add(&term);
                }
                acc
            }
            ExprKind::Call(name, _) => return Err(Diagnostic::error(self.span, format!("`{name}` is not available here"))),
            ExprKind::Form(..) => return Err(Diagnostic::error(self.span, "polynomial forms are only allowed in homotopy blocks")),
        })
    }
}

/// Recursive-descent parser over a token slice; shared with the model parser.
pub struct ExprParser<'a> {
    toks: &'a [Token],
    pub pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> ExprParser<'a> {
    pub fn new(toks: &'a [Token], pos: usize) -> ExprParser<'a> {
        ExprParser { toks, pos }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)]
    }

    pub fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    /// Steps back so that no token at or after byte `offset` has been consumed.
    pub fn rewind_to(&mut self, offset: usize) {
        while self.pos > 0 && self.toks[self.pos - 1].span.start >= offset {
            self.pos -= 1;
        }
    }

    pub fn is_punct(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    pub fn eat(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, p: &str) -> PResult<Span> {
        if self.is_punct(p) {
            Ok(self.bump().span)
        } else {
            let t = self.peek();
            Err(Diagnostic::error(t.span, format!("expected `{p}`, found {}", t.tok)))
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        let first = self.term()?;
        let mut items = vec![first];
        loop {
            if self.is_punct("+") {
                self.bump();
                items.push(self.term()?);
            } else if self.is_punct("-") {
                let s = self.bump().span;
                let t = self.term()?;
                items.push(negate(t, s));
            } else {
                break;
            }
        }
        if items.len() == 1 {
            return Ok(items.pop().expect("one item"));
        }
        let span = items[0].span.join(items[items.len() - 1].span);
        Ok(Expr::new(ExprKind::Sum(items), span))
    }

    fn term(&mut self) -> PResult<Expr> {
        if self.is_punct("-") {
            let s = self.bump().span;
            let t = self.term()?;
            return Ok(negate(t, s));
        }
        if let Tok::Number(r) = &self.peek().tok {
            let r = r.clone();
            let s = self.bump().span;
            if self.eat("*") {
                let t = self.term()?;
                let span = s.join(t.span);
                return Ok(Expr::new(ExprKind::Scale(r, Box::new(t)), span));
            }
            return Ok(Expr::new(ExprKind::Number(r), s));
        }
        self.atom()
    }

    fn monomial(&mut self) -> PResult<Option<(Monomial, Span)>> {
        let Tok::Ident(name) = &self.peek().tok else { return Ok(None) };
        match name.as_str() {
            "dt" => Ok(Some((Monomial { t_power: 0, dt: true }, self.bump().span))),
            "t" => {
                let s = self.bump().span;
                if self.eat("^") {
                    let t = self.bump();
                    match &t.tok {
                        Tok::Number(r) if r.is_integer() && !r.is_negative() => {
                            let k: u32 = r.to_string().parse().map_err(|_| Diagnostic::error(t.span, "exponent too large"))?;
                            Ok(Some((Monomial { t_power: k, dt: false }, s.join(t.span))))
                        }
                        _ => Err(Diagnostic::error(t.span, "expected a nonnegative integer exponent")),
                    }
                } else {
                    Ok(Some((Monomial { t_power: 1, dt: false }, s)))
                }
            }
            _ => Ok(None),
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        if let Some((mut m, s)) = self.monomial()? {
            self.expect("*")?;
            // `t^k * dt * e`
            if m.t_power > 0 && !m.dt && matches!(&self.peek().tok, Tok::Ident(n) if n == "dt") {
                self.bump();
                self.expect("*")?;
                m.dt = true;
            }
            let t = self.term()?;
            let span = s.join(t.span);
            return Ok(Expr::new(ExprKind::Form(m, Box::new(t)), span));
        }
        let t = self.bump();
        match t.tok {
            Tok::Ident(name) => {
                if self.is_punct("(") && (name == "exp_ad" || name == "exp_tad") {
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while self.eat(",") {
                        args.push(self.expr()?);
                    }
                    let end = self.expect(")")?;
                    return Ok(Expr::new(ExprKind::Call(name, args), t.span.join(end)));
                }
                if RESERVED.contains(&name.as_str()) {
                    return Err(Diagnostic::error(t.span, format!("`{name}` is reserved")));
                }
                Ok(Expr::new(ExprKind::Ident(name), t.span))
            }
            Tok::Punct("[") => {
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                let end = self.expect("]")?;
                Ok(Expr::new(ExprKind::Bracket(Box::new(a), Box::new(b)), t.span.join(end)))
            }
            Tok::Punct("(") => {
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            other => Err(Diagnostic::error(t.span, format!("expected an expression, found {other}"))),
        }
    }
}

fn negate(t: Expr, minus: Span) -> Expr {
    let span = minus.join(t.span);
    let kind = match t.kind {
        ExprKind::Number(r) => ExprKind::Number(-r),
        ExprKind::Scale(r, x) => ExprKind::Scale(-r, x),
        k => ExprKind::Scale(Rat::from_int(-1), Box::new(Expr::new(k, t.span))),
    };
    Expr::new(kind, span)
}

/// Parse a standalone expression.
pub fn parse_expr(src: &str) -> Result<Expr, Vec<Diagnostic>> {
    let (toks, mut diags) = lex(src);
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut p = ExprParser::new(&toks, 0);
    match p.expr() {
        Ok(e) => {
            if p.peek().tok != Tok::Eof {
                let t = p.peek();
                diags.push(Diagnostic::error(t.span, format!("unexpected {} after expression", t.tok)));
                return Err(diags);
            }
            Ok(e)
        }
        Err(d) => Err(vec![d]),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self, true))
    }
}

fn print(e: &Expr, first: bool) -> String {
    match &e.kind {
        ExprKind::Number(r) if !first && r.is_negative() => format!("- {}", r.abs()),
        ExprKind::Number(r) => r.to_string(),
        ExprKind::Ident(n) => n.clone(),
        ExprKind::Bracket(a, b) => format!("[{},{}]", print(a, true), print(b, true)),
        ExprKind::Scale(c, x) => {
            let inner = match &x.kind {
                ExprKind::Sum(_) => format!("({})", print(x, true)),
                _ => print(x, true),
            };
            if c == &Rat::from_int(-1) && !matches!(x.kind, ExprKind::Number(_) | ExprKind::Scale(..)) {
                if first {
                    format!("-{inner}")
                } else {
                    format!("- {inner}")
                }
            } else if first || !c.is_negative() {
                format!("{c} * {inner}")
            } else {
                format!("- {} * {inner}", c.abs())
            }
        }
        ExprKind::Sum(xs) => {
            let mut s = String::new();
            for (i, x) in xs.iter().enumerate() {
                let part = match &x.kind {
                    ExprKind::Sum(_) => format!("({})", print(x, true)),
                    _ => print(x, i == 0),
                };
                if i == 0 {
                    s.push_str(&part);
                } else if part.starts_with("- ") {
                    s.push(' ');
                    s.push_str(&part);
                } else {
                    s.push_str(" + ");
                    s.push_str(&part);
                }
            }
            s
        }
        ExprKind::Call(name, args) => {
            let a: Vec<String> = args.iter().map(|a| print(a, true)).collect();
            format!("{name}({})", a.join(", "))
        }
        ExprKind::Form(m, x) => {
            let inner = match &x.kind {
                ExprKind::Sum(_) => format!("({})", print(x, true)),
                _ => print(x, true),
            };
            format!("{m} * {inner}")
        }
    }
}

/// Pretty-print an expression in canonical form.
pub fn print_expr(e: &Expr) -> String {
    print(e, true)
}
