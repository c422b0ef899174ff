// SPDX-License-Identifier: Apache-2.0
//! Model-file parser with error recovery.

use super::ast::*;
use crate::freelie::expr::{lex, Diagnostic, ExprParser, Tok};
use crate::freelie::Span;

pub const ITEM_KEYWORDS: [&str; 4] = ["model", "morphism", "homotopy", "truncate"];
pub const STMT_KEYWORDS: [&str; 6] = ["gen", "d", "mc", "filtration", "derivation", "truncate"];

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'a> {
    p: ExprParser<'a>,
    diags: Vec<Diagnostic>,
}

impl Parser<'_> {
    fn ident(&mut self, what: &str) -> PResult<Ident> {
        let t = self.p.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.p.bump();
                Ok(Ident { name, span: t.span })
            }
            other => Err(Diagnostic::error(t.span, format!("expected {what}, found {other}"))),
        }
    }

    fn keyword_is(&self, k: usize, word: &str) -> bool {
        matches!(&self.p.peek_at(k).tok, Tok::Ident(n) if n == word)
    }

    fn int(&mut self) -> PResult<Int> {
        let neg = if self.p.is_punct("-") { Some(self.p.bump().span) } else { None };
        let t = self.p.bump();
        match &t.tok {
            Tok::Number(r) if r.is_integer() => {
                let v: i64 = r.to_string().parse().map_err(|_| Diagnostic::error(t.span, "integer out of range"))?;
                let span = neg.map_or(t.span, |s| s.join(t.span));
                Ok(Int { value: if neg.is_some() { -v } else { v }, span })
            }
            other => Err(Diagnostic::error(t.span, format!("expected an integer, found {other}"))),
        }
    }

    fn at_item_start(&self) -> bool {
        ITEM_KEYWORDS.iter().any(|k| self.keyword_is(0, k)) && matches!(self.p.peek_at(1).tok, Tok::Ident(_) | Tok::Number(_))
    }

    fn at_stmt_start(&self) -> bool {
        if self.keyword_is(0, "d") {
            return matches!(self.p.peek_at(1).tok, Tok::Ident(_)) && matches!(self.p.peek_at(2).tok, Tok::Punct("="));
        }
        STMT_KEYWORDS.iter().any(|k| self.keyword_is(0, k)) && matches!(self.p.peek_at(1).tok, Tok::Ident(_) | Tok::Number(_))
    }

    /// Skips to the next plausible start at the current brace depth; `inside` stops at `}` too.
    fn recover(&mut self, inside: bool, at: Span) {
        if inside {
            self.p.rewind_to(at.start);
        }
        let mut depth = 0usize;
        loop {
            match &self.p.peek().tok {
                Tok::Eof => return,
                Tok::Punct("{") => depth += 1,
                Tok::Punct("}") if depth == 0 => {
                    if inside {
                        return;
                    }
                }
                Tok::Punct("}") => depth -= 1,
                _ if depth == 0 && inside && self.at_stmt_start() => return,
                _ if depth == 0 && !inside && self.at_item_start() => return,
                _ => {}
            }
            self.p.bump();
        }
    }

    fn model_ref(&mut self) -> PResult<ModelRef> {
        let name = self.ident("a model name")?;
        if !self.p.eat("(") {
            return Ok(ModelRef::Named(name));
        }
        let mut params = Vec::new();
        if !self.p.is_punct(")") {
            params.push(self.int()?);
            while self.p.eat(",") {
                params.push(self.int()?);
            }
        }
        self.p.expect(")")?;
        Ok(ModelRef::Builtin { name, params })
    }

    fn assignments(&mut self) -> PResult<Vec<Assignment>> {
        self.p.expect("{")?;
        let mut out = Vec::new();
        while !self.p.is_punct("}") {
            if matches!(self.p.peek().tok, Tok::Eof) {
                let t = self.p.peek();
                return Err(Diagnostic::error(t.span, "unclosed `{`"));
            }
            let target = self.ident("a generator name")?;
            self.p.expect("->")?;
            let value = self.p.expr()?;
            out.push(Assignment { target, value });
            let _ = self.p.eat(";") || self.p.eat(",");
        }
        self.p.bump();
        Ok(out)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let kw = self.ident("a statement")?;
        match kw.name.as_str() {
            "truncate" => Ok(Stmt::Truncate(self.int()?)),
            "gen" => {
                let mut names = vec![self.ident("a generator name")?];
                while self.p.eat(",") {
                    names.push(self.ident("a generator name")?);
                }
                self.p.expect(":")?;
                Ok(Stmt::Gen { names, degree: self.int()? })
            }
            "d" => {
                let generator = self.ident("a generator name")?;
                self.p.expect("=")?;
                Ok(Stmt::D { generator, value: self.p.expr()? })
            }
            "mc" => {
                let name = self.ident("a name")?;
                self.p.expect("=")?;
                Ok(Stmt::Mc { name, value: self.p.expr()? })
            }
            "filtration" => {
                let name = self.ident("a filtration name")?;
                let mut levels = Vec::new();
                while self.p.is_punct("{") {
                    self.p.bump();
                    let mut level = Vec::new();
                    while !self.p.eat("}") {
                        level.push(self.ident("a generator name")?);
                        let _ = self.p.eat(",");
                    }
                    levels.push(level);
                }
                if levels.is_empty() {
                    let t = self.p.peek();
                    return Err(Diagnostic::error(t.span, format!("expected `{{`, found {}", t.tok)));
                }
                Ok(Stmt::Filtration { name, levels })
            }
            "derivation" => {
                let name = self.ident("a derivation name")?;
                Ok(Stmt::Derivation { name, values: self.assignments()? })
            }
            other => Err(Diagnostic::error(kw.span, format!("unknown statement `{other}`"))),
        }
    }

    fn model(&mut self) -> PResult<ModelDecl> {
        let name = self.ident("a model name")?;
        if self.p.eat("=") {
            return Ok(ModelDecl { name, body: ModelBody::Alias(self.model_ref()?) });
        }
        let open = self.p.expect("{")?;
        let mut stmts = Vec::new();
        loop {
            match &self.p.peek().tok {
                Tok::Punct("}") => {
                    self.p.bump();
                    break;
                }
                Tok::Eof => {
                    self.diags.push(Diagnostic::error(open, format!("unclosed block of model {}", name.name)));
                    break;
                }
                _ => match self.stmt() {
                    Ok(s) => stmts.push(s),
                    Err(d) => {
                        let at = d.span;
                        self.diags.push(d);
                        self.recover(true, at);
                    }
                },
            }
        }
        Ok(ModelDecl { name, body: ModelBody::Block(stmts) })
    }

    fn item(&mut self) -> PResult<Item> {
        let kw = self.ident("`model`, `morphism`, `homotopy` or `truncate`")?;
        match kw.name.as_str() {
            "truncate" => Ok(Item::Truncate(self.int()?)),
            "model" => Ok(Item::Model(self.model()?)),
            "morphism" => {
                let name = self.ident("a morphism name")?;
                self.p.expect(":")?;
                let source = self.model_ref()?;
                self.p.expect("->")?;
                let target = self.model_ref()?;
                Ok(Item::Morphism(MorphismDecl { name, source, target, images: self.assignments()? }))
            }
            "homotopy" => {
                let name = self.ident("a homotopy name")?;
                self.p.expect(":")?;
                let from = self.ident("a morphism name")?;
                self.p.expect("~")?;
                let to = self.ident("a morphism name")?;
                Ok(Item::Homotopy(HomotopyDecl { name, from, to, images: self.assignments()? }))
            }
            other => Err(Diagnostic::error(kw.span, format!("unknown item `{other}`"))),
        }
    }
}

/// Parses a whole file, collecting every diagnostic it can.
pub fn parse_model(src: &str) -> Result<ModelDoc, Vec<Diagnostic>> {
    let (toks, lex_diags) = lex(src);
    let mut parser = Parser { p: ExprParser::new(&toks, 0), diags: lex_diags };
    let mut items = Vec::new();
    while !matches!(parser.p.peek().tok, Tok::Eof) {
        let start = parser.p.pos;
        match parser.item() {
            Ok(item) => items.push(item),
            Err(d) => {
                parser.p.rewind_to(d.span.start);
                parser.diags.push(d);
                if parser.p.pos <= start {
                    parser.p.pos = start;
                    parser.p.bump();
                }
                parser.recover(false, Span::new(0, 0));
            }
        }
    }
    let mut diags = parser.diags;
    if diags.is_empty() {
        Ok(ModelDoc { source: src.to_string(), items })
    } else {
        diags.sort_by_key(|d| d.span.start);
        Err(diags)
    }
}

/// `line:col: severity: message` for every diagnostic.
pub fn render_diagnostics(src: &str, diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.render(src) + "\n").collect()
}

/// Span of the whole source, for diagnostics that concern a file rather than a token.
pub fn whole(src: &str) -> Span {
    Span::new(0, src.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = "model S1 {\n  gen b : -1\n  gen x : 0\n  d b = -1/2 * [b,b]\n  d x = [x,b]\n}\n";

    #[test]
    fn parses_and_prints_canonically() {
        let doc = parse_model("model S { gen x : 2  d x = 0 }").unwrap();
        assert_eq!(print_doc(&doc), "model S {\n  gen x : 2\n  d x = 0\n}\n");
        let doc = parse_model(CIRCLE).unwrap();
        assert_eq!(print_doc(&doc), CIRCLE);
    }

    #[test]
    fn round_trip_of_every_construct() {
        let src = "truncate 6\n\nmodel W = wedge(1, 1)\n\nmodel V {\n  truncate 4\n  gen x, y : 2\n  filtration F { y } { }\n  derivation up {\n    x -> y\n  }\n  mc a = 0\n}\n\nmorphism f : S1 -> W {\n  b -> 0\n  x -> v\n}\n\nhomotopy H : f ~ g {\n  b -> -dt * u\n  x -> exp_tad(u, v)\n}\n";
        let doc = parse_model(src).unwrap();
        let printed = print_doc(&doc);
        assert_eq!(printed, src);
        assert_eq!(parse_model(&printed).unwrap(), doc);
    }

    #[test]
    fn recovery_collects_several_diagnostics() {
        let src = "model A {\n  gen x 2\n  gen y : 3\n  d y = [y,\n}\nmodel B { gen z : 1 }\nmorphism : A -> B { }\n";
        let diags = parse_model(src).unwrap_err();
        let at: Vec<(usize, usize)> = diags.iter().map(|d| d.span.line_col(src)).collect();
        assert_eq!(at, vec![(2, 9), (5, 1), (7, 10)], "{}", render_diagnostics(src, &diags));
    }
}
