// SPDX-License-Identifier: Apache-2.0
//! Syntax tree of model files and its canonical printer. Equality ignores spans.

use std::fmt::{self, Write};

use crate::freelie::expr::print_expr;
use crate::freelie::{Expr, Span};

#[derive(Clone, Debug, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl PartialEq for Ident {
    fn eq(&self, other: &Ident) -> bool {
        self.name == other.name
    }
}

impl Ident {
    pub fn new(name: &str) -> Ident {
        Ident { name: name.to_string(), span: Span::default() }
    }
}

/// An integer literal with its position.
#[derive(Clone, Copy, Debug, Eq)]
pub struct Int {
    pub value: i64,
    pub span: Span,
}

impl PartialEq for Int {
    fn eq(&self, other: &Int) -> bool {
        self.value == other.value
    }
}

/// A model given by name or as a built-in such as `sphere(3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelRef {
    Named(Ident),
    Builtin { name: Ident, params: Vec<Int> },
}

impl fmt::Display for ModelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelRef::Named(id) => f.write_str(&id.name),
            ModelRef::Builtin { name, params } if params.is_empty() => write!(f, "{}()", name.name),
            ModelRef::Builtin { name, params } => {
                let p: Vec<String> = params.iter().map(|i| i.value.to_string()).collect();
                write!(f, "{}({})", name.name, p.join(", "))
            }
        }
    }
}

impl ModelRef {
    pub fn span(&self) -> Span {
        match self {
            ModelRef::Named(id) => id.span,
            ModelRef::Builtin { name, params } => params.last().map_or(name.span, |p| name.span.join(p.span)),
        }
    }
}

/// `name -> expr`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub target: Ident,
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Truncate(Int),
    Gen { names: Vec<Ident>, degree: Int },
    D { generator: Ident, value: Expr },
    Mc { name: Ident, value: Expr },
    Filtration { name: Ident, levels: Vec<Vec<Ident>> },
    Derivation { name: Ident, values: Vec<Assignment> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelBody {
    Alias(ModelRef),
    Block(Vec<Stmt>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDecl {
    pub name: Ident,
    pub body: ModelBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: Ident,
    pub source: ModelRef,
    pub target: ModelRef,
    pub images: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyDecl {
    pub name: Ident,
    pub from: Ident,
    pub to: Ident,
    pub images: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Truncate(Int),
    Model(ModelDecl),
    Morphism(MorphismDecl),
    Homotopy(HomotopyDecl),
}

#[derive(Clone, Debug)]
pub struct ModelDoc {
    pub source: String,
    pub items: Vec<Item>,
}

impl PartialEq for ModelDoc {
    fn eq(&self, other: &ModelDoc) -> bool {
        self.items == other.items
    }
}

impl ModelDoc {
    pub fn models(&self) -> impl Iterator<Item = &ModelDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Model(m) => Some(m),
            _ => None,
        })
    }

    pub fn morphisms(&self) -> impl Iterator<Item = &MorphismDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Morphism(m) => Some(m),
            _ => None,
        })
    }

    pub fn homotopies(&self) -> impl Iterator<Item = &HomotopyDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Homotopy(h) => Some(h),
            _ => None,
        })
    }

    pub fn truncation(&self) -> Option<usize> {
        self.items.iter().find_map(|i| match i {
            Item::Truncate(n) => Some(n.value as usize),
            _ => None,
        })
    }
}

fn assignments(out: &mut String, indent: &str, xs: &[Assignment]) {
    for a in xs {
        let _ = writeln!(out, "{indent}{} -> {}", a.target.name, print_expr(&a.value));
    }
}

fn names(xs: &[Ident]) -> String {
    xs.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(", ")
}

/// Canonical text: one statement per line, two-space indentation, blank line between items.
pub fn print_doc(doc: &ModelDoc) -> String {
    let mut out = String::new();
    for (k, item) in doc.items.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        match item {
            Item::Truncate(n) => {
                let _ = writeln!(out, "truncate {}", n.value);
            }
            Item::Model(m) => match &m.body {
                ModelBody::Alias(r) => {
                    let _ = writeln!(out, "model {} = {r}", m.name.name);
                }
                ModelBody::Block(stmts) => {
                    let _ = writeln!(out, "model {} {{", m.name.name);
                    for s in stmts {
                        match s {
                            Stmt::Truncate(n) => {
                                let _ = writeln!(out, "  truncate {}", n.value);
                            }
                            Stmt::Gen { names: ns, degree } => {
                                let _ = writeln!(out, "  gen {} : {}", names(ns), degree.value);
                            }
                            Stmt::D { generator, value } => {
                                let _ = writeln!(out, "  d {} = {}", generator.name, print_expr(value));
                            }
                            Stmt::Mc { name, value } => {
                                let _ = writeln!(out, "  mc {} = {}", name.name, print_expr(value));
                            }
                            Stmt::Filtration { name, levels } => {
                                let blocks: Vec<String> = levels.iter().map(|l| if l.is_empty() { "{ }".to_string() } else { format!("{{ {} }}", names(l)) }).collect();
                                let _ = writeln!(out, "  filtration {} {}", name.name, blocks.join(" "));
                            }
                            Stmt::Derivation { name, values } => {
                                let _ = writeln!(out, "  derivation {} {{", name.name);
                                assignments(&mut out, "    ", values);
                                out.push_str("  }\n");
                            }
                        }
                    }
                    out.push_str("}\n");
                }
            },
            Item::Morphism(m) => {
                let _ = writeln!(out, "morphism {} : {} -> {} {{", m.name.name, m.source, m.target);
                assignments(&mut out, "  ", &m.images);
                out.push_str("}\n");
            }
            Item::Homotopy(h) => {
                let _ = writeln!(out, "homotopy {} : {} ~ {} {{", h.name.name, h.from.name, h.to.name);
                assignments(&mut out, "  ", &h.images);
                out.push_str("}\n");
            }
        }
    }
    out
}
