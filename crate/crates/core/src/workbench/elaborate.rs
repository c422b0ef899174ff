// SPDX-License-Identifier: Apache-2.0
//! Name resolution, degree checking and construction of models, morphisms and homotopies.

use std::collections::BTreeMap;

use super::ast::*;
use super::parser::{ITEM_KEYWORDS, STMT_KEYWORDS};
use crate::derivations::GeneratorFiltration;
use crate::dgl::builtins::{self, DEFAULT_CAP};
use crate::dgl::{Derivation, Dgl, DglMorphism};
use crate::freelie::expr::{parse_expr, Diagnostic, ExprKind, RESERVED};
use crate::freelie::{Expr, FreeLie, Generator, LieElement, Span};
use crate::homotopy::{tensor_interval, Cylinder, PolyForm, Witness};

#[derive(Clone, Debug)]
pub struct Options {
    /// Overrides every truncation declared in the file.
    pub cap: Option<usize>,
    pub poly_cap: usize,
}

impl Default for Options {
    fn default() -> Options {
        Options { cap: None, poly_cap: 6 }
    }
}

#[derive(Clone, Debug)]
pub struct ElabModel {
    pub name: String,
    pub dgl: Dgl,
    pub mcs: Vec<(String, LieElement)>,
    pub filtrations: Vec<GeneratorFiltration>,
    pub derivations: Vec<(String, Derivation)>,
}

#[derive(Clone, Debug)]
pub struct ElabHomotopy {
    pub name: String,
    pub from: DglMorphism,
    pub to: DglMorphism,
    pub witness: Witness,
}

#[derive(Clone, Debug)]
pub struct Workspace {
    pub models: BTreeMap<String, ElabModel>,
    /// Declaration order of the file's own models.
    pub order: Vec<String>,
    pub morphisms: BTreeMap<String, DglMorphism>,
    pub homotopies: BTreeMap<String, ElabHomotopy>,
    pub default_cap: usize,
}

type DResult<T> = Result<T, Diagnostic>;

fn err(span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(span, msg)
}

/// The built-in model behind a reference, if it names one.
pub fn builtin_of(r: &ModelRef, cap: usize) -> Option<DResult<Dgl>> {
    let (name, params): (&Ident, Vec<i64>) = match r {
        ModelRef::Named(id) => (id, Vec::new()),
        ModelRef::Builtin { name, params } => (name, params.iter().map(|p| p.value).collect()),
    };
    if !builtins::BUILTIN_NAMES.contains(&name.name.as_str()) {
        return None;
    }
    Some(builtins::builtin(&name.name, &params, cap).map_err(|e| err(r.span(), e.to_string())))
}

/// Parses `sphere(3)`, `wedge(1,1)`, `L1` and the like.
pub fn parse_model_ref(text: &str) -> Result<ModelRef, Vec<Diagnostic>> {
    let doc = super::parser::parse_model(&format!("model _ = {text}"))?;
    match doc.items.into_iter().next() {
        Some(Item::Model(ModelDecl { body: ModelBody::Alias(r), .. })) => Ok(r),
        _ => Err(vec![err(Span::default(), format!("`{text}` is not a model reference"))]),
    }
}

fn check_degree(e: &LieElement, n: i64, span: Span, what: &str) -> DResult<()> {
    if e.is_of_degree(n) {
        Ok(())
    } else {
        let found: Vec<String> = e.degrees().iter().map(|d| d.to_string()).collect();
        Err(err(span, format!("{what} must have degree {n}, found degree {}", found.join(", "))))
    }
}

fn block_model(name: &Ident, stmts: &[Stmt], cap: usize) -> Result<ElabModel, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut gens: Vec<Generator> = Vec::new();
    let mut seen: BTreeMap<String, Span> = BTreeMap::new();
    for s in stmts {
        if let Stmt::Gen { names, degree } = s {
            for n in names {
                if seen.contains_key(&n.name) {
                    diags.push(err(n.span, format!("generator {} is declared twice", n.name)));
                } else if RESERVED.contains(&n.name.as_str()) || ITEM_KEYWORDS.contains(&n.name.as_str()) || STMT_KEYWORDS.contains(&n.name.as_str()) {
                    diags.push(err(n.span, format!("`{}` is reserved", n.name)));
                } else {
                    seen.insert(n.name.clone(), n.span);
                    gens.push(Generator::new(&n.name, degree.value));
                }
            }
        }
    }
    let lie = match FreeLie::new(gens, cap) {
        Ok(l) => l,
        Err(e) => {
            diags.push(err(name.span, e.to_string()));
            return Err(diags);
        }
    };
    let mut d: Vec<Option<LieElement>> = vec![None; lie.rank()];
    for s in stmts {
        if let Stmt::D { generator, value } = s {
            let Some(i) = lie.index_of(&generator.name) else {
                diags.push(err(generator.span, format!("unknown generator {}", generator.name)));
                continue;
            };
            if d[i].is_some() {
                diags.push(err(generator.span, format!("d {} is defined twice", generator.name)));
                continue;
            }
            match value.eval_lie(&lie).and_then(|v| check_degree(&v, lie.gens()[i].degree - 1, value.span, &format!("d {}", generator.name)).map(|_| v)) {
                Ok(v) => d[i] = Some(v),
                Err(e) => diags.push(e),
            }
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let d = d.into_iter().map(|v| v.unwrap_or_else(|| LieElement::zero(&lie))).collect();
    let dgl = Dgl::build(lie.clone(), d).map_err(|e| vec![err(name.span, format!("model {}: {e}", name.name))])?;
    let mut model = ElabModel { name: name.name.clone(), dgl, mcs: Vec::new(), filtrations: Vec::new(), derivations: Vec::new() };
    for s in stmts {
        match s {
            Stmt::Mc { name: n, value } => match value.eval_lie(&lie) {
                Ok(v) => {
                    if let Err(e) = check_degree(&v, -1, value.span, "an MC element") {
                        diags.push(e);
                    } else if let Ok((false, residue)) = model.dgl.check_mc(&v) {
                        diags.push(err(value.span, format!("{} is not a Maurer-Cartan element: residue {}", n.name, residue.to_expr_string())));
                    } else {
                        model.mcs.push((n.name.clone(), v));
                    }
                }
                Err(e) => diags.push(e),
            },
            Stmt::Filtration { name: n, levels } => {
                let mut ok = true;
                for id in levels.iter().flatten() {
                    if lie.index_of(&id.name).is_none() {
                        diags.push(err(id.span, format!("unknown generator {}", id.name)));
                        ok = false;
                    }
                }
                if ok {
                    let blocks: Vec<Vec<String>> = levels.iter().map(|l| l.iter().map(|i| i.name.clone()).collect()).collect();
                    match GeneratorFiltration::new(&model.dgl, &n.name, &blocks) {
                        Ok(f) => model.filtrations.push(f),
                        Err(e) => diags.push(err(n.span, e.to_string())),
                    }
                }
            }
            Stmt::Derivation { name: n, values } => match derivation(&lie, n, values) {
                Ok(t) => model.derivations.push((n.name.clone(), t)),
                Err(e) => diags.extend(e),
            },
            _ => {}
        }
    }
    if diags.is_empty() {
        Ok(model)
    } else {
        Err(diags)
    }
}

fn derivation(lie: &std::sync::Arc<FreeLie>, name: &Ident, values: &[Assignment]) -> Result<Derivation, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut vals = vec![LieElement::zero(lie); lie.rank()];
    let mut set = vec![false; lie.rank()];
    let mut degree: Option<(i64, Span)> = None;
    for a in values {
        let Some(i) = lie.index_of(&a.target.name) else {
            diags.push(err(a.target.span, format!("unknown generator {}", a.target.name)));
            continue;
        };
        if std::mem::replace(&mut set[i], true) {
            diags.push(err(a.target.span, format!("{} is assigned twice", a.target.name)));
            continue;
        }
        match a.value.eval_lie(lie) {
            Ok(v) => {
                if !v.is_zero() {
                    let Some(n) = v.degree() else {
                        diags.push(err(a.value.span, "derivation values must be homogeneous"));
                        continue;
                    };
                    let k = n - lie.gens()[i].degree;
                    match degree {
                        Some((d, _)) if d != k => diags.push(err(a.value.span, format!("this value has degree shift {k}, but {} has degree {d}", name.name))),
                        _ => degree = Some((k, a.value.span)),
                    }
                }
                vals[i] = v;
            }
            Err(e) => diags.push(e),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    Derivation::new(lie, degree.map_or(0, |d| d.0), vals).map_err(|e| vec![err(name.span, e.to_string())])
}

fn images(target: &Dgl, source: &Dgl, xs: &[Assignment], what: &str, span: Span) -> Result<Vec<LieElement>, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut out: Vec<Option<LieElement>> = vec![None; source.lie().rank()];
    for a in xs {
        let Some(i) = source.lie().index_of(&a.target.name) else {
            diags.push(err(a.target.span, format!("unknown generator {}", a.target.name)));
            continue;
        };
        match a.value.eval_lie(target.lie()).and_then(|v| check_degree(&v, source.gens()[i].degree, a.value.span, &format!("the image of {}", a.target.name)).map(|_| v)) {
            Ok(v) => out[i] = Some(v),
            Err(e) => diags.push(e),
        }
    }
    for (i, v) in out.iter().enumerate() {
        if v.is_none() && diags.is_empty() {
            diags.push(err(span, format!("{what} gives no image for {}", source.gens()[i].name)));
        }
    }
    if diags.is_empty() {
        Ok(out.into_iter().map(|v| v.expect("checked")).collect())
    } else {
        Err(diags)
    }
}

fn form(e: &Expr, cyl: &Cylinder) -> DResult<PolyForm> {
    let lie = cyl.dgl.lie();
    Ok(match &e.kind {
        ExprKind::Bracket(a, b) => cyl.bracket(&form(a, cyl)?, &form(b, cyl)?),
        ExprKind::Scale(c, x) => form(x, cyl)?.scale(c),
        ExprKind::Sum(xs) => {
            let mut acc = cyl.zero();
            for x in xs {
                acc = acc.add(&form(x, cyl)?);
            }
            acc
        }
        ExprKind::Call(name, args) if name == "exp_tad" => {
            if args.len() != 2 {
                return Err(err(e.span, "exp_tad takes two arguments"));
            }
            let u = args[0].eval_lie(lie)?;
            if !u.is_of_degree(0) {
                return Err(err(args[0].span, "exp_tad needs a degree-0 element"));
            }
            cyl.exp_t_ad(&u, &args[1].eval_lie(lie)?)
        }
        ExprKind::Form(m, x) => {
            let v = x.eval_lie(lie)?;
            let k = m.t_power as usize;
            let r = if m.dt { cyl.dt_monomial(k, &v) } else { cyl.monomial(k, &v) };
            r.map_err(|ex| err(e.span, ex.to_string()))?
        }
        _ => cyl.constant(&e.eval_lie(lie)?),
    })
}

fn homotopy(ws: &Workspace, h: &HomotopyDecl, poly_cap: usize) -> Result<ElabHomotopy, Vec<Diagnostic>> {
    let get = |id: &Ident| ws.morphisms.get(&id.name).cloned().ok_or_else(|| vec![err(id.span, format!("unknown morphism {}", id.name))]);
    let from = get(&h.from)?;
    let to = get(&h.to)?;
    if !FreeLie::same_algebra(from.source.lie(), to.source.lie()) || !FreeLie::same_algebra(from.target.lie(), to.target.lie()) {
        return Err(vec![err(h.to.span, format!("{} and {} have different source or target", h.from.name, h.to.name))]);
    }
    let cyl = tensor_interval(&from.target, poly_cap).map_err(|e| vec![err(h.name.span, e.to_string())])?;
    let mut diags = Vec::new();
    let mut out: Vec<Option<PolyForm>> = vec![None; from.source.lie().rank()];
    for a in &h.images {
        let Some(i) = from.source.lie().index_of(&a.target.name) else {
            diags.push(err(a.target.span, format!("unknown generator {}", a.target.name)));
            continue;
        };
        match form(&a.value, &cyl) {
            Ok(f) if !cyl.is_of_degree(&f, from.source.gens()[i].degree) => {
                diags.push(err(a.value.span, format!("the image of {} must have degree {}", a.target.name, from.source.gens()[i].degree)))
            }
            Ok(f) => out[i] = Some(f),
            Err(e) => diags.push(e),
        }
    }
    for (i, v) in out.iter().enumerate() {
        if v.is_none() && diags.is_empty() {
            diags.push(err(h.name.span, format!("homotopy {} gives no image for {}", h.name.name, from.source.gens()[i].name)));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let witness = Witness::new(&from.source, cyl, out.into_iter().map(|v| v.expect("checked")).collect()).map_err(|e| vec![err(h.name.span, e.to_string())])?;
    Ok(ElabHomotopy { name: h.name.name.clone(), from, to, witness })
}

impl Workspace {
    /// A model of the file, else a built-in.
    pub fn resolve(&self, r: &ModelRef) -> DResult<Dgl> {
        if let ModelRef::Named(id) = r {
            if let Some(m) = self.models.get(&id.name) {
                return Ok(m.dgl.clone());
            }
        }
        match builtin_of(r, self.default_cap) {
            Some(d) => d,
            None => Err(err(r.span(), format!("unknown model {r}"))),
        }
    }

    pub fn model(&self, name: &str) -> Option<&ElabModel> {
        self.models.get(name)
    }
}

/// Resolves every declaration; all diagnostics found are returned together.
pub fn elaborate(doc: &ModelDoc, opts: &Options) -> Result<Workspace, Vec<Diagnostic>> {
    let file_cap = opts.cap.or(doc.truncation()).unwrap_or(DEFAULT_CAP);
    let mut ws = Workspace { models: BTreeMap::new(), order: Vec::new(), morphisms: BTreeMap::new(), homotopies: BTreeMap::new(), default_cap: file_cap };
    let mut diags = Vec::new();
    for m in doc.models() {
        if ws.models.contains_key(&m.name.name) {
            diags.push(err(m.name.span, format!("model {} is declared twice", m.name.name)));
            continue;
        }
        let built = match &m.body {
            ModelBody::Alias(r) => ws.resolve(r).map(|dgl| ElabModel { name: m.name.name.clone(), dgl, mcs: Vec::new(), filtrations: Vec::new(), derivations: Vec::new() }).map_err(|d| vec![d]),
            ModelBody::Block(stmts) => {
                let own = stmts.iter().find_map(|s| match s {
                    Stmt::Truncate(n) => Some(n.value as usize),
                    _ => None,
                });
                block_model(&m.name, stmts, opts.cap.or(own).unwrap_or(file_cap))
            }
        };
        match built {
            Ok(model) => {
                ws.order.push(m.name.name.clone());
                ws.models.insert(m.name.name.clone(), model);
            }
            Err(d) => diags.extend(d),
        }
    }
    for f in doc.morphisms() {
        let (source, target) = match (ws.resolve(&f.source), ws.resolve(&f.target)) {
            (Ok(s), Ok(t)) => (s, t),
            (a, b) => {
                diags.extend(a.err());
                diags.extend(b.err());
                continue;
            }
        };
        match images(&target, &source, &f.images, &format!("morphism {}", f.name.name), f.name.span) {
            Ok(imgs) => match DglMorphism::new(source, target, imgs) {
                Ok(m) => {
                    ws.morphisms.insert(f.name.name.clone(), m);
                }
                Err(e) => diags.push(err(f.name.span, format!("morphism {}: {e}", f.name.name))),
            },
            Err(d) => diags.extend(d),
        }
    }
    for h in doc.homotopies() {
        match homotopy(&ws, h, opts.poly_cap) {
            Ok(e) => {
                ws.homotopies.insert(h.name.name.clone(), e);
            }
            Err(d) => diags.extend(d),
        }
    }
    if diags.is_empty() {
        Ok(ws)
    } else {
        diags.sort_by_key(|d| d.span.start);
        Err(diags)
    }
}

/// A model block presenting `dgl`, with differentials in canonical bracket form.
pub fn model_block(name: &str, dgl: &Dgl) -> ModelDecl {
    let mut stmts = vec![Stmt::Truncate(Int { value: dgl.cap() as i64, span: Span::default() })];
    for g in dgl.gens() {
        stmts.push(Stmt::Gen { names: vec![Ident::new(&g.name)], degree: Int { value: g.degree, span: Span::default() } });
    }
    for (g, d) in dgl.gens().iter().zip(dgl.d_on_gens()) {
        if !d.is_zero() {
            let value = parse_expr(&d.to_expr_string()).expect("canonical bracket expressions parse");
            stmts.push(Stmt::D { generator: Ident::new(&g.name), value });
        }
    }
    ModelDecl { name: Ident::new(name), body: ModelBody::Block(stmts) }
}
