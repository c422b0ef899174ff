// SPDX-License-Identifier: Apache-2.0
//! Validated tasks and their dispatch to the pipelines.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::ast::{ModelDoc, ModelRef};
use super::elaborate::{elaborate, parse_model_ref, ElabModel, Options, Workspace};
use super::parser::parse_model;
use super::report::{self, Report, Status};
use crate::cdgc::{alpha, compare_homology, lie_functor, Chains};
use crate::derivations::{classifying_invariants, convolution_route, mapping_space_pi, GSpec, Mode};
use crate::dgl::{bch, exp_derivation, gauge_act, gauge_equivalent, log_automorphism, Dgl, DglMorphism, GaugeSearch, H0Group};
use crate::error::Error;
use crate::freelie::expr::Diagnostic;
use crate::freelie::{parse_expr, LieElement};
use crate::homotopy::check_homotopy_stable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Check,
    Homology,
    Bch,
    Gauge,
    GaugeEquiv,
    Exp,
    Log,
    H0,
    PiMap,
    Baut,
    Bautstar,
    Witness,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::Check,
        Command::Homology,
        Command::Bch,
        Command::Gauge,
        Command::GaugeEquiv,
        Command::Exp,
        Command::Log,
        Command::H0,
        Command::PiMap,
        Command::Baut,
        Command::Bautstar,
        Command::Witness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Homology => "homology",
            Command::Bch => "bch",
            Command::Gauge => "gauge",
            Command::GaugeEquiv => "gauge-equiv",
            Command::Exp => "exp",
            Command::Log => "log",
            Command::H0 => "h0",
            Command::PiMap => "pi-map",
            Command::Baut => "baut",
            Command::Bautstar => "bautstar",
            Command::Witness => "witness",
        }
    }

    /// Homology tasks certify only a finite window, which must be given.
    pub fn needs_range(self) -> bool {
        matches!(self, Command::Homology | Command::PiMap | Command::Baut | Command::Bautstar)
    }

    /// Tasks whose results are rerun at `cap + 1` for the stability flag.
    pub fn homology_bearing(self) -> bool {
        matches!(self, Command::Homology | Command::H0 | Command::PiMap | Command::Baut | Command::Bautstar)
    }

    fn expr_count(self) -> usize {
        match self {
            Command::Bch | Command::Gauge | Command::GaugeEquiv => 2,
            _ => 0,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Command, String> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// `a..b`, both ends inclusive.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("degree window `{s}` must look like a..b"))?;
    let lo: i64 = a.trim().parse().map_err(|_| format!("bad window start `{a}`"))?;
    let hi: i64 = b.trim().parse().map_err(|_| format!("bad window end `{b}`"))?;
    if lo > hi {
        return Err(format!("empty degree window {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GSpecArg {
    Identity,
    Stabilizer(String),
    Span(Vec<String>),
}

impl FromStr for GSpecArg {
    type Err = String;
    fn from_str(s: &str) -> Result<GSpecArg, String> {
        match s.split_once(':') {
            None if s == "identity" => Ok(GSpecArg::Identity),
            Some(("stabilizer", f)) if !f.trim().is_empty() => Ok(GSpecArg::Stabilizer(f.trim().to_string())),
            Some(("span", ds)) => {
                let names: Vec<String> = ds.split(',').map(|d| d.trim().to_string()).filter(|d| !d.is_empty()).collect();
                if names.is_empty() {
                    return Err("span: needs at least one derivation name".into());
                }
                Ok(GSpecArg::Span(names))
            }
            _ => Err(format!("unknown subgroup specification `{s}`; expected identity, stabilizer:<filtration> or span:<derivations>")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Task {
    pub command: Command,
    /// Path of the model file, for the report only.
    pub file: Option<String>,
    pub source: Option<String>,
    /// A model of the file or a built-in such as `sphere(2)`.
    pub model: Option<String>,
    pub range: Option<(i64, i64)>,
    pub cap: Option<usize>,
    pub word_cap: Option<usize>,
    pub poly_cap: usize,
    pub gspec: Option<String>,
    pub exprs: Vec<String>,
    pub morphism: Option<String>,
    pub derivation: Option<String>,
    pub homotopy: Option<String>,
    pub postnikov: Option<i64>,
    pub stability: bool,
}

impl Task {
    pub fn new(command: Command) -> Task {
        Task {
            command,
            file: None,
            source: None,
            model: None,
            range: None,
            cap: None,
            word_cap: None,
            poly_cap: 6,
            gspec: None,
            exprs: Vec::new(),
            morphism: None,
            derivation: None,
            homotopy: None,
            postnikov: None,
            stability: true,
        }
    }

    /// Sets one parameter by its command-line flag name; `expr` appends.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let num = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("--{key} needs a nonnegative integer, got `{v}`"));
        match key {
            "source" => self.source = Some(value.to_string()),
            "file" => self.file = Some(value.to_string()),
            "model" => self.model = Some(value.to_string()),
            "range" => self.range = Some(parse_range(value)?),
            "truncate" => self.cap = Some(num(value)?),
            "word-cap" => self.word_cap = Some(num(value)?),
            "poly-cap" => self.poly_cap = num(value)?,
            "gspec" => self.gspec = Some(value.to_string()),
            "expr" => self.exprs.push(value.to_string()),
            "morphism" => self.morphism = Some(value.to_string()),
            "derivation" => self.derivation = Some(value.to_string()),
            "homotopy" => self.homotopy = Some(value.to_string()),
            "postnikov" => self.postnikov = Some(value.trim().parse().map_err(|_| format!("--postnikov needs an integer, got `{value}`"))?),
            "stability" => {
                self.stability = match value {
                    "on" | "true" | "1" => true,
                    "off" | "false" | "0" => false,
                    _ => return Err(format!("--stability takes on or off, got `{value}`")),
                }
            }
            _ => return Err(format!("unknown task parameter `{key}`")),
        }
        Ok(())
    }

    /// Every parameter problem, found before anything is computed.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let c = self.command;
        if c.needs_range() && self.range.is_none() {
            errs.push(format!("{c} needs a degree window: pass --range a..b"));
        }
        if let Some((lo, hi)) = self.range {
            if lo > hi {
                errs.push(format!("empty degree window {lo}..{hi}"));
            }
        }
        if self.cap == Some(0) {
            errs.push("--truncate must be at least 1".into());
        }
        if self.word_cap == Some(0) {
            errs.push("--word-cap must be at least 1".into());
        }
        if self.poly_cap == 0 {
            errs.push("--poly-cap must be at least 1".into());
        }
        if self.exprs.len() != c.expr_count() && (c != Command::Homology || self.exprs.len() > 1) {
            errs.push(match c.expr_count() {
                0 if c == Command::Homology => "homology takes at most one --expr (an MC element)".to_string(),
                0 => format!("{c} takes no --expr"),
                n => format!("{c} needs exactly {n} --expr arguments, got {}", self.exprs.len()),
            });
        }
        if let Some(g) = &self.gspec {
            if !matches!(c, Command::Baut | Command::Bautstar) {
                errs.push(format!("{c} takes no --gspec"));
            } else if let Err(e) = g.parse::<GSpecArg>() {
                errs.push(e);
            }
        }
        if c == Command::Exp && self.derivation.is_none() {
            errs.push("exp needs --derivation".into());
        }
        if c == Command::Log && self.morphism.is_none() {
            errs.push("log needs --morphism".into());
        }
        if c == Command::Witness && self.homotopy.is_none() {
            errs.push("witness needs --homotopy".into());
        }
        if self.postnikov.is_some() && !matches!(c, Command::Baut | Command::Bautstar) {
            errs.push(format!("{c} takes no --postnikov"));
        }
        if let Some(m) = &self.model {
            if let Err(ds) = parse_model_ref(m) {
                errs.push(format!("--model {m}: {}", ds.iter().map(|d| d.message.clone()).collect::<Vec<_>>().join("; ")));
            }
        }
        errs
    }

    /// A command line that reproduces this task.
    pub fn echo(&self) -> String {
        let mut parts = vec!["cdgl".to_string(), self.command.to_string()];
        if let Some(f) = &self.file {
            parts.push(quote(f));
        }
        let mut flag = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                parts.push(format!("--{k}"));
                parts.push(quote(&v));
            }
        };
        flag("model", self.model.clone());
        flag("range", self.range.map(|(a, b)| format!("{a}..{b}")));
        flag("truncate", self.cap.map(|n| n.to_string()));
        flag("word-cap", self.word_cap.map(|n| n.to_string()));
        flag("poly-cap", (self.poly_cap != 6).then(|| self.poly_cap.to_string()));
        flag("gspec", self.gspec.clone());
        for e in &self.exprs {
            flag("expr", Some(e.clone()));
        }
        flag("morphism", self.morphism.clone());
        flag("derivation", self.derivation.clone());
        flag("homotopy", self.homotopy.clone());
        flag("postnikov", self.postnikov.map(|n| n.to_string()));
        if !self.stability {
            parts.push("--no-stability".into());
        }
        parts.join(" ")
    }
}

fn quote(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-.,:/()".contains(c)) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

/// Why a task stopped.
enum Failure {
    /// Located in the model file.
    Source(Vec<Diagnostic>),
    Message(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

type Run<T> = Result<T, Failure>;

struct Ctx<'a> {
    task: &'a Task,
    ws: Workspace,
    meta: &'a mut Map<String, Value>,
    out: &'a mut Map<String, Value>,
}

impl Ctx<'_> {
    fn put(&mut self, k: &str, v: impl Into<Value>) {
        self.out.insert(k.into(), v.into());
    }

    fn meta(&mut self, k: &str, v: impl Into<Value>) {
        self.meta.insert(k.into(), v.into());
    }

    /// The selected model: `--model`, else the file's only model.
    fn model(&mut self) -> Run<(Dgl, Option<ElabModel>)> {
        let (dgl, elab, name) = match &self.task.model {
            Some(m) => {
                let r = parse_model_ref(m).map_err(|_| Failure::Message(format!("bad model reference {m}")))?;
                match &r {
                    ModelRef::Named(id) if self.ws.models.contains_key(&id.name) => {
                        let e = self.ws.models[&id.name].clone();
                        (e.dgl.clone(), Some(e), id.name.clone())
                    }
                    _ => (self.ws.resolve(&r).map_err(|d| Failure::Message(d.message))?, None, r.to_string()),
                }
            }
            None if self.ws.order.len() == 1 => {
                let e = self.ws.models[&self.ws.order[0]].clone();
                (e.dgl.clone(), Some(e.clone()), e.name)
            }
            None if self.ws.order.is_empty() => return Err(Failure::Message(format!("{} needs a model: pass a model file or --model", self.task.command))),
            None => return Err(Failure::Message(format!("the file declares {} models; choose one with --model", self.ws.order.len()))),
        };
        self.meta("model", name);
        self.meta("cap", dgl.cap());
        Ok((dgl, elab))
    }

    fn morphism(&mut self, name: &str) -> Run<DglMorphism> {
        let f = self.ws.morphisms.get(name).cloned().ok_or_else(|| Failure::Message(format!("unknown morphism {name}")))?;
        self.meta("morphism", name);
        self.meta("cap", f.target.cap());
        Ok(f)
    }

    fn window(&self) -> (i64, i64) {
        self.task.range.expect("validated")
    }

    fn expr(&self, i: usize, dgl: &Dgl) -> Run<LieElement> {
        let text = &self.task.exprs[i];
        let located = |d: Diagnostic| {
            let (l, c) = d.span.line_col(text);
            Failure::Message(format!("--expr '{text}': {l}:{c}: {}", d.message))
        };
        let e = parse_expr(text).map_err(|ds| located(ds.into_iter().next().expect("at least one diagnostic")))?;
        e.eval_lie(dgl.lie()).map_err(located)
    }
}

fn exec(task: &Task, doc: &ModelDoc, cap: Option<usize>, meta: &mut Map<String, Value>, out: &mut Map<String, Value>) -> Run<bool> {
    let ws = elaborate(doc, &Options { cap, poly_cap: task.poly_cap }).map_err(Failure::Source)?;
    let mut cx = Ctx { task, ws, meta, out };
    match task.command {
        Command::Check => check(&mut cx),
        Command::Homology => homology(&mut cx),
        Command::Bch | Command::Gauge | Command::GaugeEquiv => group_ops(&mut cx),
        Command::Exp => {
            let (dgl, elab) = cx.model()?;
            let name = task.derivation.as_deref().expect("validated");
            let theta = elab.and_then(|m| m.derivations.into_iter().find(|(n, _)| n == name)).map(|(_, t)| t);
            let theta = theta.ok_or_else(|| Failure::Message(format!("the model declares no derivation {name}")))?;
            let images = exp_derivation(dgl.lie(), &theta)?;
            cx.put("derivation", report::derivation(dgl.lie(), &theta));
            cx.put("automorphism", report::on_generators(dgl.lie(), &images));
            Ok(true)
        }
        Command::Log => {
            let f = cx.morphism(task.morphism.as_deref().expect("validated"))?;
            if !f.is_endomorphism() {
                return Err(Failure::Message("log needs an endomorphism".into()));
            }
            let theta = log_automorphism(f.source.lie(), &f.images)?;
            cx.put("automorphism", report::on_generators(f.source.lie(), &f.images));
            cx.put("derivation", report::derivation(f.source.lie(), &theta));
            Ok(true)
        }
        Command::H0 => {
            let (dgl, _) = cx.model()?;
            let g = H0Group::new(&dgl)?;
            cx.put("dim", g.dim());
            cx.put("representatives", g.representatives().iter().map(report::expr).collect::<Vec<_>>());
            cx.put("structure_constants", report::structure_constants(g.structure_constants()));
            cx.put("lower_central_series", g.lower_central_series());
            cx.put("nilpotency_class", g.nilpotency_class());
            cx.put("abelian", g.is_abelian());
            Ok(true)
        }
        Command::PiMap => pi_map(&mut cx),
        Command::Baut | Command::Bautstar => baut(&mut cx),
        Command::Witness => {
            let name = task.homotopy.as_deref().expect("validated");
            let h = cx.ws.homotopies.get(name).cloned().ok_or_else(|| Failure::Message(format!("unknown homotopy {name}")))?;
            cx.meta("homotopy", name);
            cx.meta("cap", h.from.target.cap());
            cx.meta("poly_cap", task.poly_cap);
            let v = check_homotopy_stable(&h.witness, &h.from, &h.to)?;
            cx.put("holds", v.holds);
            cx.put("failure", v.failure.as_ref().map_or(Value::Null, |f| Value::from(f.to_string())));
            cx.put("poly_degree", v.poly_degree);
            cx.put("stable_at_poly_cap_plus_one", v.stable.map_or(Value::Null, Value::Bool));
            Ok(v.holds)
        }
    }
}

fn check(cx: &mut Ctx<'_>) -> Run<bool> {
    let models: Vec<(Dgl, Option<ElabModel>)> = if cx.task.model.is_some() || cx.ws.order.len() == 1 {
        vec![cx.model()?]
    } else {
        cx.ws.order.iter().map(|n| (cx.ws.models[n].dgl.clone(), Some(cx.ws.models[n].clone()))).collect()
    };
    let mut rows = Vec::new();
    for (dgl, elab) in &models {
        let mut row = Map::new();
        row.insert("model".into(), Value::from(elab.as_ref().map_or_else(|| cx.task.model.clone().unwrap_or_default(), |m| m.name.clone())));
        row.insert("cap".into(), Value::from(dgl.cap()));
        row.insert("generators".into(), Value::from(dgl.gens().iter().map(|g| format!("{} : {}", g.name, g.degree)).collect::<Vec<_>>()));
        // Dgl::build has already verified d² = 0 on every generator.
        row.insert("d_squared_zero".into(), Value::from(true));
        row.insert("mc_elements".into(), Value::from(elab.as_ref().map_or(0, |m| m.mcs.len())));
        rows.push(Value::Object(row));
    }
    cx.put("models", rows);
    let morphisms: Vec<String> = cx.ws.morphisms.keys().cloned().collect();
    cx.put("morphisms", morphisms);
    let mut all = true;
    let mut hs = Vec::new();
    for (name, h) in &cx.ws.homotopies {
        let v = check_homotopy_stable(&h.witness, &h.from, &h.to)?;
        all &= v.holds;
        let mut row = Map::new();
        row.insert("homotopy".into(), Value::from(name.clone()));
        row.insert("holds".into(), Value::from(v.holds));
        row.insert("failure".into(), v.failure.map_or(Value::Null, |f| Value::from(f.to_string())));
        hs.push(Value::Object(row));
    }
    cx.put("homotopies", hs);
    cx.put("verdict", if all { "PASS" } else { "FAIL" });
    Ok(all)
}

fn homology(cx: &mut Ctx<'_>) -> Run<bool> {
    let (mut dgl, _) = cx.model()?;
    if !cx.task.exprs.is_empty() {
        let a = cx.expr(0, &dgl)?;
        cx.meta("mc", a.to_expr_string());
        dgl = dgl.perturb(&a)?;
    }
    let (lo, hi) = cx.window();
    cx.meta("range", format!("{lo}..{hi}"));
    cx.put("homology", Vec::<Value>::new());
    let complex = dgl.chain_complex(lo, hi)?;
    for n in lo..=hi {
        let h = complex.homology_at(n)?;
        let basis = dgl.lie().graded_basis(n);
        let mut row = Map::new();
        row.insert("degree".into(), Value::from(n));
        row.insert("dim".into(), Value::from(h.dimension));
        row.insert("representatives".into(), Value::from(h.cycle_reps.iter().map(|z| basis.combine(z).to_expr_string()).collect::<Vec<_>>()));
        cx.out.get_mut("homology").and_then(Value::as_array_mut).expect("inserted").push(Value::Object(row));
    }
    if let Some(w) = cx.task.word_cap {
        cx.meta("word_cap", w);
        let chains = Chains::build(&dgl, w)?;
        let lc = lie_functor(&chains.cdgc, dgl.cap())?;
        let a = alpha(&chains, &lc, &dgl)?;
        let rows: Vec<Value> = compare_homology(&a, lo, hi)?
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("degree".into(), Value::from(c.degree));
                m.insert("dim_lc".into(), Value::from(c.dim_source));
                m.insert("dim".into(), Value::from(c.dim_target));
                m.insert("alpha_rank".into(), Value::from(c.induced_rank));
                m.insert("iso".into(), Value::from(c.is_iso()));
                Value::Object(m)
            })
            .collect();
        cx.put("adjunction", rows);
    }
    Ok(true)
}

fn group_ops(cx: &mut Ctx<'_>) -> Run<bool> {
    let (dgl, _) = cx.model()?;
    let x = cx.expr(0, &dgl)?;
    let y = cx.expr(1, &dgl)?;
    match cx.task.command {
        Command::Bch => {
            cx.put("bch", report::expr(&bch(&x, &y)?));
        }
        Command::Gauge => {
            cx.put("result", report::expr(&gauge_act(&dgl, &x, &y)?));
        }
        _ => match gauge_equivalent(&dgl, &x, &y)? {
            GaugeSearch::Witness(w) => {
                cx.put("equivalent", true);
                cx.put("witness", report::expr(&w));
            }
            GaugeSearch::Obstructed { length } => {
                cx.put("equivalent", false);
                cx.put("obstructed_at_length", length);
            }
        },
    }
    Ok(true)
}

fn pi_map(cx: &mut Ctx<'_>) -> Run<bool> {
    let phi = match cx.task.morphism.clone() {
        Some(m) => cx.morphism(&m)?,
        None => DglMorphism::identity(&cx.model()?.0),
    };
    let (lo, hi) = cx.window();
    cx.meta("range", format!("{lo}..{hi}"));
    let r = mapping_space_pi(&phi, lo, hi)?;
    cx.put("pointed", report::dims(&r.pointed));
    cx.put("free", report::dims(&r.free));
    cx.put("fiber_components", r.fiber_components);
    cx.put("source_minimal", r.source_minimal);
    let les: Vec<Value> = r
        .les
        .degrees
        .iter()
        .map(|d| {
            let mut m = Map::new();
            m.insert("degree".into(), Value::from(d.degree));
            m.insert("der".into(), Value::from(d.h_a));
            m.insert("total".into(), Value::from(d.h_b));
            m.insert("sl".into(), Value::from(d.h_c));
            Value::Object(m)
        })
        .collect();
    cx.put("les", les);
    cx.put("les_exact", true);
    if let Some(w) = cx.task.word_cap {
        cx.meta("word_cap", w);
        let conv = convolution_route(&phi, w, lo.max(1), hi)?;
        let agree = r.free.iter().filter(|(n, _)| *n >= 1).eq(conv.iter());
        cx.put("convolution", report::dims(&conv));
        cx.put("routes_agree", agree);
    }
    Ok(true)
}

fn baut(cx: &mut Ctx<'_>) -> Run<bool> {
    let (dgl, elab) = cx.model()?;
    let (lo, hi) = cx.window();
    cx.meta("range", format!("{lo}..{hi}"));
    let arg: GSpecArg = cx.task.gspec.as_deref().unwrap_or("identity").parse().map_err(Failure::Message)?;
    let spec = match arg {
        GSpecArg::Identity => GSpec::Identity,
        GSpecArg::Stabilizer(f) => {
            let filt = elab.as_ref().and_then(|m| m.filtrations.iter().find(|x| x.name == f)).cloned();
            GSpec::Stabilizer(filt.ok_or_else(|| Failure::Message(format!("the model declares no filtration {f}")))?)
        }
        GSpecArg::Span(names) => {
            let mut ds = Vec::new();
            for n in names {
                let t = elab.as_ref().and_then(|m| m.derivations.iter().find(|(x, _)| *x == n)).cloned();
                ds.push(t.ok_or_else(|| Failure::Message(format!("the model declares no derivation {n}")))?);
            }
            GSpec::Span(ds)
        }
    };
    cx.meta("gspec", spec.to_string());
    let mode = if cx.task.command == Command::Baut { Mode::Free } else { Mode::Pointed };
    cx.meta("mode", mode.to_string());
    let r = classifying_invariants(&dgl, &spec, mode, lo, hi, cx.task.postnikov)?;
    cx.put("homology", report::dims(&r.homology));
    cx.put("der_h0", r.der_h0);
    cx.put("ad_image", r.ad_image);
    let mut g = Map::new();
    g.insert("dim".into(), Value::from(r.group.dim()));
    g.insert("representatives".into(), Value::from(r.group.representatives().iter().map(|t| report::derivation(dgl.lie(), t)).collect::<Vec<_>>()));
    g.insert("structure_constants".into(), report::structure_constants(r.group.structure_constants()));
    g.insert("nilpotency_class".into(), Value::from(r.group.nilpotency_class()));
    g.insert("abelian".into(), Value::from(r.group.is_abelian()));
    cx.put("group", Value::Object(g));
    cx.put("homology_nilpotency", r.homology_nilpotency);
    cx.put("saturated", r.saturated.map_or(Value::Null, Value::Bool));
    if let Some((n, dims)) = &r.postnikov {
        let mut m = Map::new();
        m.insert("stage".into(), Value::from(*n));
        m.insert("homology".into(), report::dims(dims));
        cx.put("postnikov", Value::Object(m));
    }
    Ok(true)
}

/// The part of a result that must not move between `cap` and `cap + 1`.
fn signature(cmd: Command, out: &Map<String, Value>) -> Value {
    let keep: &[&str] = match cmd {
        Command::Homology => &["homology", "adjunction"],
        Command::H0 => &["dim"],
        Command::PiMap => &["pointed", "free", "fiber_components"],
        _ => &["homology", "der_h0", "ad_image"],
    };
    let strip = |v: &Value| -> Value {
        match v {
            Value::Array(rows) => Value::Array(
                rows.iter()
                    .map(|r| match r {
                        Value::Object(m) => Value::Object(m.iter().filter(|(k, _)| *k != "representatives").map(|(k, v)| (k.clone(), v.clone())).collect()),
                        other => other.clone(),
                    })
                    .collect(),
            ),
            other => other.clone(),
        }
    };
    Value::Object(keep.iter().filter_map(|k| out.get(*k).map(|v| (k.to_string(), strip(v)))).collect())
}

fn fail(report: &mut Report, task: &Task, f: Failure) {
    match f {
        Failure::Source(ds) => {
            report.status = Status::Diagnostics;
            let src = task.source.as_deref().unwrap_or("");
            let prefix = task.file.as_deref().map(|p| format!("{p}:")).unwrap_or_default();
            report.diagnostics.extend(ds.iter().map(|d| format!("{prefix}{}", d.render(src))));
        }
        Failure::Message(m) => {
            report.status = Status::Diagnostics;
            report.diagnostics.push(format!("error: {m}"));
        }
        Failure::Lib(e) => {
            report.status = if matches!(e, Error::Resource(_)) { Status::ResourceLimit } else { Status::Diagnostics };
            report.diagnostics.push(format!("error: {e}"));
        }
    }
}

pub fn run_task(task: &Task) -> Report {
    let start = Instant::now();
    let mut report = Report::new(task.echo());
    let errs = task.validate();
    if !errs.is_empty() {
        report.status = Status::Diagnostics;
        report.diagnostics = errs.into_iter().map(|e| format!("error: {e}")).collect();
        report.elapsed = start.elapsed();
        return report;
    }
    let doc = match &task.source {
        Some(src) => {
            report.meta.insert("source_sha256".into(), Value::from(format!("{:x}", Sha256::digest(src.as_bytes()))));
            match parse_model(src) {
                Ok(doc) => doc,
                Err(ds) => {
                    fail(&mut report, task, Failure::Source(ds));
                    report.elapsed = start.elapsed();
                    return report;
                }
            }
        }
        None => ModelDoc { source: String::new(), items: Vec::new() },
    };
    let mut meta = Map::new();
    let mut out = Map::new();
    let result = exec(task, &doc, task.cap, &mut meta, &mut out);
    report.meta.extend(meta);
    report.results = out;
    match result {
        Ok(verdict) => report.status = if verdict { Status::Ok } else { Status::Fail },
        Err(f) => fail(&mut report, task, f),
    }
    if task.command == Command::Witness {
        report.stable = report.results.get("stable_at_poly_cap_plus_one").and_then(Value::as_bool);
    } else if task.stability && task.command.homology_bearing() && report.status == Status::Ok {
        let cap = report.meta.get("cap").and_then(Value::as_u64).expect("every model task records its cap") as usize;
        report.meta.insert("stability_cap".into(), Value::from(cap + 1));
        let (mut meta, mut again) = (Map::new(), Map::new());
        match exec(task, &doc, Some(cap + 1), &mut meta, &mut again) {
            Ok(_) => report.stable = Some(signature(task.command, &report.results) == signature(task.command, &again)),
            Err(f) => {
                let mut scratch = Report::new(String::new());
                fail(&mut scratch, task, f);
                report.meta.insert("stability_error".into(), Value::from(scratch.diagnostics.join("; ")));
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Runs independent tasks concurrently; reports come back in task order.
pub fn run_batch(tasks: &[Task]) -> Vec<Report> {
    std::thread::scope(|s| {
        let handles: Vec<_> = tasks.iter().map(|t| s.spawn(move || run_task(t))).collect();
        handles.into_iter().map(|h| h.join().expect("task threads do not panic")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn task(cmd: Command, model: &str) -> Task {
        let mut t = Task::new(cmd);
        t.model = Some(model.into());
        t
    }

    #[test]
    fn check_on_the_interval() {
        let mut t = task(Command::Check, "L1");
        t.cap = Some(8);
        let r = run_task(&t);
        assert_eq!(r.status, Status::Ok, "{:?}", r.diagnostics);
        assert_eq!(r.results["verdict"], "PASS");
    }

    #[test]
    fn baut_of_the_two_sphere() {
        let mut t = task(Command::Baut, "sphere(2)");
        t.gspec = Some("identity".into());
        t.range = Some((1, 6));
        let r = run_task(&t);
        assert_eq!(r.exit_code(), 0, "{:?}", r.diagnostics);
        let rows = r.results["homology"].as_array().unwrap();
        let nonzero: Vec<(i64, u64)> = rows.iter().filter(|x| x["dim"] != 0).map(|x| (x["degree"].as_i64().unwrap(), x["dim"].as_u64().unwrap())).collect();
        assert_eq!(nonzero, vec![(3, 1)]);
        assert_eq!(r.stable, Some(true));
    }

    #[test]
    fn h0_of_the_wedge() {
        let mut t = task(Command::H0, "wedge(1,1)");
        t.cap = Some(2);
        let r = run_task(&t);
        assert_eq!(r.results["dim"], 3);
        assert_eq!(r.results["nilpotency_class"], 2);
        assert_eq!(r.stable, Some(false));
    }

    #[test]
    fn missing_window_is_rejected_before_computing() {
        let r = run_task(&task(Command::Homology, "sphere(2)"));
        assert_eq!(r.exit_code(), 1);
        assert!(r.diagnostics[0].contains("--range"));
        assert!(r.results.is_empty());
    }

    #[test]
    fn resource_limit_gives_exit_two_and_a_partial_report() {
        let mut t = task(Command::Homology, "wedge(1,1,1)");
        t.range = Some((0, 0));
        t.cap = Some(7);
        let r = crate::limits::with_basis_limit(100, || run_task(&t));
        assert_eq!(r.exit_code(), 2);
        assert!(r.results.contains_key("homology"));
    }

    #[test]
    fn reports_are_deterministic() {
        let mut t = task(Command::PiMap, "sphere(3)");
        t.range = Some((1, 5));
        t.word_cap = Some(3);
        t.cap = Some(4);
        let a = run_task(&t).canonical();
        let b = run_batch(&[t.clone(), t])[1].canonical();
        assert_eq!(a, b);
        assert!(a.contains("\"routes_agree\": true"), "{a}");
    }

    #[test]
    fn file_diagnostics_carry_the_path() {
        let mut t = Task::new(Command::Check);
        t.file = Some("bad.cdgl".into());
        t.source = Some("model S { gen x : 2\n d x = [x,y] }".into());
        let r = run_task(&t);
        assert_eq!(r.diagnostics, vec!["bad.cdgl:2:11: error: unknown generator y".to_string()]);
    }

    #[test]
    fn echo_quotes_expressions() {
        let mut t = task(Command::Bch, "wedge(1,1)");
        t.exprs = vec!["u".into(), "[u, v]".into()];
        assert_eq!(t.echo(), "cdgl bch --model wedge(1,1) --expr u --expr '[u, v]'");
    }
}
