// SPDX-License-Identifier: Apache-2.0
//! Free graded Lie algebras truncated at a bracket length, with elements stored
//! as their images in the tensor algebra.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use super::tensor::{word_degree, Letter, Tensor, Word};
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, SparseVec};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: &str, degree: i64) -> Generator {
        Generator { name: name.to_string(), degree }
    }
}

/// Generators together with the bracket-length cap N; elements live in 𝕃(V)/𝕃^{>N}(V).
pub struct FreeLie {
    gens: Vec<Generator>,
    degs: Vec<i64>,
    cap: usize,
    blocks: Mutex<HashMap<(i64, usize), Arc<LieBlock>>>,
    graded: Mutex<HashMap<i64, Arc<GradedBasis>>>,
}

impl fmt::Debug for FreeLie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeLie").field("gens", &self.gens).field("cap", &self.cap).finish()
    }
}

impl FreeLie {
    pub fn new(gens: Vec<Generator>, cap: usize) -> Result<Arc<FreeLie>> {
        if cap == 0 {
            return Err(Error::Usage("bracket-length cap must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for g in &gens {
            if g.degree < -1 {
                return Err(Error::Degree(format!("generator {} has degree {} < -1", g.name, g.degree)));
            }
            if !seen.insert(g.name.clone()) {
                return Err(Error::Usage(format!("duplicate generator {}", g.name)));
            }
        }
        if gens.len() > Letter::MAX as usize {
            return Err(Error::Resource("too many generators".into()));
        }
        let degs = gens.iter().map(|g| g.degree).collect();
        Ok(Arc::new(FreeLie { gens, degs, cap, blocks: Mutex::default(), graded: Mutex::default() }))
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degs(&self) -> &[i64] {
        &self.degs
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Same generators, different cap.
    pub fn with_cap(&self, cap: usize) -> Arc<FreeLie> {
        FreeLie::new(self.gens.clone(), cap).expect("generators already validated")
    }

    pub fn same_algebra(a: &Arc<FreeLie>, b: &Arc<FreeLie>) -> bool {
        Arc::ptr_eq(a, b) || (a.cap == b.cap && a.gens == b.gens)
    }

    /// Basis of the component of given degree and bracket length.
    pub fn block(self: &Arc<Self>, degree: i64, length: usize) -> Arc<LieBlock> {
        if let Some(b) = self.blocks.lock().expect("basis cache").get(&(degree, length)) {
            return b.clone();
        }
        let block = Arc::new(self.build_block(degree, length));
        self.blocks.lock().expect("basis cache").insert((degree, length), block.clone());
        block
    }

    fn build_block(self: &Arc<Self>, degree: i64, length: usize) -> LieBlock {
        let mut candidates: Vec<(Tensor, BracketTree)> = Vec::new();
        if length == 1 {
            for (i, g) in self.gens.iter().enumerate() {
                if g.degree == degree {
                    candidates.push((Tensor::letter(i as Letter), BracketTree::Gen(i as Letter)));
                }
            }
        } else if length > 1 {
            for (i, g) in self.gens.iter().enumerate() {
                let sub = self.block(degree - g.degree, length - 1);
                for (t, tree) in sub.elements.iter().zip(&sub.trees) {
                    let (b, _) = Tensor::letter(i as Letter).bracket(t, &self.degs, usize::MAX);
                    candidates.push((b, BracketTree::Bracket(Box::new(BracketTree::Gen(i as Letter)), Box::new(tree.clone()))));
                }
            }
        }
        LieBlock::from_candidates(degree, length, candidates)
    }

    /// Basis of the degree-`degree` part of the truncated algebra, all lengths `1..=cap`.
    pub fn graded_basis(self: &Arc<Self>, degree: i64) -> Arc<GradedBasis> {
        if let Some(b) = self.graded.lock().expect("basis cache").get(&degree) {
            return b.clone();
        }
        let blocks: Vec<Arc<LieBlock>> = (1..=self.cap).map(|n| self.block(degree, n)).collect();
        let mut offsets = Vec::new();
        let mut total = 0;
        for b in &blocks {
            offsets.push(total);
            total += b.elements.len();
        }
        let gb = Arc::new(GradedBasis { ctx: self.clone(), degree, blocks, offsets, dim: total });
        self.graded.lock().expect("basis cache").insert(degree, gb.clone());
        gb
    }

    pub fn dim(self: &Arc<Self>, degree: i64) -> usize {
        self.graded_basis(degree).dim()
    }

    /// Degrees in which the truncated algebra can be nonzero.
    pub fn degree_span(&self) -> Option<(i64, i64)> {
        if self.gens.is_empty() {
            return None;
        }
        let lo = *self.degs.iter().min().expect("nonempty");
        let hi = *self.degs.iter().max().expect("nonempty");
        let n = self.cap as i64;
        Some((lo.min(lo * n), hi.max(hi * n)))
    }
}

/// Bracket expression over generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BracketTree {
    Gen(Letter),
    Bracket(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn render(&self, gens: &[Generator]) -> String {
        match self {
            BracketTree::Gen(i) => gens[*i as usize].name.clone(),
            BracketTree::Bracket(a, b) => format!("[{},{}]", a.render(gens), b.render(gens)),
        }
    }

    pub fn eval(&self, ctx: &Arc<FreeLie>) -> LieElement {
        match self {
            BracketTree::Gen(i) => LieElement::generator(ctx, *i as usize),
            BracketTree::Bracket(a, b) => a.eval(ctx).bracket(&b.eval(ctx)),
        }
    }
}

/// Basis of one (degree, length) component, chosen greedily from right-normed brackets.
pub struct LieBlock {
    pub degree: i64,
    pub length: usize,
    pub elements: Vec<Tensor>,
    pub trees: Vec<BracketTree>,
    word_index: BTreeMap<Word, usize>,
    /// Reduced rows: (pivot word index, row in word coordinates, row in basis coordinates).
    reduced: Vec<(usize, SparseVec, SparseVec)>,
}

impl LieBlock {
    fn from_candidates(degree: i64, length: usize, candidates: Vec<(Tensor, BracketTree)>) -> LieBlock {
        let mut word_index: BTreeMap<Word, usize> = BTreeMap::new();
        let mut ech = Echelon::new();
        let mut elements = Vec::new();
        let mut trees = Vec::new();
        for (t, tree) in candidates {
            if t.is_zero() {
                continue;
            }
            for (w, _) in t.iter() {
                let n = word_index.len();
                word_index.entry(w.clone()).or_insert(n);
            }
            let v = SparseVec::from_pairs(t.iter().map(|(w, c)| (word_index[w], c.clone())));
            if ech.insert(&v) {
                elements.push(t);
                trees.push(tree);
            }
        }
        // Row-reduce [elements | identity] to read coordinates off pivot words.
        let width = word_index.len();
        let mut aug = Echelon::new();
        for (i, t) in elements.iter().enumerate() {
            let mut v = SparseVec::from_pairs(t.iter().map(|(w, c)| (word_index[w], c.clone())));
            v.set(width + i, Rat::one());
            aug.insert(&v);
        }
        let reduced = aug
            .rref()
            .into_iter()
            .map(|(p, row)| {
                let words = SparseVec::from_pairs(row.iter().filter(|(i, _)| *i < width).map(|(i, c)| (i, c.clone())));
                let coords = SparseVec::from_pairs(row.iter().filter(|(i, _)| *i >= width).map(|(i, c)| (i - width, c.clone())));
                (p, words, coords)
            })
            .collect();
        LieBlock { degree, length, elements, trees, word_index, reduced }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Coordinates of a tensor supported in this block.
    pub fn coordinates(&self, t: &Tensor) -> Result<SparseVec> {
        let mut v = SparseVec::new();
        for (w, c) in t.iter() {
            match self.word_index.get(w) {
                Some(i) => v.set(*i, c.clone()),
                None => return Err(Error::NotInSpan),
            }
        }
        let mut coords = SparseVec::new();
        let mut rebuilt = SparseVec::new();
        for (p, words, basis) in &self.reduced {
            let r = v.get(*p);
            if !r.is_zero() {
                coords.add_scaled(basis, &r);
                rebuilt.add_scaled(words, &r);
            }
        }
        if rebuilt != v {
            return Err(Error::NotInSpan);
        }
        Ok(coords)
    }
}

/// Basis of a whole degree of the truncated algebra.
pub struct GradedBasis {
    ctx: Arc<FreeLie>,
    pub degree: i64,
    blocks: Vec<Arc<LieBlock>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl GradedBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn element(&self, i: usize) -> LieElement {
        let (b, k) = self.locate(i);
        LieElement::from_tensor(&self.ctx, self.blocks[b].elements[k].clone())
    }

    pub fn elements(&self) -> Vec<LieElement> {
        (0..self.dim).map(|i| self.element(i)).collect()
    }

    pub fn tree(&self, i: usize) -> &BracketTree {
        let (b, k) = self.locate(i);
        &self.blocks[b].trees[k]
    }

    pub fn label(&self, i: usize) -> String {
        self.tree(i).render(self.ctx.gens())
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim).map(|i| self.label(i)).collect()
    }

    /// Bracket length of the i-th basis element.
    pub fn length_of(&self, i: usize) -> usize {
        self.locate(i).0 + 1
    }

    fn locate(&self, i: usize) -> (usize, usize) {
        let b = self.offsets.partition_point(|o| *o <= i) - 1;
        (b, i - self.offsets[b])
    }

    pub fn coordinates(&self, e: &LieElement) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        let mut by_len: BTreeMap<usize, Tensor> = BTreeMap::new();
        for (w, c) in e.terms().iter() {
            if word_degree(w, self.ctx.degs()) != self.degree {
                return Err(Error::Degree(format!("element is not homogeneous of degree {}", self.degree)));
            }
            by_len.entry(w.len()).or_default().add_term(w.clone(), c);
        }
        for (n, t) in by_len {
            if n == 0 || n > self.blocks.len() {
                return Err(Error::NotInSpan);
            }
            let c = self.blocks[n - 1].coordinates(&t)?;
            out.add_scaled(&c.remap(|i| Some(i + self.offsets[n - 1])), &Rat::one());
        }
        Ok(out)
    }

    pub fn combine(&self, coords: &SparseVec) -> LieElement {
        let mut t = Tensor::zero();
        for (i, c) in coords.iter() {
            let (b, k) = self.locate(i);
            t.add_scaled(&self.blocks[b].elements[k], c);
        }
        LieElement::from_tensor(&self.ctx, t)
    }
}

/// Element of the truncated free Lie algebra, stored in the tensor algebra.
#[derive(Clone)]
pub struct LieElement {
    ctx: Arc<FreeLie>,
    terms: Tensor,
    dropped: bool,
}

impl PartialEq for LieElement {
    fn eq(&self, other: &LieElement) -> bool {
        self.terms == other.terms
    }
}

impl Eq for LieElement {}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tensor_string())
    }
}

impl LieElement {
    pub fn zero(ctx: &Arc<FreeLie>) -> LieElement {
        LieElement { ctx: ctx.clone(), terms: Tensor::zero(), dropped: false }
    }

    pub fn generator(ctx: &Arc<FreeLie>, i: usize) -> LieElement {
        LieElement { ctx: ctx.clone(), terms: Tensor::letter(i as Letter), dropped: false }
    }

    pub fn named(ctx: &Arc<FreeLie>, name: &str) -> Result<LieElement> {
        ctx.index_of(name).map(|i| LieElement::generator(ctx, i)).ok_or_else(|| Error::Usage(format!("unknown generator {name}")))
    }

    /// Wraps a tensor assumed to be a Lie element; words beyond the cap are dropped.
    pub fn from_tensor(ctx: &Arc<FreeLie>, mut t: Tensor) -> LieElement {
        let dropped = t.truncate(ctx.cap);
        LieElement { ctx: ctx.clone(), terms: t, dropped }
    }

    /// Like `from_tensor`, but verifies Lie membership.
    pub fn try_from_tensor(ctx: &Arc<FreeLie>, t: Tensor) -> Result<LieElement> {
        if !t.is_lie(ctx.degs()) {
            return Err(Error::Internal("tensor is not in the free Lie algebra".into()));
        }
        Ok(LieElement::from_tensor(ctx, t))
    }

    pub fn ctx(&self) -> &Arc<FreeLie> {
        &self.ctx
    }

    pub fn terms(&self) -> &Tensor {
        &self.terms
    }

    pub fn into_terms(self) -> Tensor {
        self.terms
    }

    /// Whether some word was dropped by the cap while producing this element.
    pub fn was_truncated(&self) -> bool {
        self.dropped
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    fn check_ctx(&self, other: &LieElement) {
        assert!(FreeLie::same_algebra(&self.ctx, &other.ctx), "elements of different algebras");
    }

    fn wrap(&self, terms: Tensor, dropped: bool) -> LieElement {
        LieElement { ctx: self.ctx.clone(), terms, dropped }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        self.check_ctx(other);
        let mut t = self.terms.clone();
        t.add_scaled(&other.terms, &Rat::one());
        self.wrap(t, self.dropped || other.dropped)
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.check_ctx(other);
        let mut t = self.terms.clone();
        t.add_scaled(&other.terms, &Rat::from_int(-1));
        self.wrap(t, self.dropped || other.dropped)
    }

    pub fn scale(&self, c: &Rat) -> LieElement {
        self.wrap(self.terms.scaled(c), self.dropped)
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&Rat::from_int(-1))
    }

    pub fn add_scaled(&mut self, other: &LieElement, c: &Rat) {
        self.check_ctx(other);
        self.terms.add_scaled(&other.terms, c);
        self.dropped |= other.dropped;
    }

    pub fn bracket(&self, other: &LieElement) -> LieElement {
        self.check_ctx(other);
        let (t, d) = self.terms.bracket(&other.terms, self.ctx.degs(), self.ctx.cap);
        self.wrap(t, d || self.dropped || other.dropped)
    }

    /// `ad_self^k(other)`
    pub fn ad_power(&self, k: usize, other: &LieElement) -> LieElement {
        let mut acc = other.clone();
        for _ in 0..k {
            if acc.is_zero() {
                break;
            }
            acc = self.bracket(&acc);
        }
        acc
    }

    /// Degrees of the words present.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.terms.iter().map(|(w, _)| word_degree(w, self.ctx.degs())).collect()
    }

    /// The degree if homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        let d = self.degrees();
        if d.len() == 1 {
            d.into_iter().next()
        } else {
            None
        }
    }

    /// True for zero or for a homogeneous element of degree `n`.
    pub fn is_of_degree(&self, n: i64) -> bool {
        self.degrees().iter().all(|d| *d == n)
    }

    pub fn min_length(&self) -> Option<usize> {
        self.terms.min_len()
    }

    pub fn length_component(&self, n: usize) -> LieElement {
        self.wrap(self.terms.length_component(n), false)
    }

    pub fn truncated(&self, cap: usize) -> LieElement {
        let mut t = self.terms.clone();
        let d = t.truncate(cap);
        self.wrap(t, self.dropped || d)
    }

    /// Same element viewed in an algebra with the same generators and another cap.
    pub fn recap(&self, ctx: &Arc<FreeLie>) -> LieElement {
        assert_eq!(self.ctx.gens(), ctx.gens(), "recap needs identical generators");
        LieElement::from_tensor(ctx, self.terms.clone())
    }

    pub fn is_lie(&self) -> bool {
        self.terms.is_lie(self.ctx.degs())
    }

    /// Image under an algebra map given by images of generators (in the target algebra).
    pub fn substitute(&self, images: &[LieElement], target: &Arc<FreeLie>) -> LieElement {
        let imgs: Vec<Tensor> = images.iter().map(|e| e.terms.clone()).collect();
        let (t, d) = self.terms.substitute(&imgs, target.cap);
        LieElement { ctx: target.clone(), terms: t, dropped: d || self.dropped }
    }

    /// Apply the degree-`k` derivation (or twisted derivation over `base`) with the given generator values.
    pub fn apply_derivation(&self, values: &[LieElement], k: i64, base: Option<&[LieElement]>, target: &Arc<FreeLie>) -> LieElement {
        let vals: Vec<Tensor> = values.iter().map(|e| e.terms.clone()).collect();
        let base_t: Option<Vec<Tensor>> = base.map(|b| b.iter().map(|e| e.terms.clone()).collect());
        let (t, d) = self.terms.apply_derivation(&vals, k, base_t.as_deref(), self.ctx.degs(), target.cap);
        LieElement { ctx: target.clone(), terms: t, dropped: d || self.dropped }
    }

    /// Tensor-algebra rendering, e.g. `u v - v u`.
    pub fn tensor_string(&self) -> String {
        if self.terms.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let word: Vec<&str> = w.iter().map(|l| self.ctx.gens()[*l as usize].name.as_str()).collect();
            let neg = c.is_negative();
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let a = c.abs();
            if !a.is_one() {
                s.push_str(&format!("{a} "));
            }
            s.push_str(&word.join(" "));
        }
        s
    }

    /// Coordinates in the bracket bases of each (degree, length) block, as a bracket expression.
    pub fn bracket_terms(&self) -> Result<Vec<(Rat, BracketTree)>> {
        let mut by_block: BTreeMap<(usize, i64), Tensor> = BTreeMap::new();
        for (w, c) in self.terms.iter() {
            by_block.entry((w.len(), word_degree(w, self.ctx.degs()))).or_default().add_term(w.clone(), c);
        }
        let mut out = Vec::new();
        for ((len, deg), t) in by_block {
            let block = self.ctx.block(deg, len);
            let coords = block.coordinates(&t)?;
            for (i, c) in coords.iter() {
                out.push((c.clone(), block.trees[i].clone()));
            }
        }
        Ok(out)
    }

    /// Canonical bracket-expression text.
    pub fn to_expr_string(&self) -> String {
        match self.bracket_terms() {
            Ok(terms) => render_terms(&terms, self.ctx.gens()),
            Err(_) => format!("<non-Lie: {}>", self.tensor_string()),
        }
    }
}

pub fn render_terms(terms: &[(Rat, BracketTree)], gens: &[Generator]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (c, t)) in terms.iter().enumerate() {
        let body = t.render(gens);
        let neg = c.is_negative();
        let a = c.abs();
        if k > 0 {
            s.push_str(if neg { " - " } else { " + " });
        } else if neg {
            s.push('-');
        }
        if a.is_one() {
            s.push_str(&body);
        } else {
            s.push_str(&format!("{a} * {body}"));
        }
    }
    s
}

/// Witt number: dimension of the length-`n` part of the free Lie algebra on `k` degree-0 generators.
pub fn witt_number(k: u64, n: u64) -> u64 {
    fn mobius(mut n: u64) -> i64 {
        let mut m = 1i64;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let mut acc: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            acc += mobius(d) as i128 * (k as i128).pow((n / d) as u32);
        }
    }
    (acc / n as i128) as u64
}

/// The spanning-set basis of `lie_basis(gens, degree, length)` as Lie elements.
pub fn lie_basis(ctx: &Arc<FreeLie>, degree: i64, length: usize) -> Vec<LieElement> {
    if length == 0 || length > ctx.cap() {
        return Vec::new();
    }
    ctx.block(degree, length).elements.iter().map(|t| LieElement::from_tensor(ctx, t.clone())).collect()
}

/// Coordinates of `e` with respect to an arbitrary list of Lie elements.
pub fn coordinates(e: &LieElement, basis: &[LieElement]) -> Result<SparseVec> {
    let mut index: BTreeMap<Word, usize> = BTreeMap::new();
    for b in basis.iter().chain(std::iter::once(e)) {
        for (w, _) in b.terms().iter() {
            let n = index.len();
            index.entry(w.clone()).or_insert(n);
        }
    }
    let cols: Vec<SparseVec> =
        basis.iter().map(|b| SparseVec::from_pairs(b.terms().iter().map(|(w, c)| (index[w], c.clone())))).collect();
    let m = crate::exactlin::SparseMat::from_columns(index.len(), cols)?;
    let rhs = SparseVec::from_pairs(e.terms().iter().map(|(w, c)| (index[w], c.clone())));
    crate::exactlin::solve_linear(&m, &rhs)?.ok_or(Error::NotInSpan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(cap: usize) -> Arc<FreeLie> {
        FreeLie::new(vec![Generator::new("u", 0), Generator::new("v", 0)], cap).unwrap()
    }

    #[test]
    fn even_square_vanishes_and_odd_square_survives() {
        let even = FreeLie::new(vec![Generator::new("x", 2)], 4).unwrap();
        assert!(lie_basis(&even, 4, 2).is_empty());
        let odd = FreeLie::new(vec![Generator::new("x", 1)], 4).unwrap();
        let b = lie_basis(&odd, 2, 2);
        assert_eq!(b.len(), 1);
        assert_eq!(odd.block(2, 2).trees[0].render(odd.gens()), "[x,x]");
        assert!(lie_basis(&odd, 3, 3).is_empty());
    }

    #[test]
    fn two_generator_dimensions() {
        let ctx = uv(6);
        let dims: Vec<usize> = (1..=6).map(|n| lie_basis(&ctx, 0, n).len()).collect();
        assert_eq!(dims, vec![2, 1, 2, 3, 6, 9]);
        for n in 1..=6u64 {
            assert_eq!(dims[n as usize - 1] as u64, witt_number(2, n));
        }
    }

    #[test]
    fn bracket_in_tensor_algebra() {
        let ctx = uv(3);
        let u = LieElement::named(&ctx, "u").unwrap();
        let v = LieElement::named(&ctx, "v").unwrap();
        assert_eq!(u.bracket(&v).tensor_string(), "u v - v u");
    }

    #[test]
    fn coordinates_examples() {
        let ctx = uv(3);
        let u = LieElement::named(&ctx, "u").unwrap();
        let v = LieElement::named(&ctx, "v").unwrap();
        assert!(coordinates(&LieElement::zero(&ctx), &[u.bracket(&v)]).unwrap().is_zero());
        assert_eq!(coordinates(&u.bracket(&v), &[u.bracket(&v)]).unwrap(), SparseVec::unit(0));
        let e = u.bracket(&u.bracket(&v)).add(&v.bracket(&u.bracket(&v)).scale(&Rat::new(1, 2)));
        let basis = lie_basis(&ctx, 0, 3);
        let c = coordinates(&e, &basis).unwrap();
        let mut rebuilt = LieElement::zero(&ctx);
        for (i, x) in c.iter() {
            rebuilt.add_scaled(&basis[i], x);
        }
        assert_eq!(rebuilt, e);
        let gb = ctx.graded_basis(0);
        assert_eq!(gb.combine(&gb.coordinates(&e).unwrap()), e);
        assert!(matches!(gb.coordinates(&u.bracket(&v).add(&LieElement::from_tensor(&ctx, u.terms().mul(v.terms(), 3).0))), Err(Error::NotInSpan)));
    }

    #[test]
    fn truncation_drops_long_words() {
        let ctx = uv(2);
        let u = LieElement::named(&ctx, "u").unwrap();
        let v = LieElement::named(&ctx, "v").unwrap();
        let t = u.bracket(&u.bracket(&v));
        assert!(t.is_zero());
        assert!(t.was_truncated());
    }

    #[test]
    fn rejects_low_degrees() {
        assert!(matches!(FreeLie::new(vec![Generator::new("a", -2)], 3), Err(Error::Degree(_))));
    }

    #[test]
    fn expression_rendering() {
        let ctx = uv(3);
        let u = LieElement::named(&ctx, "u").unwrap();
        let v = LieElement::named(&ctx, "v").unwrap();
        let e = u.add(&u.bracket(&v).scale(&Rat::new(-1, 2)));
        assert_eq!(e.to_expr_string(), "u - 1/2 * [u,v]");
    }
}
