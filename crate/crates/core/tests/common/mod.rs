// SPDX-License-Identifier: Apache-2.0
//! Random inputs and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use cdgl::dgl::{Derivation, Dgl};
use cdgl::freelie::{FreeLie, Generator, LieElement, Tensor};
use cdgl::Rat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with numerator in `-3..=3` and denominator in `1..=3`.
pub fn small_rat(rng: &mut impl Rng) -> Rat {
    let n = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
    Rat::new(n, rng.gen_range(1..=3))
}

/// Random combination of basis elements of one degree; each is kept with probability `density`.
pub fn random_element(lie: &Arc<FreeLie>, degree: i64, density: f64, rng: &mut impl Rng) -> LieElement {
    let mut acc = LieElement::zero(lie);
    for e in lie.graded_basis(degree).elements() {
        if rng.gen_bool(density) {
            acc.add_scaled(&e, &small_rat(rng));
        }
    }
    acc
}

/// Random nonzero homogeneous element of some degree in `degrees`, or `None` if none exists.
pub fn random_homogeneous(lie: &Arc<FreeLie>, degrees: &[i64], rng: &mut impl Rng) -> Option<LieElement> {
    let live: Vec<i64> = degrees.iter().copied().filter(|n| lie.dim(*n) > 0).collect();
    if live.is_empty() {
        return None;
    }
    let n = live[rng.gen_range(0..live.len())];
    loop {
        let e = random_element(lie, n, 0.5, rng);
        if !e.is_zero() {
            return Some(e);
        }
    }
}

/// Random derivation of degree `k`, given on generators.
pub fn random_derivation(lie: &Arc<FreeLie>, k: i64, rng: &mut impl Rng) -> Derivation {
    let values = lie.gens().iter().map(|g| random_element(lie, g.degree + k, 0.5, rng)).collect();
    Derivation { degree: k, values }
}

/// Free Lie algebra on random generator degrees in `-1..=2`.
pub fn random_free(rng: &mut impl Rng, cap: usize) -> Arc<FreeLie> {
    let rank = rng.gen_range(1..=3);
    let names = ["p", "q", "r"];
    let gens = (0..rank).map(|i| Generator::new(names[i], rng.gen_range(-1..=2))).collect();
    FreeLie::new(gens, cap).unwrap()
}

/// `𝕃(a, x, y)` with `a` Maurer–Cartan and `dx = [x,a]`, `dy = [y,a]`.
pub fn two_loop_model(cap: usize) -> Dgl {
    let lie = FreeLie::new(vec![Generator::new("a", -1), Generator::new("x", 0), Generator::new("y", 0)], cap).unwrap();
    let a = LieElement::generator(&lie, 0);
    let x = LieElement::generator(&lie, 1);
    let y = LieElement::generator(&lie, 2);
    Dgl::build(lie, vec![a.bracket(&a).scale(&Rat::new(-1, 2)), x.bracket(&a), y.bracket(&a)]).unwrap()
}

pub fn big(r: &Rat) -> BigRational {
    BigRational::new(r.numer(), r.denom())
}

/// Noncommutative series over an ungraded alphabet, truncated by word length.
pub type Series = BTreeMap<Vec<u16>, BigRational>;

pub fn series_of(t: &Tensor) -> Series {
    t.iter().map(|(w, c)| (w.to_vec(), big(c))).collect()
}

fn add_into(acc: &mut Series, w: Vec<u16>, c: BigRational) {
    let slot = acc.entry(w.clone()).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&w);
    }
}

pub fn series_mul(a: &Series, b: &Series, cap: usize) -> Series {
    let mut out = Series::new();
    for (u, x) in a {
        for (v, y) in b {
            if u.len() + v.len() <= cap {
                add_into(&mut out, [u.as_slice(), v.as_slice()].concat(), x * y);
            }
        }
    }
    out
}

fn unit() -> Series {
    Series::from([(Vec::new(), BigRational::one())])
}

/// `Σ xⁿ/n!` for `x` without constant term.
pub fn series_exp(x: &Series, cap: usize) -> Series {
    let mut out = unit();
    let mut power = unit();
    let mut fact = BigInt::one();
    for n in 1..=cap {
        power = series_mul(&power, x, cap);
        fact *= BigInt::from(n);
        for (w, c) in &power {
            add_into(&mut out, w.clone(), c / BigRational::from_integer(fact.clone()));
        }
    }
    out
}

/// `log(1 + z) = Σ (−1)^{n+1} zⁿ/n` for `z` without constant term.
pub fn series_log1p(z: &Series, cap: usize) -> Series {
    let mut out = Series::new();
    let mut power = unit();
    for n in 1..=cap {
        power = series_mul(&power, z, cap);
        let c = BigRational::new(BigInt::from(if n % 2 == 1 { 1 } else { -1 }), BigInt::from(n));
        for (w, v) in &power {
            add_into(&mut out, w.clone(), v * &c);
        }
    }
    out
}

/// `log(exp(x)·exp(y))` in the truncated tensor algebra.
pub fn bch_oracle(x: &Series, y: &Series, cap: usize) -> Series {
    let mut z = series_mul(&series_exp(x, cap), &series_exp(y, cap), cap);
    add_into(&mut z, Vec::new(), -BigRational::one());
    series_log1p(&z, cap)
}

fn mobius(n: u64) -> i64 {
    let (mut m, mut p, mut sign) = (n, 2, 1);
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// `(1/n) Σ_{d|n} μ(d) k^{n/d}`
pub fn witt_oracle(k: u64, n: u64) -> u64 {
    let total: i64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mobius(d) * (k as i64).pow((n / d) as u32)).sum();
    (total / n as i64) as u64
}

/// Rank of a small integer matrix by exact elimination over ℚ.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect()).collect();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[rank][col];
                let pivot = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}
