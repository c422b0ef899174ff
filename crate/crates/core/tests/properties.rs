// SPDX-License-Identifier: Apache-2.0
//! Algebraic invariants on randomized inputs.

mod common;

use cdgl::dgl::{bch, builtins, exp_derivation, gauge_raw, log_automorphism, Derivation};
use cdgl::exactlin::{solve_linear, SparseMat, SparseVec};
use cdgl::freelie::{FreeLie, Generator, LieElement};
use cdgl::workbench::{elaborate, parse_model, Options};
use cdgl::Rat;
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

const DEGREES: std::ops::RangeInclusive<i64> = -3..=6;

fn degrees() -> Vec<i64> {
    DEGREES.collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rat_matches_bigrational(a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX) {
        let (x, y) = (Rat::new(a, b), Rat::new(c, d));
        let (bx, by) = (BigRational::new(BigInt::from(a), BigInt::from(b)), BigRational::new(BigInt::from(c), BigInt::from(d)));
        prop_assert_eq!(big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(big(&(&x * &y)), &bx * &by);
        prop_assert_eq!(big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(x.to_string().parse::<Rat>().unwrap(), x);
    }

    #[test]
    fn graded_antisymmetry_and_jacobi(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let lie = random_free(&mut rng, 4);
        let degs = degrees();
        let elems: Vec<LieElement> = (0..3).filter_map(|_| random_homogeneous(&lie, &degs, &mut rng)).collect();
        if let [a, b, c] = elems.as_slice() {
            let (p, q, r) = (a.degree().unwrap(), b.degree().unwrap(), c.degree().unwrap());
            prop_assert_eq!(a.bracket(b), b.bracket(a).scale(&-Rat::sign(p * q)));
            let jac = a.bracket(&b.bracket(c)).scale(&Rat::sign(p * r))
                .add(&b.bracket(&c.bracket(a)).scale(&Rat::sign(q * p)))
                .add(&c.bracket(&a.bracket(b)).scale(&Rat::sign(r * q)));
            prop_assert!(jac.is_zero());
        }
    }

    #[test]
    fn witt_dimensions(k in 1..=3u64, n in 1..=6u64) {
        let gens = (0..k).map(|j| Generator::new(&format!("g{j}"), 0)).collect();
        let lie = FreeLie::new(gens, n as usize).unwrap();
        prop_assert_eq!(lie.block(0, n as usize).dim() as u64, witt_oracle(k, n));
    }

    #[test]
    fn derivations_obey_leibniz(seed in any::<u64>(), k in -2..=2i64) {
        let mut rng = rng(seed);
        let lie = random_free(&mut rng, 4);
        let theta = random_derivation(&lie, k, &mut rng);
        let degs = degrees();
        if let (Some(a), Some(b)) = (random_homogeneous(&lie, &degs, &mut rng), random_homogeneous(&lie, &degs, &mut rng)) {
            let p = a.degree().unwrap();
            let lhs = theta.apply(&a.bracket(&b));
            let rhs = theta.apply(&a).bracket(&b).add(&a.bracket(&theta.apply(&b)).scale(&Rat::sign(k * p)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derivation_bracket_is_graded_lie(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let lie = random_free(&mut rng, 3);
        let (j, k) = (rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let (s, t) = (random_derivation(&lie, j, &mut rng), random_derivation(&lie, k, &mut rng));
        let st = s.bracket(&t).values;
        let ts = t.bracket(&s).scale(&-Rat::sign(j * k)).values;
        prop_assert_eq!(st, ts);
    }

    #[test]
    fn ad_is_a_dgl_morphism(seed in any::<u64>(), which in 0..3usize) {
        let mut rng = rng(seed);
        let l = [builtins::interval(5).unwrap(), builtins::circle(5).unwrap(), two_loop_model(4)][which].clone();
        let degs: Vec<i64> = (-3..=0).collect();
        if let (Some(a), Some(b)) = (random_homogeneous(l.lie(), &degs, &mut rng), random_homogeneous(l.lie(), &degs, &mut rng)) {
            let ab = a.bracket(&b);
            if !ab.is_zero() {
                prop_assert_eq!(Derivation::ad(&ab).unwrap().values, Derivation::ad(&a).unwrap().bracket(&Derivation::ad(&b).unwrap()).values);
            }
            let da = l.differential(&a);
            let expected = if da.is_zero() { vec![LieElement::zero(l.lie()); l.lie().rank()] } else { Derivation::ad(&da).unwrap().values };
            prop_assert_eq!(Derivation::ad(&a).unwrap().boundary(&l).values, expected);
        }
    }

    #[test]
    fn differential_is_a_derivation_of_square_zero(seed in any::<u64>(), which in 0..3usize) {
        let mut rng = rng(seed);
        let l = [builtins::interval(5).unwrap(), builtins::circle(5).unwrap(), two_loop_model(4)][which].clone();
        let degs: Vec<i64> = (-3..=0).collect();
        if let (Some(a), Some(b)) = (random_homogeneous(l.lie(), &degs, &mut rng), random_homogeneous(l.lie(), &degs, &mut rng)) {
            let p = a.degree().unwrap();
            prop_assert!(l.differential(&l.differential(&a)).is_zero());
            let lhs = l.differential(&a.bracket(&b));
            let rhs = l.differential(&a).bracket(&b).add(&a.bracket(&l.differential(&b)).scale(&Rat::sign(p)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bch_is_associative_with_inverses(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let l = builtins::wedge(&[1, 1], 4).unwrap();
        let [x, y, z] = [0, 1, 2].map(|_| random_element(l.lie(), 0, 0.5, &mut rng));
        prop_assert_eq!(bch(&bch(&x, &y).unwrap(), &z).unwrap(), bch(&x, &bch(&y, &z).unwrap()).unwrap());
        prop_assert!(bch(&x, &x.neg()).unwrap().is_zero());
        let expected = bch_oracle(&series_of(x.terms()), &series_of(y.terms()), 4);
        prop_assert_eq!(series_of(bch(&x, &y).unwrap().terms()), expected);
    }

    #[test]
    fn exp_and_log_are_inverse(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let l = builtins::wedge(&[1, 1], 4).unwrap();
        // values of length at least two make θ pro-nilpotent
        let values = (0..2).map(|_| {
            let e = random_element(l.lie(), 0, 0.5, &mut rng);
            e.sub(&e.length_component(1))
        }).collect();
        let theta = Derivation::new(l.lie(), 0, values).unwrap();
        let images = exp_derivation(l.lie(), &theta).unwrap();
        prop_assert_eq!(log_automorphism(l.lie(), &images).unwrap(), theta);
    }

    #[test]
    fn gauge_action_composes(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let l = two_loop_model(4);
        let a = gauge_raw(&l, &random_element(l.lie(), 0, 0.3, &mut rng), &l.gen("a").unwrap());
        let x = random_element(l.lie(), 0, 0.3, &mut rng);
        let y = random_element(l.lie(), 0, 0.3, &mut rng);
        let b = gauge_raw(&l, &y, &a);
        prop_assert!(l.check_mc(&b).unwrap().0);
        prop_assert_eq!(gauge_raw(&l, &bch(&x, &y).unwrap(), &a), gauge_raw(&l, &x, &b));
        prop_assert_eq!(gauge_raw(&l, &y.neg(), &b), a);
    }

    #[test]
    fn solver_and_rank_nullity(rows in 1..6usize, cols in 1..6usize, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dense: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| if rng.gen_bool(0.4) { rng.gen_range(-3..=3) } else { 0 }).collect()).collect();
        let m = SparseMat::from_dense(&dense.iter().map(|r| r.iter().map(|x| Rat::from_int(*x)).collect()).collect::<Vec<_>>());
        prop_assert_eq!(m.rank(), int_rank(&dense));
        prop_assert_eq!(m.rank() + m.kernel().len(), cols);
        for v in m.kernel() {
            prop_assert!(m.mul_vec(&v).unwrap().is_zero());
        }
        let x = SparseVec::from_pairs((0..cols).map(|j| (j, small_rat(&mut rng))).collect::<Vec<_>>());
        let b = m.mul_vec(&x).unwrap();
        let sol = solve_linear(&m, &b).unwrap().expect("consistent system");
        prop_assert_eq!(m.mul_vec(&sol).unwrap(), b);
    }

    #[test]
    fn printed_elements_parse_back(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let l = builtins::wedge(&[1, 1], 4).unwrap();
        let e = random_element(l.lie(), 0, 0.5, &mut rng);
        let text = if e.is_zero() { "0".to_string() } else { e.to_expr_string() };
        let src = format!("truncate 4\nmodel M = wedge(1, 1)\nmodel N {{\n  gen u, v : 0\n  derivation t {{\n    u -> {text}\n  }}\n}}\n");
        let doc = parse_model(&src).map_err(|d| TestCaseError::fail(format!("{d:?}")))?;
        let ws = elaborate(&doc, &Options::default()).map_err(|d| TestCaseError::fail(format!("{d:?}")))?;
        let (_, theta) = &ws.model("N").unwrap().derivations[0];
        prop_assert_eq!(theta.values[0].terms(), e.terms());
    }
}

#[test]
fn oracles_agree_with_known_values() {
    assert_eq!((1..=6).map(|n| witt_oracle(2, n)).collect::<Vec<_>>(), [2, 1, 2, 3, 6, 9]);
    assert_eq!(witt_oracle(3, 4), 18);
    assert_eq!(int_rank(&[vec![1, 2], vec![2, 4]]), 1);
    let u = Series::from([(vec![0], BigRational::from_integer(1.into()))]);
    let v = Series::from([(vec![1], BigRational::from_integer(1.into()))]);
    let z = bch_oracle(&u, &v, 2);
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(z[&vec![0, 1]], half);
    assert_eq!(z[&vec![1, 0]], -half);
}
