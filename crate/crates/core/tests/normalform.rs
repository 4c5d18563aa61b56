mod common;

use common::{full_palette, int_labels, random_state, random_term, rng, DESK};
use proptest::prelude::*;
use zw::normalform::{
    bent_nf_to_term, generator_nf, nf_negate, nf_of_state, nf_tensor, nf_to_term, nf_trace, normalize, not,
};
use zw::rules::{axiom_instances, derived_instances, Bounds};
use zw::semantics::{interpret, map_equal, SparseMap};
use zw::term::padded;
use zw::{BigInt, GaussianRational, Generator, NormalForm, Scalar, Term};

type T = Term<BigInt>;

fn b(s: &str) -> Vec<u8> {
    s.bytes().map(|c| c - b'0').collect()
}

fn nf(rows: &[(i64, &str)]) -> NormalForm<BigInt> {
    let n = rows.first().map_or(0, |r| r.1.len());
    NormalForm::from_rows(2, n, rows.iter().map(|(v, w)| (BigInt::from(*v), b(w))))
}

fn eval(t: &T) -> SparseMap<BigInt> {
    interpret(t, 2).unwrap()
}

#[test]
fn rows_merge_and_sort() {
    let a = nf(&[(1, "01"), (2, "01"), (1, "11")]);
    assert_eq!(a.rows(), nf(&[(3, "01"), (1, "11")]).rows());
    let c = nf(&[(1, "11"), (-1, "11"), (4, "00")]);
    assert_eq!(c.rows(), &[(BigInt::from(4), b("00"))]);
}

#[test]
fn doubled_wire_row_vanishes() {
    // a white node sending two wires to the same output contributes nothing
    let pre = T::parse("w(0,2) ; (z(1,2)[5] * z(1,1)[3]) ; w(3,1) ; w(1,1)").unwrap();
    let with_row_deleted = nf(&[(3, "1")]);
    assert!(map_equal(&eval(&pre), &with_row_deleted.state()));
    let pre_nf = NormalForm::from_rows(2, 1, [(BigInt::from(5), vec![2]), (BigInt::from(3), vec![1])]);
    assert_eq!(pre_nf, with_row_deleted);
}

#[test]
fn states_to_rows() {
    let ghz = eval(&T::parse("z(0,3)[1]").unwrap());
    assert_eq!(nf_of_state(&ghz).unwrap(), nf(&[(1, "000"), (1, "111")]));
    let w2 = eval(&T::w(0, 2));
    assert_eq!(nf_of_state(&w2).unwrap(), nf(&[(1, "01"), (1, "10")]));
}

#[test]
fn tensor_with_empty_absorbs() {
    let e = NormalForm::<BigInt>::empty(2, 2);
    assert!(nf_tensor(&e, &nf(&[(1, "01")])).is_empty());
    assert!(nf_tensor(&nf(&[(2, "1")]), &e).is_empty());
}

#[test]
fn traces() {
    let z2 = generator_nf(&Generator::ZSpider(0, 2, BigInt::from(1))).unwrap().nf;
    assert_eq!(nf_trace(&z2, 0, 1).unwrap(), nf(&[(2, "")]));
    let w2 = generator_nf::<BigInt>(&Generator::WSpider(0, 2)).unwrap().nf;
    assert!(nf_trace(&w2, 0, 1).unwrap().is_empty());
    assert_eq!(nf_trace(&nf(&[(1, "00"), (1, "11"), (1, "01")]), 0, 1).unwrap(), nf(&[(2, "")]));
    assert!(nf_trace(&w2, 0, 0).is_err());
    assert!(nf_trace(&w2, 0, 2).is_err());
}

#[test]
fn snake_through_tensor_and_trace() {
    // (cup ⊗ cup) with the middle pair plugged is again a cup
    let z2 = generator_nf(&Generator::ZSpider(0, 2, BigInt::from(1))).unwrap().nf;
    let t = nf_trace(&nf_tensor(&z2, &z2), 1, 2).unwrap();
    let snake = T::parse("cup * cup ; id * cap * id").unwrap();
    assert_eq!(t, nf_of_state(&eval(&snake)).unwrap());
}

#[test]
fn generator_tables() {
    let x = generator_nf::<BigInt>(&Generator::Cross).unwrap();
    assert_eq!((x.n_in, x.n_out), (2, 2));
    assert_eq!(x.nf, nf(&[(1, "0000"), (1, "0110"), (1, "1001"), (-1, "1111")]));
    let z = generator_nf(&Generator::ZSpider(0, 3, BigInt::from(7))).unwrap();
    assert_eq!(z.nf, nf(&[(1, "000"), (7, "111")]));
    assert_eq!(generator_nf::<BigInt>(&Generator::Cap).unwrap().nf, nf(&[(1, "00"), (1, "11")]));
}

#[test]
fn normalize_examples() {
    let t = T::parse("w(0,3) ; id * id * id").unwrap();
    assert_eq!(normalize(&t).unwrap().nf, nf_of_state(&eval(&T::w(0, 3))).unwrap());
    let snake = normalize(&T::parse("(id * cup) ; (cap * id)").unwrap()).unwrap();
    assert_eq!(snake, normalize(&T::id()).unwrap());
    let hopf_l = T::parse("w(1,1) ; w(1,2) ; (id * ((id * cup) ; (x * id) ; (id * cap))) ; w(2,1) ; w(1,1)").unwrap();
    let hopf_r = T::parse("(w(1,1) ; w(1,0)) ; (w(0,1) ; w(1,1))").unwrap();
    assert_eq!(normalize(&hopf_l).unwrap(), normalize(&hopf_r).unwrap());
    assert!(normalize(&Term::<zw::Complex64>::id()).is_err());
}

#[test]
fn bent_rebuild() {
    let t = T::parse("z(2,1)[3] ; w(1,2)").unwrap();
    let rebuilt = bent_nf_to_term(&normalize(&t).unwrap()).unwrap();
    assert_eq!(rebuilt.arity(), (2, 2));
    assert!(map_equal(&eval(&rebuilt), &eval(&t)));
}

#[test]
fn json_round_trip() {
    let a = nf(&[(-3, "0110"), (1, "1111")]);
    let text = serde_json::to_string(&a.to_json()).unwrap();
    let back = NormalForm::<BigInt>::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(a, back);
}

fn canonical_on_rule_sides<S: Scalar>() {
    let b = Bounds::default();
    let rules = axiom_instances::<S>(&b).unwrap().into_iter().chain(derived_instances::<S>(&b).unwrap());
    for r in rules {
        let (l, rt) = (normalize(&r.lhs).unwrap(), normalize(&r.rhs).unwrap());
        assert_eq!(l, rt, "{} [{}]", r.name, r.params);
    }
}

#[test]
fn canonical_on_rule_sides_integers() {
    canonical_on_rule_sides::<BigInt>();
}

#[test]
fn canonical_on_rule_sides_gaussian() {
    canonical_on_rule_sides::<GaussianRational>();
}

fn small_nf(seed: u64, n: usize) -> NormalForm<BigInt> {
    let vals: Vec<BigInt> = [1, -1, 2, 3, -5].iter().map(|&v| BigInt::from(v)).collect();
    nf_of_state(&random_state(&mut rng(seed), 2, n, 4, &vals)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalize_matches_interpretation(seed in any::<u64>()) {
        let t: T = random_term(&mut rng(seed), &full_palette(&int_labels()), DESK);
        let direct = eval(&t);
        let n = normalize(&t).unwrap();
        prop_assert!(map_equal(&n.map().unwrap(), &direct), "{}", t);
        prop_assert_eq!(n.nf, nf_of_state(&direct.bend()).unwrap());
    }

    #[test]
    fn normalize_matches_interpretation_gaussian(seed in any::<u64>()) {
        let labels: Vec<GaussianRational> = ["i", "1+i", "-1/2", "2"].iter().map(|s| GaussianRational::parse_literal(s).unwrap()).collect();
        let t = random_term(&mut rng(seed), &full_palette(&labels), DESK);
        let direct = interpret(&t, 2).unwrap();
        prop_assert_eq!(normalize(&t).unwrap().nf, nf_of_state(&direct.bend()).unwrap());
    }

    #[test]
    fn diagram_of_normal_form(seed in any::<u64>(), n in 0usize..5) {
        let a = small_nf(seed, n);
        prop_assert_eq!(nf_of_state(&eval(&nf_to_term(&a).unwrap())).unwrap(), a);
    }

    #[test]
    fn tensor_commutes(s1 in any::<u64>(), s2 in any::<u64>(), n in 0usize..3, m in 0usize..3) {
        let (a, c) = (small_nf(s1, n), small_nf(s2, m));
        prop_assert_eq!(nf_tensor(&a, &c).state(), a.state().tensor(&c.state()));
    }

    #[test]
    fn trace_commutes(seed in any::<u64>(), n in 2usize..5, j in 0usize..5, k in 0usize..5) {
        prop_assume!(j < n && k < n && j != k);
        let a = small_nf(seed, n);
        let t = nf_to_term(&a).unwrap();
        // bring j, k next to each other, then cap them
        let (lo, hi) = (j.min(k), j.max(k));
        let mut dest: Vec<usize> = (0..n).collect();
        dest.retain(|&i| i != lo && i != hi);
        let mut order = vec![lo, hi];
        order.extend(dest);
        let mut perm = vec![0; n];
        for (pos, &wire) in order.iter().enumerate() {
            perm[wire] = pos;
        }
        let routed = match zw::term::permutation(&perm, &Generator::Swap) {
            Some(p) => t.then(p),
            None => t,
        };
        let capped = routed.then(padded(0, Term::cap(), n - 2));
        prop_assert_eq!(nf_trace(&a, j, k).unwrap(), nf_of_state(&eval(&capped)).unwrap());
    }

    #[test]
    fn negation_commutes(seed in any::<u64>(), n in 1usize..5, j in 0usize..4) {
        prop_assume!(j < n);
        let a = small_nf(seed, n);
        let t = nf_to_term(&a).unwrap().then(padded(j, not(), n - j - 1));
        prop_assert_eq!(nf_negate(&a, j).unwrap(), nf_of_state(&eval(&t)).unwrap());
    }
}
