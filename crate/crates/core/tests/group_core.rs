mod common;

use std::sync::Arc;

use gcover::algebra::{plus_cone_basis, trace_form, trace_form_gram, IntElement, PlusCone};
use gcover::linalg::{q, QMatrix};
use gcover::FiniteGroup;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn catalogue() -> Vec<Arc<FiniteGroup>> {
    FiniteGroup::small_groups_up_to_12()
        .into_iter()
        .map(|(_, g)| Arc::new(g))
        .collect()
}

/// Convolution straight from the multiplication table.
fn naive_mul(g: &FiniteGroup, x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0; g.order()];
    for a in 0..g.order() {
        for b in 0..g.order() {
            out[g.mul(a, b)] += x[a] * y[b];
        }
    }
    out
}

fn naive_dagger(g: &FiniteGroup, x: &[i64]) -> Vec<i64> {
    (0..g.order()).map(|h| x[g.inv(h)]).collect()
}

fn elem(g: &Arc<FiniteGroup>, x: &[i64]) -> IntElement {
    IntElement::from_i64(g, x).unwrap()
}

#[test]
fn group_axioms_hold_for_the_catalogue() {
    for g in catalogue() {
        let n = g.order();
        for a in 0..n {
            assert_eq!(g.mul(0, a), a);
            assert_eq!(g.mul(a, 0), a);
            assert_eq!(g.inv(g.inv(a)), a);
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        let mut seen = vec![false; n];
        for class in g.classes() {
            for &x in class {
                assert!(!seen[x]);
                seen[x] = true;
                for h in 0..n {
                    assert!(class.contains(&g.conj(h, x)));
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}

#[test]
fn dagger_examples() {
    let g = common::grp("Z3");
    assert_eq!(elem(&g, &[0, 1, 0]).dagger(), elem(&g, &[0, 0, 1]));
    assert_eq!(elem(&g, &[2, 3, 0]).dagger(), elem(&g, &[2, 0, 3]));
}

#[test]
fn trace_form_examples() {
    let z2 = common::grp("Z2");
    let t = elem(&z2, &[0, 1]);
    assert_eq!(trace_form(&t, &t).unwrap(), BigInt::from(2));
    for g in catalogue() {
        let one = IntElement::one(&g);
        assert_eq!(trace_form(&one, &one).unwrap(), BigInt::from(g.order()));
    }
}

#[test]
fn trace_form_gram_is_positive_definite() {
    // The Gram matrix on the basis e_g is |G|·I; check that directly and via
    // leading principal minors.
    for name in ["Z2", "Z3", "Z4", "V4", "S3", "Q8", "D4", "A4"] {
        let g = common::grp(name);
        let n = g.order();
        let gram = trace_form_gram(&g);
        assert_eq!(gram, QMatrix::identity(n).scale(&q(n as i64)), "{name}");
        for k in 1..=n {
            let minor = QMatrix::from_fn(k, k, |i, j| gram[(i, j)].clone());
            assert!(minor.determinant() > q(0), "{name}: minor {k}");
        }
    }
}

fn enumerate_plus_plus(g: &Arc<FiniteGroup>) -> Vec<Vec<BigInt>> {
    // r + r† over the basis r = e_h
    (0..g.order())
        .map(|h| {
            let mut v = vec![BigInt::zero(); g.order()];
            v[h] += 1;
            v[g.inv(h)] += 1;
            v
        })
        .collect()
}

#[test]
fn plus_cone_examples() {
    let z2 = common::grp("Z2");
    let pc = plus_cone_basis(&z2);
    assert_eq!(pc.plus, vec![elem(&z2, &[1, 0]), elem(&z2, &[0, 1])]);
    assert_eq!(pc.plus_plus, vec![elem(&z2, &[2, 0]), elem(&z2, &[0, 2])]);

    let triv = common::grp("trivial");
    let pc = plus_cone_basis(&triv);
    assert_eq!(pc.plus, vec![elem(&triv, &[1])]);
    assert_eq!(pc.plus_plus, vec![elem(&triv, &[2])]);

    let z3 = common::grp("Z3");
    let pc = plus_cone_basis(&z3);
    assert_eq!(
        pc.plus_plus,
        vec![elem(&z3, &[2, 0, 0]), elem(&z3, &[0, 1, 1])]
    );
    assert_eq!(pc.index(), BigInt::from(2));
}

#[test]
fn plus_cone_structure() {
    for g in catalogue() {
        let pc = plus_cone_basis(&g);
        let idx = pc.index();
        assert!(
            idx > BigInt::zero() && (&idx & (&idx - BigInt::one())).is_zero(),
            "index {idx} not a power of 2"
        );
        for x in &pc.plus_plus {
            assert!(PlusCone::in_plus(x) && PlusCone::in_plus_plus(x));
        }
        for x in &pc.plus {
            assert!(PlusCone::in_plus(x));
            assert!(PlusCone::in_plus_plus(&x.scale(&BigInt::from(2))));
        }
        // the enumerated r + r† are exactly the deduplicated basis
        let mut listed: Vec<Vec<BigInt>> =
            pc.plus_plus.iter().map(|x| x.coeffs().to_vec()).collect();
        let mut enumerated = enumerate_plus_plus(&g);
        listed.sort();
        enumerated.sort();
        enumerated.dedup();
        assert_eq!(listed, enumerated);
    }
}

#[test]
fn relabelling_preserves_structure() {
    let g = FiniteGroup::symmetric(3);
    let h = g.relabeled(&[0, 5, 4, 3, 2, 1]).unwrap();
    assert_eq!(h.order(), 6);
    assert_eq!(h.classes().len(), 3);
    assert!(!h.is_abelian());
}

fn group_and_pair() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>)> {
    (0..24usize).prop_flat_map(|k| {
        let n = FiniteGroup::small_groups_up_to_12()[k].1.order();
        (
            Just(k),
            prop::collection::vec(-5i64..6, n),
            prop::collection::vec(-5i64..6, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dagger_is_an_anti_automorphism((k, x, y) in group_and_pair()) {
        let g = Arc::new(FiniteGroup::small_groups_up_to_12()[k].1.clone());
        let (ex, ey) = (elem(&g, &x), elem(&g, &y));
        let xy = &ex * &ey;
        prop_assert_eq!(xy.coeffs().to_vec(), naive_mul(&g, &x, &y).into_iter().map(BigInt::from).collect::<Vec<_>>());
        prop_assert_eq!(xy.dagger(), &ey.dagger() * &ex.dagger());
        prop_assert_eq!(ex.dagger().dagger(), ex.clone());
        prop_assert_eq!(ex.dagger().coeffs().to_vec(), naive_dagger(&g, &x).into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn trace_form_is_symmetric_and_positive((k, x, y) in group_and_pair()) {
        let g = Arc::new(FiniteGroup::small_groups_up_to_12()[k].1.clone());
        let (ex, ey) = (elem(&g, &x), elem(&g, &y));
        // |G| times the coefficient of e_1 in x·y†
        let oracle = g.order() as i64 * naive_mul(&g, &x, &naive_dagger(&g, &y))[0];
        prop_assert_eq!(trace_form(&ex, &ey).unwrap(), BigInt::from(oracle));
        prop_assert_eq!(trace_form(&ex, &ey).unwrap(), trace_form(&ey, &ex).unwrap());
        let xx = trace_form(&ex, &ex).unwrap();
        let positive = if ex.is_zero() { xx.is_zero() } else { xx > BigInt::zero() };
        prop_assert!(positive);
    }
}
