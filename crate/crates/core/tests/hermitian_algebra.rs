mod common;

use std::sync::Arc;

use gcover::algebra::{plus_cone_basis, IntElement};
use gcover::hermitian::{
    add_vectors, commutator_identity_check, conjugation_identity, eichler, gamma_generators,
    isotropic_transvection, rho, scale_vector, sub_vectors, IntRMatrix, RMatrix, RVector,
    SkewHermitianModule,
};
use gcover::twist::solve_lambda;
use gcover::FiniteGroup;
use num_bigint::BigInt;
use proptest::prelude::*;

type M = SkewHermitianModule<BigInt>;

fn el(g: &Arc<FiniteGroup>, c: &[i64]) -> IntElement {
    IntElement::from_i64(g, c).unwrap()
}

fn hermitian(g: &Arc<FiniteGroup>, c: &[i64]) -> IntElement {
    let x = el(g, c);
    &x + &x.dagger()
}

fn form(m: &M, x: &[IntElement], y: &[IntElement]) -> IntElement {
    m.form(x, y).unwrap()
}

/// `x + ⟨x,a⟩c + ⟨x,c⟩a + ⟨x,c⟩λc`, applied directly.
fn eichler_map(
    m: &M,
    c: &RVector<BigInt>,
    a: &RVector<BigInt>,
    lambda: &IntElement,
    x: &RVector<BigInt>,
) -> RVector<BigInt> {
    let xa = form(m, x, a);
    let xc = form(m, x, c);
    let y = add_vectors(x, &scale_vector(&xa, c));
    let y = add_vectors(&y, &scale_vector(&xc, a));
    add_vectors(&y, &scale_vector(&(&xc * lambda), c))
}

#[test]
fn transvection_examples() {
    for name in ["Z2", "Z3", "S3"] {
        let g = common::grp(name);
        let m = M::hyperbolic(&g);
        let e = m.basis_vector(0);
        for r in plus_cone_basis(&g).plus_plus {
            let t = isotropic_transvection(&m, &e, &r).unwrap();
            let one = IntElement::one(&g);
            assert_eq!(
                (t.entry(0, 0), t.entry(0, 1), t.entry(1, 0), t.entry(1, 1)),
                (&one, &-&r, &IntElement::zero(&g), &one)
            );
        }
        assert!(isotropic_transvection(&m, &e, &IntElement::zero(&g))
            .unwrap()
            .is_identity());
    }
    let g = common::grp("Z2");
    let m = M::hyperbolic(&g);
    let (e, f) = (m.basis_vector(0), m.basis_vector(1));
    let r = el(&g, &[0, 2]);
    let t = isotropic_transvection(&m, &e, &r).unwrap();
    assert_eq!(t.apply(&e), e);
    assert_eq!(t.apply(&f), sub_vectors(&f, &scale_vector(&r, &e)));
}

#[test]
fn eichler_examples() {
    let g = common::grp("S3");
    let m = M::augmented(&g);
    let (e, f, c) = (m.basis_vector(0), m.basis_vector(1), m.basis_vector(2));
    let zero = IntElement::zero(&g);
    assert!(eichler(&m, &m.zero_vector(), &e, &zero)
        .unwrap()
        .is_identity());
    let x = eichler(&m, &c, &e, &zero).unwrap();
    assert_eq!(x.apply(&f), sub_vectors(&f, &c));
    assert_eq!(x.apply(&e), e);
    assert_eq!(x.apply(&c), c);
    // violated λ − λ† = ⟨a,a⟩
    let rot = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
    assert!(eichler(&m, &c, &e, &IntElement::basis(&g, rot)).is_err());
}

#[test]
fn eichler_is_a_product_of_transvections() {
    // E(c,a,0) = T_{a+c} T_a⁻¹ T_c⁻¹ for isotropic, orthogonal a and c.
    for name in ["Z2", "Z3", "S3"] {
        let g = common::grp(name);
        let m = M::hyperbolic_sum(&g, 2);
        let one = IntElement::one(&g);
        let neg = -&one;
        let (c, a) = (m.basis_vector(0), m.basis_vector(2));
        let t_ac = isotropic_transvection(&m, &add_vectors(&a, &c), &one).unwrap();
        let t_a_inv = isotropic_transvection(&m, &a, &neg).unwrap();
        let t_c_inv = isotropic_transvection(&m, &c, &neg).unwrap();
        let rhs = t_ac.compose(&t_a_inv).compose(&t_c_inv);
        assert_eq!(
            eichler(&m, &c, &a, &IntElement::zero(&g)).unwrap(),
            rhs,
            "{name}"
        );
    }
}

#[test]
fn commutator_identity_for_groups_up_to_12() {
    for (name, g) in FiniteGroup::small_groups_up_to_12() {
        let g = Arc::new(g);
        for lambda in plus_cone_basis(&g).plus_plus {
            let check = commutator_identity_check(&g, &lambda).unwrap();
            assert!(check.radical && check.nondegenerate, "{name}, λ = {lambda}");
        }
    }
}

#[test]
fn commutator_identity_oracle() {
    // [E(c,v), E(c,b)] applied vector by vector, with E(c,u)⁻¹ = E(c,−u).
    for name in ["Z3", "S3", "Q8"] {
        let g = common::grp(name);
        let m = M::hyperbolic_sum(&g, 2);
        let zero = IntElement::zero(&g);
        let (a, b, c) = (m.basis_vector(0), m.basis_vector(1), m.basis_vector(2));
        for lambda in plus_cone_basis(&g).plus_plus {
            let v = sub_vectors(&b, &scale_vector(&lambda, &a));
            let neg = |u: &RVector<BigInt>| scale_vector(&-&IntElement::one(&g), u);
            for k in 0..m.rank() {
                let x = m.basis_vector(k);
                let y = eichler_map(&m, &c, &neg(&b), &zero, &x);
                let y = eichler_map(&m, &c, &neg(&v), &zero, &y);
                let y = eichler_map(&m, &c, &b, &zero, &y);
                let y = eichler_map(&m, &c, &v, &zero, &y);
                let expected = add_vectors(
                    &x,
                    &scale_vector(&(&form(&m, &x, &c) * &lambda.scale(&BigInt::from(2))), &c),
                );
                assert_eq!(y, expected, "{name}, λ = {lambda}, basis vector {k}");
            }
        }
    }
}

#[test]
fn gamma_generators_are_unitary_and_rho_is_a_homomorphism() {
    for name in ["trivial", "Z2", "Z3", "S3", "Q8"] {
        let g = common::grp(name);
        let m = M::hyperbolic(&g);
        for gen in gamma_generators(&g) {
            assert!(gen.matrix.is_unitary(&m), "{name}: {}", gen.name);
            assert!(gen.matrix.inverse().is_some());
        }
        for x in 0..g.order() {
            for y in 0..g.order() {
                assert_eq!(rho(&g, x).compose(&rho(&g, y)), rho(&g, g.mul(x, y)));
            }
            for r in plus_cone_basis(&g).plus_plus {
                assert!(conjugation_identity(&g, x, &r).unwrap());
            }
        }
    }
}

#[test]
fn form_is_skew_and_linear() {
    let g = common::grp("S3");
    let m = M::hyperbolic_sum(&g, 2);
    let x: Vec<IntElement> = (0..4).map(|i| el(&g, &[i, 1, -2, 0, 3, i])).collect();
    let y: Vec<IntElement> = (0..4).map(|i| el(&g, &[1, 0, i, 2, -1, 1])).collect();
    let s = el(&g, &[2, -1, 0, 1, 0, 4]);
    assert_eq!(form(&m, &x, &y), -&form(&m, &y, &x).dagger());
    assert_eq!(form(&m, &scale_vector(&s, &x), &y), &s * &form(&m, &x, &y));
}

fn small_group() -> impl Strategy<Value = Arc<FiniteGroup>> {
    prop_oneof![Just("Z2"), Just("Z3"), Just("S3"), Just("Z4")].prop_map(common::grp)
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..4, n)
}

fn setup() -> impl Strategy<Value = (Arc<FiniteGroup>, Vec<i64>, Vec<i64>, Vec<i64>, Vec<i64>)> {
    small_group().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), coeffs(n), coeffs(n), coeffs(n), coeffs(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transvections_add_invert_and_preserve_the_form((g, u, w, r1, r2) in setup()) {
        let m = M::hyperbolic_sum(&g, 2);
        // a = u·e1 + w·e2 is isotropic
        let a = add_vectors(&scale_vector(&el(&g, &u), &m.basis_vector(0)), &scale_vector(&el(&g, &w), &m.basis_vector(2)));
        let (r, s) = (hermitian(&g, &r1), hermitian(&g, &r2));
        let tr = isotropic_transvection(&m, &a, &r).unwrap();
        let ts = isotropic_transvection(&m, &a, &s).unwrap();
        prop_assert_eq!(tr.compose(&ts), isotropic_transvection(&m, &a, &(&r + &s)).unwrap());
        prop_assert!(tr.is_unitary(&m));
        prop_assert_eq!(tr.inverse().unwrap(), isotropic_transvection(&m, &a, &-&r).unwrap());
        let expanded: IntRMatrix = RMatrix::from_expanded(&g, 4, &tr.expand()).unwrap();
        prop_assert_eq!(expanded, tr);
    }

    #[test]
    fn eichler_composition((g, u, w, r1, r2) in setup()) {
        // E(c,a,λ) E(c,a',λ') = E(c, a+a', λ+λ'+⟨a',a⟩) for a, a' ⊥ c
        let m = M::hyperbolic_sum(&g, 2);
        let c = m.basis_vector(0);
        let (e2, f2) = (m.basis_vector(2), m.basis_vector(3));
        let a = add_vectors(&scale_vector(&el(&g, &u), &e2), &scale_vector(&el(&g, &w), &f2));
        let a2 = add_vectors(&scale_vector(&el(&g, &r1), &e2), &scale_vector(&el(&g, &r2), &f2));
        let lam = &solve_lambda(&form(&m, &a, &a)).unwrap() + &hermitian(&g, &u);
        let lam2 = solve_lambda(&form(&m, &a2, &a2)).unwrap();
        let x = eichler(&m, &c, &a, &lam).unwrap();
        let y = eichler(&m, &c, &a2, &lam2).unwrap();
        prop_assert!(x.is_unitary(&m));
        let combined = &(&lam + &lam2) + &form(&m, &a2, &a);
        prop_assert_eq!(x.compose(&y), eichler(&m, &c, &add_vectors(&a, &a2), &combined).unwrap());
        for k in 0..4 {
            let b = m.basis_vector(k);
            prop_assert_eq!(x.apply(&b), eichler_map(&m, &c, &a, &lam, &b));
        }
    }
}
