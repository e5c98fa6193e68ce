mod common;

use gcover::algebra::{plus_cone_basis, IntElement};
use gcover::diagnostics::{GeneratedGroup, Status};
use gcover::hermitian::{isotropic_transvection, RMatrix, SkewHermitianModule};
use gcover::homology::{CycleClass, HomologyModule};
use gcover::linalg::ZMatrix;
use gcover::twist::{
    complete_to_hyperbolic, d_beta, d_beta_check, embed_summand, gamma_ab_generators, multi_twist,
    realize_group_element, solve_lambda, transvection, HyperbolicPair,
};
use gcover::Error;
use num_bigint::BigInt;

/// `x ↦ x + (x·v)v` straight from J.
fn classical(h: &HomologyModule, v: &CycleClass) -> ZMatrix {
    let j = h.intersection();
    let n = h.rank();
    let jv = j.mul_vec(&v.coords);
    ZMatrix::from_fn(n, n, |i, k| {
        let delta = BigInt::from(i64::from(i == k));
        delta + &jv[k] * &v.coords[i]
    })
}

fn c2_pair(h: &HomologyModule) -> HyperbolicPair {
    complete_to_hyperbolic(h, &common::lift(h, "x2"), &common::lift(h, "y2")).unwrap()
}

fn assert_flags(h: &HomologyModule, m: &ZMatrix) {
    let j = h.intersection();
    assert_eq!(&(&m.transpose() * j) * m, *j);
    for g in h.actions() {
        assert_eq!(g * m, m * g);
    }
}

#[test]
fn multi_twist_examples() {
    let h = common::module(&common::trivial_genus2_spec());
    let a = common::lift(&h, "x1");
    assert_eq!(multi_twist(&h, &a).unwrap().matrix(), &classical(&h, &a));

    let h = common::module(&common::c2_spec());
    let a = common::lift(&h, "x2");
    let m = multi_twist(&h, &a).unwrap();
    assert_flags(&h, m.matrix());
    let oracle = &classical(&h, &a) * &classical(&h, &h.act(1, &a));
    assert_eq!(m.matrix(), &oracle);
    assert_eq!(
        m,
        transvection(&h, &a, &IntElement::one(h.group())).unwrap()
    );
    assert!(multi_twist(&h, &CycleClass::zero(6))
        .unwrap()
        .matrix()
        .is_identity());

    // over ℤ[ℤ/3] the class a + t·b has ⟨x,x⟩ = t² − t
    let h = common::module(&common::z3_spec());
    let not_isotropic = common::lift(&h, "x2").add(&h.act(1, &common::lift(&h, "y2")));
    assert!(!h.hermitian_form(&not_isotropic, &not_isotropic).is_zero());
    assert!(matches!(
        multi_twist(&h, &not_isotropic),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn d_beta_double_computation() {
    for (spec, alpha) in [
        (common::c2_spec(), "x2"),
        (common::z3_spec(), "x2"),
        (common::s3_spec(), "y2"),
    ] {
        let h = common::module(&spec);
        let a = common::lift(&h, alpha);
        assert!(d_beta(&h, &a, 0).unwrap().matrix().is_identity());
        for k in 0..h.group().order() {
            let check = d_beta_check(&h, &a, k).unwrap();
            assert!(check.agree(), "h = {}", h.group().label(k));
            // oracle: Π_g classical transvections along g(1−h)a
            let v = a.sub(&h.act(k, &a));
            let oracle = (0..h.group().order()).fold(ZMatrix::identity(h.rank()), |acc, g| {
                &acc * &classical(&h, &h.act(g, &v))
            });
            assert_eq!(check.algebraic.matrix(), &oracle);
            assert_flags(&h, &oracle);
        }
    }
}

#[test]
fn lambda_solving() {
    let z3 = common::grp("Z3");
    // ⟨b0,b0⟩ = e_t − e_{t²}, so λ − λ† = e_{t²} − e_t
    let b0b0 = IntElement::from_i64(&z3, &[0, 1, -1]).unwrap();
    let lambda = solve_lambda(&-&b0b0).unwrap();
    assert_eq!(lambda, IntElement::from_i64(&z3, &[0, -1, 0]).unwrap());
    assert_eq!(&lambda - &lambda.dagger(), -&b0b0);
    assert!(solve_lambda(&IntElement::zero(&z3)).unwrap().is_zero());

    let z4 = common::grp("Z4");
    // skew, but with a coefficient at the involution t² — impossible for λ − λ†
    let bad = IntElement::from_i64(&z4, &[0, 1, 0, -1]).unwrap();
    assert!(solve_lambda(&bad).is_ok());
    let z2 = common::grp("Z2");
    assert!(solve_lambda(&IntElement::from_i64(&z2, &[0, 1]).unwrap()).is_err());
}

#[test]
fn completion_on_cover_classes() {
    let h = common::module(&common::c2_spec());
    let pair = c2_pair(&h);
    assert!(pair.lambda.is_zero());
    pair.verify(&h).unwrap();

    // b0 = b + t·a has ⟨b0,b0⟩ = e_t − e_{t²}; the completion must find λ = −e_t
    let h = common::module(&common::z3_spec());
    let (a, b) = (common::lift(&h, "x2"), common::lift(&h, "y2"));
    let b0 = b.add(&h.act(1, &a));
    assert_eq!(
        h.hermitian_form(&b0, &b0),
        IntElement::from_i64(h.group(), &[0, 1, -1]).unwrap()
    );
    let pair = complete_to_hyperbolic(&h, &a, &b0).unwrap();
    pair.verify(&h).unwrap();
    assert_eq!(
        pair.lambda,
        IntElement::from_i64(h.group(), &[0, -1, 0]).unwrap()
    );
    assert_eq!(pair.b, b);
    assert!(complete_to_hyperbolic(&h, &a, &a).is_err());
}

#[test]
fn projection_is_an_orthogonal_idempotent() {
    let h = common::module(&common::z3_spec());
    let pair =
        complete_to_hyperbolic(&h, &common::lift(&h, "x2"), &common::lift(&h, "y2")).unwrap();
    for i in 0..h.rank() {
        let x = h.basis_class(i);
        let p = pair.project(&h, &x);
        assert_eq!(pair.project(&h, &p), p);
        let rest = x.sub(&p);
        assert!(h.hermitian_form(&rest, &pair.a).is_zero());
        assert!(h.hermitian_form(&rest, &pair.b).is_zero());
    }
    assert_eq!(pair.project(&h, &pair.a), pair.a);
    assert_eq!(pair.project(&h, &pair.b), pair.b);
}

#[test]
fn push_maps() {
    let h = common::module(&common::c2_spec());
    let pair = c2_pair(&h);
    assert!(realize_group_element(&h, &pair, 0)
        .unwrap()
        .matrix()
        .is_identity());
    let t = realize_group_element(&h, &pair, 1).unwrap();
    // the summand has ℤ-rank 4 and t swaps a ↔ ta, b ↔ tb there
    assert_eq!(t.matrix().trace(), BigInt::from(6 - 4));
    assert!((t.matrix() * t.matrix()).is_identity());

    let h = common::module(&common::z3_spec());
    let pair =
        complete_to_hyperbolic(&h, &common::lift(&h, "x2"), &common::lift(&h, "y2")).unwrap();
    let g = h.group().clone();
    for x in 0..3 {
        for y in 0..3 {
            let lhs = realize_group_element(&h, &pair, x)
                .unwrap()
                .compose(&realize_group_element(&h, &pair, y).unwrap());
            assert_eq!(lhs, realize_group_element(&h, &pair, g.mul(x, y)).unwrap());
        }
    }
    let stale = HyperbolicPair {
        b: pair.a.clone(),
        ..pair.clone()
    };
    assert!(realize_group_element(&h, &stale, 1).is_err());
}

#[test]
fn global_transvections_match_the_summand_embedding() {
    for spec in [common::c2_spec(), common::z3_spec()] {
        let h = common::module(&spec);
        let g = h.group().clone();
        let pair =
            complete_to_hyperbolic(&h, &common::lift(&h, "x2"), &common::lift(&h, "y2")).unwrap();
        let m = SkewHermitianModule::hyperbolic(&g);
        let (e, f) = (m.basis_vector(0), m.basis_vector(1));
        for r in plus_cone_basis(&g).plus_plus {
            let local = isotropic_transvection(&m, &e, &r).unwrap();
            assert_eq!(
                transvection(&h, &pair.a, &r).unwrap(),
                embed_summand(&h, &pair, &local).unwrap()
            );
            let local = isotropic_transvection(&m, &f, &r).unwrap();
            assert_eq!(
                transvection(&h, &pair.b, &r).unwrap(),
                embed_summand(&h, &pair, &local).unwrap()
            );
        }
        let id = RMatrix::identity(&g, 2);
        assert!(embed_summand(&h, &pair, &id)
            .unwrap()
            .matrix()
            .is_identity());
    }
}

#[test]
fn generator_sets() {
    let h = common::module(&common::c2_spec());
    let pair = c2_pair(&h);
    let gens = gamma_ab_generators(&h, &pair).unwrap();
    assert_eq!(gens.len(), 7);
    for g in &gens {
        assert!(g.matrix.commutes_with_g && g.matrix.preserves_j);
        assert_flags(&h, g.matrix.matrix());
    }
    let group = GeneratedGroup::new(&h, gens);
    let target = d_beta(&h, &pair.a, 1).unwrap();
    let found = group.contains_within(&target, 4);
    assert_eq!(found.status, Status::Pass);
    assert!(found.word.unwrap().len() <= 4);

    let h = common::module(&common::trivial_genus2_spec());
    let pair =
        complete_to_hyperbolic(&h, &common::lift(&h, "x1"), &common::lift(&h, "y1")).unwrap();
    let names: Vec<String> = gamma_ab_generators(&h, &pair)
        .unwrap()
        .into_iter()
        .map(|g| g.name)
        .collect();
    assert_eq!(names.len(), 4);
    assert!(names.contains(&"T".to_string()) && names.contains(&"S".to_string()));
}
