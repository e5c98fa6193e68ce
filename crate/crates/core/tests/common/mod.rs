#![allow(dead_code)]

use std::sync::Arc;

use gcover::cover::{build_cover, CoverSpec, Word};
use gcover::homology::{homology, CycleClass, HomologyModule};
use gcover::FiniteGroup;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn grp(name: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::named(name).unwrap())
}

pub fn module(spec: &CoverSpec) -> HomologyModule {
    homology(&build_cover(spec).unwrap()).unwrap()
}

/// ℤ/2 over genus 2, x1 ↦ t, everything else trivial; genus 3.
pub fn c2_spec() -> CoverSpec {
    CoverSpec::new(&grp("Z2"), vec![(1, 0), (0, 0)], vec![]).unwrap()
}

/// ℤ/3 over genus 2, x1 ↦ t; genus 4.
pub fn z3_spec() -> CoverSpec {
    CoverSpec::new(&grp("Z3"), vec![(1, 0), (0, 0)], vec![]).unwrap()
}

/// S₃ over genus 2: x1 ↦ 1, y1 ↦ an involution, x2 ↦ a 3-cycle, y2 ↦ 1.
pub fn s3_spec() -> CoverSpec {
    let g = grp("S3");
    let inv = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
    let rot = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
    CoverSpec::new(&g, vec![(0, inv), (rot, 0)], vec![]).unwrap()
}

/// Six branch points of a ℤ/2 cover of the sphere; genus 2.
pub fn hyperelliptic_spec() -> CoverSpec {
    CoverSpec::new(&grp("Z2"), vec![], vec![1; 6]).unwrap()
}

pub fn trivial_genus2_spec() -> CoverSpec {
    CoverSpec::new(&grp("trivial"), vec![(0, 0), (0, 0)], vec![]).unwrap()
}

pub fn lift(h: &HomologyModule, w: &str) -> CycleClass {
    h.lift_class(&Word::parse(w).unwrap()).unwrap()
}

/// A random valid spec: handle images and branch values sampled until the
/// relation holds and the images generate.
pub fn random_spec(
    g: &Arc<FiniteGroup>,
    genus: usize,
    branch: usize,
    rng: &mut ChaCha8Rng,
) -> CoverSpec {
    let n = g.order();
    for _ in 0..10_000 {
        let handles = (0..genus)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        let branch = (0..branch).map(|_| rng.gen_range(1..n)).collect();
        if let Ok(s) = CoverSpec::new(g, handles, branch) {
            return s;
        }
    }
    panic!("no valid spec found");
}

/// The curve words used for the ℤ/2 example pipeline: α = x2 and three duals
/// whose lifts, with α's, span H₁ over ℚG.
pub const C2_ALPHA: &str = "x2";
pub const C2_BETAS: [&str; 3] = ["y2", "y2 y1", "y2 x1^2"];

pub fn words(ws: &[&str]) -> Vec<Word> {
    ws.iter().map(|w| Word::parse(w).unwrap()).collect()
}

/// The S₃ cover above with a third, untouched handle — room for a curve and
/// a dual that both lift.
pub fn s3_spec_with_free_handle() -> CoverSpec {
    let g = grp("S3");
    let inv = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
    let rot = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
    CoverSpec::new(&g, vec![(0, inv), (rot, 0), (0, 0)], vec![]).unwrap()
}
