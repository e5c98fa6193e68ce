//! Rational Wedderburn blocks of ℚG and isotypical components of G-modules.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::RatElement;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{q, QMatrix, Subspace, ZMatrix, Q};
use crate::poly::{factor, QPoly};

/// Retry bound for the randomized searches in this module.
pub const DEFAULT_RETRIES: usize = 64;

const SEED: u64 = 0x0b10_c5ee_d000_0001;

/// Exceptional cases of the arithmeticity classification for a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExceptionalLabel {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "I-trivial")]
    ITrivial,
    #[serde(rename = "IIa-Gaussian")]
    IIaGaussian,
    #[serde(rename = "IIb-Eisenstein")]
    IIbEisenstein,
    #[serde(rename = "IIIa-HurwitzQuaternion")]
    IIIaHurwitzQuaternion,
    #[serde(rename = "IIIb-Sqrt3Quaternion")]
    IIIbSqrt3Quaternion,
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl ExceptionalLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ExceptionalLabel::None => "none",
            ExceptionalLabel::ITrivial => "I-trivial",
            ExceptionalLabel::IIaGaussian => "IIa-Gaussian",
            ExceptionalLabel::IIbEisenstein => "IIb-Eisenstein",
            ExceptionalLabel::IIIaHurwitzQuaternion => "IIIa-HurwitzQuaternion",
            ExceptionalLabel::IIIbSqrt3Quaternion => "IIIb-Sqrt3Quaternion",
            ExceptionalLabel::Undetermined => "undetermined",
        }
    }

    /// Whether the label is one of the exceptional (non-`none`) cases.
    pub fn is_exceptional(self) -> bool {
        !matches!(
            self,
            ExceptionalLabel::None | ExceptionalLabel::Undetermined
        )
    }
}

/// A †-stable simple factor `ℚG·e` of the group algebra.
#[derive(Clone, Debug)]
pub struct IsotypicalBlock {
    pub index: usize,
    pub idempotent: RatElement,
    pub dim_q: usize,
    pub min_ideal_dim: usize,
    pub center_degree: usize,
    pub indicator_sign: i8,
    pub g_image_order: usize,
    pub exceptional_label: ExceptionalLabel,
    basis: Subspace,
}

impl IsotypicalBlock {
    /// ℚ-basis of the block inside the coefficient space of ℚG.
    pub fn basis(&self) -> &Subspace {
        &self.basis
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.idempotent.group()
    }

    /// Left multiplication by each group element, restricted to the block.
    pub fn left_action(&self) -> Vec<QMatrix> {
        let g = self.group();
        (0..g.order())
            .map(|h| {
                self.basis
                    .restrict(&RatElement::basis(g, h).left_mul_matrix())
                    .expect("blocks are two-sided ideals")
            })
            .collect()
    }

    pub fn summary(&self) -> BlockSummary {
        let g = self.group();
        BlockSummary {
            index: self.index,
            dim_q: self.dim_q,
            min_ideal_dim: self.min_ideal_dim,
            center_degree: self.center_degree,
            indicator_sign: self.indicator_sign,
            g_image_order: self.g_image_order,
            exceptional_label: self.exceptional_label,
            idempotent: (0..g.order())
                .filter(|&h| !self.idempotent.coeff(h).is_zero())
                .map(|h| (g.label(h).to_string(), self.idempotent.coeff(h).to_string()))
                .collect(),
        }
    }
}

/// Serializable view of a block.
#[derive(Clone, Debug, Serialize)]
pub struct BlockSummary {
    pub index: usize,
    pub dim_q: usize,
    pub min_ideal_dim: usize,
    pub center_degree: usize,
    pub indicator_sign: i8,
    pub g_image_order: usize,
    pub exceptional_label: ExceptionalLabel,
    /// Nonzero coefficients of the idempotent, by element label.
    pub idempotent: Vec<(String, String)>,
}

fn class_sums(g: &Arc<FiniteGroup>) -> Vec<RatElement> {
    g.classes()
        .iter()
        .map(|c| RatElement::from_terms(g, &c.iter().map(|&h| (h, q(1))).collect::<Vec<_>>()))
        .collect()
}

/// Minimal polynomial of `z` acting on ℚG, from the Krylov sequence of 1.
fn minimal_polynomial(z: &RatElement) -> QPoly {
    let g = z.group();
    let n = g.order();
    let mut powers = vec![RatElement::one(g)];
    loop {
        let next = &powers[powers.len() - 1] * z;
        let cols: Vec<Vec<Q>> = powers.iter().map(|p| p.coeffs().to_vec()).collect();
        let m = QMatrix::from_cols(n, &cols);
        if let Some(c) = m.solve(next.coeffs()) {
            let mut coeffs: Vec<Q> = c.into_iter().map(|x| -x).collect();
            coeffs.push(q(1));
            return QPoly::new(coeffs);
        }
        powers.push(next);
    }
}

fn eval_at(p: &QPoly, z: &RatElement) -> RatElement {
    let g = z.group();
    p.coeffs().iter().rev().fold(RatElement::zero(g), |acc, c| {
        &(&acc * z) + &RatElement::scalar(g, c.clone())
    })
}

/// All primitive central idempotents of ℚG with their invariants, using the
/// default retry bound.
pub fn central_idempotents(group: &Arc<FiniteGroup>) -> Result<Vec<IsotypicalBlock>> {
    central_idempotents_with(group, DEFAULT_RETRIES)
}

/// Splits the center of ℚG: a random combination `z` of class sums whose
/// minimal polynomial has degree equal to the number of classes generates the
/// center, and the factorization of that polynomial gives the idempotents.
pub fn central_idempotents_with(
    group: &Arc<FiniteGroup>,
    retries: usize,
) -> Result<Vec<IsotypicalBlock>> {
    let sums = class_sums(group);
    let k = sums.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut found = None;
    for _ in 0..retries.max(1) {
        let z = sums.iter().fold(RatElement::zero(group), |acc, c| {
            &acc + &c.scale(&q(rng.gen_range(-6..=6)))
        });
        let mp = minimal_polynomial(&z);
        if mp.degree() == Some(k) {
            found = Some((z, mp));
            break;
        }
    }
    let (z, mp) = found.ok_or(Error::NoConvergence {
        what: "separating central element".into(),
        tries: retries,
    })?;

    let mut blocks = Vec::new();
    for p in factor(&mp) {
        let p = p.to_q();
        let cofactor = mp.divrem(&p).0;
        let (gcd, s, _) = cofactor.ext_gcd(&p);
        if gcd.degree() != Some(0) {
            return Err(Error::Internal(
                "minimal polynomial of a separating element is not squarefree".into(),
            ));
        }
        let e_poly = s.mul(&cofactor).rem(&mp);
        let e = eval_at(&e_poly, &z);
        let center_degree = p.degree().unwrap_or(0);
        blocks.push(make_block(e, center_degree, retries)?);
    }
    blocks.sort_by(|a, b| {
        (a.dim_q, a.center_degree)
            .cmp(&(b.dim_q, b.center_degree))
            .then_with(|| b.idempotent.coeffs().cmp(a.idempotent.coeffs()))
    });
    for (i, b) in blocks.iter_mut().enumerate() {
        b.index = i;
    }
    verify_blocks(group, &blocks)?;
    Ok(blocks)
}

fn make_block(e: RatElement, center_degree: usize, retries: usize) -> Result<IsotypicalBlock> {
    let g = e.group().clone();
    let n = g.order();
    let vecs: Vec<Vec<Q>> = (0..n)
        .map(|h| (&RatElement::basis(&g, h) * &e).coeffs().to_vec())
        .collect();
    let basis = Subspace::spanned_by(n, &vecs);
    let dim_q = basis.dim();
    let kernel = (0..n)
        .filter(|&h| &e * &RatElement::basis(&g, h) == e)
        .count();
    let mut block = IsotypicalBlock {
        index: 0,
        idempotent: e,
        dim_q,
        min_ideal_dim: 0,
        center_degree,
        indicator_sign: 0,
        g_image_order: n / kernel,
        exceptional_label: ExceptionalLabel::Undetermined,
        basis,
    };
    block.indicator_sign = indicator_sign(&block);
    block.min_ideal_dim = minimal_left_ideal_dim_with(&block, retries)?;
    block.exceptional_label = classify_exceptional(&block);
    Ok(block)
}

fn verify_blocks(g: &Arc<FiniteGroup>, blocks: &[IsotypicalBlock]) -> Result<()> {
    let mut total = RatElement::zero(g);
    for (i, b) in blocks.iter().enumerate() {
        let e = &b.idempotent;
        if &(e * e) != e || e.dagger() != *e {
            return Err(Error::Internal(format!(
                "block {i}: idempotent is not a †-invariant projection"
            )));
        }
        for h in 0..g.order() {
            let x = RatElement::basis(g, h);
            if &x * e != e * &x {
                return Err(Error::Internal(format!(
                    "block {i}: idempotent is not central"
                )));
            }
        }
        for c in &blocks[i + 1..] {
            if !(e * &c.idempotent).is_zero() {
                return Err(Error::Internal(
                    "block idempotents are not orthogonal".into(),
                ));
            }
        }
        total = &total + e;
    }
    if total != RatElement::one(g) {
        return Err(Error::Internal("block idempotents do not sum to 1".into()));
    }
    Ok(())
}

/// Sign of `(1/|G|) Σ_g tr_B(g²)`, the trace of left multiplication by `e·g²`
/// restricted to the block.
pub fn indicator_sign(block: &IsotypicalBlock) -> i8 {
    let g = block.group();
    let sum = (0..g.order()).fold(Q::zero(), |acc, h| {
        let sq = RatElement::basis(g, g.mul(h, h));
        let m = block
            .basis
            .restrict(&sq.left_mul_matrix())
            .expect("blocks are two-sided ideals");
        acc + m.trace()
    });
    if sum.is_positive() {
        1
    } else if sum.is_negative() {
        -1
    } else {
        0
    }
}

pub fn classify_exceptional(block: &IsotypicalBlock) -> ExceptionalLabel {
    let (d, mu, c, img) = (
        block.dim_q,
        block.min_ideal_dim,
        block.center_degree,
        block.g_image_order,
    );
    if d == 1 {
        ExceptionalLabel::ITrivial
    } else if mu < d {
        ExceptionalLabel::None
    } else if d == 2 && c == 2 {
        match img {
            4 => ExceptionalLabel::IIaGaussian,
            3 | 6 => ExceptionalLabel::IIbEisenstein,
            _ => ExceptionalLabel::Undetermined,
        }
    } else if d == 4 && c == 1 {
        match img {
            8 | 24 => ExceptionalLabel::IIIaHurwitzQuaternion,
            12 => ExceptionalLabel::IIIbSqrt3Quaternion,
            _ => ExceptionalLabel::Undetermined,
        }
    } else {
        ExceptionalLabel::Undetermined
    }
}

pub fn minimal_left_ideal_dim(block: &IsotypicalBlock) -> Result<usize> {
    minimal_left_ideal_dim_with(block, DEFAULT_RETRIES)
}

pub fn minimal_left_ideal_dim_with(block: &IsotypicalBlock, retries: usize) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ block.dim_q as u64);
    let mu = simple_submodule_dim(block.left_action(), retries, &mut rng)?;
    // B ≅ M_k(D) with D of index m over a center of degree c: μ = c·k·m², dim B = kμ
    let (d, c) = (block.dim_q, block.center_degree);
    let consistent = d % mu == 0 && mu % (c * (d / mu)) == 0 && {
        let m2 = mu / (c * (d / mu));
        let m = (m2 as f64).sqrt().round() as usize;
        m * m == m2
    };
    if !consistent {
        return Err(Error::NoConvergence {
            what: format!("minimal left ideal (found dimension {mu} in a block of dimension {d})"),
            tries: retries,
        });
    }
    Ok(mu)
}

fn spin(v: &[Q], gens: &[QMatrix]) -> Subspace {
    let mut s = Subspace::new(v.len());
    s.insert(v);
    let mut queue = vec![v.to_vec()];
    while let Some(w) = queue.pop() {
        for m in gens {
            let x = m.mul_vec(&w);
            if s.insert(&x) {
                queue.push(x);
            }
        }
    }
    s
}

fn random_combination(vs: &[Vec<Q>], rng: &mut ChaCha8Rng) -> Vec<Q> {
    let mut out = vec![Q::zero(); vs[0].len()];
    for v in vs {
        let c = q(rng.gen_range(-3..=3));
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    if out.iter().all(Zero::is_zero) {
        vs[0].clone()
    } else {
        out
    }
}

/// Dimension of a simple submodule of the module given by `gens`, found with
/// the randomized splitting procedure. A Holt–Rees certificate ends the search
/// early; otherwise the module is accepted as simple once `retries` random
/// elements in a row fail to split it.
pub fn simple_submodule_dim(
    mut gens: Vec<QMatrix>,
    retries: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    let mut d = gens.first().map_or(0, QMatrix::rows);
    let mut attempts = 0;
    'outer: while d > 1 {
        if attempts >= retries {
            // no splitting found: accepted as simple (the quaternionic case never certifies)
            break;
        }
        attempts += 1;
        let mut a = QMatrix::zeros(d, d);
        for m in &gens {
            a = &a + &m.scale(&q(rng.gen_range(-3..=3)));
        }
        let cp = QPoly::new(a.charpoly());
        for p in factor(&cp) {
            let p = p.to_q();
            let pa = p.eval_matrix(&a);
            let null = pa.nullspace();
            if null.is_empty() {
                continue;
            }
            let v = random_combination(&null, rng);
            let sub = spin(&v, &gens);
            if sub.dim() < d {
                gens = gens
                    .iter()
                    .map(|m| sub.restrict(m).expect("spun subspaces are invariant"))
                    .collect();
                d = sub.dim();
                attempts = 0;
                continue 'outer;
            }
            if null.len() == p.degree().unwrap_or(0) {
                let tgens: Vec<QMatrix> = gens.iter().map(QMatrix::transpose).collect();
                let w = pa.transpose().nullspace().swap_remove(0);
                let dual = spin(&w, &tgens);
                if dual.dim() == d {
                    return Ok(d);
                }
                // the annihilator of a proper dual submodule is a proper submodule
                let ann = dual.basis_matrix().transpose().nullspace();
                let sub = Subspace::spanned_by(d, &ann);
                gens = gens
                    .iter()
                    .map(|m| sub.restrict(m).expect("annihilators are invariant"))
                    .collect();
                d = sub.dim();
                attempts = 0;
                continue 'outer;
            }
        }
    }
    Ok(d)
}

/// A finite-dimensional ℚG-module given by the matrices of all group elements
/// (indexed like the group), acting on column vectors.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    actions: Vec<QMatrix>,
}

impl GModule {
    /// Checks that `g ↦ actions[g]` is a homomorphism.
    pub fn new(group: &Arc<FiniteGroup>, actions: Vec<QMatrix>) -> Result<Self> {
        let n = group.order();
        if actions.len() != n {
            return Err(Error::NotAnAction(format!(
                "{} matrices for a group of order {n}",
                actions.len()
            )));
        }
        let d = actions[0].rows();
        if actions.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::NotAnAction(
                "matrices are not all square of one size".into(),
            ));
        }
        if !actions[0].is_identity() {
            return Err(Error::NotAnAction(
                "the identity does not act trivially".into(),
            ));
        }
        for a in 0..n {
            for b in 0..n {
                if &actions[a] * &actions[b] != actions[group.mul(a, b)] {
                    return Err(Error::NotAnAction(format!(
                        "M({}) M({}) ≠ M({})",
                        group.label(a),
                        group.label(b),
                        group.label(group.mul(a, b))
                    )));
                }
            }
        }
        Ok(GModule {
            group: group.clone(),
            actions,
        })
    }

    pub fn from_integer(group: &Arc<FiniteGroup>, actions: &[ZMatrix]) -> Result<Self> {
        Self::new(group, actions.iter().map(ZMatrix::to_q).collect())
    }

    /// ℚG acting on itself by left multiplication.
    pub fn regular(group: &Arc<FiniteGroup>) -> Self {
        Self::free(group, 1)
    }

    /// `(ℚG)^k` with the left action on each coordinate; coordinate `i`,
    /// element `h` sits at position `i·|G| + h`.
    pub fn free(group: &Arc<FiniteGroup>, k: usize) -> Self {
        let n = group.order();
        let actions = (0..n)
            .map(|g| {
                QMatrix::from_fn(k * n, k * n, |r, c| {
                    if r / n == c / n && r % n == group.mul(g, c % n) {
                        q(1)
                    } else {
                        Q::zero()
                    }
                })
            })
            .collect();
        GModule {
            group: group.clone(),
            actions,
        }
    }

    pub fn dim(&self) -> usize {
        self.actions[0].rows()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn action(&self, g: usize) -> &QMatrix {
        &self.actions[g]
    }

    pub fn actions(&self) -> &[QMatrix] {
        &self.actions
    }

    /// Action of an algebra element `Σ x_g g`.
    pub fn element_action(&self, x: &RatElement) -> QMatrix {
        let d = self.dim();
        x.coeffs()
            .iter()
            .enumerate()
            .fold(QMatrix::zeros(d, d), |acc, (g, c)| {
                if c.is_zero() {
                    acc
                } else {
                    &acc + &self.actions[g].scale(c)
                }
            })
    }
}

/// `e·W` for a block idempotent `e`.
#[derive(Clone, Debug)]
pub struct IsotypicalComponent {
    pub block_index: usize,
    pub subspace: Subspace,
}

impl IsotypicalComponent {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        self.subspace.basis()
    }

    /// Restriction of a map preserving the component.
    pub fn restrict(&self, m: &QMatrix) -> Option<QMatrix> {
        self.subspace.restrict(m)
    }
}

pub fn isotypical_projection(block: &IsotypicalBlock, w: &GModule) -> Result<IsotypicalComponent> {
    if !crate::algebra::same_group(block.group(), w.group()) {
        return Err(Error::GroupMismatch);
    }
    let p = w.element_action(&block.idempotent);
    let cols: Vec<Vec<Q>> = (0..p.cols()).map(|j| p.col(j)).collect();
    let subspace = Subspace::spanned_by(w.dim(), &cols);
    for m in w.actions() {
        if subspace.restrict(m).is_none() {
            return Err(Error::Internal(
                "isotypical component is not G-stable".into(),
            ));
        }
    }
    Ok(IsotypicalComponent {
        block_index: block.index,
        subspace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(g: FiniteGroup) -> Vec<usize> {
        central_idempotents(&Arc::new(g))
            .unwrap()
            .iter()
            .map(|b| b.dim_q)
            .collect()
    }

    #[test]
    fn small_decompositions() {
        assert_eq!(dims(FiniteGroup::trivial()), vec![1]);
        assert_eq!(dims(FiniteGroup::cyclic(3)), vec![1, 2]);
        assert_eq!(dims(FiniteGroup::symmetric(3)), vec![1, 1, 4]);
        assert_eq!(dims(FiniteGroup::quaternion()), vec![1, 1, 1, 1, 4]);
    }

    #[test]
    fn z3_idempotent() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let blocks = central_idempotents(&g).unwrap();
        let third = Q::new(1.into(), 3.into());
        assert_eq!(
            blocks[0].idempotent.coeffs(),
            &[third.clone(), third.clone(), third][..]
        );
        assert_eq!(blocks[1].exceptional_label, ExceptionalLabel::IIbEisenstein);
        assert_eq!(blocks[1].indicator_sign, 0);
    }

    #[test]
    fn regular_module_components() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let w = GModule::regular(&g);
        let blocks = central_idempotents(&g).unwrap();
        let d: Vec<usize> = blocks
            .iter()
            .map(|b| isotypical_projection(b, &w).unwrap().dim())
            .collect();
        assert_eq!(d, vec![1, 2]);
    }

    #[test]
    fn rejects_non_actions() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let bad = vec![
            QMatrix::identity(2),
            QMatrix::from_rows(vec![vec![q(1), q(1)], vec![q(0), q(1)]]),
        ];
        assert!(matches!(GModule::new(&g, bad), Err(Error::NotAnAction(_))));
    }

    #[test]
    fn meataxe_on_a_split_module() {
        // ℚ² ⊕ ℚ with a rotation of order 3 on the plane
        let r = QMatrix::from_rows(vec![
            vec![q(0), q(-1), q(0)],
            vec![q(1), q(-1), q(0)],
            vec![q(0), q(0), q(1)],
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = simple_submodule_dim(vec![QMatrix::identity(3), r.clone(), &r * &r], 64, &mut rng)
            .unwrap();
        assert!(d == 1 || d == 2);
    }
}
