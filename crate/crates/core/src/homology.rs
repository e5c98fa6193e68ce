//! First homology of a cover with its deck action, intersection form and the
//! induced R-valued skew-hermitian form.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::IntElement;
use crate::cover::{CWSurface, Word};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{diagonalize, integer_kernel, to_q_vec, to_z_vec, QMatrix, ZMatrix, Q};

/// A homology class in the chosen ℤ-basis of H₁. Equality ignores provenance.
#[derive(Clone, Debug)]
pub struct CycleClass {
    pub coords: Vec<BigInt>,
    /// The base word the class was lifted from, if any.
    pub provenance: Option<String>,
}

impl PartialEq for CycleClass {
    fn eq(&self, o: &Self) -> bool {
        self.coords == o.coords
    }
}

impl Eq for CycleClass {}

impl CycleClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        CycleClass {
            coords,
            provenance: None,
        }
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![BigInt::zero(); rank])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }
}

/// H₁(S; ℤ) with the deck action and the intersection matrix.
#[derive(Clone, Debug)]
pub struct HomologyModule {
    surface: Arc<CWSurface>,
    /// Edge-chain representatives of the basis classes.
    reps: Vec<Vec<BigInt>>,
    /// Rational map from edge cycles to coordinates.
    projection: QMatrix,
    actions: Vec<ZMatrix>,
    intersection: ZMatrix,
}

/// Global orientation sign, fixed so that `x1·y1 = +1` on the unbranched torus.
const ORIENTATION: i64 = 1;

pub fn homology(surface: &CWSurface) -> Result<HomologyModule> {
    let surface = Arc::new(surface.clone());
    let d1 = surface.boundary_1();
    let d2 = surface.boundary_2();
    let ne = surface.edges().len();

    // Z = ker ∂₁ as a saturated lattice, K has the basis as columns
    let kernel = integer_kernel(&d1);
    let z = kernel.len();
    let k = ZMatrix::from_cols(ne, &kernel);
    let kq = k.to_q();
    let left_inv = left_inverse(&kq)?;

    // boundaries in kernel coordinates
    let c = (&left_inv * &d2.to_q())
        .to_z()
        .ok_or_else(|| Error::Internal("boundaries are not integral in the cycle basis".into()))?;
    let dg = diagonalize(&c);
    let r = dg.d.len();
    if let Some(t) = dg.d.iter().find(|d| !d.is_one()) {
        return Err(Error::Torsion(format!("ℤ/{t}")));
    }
    let u_inv =
        dg.u.to_q()
            .inverse()
            .and_then(|m| m.to_z())
            .ok_or_else(|| Error::Internal("diagonalizing transform is not unimodular".into()))?;
    let new_basis = &k * &u_inv;
    let reps: Vec<Vec<BigInt>> = (r..z).map(|j| new_basis.col(j)).collect();
    let full_proj = &dg.u.to_q() * &left_inv;
    let projection = QMatrix::from_fn(z - r, ne, |i, j| full_proj[(r + i, j)].clone());

    let mut hm = HomologyModule {
        surface: surface.clone(),
        reps,
        projection,
        actions: Vec::new(),
        intersection: ZMatrix::zeros(0, 0),
    };
    let rank = hm.rank();
    if rank as i64 != 2 - surface.euler_characteristic() {
        return Err(Error::Internal(format!(
            "rank H₁ = {rank} but 2 − χ = {}",
            2 - surface.euler_characteristic()
        )));
    }
    let g = surface.group().clone();
    hm.actions = (0..g.order())
        .map(|h| {
            let cols: Vec<Vec<BigInt>> = hm
                .reps
                .iter()
                .map(|rep| {
                    let mut moved = vec![BigInt::zero(); ne];
                    for (e, x) in rep.iter().enumerate() {
                        moved[surface.edge_action(h, e)] += x;
                    }
                    hm.project(&moved)
                })
                .collect::<Result<_>>()?;
            Ok(ZMatrix::from_cols(rank, &cols))
        })
        .collect::<Result<_>>()?;
    hm.intersection = intersection_matrix(&hm)?;
    hm.verify()?;
    Ok(hm)
}

/// A left inverse of a full-column-rank matrix, built from pivot rows.
fn left_inverse(k: &QMatrix) -> Result<QMatrix> {
    let (rows, cols) = (k.rows(), k.cols());
    let (_, pivots) = k.transpose().rref();
    if pivots.len() != cols {
        return Err(Error::Internal("cycle basis is not independent".into()));
    }
    let sub = QMatrix::from_fn(cols, cols, |i, j| k[(pivots[i], j)].clone());
    let inv = sub
        .inverse()
        .ok_or_else(|| Error::Internal("singular pivot block".into()))?;
    Ok(QMatrix::from_fn(cols, rows, |i, j| {
        match pivots.iter().position(|&p| p == j) {
            Some(t) => inv[(i, t)].clone(),
            None => Q::zero(),
        }
    }))
}

/// Intersection matrix via the dual cell structure.
///
/// The dual edge `e*` runs from the face where `e` occurs negatively to the
/// face where it occurs positively and crosses only `e`, so a primal cycle `x`
/// meets a dual cycle `ξ` in `Σ_e x_e ξ_e` points (with a global sign). Each
/// dual edge is homotopic to a primal path around the two faces; pushing a
/// basis of dual cycles across gives classes `Ψ`, and `J` solves `P = J·Ψ`.
fn intersection_matrix(hm: &HomologyModule) -> Result<ZMatrix> {
    let s = &hm.surface;
    let ne = s.edges().len();
    let nf = s.faces().len();
    let mut pos = vec![(usize::MAX, 0usize); ne]; // face, position of the + occurrence
    let mut neg = vec![(usize::MAX, 0usize); ne];
    for (fi, f) in s.faces().iter().enumerate() {
        for (k, &(e, sign)) in f.boundary.iter().enumerate() {
            if sign > 0 {
                pos[e] = (fi, k);
            } else {
                neg[e] = (fi, k);
            }
        }
    }
    let mut dual_boundary = ZMatrix::zeros(nf, ne);
    for e in 0..ne {
        dual_boundary[(pos[e].0, e)] += 1;
        dual_boundary[(neg[e].0, e)] -= 1;
    }
    let push = |e: usize| -> Vec<BigInt> {
        let mut chain = vec![BigInt::zero(); ne];
        let (rf, q) = neg[e];
        for &(x, sign) in &s.faces()[rf].boundary[..q] {
            chain[x] += i64::from(sign);
        }
        let (lf, p) = pos[e];
        for &(x, sign) in &s.faces()[lf].boundary[p + 1..] {
            chain[x] += i64::from(sign);
        }
        chain
    };
    let pushed: Vec<Vec<BigInt>> = (0..ne).map(push).collect();
    let dual_cycles = integer_kernel(&dual_boundary);
    let rank = hm.rank();
    let m = dual_cycles.len();
    let mut psi = ZMatrix::zeros(rank, m);
    let mut pairing = ZMatrix::zeros(rank, m);
    for (kk, xi) in dual_cycles.iter().enumerate() {
        let mut chain = vec![BigInt::zero(); ne];
        for (e, c) in xi.iter().enumerate() {
            if !c.is_zero() {
                for (t, x) in pushed[e].iter().enumerate() {
                    chain[t] += c * x;
                }
            }
        }
        let coords = hm.project(&chain)?;
        for i in 0..rank {
            psi[(i, kk)] = coords[i].clone();
            pairing[(i, kk)] = hm.reps[i]
                .iter()
                .zip(xi)
                .map(|(a, b)| a * b)
                .sum::<BigInt>()
                * ORIENTATION;
        }
    }
    // J Ψ = P  ⇔  Ψᵀ Jᵀ = Pᵀ
    let jt = psi
        .transpose()
        .to_q()
        .solve_matrix(&pairing.transpose().to_q())
        .ok_or_else(|| {
            Error::Internal("dual cycles do not determine the intersection form".into())
        })?;
    jt.transpose()
        .to_z()
        .ok_or_else(|| Error::Internal("intersection matrix is not integral".into()))
}

impl HomologyModule {
    pub fn surface(&self) -> &Arc<CWSurface> {
        &self.surface
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.surface.group()
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn genus(&self) -> usize {
        self.rank() / 2
    }

    pub fn intersection(&self) -> &ZMatrix {
        &self.intersection
    }

    /// Deck matrices indexed by group element.
    pub fn actions(&self) -> &[ZMatrix] {
        &self.actions
    }

    pub fn action(&self, g: usize) -> &ZMatrix {
        &self.actions[g]
    }

    /// Edge chains representing the basis classes.
    pub fn representatives(&self) -> &[Vec<BigInt>] {
        &self.reps
    }

    pub fn basis_class(&self, i: usize) -> CycleClass {
        let mut c = CycleClass::zero(self.rank());
        c.coords[i] = BigInt::one();
        c
    }

    /// Coordinates of an edge cycle.
    pub fn project(&self, chain: &[BigInt]) -> Result<Vec<BigInt>> {
        let d1 = self.surface.boundary_1();
        if !d1.mul_vec(chain).iter().all(Zero::is_zero) {
            return Err(Error::Precondition("chain is not a cycle".into()));
        }
        to_z_vec(&self.projection.mul_vec(&to_q_vec(chain)))
            .ok_or_else(|| Error::Internal("non-integral projection".into()))
    }

    /// The intersection number `x·y`.
    pub fn dot(&self, x: &CycleClass, y: &CycleClass) -> BigInt {
        self.intersection
            .mul_vec(&y.coords)
            .iter()
            .zip(&x.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `g·x`.
    pub fn act(&self, g: usize, x: &CycleClass) -> CycleClass {
        CycleClass::new(self.actions[g].mul_vec(&x.coords))
    }

    /// `r·x = Σ r_g g·x`.
    pub fn scalar_act(&self, r: &IntElement, x: &CycleClass) -> CycleClass {
        let mut out = vec![BigInt::zero(); self.rank()];
        for (g, c) in r.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.actions[g].mul_vec(&x.coords)) {
                *o += c * v;
            }
        }
        CycleClass::new(out)
    }

    /// `⟨x, y⟩ = Σ_g ((g⁻¹x)·y) e_g`.
    pub fn hermitian_form(&self, x: &CycleClass, y: &CycleClass) -> IntElement {
        let g = self.group();
        let coeffs: Vec<BigInt> = (0..g.order())
            .map(|h| self.dot(&self.act(g.inv(h), x), y))
            .collect();
        IntElement::from_coeffs(g, coeffs).expect("one coefficient per element")
    }

    /// Class of the lift of a base word through the identity vertex.
    pub fn lift_class(&self, w: &Word) -> Result<CycleClass> {
        let chain = self.surface.lift_word(w, 0)?;
        let mut c = CycleClass::new(self.project(&chain)?);
        c.provenance = Some(w.to_string());
        Ok(c)
    }

    pub fn lift_class_str(&self, w: &str) -> Result<CycleClass> {
        self.lift_class(&Word::parse(w)?)
    }

    fn verify(&self) -> Result<()> {
        let j = &self.intersection;
        if j.transpose() != j.scale(&BigInt::from(-1)) {
            return Err(Error::Internal("intersection matrix is not skew".into()));
        }
        if !j.determinant().abs().is_one() && self.rank() > 0 {
            return Err(Error::Internal(format!(
                "intersection matrix has determinant {}",
                j.determinant()
            )));
        }
        let g = self.group();
        for (h, m) in self.actions.iter().enumerate() {
            if &(&m.transpose() * j) * m != *j {
                return Err(Error::Internal(format!(
                    "deck transformation {} does not preserve J",
                    g.label(h)
                )));
            }
            for (h2, m2) in self.actions.iter().enumerate() {
                if m * m2 != self.actions[g.mul(h, h2)] {
                    return Err(Error::Internal(
                        "deck matrices do not form a representation".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn summary(&self) -> HomologySummary {
        let g = self.group();
        HomologySummary {
            genus: self.genus(),
            rank: self.rank(),
            euler_characteristic: self.surface.euler_characteristic(),
            intersection: self.intersection.to_i64_rows(),
            actions: (0..g.order())
                .map(|h| (g.label(h).to_string(), self.actions[h].to_i64_rows()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologySummary {
    pub genus: usize,
    pub rank: usize,
    pub euler_characteristic: i64,
    pub intersection: Vec<Vec<i64>>,
    pub actions: Vec<(String, Vec<Vec<i64>>)>,
}
