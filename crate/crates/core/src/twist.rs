//! Equivariant symplectic actions on H₁ of a cover: multi-twists, the D^β
//! formula, hyperbolic-pair completion and push maps on a hyperbolic summand.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{plus_cone_basis, IntElement};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hermitian::{rho, sl2_generators, IntRMatrix, RMatrix};
use crate::homology::{CycleClass, HomologyModule};
use crate::linalg::ZMatrix;

/// An integer matrix on H₁ commuting with the deck group and preserving J.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantSymplecticMatrix {
    matrix: ZMatrix,
    pub commutes_with_g: bool,
    pub preserves_j: bool,
}

impl EquivariantSymplecticMatrix {
    /// Verifies both properties; fails with a precondition error otherwise.
    pub fn new(h: &HomologyModule, matrix: ZMatrix) -> Result<Self> {
        let n = h.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Dimension(format!("expected a {n}×{n} matrix")));
        }
        let commutes_with_g = h.actions().iter().all(|g| g * &matrix == &matrix * g);
        let j = h.intersection();
        let preserves_j = &(&matrix.transpose() * j) * &matrix == *j;
        if !commutes_with_g {
            return Err(Error::Precondition(
                "matrix does not commute with the deck group".into(),
            ));
        }
        if !preserves_j {
            return Err(Error::Precondition(
                "matrix does not preserve the intersection form".into(),
            ));
        }
        Ok(EquivariantSymplecticMatrix {
            matrix,
            commutes_with_g,
            preserves_j,
        })
    }

    pub fn identity(h: &HomologyModule) -> Self {
        EquivariantSymplecticMatrix {
            matrix: ZMatrix::identity(h.rank()),
            commutes_with_g: true,
            preserves_j: true,
        }
    }

    pub fn matrix(&self) -> &ZMatrix {
        &self.matrix
    }

    pub fn compose(&self, o: &Self) -> Self {
        EquivariantSymplecticMatrix {
            matrix: &self.matrix * &o.matrix,
            commutes_with_g: true,
            preserves_j: true,
        }
    }

    /// `M⁻¹ = J⁻¹ Mᵀ J`.
    pub fn inverse(&self, h: &HomologyModule) -> Self {
        let j = h.intersection();
        let j_inv = j
            .to_q()
            .inverse()
            .and_then(|m| m.to_z())
            .expect("J is unimodular");
        EquivariantSymplecticMatrix {
            matrix: &(&j_inv * &self.matrix.transpose()) * j,
            commutes_with_g: true,
            preserves_j: true,
        }
    }

    pub fn apply(&self, x: &CycleClass) -> CycleClass {
        CycleClass::new(self.matrix.mul_vec(&x.coords))
    }
}

/// A named generator matrix.
#[derive(Clone, Debug)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: EquivariantSymplecticMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedMatrixSummary {
    pub name: String,
    pub matrix: Vec<Vec<i64>>,
    pub commutes_with_g: bool,
    pub preserves_j: bool,
}

impl NamedMatrix {
    pub fn summary(&self) -> NamedMatrixSummary {
        NamedMatrixSummary {
            name: self.name.clone(),
            matrix: self.matrix.matrix().to_i64_rows(),
            commutes_with_g: self.matrix.commutes_with_g,
            preserves_j: self.matrix.preserves_j,
        }
    }
}

fn require_isotropic(h: &HomologyModule, a: &CycleClass) -> Result<()> {
    if h.hermitian_form(a, a).is_zero() {
        Ok(())
    } else {
        Err(Error::Precondition(
            "⟨a,a⟩ ≠ 0: the class is not R-isotropic".into(),
        ))
    }
}

/// `T_a(r): x ↦ x + ⟨x,a⟩·r·a` on all of H₁.
pub fn transvection(
    h: &HomologyModule,
    a: &CycleClass,
    r: &IntElement,
) -> Result<EquivariantSymplecticMatrix> {
    require_isotropic(h, a)?;
    if !r.is_hermitian() {
        return Err(Error::Precondition("r† ≠ r".into()));
    }
    let n = h.rank();
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let x = h.basis_class(j);
            let s = &h.hermitian_form(&x, a) * r;
            x.add(&h.scalar_act(&s, a)).coords
        })
        .collect();
    EquivariantSymplecticMatrix::new(h, ZMatrix::from_cols(n, &cols))
}

/// The classical transvection `x ↦ x + (x·v)v`.
pub fn classical_transvection(h: &HomologyModule, v: &CycleClass) -> ZMatrix {
    let n = h.rank();
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let x = h.basis_class(j);
            let c = h.dot(&x, v);
            x.coords
                .iter()
                .zip(&v.coords)
                .map(|(xi, vi)| xi + &c * vi)
                .collect()
        })
        .collect();
    ZMatrix::from_cols(n, &cols)
}

/// Product of classical transvections along the classes `g·v`, `g ∈ G`.
fn orbit_twist(h: &HomologyModule, v: &CycleClass) -> ZMatrix {
    let g = h.group();
    (0..g.order()).fold(ZMatrix::identity(h.rank()), |acc, k| {
        &acc * &classical_transvection(h, &h.act(k, v))
    })
}

/// The multi-Dehn twist along the preimage of a trivialized curve with lift `a`:
/// `x ↦ x + Σ_g (x·ga) ga`.
pub fn multi_twist(h: &HomologyModule, a: &CycleClass) -> Result<EquivariantSymplecticMatrix> {
    require_isotropic(h, a)?;
    EquivariantSymplecticMatrix::new(h, orbit_twist(h, a))
}

/// `T_a(2 − e_h − e_{h⁻¹})`.
pub fn d_beta(
    hm: &HomologyModule,
    a: &CycleClass,
    h: usize,
) -> Result<EquivariantSymplecticMatrix> {
    let g = hm.group();
    let r = IntElement::from_terms(
        g,
        &[
            (0, BigInt::from(2)),
            (h, BigInt::from(-1)),
            (g.inv(h), BigInt::from(-1)),
        ],
    );
    transvection(hm, a, &r)
}

/// The multi-twist along the lifts `g(1−h)a` of the boundary curve, computed
/// directly as a product of classical transvections.
pub fn d_beta_geometric(
    hm: &HomologyModule,
    a: &CycleClass,
    h: usize,
) -> Result<EquivariantSymplecticMatrix> {
    require_isotropic(hm, a)?;
    let v = a.sub(&hm.act(h, a));
    EquivariantSymplecticMatrix::new(hm, orbit_twist(hm, &v))
}

/// Both computations of D^β and whether they agree.
#[derive(Clone, Debug)]
pub struct DBetaCheck {
    pub h: usize,
    pub algebraic: EquivariantSymplecticMatrix,
    pub geometric: EquivariantSymplecticMatrix,
}

impl DBetaCheck {
    pub fn agree(&self) -> bool {
        self.algebraic == self.geometric
    }
}

pub fn d_beta_check(hm: &HomologyModule, a: &CycleClass, h: usize) -> Result<DBetaCheck> {
    Ok(DBetaCheck {
        h,
        algebraic: d_beta(hm, a, h)?,
        geometric: d_beta_geometric(hm, a, h)?,
    })
}

/// Classes `a, b` with `⟨a,a⟩ = ⟨b,b⟩ = 0`, `⟨a,b⟩ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicPair {
    pub a: CycleClass,
    pub b: CycleClass,
    /// The correction used: `b = b0 + λa`.
    pub lambda: IntElement,
}

impl HyperbolicPair {
    /// Re-checks the three certificate equations.
    pub fn verify(&self, h: &HomologyModule) -> Result<()> {
        if !h.hermitian_form(&self.a, &self.a).is_zero() {
            return Err(Error::Precondition("stale certificate: ⟨a,a⟩ ≠ 0".into()));
        }
        if !h.hermitian_form(&self.b, &self.b).is_zero() {
            return Err(Error::Precondition("stale certificate: ⟨b,b⟩ ≠ 0".into()));
        }
        if h.hermitian_form(&self.a, &self.b) != IntElement::one(h.group()) {
            return Err(Error::Precondition("stale certificate: ⟨a,b⟩ ≠ 1".into()));
        }
        Ok(())
    }

    /// `p(x) = ⟨x,b⟩a − ⟨x,a⟩b`.
    pub fn project(&self, h: &HomologyModule, x: &CycleClass) -> CycleClass {
        h.scalar_act(&h.hermitian_form(x, &self.b), &self.a)
            .sub(&h.scalar_act(&h.hermitian_form(x, &self.a), &self.b))
    }
}

/// Solves `λ − λ† = s` for a skew `s`. At each pair `{g, g⁻¹}` the
/// coefficient is placed at the smaller index; `s` must vanish at the
/// self-inverse elements.
pub fn solve_lambda(s: &IntElement) -> Result<IntElement> {
    let g = s.group();
    if s.dagger() != -s {
        return Err(Error::Precondition(format!("{s} is not skew")));
    }
    let mut lambda = vec![BigInt::zero(); g.order()];
    for x in 0..g.order() {
        let xi = g.inv(x);
        if xi == x {
            if !s.coeff(x).is_zero() {
                return Err(Error::Unsolvable(format!(
                    "coefficient {} at the self-inverse element {}",
                    s.coeff(x),
                    g.label(x)
                )));
            }
        } else if x < xi {
            lambda[x] = s.coeff(x).clone();
        }
    }
    IntElement::from_coeffs(g, lambda)
}

/// Returns the pair `(a, b0 + λa)` with `λ − λ† = −⟨b0,b0⟩`.
pub fn complete_to_hyperbolic(
    h: &HomologyModule,
    a: &CycleClass,
    b0: &CycleClass,
) -> Result<HyperbolicPair> {
    require_isotropic(h, a)?;
    let ab = h.hermitian_form(a, b0);
    if ab != IntElement::one(h.group()) {
        return Err(Error::Precondition(format!("⟨a,b0⟩ = {ab}, expected 1")));
    }
    let lambda = solve_lambda(&-&h.hermitian_form(b0, b0)).map_err(|e| match e {
        Error::Unsolvable(m) => {
            Error::Unsolvable(format!("⟨b0,b0⟩ is not of the form λ† − λ: {m}"))
        }
        e => e,
    })?;
    let b = b0.add(&h.scalar_act(&lambda, a));
    let pair = HyperbolicPair {
        a: a.clone(),
        b,
        lambda,
    };
    pair.verify(h)
        .map_err(|e| Error::Internal(format!("completed pair fails its certificate: {e}")))?;
    Ok(pair)
}

/// The map acting on `Ra ⊕ Rb ≅ ℋ²(R)` by the R-matrix `m` (in the basis
/// `a ↔ e`, `b ↔ f`) and as the identity on the orthogonal complement.
pub fn embed_summand(
    h: &HomologyModule,
    pair: &HyperbolicPair,
    m: &IntRMatrix,
) -> Result<EquivariantSymplecticMatrix> {
    pair.verify(h)?;
    if m.rank() != 2 {
        return Err(Error::Dimension("summand maps are 2×2".into()));
    }
    let n = h.rank();
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let x = h.basis_class(j);
            let r = h.hermitian_form(&x, &pair.b);
            let s = -&h.hermitian_form(&x, &pair.a);
            let p = h.scalar_act(&r, &pair.a).add(&h.scalar_act(&s, &pair.b));
            let img = m.apply(&[r, s]);
            x.sub(&p)
                .add(&h.scalar_act(&img[0], &pair.a))
                .add(&h.scalar_act(&img[1], &pair.b))
                .coords
        })
        .collect();
    EquivariantSymplecticMatrix::new(h, ZMatrix::from_cols(n, &cols))
}

/// The push map of `g`: `ρ_g` on the summand, identity on its complement.
pub fn realize_group_element(
    h: &HomologyModule,
    pair: &HyperbolicPair,
    g: usize,
) -> Result<EquivariantSymplecticMatrix> {
    embed_summand(h, pair, &rho(h.group(), g))
}

/// Images of the generators of Γ(G) under the summand embedding: `T_a(r)`
/// and `T_b(r)` for `r` in the ℤ-basis of R₊₊, the SL₂(ℤ) pair, and the push
/// maps of a generating set of G.
pub fn gamma_ab_generators(h: &HomologyModule, pair: &HyperbolicPair) -> Result<Vec<NamedMatrix>> {
    let g = h.group();
    let mut out = gamma_o_ab_generators(h, pair)?;
    for (name, s) in sl2_generators() {
        let m = RMatrix::from_integer(g, &s);
        out.push(NamedMatrix {
            name: name.to_string(),
            matrix: embed_summand(h, pair, &m)?,
        });
    }
    for x in g.generators() {
        out.push(NamedMatrix {
            name: format!("push({})", g.label(x)),
            matrix: realize_group_element(h, pair, x)?,
        });
    }
    Ok(out)
}

/// `T_a(r)`, `T_b(r)` for `r` in the ℤ-basis of R₊₊.
pub fn gamma_o_ab_generators(
    h: &HomologyModule,
    pair: &HyperbolicPair,
) -> Result<Vec<NamedMatrix>> {
    pair.verify(h)?;
    let mut out = Vec::new();
    let basis = plus_cone_basis(h.group()).plus_plus;
    for (which, v) in [("a", &pair.a), ("b", &pair.b)] {
        for r in &basis {
            out.push(NamedMatrix {
                name: format!("T_{which}({r})"),
                matrix: transvection(h, v, r)?,
            });
        }
    }
    Ok(out)
}

/// Hermitian form value as label → coefficient pairs (nonzero only).
pub fn element_terms(g: &Arc<FiniteGroup>, x: &IntElement) -> Vec<(String, String)> {
    (0..g.order())
        .filter(|&k| !x.coeff(k).is_zero())
        .map(|k| (g.label(k).to_string(), x.coeff(k).to_string()))
        .collect()
}
