//! Skew-hermitian modules over the group ring, transvections, Eichler
//! transformations, and the generators of Γ(G) on the hyperbolic module.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{plus_cone_basis, same_group, Coeff, Element, IntElement};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{qz, Matrix, QMatrix};

/// A coordinate vector over the group ring.
pub type RVector<T> = Vec<Element<T>>;

/// A free module with an R-valued skew-hermitian form
/// `⟨x, y⟩ = Σ x_i Γ_ij y_j†`, linear in the first variable.
#[derive(Clone)]
pub struct SkewHermitianModule<T> {
    group: Arc<FiniteGroup>,
    gram: Vec<Vec<Element<T>>>,
}

impl<T: Coeff> SkewHermitianModule<T> {
    pub fn new(group: &Arc<FiniteGroup>, gram: Vec<Vec<Element<T>>>) -> Result<Self> {
        let k = gram.len();
        if gram.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("Gram matrix must be square".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if !same_group(gram[i][j].group(), group) {
                    return Err(Error::GroupMismatch);
                }
                if gram[i][j] != -&gram[j][i].dagger() {
                    return Err(Error::Precondition(format!("Γ[{i}][{j}] ≠ −Γ[{j}][{i}]†")));
                }
            }
        }
        Ok(SkewHermitianModule {
            group: group.clone(),
            gram,
        })
    }

    fn from_i64_gram(group: &Arc<FiniteGroup>, g: &[Vec<i64>]) -> Self {
        let gram = g
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&c| Element::scalar(group, int_coeff::<T>(c)))
                    .collect()
            })
            .collect();
        Self::new(group, gram).expect("integer skew-symmetric Gram matrices are skew-hermitian")
    }

    /// ℋ²(R): basis `(e, f)` with `⟨e, f⟩ = 1`.
    pub fn hyperbolic(group: &Arc<FiniteGroup>) -> Self {
        Self::hyperbolic_sum(group, 1)
    }

    /// The orthogonal sum of `m` copies of ℋ²(R), basis `e1, f1, e2, f2, …`.
    pub fn hyperbolic_sum(group: &Arc<FiniteGroup>, m: usize) -> Self {
        let g: Vec<Vec<i64>> = (0..2 * m)
            .map(|i| {
                (0..2 * m)
                    .map(|j| match (i / 2 == j / 2, i % 2, j % 2) {
                        (true, 0, 1) => 1,
                        (true, 1, 0) => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        Self::from_i64_gram(group, &g)
    }

    /// ℋ²(R) ⊕ R·c with `c` spanning the radical.
    pub fn augmented(group: &Arc<FiniteGroup>) -> Self {
        Self::from_i64_gram(group, &[vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]])
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn gram(&self) -> &[Vec<Element<T>>] {
        &self.gram
    }

    pub fn basis_vector(&self, i: usize) -> RVector<T> {
        (0..self.rank())
            .map(|j| {
                if i == j {
                    Element::one(&self.group)
                } else {
                    Element::zero(&self.group)
                }
            })
            .collect()
    }

    pub fn zero_vector(&self) -> RVector<T> {
        vec![Element::zero(&self.group); self.rank()]
    }

    fn check_vector(&self, x: &[Element<T>]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "vector of length {} in a module of rank {}",
                x.len(),
                self.rank()
            )));
        }
        if x.iter().any(|c| !same_group(c.group(), &self.group)) {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn form(&self, x: &[Element<T>], y: &[Element<T>]) -> Result<Element<T>> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        let mut acc = Element::zero(&self.group);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.gram[i][j].is_zero() {
                    acc = &acc + &(&(xi * &self.gram[i][j]) * &yj.dagger());
                }
            }
        }
        Ok(acc)
    }
}

fn int_coeff<T: Coeff>(c: i64) -> T {
    let mut acc = T::zero();
    for _ in 0..c.unsigned_abs() {
        acc = acc + T::one();
    }
    if c < 0 {
        -acc
    } else {
        acc
    }
}

/// `s·x` for a scalar `s` and coordinate vector `x`.
pub fn scale_vector<T: Coeff>(s: &Element<T>, x: &[Element<T>]) -> RVector<T> {
    x.iter().map(|xi| s * xi).collect()
}

pub fn add_vectors<T: Coeff>(x: &[Element<T>], y: &[Element<T>]) -> RVector<T> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub_vectors<T: Coeff>(x: &[Element<T>], y: &[Element<T>]) -> RVector<T> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// An R-linear endomorphism of a free module of rank `k`. Column `j` holds the
/// coordinates of the image of the `j`-th basis vector, so a vector `x` maps to
/// `y_i = Σ_j x_j m_ij` (scalars act on the left, matrix entries on the right).
#[derive(Clone)]
pub struct RMatrix<T> {
    group: Arc<FiniteGroup>,
    entries: Vec<Vec<Element<T>>>,
}

pub type IntRMatrix = RMatrix<BigInt>;

impl<T: Coeff> PartialEq for RMatrix<T> {
    fn eq(&self, o: &Self) -> bool {
        same_group(&self.group, &o.group) && self.entries == o.entries
    }
}

impl<T: Coeff> fmt::Debug for SkewHermitianModule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SkewHermitianModule")
            .field("gram", &self.gram)
            .finish()
    }
}

impl<T: Coeff> RMatrix<T> {
    pub fn identity(group: &Arc<FiniteGroup>, k: usize) -> Self {
        Self::from_fn(group, k, |i, j| {
            if i == j {
                Element::one(group)
            } else {
                Element::zero(group)
            }
        })
    }

    pub fn from_fn(
        group: &Arc<FiniteGroup>,
        k: usize,
        mut f: impl FnMut(usize, usize) -> Element<T>,
    ) -> Self {
        RMatrix {
            group: group.clone(),
            entries: (0..k).map(|i| (0..k).map(|j| f(i, j)).collect()).collect(),
        }
    }

    /// Integer matrix acting through scalars.
    pub fn from_integer(group: &Arc<FiniteGroup>, m: &[Vec<i64>]) -> Self {
        Self::from_fn(group, m.len(), |i, j| {
            Element::scalar(group, int_coeff(m[i][j]))
        })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element<T> {
        &self.entries[i][j]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.group, self.rank())
    }

    pub fn apply(&self, x: &[Element<T>]) -> RVector<T> {
        let k = self.rank();
        (0..k)
            .map(|i| {
                x.iter()
                    .enumerate()
                    .fold(Element::zero(&self.group), |acc, (j, xj)| {
                        &acc + &(xj * &self.entries[i][j])
                    })
            })
            .collect()
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let k = self.rank();
        Self::from_fn(&self.group, k, |i, j| {
            (0..k).fold(Element::zero(&self.group), |acc, l| {
                &acc + &(&other.entries[l][j] * &self.entries[i][l])
            })
        })
    }

    /// Whether `⟨Mx, My⟩ = ⟨x, y⟩` on all pairs of basis vectors.
    pub fn is_unitary(&self, module: &SkewHermitianModule<T>) -> bool {
        let k = self.rank();
        if k != module.rank() {
            return false;
        }
        let images: Vec<RVector<T>> = (0..k)
            .map(|j| (0..k).map(|i| self.entries[i][j].clone()).collect())
            .collect();
        (0..k).all(|i| {
            (0..k).all(|j| {
                module
                    .form(&images[i], &images[j])
                    .is_ok_and(|v| v == module.gram[i][j])
            })
        })
    }

    /// The ℤ- (or ℚ-) matrix on coefficient coordinates; coordinate `i`,
    /// element `h` sits at position `i·|G| + h`.
    pub fn expand(&self) -> Matrix<T> {
        let g = &self.group;
        let n = g.order();
        let k = self.rank();
        Matrix::from_fn(k * n, k * n, |r, c| {
            let (i, h) = (r / n, r % n);
            let (j, gg) = (c / n, c % n);
            self.entries[i][j].coeff(g.mul(g.inv(gg), h)).clone()
        })
    }

    /// Inverse of [`RMatrix::expand`] for R-linear matrices.
    pub fn from_expanded(group: &Arc<FiniteGroup>, k: usize, m: &Matrix<T>) -> Result<Self> {
        let n = group.order();
        if m.rows() != k * n || m.cols() != k * n {
            return Err(Error::Dimension(
                "expanded matrix has the wrong size".into(),
            ));
        }
        let out = Self::from_fn(group, k, |i, j| {
            Element::from_coeffs(
                group,
                (0..n).map(|h| m[(i * n + h, j * n)].clone()).collect(),
            )
            .unwrap()
        });
        if out.expand() != *m {
            return Err(Error::Precondition(
                "matrix does not commute with the left G-action".into(),
            ));
        }
        Ok(out)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U + Copy) -> RMatrix<U> {
        RMatrix {
            group: self.group.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| x.map(f)).collect())
                .collect(),
        }
    }
}

impl IntRMatrix {
    /// Inverse over ℤG, if the matrix is invertible there.
    pub fn inverse(&self) -> Option<Self> {
        let inv: QMatrix = self.expand().to_q().inverse()?;
        let z = inv.to_z()?;
        Self::from_expanded(&self.group, self.rank(), &z).ok()
    }

    /// `[X, Y] = X Y X⁻¹ Y⁻¹`.
    pub fn commutator(&self, other: &Self) -> Option<Self> {
        Some(
            self.compose(other)
                .compose(&self.inverse()?)
                .compose(&other.inverse()?),
        )
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for RMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Coeff> fmt::Debug for RMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

/// `T_a(r): x ↦ x + ⟨x,a⟩·r·a` for isotropic `a` and †-fixed `r`.
pub fn isotropic_transvection<T: Coeff>(
    m: &SkewHermitianModule<T>,
    a: &[Element<T>],
    r: &Element<T>,
) -> Result<RMatrix<T>> {
    if !m.form(a, a)?.is_zero() {
        return Err(Error::Precondition(
            "⟨a,a⟩ ≠ 0: the vector is not isotropic".into(),
        ));
    }
    if !r.is_hermitian() {
        return Err(Error::Precondition("r† ≠ r".into()));
    }
    let k = m.rank();
    let coeffs: Vec<Element<T>> = (0..k)
        .map(|j| &m.form(&m.basis_vector(j), a).unwrap() * r)
        .collect();
    Ok(RMatrix::from_fn(&m.group, k, |i, j| {
        let extra = &coeffs[j] * &a[i];
        if i == j {
            &Element::one(&m.group) + &extra
        } else {
            extra
        }
    }))
}

/// `E(c,a,λ): x ↦ x + ⟨x,a⟩c + ⟨x,c⟩a + ⟨x,c⟩λc`.
pub fn eichler<T: Coeff>(
    m: &SkewHermitianModule<T>,
    c: &[Element<T>],
    a: &[Element<T>],
    lambda: &Element<T>,
) -> Result<RMatrix<T>> {
    if !m.form(c, c)?.is_zero() {
        return Err(Error::Precondition("⟨c,c⟩ ≠ 0".into()));
    }
    if !m.form(a, c)?.is_zero() {
        return Err(Error::Precondition("⟨a,c⟩ ≠ 0".into()));
    }
    if (lambda - &lambda.dagger()) != m.form(a, a)? {
        return Err(Error::Precondition("λ − λ† ≠ ⟨a,a⟩".into()));
    }
    let k = m.rank();
    Ok(RMatrix::from_fn(&m.group, k, |i, j| {
        let bj = m.basis_vector(j);
        let xa = m.form(&bj, a).unwrap();
        let xc = m.form(&bj, c).unwrap();
        let mut v = &(&xa * &c[i]) + &(&xc * &a[i]);
        v = &v + &(&(&xc * lambda) * &c[i]);
        if i == j {
            v = &v + &Element::one(&m.group);
        }
        v
    }))
}

/// `E(c,a)` with the default `λ = ½⟨a,a⟩`, when the halving exists.
pub fn eichler_default<T: Coeff>(
    m: &SkewHermitianModule<T>,
    c: &[Element<T>],
    a: &[Element<T>],
) -> Result<RMatrix<T>> {
    let lambda = m.form(a, a)?.halve().ok_or_else(|| {
        Error::Precondition("½⟨a,a⟩ does not exist over ℤG; supply λ explicitly".into())
    })?;
    eichler(m, c, a, &lambda)
}

/// Outcome of the commutator identity in the two test modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutatorCheck {
    /// ℋ²(R) ⊕ R·c with `c` radical, `v = a − λb`.
    pub radical: bool,
    /// ℋ²(R) ⊕ ℋ²(R) with `c` the second `e`, `v = b − λa`.
    pub nondegenerate: bool,
}

impl CommutatorCheck {
    pub fn holds(&self) -> bool {
        self.radical && self.nondegenerate
    }
}

/// `[E(c, v), E(c, b)] = T_c(2λ)` for †-fixed `λ`, in both test modules.
pub fn commutator_identity_check(
    group: &Arc<FiniteGroup>,
    lambda: &IntElement,
) -> Result<CommutatorCheck> {
    if !lambda.is_hermitian() {
        return Err(Error::Precondition("λ† ≠ λ".into()));
    }
    let zero = IntElement::zero(group);
    let two_lambda = lambda.scale(&BigInt::from(2));

    let aug = SkewHermitianModule::augmented(group);
    let (a, b, c) = (
        aug.basis_vector(0),
        aug.basis_vector(1),
        aug.basis_vector(2),
    );
    let v = sub_vectors(&a, &scale_vector(lambda, &b));
    let radical = commutator_matches(&aug, &c, &v, &b, &two_lambda, &zero)?;

    let hyp = SkewHermitianModule::hyperbolic_sum(group, 2);
    let (a, b, c) = (
        hyp.basis_vector(0),
        hyp.basis_vector(1),
        hyp.basis_vector(2),
    );
    let v = sub_vectors(&b, &scale_vector(lambda, &a));
    let nondegenerate = commutator_matches(&hyp, &c, &v, &b, &two_lambda, &zero)?;
    Ok(CommutatorCheck {
        radical,
        nondegenerate,
    })
}

fn commutator_matches(
    m: &SkewHermitianModule<BigInt>,
    c: &[IntElement],
    v: &[IntElement],
    w: &[IntElement],
    mu: &IntElement,
    zero: &IntElement,
) -> Result<bool> {
    let x = eichler(m, c, v, zero)?;
    let y = eichler(m, c, w, zero)?;
    let lhs = x
        .commutator(&y)
        .ok_or_else(|| Error::Internal("Eichler transformation not invertible".into()))?;
    let rhs = isotropic_transvection(m, c, mu)?;
    Ok(lhs == rhs)
}

/// `ρ_g`: right multiplication of every coordinate by `g⁻¹ = g†`, so that
/// `g ↦ ρ_g` is a homomorphism.
pub fn rho(group: &Arc<FiniteGroup>, g: usize) -> IntRMatrix {
    let gi = IntElement::basis(group, group.inv(g));
    RMatrix::from_fn(group, 2, |i, j| {
        if i == j {
            gi.clone()
        } else {
            IntElement::zero(group)
        }
    })
}

/// The two standard generators of SL₂(ℤ), as `(name, matrix)`.
pub fn sl2_generators() -> [(&'static str, Vec<Vec<i64>>); 2] {
    [
        ("T", vec![vec![1, 1], vec![0, 1]]),
        ("S", vec![vec![0, -1], vec![1, 0]]),
    ]
}

/// A named generator of Γ(G).
#[derive(Clone, Debug)]
pub struct NamedRMatrix {
    pub name: String,
    pub matrix: IntRMatrix,
}

/// Generators of Γ(G) on ℋ²(R): `T_e(r)` for `r` in the ℤ-basis of R₊₊, the
/// SL₂(ℤ) pair, and `ρ_g` for a generating set of G.
pub fn gamma_generators(group: &Arc<FiniteGroup>) -> Vec<NamedRMatrix> {
    let m = SkewHermitianModule::hyperbolic(group);
    let e = m.basis_vector(0);
    let mut out = Vec::new();
    for r in plus_cone_basis(group).plus_plus {
        let matrix = isotropic_transvection(&m, &e, &r).expect("e is isotropic and R₊₊ is †-fixed");
        out.push(NamedRMatrix {
            name: format!("T_e({r})"),
            matrix,
        });
    }
    for (name, s) in sl2_generators() {
        out.push(NamedRMatrix {
            name: name.to_string(),
            matrix: RMatrix::from_integer(group, &s),
        });
    }
    for g in group.generators() {
        out.push(NamedRMatrix {
            name: format!("rho({})", group.label(g)),
            matrix: rho(group, g),
        });
    }
    out
}

/// `ρ_g T_e(r) ρ_{g†} = T_e(g r g⁻¹)`.
pub fn conjugation_identity(group: &Arc<FiniteGroup>, g: usize, r: &IntElement) -> Result<bool> {
    let m = SkewHermitianModule::hyperbolic(group);
    let e = m.basis_vector(0);
    let lhs = rho(group, g)
        .compose(&isotropic_transvection(&m, &e, r)?)
        .compose(&rho(group, group.inv(g)));
    let conj = &(&IntElement::basis(group, g) * r) * &IntElement::basis(group, group.inv(g));
    Ok(lhs == isotropic_transvection(&m, &e, &conj)?)
}

/// Expanded rational matrices of an R-matrix list (for ℚ-level diagnostics).
pub fn expand_rational(ms: &[IntRMatrix]) -> Vec<QMatrix> {
    ms.iter()
        .map(|m| m.expand().map(|x: &BigInt| qz(x)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn hyperbolic_form() {
        let g = z2();
        let m = SkewHermitianModule::<BigInt>::hyperbolic(&g);
        let (e, f) = (m.basis_vector(0), m.basis_vector(1));
        assert!(m.form(&e, &e).unwrap().is_zero());
        assert_eq!(m.form(&e, &f).unwrap(), IntElement::one(&g));
        assert_eq!(m.form(&f, &e).unwrap(), -&IntElement::one(&g));
    }

    #[test]
    fn transvection_matrix_form() {
        let g = z2();
        let m = SkewHermitianModule::hyperbolic(&g);
        let e = m.basis_vector(0);
        let r = IntElement::from_i64(&g, &[0, 2]).unwrap();
        let t = isotropic_transvection(&m, &e, &r).unwrap();
        assert_eq!(t.entry(0, 1), &-&r);
        assert!(t.entry(0, 0) == &IntElement::one(&g) && t.entry(1, 1) == &IntElement::one(&g));
        assert!(t.entry(1, 0).is_zero());
        assert!(t.is_unitary(&m));
        assert!(
            isotropic_transvection(&m, &e, &IntElement::from_i64(&g, &[0, 0]).unwrap())
                .unwrap()
                .is_identity()
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let m = SkewHermitianModule::hyperbolic(&g);
        let e = m.basis_vector(0);
        let skew = IntElement::from_i64(&g, &[0, 1, 0]).unwrap();
        assert!(matches!(
            isotropic_transvection(&m, &e, &skew),
            Err(Error::Precondition(_))
        ));
        let ef = add_vectors(
            &e,
            &scale_vector(&IntElement::basis(&g, 1), &m.basis_vector(1)),
        );
        assert!(isotropic_transvection(&m, &ef, &IntElement::one(&g)).is_err());
    }

    #[test]
    fn eichler_radical_example() {
        let g = z2();
        let m = SkewHermitianModule::augmented(&g);
        let (e, f, c) = (m.basis_vector(0), m.basis_vector(1), m.basis_vector(2));
        let x = eichler(&m, &c, &e, &IntElement::zero(&g)).unwrap();
        // ⟨f, e⟩ = −1, so f ↦ f + ⟨f,e⟩c = f − c
        assert_eq!(x.apply(&f), sub_vectors(&f, &c));
        assert_eq!(x.apply(&e), e);
        assert_eq!(x.apply(&c), c);
    }

    #[test]
    fn commutator_trivial_lambda() {
        let g = z2();
        assert!(commutator_identity_check(&g, &IntElement::zero(&g))
            .unwrap()
            .holds());
        let two = IntElement::from_i64(&g, &[2, 0]).unwrap();
        assert!(commutator_identity_check(&g, &two).unwrap().holds());
    }

    #[test]
    fn gamma_counts() {
        assert_eq!(gamma_generators(&Arc::new(FiniteGroup::trivial())).len(), 3);
        assert_eq!(gamma_generators(&z2()).len(), 5);
    }
}
