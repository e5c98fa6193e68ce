//! The group ring ℤG, the group algebra ℚG and the involution †.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{diagonalize, qz, Ring, ZMatrix, Q};

/// An element `Σ x_g e_g` of the group ring with coefficients in `T`.
#[derive(Clone)]
pub struct Element<T> {
    group: Arc<FiniteGroup>,
    coeffs: Vec<T>,
}

/// Element of R = ℤG.
pub type IntElement = Element<BigInt>;
/// Element of ℚG.
pub type RatElement = Element<Q>;

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<T: Ring> Element<T> {
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        Element {
            group: group.clone(),
            coeffs: vec![T::zero(); group.order()],
        }
    }

    pub fn one(group: &Arc<FiniteGroup>) -> Self {
        Self::basis(group, 0)
    }

    /// The basis element `e_g`.
    pub fn basis(group: &Arc<FiniteGroup>, g: usize) -> Self {
        let mut x = Self::zero(group);
        x.coeffs[g] = T::one();
        x
    }

    pub fn from_coeffs(group: &Arc<FiniteGroup>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(Element {
            group: group.clone(),
            coeffs,
        })
    }

    /// `Σ c e_g` over the given `(g, c)` terms.
    pub fn from_terms(group: &Arc<FiniteGroup>, terms: &[(usize, T)]) -> Self {
        let mut x = Self::zero(group);
        for (g, c) in terms {
            x.coeffs[*g] = x.coeffs[*g].clone() + c.clone();
        }
        x
    }

    pub fn scalar(group: &Arc<FiniteGroup>, c: T) -> Self {
        Self::from_terms(group, &[(0, c)])
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &T {
        &self.coeffs[g]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `x†`: the coefficient of `g` becomes that of `g⁻¹`.
    pub fn dagger(&self) -> Self {
        let g = &self.group;
        let coeffs = (0..g.order())
            .map(|h| self.coeffs[g.inv(h)].clone())
            .collect();
        Element {
            group: g.clone(),
            coeffs,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.dagger()
    }

    pub fn scale(&self, c: &T) -> Self {
        Element {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn augmentation(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, b| a + b.clone())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if same_group(&self.group, &o.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Element {
            group: self.group.clone(),
            coeffs,
        })
    }

    /// Convolution product.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let g = &self.group;
        let mut out = vec![T::zero(); g.order()];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let row = &g.table()[a];
            for (b, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    let k = row[b];
                    out[k] = out[k].clone() + x.clone() * y.clone();
                }
            }
        }
        Ok(Element {
            group: g.clone(),
            coeffs: out,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.group), |acc, _| &acc * self)
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Element<U> {
        Element {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Matrix of `y ↦ y·self` on the coefficient space (columns are images of `e_g`).
    pub fn right_mul_matrix(&self) -> crate::linalg::Matrix<T> {
        let g = &self.group;
        let n = g.order();
        crate::linalg::Matrix::from_fn(n, n, |h, k| {
            // (e_k · self)_h = self_{k⁻¹h}
            self.coeffs[g.mul(g.inv(k), h)].clone()
        })
    }

    /// Matrix of `y ↦ self·y` on the coefficient space.
    pub fn left_mul_matrix(&self) -> crate::linalg::Matrix<T> {
        let g = &self.group;
        let n = g.order();
        crate::linalg::Matrix::from_fn(n, n, |h, k| self.coeffs[g.mul(h, g.inv(k))].clone())
    }
}

/// Coefficient rings where halving may or may not be possible.
pub trait Coeff: Ring {
    fn half(&self) -> Option<Self>;
}

impl Coeff for BigInt {
    fn half(&self) -> Option<Self> {
        self.is_even().then(|| self / 2)
    }
}

impl Coeff for Q {
    fn half(&self) -> Option<Self> {
        Some(self / Q::from_integer(2.into()))
    }
}

impl<T: Coeff> Element<T> {
    /// `self / 2`, if it exists in the coefficient ring.
    pub fn halve(&self) -> Option<Self> {
        let coeffs: Option<Vec<T>> = self.coeffs.iter().map(Coeff::half).collect();
        coeffs.map(|coeffs| Element {
            group: self.group.clone(),
            coeffs,
        })
    }
}

impl IntElement {
    pub fn from_i64(group: &Arc<FiniteGroup>, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(group, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_q(&self) -> RatElement {
        self.map(qz)
    }
}

impl RatElement {
    /// Back to ℤG when all coefficients are integers.
    pub fn to_z(&self) -> Option<IntElement> {
        self.coeffs
            .iter()
            .all(|c| c.is_integer())
            .then(|| self.map(|c| c.to_integer()))
    }
}

impl<T: Ring> PartialEq for Element<T> {
    fn eq(&self, o: &Self) -> bool {
        same_group(&self.group, &o.group) && self.coeffs == o.coeffs
    }
}

impl<T: Ring> Eq for Element<T> where T: Eq {}

impl<T: Ring + fmt::Display> fmt::Display for Element<T> {
    /// Written as `2·1 - 1·t`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, abs) = match s.strip_prefix('-') {
                Some(a) => (true, a.to_string()),
                None => (false, s),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            write!(f, "{abs}·{}", self.group.label(g))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Ring> fmt::Debug for Element<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.coeffs)
    }
}

// Operator forms panic on mismatched groups; use the `try_` methods to get an error.
impl<T: Ring> Add for &Element<T> {
    type Output = Element<T>;
    fn add(self, o: Self) -> Element<T> {
        self.try_add(o)
            .expect("group ring elements over different groups")
    }
}

impl<T: Ring> Sub for &Element<T> {
    type Output = Element<T>;
    fn sub(self, o: Self) -> Element<T> {
        self.try_add(&-o)
            .expect("group ring elements over different groups")
    }
}

impl<T: Ring> Neg for &Element<T> {
    type Output = Element<T>;
    fn neg(self) -> Element<T> {
        self.map(|c| -c.clone())
    }
}

impl<T: Ring> Mul for &Element<T> {
    type Output = Element<T>;
    fn mul(self, o: Self) -> Element<T> {
        self.try_mul(o)
            .expect("group ring elements over different groups")
    }
}

/// `|G|` times the coefficient of `e_1` in `x y†`.
pub fn trace_form<T: Ring>(x: &Element<T>, y: &Element<T>) -> Result<T> {
    let p = x.try_mul(&y.dagger())?;
    let n = x.group.order();
    Ok((0..n).fold(T::zero(), |acc, _| acc + p.coeff(0).clone()))
}

/// Gram matrix of the trace form on the basis `e_g`.
pub fn trace_form_gram(group: &Arc<FiniteGroup>) -> crate::linalg::QMatrix {
    let n = group.order();
    let basis: Vec<RatElement> = (0..n).map(|g| RatElement::basis(group, g)).collect();
    crate::linalg::Matrix::from_fn(n, n, |i, j| trace_form(&basis[i], &basis[j]).unwrap())
}

/// ℤ-bases of R₊ = {x : x† = x} and R₊₊ = {r + r†}.
#[derive(Clone, Debug)]
pub struct PlusCone {
    pub plus: Vec<IntElement>,
    pub plus_plus: Vec<IntElement>,
}

/// R₊ has basis `e_g + e_{g⁻¹}` over pairs `g ≠ g⁻¹` and `e_g` over `g² = 1`;
/// R₊₊ has basis `e_g + e_{g⁻¹}` over all `g`, deduplicated (so `2e_g` at
/// involutions and at the identity). Both are listed by smallest index.
pub fn plus_cone_basis(group: &Arc<FiniteGroup>) -> PlusCone {
    let mut plus = Vec::new();
    let mut plus_plus = Vec::new();
    for g in 0..group.order() {
        let gi = group.inv(g);
        if gi < g {
            continue;
        }
        let sym = IntElement::from_terms(group, &[(g, BigInt::one()), (gi, BigInt::one())]);
        if gi == g {
            plus.push(IntElement::basis(group, g));
        } else {
            plus.push(sym.clone());
        }
        plus_plus.push(sym);
    }
    PlusCone { plus, plus_plus }
}

impl PlusCone {
    /// `[R₊ : R₊₊]`, from the coordinates of the R₊₊ basis in the R₊ basis.
    pub fn index(&self) -> BigInt {
        let k = self.plus.len();
        let m = ZMatrix::from_fn(k, k, |i, j| {
            // coordinate of plus_plus[j] on plus[i]: compare at the first support element of plus[i]
            let g = self.plus[i]
                .coeffs()
                .iter()
                .position(|c| !c.is_zero())
                .unwrap();
            self.plus_plus[j].coeff(g) / self.plus[i].coeff(g)
        });
        let d = diagonalize(&m);
        d.d.iter().fold(BigInt::one(), |a, x| a * x.abs())
    }

    pub fn in_plus(x: &IntElement) -> bool {
        x.is_hermitian()
    }

    /// Membership in R₊₊: hermitian with even coefficients at the identity and
    /// at every involution.
    pub fn in_plus_plus(x: &IntElement) -> bool {
        let g = x.group();
        x.is_hermitian()
            && (0..g.order())
                .filter(|&h| g.inv(h) == h)
                .all(|h| x.coeff(h).is_even())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(3))
    }

    #[test]
    fn dagger_basics() {
        let g = z3();
        let t = IntElement::basis(&g, 1);
        assert_eq!(t.dagger(), IntElement::basis(&g, 2));
        let x = IntElement::from_i64(&g, &[2, 3, 0]).unwrap();
        assert_eq!(x.dagger(), IntElement::from_i64(&g, &[2, 0, 3]).unwrap());
    }

    #[test]
    fn trace_form_examples() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let t = IntElement::basis(&g, 1);
        assert_eq!(trace_form(&t, &t).unwrap(), BigInt::from(2));
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let one = IntElement::one(&s3);
        assert_eq!(trace_form(&one, &one).unwrap(), BigInt::from(6));
        assert_eq!(
            trace_form(&one, &IntElement::one(&g)),
            Err(Error::GroupMismatch)
        );
    }

    #[test]
    fn plus_cone_small() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let pc = plus_cone_basis(&g);
        assert_eq!(pc.plus.len(), 2);
        assert_eq!(pc.plus_plus[0], IntElement::from_i64(&g, &[2, 0]).unwrap());
        assert_eq!(pc.plus_plus[1], IntElement::from_i64(&g, &[0, 2]).unwrap());
        assert_eq!(pc.index(), BigInt::from(4));
        let triv = Arc::new(FiniteGroup::trivial());
        let pc = plus_cone_basis(&triv);
        assert_eq!(
            pc.plus_plus,
            vec![IntElement::from_i64(&triv, &[2]).unwrap()]
        );
    }

    #[test]
    fn display() {
        let g = z3();
        let x = IntElement::from_i64(&g, &[2, -1, 0]).unwrap();
        assert_eq!(x.to_string(), "2·1 - 1·t");
        assert_eq!(IntElement::zero(&g).to_string(), "0");
    }

    #[test]
    fn mul_matrices_match_products() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let x = IntElement::from_i64(&g, &[1, 2, 0, -1, 3, 0]).unwrap();
        let y = IntElement::from_i64(&g, &[0, 1, 1, 0, -2, 5]).unwrap();
        assert_eq!(
            x.right_mul_matrix().mul_vec(y.coeffs()),
            (&y * &x).coeffs().to_vec()
        );
        assert_eq!(
            x.left_mul_matrix().mul_vec(y.coeffs()),
            (&x * &y).coeffs().to_vec()
        );
    }
}
