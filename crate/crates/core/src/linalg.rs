//! Dense exact linear algebra over ℤ, ℚ and 𝔽_p.
//!
//! Everything here is exact; there is no floating point anywhere in the crate.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Coefficient rings used by the crate (ℤ and ℚ in practice).
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qz(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Q>;
pub type ZMatrix = Matrix<BigInt>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors (all of length `len`).
    pub fn from_cols(len: usize, cols: &[Vec<T>]) -> Self {
        Self::from_fn(len, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc + a.clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Block-stack matrices vertically.
    pub fn vstack(blocks: &[Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            rows += b.rows;
            data.extend(b.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

impl<'a, T: Ring> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }
}

impl<'a, T: Ring> Add<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<'a, T: Ring> Sub<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl ZMatrix {
    pub fn from_i64(rows: Vec<Vec<i64>>) -> Self {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn to_q(&self) -> QMatrix {
        self.map(qz)
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        self.row_vecs()
            .into_iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().expect("entry exceeds i64"))
                    .collect()
            })
            .collect()
    }

    pub fn determinant(&self) -> BigInt {
        let d = self.to_q().determinant();
        debug_assert!(d.is_integer());
        d.to_integer()
    }
}

impl QMatrix {
    /// Integer matrix, if every entry is integral.
    pub fn to_z(&self) -> Option<ZMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                            m[(i, j)] = v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : self·x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self·x = b`, if one exists.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Solve `self·X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &QMatrix) -> Option<QMatrix> {
        let cols: Option<Vec<Vec<Q>>> = (0..rhs.cols).map(|j| self.solve(&rhs.col(j))).collect();
        cols.map(|c| Matrix::from_cols(self.cols, &c))
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Q::one()
            } else {
                Q::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= piv.clone();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone() / piv.clone();
                    for j in c..n {
                        let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(x·I − self)`, coefficients low to high.
    /// Reduces to upper Hessenberg form first.
    pub fn charpoly(&self) -> Vec<Q> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        for k in 0..n.saturating_sub(2) {
            let Some(p) = (k + 1..n).find(|&i| !h[(i, k)].is_zero()) else {
                continue;
            };
            if p != k + 1 {
                h.swap_rows(p, k + 1);
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + k + 1);
                }
            }
            let piv = h[(k + 1, k)].clone();
            for i in k + 2..n {
                if h[(i, k)].is_zero() {
                    continue;
                }
                let f = h[(i, k)].clone() / piv.clone();
                for j in 0..n {
                    let v = h[(i, j)].clone() - f.clone() * h[(k + 1, j)].clone();
                    h[(i, j)] = v;
                }
                for j in 0..n {
                    let v = h[(j, k + 1)].clone() + f.clone() * h[(j, i)].clone();
                    h[(j, k + 1)] = v;
                }
            }
        }
        // p_m(x) = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod h_{j,j-1}) p_{i-1}
        let mut polys: Vec<Vec<Q>> = vec![vec![Q::one()]];
        for m in 0..n {
            let prev = &polys[m];
            let mut next = vec![Q::zero(); m + 2];
            for (d, c) in prev.iter().enumerate() {
                next[d + 1] = next[d + 1].clone() + c.clone();
                next[d] = next[d].clone() - h[(m, m)].clone() * c.clone();
            }
            let mut prod = Q::one();
            for i in (0..m).rev() {
                prod *= h[(i + 1, i)].clone();
                if prod.is_zero() {
                    break;
                }
                let coef = h[(i, m)].clone() * prod.clone();
                if coef.is_zero() {
                    continue;
                }
                for (d, c) in polys[i].iter().enumerate() {
                    next[d] = next[d].clone() - coef.clone() * c.clone();
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

/// A ℚ-subspace of ℚⁿ kept as a reduced row echelon basis, so that
/// membership tests and coordinates are cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<'a>(ambient: usize, vs: impl IntoIterator<Item = &'a Vec<Q>>) -> Self {
        let mut s = Self::new(ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn full(ambient: usize) -> Self {
        let id = QMatrix::identity(ambient);
        Self::spanned_by(ambient, &id.row_vecs())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.rows
    }

    fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (wj, rj) in w.iter_mut().zip(row) {
                    if !rj.is_zero() {
                        *wj = wj.clone() - f.clone() * rj.clone();
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (rj, wj) in row.iter_mut().zip(&w) {
                    if !wj.is_zero() {
                        *rj = rj.clone() - f.clone() * wj.clone();
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Restriction of a linear map (preserving this subspace) to the echelon basis.
    pub fn restrict(&self, m: &QMatrix) -> Option<QMatrix> {
        let cols: Option<Vec<Vec<Q>>> = self
            .rows
            .iter()
            .map(|b| self.coords(&m.mul_vec(b)))
            .collect();
        cols.map(|c| Matrix::from_cols(self.dim(), &c))
    }

    /// Matrix with the basis vectors as columns.
    pub fn basis_matrix(&self) -> QMatrix {
        Matrix::from_cols(self.ambient, &self.rows)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

/// Joint kernel of a family of matrices: `{x : Mx = 0 for all M}`.
pub fn joint_kernel(ms: &[QMatrix], n: usize) -> Vec<Vec<Q>> {
    if ms.is_empty() {
        return QMatrix::identity(n).row_vecs();
    }
    Matrix::vstack(ms).nullspace()
}

/// Diagonal reduction `U·A·V = D` over ℤ with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub u: ZMatrix,
    pub v: ZMatrix,
    /// Nonzero diagonal entries (positive), in order; `d.len()` is the rank.
    pub d: Vec<BigInt>,
}

pub fn diagonalize(a: &ZMatrix) -> Diagonalization {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut u = ZMatrix::identity(m);
    let mut v = ZMatrix::identity(n);
    let mut d = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !w[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| w[(i, j)].abs() < w[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_swap(&mut w, t, pi);
        row_swap(&mut u, t, pi);
        col_swap(&mut w, t, pj);
        col_swap(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if w[(i, t)].is_zero() {
                    continue;
                }
                let f = w[(i, t)].div_floor(&w[(t, t)]);
                row_axpy(&mut w, i, t, &f);
                row_axpy(&mut u, i, t, &f);
                if !w[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if w[(t, j)].is_zero() {
                    continue;
                }
                let f = w[(t, j)].div_floor(&w[(t, t)]);
                col_axpy(&mut w, j, t, &f);
                col_axpy(&mut v, j, t, &f);
                if !w[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest nonzero entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t + 1..m {
                if !w[(i, t)].is_zero() && w[(i, t)].abs() < w[best].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !w[(t, j)].is_zero() && w[(t, j)].abs() < w[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                row_swap(&mut w, t, best.0);
                row_swap(&mut u, t, best.0);
            } else if best.1 != t {
                col_swap(&mut w, t, best.1);
                col_swap(&mut v, t, best.1);
            }
        }
        if w[(t, t)].is_negative() {
            for j in 0..n {
                let x = -w[(t, j)].clone();
                w[(t, j)] = x;
            }
            for j in 0..m {
                let x = -u[(t, j)].clone();
                u[(t, j)] = x;
            }
        }
        d.push(w[(t, t)].clone());
        t += 1;
    }
    Diagonalization { u, v, d }
}

fn row_swap(m: &mut ZMatrix, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols() {
            let x = m[(a, j)].clone();
            m[(a, j)] = m[(b, j)].clone();
            m[(b, j)] = x;
        }
    }
}

fn col_swap(m: &mut ZMatrix, a: usize, b: usize) {
    if a != b {
        for i in 0..m.rows() {
            let x = m[(i, a)].clone();
            m[(i, a)] = m[(i, b)].clone();
            m[(i, b)] = x;
        }
    }
}

/// row_i -= f * row_src
fn row_axpy(m: &mut ZMatrix, i: usize, src: usize, f: &BigInt) {
    for j in 0..m.cols() {
        if !m[(src, j)].is_zero() {
            let x = m[(i, j)].clone() - f * m[(src, j)].clone();
            m[(i, j)] = x;
        }
    }
}

/// col_j -= f * col_src
fn col_axpy(m: &mut ZMatrix, j: usize, src: usize, f: &BigInt) {
    for i in 0..m.rows() {
        if !m[(i, src)].is_zero() {
            let x = m[(i, j)].clone() - f * m[(i, src)].clone();
            m[(i, j)] = x;
        }
    }
}

/// ℤ-basis of the integer kernel `{x ∈ ℤⁿ : A·x = 0}`.
pub fn integer_kernel(a: &ZMatrix) -> Vec<Vec<BigInt>> {
    let dg = diagonalize(a);
    (dg.d.len()..a.cols()).map(|j| dg.v.col(j)).collect()
}

/// Null space of an integer matrix reduced modulo a prime `p`.
pub fn nullspace_mod_p(a: &ZMatrix, p: u64) -> Vec<Vec<u64>> {
    let pm = BigInt::from(p);
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| a[(i, j)].mod_floor(&pm).to_u64().unwrap())
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    let t = mul_mod(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - t) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[i][f]) % p;
            }
            v
        })
        .collect()
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "no inverse of 0 mod {p}");
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Convert an integer vector to rationals.
pub fn to_q_vec(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(qz).collect()
}

/// Convert a rational vector to integers if every entry is integral.
pub fn to_z_vec(v: &[Q]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}
