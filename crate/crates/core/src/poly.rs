//! Univariate polynomials over ℚ, ℤ and 𝔽_p, with factorization over ℚ
//! (Berlekamp–Zassenhaus: Cantor–Zassenhaus mod p, Hensel lifting,
//! subset recombination).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{inv_mod, is_prime, mul_mod, qz, QMatrix, Q};

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly(Vec<Q>);

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZPoly(Vec<BigInt>);

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![Q::one()])
    }

    pub fn x() -> Self {
        QPoly(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc().recip();
        QPoly(self.0.iter().map(|c| c.clone() * l.clone()).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        QPoly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Q::zero)
                        + o.0.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Self {
        QPoly::new(self.0.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        QPoly::new(out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let inv = d.lc().recip();
        let mut quo = vec![Q::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap().clone() * inv.clone();
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dj.clone();
                }
            }
            quo[k] = c;
            r.pop();
        }
        (QPoly::new(quo), QPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&qt.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&qt.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        let l = r0.lc().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Evaluate at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = &acc * m;
            for i in 0..n {
                acc[(i, i)] = acc[(i, i)].clone() + c.clone();
            }
        }
        acc
    }

    /// Primitive integer polynomial with the same roots (positive leading coefficient).
    pub fn to_primitive_z(&self) -> ZPoly {
        let den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let zs: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c.clone() * qz(&den)).to_integer())
            .collect();
        ZPoly::new(zs).primitive()
    }
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.0.iter().map(qz).collect())
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        ZPoly(self.0.iter().map(|x| x / &c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ZPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    /// Exact quotient over ℤ, if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return if self.is_zero() {
                Some(self.clone())
            } else {
                None
            };
        }
        let l = d.lc();
        let mut quo = vec![BigInt::zero(); r.len() - dd];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let (c, rem) = r.last().unwrap().div_rem(&l);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            quo[k] = c;
            r.pop();
        }
        if r.iter().all(Zero::is_zero) {
            Some(ZPoly::new(quo))
        } else {
            None
        }
    }

    pub fn max_norm(&self) -> BigInt {
        self.0
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    fn reduce_mod(&self, m: &BigInt) -> Self {
        ZPoly::new(self.0.iter().map(|c| c.mod_floor(m)).collect())
    }

    fn symmetric_mod(&self, m: &BigInt) -> Self {
        let half: BigInt = m / 2;
        ZPoly::new(
            self.0
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    fn to_fp(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        FpPoly::new(
            self.0
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
            p,
        )
    }
}

/// Polynomial over 𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FpPoly {
    c: Vec<u64>,
    p: u64,
}

impl FpPoly {
    fn new(mut c: Vec<u64>, p: u64) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { c, p }
    }

    fn one(p: u64) -> Self {
        FpPoly::new(vec![1], p)
    }

    fn x(p: u64) -> Self {
        FpPoly::new(vec![0, 1], p)
    }

    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn is_one(&self) -> bool {
        self.c == [1]
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(*self.c.last().unwrap(), self.p);
        FpPoly::new(
            self.c.iter().map(|&x| mul_mod(x, inv, self.p)).collect(),
            self.p,
        )
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&0) + o.c.get(i).unwrap_or(&0))
                .collect(),
            self.p,
        )
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        FpPoly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&0) + p - o.c.get(i).unwrap_or(&0))
                .collect(),
            p,
        )
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(Vec::new(), self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        FpPoly::new(out, p)
    }

    fn divrem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.deg().expect("division by zero");
        let inv = inv_mod(*d.c.last().unwrap(), p);
        let mut r = self.c.clone();
        let mut quo = vec![0u64; r.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let c = mul_mod(*r.last().unwrap(), inv, p);
            if c != 0 {
                for (j, &dj) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mul_mod(c, dj, p)) % p;
                }
            }
            quo[k] = c;
            r.pop();
        }
        (FpPoly::new(quo, p), FpPoly::new(r, p))
    }

    fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(s, t)` with `s·self + t·o = 1`; requires coprime inputs.
    fn bezout(&self, o: &Self) -> (Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::new(vec![], p));
        let (mut t0, mut t1) = (FpPoly::new(vec![], p), FpPoly::one(p));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&qt.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&qt.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        assert_eq!(r0.deg(), Some(0), "bezout on non-coprime polynomials");
        let inv = inv_mod(r0.c[0], p);
        let k = FpPoly::new(vec![inv], p);
        (s0.mul(&k), t0.mul(&k))
    }

    fn derivative(&self) -> Self {
        FpPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
            self.p,
        )
    }

    fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = FpPoly::one(self.p);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = FpPoly::x(p);
    let mut i = 1;
    while rest.deg().unwrap_or(0) >= 2 * i {
        h = h.powmod(&BigUint::from(p), &rest);
        let g = h.sub(&FpPoly::x(p)).gcd(&rest);
        if !g.is_one() {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.deg().unwrap_or(0) > 0 {
        let d = rest.deg().unwrap();
        out.push((rest.monic(), d));
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting (odd `p`).
fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let n = f.deg().unwrap();
    if n == d {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    let e: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = FpPoly::new((0..n).map(|_| rng.gen_range(0..p)).collect(), p);
        if a.deg().unwrap_or(0) == 0 {
            continue;
        }
        let b = a.powmod(&e, f).sub(&FpPoly::one(p));
        let g = b.gcd(f);
        let gd = g.deg().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = f.divrem(&g).0;
            equal_degree(&g, d, rng, out);
            equal_degree(&h, d, rng, out);
            return;
        }
    }
}

fn factor_mod_p(f: &FpPoly, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&f.monic()) {
        equal_degree(&g, d, rng, &mut out);
    }
    out
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Lift `f ≡ lc(f)·g·h (mod p)` to `mod p^k`; `g`, `h` monic and coprime mod `p`.
fn hensel_two(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let pb = BigInt::from(p);
    let (s, t) = g.bezout(h);
    let lc = f.lc();
    let lc_inv = inv_mod(lc.mod_floor(&pb).to_u64().unwrap(), p);
    let lift = |x: &FpPoly| ZPoly::new(x.c.iter().map(|&c| BigInt::from(c)).collect());
    let (mut gg, mut hh) = (lift(g), lift(h));
    let mut m = pb.clone();
    for _ in 1..k {
        let prod = gg.mul(&hh).mul(&ZPoly(vec![lc.clone()]));
        let diff: Vec<BigInt> = (0..f.0.len().max(prod.0.len()))
            .map(|i| {
                f.0.get(i).cloned().unwrap_or_default() - prod.0.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let e = ZPoly::new(
            diff.iter()
                .map(|c| {
                    debug_assert!((c % &m).is_zero());
                    c / &m
                })
                .collect(),
        );
        let c = e.to_fp(p).mul(&FpPoly::new(vec![lc_inv], p));
        let (qt, dg) = t.mul(&c).divrem(g);
        let dh = s.mul(&c).add(&qt.mul(h));
        let add = |base: &ZPoly, delta: &FpPoly| {
            let n = base.0.len().max(delta.c.len());
            ZPoly::new(
                (0..n)
                    .map(|i| {
                        base.0.get(i).cloned().unwrap_or_default()
                            + &m * BigInt::from(*delta.c.get(i).unwrap_or(&0))
                    })
                    .collect(),
            )
        };
        gg = add(&gg, &dg);
        hh = add(&hh, &dh);
        m *= &pb;
    }
    (gg.reduce_mod(&m), hh.reduce_mod(&m))
}

fn hensel_all(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        let inv = modinv(&f.lc(), &modulus);
        return vec![ZPoly::new(f.0.iter().map(|c| c * &inv).collect()).reduce_mod(&modulus)];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[FpPoly]| fs.iter().fold(FpPoly::one(p), |acc, x| acc.mul(x));
    let (g, h) = (prod(&factors[..mid]), prod(&factors[mid..]));
    let (gg, hh) = hensel_two(f, &g, &h, p, k);
    let mut out = hensel_all(&gg, &factors[..mid], p, k);
    out.extend(hensel_all(&hh, &factors[mid..], p, k));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 {
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
        if k == 0 {
            return out;
        }
    }
}

/// Irreducible factors of a squarefree primitive polynomial of degree ≥ 1.
fn zassenhaus(f: &ZPoly, rng: &mut ChaCha8Rng) -> Vec<ZPoly> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.lc();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut good = 0;
    for p in (3u64..5000).filter(|&p| is_prime(p)) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = f.to_fp(p);
        if !fp.gcd(&fp.derivative()).is_one() {
            continue;
        }
        let fs = factor_mod_p(&fp, rng);
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        good += 1;
        if good >= 6 || best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (p, modular) = best.expect("no suitable prime below 5000");
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Mignotte-type bound on coefficients of any factor, times the leading coefficient.
    let norm2: BigInt = f.0.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * lc.abs();
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    let mut lifted = hensel_all(f, &modular, p, k);
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), s) {
            let mut g = ZPoly(vec![rest.lc()]);
            for &i in &subset {
                g = g.mul(&lifted[i]).reduce_mod(&pk);
            }
            let g = g.symmetric_mod(&pk).primitive();
            if let Some(qt) = rest.div_exact(&g) {
                hit = Some((subset, g, qt));
                break;
            }
        }
        match hit {
            Some((subset, g, qt)) => {
                found.push(g);
                rest = qt.primitive();
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => s += 1,
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        found.push(rest);
    }
    found
}

/// Distinct irreducible factors over ℚ of a nonzero polynomial, as primitive
/// integer polynomials with positive leading coefficient, sorted.
pub fn factor(f: &QPoly) -> Vec<ZPoly> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    if f.degree() == Some(0) {
        return Vec::new();
    }
    let g = f.gcd(&f.derivative());
    let sqf = f.divrem(&g).0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut out = zassenhaus(&sqf.to_primitive_z(), &mut rng);
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.cmp(b)));
    out
}
