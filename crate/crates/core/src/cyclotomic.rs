//! Exact arithmetic in cyclotomic fields `ℚ(ζ_n)`.
//!
//! An element of `ℚ(ζ_n)` is stored as an integer coefficient vector over the
//! power basis `1, ζ_n, …, ζ_n^{φ(n)−1}` together with a positive common
//! denominator. Coefficients are always reduced modulo the `n`-th cyclotomic
//! polynomial and the fraction is kept in lowest terms, so two elements of the
//! same field are equal iff their stored data are equal.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::arith::{self, Rational};
use crate::error::{Error, Result};

/// The field `ℚ(ζ_n)`, with its cyclotomic polynomial in sparse form.
#[derive(Debug)]
pub struct Field {
    order: u64,
    degree: usize,
    /// Nonzero coefficients `(j, c_j)` of `Φ_n` below the leading term.
    reducer: Vec<(usize, i64)>,
}

impl Field {
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `φ(n)`.
    pub fn degree(&self) -> usize {
        self.degree
    }
}

static FIELDS: Lazy<RwLock<HashMap<u64, Arc<Field>>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// The (cached) field `ℚ(ζ_n)`.
pub fn field(n: u64) -> Arc<Field> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(f) = FIELDS.read().get(&n) {
        return f.clone();
    }
    let poly = cyclotomic_polynomial(n);
    let degree = poly.len() - 1;
    let reducer = poly[..degree]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| (j, c))
        .collect();
    let f = Arc::new(Field {
        order: n,
        degree,
        reducer,
    });
    FIELDS.write().entry(n).or_insert(f).clone()
}

/// Coefficients of `Φ_n`, lowest degree first, from `Φ_n = Π_{d|n} (x^d − 1)^{μ(n/d)}`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let divs = arith::divisors(n);
    let mut poly: Vec<i128> = vec![1];
    for &d in &divs {
        if arith::moebius(n / d) == 1 {
            let d = d as usize;
            let mut out = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                out[i + d] += c;
                out[i] -= c;
            }
            poly = out;
        }
    }
    for &d in &divs {
        if arith::moebius(n / d) == -1 {
            let d = d as usize;
            // exact division by x^d − 1
            let deg = poly.len() - 1;
            let mut q = vec![0i128; deg - d + 1];
            for i in (0..=deg - d).rev() {
                q[i] = poly[i + d] + if i + d <= deg - d { q[i + d] } else { 0 };
            }
            poly = q;
        }
    }
    // for n = 1 the product is x − 1 with the sign already right; otherwise
    // the μ-product yields ±Φ_n, so normalize to a monic polynomial
    let lead = *poly.last().unwrap();
    poly.into_iter()
        .map(|c| i64::try_from(c * lead.signum()).expect("cyclotomic coefficient overflow"))
        .collect()
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    arith::factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// An exact element of `ℚ(ζ_n)`.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({}; {})", self.order(), self)
    }
}

/// Reduces a dense vector `Σ a_i ζ_n^i` (any length) into canonical coordinates.
fn reduce(field: &Field, mut a: Vec<BigInt>) -> Vec<BigInt> {
    let n = field.order as usize;
    if a.len() > n {
        let (lo, hi) = a.split_at_mut(n);
        for (i, c) in hi.iter_mut().enumerate() {
            if !c.is_zero() {
                lo[i % n] += std::mem::take(c);
            }
        }
        a.truncate(n);
    }
    let deg = field.degree;
    for i in (deg..a.len()).rev() {
        if a[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut a[i]);
        for &(j, pj) in &field.reducer {
            a[i - deg + j] -= &c * pj;
        }
    }
    a.resize(deg, BigInt::zero());
    a
}

impl Cyclotomic {
    fn from_parts(field: Arc<Field>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut z = Self { field, num, den };
        z.normalize();
        z
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn zero(n: u64) -> Self {
        let field = field(n);
        let num = vec![BigInt::zero(); field.degree];
        Self {
            field,
            num,
            den: BigInt::one(),
        }
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational(n, &Rational::one())
    }

    pub fn from_rational(n: u64, q: &Rational) -> Self {
        let mut z = Self::zero(n);
        z.num[0] = q.numer().clone();
        z.den = q.denom().clone();
        z
    }

    pub fn from_integer(n: u64, k: i64) -> Self {
        Self::from_rational(n, &arith::rat_int(k))
    }

    /// `Σ_k c_k ζ_n^k` from integer weights indexed by exponent (any length).
    pub fn from_exponent_weights(n: u64, weights: &[i64]) -> Self {
        let field = field(n);
        let a = weights.iter().map(|&w| BigInt::from(w)).collect();
        let num = reduce(&field, a);
        Self::from_parts(field, num, BigInt::one())
    }

    /// `ζ_n^k` in canonical form.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        let field = field(n);
        let e = k.rem_euclid(n as i64) as usize;
        let mut a = vec![BigInt::zero(); e + 1];
        a[e] = BigInt::one();
        let num = reduce(&field, a);
        Self {
            field,
            num,
            den: BigInt::one(),
        }
    }

    /// `e(a/b) = exp(2πi·a/b)`.
    pub fn e(a: i64, b: u64) -> Self {
        Self::root_of_unity(b, a)
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Canonical coordinates as rationals.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// Exact downcast to `ℚ`.
    pub fn as_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            Err(Error::NotRational(format!("{self}")))
        }
    }

    /// The same element in `ℚ(ζ_m)` for a multiple `m` of the order.
    pub fn promote(&self, m: u64) -> Self {
        let n = self.order();
        assert!(m % n == 0, "cannot promote order {n} to {m}");
        if m == n {
            return self.clone();
        }
        let step = (m / n) as usize;
        let target = field(m);
        let mut a = vec![BigInt::zero(); (self.field.degree.max(1) - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                a[i * step] = c.clone();
            }
        }
        let num = reduce(&target, a);
        Self {
            field: target,
            num,
            den: self.den.clone(),
        }
    }

    /// The same element in `ℚ(ζ_d)` for a divisor `d` of the order, if it lies there.
    pub fn demote(&self, d: u64) -> Option<Self> {
        let n = self.order();
        assert!(n % d == 0, "cannot demote order {n} to {d}");
        if d == n {
            return Some(self.clone());
        }
        if self.is_rational() {
            return Some(Self::from_rational(d, &self.as_rational().unwrap()));
        }
        // Solve Σ_j c_j ζ_d^j = self over ℚ; columns are the promoted basis of ℚ(ζ_d).
        let small = field(d);
        let cols: Vec<Vec<Rational>> = (0..small.degree)
            .map(|j| Self::root_of_unity(d, j as i64).promote(n).coeffs())
            .collect();
        let rhs = self.coeffs();
        let sol = solve_rational(&cols, &rhs)?;
        let mut z = Self::zero(d);
        let den = sol
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        for (j, q) in sol.iter().enumerate() {
            z.num[j] = q.numer() * (&den / q.denom());
        }
        z.den = den;
        z.normalize();
        Some(z)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.order() == b.order() {
            return (a.clone(), b.clone());
        }
        let m = a.order().lcm(&b.order());
        (a.promote(m), b.promote(m))
    }

    fn add_same(&self, other: &Self, sign: i8) -> Self {
        debug_assert_eq!(self.order(), other.order());
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| {
                let l = x * &fa;
                let r = y * &fb;
                if sign >= 0 {
                    l + r
                } else {
                    l - r
                }
            })
            .collect();
        Self::from_parts(self.field.clone(), num, den)
    }

    fn mul_same(&self, other: &Self) -> Self {
        debug_assert_eq!(self.order(), other.order());
        let deg = self.field.degree;
        let mut a = vec![BigInt::zero(); 2 * deg - 1];
        let rhs: Vec<(usize, &BigInt)> = other
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &(j, y) in &rhs {
                a[i + j] += x * y;
            }
        }
        let num = reduce(&self.field, a);
        Self::from_parts(self.field.clone(), num, &self.den * &other.den)
    }

    pub fn scalar_mul(&self, q: &Rational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::from_parts(self.field.clone(), num, &self.den * q.denom())
    }

    /// Multiplication by `ζ_n^k` (where `n` is the element's order).
    pub fn mul_root(&self, k: i64) -> Self {
        let n = self.order() as i64;
        let e = k.rem_euclid(n) as usize;
        if e == 0 {
            return self.clone();
        }
        let mut a = vec![BigInt::zero(); self.field.degree + e];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                a[i + e] = c.clone();
            }
        }
        let num = reduce(&self.field, a);
        Self {
            field: self.field.clone(),
            num,
            den: self.den.clone(),
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{−1}`.
    pub fn conj(&self) -> Self {
        let n = self.order() as usize;
        let mut a = vec![BigInt::zero(); n];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                a[(n - i) % n] = c.clone();
            }
        }
        let num = reduce(&self.field, a);
        Self {
            field: self.field.clone(),
            num,
            den: self.den.clone(),
        }
    }

    /// `(z + z̄)/2`.
    pub fn real_part(&self) -> Self {
        (self + &self.conj()).scalar_mul(&arith::rat(1, 2))
    }

    /// `(z − z̄)/2i`.
    pub fn imag_part(&self) -> Self {
        let d = self - &self.conj();
        let n = self.order().lcm(&4);
        // 1/(2i) = −i/2
        (&d.promote(n) * &Self::root_of_unity(4, -1)).scalar_mul(&arith::rat(1, 2))
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            let q = self.as_rational().unwrap();
            return Some(Self::from_rational(self.order(), &q.recip()));
        }
        let n = self.order();
        let deg = self.field.degree;
        // columns: self·ζ^j
        let integral = Self {
            field: self.field.clone(),
            num: self.num.clone(),
            den: BigInt::one(),
        };
        let cols: Vec<Vec<Rational>> = (0..deg)
            .map(|j| integral.mul_root(j as i64).coeffs())
            .collect();
        let mut rhs = vec![Rational::zero(); deg];
        rhs[0] = Rational::one();
        let sol = solve_rational(&cols, &rhs)?;
        let den = sol.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = sol.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        let inv = Self::from_parts(field(n), num, den);
        Some(inv.scalar_mul(&Rational::from_integer(self.den.clone())))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let inv = other
            .inverse()
            .ok_or_else(|| Error::InvalidParameter("division by zero".into()))?;
        Ok(self * &inv)
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 {
            self.inverse().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Floating-point value, for display only.
    pub fn approx(&self) -> Complex64 {
        let n = self.order() as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut z = Complex64::new(0.0, 0.0);
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = c.to_f64().unwrap_or(f64::NAN) / den;
            let t = std::f64::consts::TAU * i as f64 / n;
            z += Complex64::new(w * t.cos(), w * t.sin());
        }
        z
    }

    /// If `self = ζ_n^k`, the reduced fraction `k/n` as `(k, n)`.
    pub fn root_of_unity_exponent(&self) -> Option<(u64, u64)> {
        if !self.den.is_one() {
            return None;
        }
        let n = self.order();
        // candidate exponent from the floating value, confirmed exactly
        let z = self.approx();
        if (z.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        let t = z.arg() / std::f64::consts::TAU * n as f64;
        let k = (t.round() as i64).rem_euclid(n as i64);
        if *self == Self::root_of_unity(n, k) {
            let g = (k as u64).gcd(&n);
            Some((k as u64 / g, n / g))
        } else {
            None
        }
    }

    /// Stable byte serialization of the canonical form, for hashing.
    pub fn canonical_key(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.order().to_le_bytes());
        push_bigint(out, &self.den);
        for c in &self.num {
            push_bigint(out, c);
        }
    }
}

fn push_bigint(out: &mut Vec<u8>, x: &BigInt) {
    let bytes = x.to_signed_bytes_le();
    out.push(bytes.len() as u8);
    out.extend_from_slice(&bytes);
}

/// Solves `Σ_j x_j·cols[j] = rhs` over ℚ, `None` if inconsistent.
fn solve_rational(cols: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let nrows = rhs.len();
    let ncols = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..nrows)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r][c..] {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][ncols].clone();
    }
    Some(x)
}

/// The positive square root of `m` inside `ℚ(ζ_{4m})`, built from the
/// quadratic Gauss sum of the squarefree part of `m`.
pub fn sqrt_integer(m: u64) -> Cyclotomic {
    assert!(m >= 1, "sqrt_integer needs m >= 1");
    let mut square = 1u64;
    let mut free = 1u64;
    for (p, e) in arith::factorize(m) {
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    let s = arith::rat_int(square as i64);
    if free == 1 {
        return Cyclotomic::from_rational(1, &s);
    }
    let odd = if free % 2 == 0 { free / 2 } else { free };
    // Σ_a (a/f) ζ_f^a = √f for f ≡ 1 (4), i√f for f ≡ 3 (4)
    let mut root = if odd == 1 {
        Cyclotomic::one(1)
    } else {
        let weights: Vec<i64> = (0..odd as i64)
            .map(|a| arith::kronecker(a, odd as i64) as i64)
            .collect();
        let g = Cyclotomic::from_exponent_weights(odd, &weights);
        if odd % 4 == 1 {
            g
        } else {
            &g * &Cyclotomic::root_of_unity(4, -1)
        }
    };
    if free % 2 == 0 {
        let sqrt2 = &Cyclotomic::root_of_unity(8, 1) + &Cyclotomic::root_of_unity(8, -1);
        root = &root * &sqrt2;
    }
    root.scalar_mul(&s)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order() == other.order() {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = Self::common(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyclotomic {}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $trait<&'b Cyclotomic> for &'a Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &'b Cyclotomic) -> Cyclotomic {
                if self.order() == rhs.order() {
                    $body(self, rhs)
                } else {
                    let (a, b) = Cyclotomic::common(self, rhs);
                    $body(&a, &b)
                }
            }
        }
        impl $trait<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Cyclotomic, b: &Cyclotomic| a.add_same(b, 1));
forward_binop!(Sub, sub, |a: &Cyclotomic, b: &Cyclotomic| a.add_same(b, -1));
forward_binop!(Mul, mul, |a: &Cyclotomic, b: &Cyclotomic| a.mul_same(b));

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.as_rational().unwrap());
        }
        for sign in [1i64, -1] {
            let z = if sign == 1 { self.clone() } else { -self };
            if let Some((k, n)) = z.root_of_unity_exponent() {
                let s = if sign == 1 { "" } else { "-" };
                return match (k, n) {
                    (1, 4) => write!(f, "{s}i"),
                    (3, 4) => write!(f, "{}i", if sign == 1 { "-" } else { "" }),
                    (1, _) => write!(f, "{s}ζ{n}"),
                    _ => write!(f, "{s}ζ{n}^{k}"),
                };
            }
        }
        let n = self.order();
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = Rational::new(c.clone(), self.den.clone());
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "ζ{n}")?;
                    } else {
                        write!(f, "ζ{n}^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient −2
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() - 1, 48);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn totients() {
        for n in 1..300u64 {
            assert_eq!(field(n).degree() as u64, totient(n));
        }
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(Cyclotomic::root_of_unity(4, 2), Cyclotomic::from_integer(4, -1));
        assert!(Cyclotomic::root_of_unity(8, 1).pow(8).is_one());
        let s = (0..5).fold(Cyclotomic::zero(5), |acc, j| {
            &acc + &Cyclotomic::root_of_unity(5, j)
        });
        assert!(s.is_zero());
    }

    #[test]
    fn field_op_examples() {
        let z8 = Cyclotomic::root_of_unity(8, 1);
        let re = z8.real_part();
        assert_eq!(
            re,
            (&z8 + &Cyclotomic::root_of_unity(8, 7)).scalar_mul(&rat(1, 2))
        );
        assert!((re.approx().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
        assert_eq!(
            Cyclotomic::root_of_unity(3, 1).conj(),
            Cyclotomic::root_of_unity(3, 2)
        );
        let one_minus = &Cyclotomic::one(3) - &Cyclotomic::root_of_unity(3, 1);
        let inv = one_minus.inverse().unwrap();
        assert_eq!(inv.real_part().as_rational().unwrap(), rat(1, 2));
        assert!((&inv * &one_minus).is_one());
        assert!(matches!(z8.as_rational(), Err(Error::NotRational(_))));
    }

    #[test]
    fn sqrt_examples() {
        assert!(sqrt_integer(1).is_one());
        assert_eq!(sqrt_integer(4).as_rational().unwrap(), rat_int(2));
        assert_eq!(
            sqrt_integer(2),
            &Cyclotomic::root_of_unity(8, 1) + &Cyclotomic::root_of_unity(8, -1)
        );
    }

    #[test]
    fn sqrt_squares_back_for_small_m() {
        for m in 1..=100u64 {
            let r = sqrt_integer(m);
            assert_eq!((&r * &r).as_rational().unwrap(), rat_int(m as i64), "m = {m}");
            assert!(r.approx().re > 0.0);
            assert_eq!((4 * m) % r.order(), 0);
        }
    }

    #[test]
    fn root_multiplication_up_to_240() {
        for n in [1u64, 2, 3, 5, 8, 12, 24, 30, 60, 105, 120, 210, 240] {
            for a in [-7i64, 0, 1, 5, 13] {
                for b in [-3i64, 2, 11] {
                    let lhs = &Cyclotomic::root_of_unity(n, a) * &Cyclotomic::root_of_unity(n, b);
                    assert_eq!(lhs, Cyclotomic::root_of_unity(n, a + b), "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn mixed_order_equality() {
        // ζ_3 = ζ_6^2 = ζ_12^4
        assert_eq!(Cyclotomic::root_of_unity(3, 1), Cyclotomic::root_of_unity(6, 2));
        assert_eq!(Cyclotomic::root_of_unity(3, 1), Cyclotomic::root_of_unity(12, 4));
        let i = Cyclotomic::root_of_unity(4, 1);
        let z3 = Cyclotomic::root_of_unity(3, 1);
        assert_eq!((&i * &z3).order(), 12);
        assert_eq!(&i * &z3, Cyclotomic::root_of_unity(12, 7));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Cyclotomic::root_of_unity(4, 1).to_string(), "i");
        assert_eq!(Cyclotomic::root_of_unity(8, 1).promote(24).to_string(), "ζ8");
        assert_eq!(Cyclotomic::root_of_unity(8, 3).to_string(), "ζ8^3");
        assert_eq!(Cyclotomic::from_rational(5, &rat(-3, 4)).to_string(), "-3/4");
        assert_eq!(Cyclotomic::root_of_unity(4, 3).to_string(), "-i");
    }

    fn arb_element(n: u64) -> impl Strategy<Value = Cyclotomic> {
        let d = totient(n) as usize;
        (prop::collection::vec(-20i64..20, d), 1i64..12).prop_map(move |(c, den)| {
            Cyclotomic::from_exponent_weights(n, &c).scalar_mul(&rat(1, den))
        })
    }

    proptest! {
        #[test]
        fn conj_is_ring_involution(a in arb_element(24), b in arb_element(24)) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!(a.real_part(), a.conj().real_part());
        }

        #[test]
        fn promote_then_demote_is_identity(a in arb_element(12), k in 2u64..4) {
            let up = a.promote(12 * k);
            prop_assert_eq!(up.demote(12).unwrap(), a.clone());
            prop_assert_eq!(up, a);
        }

        #[test]
        fn inverse_is_inverse(a in arb_element(20)) {
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }

        #[test]
        fn real_part_of_rational_is_itself(p in -50i64..50, q in 1i64..50) {
            let z = Cyclotomic::from_rational(7, &rat(p, q));
            prop_assert_eq!(z.real_part(), z);
        }
    }

    #[test]
    fn demote_detects_non_members() {
        let z8 = Cyclotomic::root_of_unity(8, 1);
        assert!(z8.demote(4).is_none());
        assert_eq!(
            Cyclotomic::root_of_unity(8, 2).demote(4).unwrap(),
            Cyclotomic::root_of_unity(4, 1)
        );
    }
}
