//! Dense square matrices over a single cyclotomic field.

use std::fmt;

use crate::cyclotomic::Cyclotomic;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    order: u64,
    entries: Vec<Cyclotomic>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{} over ℚ(ζ_{}))", self.dim, self.dim, self.order)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    /// Builds a matrix from `f(row, col)`; entries are promoted to `ℚ(ζ_order)`.
    pub fn from_fn(dim: usize, order: u64, mut f: impl FnMut(usize, usize) -> Cyclotomic) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let z = f(r, c);
                entries.push(if z.order() == order { z } else { z.promote(order) });
            }
        }
        Self { dim, order, entries }
    }

    pub fn zero(dim: usize, order: u64) -> Self {
        Self::from_fn(dim, order, |_, _| Cyclotomic::zero(order))
    }

    pub fn identity(dim: usize, order: u64) -> Self {
        Self::from_fn(dim, order, |r, c| {
            if r == c {
                Cyclotomic::one(order)
            } else {
                Cyclotomic::zero(order)
            }
        })
    }

    pub fn diagonal(order: u64, diag: &[Cyclotomic]) -> Self {
        Self::from_fn(diag.len(), order, |r, c| {
            if r == c {
                diag[r].clone()
            } else {
                Cyclotomic::zero(order)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn get(&self, r: usize, c: usize) -> &Cyclotomic {
        &self.entries[r * self.dim + c]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zero(n, self.order);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * n + c;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            order: self.order,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Cyclotomic) -> Self {
        let s = s.promote(self.order);
        Self::from_fn(self.dim, self.order, |r, c| self.get(r, c) * &s)
    }

    /// Non-negative powers by repeated squaring.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.dim, self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> Cyclotomic {
        (0..self.dim).fold(Cyclotomic::zero(self.order), |acc, i| &acc + self.get(i, i))
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim, self.order, |r, c| self.get(c, r).conj())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim, self.order)
    }

    /// Exact byte serialization, equal exactly for equal matrices.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for z in &self.entries {
            z.canonical_key(&mut out);
        }
        out
    }
}
