//! The Weil representation `ρ_D` of `Mp₂(ℤ)` on `ℂ[D]`.
//!
//! Matrices are built only for small modules. Traces of powers of `S`, `R`
//! and `Z` are computed from Gauss sums and work at any size.

mod invariants;
mod matrix;

use std::collections::HashMap;

use num_traits::Zero;

use crate::arith::{self, Rational};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::quadmod::FiniteQuadraticModule;

pub use invariants::{
    act_on_first, epsilon_on_first, invariants_dim, invariants_dim_with, negation, InvariantOptions,
};
pub use matrix::Matrix;

pub const DEFAULT_MATRIX_BOUND: u64 = 200;
pub const DEFAULT_IMAGE_MODULE_BOUND: u64 = 30;
pub const DEFAULT_IMAGE_ORDER_CAP: usize = 1_000_000;

/// `ζ_8^{k}`.
fn zeta8(k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(8, k)
}

/// `i^{k}`.
fn i_pow(k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(4, k)
}

/// `Tr ρ(Z^j)`, using `ρ(Z) = i^sig·Z₀` with `Z₀: δ_x ↦ δ_{−x}`.
pub fn trace_z_power(module: &FiniteQuadraticModule, j: i64) -> Result<Cyclotomic> {
    let sig = module.signature()? as i64;
    let count = if j.rem_euclid(2) == 0 {
        module.size()
    } else {
        module.two_torsion().len() as u64
    };
    Ok(i_pow(sig * j).scalar_mul(&arith::rat_int(count as i64)))
}

/// `Tr ρ(Z) = i^sig·|D[2]|`.
pub fn trace_z(module: &FiniteQuadraticModule) -> Result<Cyclotomic> {
    trace_z_power(module, 1)
}

/// `Tr ρ(S^j)`. Writing `j = 2m + s`, `ρ(S)^j = i^{sig·m}·Z₀^m·ρ(S)^s`, and
/// `Tr(Z₀^m ρ(S)) = ζ_8^sig·Ω_D((−1)^m·2)`.
pub fn trace_s_power(module: &FiniteQuadraticModule, j: i64) -> Result<Cyclotomic> {
    let sig = module.signature()? as i64;
    let j = j.rem_euclid(8);
    let (m, s) = (j / 2, j % 2);
    if s == 0 {
        return trace_z_power(module, m);
    }
    let a = if m % 2 == 0 { 2 } else { -2 };
    Ok(&i_pow(sig * m) * &(&zeta8(sig) * &module.gauss_sum(a)))
}

/// `Tr ρ(R^j)` with `R = ST`. Writing `j = 3m + s`, `ρ(R)^j = i^{sig·m}·Z₀^m·ρ(R)^s`;
/// the six traces `Tr(Z₀^m ρ(R)^s)` are `|D|`, `|D[2]|`, `i^sig`,
/// `ζ_8^sig·Ω(−3)`, `ζ_8^sig·Ω(3)` and `ζ_8^sig·Ω(−1)`.
pub fn trace_r_power(module: &FiniteQuadraticModule, j: i64) -> Result<Cyclotomic> {
    let sig = module.signature()? as i64;
    let j = j.rem_euclid(12);
    let (m, s) = (j / 3, j % 3);
    let odd = m % 2 == 1;
    let base = match (s, odd) {
        (0, false) => Cyclotomic::from_integer(1, module.size() as i64),
        (0, true) => Cyclotomic::from_integer(1, module.two_torsion().len() as i64),
        (1, false) => i_pow(sig),
        (1, true) => &zeta8(sig) * &module.gauss_sum(-3),
        (2, false) => &zeta8(sig) * &module.gauss_sum(3),
        _ => &zeta8(sig) * &module.gauss_sum(-1),
    };
    Ok(&i_pow(sig * m) * &base)
}

/// Standard (`[0,1)`) or cuspidal (`(0,1]`) exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExponentChoice {
    Standard,
    Cuspidal,
}

/// A diagonal choice of exponents `L` with `e(L_xx) = e(−q(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    diagonal: Vec<Rational>,
    choice: ExponentChoice,
}

/// `N·L_xx` from `N·q(x)`.
fn exponent_numerator(qn: u64, level: u64, choice: ExponentChoice) -> u64 {
    let v = (level - qn % level) % level;
    match choice {
        ExponentChoice::Cuspidal if v == 0 => level,
        _ => v,
    }
}

impl ExponentMatrix {
    pub fn new(module: &FiniteQuadraticModule, choice: ExponentChoice) -> Self {
        let n = module.level() as i64;
        let diagonal = module
            .q_numerators()
            .into_iter()
            .map(|v| arith::rat(exponent_numerator(v, n as u64, choice) as i64, n))
            .collect();
        Self { diagonal, choice }
    }

    /// An arbitrary diagonal; used to exercise the commuting check.
    pub fn from_diagonal(diagonal: Vec<Rational>, choice: ExponentChoice) -> Self {
        Self { diagonal, choice }
    }

    pub fn diagonal(&self) -> &[Rational] {
        &self.diagonal
    }

    pub fn choice(&self) -> ExponentChoice {
        self.choice
    }

    pub fn trace(&self) -> Rational {
        self.diagonal.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    /// `Tr(L|_{ℂ[D[2]]})`.
    pub fn trace_on_two_torsion(&self, module: &FiniteQuadraticModule) -> Rational {
        module
            .two_torsion()
            .iter()
            .fold(Rational::zero(), |acc, &x| acc + &self.diagonal[x as usize])
    }
}

pub fn exponents(module: &FiniteQuadraticModule, choice: ExponentChoice) -> ExponentMatrix {
    ExponentMatrix::new(module, choice)
}

/// `Tr(L)` by streaming integer summation, without materializing `L`.
pub fn trace_exponents(module: &FiniteQuadraticModule, choice: ExponentChoice) -> Rational {
    let n = module.level();
    let mut acc: u128 = 0;
    module.for_each_q_numerator(|v| acc += exponent_numerator(v, n, choice) as u128);
    Rational::new(acc.into(), n.into())
}

/// `Tr(L|_{ℂ[D[2]]})` without materializing `L`.
pub fn trace_exponents_two_torsion(module: &FiniteQuadraticModule, choice: ExponentChoice) -> Rational {
    let n = module.level();
    let s: u64 = module
        .two_torsion()
        .iter()
        .map(|&x| exponent_numerator(module.q_numerator(x), n, choice))
        .sum();
    arith::rat(s as i64, n as i64)
}

/// `Tr(L·P_j)` where `P_j = ¼Σ_m i^{−jm}ρ(Z)^m` projects onto the
/// `i^j`-eigenspace of `ρ(Z)`. Needs `L_x = L_{−x}`, i.e. `[L, ρ(Z)] = 0`.
pub fn tr_l_eigenspace(module: &FiniteQuadraticModule, l: &ExponentMatrix, j: i64) -> Result<Rational> {
    let d = l.diagonal();
    if d.len() as u64 != module.size() {
        return Err(Error::InvalidParameter("exponent matrix has the wrong size".into()));
    }
    if (0..module.size()).any(|x| d[x as usize] != d[module.neg(x) as usize]) {
        return Err(Error::InvalidParameter("L does not commute with ρ(Z)".into()));
    }
    eigenspace_trace(module.signature()? as i64, &l.trace(), &l.trace_on_two_torsion(module), j)
}

/// `¼Σ_m i^{(sig−j)m}·Tr(L Z₀^m)` with `Tr(L Z₀^m)` alternating between
/// `Tr L` and `Tr(L|_{ℂ[D[2]]})`.
pub(crate) fn eigenspace_trace(sig: i64, tr_l: &Rational, tr_l2: &Rational, j: i64) -> Result<Rational> {
    let mut acc = Cyclotomic::zero(4);
    for m in 0..4 {
        let t = if m % 2 == 0 { tr_l } else { tr_l2 };
        acc = &acc + &i_pow((sig - j) * m).scalar_mul(t);
    }
    acc.scalar_mul(&arith::rat(1, 4)).as_rational()
}

/// One of the generators `S`, `T` or their inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    S,
    T,
    SInv,
    TInv,
}

/// Parses a word such as `"STS^-1T⁻¹"`; whitespace is ignored.
pub fn parse_word(word: &str) -> Result<Vec<Generator>> {
    let chars: Vec<(usize, char)> = word.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let base = match c {
            'S' => true,
            'T' => false,
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected {c:?}; expected S or T"),
                })
            }
        };
        i += 1;
        let rest: String = chars[i..].iter().take(3).map(|&(_, c)| c).collect();
        let inverse = if rest.starts_with("^-1") {
            i += 3;
            true
        } else if rest.starts_with("⁻¹") {
            i += 2;
            true
        } else {
            false
        };
        out.push(match (base, inverse) {
            (true, false) => Generator::S,
            (true, true) => Generator::SInv,
            (false, false) => Generator::T,
            (false, true) => Generator::TInv,
        });
    }
    Ok(out)
}

/// `ρ_D` as exact matrices in the module's working cyclotomic field.
#[derive(Debug, Clone)]
pub struct WeilRep {
    module: FiniteQuadraticModule,
    sig: u8,
    order: u64,
    t_diag: Vec<Cyclotomic>,
    s: Matrix,
}

impl WeilRep {
    pub fn build(module: &FiniteQuadraticModule) -> Result<Self> {
        Self::build_with_bound(module, DEFAULT_MATRIX_BOUND)
    }

    pub fn build_with_bound(module: &FiniteQuadraticModule, bound: u64) -> Result<Self> {
        let n = module.size();
        if n > bound {
            return Err(Error::Resource(format!(
                "Weil representation of {module}: |D| = {n} exceeds the matrix bound {bound}; use the trace formulas"
            )));
        }
        let sig = module.signature()?;
        let order = module.working_order();
        let level = module.level();
        let step = (order / level) as i64;
        let qs = module.q_numerators();
        let t_diag: Vec<Cyclotomic> = qs
            .iter()
            .map(|&v| Cyclotomic::root_of_unity(order, -(v as i64) * step))
            .collect();
        let c = (&zeta8(sig as i64).promote(order) * &module.sqrt_size().promote(order))
            .scalar_mul(&arith::rat(1, n as i64));
        // ρ(S)δ_x = c·Σ_y e(b(x,y))δ_y, so the (y, x) entry is c·e(b(x,y))
        let s = Matrix::from_fn(n as usize, order, |y, x| {
            c.mul_root(module.b_numerator(x as u64, y as u64) as i64 * step)
        });
        Ok(Self {
            module: module.clone(),
            sig,
            order,
            t_diag,
            s,
        })
    }

    pub fn module(&self) -> &FiniteQuadraticModule {
        &self.module
    }

    pub fn signature(&self) -> u8 {
        self.sig
    }

    /// Order of the cyclotomic field holding every entry.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.t_diag.len()
    }

    pub fn rho_t(&self) -> Matrix {
        Matrix::diagonal(self.order, &self.t_diag)
    }

    pub fn rho_s(&self) -> &Matrix {
        &self.s
    }

    pub fn rho_z(&self) -> Matrix {
        self.s.mul(&self.s)
    }

    /// `Z₀: δ_x ↦ δ_{−x}`.
    pub fn z0(&self) -> Matrix {
        let m = &self.module;
        Matrix::from_fn(self.dim(), self.order, |r, c| {
            let v = if m.neg(c as u64) == r as u64 { 1 } else { 0 };
            Cyclotomic::from_integer(self.order, v)
        })
    }

    /// `ρ(T)^{±1}` applied on the right: scales column `x` by `e(∓q(x))`.
    fn times_t(&self, m: &Matrix, inverse: bool) -> Matrix {
        Matrix::from_fn(self.dim(), self.order, |r, c| {
            let t = if inverse { self.t_diag[c].conj() } else { self.t_diag[c].clone() };
            m.get(r, c) * &t
        })
    }

    pub fn generator(&self, g: Generator) -> Matrix {
        match g {
            Generator::S => self.s.clone(),
            Generator::SInv => self.s.conj_transpose(),
            Generator::T => self.rho_t(),
            Generator::TInv => self.rho_t().conj_transpose(),
        }
    }

    /// The exact product `ρ(g₁)ρ(g₂)⋯` for a word `g₁g₂⋯`.
    pub fn element(&self, word: &str) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.dim(), self.order);
        let s_inv = self.s.conj_transpose();
        for g in parse_word(word)? {
            acc = match g {
                Generator::S => acc.mul(&self.s),
                Generator::SInv => acc.mul(&s_inv),
                Generator::T => self.times_t(&acc, false),
                Generator::TInv => self.times_t(&acc, true),
            };
        }
        Ok(acc)
    }

    /// `Tr(L·P_j)` using the literal matrix `P_j = ¼Σ_m i^{−jm}ρ(Z)^m`.
    pub fn tr_l_eigenspace_matrix(&self, l: &ExponentMatrix, j: i64) -> Result<Rational> {
        let z = self.rho_z();
        let mut p = Matrix::zero(self.dim(), self.order);
        let mut zm = Matrix::identity(self.dim(), self.order);
        for m in 0..4 {
            p = p.add(&zm.scale(&i_pow(-j * m)));
            zm = zm.mul(&z);
        }
        let p = p.scale(&Cyclotomic::from_rational(1, &arith::rat(1, 4)));
        let mut acc = Cyclotomic::zero(self.order);
        for (x, lx) in l.diagonal().iter().enumerate() {
            acc = &acc + &p.get(x, x).scalar_mul(lx);
        }
        acc.as_rational()
    }
}

/// The finite group `ρ_D(Mp₂(ℤ))`, listed explicitly.
#[derive(Debug, Clone)]
pub struct GroupImage {
    elements: Vec<Matrix>,
    index: HashMap<Vec<u8>, usize>,
}

impl GroupImage {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index
            .get(&m.canonical_key())
            .is_some_and(|&i| self.elements[i] == *m)
    }
}

/// Breadth-first closure of `{ρ(S), ρ(T)}` under right multiplication.
pub fn image_group(rep: &WeilRep, max_order: usize) -> Result<GroupImage> {
    let module_bound = DEFAULT_IMAGE_MODULE_BOUND;
    if rep.module().size() > module_bound {
        return Err(Error::Resource(format!(
            "image group of {}: |D| exceeds {module_bound}",
            rep.module()
        )));
    }
    let id = Matrix::identity(rep.dim(), rep.order());
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id.canonical_key(), 0);
    let mut head = 0;
    while head < elements.len() {
        let g = elements[head].clone();
        head += 1;
        for next in [g.mul(rep.rho_s()), rep.times_t(&g, false)] {
            let key = next.canonical_key();
            if let Some(&i) = index.get(&key) {
                assert!(elements[i] == next, "canonical key collision");
                continue;
            }
            if elements.len() >= max_order {
                return Err(Error::Resource(format!(
                    "image group of {} exceeds {max_order} elements",
                    rep.module()
                )));
            }
            index.insert(key, elements.len());
            elements.push(next);
        }
    }
    Ok(GroupImage { elements, index })
}

/// `dim Inv(ρ)^H = Tr(P_G·Q)` with `P_G` the average over the image group and
/// `Q` the average over the permutation group generated by `perms`.
pub fn invariants_dim_by_averaging(rep: &WeilRep, image: &GroupImage, perms: &[Vec<u64>]) -> Result<u64> {
    let n = rep.dim();
    let mut sum = Matrix::zero(n, rep.order());
    for g in image.elements() {
        sum = sum.add(g);
    }
    let group = permutation_closure(n, perms);
    let mut acc = Cyclotomic::zero(rep.order());
    for h in &group {
        // Tr(M·π_h) = Σ_x M[x][h(x)]
        for (x, &hx) in h.iter().enumerate() {
            acc = &acc + sum.get(x, hx as usize);
        }
    }
    let total = arith::rat(1, (image.order() * group.len()) as i64);
    let dim = acc.scalar_mul(&total).as_rational()?;
    if !dim.is_integer() || dim < Rational::zero() {
        return Err(Error::Mismatch(format!("averaged trace {dim} is not a dimension")));
    }
    Ok(dim.to_integer().try_into().expect("small dimension"))
}

/// All elements of the permutation group generated by `perms`.
fn permutation_closure(n: usize, perms: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let id: Vec<u64> = (0..n as u64).collect();
    let mut seen = std::collections::HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id];
    let mut head = 0;
    while head < out.len() {
        let g = out[head].clone();
        head += 1;
        for p in perms {
            let h: Vec<u64> = g.iter().map(|&x| p[x as usize]).collect();
            if seen.insert(h.clone()) {
                out.push(h);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
