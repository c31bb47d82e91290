//! Finite quadratic modules built from Jordan-type components.

mod orthogonal;
mod parse;

use std::fmt;

use num_integer::Integer;

use crate::arith::{self, Rational};
use crate::cyclotomic::{sqrt_integer, Cyclotomic};
use crate::error::{Error, Result};

pub use orthogonal::{Automorphism, OrthogonalGroup, DEFAULT_CYCLIC_BOUND, DEFAULT_GENERAL_BOUND};
pub use parse::parse_module;

/// One orthogonal summand.
///
/// The first four variants are the indecomposable Jordan types. `Cyclic` is
/// the shorthand `A_m = (ℤ/m, x²/2m)` for even `m`, kept intact so that its
/// elements are labelled `0..m` in the natural way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Component {
    /// `(ℤ/p^k, t·x²/p^k)`, `p` odd, `t` a unit mod `p^k` (stored reduced).
    AOdd { p: u64, k: u32, t: u64 },
    /// `(ℤ/2^k, t·x²/2^{k+1})`, `t` odd mod `2^{k+1}`.
    AEven { k: u32, t: u64 },
    /// `((ℤ/2^k)², ±(x² + xy + y²)/2^k)`.
    B { k: u32, negated: bool },
    /// `((ℤ/2^k)², ±xy/2^k)`.
    C { k: u32, negated: bool },
    /// `(ℤ/m, ±x²/2m)`, `m` even.
    Cyclic { m: u64, negated: bool },
}

impl Component {
    pub fn a_odd(p: u64, k: u32, t: i64) -> Result<Self> {
        if p == 2 || !arith::is_prime(p) || k == 0 {
            return Err(Error::InvalidParameter(format!("A({p}^{k}, t): need an odd prime power")));
        }
        let q = p.pow(k);
        let t = t.rem_euclid(q as i64) as u64;
        if t % p == 0 {
            return Err(Error::InvalidParameter(format!("A({q},{t}): t must be coprime to {p}")));
        }
        Ok(Component::AOdd { p, k, t })
    }

    pub fn a_even(k: u32, t: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("A(1, t) is not a component".into()));
        }
        let t = t.rem_euclid(1i64 << (k + 1)) as u64;
        if t % 2 == 0 {
            return Err(Error::InvalidParameter(format!("A({}, {t}): t must be odd", 1u64 << k)));
        }
        Ok(Component::AEven { k, t })
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        if m == 0 || m % 2 == 1 {
            return Err(Error::InvalidParameter(format!("Am({m}): m must be even and positive")));
        }
        Ok(Component::Cyclic { m, negated: false })
    }

    /// Coordinate orders of the underlying group.
    pub fn orders(&self) -> Vec<u64> {
        match *self {
            Component::AOdd { p, k, .. } => vec![p.pow(k)],
            Component::AEven { k, .. } => vec![1 << k],
            Component::B { k, .. } | Component::C { k, .. } => vec![1 << k, 1 << k],
            Component::Cyclic { m, .. } => vec![m],
        }
    }

    pub fn size(&self) -> u64 {
        self.orders().iter().product()
    }

    /// Denominator of `q`; also the level of the component.
    pub fn denominator(&self) -> u64 {
        match *self {
            Component::AOdd { p, k, .. } => p.pow(k),
            Component::AEven { k, .. } => 1 << (k + 1),
            Component::B { k, .. } | Component::C { k, .. } => 1 << k,
            Component::Cyclic { m, .. } => 2 * m,
        }
    }

    /// `denominator·q(x)` reduced into `[0, denominator)`.
    pub fn q_numerator(&self, x: &[u64]) -> u64 {
        let d = self.denominator() as u128;
        let neg = |v: u128, negated: bool| if negated { (d - v % d) % d } else { v % d };
        let r = match *self {
            Component::AOdd { t, .. } | Component::AEven { t, .. } => {
                let x = x[0] as u128;
                (t as u128 * (x * x % d)) % d
            }
            Component::B { negated, .. } => {
                let (a, b) = (x[0] as u128, x[1] as u128);
                neg(a * a + a * b + b * b, negated)
            }
            Component::C { negated, .. } => neg(x[0] as u128 * x[1] as u128, negated),
            Component::Cyclic { negated, .. } => {
                let x = x[0] as u128;
                neg(x * x, negated)
            }
        };
        r as u64
    }

    /// The component with negated form.
    pub fn negate(&self) -> Self {
        match *self {
            Component::AOdd { p, k, t } => {
                let q = p.pow(k);
                Component::AOdd { p, k, t: (q - t) % q }
            }
            Component::AEven { k, t } => {
                let q = 1u64 << (k + 1);
                Component::AEven { k, t: (q - t) % q }
            }
            Component::B { k, negated } => Component::B { k, negated: !negated },
            Component::C { k, negated } => Component::C { k, negated: !negated },
            Component::Cyclic { m, negated } => Component::Cyclic { m, negated: !negated },
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = |n: bool| if n { "^-1" } else { "" };
        match *self {
            Component::AOdd { p, k, t } => write!(f, "A({},{t})", p.pow(k)),
            Component::AEven { k, t } => write!(f, "A({},{t})", 1u64 << k),
            Component::B { k, negated } => write!(f, "B({}){}", 1u64 << k, inv(negated)),
            Component::C { k, negated } => write!(f, "C({}){}", 1u64 << k, inv(negated)),
            Component::Cyclic { m, negated } => write!(f, "Am({m}){}", inv(negated)),
        }
    }
}

/// A finite abelian group with a `ℚ/ℤ`-valued quadratic form, given as an
/// ordered orthogonal sum of components.
///
/// Elements are indexed `0..size()` in mixed radix over the flattened
/// coordinate orders, first coordinate most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuadraticModule {
    components: Vec<Component>,
    orders: Vec<u64>,
    /// First coordinate of each component.
    offsets: Vec<usize>,
    strides: Vec<u64>,
    size: u64,
    level: u64,
}

impl FiniteQuadraticModule {
    pub fn new(components: Vec<Component>) -> Self {
        let mut orders = Vec::new();
        let mut offsets = Vec::new();
        for c in &components {
            offsets.push(orders.len());
            orders.extend(c.orders());
        }
        let mut strides = vec![1u64; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1];
        }
        let size = orders.iter().product();
        let level = components.iter().fold(1u64, |acc, c| acc.lcm(&c.denominator()));
        Self {
            components,
            orders,
            offsets,
            strides,
            size,
            level,
        }
    }

    /// The one-element module.
    pub fn trivial() -> Self {
        Self::new(Vec::new())
    }

    /// `A_m = (ℤ/m, x²/2m)`.
    pub fn a_m(m: u64) -> Result<Self> {
        Ok(Self::new(vec![Component::cyclic(m)?]))
    }

    /// `A_{2p^r} ≅ A_2^{p^r} ⊕ A_{p^r}^4`.
    pub fn a2pr(p: u64, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("A2pr needs r >= 1".into()));
        }
        let pr = p
            .checked_pow(r)
            .ok_or_else(|| Error::InvalidParameter("p^r overflows".into()))?;
        Ok(Self::new(vec![
            Component::a_even(1, pr as i64)?,
            Component::a_odd(p, r, 4)?,
        ]))
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Smallest `N` with `N·q(x) ∈ ℤ` for every `x`.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    /// Whether the underlying group is cyclic; then `(1, …, 1)` generates it.
    pub fn is_cyclic(&self) -> bool {
        let mut acc = 1u64;
        for &o in &self.orders {
            if acc.gcd(&o) != 1 {
                return false;
            }
            acc *= o;
        }
        true
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        Self::new(comps)
    }

    /// The module with form `−q`.
    pub fn negated(&self) -> Self {
        Self::new(self.components.iter().map(Component::negate).collect())
    }

    pub fn coords(&self, idx: u64) -> Vec<u64> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&o, &s)| idx / s % o)
            .collect()
    }

    pub fn index(&self, coords: &[u64]) -> u64 {
        coords
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&x, &o), &s)| (x % o) * s)
            .sum()
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        let (a, b) = (self.coords(x), self.coords(y));
        let c: Vec<u64> = a
            .iter()
            .zip(&b)
            .zip(&self.orders)
            .map(|((&u, &v), &o)| (u + v) % o)
            .collect();
        self.index(&c)
    }

    pub fn neg(&self, x: u64) -> u64 {
        let c: Vec<u64> = self
            .coords(x)
            .iter()
            .zip(&self.orders)
            .map(|(&u, &o)| (o - u) % o)
            .collect();
        self.index(&c)
    }

    /// `k·x`.
    pub fn scale(&self, k: i64, x: u64) -> u64 {
        let c: Vec<u64> = self
            .coords(x)
            .iter()
            .zip(&self.orders)
            .map(|(&u, &o)| ((k.rem_euclid(o as i64) as u128 * u as u128) % o as u128) as u64)
            .collect();
        self.index(&c)
    }

    fn q_numerator_coords(&self, c: &[u64]) -> u64 {
        let n = self.level as u128;
        let mut acc = 0u128;
        for (comp, &off) in self.components.iter().zip(&self.offsets) {
            let len = comp.orders().len();
            let v = comp.q_numerator(&c[off..off + len]) as u128;
            acc += v * (n / comp.denominator() as u128);
        }
        (acc % n) as u64
    }

    /// `N·q(x)` in `[0, N)` with `N` the level.
    pub fn q_numerator(&self, x: u64) -> u64 {
        self.q_numerator_coords(&self.coords(x))
    }

    /// `q(x)` in `[0, 1)`.
    pub fn q(&self, x: u64) -> Rational {
        arith::rat(self.q_numerator(x) as i64, self.level as i64)
    }

    /// `N·b(x, y)` in `[0, N)`, `b(x,y) = q(x+y) − q(x) − q(y)`.
    pub fn b_numerator(&self, x: u64, y: u64) -> u64 {
        let n = self.level;
        let s = self.q_numerator(self.add(x, y)) + 2 * n;
        (s - self.q_numerator(x) - self.q_numerator(y)) % n
    }

    /// `N·q` of every element of one component, in its own element order.
    fn component_values(&self, comp: &Component) -> Vec<u64> {
        let scale = self.level / comp.denominator();
        let orders = comp.orders();
        let size = comp.size();
        (0..size)
            .map(|i| {
                let x: Vec<u64> = match orders.len() {
                    1 => vec![i],
                    _ => vec![i / orders[1], i % orders[1]],
                };
                comp.q_numerator(&x) * scale
            })
            .collect()
    }

    /// Streams `N·q(x)` for every element in index order.
    pub fn for_each_q_numerator(&self, mut f: impl FnMut(u64)) {
        let tables: Vec<Vec<u64>> = self
            .components
            .iter()
            .map(|c| self.component_values(c))
            .collect();
        fn rec(tables: &[Vec<u64>], n: u64, acc: u64, f: &mut impl FnMut(u64)) {
            match tables.split_first() {
                None => f(acc),
                Some((head, rest)) => {
                    for &v in head {
                        rec(rest, n, (acc + v) % n, f);
                    }
                }
            }
        }
        rec(&tables, self.level, 0, &mut f);
    }

    /// `N·q(x)` for every element in index order.
    pub fn q_numerators(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.size as usize);
        self.for_each_q_numerator(|v| out.push(v));
        out
    }

    /// Histogram of `a·q(x)` over `ℚ/ℤ`, as counts indexed by `N·(a·q(x))`.
    pub fn value_counts(&self, a: i64) -> Vec<i64> {
        let n = self.level;
        let a = a.rem_euclid(n as i64) as u128;
        let mut counts = vec![0i64; n as usize];
        self.for_each_q_numerator(|v| {
            counts[((a * v as u128) % n as u128) as usize] += 1;
        });
        counts
    }

    /// `√|D|` as a cyclotomic number.
    pub fn sqrt_size(&self) -> Cyclotomic {
        sqrt_integer(self.size)
    }

    /// Cyclotomic order large enough for `ζ_8`, `ζ_12`, every `e(q(x))` and `√|D|`.
    pub fn working_order(&self) -> u64 {
        24u64.lcm(&self.level).lcm(&self.sqrt_size().order())
    }

    /// `Ω_D(a) = |D|^{−1/2} Σ_x e(a·q(x))`, by direct summation.
    pub fn gauss_sum(&self, a: i64) -> Cyclotomic {
        let sum = Cyclotomic::from_exponent_weights(self.level, &self.value_counts(a));
        // 1/√|D| = √|D|/|D|
        let inv = self.sqrt_size().scalar_mul(&arith::rat(1, self.size as i64));
        &sum * &inv
    }

    /// `s mod 8` with `Ω_D(1) = ζ_8^s`.
    pub fn signature(&self) -> Result<u8> {
        signature_of(&self.gauss_sum(1)).ok_or_else(|| {
            Error::Degenerate(format!("Ω(1) of {self} is not an eighth root of unity"))
        })
    }

    /// Signature computed component by component (Milgram additivity).
    pub fn signature_by_components(&self) -> Result<u8> {
        let mut s = 0u8;
        for c in &self.components {
            s = (s + Self::new(vec![c.clone()]).signature()?) % 8;
        }
        Ok(s)
    }

    /// `D[2] = {x : 2x = 0}`, as element indices.
    pub fn two_torsion(&self) -> Vec<u64> {
        let choices: Vec<Vec<u64>> = self
            .orders
            .iter()
            .map(|&o| if o % 2 == 0 { vec![0, o / 2] } else { vec![0] })
            .collect();
        let mut out = vec![0u64];
        for (i, ch) in choices.iter().enumerate() {
            out = out
                .iter()
                .flat_map(|&base| ch.iter().map(move |&c| base + c * self.strides[i]))
                .collect();
        }
        out.sort_unstable();
        out
    }

    /// `O(D)` with the default brute-force bounds.
    pub fn orthogonal_group(&self) -> Result<OrthogonalGroup> {
        OrthogonalGroup::compute(self, DEFAULT_CYCLIC_BOUND, DEFAULT_GENERAL_BOUND)
    }
}

/// `s` with `z = ζ_8^s`, if any.
pub fn signature_of(z: &Cyclotomic) -> Option<u8> {
    (0..8u8).find(|&s| *z == Cyclotomic::root_of_unity(8, s as i64))
}

impl fmt::Display for FiniteQuadraticModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for FiniteQuadraticModule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_module(s)
    }
}
