//! Exact rationals, half-integral weights, elementary number-theoretic
//! functions and class numbers of imaginary quadratic fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact fraction, always in lowest terms.
pub type Rational = BigRational;

/// Shorthand for `num/den` as a [`Rational`].
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The unique representative of `x` modulo 1 in `[0, 1)`.
pub fn frac_part(x: &Rational) -> Rational {
    x - x.floor()
}

/// A weight `k` in `½ℤ`, stored as `2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger {
    doubled: i64,
}

impl HalfInteger {
    pub const fn from_doubled(doubled: i64) -> Self {
        Self { doubled }
    }

    pub const fn from_integer(k: i64) -> Self {
        Self { doubled: 2 * k }
    }

    /// `2k`.
    pub const fn doubled(self) -> i64 {
        self.doubled
    }

    pub const fn is_integral(self) -> bool {
        self.doubled % 2 == 0
    }

    pub fn to_rational(self) -> Rational {
        rat(self.doubled, 2)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for HalfInteger {
    type Err = Error;

    /// Accepts `"7/2"`, `"3.5"`, `"-3/2"` and plain integers.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("not a half-integer: {s:?}"),
        };
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                1 => Ok(Self::from_integer(num)),
                2 => Ok(Self::from_doubled(num)),
                _ => Err(bad()),
            };
        }
        if let Some((int, frac)) = t.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int_abs: i64 = int.trim().trim_start_matches('-').parse().map_err(|_| bad())?;
            let frac = frac.trim_end_matches('0');
            let half = match frac {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            let doubled = 2 * int_abs + half;
            return Ok(Self::from_doubled(if neg { -doubled } else { doubled }));
        }
        t.parse::<i64>().map(Self::from_integer).map_err(|_| bad())
    }
}

/// Kronecker symbol `(a/n)` in its full extension (even and negative `n`).
pub fn kronecker_big(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    if a.is_even() && n.is_even() {
        return 0;
    }
    // (2/b) for odd b, indexed by b mod 8
    let tab = |b: &BigInt| -> i8 {
        match b.mod_floor(&BigInt::from(8)).to_u8().unwrap() {
            1 | 7 => 1,
            _ => -1,
        }
    };
    let mut a = a.clone();
    let mut b = n.clone();
    let mut k: i8 = 1;

    let v = b.trailing_zeros().unwrap_or(0);
    b >>= v;
    if v % 2 == 1 {
        k = tab(&a);
    }
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            k = -k;
        }
    }
    loop {
        if a.is_zero() {
            return if b.is_one() { k } else { 0 };
        }
        let v = a.trailing_zeros().unwrap_or(0);
        a >>= v;
        if v % 2 == 1 {
            k *= tab(&b);
        }
        let three = BigInt::from(3);
        let four = BigInt::from(4);
        if a.mod_floor(&four) == three && b.mod_floor(&four) == three {
            k = -k;
        }
        let r = a.abs();
        a = b.mod_floor(&r);
        b = r;
    }
}

/// Kronecker symbol `(a/n)` on machine integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    kronecker_big(&BigInt::from(a), &BigInt::from(n))
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factorize(n);
    f.len() == 1 && f[0].1 == 1
}

/// Returns `(p, k)` when `n = p^k` for a prime `p`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Möbius function.
pub fn moebius(n: u64) -> i8 {
    assert!(n >= 1, "moebius is defined for n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).any(|s| s * s == n)
}

/// Class number of `ℚ(√−p)` for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassNumberResult {
    pub p: u64,
    /// Field discriminant: `−p` for `p ≡ 3 (4)`, `−4p` for `p ≡ 1 (4)`.
    pub discriminant: i64,
    pub h: u64,
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Counts reduced primitive positive-definite forms `(a, b, c)` with
/// `b² − 4ac = disc`, `|b| ≤ a ≤ c` and `b ≥ 0` when `|b| = a` or `a = c`.
pub fn count_reduced_forms(disc: i64) -> u64 {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1, "bad discriminant {disc}");
    let d = -disc;
    let mut h = 0u64;
    let mut b = d & 1;
    while 3 * b * b <= d {
        let ac = (b * b + d) / 4;
        let mut a = b.max(1);
        while a * a <= ac {
            if ac % a == 0 {
                let c = ac / a;
                if a.gcd(&b).gcd(&c) == 1 {
                    // (a, -b, c) is reduced too unless it coincides with a boundary case
                    h += if b == 0 || b == a || a == c { 1 } else { 2 };
                }
            }
            a += 1;
        }
        b += 2;
    }
    h
}

pub fn class_number(p: u64) -> Result<ClassNumberResult> {
    require_odd_prime(p)?;
    let discriminant = if p % 4 == 3 { -(p as i64) } else { -4 * p as i64 };
    Ok(ClassNumberResult {
        p,
        discriminant,
        h: count_reduced_forms(discriminant),
    })
}

/// `h_p* = −Σ_{a=0}^{p−1} (a/p)·a/p`.
pub fn h_star(p: u64) -> Result<Rational> {
    require_odd_prime(p)?;
    let pi = p as i64;
    let s: i64 = (0..pi).map(|a| kronecker(a, pi) as i64 * a).sum();
    Ok(-rat(s, pi))
}

/// `h_p′ = −Σ_{0<a<4p, a odd} (−1)^{(a−1)/2}·(a/p)·a/4p`.
pub fn h_prime(p: u64) -> Result<Rational> {
    require_odd_prime(p)?;
    let pi = p as i64;
    let s: i64 = (1..4 * pi)
        .step_by(2)
        .map(|a| {
            let sign = if (a - 1) / 2 % 2 == 0 { 1 } else { -1 };
            sign * kronecker(a, pi) as i64 * a
        })
        .sum();
    Ok(-rat(s, 4 * pi))
}

/// A real Dirichlet character `a ↦ (a/k)·ψ(a)`, where `ψ` is optionally the
/// sign character `(−1)^{(a−1)/2}` on odd `a` (zero on even `a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealCharacter {
    /// Odd positive `k`; the Jacobi symbol `(a/k)` in `a`.
    pub kronecker_modulus: u64,
    pub sign_twist: bool,
}

impl RealCharacter {
    pub fn new(kronecker_modulus: u64, sign_twist: bool) -> Result<Self> {
        if kronecker_modulus == 0 || kronecker_modulus % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "character modulus {kronecker_modulus} must be odd and positive"
            )));
        }
        Ok(Self {
            kronecker_modulus,
            sign_twist,
        })
    }

    /// Period of the character.
    pub fn conductor_modulus(&self) -> u64 {
        if self.sign_twist {
            4 * self.kronecker_modulus
        } else {
            self.kronecker_modulus
        }
    }

    /// Whether the character mod its natural modulus is principal.
    pub fn is_trivial(&self) -> bool {
        !self.sign_twist && is_perfect_square(self.kronecker_modulus)
    }

    pub fn eval(&self, a: i64) -> i8 {
        let k = kronecker(a, self.kronecker_modulus as i64);
        if !self.sign_twist {
            return k;
        }
        if a.rem_euclid(2) == 0 {
            return 0;
        }
        if a.rem_euclid(4) == 1 {
            k
        } else {
            -k
        }
    }

    /// The character viewed modulo `m`: zero on integers sharing a factor with `m`.
    pub fn eval_mod(&self, a: i64, m: u64) -> i8 {
        if a.unsigned_abs().gcd(&m) != 1 {
            0
        } else {
            self.eval(a)
        }
    }
}

/// How the character modulo `m` is extended to the range `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterExtension {
    /// The `m`-periodic extension.
    Periodic,
    /// The induced character modulo `n`, vanishing on integers not coprime to `n`.
    Imprimitive,
}

/// `Σ_{a=0}^{n−1} χ(a)·a/n` for a real character `χ` modulo `m`, `m | n`.
pub fn weighted_character_sum(
    m: u64,
    chi: &RealCharacter,
    n: u64,
    extension: CharacterExtension,
) -> Result<Rational> {
    if m == 0 || n % m != 0 {
        return Err(Error::InvalidParameter(format!("{m} does not divide {n}")));
    }
    if m % chi.conductor_modulus() != 0 {
        return Err(Error::InvalidParameter(format!(
            "character of modulus {} is not defined modulo {m}",
            chi.conductor_modulus()
        )));
    }
    if chi.is_trivial() || (1..m as i64).all(|a| chi.eval_mod(a, m) >= 0) {
        return Err(Error::InvalidParameter("trivial character".into()));
    }
    let modulus = match extension {
        CharacterExtension::Periodic => m,
        CharacterExtension::Imprimitive => n,
    };
    let mut s = BigInt::zero();
    for a in 0..n as i64 {
        let v = chi.eval_mod(a, modulus);
        if v != 0 {
            s += BigInt::from(v as i64 * a);
        }
    }
    Ok(Rational::new(s, BigInt::from(n)))
}
