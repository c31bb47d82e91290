//! Closed forms for `D = A_{2p^r} = (ℤ/2p^r, x²/4p^r)`.
//!
//! Nothing here does `O(p^r)` work except the `*_brute` functions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{self, class_number, h_prime, h_star, kronecker_big, rat, HalfInteger, Rational};
use crate::dims::WeightMultiplicities;
use crate::error::{Error, Result};
use crate::quadmod::FiniteQuadraticModule;
use crate::weilrep::{self, ExponentChoice};

/// `(p, r)` with `p` an odd prime; `p ≥ 5` where the table needs it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyParams {
    pub p: u64,
    pub r: u32,
}

impl FamilyParams {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if p == 2 || !arith::is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
        }
        if r == 0 {
            return Err(Error::InvalidParameter("r must be positive".into()));
        }
        if p.checked_pow(r).and_then(|q| q.checked_mul(4)).is_none() {
            return Err(Error::Resource(format!("4·{p}^{r} overflows 64 bits")));
        }
        Ok(Self { p, r })
    }

    /// `p^r`.
    pub fn pr(&self) -> u64 {
        self.p.pow(self.r)
    }

    /// `dim ρ = 2p^r`.
    pub fn dim(&self) -> u64 {
        2 * self.pr()
    }

    pub fn level(&self) -> u64 {
        4 * self.pr()
    }

    pub fn module(&self) -> Result<FiniteQuadraticModule> {
        FiniteQuadraticModule::a2pr(self.p, self.r)
    }
}

fn big(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p^{⌊r/2⌋}`, `(p^{⌊(r+1)/2⌋} − 1)/(p − 1)` and `{p^r/4}`.
fn common(f: FamilyParams) -> (Rational, Rational, Rational) {
    let (p, r) = (f.p, f.r);
    let low = big(p.pow(r / 2));
    let geo = (big(p.pow((r + 1) / 2)) - Rational::one()) / big(p - 1);
    let quarter = rat((f.pr() % 4) as i64, 4);
    (low, geo, quarter)
}

/// `h_p*` from the case table: `0`, `h_p`, or `1/3` for `p = 3`.
pub fn h_star_cases(p: u64) -> Result<Rational> {
    let h = class_number(p)?.h;
    Ok(match p {
        3 => rat(1, 3),
        _ if p % 4 == 1 => Rational::zero(),
        _ => big(h),
    })
}

/// `h_p′` from the case table: `h_p` or `0`.
pub fn h_prime_cases(p: u64) -> Result<Rational> {
    let h = class_number(p)?.h;
    Ok(if p % 4 == 1 { big(h) } else { Rational::zero() })
}

/// `Σ_{x=0}^{p^r−1} {x²/p^r}`.
pub fn sum_sq_fracs(p: u64, r: u32) -> Result<Rational> {
    let f = FamilyParams::new(p, r)?;
    let (low, geo, _) = common(f);
    Ok(rat(1, 2) * (big(f.pr()) - low) - geo * h_star_cases(p)?)
}

/// `Σ_{0<x<2p^r, x odd} {x²/4p^r}`.
pub fn sum_odd_fracs(p: u64, r: u32) -> Result<Rational> {
    let f = FamilyParams::new(p, r)?;
    let (low, geo, quarter) = common(f);
    let sign = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
    let two_p = arith::kronecker(2, p as i64) as i64;
    let bracket = rat(1 - sign, 2) + arith::rat_int(1 - two_p) * h_star_cases(p)? + h_prime_cases(p)?;
    Ok(rat(1, 2) * (big(f.pr()) - &low) + quarter * &low - geo / arith::rat_int(2) * bracket)
}

/// `Tr L` for the standard exponents of `ρ_{A_{2p^r}}`, split by `p mod 8`.
pub fn tr_l_closed(p: u64, r: u32) -> Result<Rational> {
    let f = FamilyParams::new(p, r)?;
    let (low, geo, quarter) = common(f);
    let h = h_star_cases(p)?;
    let case = match p % 8 {
        1 | 5 => big(class_number(p)?.h),
        3 => h * arith::rat_int(4) + Rational::one(),
        _ => h * arith::rat_int(2) + Rational::one(),
    };
    Ok(big(f.pr()) - quarter * low + geo / arith::rat_int(2) * case)
}

/// `Tr L` before the split by `p mod 8`, with `h_p*` and `h_p′` summed directly.
pub fn tr_l_unsplit(p: u64, r: u32) -> Result<Rational> {
    let f = FamilyParams::new(p, r)?;
    let (low, geo, quarter) = common(f);
    let sign = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
    let two_p = arith::kronecker(2, p as i64) as i64;
    let bracket = rat(1 - sign, 2) + arith::rat_int(3 - two_p) * h_star(p)? + h_prime(p)?;
    Ok(big(f.pr()) - quarter * low + geo / arith::rat_int(2) * bracket)
}

/// `Σ_{x<p^r} {x²/p^r}` by direct summation.
pub fn sum_sq_fracs_brute(p: u64, r: u32) -> Result<Rational> {
    let n = FamilyParams::new(p, r)?.pr();
    let s: u128 = (0..n).map(|x| (x as u128 * x as u128) % n as u128).sum();
    Ok(Rational::new(BigInt::from(s), BigInt::from(n)))
}

/// `Σ_{0<x<2p^r odd} {x²/4p^r}` by direct summation.
pub fn sum_odd_fracs_brute(p: u64, r: u32) -> Result<Rational> {
    let f = FamilyParams::new(p, r)?;
    let n = f.level() as u128;
    let s: u128 = (1..f.dim()).step_by(2).map(|x| (x as u128 * x as u128) % n).sum();
    Ok(Rational::new(BigInt::from(s), BigInt::from(n)))
}

/// `Tr L` by streaming over the `2p^r` elements of the module.
pub fn tr_l_brute(p: u64, r: u32) -> Result<Rational> {
    let f = FamilyParams::new(p, r)?;
    Ok(weilrep::trace_exponents(&f.module()?, ExponentChoice::Standard))
}

/// `δ` and `ε±` of the multiplicity table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableConstants {
    pub delta: Rational,
    pub eps_plus: Rational,
    pub eps_minus: Rational,
}

impl TableConstants {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        let f = FamilyParams::new(p, r)?;
        let pr = BigInt::from(f.pr());
        let minus_one = kronecker_big(&BigInt::from(-1), &pr) as i64;
        let by_three = kronecker_big(&pr, &BigInt::from(3)) as i64;
        Ok(Self {
            delta: rat(2 + minus_one, 8),
            eps_plus: rat(1 + by_three, 6),
            eps_minus: rat(1 - by_three, 6),
        })
    }
}

/// `m_k` for `k = 1/2, …, 23/2` from the closed-form table.
pub fn table_multiplicities(p: u64, r: u32) -> Result<WeightMultiplicities> {
    if p < 5 {
        return Err(Error::InvalidParameter(format!("the table needs p ≥ 5, got {p}")));
    }
    let f = FamilyParams::new(p, r)?;
    let tr_l = tr_l_closed(p, r)?;
    let c = TableConstants::new(p, r)?;
    let plus = big(f.pr()) + Rational::one();
    let minus = big(f.pr()) - Rational::one();
    let t = &tr_l / arith::rat_int(2);
    let (d, ep, em) = (&c.delta, &c.eps_plus, &c.eps_minus);
    let a = |n: i64, x: &Rational| rat(n, 24) * x;
    let rows: [Rational; 12] = [
        Rational::zero(),
        a(13, &plus) - &t - d - ep,
        a(15, &minus) - &t + d,
        a(17, &plus) - &t - d + ep,
        a(19, &minus) - &t + d + em,
        a(8, &plus) + ep,
        a(8, &minus) - em,
        a(-5, &plus) + &t + d - ep,
        a(-7, &minus) + &t - d - em,
        a(-9, &plus) + &t + d,
        a(-11, &minus) + &t - d + em,
        Rational::zero(),
    ];
    let mut mult = BTreeMap::new();
    for (i, m) in rows.iter().enumerate() {
        let k = HalfInteger::from_doubled(2 * i as i64 + 1);
        if !m.is_integer() || m.is_negative() {
            return Err(Error::Mismatch(format!("table entry at k = {k} is {m}")));
        }
        let v = m.to_integer().to_u64().ok_or_else(|| Error::Resource("table entry too large".into()))?;
        mult.insert(k, v);
    }
    WeightMultiplicities::new(f.dim(), mult, &tr_l)
}

/// `lim_{p→∞} m_k / 2p^r` for `k = 1/2, …, 23/2`.
pub fn limit_distribution() -> Vec<Rational> {
    [0, 1, 3, 5, 7, 8, 8, 7, 5, 3, 1, 0].iter().map(|&n| rat(n, 48)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionRow {
    pub p: u64,
    pub r: u32,
    pub class_number: u64,
    /// `m_k` at `k = 1/2, …, 23/2`.
    pub multiplicities: Vec<u64>,
    pub normalized: Vec<Rational>,
    /// `max_k |m_k/2p^r − lim_k|`.
    pub deviation: Rational,
}

pub fn distribution_row(p: u64, r: u32) -> Result<DistributionRow> {
    let f = FamilyParams::new(p, r)?;
    let w = table_multiplicities(p, r)?;
    let multiplicities = w.half_integral();
    let normalized: Vec<Rational> = multiplicities
        .iter()
        .map(|&m| Rational::new(BigInt::from(m), BigInt::from(f.dim())))
        .collect();
    let deviation = normalized
        .iter()
        .zip(limit_distribution())
        .map(|(x, l)| (x - l).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(DistributionRow {
        p,
        r,
        class_number: class_number(p)?.h,
        multiplicities,
        normalized,
        deviation,
    })
}

/// Rows for every prime in `primes`, ordered as given.
pub fn distribution_scan(primes: &[u64], r: u32) -> Result<Vec<DistributionRow>> {
    primes.par_iter().map(|&p| distribution_row(p, r)).collect()
}

/// Rows for a fixed `p` and every `r` in `powers`, ordered as given.
pub fn distribution_scan_powers(p: u64, powers: &[u32]) -> Result<Vec<DistributionRow>> {
    powers.par_iter().map(|&r| distribution_row(p, r)).collect()
}

#[cfg(test)]
mod tests;
