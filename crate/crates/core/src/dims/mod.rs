//! Euler characteristics, dimensions of `M_k(ρ_D)` and `S_k(ρ_D)`, and
//! generating weights of the free module `M(ρ_D)` over `ℂ[E₄, E₆]`.

mod critical;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::arith::{self, HalfInteger, Rational};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::quadmod::FiniteQuadraticModule;
use crate::weilrep::{self, ExponentChoice, ExponentMatrix, WeilRep};

pub use critical::{
    dim_s_half_dual, dim_s_half_dual_report, skoruppa_weight_half, skoruppa_weight_half_report,
    CriticalOptions, CriticalReport, CriticalTerm, TermOutcome,
};

/// The inputs of the Weil-representation Euler characteristic.
#[derive(Debug, Clone)]
pub struct WeilData {
    pub size: u64,
    pub sig: u8,
    pub two_torsion: u64,
    pub tr_l: Rational,
    pub tr_l2: Rational,
    pub omega2: Cyclotomic,
    pub omega3: Cyclotomic,
}

impl WeilData {
    /// Streams over `D` once for `Tr L`; never builds `L`.
    pub fn new(module: &FiniteQuadraticModule, choice: ExponentChoice) -> Result<Self> {
        Ok(Self {
            size: module.size(),
            sig: module.signature()?,
            two_torsion: module.two_torsion().len() as u64,
            tr_l: weilrep::trace_exponents(module, choice),
            tr_l2: weilrep::trace_exponents_two_torsion(module, choice),
            omega2: module.gauss_sum(2),
            omega3: module.gauss_sum(3),
        })
    }

    pub fn with_exponents(module: &FiniteQuadraticModule, l: &ExponentMatrix) -> Result<Self> {
        if l.diagonal().len() as u64 != module.size() {
            return Err(Error::InvalidParameter("exponent matrix has the wrong size".into()));
        }
        Ok(Self {
            size: module.size(),
            sig: module.signature()?,
            two_torsion: module.two_torsion().len() as u64,
            tr_l: l.trace(),
            tr_l2: l.trace_on_two_torsion(module),
            omega2: module.gauss_sum(2),
            omega3: module.gauss_sum(3),
        })
    }
}

fn root(n: u64, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(n, k)
}

fn cyc(q: &Rational) -> Cyclotomic {
    Cyclotomic::from_rational(1, q)
}

fn integral(total: &Cyclotomic, what: &str) -> Result<i64> {
    let q = total
        .as_rational()
        .map_err(|_| Error::Mismatch(format!("{what} is not rational: {total}")))?;
    if !q.is_integer() {
        return Err(Error::Mismatch(format!("{what} = {q} is not an integer")));
    }
    q.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Resource(format!("{what} does not fit in 64 bits")))
}

/// The Euler characteristic of `W_k(D)` from the Weil-representation formula.
/// Needs `2k + sig` even.
pub fn euler_char_data(data: &WeilData, k: HalfInteger) -> Result<i64> {
    let k2 = k.doubled();
    let sig = data.sig as i64;
    if (k2 + sig) % 2 != 0 {
        return Err(Error::Parity(k2 + sig));
    }
    let c = (arith::rat_int(5) + k.to_rational()) / arith::rat_int(24);
    let half = arith::rat(1, 2);
    let first = &c * arith::rat_int(data.size as i64) - &half * &data.tr_l;
    let mut total = cyc(&first);

    let bracket = &c * arith::rat_int(data.two_torsion as i64) - &half * &data.tr_l2;
    total = &total + &root(4, k2 + sig).scalar_mul(&bracket).real_part();

    let s_term = (&root(8, k2 + sig) * &data.omega2).real_part();
    total = &total + &s_term.scalar_mul(&arith::rat(1, 4));

    let one = Cyclotomic::one(3);
    let inv1 = (&one - &root(3, 1)).inverse().expect("1 − ζ₃ ≠ 0");
    let inv2 = (&one - &root(3, 2)).inverse().expect("1 − ζ₃² ≠ 0");
    let r1 = &(&root(12, k2) * &inv1) * &root(4, sig);
    let r2 = &(&(&root(6, k2) * &inv2) * &root(8, sig)) * &data.omega3;
    total = &total + &(&r1 + &r2).real_part().scalar_mul(&arith::rat(1, 3));

    integral(&total, &format!("χ at k = {k}"))
}

/// `χ(W_k(D))` with exponents `L`.
pub fn euler_char(module: &FiniteQuadraticModule, k: HalfInteger, l: &ExponentMatrix) -> Result<i64> {
    euler_char_data(&WeilData::with_exponents(module, l)?, k)
}

/// Traces entering the general Riemann–Roch formula, read off the matrices.
#[derive(Debug, Clone)]
pub struct GeneralTraces {
    pub dim: u64,
    pub tr_l: Rational,
    /// `Tr(L)` on the `i^j`-eigenspace of `ρ(Z)`, `j = 0..3`.
    pub tr_l_eigen: [Rational; 4],
    /// `Tr ρ(S)^j`, `j = 0..7`.
    pub s: Vec<Cyclotomic>,
    /// `Tr ρ(R)^j`, `j = 0..11`.
    pub r: Vec<Cyclotomic>,
}

impl GeneralTraces {
    pub fn new(rep: &WeilRep, l: &ExponentMatrix) -> Result<Self> {
        let n = rep.order();
        let p: Vec<Rational> = (0..4).map(|j| rep.tr_l_eigenspace_matrix(l, j)).collect::<Result<_>>()?;
        let s = rep.rho_s().clone();
        let r = s.mul(&rep.rho_t());
        let traces = |g: &weilrep::Matrix, count: usize| {
            let mut acc = weilrep::Matrix::identity(rep.dim(), n);
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                out.push(acc.trace());
                acc = acc.mul(g);
            }
            out
        };
        Ok(Self {
            dim: rep.dim() as u64,
            tr_l: l.trace(),
            tr_l_eigen: [p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()],
            s: traces(&s, 8),
            r: traces(&r, 12),
        })
    }
}

/// The general Riemann–Roch formula evaluated from the matrices of `rep`.
/// `L^{±1}` are the restrictions of `L` to the `±1`-eigenspaces of `ρ(Z²)`,
/// and the `i^{−2k}` bracket is the conjugate of the `i^{2k}` bracket.
pub fn euler_char_general(rep: &WeilRep, k: HalfInteger, l: &ExponentMatrix) -> Result<i64> {
    euler_char_traces(&GeneralTraces::new(rep, l)?, k)
}

pub fn euler_char_traces(t: &GeneralTraces, k: HalfInteger) -> Result<i64> {
    let k2 = k.doubled();
    let c = (arith::rat_int(5) + k.to_rational()) / arith::rat_int(48);
    let quarter = arith::rat(1, 4);
    let p = &t.tr_l_eigen;
    // Z = S², Z² = S⁴, Z⁻¹ = S⁶
    let (tr_z, tr_z2, tr_zinv) = (&t.s[2], &t.s[4], &t.s[6]);

    let mut total = cyc(&(&c * arith::rat_int(t.dim as i64) - &quarter * &t.tr_l));

    let plus = &p[0] + &p[2];
    let minus = &p[1] + &p[3];
    let b0 = &tr_z2.scalar_mul(&c) + &cyc(&(&quarter * (&minus - &plus)));
    total = &total + &b0.scalar_mul(&arith::rat_int(if k2 % 2 == 0 { 1 } else { -1 }));

    let mut twisted = Cyclotomic::zero(4);
    let mut twisted_inv = Cyclotomic::zero(4);
    for (j, pj) in p.iter().enumerate() {
        twisted = &twisted + &root(4, j as i64).scalar_mul(pj);
        twisted_inv = &twisted_inv + &root(4, -(j as i64)).scalar_mul(pj);
    }
    let b1 = &tr_z.scalar_mul(&c) - &twisted.scalar_mul(&quarter);
    let b2 = &tr_zinv.scalar_mul(&c) - &twisted_inv.scalar_mul(&quarter);
    total = &total + &(&root(4, k2) * &b1);
    total = &total + &(&root(4, -k2) * &b2);

    for j in [1i64, 3, 5, 7] {
        let term = &root(8, k2 * j) * &t.s[j as usize];
        total = &total + &term.scalar_mul(&arith::rat(1, 16));
    }
    let one = Cyclotomic::one(3);
    for j in [1i64, 2, 4, 5, 7, 8, 10, 11] {
        let inv = (&one - &root(3, j)).inverse().expect("ζ₃^j ≠ 1");
        let term = &(&root(12, k2 * j) * &inv) * &t.r[j as usize];
        total = &total + &term.scalar_mul(&arith::rat(1, 12));
    }
    integral(&total, &format!("χ at k = {k}"))
}

/// A dimension that may be out of reach of every known method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Known(u64),
    /// Weight one with even signature.
    Unknown,
}

impl Dimension {
    pub fn known(self) -> Option<u64> {
        match self {
            Dimension::Known(d) => Some(d),
            Dimension::Unknown => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Known(d) => write!(f, "{d}"),
            Dimension::Unknown => write!(f, "unknown(weight-one)"),
        }
    }
}

/// How `dim M_k` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Parity,
    Vanishing,
    Euler,
    Skoruppa,
    SerreDual,
    Invariants,
    /// No method applies (weight one, even signature).
    Unknown,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Parity => "parity",
            Method::Vanishing => "vanishing",
            Method::Euler => "euler",
            Method::Skoruppa => "skoruppa",
            Method::SerreDual => "serre-dual",
            Method::Invariants => "invariants",
            Method::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub module: String,
    pub weight: HalfInteger,
    /// `None` when `2k + sig` is odd.
    pub euler_char: Option<i64>,
    pub dim_m: Dimension,
    pub dim_s: Dimension,
    pub method: Method,
}

/// Lazily computed data shared by the dimension queries on one module.
struct Context<'a> {
    module: &'a FiniteQuadraticModule,
    sig: i64,
    standard: Option<WeilData>,
    cuspidal: Option<WeilData>,
    opts: CriticalOptions,
}

impl<'a> Context<'a> {
    fn new(module: &'a FiniteQuadraticModule, opts: CriticalOptions) -> Result<Self> {
        Ok(Self {
            module,
            sig: module.signature()? as i64,
            standard: None,
            cuspidal: None,
            opts,
        })
    }

    fn chi(&mut self, k: HalfInteger, choice: ExponentChoice) -> Result<i64> {
        let slot = match choice {
            ExponentChoice::Standard => &mut self.standard,
            ExponentChoice::Cuspidal => &mut self.cuspidal,
        };
        if slot.is_none() {
            *slot = Some(WeilData::new(self.module, choice)?);
        }
        euler_char_data(slot.as_ref().unwrap(), k)
    }

    fn parity_fails(&self, k: HalfInteger) -> bool {
        (k.doubled() + self.sig) % 2 != 0
    }

    /// Forms of weight one take values in the `−1`-eigenspace of `ρ(Z)`,
    /// which is `V⁻ = 0` when `sig ≡ 0 (4)` and `D` is 2-elementary.
    fn weight_one_vanishes(&self) -> bool {
        self.sig % 4 == 0 && self.module.two_torsion().len() as u64 == self.module.size()
    }

    fn dim_m(&mut self, k: HalfInteger) -> Result<(Dimension, Method)> {
        let k2 = k.doubled();
        if self.parity_fails(k) {
            return Ok((Dimension::Known(0), Method::Parity));
        }
        if k2 < 0 {
            return Ok((Dimension::Known(0), Method::Vanishing));
        }
        match k2 {
            0 => Ok((Dimension::Known(weilrep::invariants_dim(self.module, &[])?), Method::Invariants)),
            1 => Ok((
                Dimension::Known(skoruppa_weight_half_report(self.module, self.opts)?.value),
                Method::Skoruppa,
            )),
            2 if self.weight_one_vanishes() => Ok((Dimension::Known(0), Method::Vanishing)),
            2 => Ok((Dimension::Unknown, Method::Unknown)),
            3 => {
                let chi = self.chi(k, ExponentChoice::Standard)?;
                let h1 = dim_s_half_dual_report(self.module, self.opts)?.value;
                Ok((Dimension::Known(nonnegative(chi + h1 as i64, k)?), Method::SerreDual))
            }
            _ => {
                let chi = self.chi(k, ExponentChoice::Standard)?;
                Ok((Dimension::Known(nonnegative(chi, k)?), Method::Euler))
            }
        }
    }

    /// `H¹` of the cuspidal bundle at weight `k` is dual to `M_{2−k}(ρ_D^*)`,
    /// and `ρ_D^* = ρ_{D⁻¹}`.
    fn dim_s(&mut self, k: HalfInteger) -> Result<Dimension> {
        let k2 = k.doubled();
        if self.parity_fails(k) || k2 <= 0 {
            return Ok(Dimension::Known(0));
        }
        let dual = self.module.negated();
        match k2 {
            1 => Ok(Dimension::Known(dim_s_half_dual_report(&dual, self.opts)?.value)),
            2 if self.weight_one_vanishes() => Ok(Dimension::Known(0)),
            2 => Ok(Dimension::Unknown),
            3 => {
                let chi = self.chi(k, ExponentChoice::Cuspidal)?;
                let h1 = skoruppa_weight_half_report(&dual, self.opts)?.value;
                Ok(Dimension::Known(nonnegative(chi + h1 as i64, k)?))
            }
            4 => {
                let chi = self.chi(k, ExponentChoice::Cuspidal)?;
                let h1 = weilrep::invariants_dim(&dual, &[])?;
                Ok(Dimension::Known(nonnegative(chi + h1 as i64, k)?))
            }
            _ => Ok(Dimension::Known(nonnegative(self.chi(k, ExponentChoice::Cuspidal)?, k)?)),
        }
    }
}

fn nonnegative(d: i64, k: HalfInteger) -> Result<u64> {
    u64::try_from(d).map_err(|_| Error::Mismatch(format!("negative dimension {d} at k = {k}")))
}

/// `dim M_k(ρ_D)` and `dim S_k(ρ_D)` with standard exponents.
pub fn dim_m(module: &FiniteQuadraticModule, k: HalfInteger) -> Result<DimensionReport> {
    dim_m_with(module, k, CriticalOptions::default())
}

pub fn dim_m_with(module: &FiniteQuadraticModule, k: HalfInteger, opts: CriticalOptions) -> Result<DimensionReport> {
    let mut ctx = Context::new(module, opts)?;
    let euler = if ctx.parity_fails(k) {
        None
    } else {
        Some(ctx.chi(k, ExponentChoice::Standard)?)
    };
    let (dim_m, method) = ctx.dim_m(k)?;
    let dim_s = ctx.dim_s(k)?;
    Ok(DimensionReport {
        module: module.to_string(),
        weight: k,
        euler_char: euler,
        dim_m,
        dim_s,
        method,
    })
}

/// `#{(a, b) ≥ 0 : 4a + 6b = w}` for `w = k2/2`.
pub fn monomial_count(k2: i64) -> u64 {
    if k2 < 0 || k2 % 2 != 0 {
        return 0;
    }
    let w = k2 / 2;
    (0..=w / 4).filter(|a| (w - 4 * a) % 6 == 0).count() as u64
}

/// Largest doubled weight that can carry a generator.
pub const MAX_WEIGHT_DOUBLED: i64 = 23;

/// Generator multiplicities `m_k` for `k ∈ {0, 1/2, …, 23/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMultiplicities {
    dim: u64,
    mult: BTreeMap<HalfInteger, u64>,
}

impl WeightMultiplicities {
    /// Checks `Σm = dim`, `Σk·m = 12·Tr L` and the support window.
    pub fn new(dim: u64, mult: BTreeMap<HalfInteger, u64>, tr_l: &Rational) -> Result<Self> {
        let mut full = BTreeMap::new();
        for k2 in 0..=MAX_WEIGHT_DOUBLED {
            full.insert(HalfInteger::from_doubled(k2), 0);
        }
        for (k, m) in mult {
            if !(0..=MAX_WEIGHT_DOUBLED).contains(&k.doubled()) {
                if m != 0 {
                    return Err(Error::Mismatch(format!("generator weight {k} outside [0, 23/2]")));
                }
                continue;
            }
            full.insert(k, m);
        }
        let w = Self { dim, mult: full };
        if w.total() != dim {
            return Err(Error::Mismatch(format!("Σm = {} but dim = {dim}", w.total())));
        }
        let expected = tr_l * arith::rat_int(12);
        if w.weighted_sum() != expected {
            return Err(Error::Mismatch(format!(
                "Σk·m = {} but 12·Tr L = {expected}",
                w.weighted_sum()
            )));
        }
        Ok(w)
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn get(&self, k: HalfInteger) -> u64 {
        self.mult.get(&k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (HalfInteger, u64)> + '_ {
        self.mult.iter().map(|(k, m)| (*k, *m))
    }

    /// Entries at `1/2, 3/2, …, 23/2`.
    pub fn half_integral(&self) -> Vec<u64> {
        (0..12).map(|i| self.get(HalfInteger::from_doubled(2 * i + 1))).collect()
    }

    pub fn total(&self) -> u64 {
        self.mult.values().sum()
    }

    pub fn weighted_sum(&self) -> Rational {
        self.mult
            .iter()
            .fold(Rational::zero(), |acc, (k, m)| acc + k.to_rational() * arith::rat_int(*m as i64))
    }
}

/// Generating weights of `M(ρ_D)` by inverting `Σ dim M_k t^k · (1−t⁴)(1−t⁶)`.
pub fn generating_weights(module: &FiniteQuadraticModule) -> Result<WeightMultiplicities> {
    generating_weights_with(module, CriticalOptions::default())
}

pub fn generating_weights_with(module: &FiniteQuadraticModule, opts: CriticalOptions) -> Result<WeightMultiplicities> {
    let mut ctx = Context::new(module, opts)?;
    let mut dims = Vec::with_capacity(MAX_WEIGHT_DOUBLED as usize + 1);
    for k2 in 0..=MAX_WEIGHT_DOUBLED {
        match ctx.dim_m(HalfInteger::from_doubled(k2))?.0 {
            Dimension::Known(d) => dims.push(d as i64),
            Dimension::Unknown => return Err(Error::WeightOneUnknown(module.to_string())),
        }
    }
    let mut m = vec![0i64; dims.len()];
    for k2 in 0..dims.len() {
        let below: i64 = (0..k2).map(|j| m[j] * monomial_count((k2 - j) as i64) as i64).sum();
        m[k2] = dims[k2] - below;
        if m[k2] < 0 {
            return Err(Error::Mismatch(format!(
                "negative multiplicity {} at k = {}",
                m[k2],
                HalfInteger::from_doubled(k2 as i64)
            )));
        }
    }
    let mult = m
        .iter()
        .enumerate()
        .map(|(k2, &v)| (HalfInteger::from_doubled(k2 as i64), v as u64))
        .collect();
    WeightMultiplicities::new(module.size(), mult, &weilrep::trace_exponents(module, ExponentChoice::Standard))
}

/// Coefficients of `(Σ_j t^{k_j}) / ((1 − t⁴)(1 − t⁶))` at `k = 0, 1/2, …, up_to`.
pub fn poincare_series(weights: &WeightMultiplicities, up_to: HalfInteger) -> Vec<(HalfInteger, u64)> {
    (0..=up_to.doubled())
        .map(|k2| {
            let c = weights
                .iter()
                .map(|(j, m)| m * monomial_count(k2 - j.doubled()))
                .sum();
            (HalfInteger::from_doubled(k2), c)
        })
        .collect()
}
