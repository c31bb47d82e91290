//! The oracle suite behind `weilweights verify`.

use rayon::prelude::*;
use serde_json::{json, Value};
use weilweights::arith::{self, is_prime, HalfInteger};
use weilweights::cyclotomic::Cyclotomic;
use weilweights::dims::{self, WeilData};
use weilweights::family::{self, FamilyParams};
use weilweights::quadmod::{parse_module, FiniteQuadraticModule};
use weilweights::weilrep::{self, ExponentChoice, WeilRep};
use weilweights::Result;

/// Largest `2p^r` for the `O(p^r)` brute-force sums.
pub const BRUTE_LIMIT: u64 = 20_000_000;

/// Modules whose Weil representation is checked as matrices.
const RELATION_CORPUS: &[&str] = &[
    "0", "Am(2)", "Am(4)", "Am(6)", "Am(10)", "A(3,1)", "A(5,1)", "A(7,1)", "A(2,1)+A(7,1)", "A(4,3)", "A(9,2)",
    "B(2)", "C(2)", "A(3,1)+A(3,1)^-1",
];

pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "passed": self.passed(),
        })
    }
}

/// Runs `f` on every case in parallel; failures come back in case order.
fn check<T: Sync>(name: &'static str, cases: &[T], f: impl Fn(&T) -> Result<Option<String>> + Sync) -> Check {
    let failures: Vec<String> = cases
        .par_iter()
        .map(|c| match f(c) {
            Ok(v) => v,
            Err(e) => Some(e.to_string()),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Check {
        name,
        cases: cases.len(),
        failures,
    }
}

fn grid(p_min: u64, p_max: u64, r_max: u32) -> Vec<FamilyParams> {
    let mut out = Vec::new();
    for p in (p_min.max(3)..=p_max).filter(|&p| is_prime(p)) {
        for r in 1..=r_max {
            match FamilyParams::new(p, r) {
                Ok(f) if f.dim() <= BRUTE_LIMIT => out.push(f),
                _ => break,
            }
        }
    }
    out
}

fn mismatch(f: &FamilyParams, what: &str, a: impl std::fmt::Display, b: impl std::fmt::Display) -> Option<String> {
    Some(format!("({},{}) {what}: {a} ≠ {b}", f.p, f.r))
}

fn closed_forms(f: &FamilyParams) -> Result<Option<String>> {
    let (p, r) = (f.p, f.r);
    let pairs = [
        ("Σ{x²/p^r}", family::sum_sq_fracs(p, r)?, family::sum_sq_fracs_brute(p, r)?),
        ("Σ{x²/4p^r} odd", family::sum_odd_fracs(p, r)?, family::sum_odd_fracs_brute(p, r)?),
        ("Tr L", family::tr_l_closed(p, r)?, family::tr_l_brute(p, r)?),
    ];
    Ok(pairs
        .into_iter()
        .find(|(_, a, b)| a != b)
        .and_then(|(w, a, b)| mismatch(f, w, a, b)))
}

fn class_number_cases(p: &u64) -> Result<Option<String>> {
    let (hs, hc) = (arith::h_star(*p)?, family::h_star_cases(*p)?);
    if hs != hc {
        return Ok(Some(format!("h*_{p}: {hs} ≠ {hc}")));
    }
    let (hp, hc) = (arith::h_prime(*p)?, family::h_prime_cases(*p)?);
    Ok((hp != hc).then(|| format!("h'_{p}: {hp} ≠ {hc}")))
}

fn dual_path(f: &FamilyParams) -> Result<Option<String>> {
    let table = family::table_multiplicities(f.p, f.r)?;
    let euler = dims::generating_weights(&f.module()?)?;
    if table != euler {
        return Ok(mismatch(f, "weights", format!("{:?}", table.half_integral()), format!("{:?}", euler.half_integral())));
    }
    let hi = table.half_integral();
    if hi[0] != 0 || hi[11] != 0 {
        return Ok(mismatch(f, "(m_1/2, m_23/2)", format!("({}, {})", hi[0], hi[11]), "(0, 0)"));
    }
    Ok(None)
}

fn critical(f: &FamilyParams) -> Result<Option<String>> {
    let d = f.module()?;
    let m = dims::skoruppa_weight_half(&d)?;
    if m != 0 {
        return Ok(mismatch(f, "dim M_1/2", m, 0));
    }
    let s = dims::dim_s_half_dual(&d)?;
    if s != 0 {
        return Ok(mismatch(f, "dim S_1/2(ρ*)", s, 0));
    }
    let dual = d.negated();
    let group = dual.orthogonal_group()?;
    Ok((!group.is_plus_minus_one(&dual)).then(|| format!("({},{}) |O(D⁻¹)| = {}", f.p, f.r, group.order())))
}

fn gauss_facts(f: &FamilyParams) -> Result<Option<String>> {
    let d = f.module()?;
    let omega = d.gauss_sum(1);
    if !omega.pow(8).is_one() {
        return Ok(mismatch(f, "Ω(1)⁸", omega.pow(8), 1));
    }
    let sig = d.signature()?;
    if sig != 1 {
        return Ok(mismatch(f, "sig", sig, 1));
    }
    let ts = weilrep::trace_s_power(&d, 1)?;
    if !ts.is_zero() {
        return Ok(mismatch(f, "Tr ρ(S)", ts, 0));
    }
    let tr2 = weilrep::trace_r_power(&d, 2)?;
    let expected = Cyclotomic::from_integer(1, arith::kronecker(f.pr() as i64, 3) as i64);
    Ok((tr2 != expected).then(|| format!("({},{}) Tr ρ(R²): {tr2} ≠ {expected}", f.p, f.r)))
}

fn relations(d: &FiniteQuadraticModule) -> Result<Option<String>> {
    let rep = WeilRep::build(d)?;
    let s = rep.rho_s();
    let z = rep.rho_z();
    let failed = if s.mul(s) != z {
        Some("ρ(S)² ≠ ρ(Z)")
    } else if !z.pow(4).is_identity() {
        Some("ρ(Z)⁴ ≠ I")
    } else if rep.element("STSTST")? != z {
        Some("(ρ(S)ρ(T))³ ≠ ρ(Z)")
    } else if !s.mul(&s.conj_transpose()).is_identity() {
        Some("ρ(S) not unitary")
    } else {
        None
    };
    Ok(failed.map(|w| format!("{d}: {w}")))
}

/// `χ` is an integer at every admissible weight in `[-2, 12]`, for both exponent choices.
fn integrality(d: &FiniteQuadraticModule) -> Result<Option<String>> {
    let sig = d.signature()? as i64;
    for choice in [ExponentChoice::Standard, ExponentChoice::Cuspidal] {
        let data = WeilData::new(d, choice)?;
        for k2 in (-4..=24).filter(|k2| (k2 + sig) % 2 == 0) {
            dims::euler_char_data(&data, HalfInteger::from_doubled(k2))?;
        }
    }
    Ok(None)
}

pub fn run(p_max: u64, r_max: u32) -> Result<Vec<Check>> {
    let odd = grid(3, p_max, r_max);
    let table = grid(5, p_max, r_max);
    let primes: Vec<u64> = (3..=p_max).filter(|&p| is_prime(p)).collect();
    let corpus: Vec<FiniteQuadraticModule> = RELATION_CORPUS.iter().map(|s| parse_module(s)).collect::<Result<_>>()?;
    let small: Vec<FiniteQuadraticModule> = corpus.iter().filter(|d| d.size() <= 14).cloned().collect();
    let mut with_family = corpus.clone();
    for f in &table {
        with_family.push(f.module()?);
    }
    Ok(vec![
        check("closed-forms", &odd, closed_forms),
        check("class-number-cases", &primes, class_number_cases),
        check("dual-path-weights", &table, dual_path),
        check("critical-weights", &table, critical),
        check("gauss-sums", &table, gauss_facts),
        check("representation-relations", &small, relations),
        check("euler-integrality", &with_family, integrality),
    ])
}
