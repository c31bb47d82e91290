//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every oracle here is a direct loop written in this file; library brute-force
//! helpers are not reused.

use std::f64::consts::TAU;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use weilweights::arith::{self, is_prime, rat, HalfInteger, Rational};
use weilweights::dims::{self, CriticalOptions, WeilData};
use weilweights::family;
use weilweights::quadmod::{parse_module, FiniteQuadraticModule};
use weilweights::weilrep::{self, ExponentChoice, WeilRep};

const TRACE_GRID_BUDGET: Duration = Duration::from_secs(30);
const LIMIT_TOLERANCE: f64 = 0.005;
const LIMIT_BUDGET: Duration = Duration::from_secs(1);
/// Largest `|A⁻¹_{2l} ⊕ D| = 8p^{2r}` (at `l = p^r`) run without pruning; (17,1) already takes ~30 s.
const FULL_INVARIANTS_MAX: u64 = 1352;
/// Relative tolerance of the floating-point Gauss-sum oracles.
const FLOAT_TOLERANCE: f64 = 1e-9;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn m(s: &str) -> FiniteQuadraticModule {
    parse_module(s).unwrap()
}

fn corpus() -> Vec<FiniteQuadraticModule> {
    [
        "0", "Am(2)", "Am(4)", "Am(6)", "Am(10)", "A(3,1)", "A(5,1)", "A(7,1)", "A(2,1)+A(7,1)", "A(4,3)", "A(9,2)",
        "A(8,1)", "A(16,3)", "B(2)", "B(4)", "C(2)", "C(4)", "A(5,1)^-1", "A(3,1)+A(3,1)^-1", "A2pr(3,1)", "A(25,2)",
        "A(2,1)+A(3,1)+A(5,1)",
    ]
    .iter()
    .map(|s| m(s))
    .collect()
}

fn primes(lo: u64, hi_exclusive: u64) -> Vec<u64> {
    (lo..hi_exclusive).filter(|&p| is_prime(p)).collect()
}

/// `(p, r)` with `5 ≤ p < 200` and `r ≤ 3`.
fn trace_grid() -> Vec<(u64, u32)> {
    primes(5, 200).into_iter().flat_map(|p| (1..=3).map(move |r| (p, r))).collect()
}

fn frac_sum(numerator: u128, den: u64) -> Rational {
    Rational::new(BigInt::from(numerator), BigInt::from(den))
}

/// `Σ_{x=1}^{2p^r} {−x²/4p^r}`.
fn brute_tr_l(p: u64, r: u32) -> Rational {
    let pr = p.pow(r);
    let n = 4 * pr;
    let s: u128 = (1..=2 * pr).map(|x| ((n - x * x % n) % n) as u128).sum();
    frac_sum(s, n)
}

/// `Σ_{x mod p^r} {x²/p^r}`.
fn brute_sum_sq(p: u64, r: u32) -> Rational {
    let n = p.pow(r);
    frac_sum((0..n).map(|x| (x * x % n) as u128).sum(), n)
}

/// `Σ_{0<x<2p^r, x odd} {x²/4p^r}`.
fn brute_sum_odd(p: u64, r: u32) -> Rational {
    let pr = p.pow(r);
    let n = 4 * pr;
    frac_sum((1..2 * pr).step_by(2).map(|x| (x * x % n) as u128).sum(), n)
}

/// `Σ_{x mod c} e(a·x²/c)` in floating point.
fn float_gauss(a: i64, c: u64) -> (f64, f64) {
    (0..c).fold((0.0, 0.0), |(re, im), x| {
        let t = TAU * ((a as i128 * (x * x) as i128).rem_euclid(c as i128)) as f64 / c as f64;
        (re + t.cos(), im + t.sin())
    })
}

fn limit() -> [f64; 12] {
    [0, 1, 3, 5, 7, 8, 8, 7, 5, 3, 1, 0].map(|n| n as f64 / 48.0)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let grid = trace_grid();
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|&(p, r)| {
            let closed = family::tr_l_closed(p, r).unwrap();
            let brute = brute_tr_l(p, r);
            (closed != brute).then(|| format!("({p},{r}): {closed} vs {brute}"))
        })
        .collect();
    let elapsed = start.elapsed();
    ensure(bad.is_empty(), || bad.join("; "))?;
    ensure(elapsed < TRACE_GRID_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} pairs exact, {:.1} s", grid.len(), elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut grid = trace_grid();
    grid.push((3, 2));
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|&(p, r)| {
            let sq = family::sum_sq_fracs(p, r).unwrap();
            let odd = family::sum_odd_fracs(p, r).unwrap();
            if sq != brute_sum_sq(p, r) {
                Some(format!("Σ{{x²/p^r}} at ({p},{r})"))
            } else if odd != brute_sum_odd(p, r) {
                Some(format!("Σ odd at ({p},{r})"))
            } else {
                None
            }
        })
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    ensure(family::h_star_cases(3).unwrap() == rat(1, 3), || "h*_3 ≠ 1/3".into())?;
    Ok(format!("{} pairs including (3,2)", grid.len()))
}

fn criterion_3() -> Outcome {
    let h1 = arith::class_number(1151).map_err(|e| e.to_string())?.h;
    let h2 = arith::class_number(101281).map_err(|e| e.to_string())?.h;
    ensure((h1, h2) == (41, 168), || format!("h = ({h1}, {h2})"))?;
    let odd = primes(3, 501);
    for &p in &odd {
        ensure(arith::h_star(p).unwrap() == family::h_star_cases(p).unwrap(), || format!("h*_{p}"))?;
        ensure(arith::h_prime(p).unwrap() == family::h_prime_cases(p).unwrap(), || format!("h'_{p}"))?;
    }
    Ok(format!("h_1151 = 41, h_101281 = 168, {} primes ≤ 500", odd.len()))
}

fn criterion_4() -> Outcome {
    for p in [5u64, 7, 11, 13] {
        for r in [1u32, 2] {
            let table = family::table_multiplicities(p, r).map_err(|e| e.to_string())?;
            let d = FiniteQuadraticModule::a2pr(p, r).unwrap();
            let euler = dims::generating_weights(&d).map_err(|e| e.to_string())?;
            for k2 in 0..=23 {
                let k = HalfInteger::from_doubled(k2);
                ensure(table.get(k) == euler.get(k), || {
                    format!("({p},{r}) at k = {k}: {} vs {}", table.get(k), euler.get(k))
                })?;
            }
        }
    }
    let w = family::table_multiplicities(5, 1).unwrap();
    let expected = [(7, 1), (9, 1), (11, 2), (13, 1), (15, 2), (17, 1), (19, 1), (21, 1)];
    for k2 in 0..=23 {
        let want = expected.iter().find(|e| e.0 == k2).map_or(0, |e| e.1);
        ensure(w.get(HalfInteger::from_doubled(k2)) == want, || format!("(5,1) at 2k = {k2}"))?;
    }
    let total: u64 = (0..=23).map(|k2| w.get(HalfInteger::from_doubled(k2))).sum();
    let weighted: i64 = (0..=23).map(|k2| k2 * w.get(HalfInteger::from_doubled(k2)) as i64).sum();
    ensure(total == 10 && weighted == 138, || format!("Σm = {total}, Σ2k·m = {weighted}"))?;
    ensure(rat(weighted, 2) == rat(12, 1) * rat(23, 4), || "69 ≠ 12·23/4".into())?;
    Ok("8 pairs entry-by-entry, (5,1): Σm = 10, Σk·m = 69".into())
}

fn criterion_5() -> Outcome {
    let mut grid: Vec<(u64, u32)> = primes(5, 2000).into_iter().flat_map(|p| [(p, 1), (p, 2)]).collect();
    grid.extend(primes(5, 200).into_iter().map(|p| (p, 3)));
    let bad: Vec<String> = grid
        .par_iter()
        .filter_map(|&(p, r)| {
            let w = family::table_multiplicities(p, r).unwrap();
            let ms: Vec<u64> = (0..=23).map(|k2| w.get(HalfInteger::from_doubled(k2))).collect();
            let total: u64 = ms.iter().sum();
            let weighted = ms
                .iter()
                .enumerate()
                .fold(Rational::from_integer(0.into()), |acc, (k2, &m)| acc + rat(k2 as i64, 2) * rat(m as i64, 1));
            let tr = family::tr_l_closed(p, r).unwrap();
            if total != 2 * p.pow(r) {
                Some(format!("({p},{r}) Σm = {total}"))
            } else if weighted != rat(12, 1) * tr {
                Some(format!("({p},{r}) Σk·m = {weighted}"))
            } else if ms[1] != 0 || ms[23] != 0 {
                Some(format!("({p},{r}) m_1/2 = {}, m_23/2 = {}", ms[1], ms[23]))
            } else {
                None
            }
        })
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let mut general = 0;
    for d in corpus() {
        let w = match dims::generating_weights(&d) {
            Ok(w) => w,
            Err(weilweights::Error::WeightOneUnknown(_)) => continue,
            Err(e) => return Err(format!("{d}: {e}")),
        };
        let tr = weilrep::trace_exponents(&d, ExponentChoice::Standard);
        let total: u64 = (0..=23).map(|k2| w.get(HalfInteger::from_doubled(k2))).sum();
        let weighted = (0..=23).fold(Rational::from_integer(0.into()), |acc, k2| {
            acc + rat(k2, 2) * rat(w.get(HalfInteger::from_doubled(k2)) as i64, 1)
        });
        ensure(total == d.size(), || format!("{d}: Σm = {total}"))?;
        ensure(weighted == rat(12, 1) * tr, || format!("{d}: Σk·m = {weighted}"))?;
        general += 1;
    }
    Ok(format!("{} family tables, {general} general modules", grid.len()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let w = family::table_multiplicities(101281, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let dim = 2.0 * 101281.0;
    let dev = w
        .half_integral()
        .iter()
        .zip(limit())
        .map(|(&m, l)| (m as f64 / dim - l).abs())
        .fold(0.0, f64::max);
    ensure(dev <= LIMIT_TOLERANCE, || format!("deviation {dev}"))?;
    ensure(elapsed < LIMIT_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("max deviation {dev:.6} ≤ {LIMIT_TOLERANCE}, {} ms", elapsed.as_millis()))
}

fn criterion_7() -> Outcome {
    let small: Vec<FiniteQuadraticModule> = corpus().into_iter().filter(|d| d.size() <= 14).collect();
    for name in ["Am(2)", "Am(10)", "A(5,1)", "A(7,1)", "A(2,1)+A(7,1)"] {
        ensure(small.iter().any(|d| *d == m(name)), || format!("{name} missing"))?;
    }
    for d in &small {
        let rep = WeilRep::build(d).map_err(|e| e.to_string())?;
        let s = rep.rho_s();
        let z = rep.rho_z();
        ensure(s.mul(s) == z, || format!("{d}: ρ(S)² ≠ ρ(Z)"))?;
        ensure(z.pow(4).is_identity(), || format!("{d}: ρ(Z)⁴ ≠ I"))?;
        let st = s.mul(&rep.rho_t());
        ensure(st.pow(3) == z, || format!("{d}: (ρ(S)ρ(T))³ ≠ ρ(Z)"))?;
        ensure(s.mul(&s.conj_transpose()).is_identity(), || format!("{d}: ρ(S) not unitary"))?;
    }
    Ok(format!("{} modules with |D| ≤ 14", small.len()))
}

fn criterion_8() -> Outcome {
    let mut mods = corpus();
    let family_grid: Vec<(u64, u32)> = [5u64, 7, 11, 13, 17].iter().flat_map(|&p| [(p, 1), (p, 2)]).collect();
    for &(p, r) in &family_grid {
        mods.push(FiniteQuadraticModule::a2pr(p, r).unwrap());
    }
    for d in &mods {
        ensure(d.gauss_sum(1).pow(8).is_one(), || format!("{d}: Ω(1)⁸ ≠ 1"))?;
    }
    for &(p, r) in &family_grid {
        let d = FiniteQuadraticModule::a2pr(p, r).unwrap();
        let pr = p.pow(r);
        ensure(d.signature().unwrap() == 1, || format!("sig A2pr({p},{r})"))?;
        // Ω(1) = ζ₈ as a direct sum over x mod 2p^r of e(x²/4p^r)
        let (re, im) = float_gauss(1, 4 * pr);
        let (re, im) = (re / 2.0, im / 2.0);
        let sq = (2.0 * pr as f64).sqrt();
        let want = (TAU / 8.0).cos() * sq;
        ensure((re - want).abs() < FLOAT_TOLERANCE * sq && (im - want).abs() < FLOAT_TOLERANCE * sq, || {
            format!("float Ω(1) of A2pr({p},{r}) = {re}+{im}i")
        })?;
        // Tr ρ(S) is a multiple of Σ_{x mod 2p^r} e(−x²/2p^r), which vanishes
        let (re, im) = float_gauss(-1, 2 * pr);
        ensure(re.abs() < FLOAT_TOLERANCE * sq && im.abs() < FLOAT_TOLERANCE * sq, || {
            format!("float Tr ρ(S) of A2pr({p},{r})")
        })?;
        ensure(weilrep::trace_s_power(&d, 1).unwrap().is_zero(), || format!("Tr ρ(S) of A2pr({p},{r})"))?;
        let legendre3 = match pr % 3 {
            0 => 0,
            1 => 1,
            _ => -1,
        };
        let want = weilweights::cyclotomic::Cyclotomic::from_integer(1, legendre3);
        ensure(weilrep::trace_r_power(&d, 2).unwrap() == want, || format!("Tr ρ(R²) of A2pr({p},{r})"))?;
        if d.size() <= weilrep::DEFAULT_MATRIX_BOUND {
            let rep = WeilRep::build(&d).unwrap();
            ensure(rep.rho_s().trace().is_zero(), || format!("matrix Tr ρ(S), A2pr({p},{r})"))?;
            let r2 = rep.element("STST").unwrap();
            ensure(r2.trace() == want, || format!("matrix Tr ρ(R²), A2pr({p},{r})"))?;
        }
    }
    Ok(format!("{} modules, {} family pairs", mods.len(), family_grid.len()))
}

fn criterion_9() -> Outcome {
    let grid: Vec<(u64, u32)> = primes(3, 51).into_iter().flat_map(|p| [(p, 1), (p, 2)]).collect();
    let full = CriticalOptions {
        prune: false,
        orthogonal_shortcut: false,
        ..CriticalOptions::default()
    };
    let results: Vec<Result<bool, String>> = grid
        .par_iter()
        .map(|&(p, r)| {
            let d = FiniteQuadraticModule::a2pr(p, r).unwrap();
            let tag = |e: weilweights::Error| format!("A2pr({p},{r}): {e}");
            let pruned = (dims::skoruppa_weight_half(&d).map_err(tag)?, dims::dim_s_half_dual(&d).map_err(tag)?);
            if pruned != (0, 0) {
                return Err(format!("A2pr({p},{r}) pruned: {pruned:?}"));
            }
            let dual = d.negated();
            let group = dual.orthogonal_group().map_err(tag)?;
            if !group.is_plus_minus_one(&dual) {
                return Err(format!("|O(A2pr({p},{r})⁻¹)| = {}", group.order()));
            }
            if 8 * p.pow(2 * r) > FULL_INVARIANTS_MAX {
                return Ok(false);
            }
            let a = dims::skoruppa_weight_half_report(&d, full);
            let b = dims::dim_s_half_dual_report(&d, full);
            match (a, b) {
                (Ok(a), Ok(b)) if a.value == 0 && b.value == 0 => Ok(true),
                (Ok(a), Ok(b)) => Err(format!("A2pr({p},{r}) full: ({}, {})", a.value, b.value)),
                (Err(weilweights::Error::Resource(_)), _) | (_, Err(weilweights::Error::Resource(_))) => Ok(false),
                (Err(e), _) | (_, Err(e)) => Err(tag(e)),
            }
        })
        .collect();
    let mut full_count = 0;
    for r in results {
        full_count += r? as usize;
    }
    ensure(full_count > 0, || "no pair fit the full invariants computation".into())?;
    Ok(format!(
        "{} pairs pruned to 0, O = {{±1}}; {full_count} also by full invariants",
        grid.len()
    ))
}

fn criterion_10() -> Outcome {
    let mut mods = corpus();
    for p in primes(3, 50) {
        for r in [1u32, 2] {
            mods.push(FiniteQuadraticModule::a2pr(p, r).unwrap());
        }
    }
    let mut pairs = 0;
    for d in &mods {
        let sig = d.signature().unwrap() as i64;
        let admissible: Vec<i64> = (-8..=30).filter(|k2| (k2 + sig) % 2 == 0).collect();
        for choice in [ExponentChoice::Standard, ExponentChoice::Cuspidal] {
            let data = WeilData::new(d, choice).unwrap();
            let small = (d.size() <= 100).then(|| weilrep::exponents(d, choice));
            for &k2 in &admissible {
                let k = HalfInteger::from_doubled(k2);
                let chi = dims::euler_char_data(&data, k).map_err(|e| format!("{d} at k = {k}: {e}"))?;
                if let Some(l) = &small {
                    let again = dims::euler_char(d, k, l).map_err(|e| format!("{d} at k = {k}: {e}"))?;
                    ensure(again == chi, || format!("{d} at k = {k}: {again} vs {chi}"))?;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} (module, k, exponents) triples integral"))
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let rows = family::distribution_scan(&[1151, 101281], 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(rows[0].class_number == 41 && rows[1].class_number == 168, || "class numbers".into())?;
    for row in &rows {
        let total = row.normalized.iter().fold(Rational::from_integer(0.into()), |a, b| a + b);
        ensure(total == rat(1, 1), || format!("p = {}: Σ m_k/2p = {total}", row.p))?;
    }
    ensure(rows[1].deviation < rows[0].deviation, || "no convergence from 1151 to 101281".into())?;
    // at r = 1 the brute trace is cheap even at this scale
    for p in [1151u64, 101281] {
        ensure(family::tr_l_closed(p, 1).unwrap() == brute_tr_l(p, 1), || format!("Tr L at {p}"))?;
    }
    Ok(format!("p = 1151, 101281 via closed forms in {} ms", elapsed.as_millis()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("trace oracle", criterion_1),
        ("fractional-sum oracles", criterion_2),
        ("class numbers", criterion_3),
        ("dual-path dimensions", criterion_4),
        ("structure identities", criterion_5),
        ("limiting distribution", criterion_6),
        ("representation relations", criterion_7),
        ("gauss-sum facts", criterion_8),
        ("critical weights", criterion_9),
        ("integrality tripwire", criterion_10),
        ("full-scale distribution", criterion_11),
    ];
    let mut failed = 0;
    let mut err = std::io::stderr();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let line = match &outcome {
            Ok(detail) => format!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                format!("FAIL {:>2} {name}: {detail}", i + 1)
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    writeln!(err, "acceptance: {} passed, {failed} failed", criteria.len() - failed).unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
