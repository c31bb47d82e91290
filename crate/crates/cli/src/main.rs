use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::{json, Map, Value};
use weilweights::arith::{self, HalfInteger, Rational};
use weilweights::dims::{self, Dimension, WeightMultiplicities, WeilData};
use weilweights::family::{self, FamilyParams};
use weilweights::quadmod::{parse_module, FiniteQuadraticModule};
use weilweights::weilrep::{self, ExponentChoice};
use weilweights::{Error, Result};

mod output;
mod verify;

use output::{decimal, rational, Outcome, EXIT_MISMATCH, EXIT_UNKNOWN};

/// Largest `|D|` summed over directly for a Gauss sum.
const GAUSS_SUM_LIMIT: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "weilweights", version, about = "Generating weights of vector-valued modular forms for Weil representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Report timing_ms = 0, for byte-reproducible JSON.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ω_D(a) = |D|^{-1/2} Σ e(a·q(x)).
    GaussSum {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a: i64,
    },
    /// Generator weights of M(ρ_D) over M_*(SL₂(ℤ)).
    Weights(WeightsArgs),
    /// Tr L for A_{2p^r}.
    TraceExponents {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, value_enum, default_value_t = TraceMethod::Closed)]
        method: TraceMethod,
    },
    /// Class number of ℚ(√−p).
    ClassNumber {
        #[arg(long)]
        p: u64,
    },
    /// Euler characteristic of the weight-k bundle.
    EulerChar {
        #[arg(long)]
        module: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: HalfInteger,
    },
    /// dim M_k(ρ_D) and dim S_k(ρ_D).
    Dim {
        #[arg(long)]
        module: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: HalfInteger,
    },
    /// dim ℂ[D]^{Mp₂(ℤ)}.
    Invariants {
        #[arg(long)]
        module: String,
    },
    /// m_k/2p^r against the limiting distribution, as CSV.
    Distribution {
        /// Comma-separated primes or ranges, e.g. "5,7,100..200".
        #[arg(long)]
        primes: String,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed forms against brute force, dual-path weights and group relations.
    Verify {
        #[arg(long, default_value_t = 50)]
        p_max: u64,
        #[arg(long, default_value_t = 2)]
        r_max: u32,
    },
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long, conflicts_with = "module", required_unless_present = "module")]
    p: Option<u64>,
    #[arg(long, default_value_t = 1, requires = "p")]
    r: u32,
    #[arg(long)]
    module: Option<String>,
    /// Defaults to `table` for --p and `euler` for --module.
    #[arg(long, value_enum)]
    method: Option<WeightMethod>,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightMethod {
    Table,
    Euler,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceMethod {
    Closed,
    Brute,
    Both,
}

fn inputs(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn gauss_sum(spec: &str, a: i64) -> Result<Outcome> {
    let d = parse_module(spec)?;
    if d.size() > GAUSS_SUM_LIMIT {
        return Err(Error::Resource(format!("|D| = {} exceeds {GAUSS_SUM_LIMIT}", d.size())));
    }
    let omega = d.gauss_sum(a);
    let z = omega.approx();
    let mut results = json!({
        "value": omega.to_string(),
        "approx": {"re": format!("{:.12}", z.re), "im": format!("{:.12}", z.im)},
    });
    let mut text = format!("Ω({a}) = {omega}\n≈ {:.12} {:+.12}i\n", z.re, z.im);
    if a == 1 {
        let sig = weilrep_signature(&omega, &d)?;
        results["signature"] = sig.into();
        text.push_str(&format!("sig = {sig}\n"));
    }
    Ok(Outcome::ok(
        inputs(&[("module", d.to_string().into()), ("a", a.into())]),
        results,
        text,
    ))
}

fn weilrep_signature(omega: &weilweights::cyclotomic::Cyclotomic, d: &FiniteQuadraticModule) -> Result<u8> {
    weilweights::quadmod::signature_of(omega)
        .ok_or_else(|| Error::Degenerate(format!("Ω(1) of {d} is not an eighth root of unity")))
}

/// Rows at the weights `k` with `2k ≡ sig (mod 2)`.
fn weight_rows(w: &WeightMultiplicities, parity: i64) -> Vec<(i64, u64, Rational)> {
    (0..=dims::MAX_WEIGHT_DOUBLED)
        .filter(|k2| k2 % 2 == parity)
        .map(|k2| {
            let m = w.get(HalfInteger::from_doubled(k2));
            (k2, m, arith::rat(m as i64, 1) / arith::rat(w.dim() as i64, 1))
        })
        .collect()
}

fn weights_json(w: &WeightMultiplicities, parity: i64) -> Value {
    let rows: Vec<Value> = weight_rows(w, parity)
        .into_iter()
        .map(|(k2, m, n)| {
            json!({
                "weight": HalfInteger::from_doubled(k2).to_string(),
                "weight_2k": k2,
                "multiplicity": m,
                "normalized": rational(&n),
            })
        })
        .collect();
    json!({
        "rows": rows,
        "total": w.total(),
        "weighted_sum": rational(&w.weighted_sum()),
    })
}

fn weights(args: &WeightsArgs, csv_out: bool) -> Result<Outcome> {
    let family = args.p.map(|p| FamilyParams::new(p, args.r)).transpose()?;
    let (module, label, parity) = match (&family, &args.module) {
        (Some(f), _) => (f.module()?, format!("A2pr({},{})", f.p, f.r), 1),
        (None, Some(spec)) => {
            let d = parse_module(spec)?;
            let sig = d.signature()? as i64;
            let label = d.to_string();
            (d, label, sig % 2)
        }
        (None, None) => return Err(Error::InvalidParameter("give --p or --module".into())),
    };
    let method = args.method.unwrap_or(if family.is_some() { WeightMethod::Table } else { WeightMethod::Euler });
    let table = match (method, &family) {
        (WeightMethod::Euler, _) => None,
        (_, Some(f)) => Some(family::table_multiplicities(f.p, f.r)?),
        (_, None) => return Err(Error::InvalidParameter("the table method needs --p/--r".into())),
    };
    let euler = match method {
        WeightMethod::Table => None,
        _ => Some(dims::generating_weights(&module)?),
    };
    let agree = match (&table, &euler) {
        (Some(t), Some(e)) => Some(t == e),
        _ => None,
    };
    let shown = table.as_ref().or(euler.as_ref()).expect("at least one method ran");

    let mut results = Map::new();
    results.insert("module".into(), label.clone().into());
    results.insert("dim".into(), module.size().into());
    if let Some(t) = &table {
        results.insert("table".into(), weights_json(t, parity));
    }
    if let Some(e) = &euler {
        results.insert("euler".into(), weights_json(e, parity));
    }
    if let Some(a) = agree {
        results.insert("agree".into(), a.into());
    }

    let mut text = String::new();
    if csv_out {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["weight_2k", "multiplicity", "normalized"];
        if agree.is_some() {
            header.push("agree");
        }
        wtr.write_record(&header).map_err(io_error)?;
        for (k2, m, n) in weight_rows(shown, parity) {
            let mut row = vec![k2.to_string(), m.to_string(), decimal(&n, 10)];
            if let Some(a) = agree {
                row.push(a.to_string());
            }
            wtr.write_record(&row).map_err(io_error)?;
        }
        text = String::from_utf8(wtr.into_inner().map_err(|e| io_error(e.into_error()))?).expect("utf-8");
    } else {
        text.push_str(&format!("module {label}  dim {}\n", module.size()));
        text.push_str(&format!("{:>4} {:>6} {:>6} {:>12}\n", "2k", "k", "m_k", "m_k/dim"));
        for (k2, m, n) in weight_rows(shown, parity) {
            let k = HalfInteger::from_doubled(k2).to_string();
            text.push_str(&format!("{k2:>4} {k:>6} {m:>6} {:>12}\n", decimal(&n, 6)));
        }
        text.push_str(&format!("Σm = {}  Σk·m = {}\n", shown.total(), shown.weighted_sum()));
        if let Some(a) = agree {
            text.push_str(&format!("agree: {a}\n"));
        }
    }
    let mut out = Outcome::ok(
        inputs(&[
            ("p", json!(args.p)),
            ("r", json!(args.p.map(|_| args.r))),
            ("module", json!(args.module)),
            (
                "method",
                match method {
                    WeightMethod::Table => "table",
                    WeightMethod::Euler => "euler",
                    WeightMethod::Both => "both",
                }
                .into(),
            ),
        ]),
        Value::Object(results),
        text,
    );
    if agree == Some(false) {
        out.code = EXIT_MISMATCH;
    }
    Ok(out)
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Resource(format!("write failed: {e}"))
}

fn trace_exponents(p: u64, r: u32, method: TraceMethod) -> Result<Outcome> {
    let f = FamilyParams::new(p, r)?;
    let closed = match method {
        TraceMethod::Brute => None,
        _ => Some(family::tr_l_closed(p, r)?),
    };
    let brute = match method {
        TraceMethod::Closed => None,
        _ => {
            if f.dim() > verify::BRUTE_LIMIT {
                return Err(Error::Resource(format!(
                    "brute force over 2p^r = {} elements exceeds {}",
                    f.dim(),
                    verify::BRUTE_LIMIT
                )));
            }
            Some(family::tr_l_brute(p, r)?)
        }
    };
    let agree = match (&closed, &brute) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let mut results = Map::new();
    let mut text = String::new();
    if let Some(c) = &closed {
        results.insert("closed".into(), rational(c));
        text.push_str(&format!("closed {c}\n"));
    }
    if let Some(b) = &brute {
        results.insert("brute".into(), rational(b));
        text.push_str(&format!("brute  {b}\n"));
    }
    if let Some(a) = agree {
        results.insert("agree".into(), a.into());
        text.push_str(&format!("agree  {a}\n"));
    }
    let name = match method {
        TraceMethod::Closed => "closed",
        TraceMethod::Brute => "brute",
        TraceMethod::Both => "both",
    };
    let mut out = Outcome::ok(
        inputs(&[("p", p.into()), ("r", r.into()), ("method", name.into())]),
        Value::Object(results),
        text,
    );
    if agree == Some(false) {
        out.code = EXIT_MISMATCH;
    }
    Ok(out)
}

fn class_number(p: u64) -> Result<Outcome> {
    let c = arith::class_number(p)?;
    Ok(Outcome::ok(
        inputs(&[("p", p.into())]),
        json!({"class_number": c.h, "discriminant": c.discriminant}),
        format!("h({}) = {}\n", c.discriminant, c.h),
    ))
}

fn euler_char(spec: &str, k: HalfInteger) -> Result<Outcome> {
    let d = parse_module(spec)?;
    let chi = dims::euler_char_data(&WeilData::new(&d, ExponentChoice::Standard)?, k)?;
    let cusp = dims::euler_char_data(&WeilData::new(&d, ExponentChoice::Cuspidal)?, k)?;
    Ok(Outcome::ok(
        inputs(&[("module", d.to_string().into()), ("weight", k.to_string().into())]),
        json!({"euler_char": chi, "euler_char_cuspidal": cusp}),
        format!("χ = {chi}\nχ_cusp = {cusp}\n"),
    ))
}

fn dim(spec: &str, k: HalfInteger) -> Result<Outcome> {
    let d = parse_module(spec)?;
    let rep = dims::dim_m(&d, k)?;
    let show = |x: Dimension| match x {
        Dimension::Known(n) => json!(n),
        Dimension::Unknown => Value::Null,
    };
    let mut out = Outcome::ok(
        inputs(&[("module", d.to_string().into()), ("weight", k.to_string().into())]),
        json!({
            "dim_m": show(rep.dim_m),
            "dim_s": show(rep.dim_s),
            "euler_char": rep.euler_char,
            "method": rep.method.as_str(),
        }),
        format!(
            "dim M_{k} = {}\ndim S_{k} = {}\nmethod = {}\n",
            rep.dim_m, rep.dim_s, rep.method
        ),
    );
    if rep.dim_m == Dimension::Unknown || rep.dim_s == Dimension::Unknown {
        out.code = EXIT_UNKNOWN;
    }
    Ok(out)
}

fn invariants(spec: &str) -> Result<Outcome> {
    let d = parse_module(spec)?;
    let n = weilrep::invariants_dim(&d, &[])?;
    Ok(Outcome::ok(
        inputs(&[("module", d.to_string().into())]),
        json!({"dim": n}),
        format!("dim Inv = {n}\n"),
    ))
}

/// `"5,7,100..200"`: explicit entries must be prime, ranges keep primes `≥ 5`.
fn parse_primes(list: &str) -> Result<Vec<u64>> {
    let bad = |item: &str| Error::Parse {
        pos: 0,
        msg: format!("bad prime list entry {item:?}"),
    };
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad(item))?;
            let b: u64 = b.trim().parse().map_err(|_| bad(item))?;
            out.extend((a.max(5)..=b).filter(|&p| arith::is_prime(p)));
        } else {
            out.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    if out.is_empty() {
        return Err(bad(list));
    }
    Ok(out)
}

fn distribution(primes: &str, r: u32, out: Option<&PathBuf>, json_out: bool) -> Result<Outcome> {
    let primes = parse_primes(primes)?;
    let rows = family::distribution_scan(&primes, r)?;
    let limit = family::limit_distribution();

    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["p", "weight_2k", "multiplicity", "normalized", "limit", "deviation"])
        .map_err(io_error)?;
    for row in &rows {
        for (i, (m, n)) in row.multiplicities.iter().zip(&row.normalized).enumerate() {
            let dev = (n - &limit[i]).abs();
            wtr.write_record([
                row.p.to_string(),
                (2 * i + 1).to_string(),
                m.to_string(),
                decimal(n, 10),
                decimal(&limit[i], 10),
                decimal(&dev, 10),
            ])
            .map_err(io_error)?;
        }
    }
    let csv_bytes = wtr.into_inner().map_err(|e| io_error(e.into_error()))?;

    let summary: Vec<Value> = rows
        .iter()
        .map(|row| {
            json!({
                "p": row.p,
                "class_number": row.class_number,
                "multiplicities": row.multiplicities,
                "deviation": rational(&row.deviation),
            })
        })
        .collect();
    let text = match out {
        Some(path) => {
            File::create(path)
                .and_then(|mut f| f.write_all(&csv_bytes))
                .map_err(io_error)?;
            let mut t = format!("{:>10} {:>6} {:>12}\n", "p", "h", "max dev");
            for row in &rows {
                t.push_str(&format!("{:>10} {:>6} {:>12}\n", row.p, row.class_number, decimal(&row.deviation, 8)));
            }
            t.push_str(&format!("wrote {}\n", path.display()));
            t
        }
        None if json_out => String::new(),
        None => String::from_utf8(csv_bytes).expect("utf-8"),
    };
    Ok(Outcome::ok(
        inputs(&[
            ("primes", json!(primes)),
            ("r", r.into()),
            ("out", json!(out.map(|p| p.display().to_string()))),
        ]),
        json!({"rows": summary}),
        text,
    ))
}

fn run_verify(p_max: u64, r_max: u32) -> Result<Outcome> {
    let checks = verify::run(p_max, r_max)?;
    let ok = checks.iter().all(verify::Check::passed);
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!(
            "{} {:<26} {:>5} cases\n",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.cases
        ));
        for f in &c.failures {
            text.push_str(&format!("     {f}\n"));
        }
    }
    let mut out = Outcome::ok(
        inputs(&[("p_max", p_max.into()), ("r_max", r_max.into())]),
        json!({
            "checks": checks.iter().map(verify::Check::to_json).collect::<Vec<_>>(),
            "passed": ok,
        }),
        text,
    );
    if !ok {
        out.code = EXIT_MISMATCH;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, result) = match &cli.command {
        Command::GaussSum { module, a } => ("gauss-sum", gauss_sum(module, *a)),
        Command::Weights(args) => ("weights", weights(args, args.csv)),
        Command::TraceExponents { p, r, method } => ("trace-exponents", trace_exponents(*p, *r, *method)),
        Command::ClassNumber { p } => ("class-number", class_number(*p)),
        Command::EulerChar { module, weight } => ("euler-char", euler_char(module, *weight)),
        Command::Dim { module, weight } => ("dim", dim(module, *weight)),
        Command::Invariants { module } => ("invariants", invariants(module)),
        Command::Distribution { primes, r, out } => ("distribution", distribution(primes, *r, out.as_ref(), cli.json)),
        Command::Verify { p_max, r_max } => ("verify", run_verify(*p_max, *r_max)),
    };
    let timing = if cli.no_timing { 0 } else { start.elapsed().as_millis() as u64 };
    match result {
        Ok(outcome) => {
            if cli.json {
                println!("{}", output::record(name, &outcome, timing));
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(output::exit_code(&e) as u8)
        }
    }
}
