//! Output records, exit codes and number formatting.

use num_traits::{Signed, Zero};
use serde_json::{Map, Value};
use weilweights::arith::Rational;
use weilweights::Error;

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
pub const EXIT_UNKNOWN: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidParameter(_) | Error::Degenerate(_) | Error::Parity(_) => EXIT_PARSE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::NotRational(_) | Error::Mismatch(_) => EXIT_MISMATCH,
        Error::WeightOneUnknown(_) => EXIT_UNKNOWN,
    }
}

/// What a command produced, before it is rendered.
pub struct Outcome {
    pub inputs: Map<String, Value>,
    pub results: Value,
    /// Human-readable (or CSV) rendering.
    pub text: String,
    pub code: i32,
}

impl Outcome {
    pub fn ok(inputs: Map<String, Value>, results: Value, text: String) -> Self {
        Self {
            inputs,
            results,
            text,
            code: EXIT_OK,
        }
    }
}

/// The JSON record. `Map` is ordered by key, so the output is canonical.
pub fn record(command: &str, outcome: &Outcome, timing_ms: u64) -> String {
    let mut m = Map::new();
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    m.insert("command".into(), command.into());
    m.insert("inputs".into(), Value::Object(outcome.inputs.clone()));
    m.insert("results".into(), outcome.results.clone());
    m.insert("timing_ms".into(), timing_ms.into());
    serde_json::to_string_pretty(&Value::Object(m)).expect("serializable")
}

/// `"num/den"`, always with an explicit denominator.
pub fn rational(q: &Rational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

/// `q` rounded half away from zero to `digits` places.
pub fn decimal(q: &Rational, digits: u32) -> String {
    let scale = Rational::from_integer(num_traits::pow(10.into(), digits as usize));
    let n = (q.abs() * scale).round().to_integer();
    let s = n.to_string();
    let d = digits as usize;
    let padded = format!("{s:0>width$}", width = d + 1);
    let (int, frac) = padded.split_at(padded.len() - d);
    let sign = if q.is_negative() && !n.is_zero() { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use weilweights::arith::rat;

    #[test]
    fn decimals() {
        assert_eq!(decimal(&rat(1, 48), 6), "0.020833");
        assert_eq!(decimal(&rat(-1, 3), 4), "-0.3333");
        assert_eq!(decimal(&rat(2, 3), 0), "1");
        assert_eq!(decimal(&rat(0, 1), 3), "0.000");
        assert_eq!(decimal(&rat(-1, 10_000), 2), "0.00");
        assert_eq!(rational(&rat(6, 2)), Value::String("3/1".into()));
    }
}
