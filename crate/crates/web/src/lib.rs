//! Browser bindings: each function takes JSON or plain text and returns JSON.

use bmlab::instance::InstanceFile;
use bmlab::lattice::gcount as count_points;
use bmlab::rational::{format_rational, parse_rational};
use bmlab::verification::{check_cardinality, check_dlpbm, check_lpbm_ts, repro};
use bmlab::{Error, Rational};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn reply(result: Result<Value, Error>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn tolerance(text: &str) -> Result<Rational, Error> {
    if text.trim().is_empty() {
        return Ok(Rational::new(1.into(), 1_000_000_000.into()));
    }
    parse_rational(text).map_err(|_| Error::invalid("tol", "expected rational text such as 1/1000000000"))
}

/// Lattice points of `K` in an instance file.
#[wasm_bindgen]
pub fn gcount(instance: &str) -> String {
    reply((|| {
        let file = InstanceFile::parse(instance)?;
        let r = count_points(&file.k()?, &file.lattice()?)?;
        Ok(json!({
            "count": r.count,
            "ambiguous_points": r.ambiguous_points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }))
    })())
}

/// Runs `dlpbm`, `lpbm-ts` or `cardinality` on an instance file.
#[wasm_bindgen]
pub fn check(id: &str, instance: &str, tol: &str) -> String {
    reply((|| {
        let file = InstanceFile::parse(instance)?;
        let tol = tolerance(tol)?;
        let report = match id {
            "dlpbm" => check_dlpbm(&file.k()?, &file.l()?, &file.lambda()?, &file.p()?, &tol)?,
            "lpbm-ts" => {
                let (t, s) = file.ts()?;
                check_lpbm_ts(&file.k()?, &file.l()?, &t, &s, &file.p()?, &tol)?
            }
            "cardinality" => check_cardinality(&file.k()?, &file.l()?, &file.p()?, &tol)?,
            other => return Err(Error::invalid("id", format!("the demo runs dlpbm, lpbm-ts or cardinality, not {other:?}"))),
        };
        Ok(serde_json::to_value(&report).expect("report serialises"))
    })())
}

/// A built-in reproduction case.
#[wasm_bindgen]
pub fn reproduce(case: &str) -> String {
    reply((|| {
        let tol = tolerance("")?;
        let rows: Vec<Value> = repro(case, &tol)?
            .into_iter()
            .map(|o| {
                json!({
                    "report": serde_json::to_value(&o.report).expect("report serialises"),
                    "expected": o.expected,
                    "matched": o.matched,
                    "tol": format_rational(&tol),
                })
            })
            .collect();
        Ok(Value::Array(rows))
    })())
}
