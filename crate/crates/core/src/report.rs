//! Verdicts and reports shared by all checkers.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::certified::CertifiedReal;
use crate::error::Error;
use crate::rational::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Holds,
    HoldsWithEquality,
    AmbiguousWithinTolerance,
    Violation,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::HoldsWithEquality => "HoldsWithEquality",
            Verdict::AmbiguousWithinTolerance => "AmbiguousWithinTolerance",
            Verdict::Violation => "Violation",
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsWithEquality)
    }

    /// Process exit code: 0 holds, 1 ambiguous, 2 violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Holds | Verdict::HoldsWithEquality => 0,
            Verdict::AmbiguousWithinTolerance => 1,
            Verdict::Violation => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "Holds" => Verdict::Holds,
            "HoldsWithEquality" => Verdict::HoldsWithEquality,
            "AmbiguousWithinTolerance" => Verdict::AmbiguousWithinTolerance,
            "Violation" => Verdict::Violation,
            _ => return Err(Error::parse("verdict", format!("unknown verdict {s:?}"))),
        })
    }
}

/// Enclosures closer than this (both narrower, midpoints this close) count
/// as equal.
pub fn equality_eps() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(20))
}

/// Verdict of `lhs ≥ rhs`.
pub fn compare_sides(lhs: &CertifiedReal, rhs: &CertifiedReal, ambiguous: bool) -> Verdict {
    if ambiguous {
        return Verdict::AmbiguousWithinTolerance;
    }
    if let (Some(a), Some(b)) = (lhs.exact_value(), rhs.exact_value()) {
        return match a.cmp(b) {
            std::cmp::Ordering::Greater => Verdict::Holds,
            std::cmp::Ordering::Equal => Verdict::HoldsWithEquality,
            std::cmp::Ordering::Less => Verdict::Violation,
        };
    }
    let eps = equality_eps();
    let close = lhs.width() < eps && rhs.width() < eps && {
        let d = lhs.mid() - rhs.mid();
        d < eps && -d < eps
    };
    if close {
        return Verdict::HoldsWithEquality;
    }
    if lhs.lo() > rhs.hi() {
        Verdict::Holds
    } else if lhs.hi() < rhs.lo() {
        Verdict::Violation
    } else {
        Verdict::AmbiguousWithinTolerance
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub inequality_id: String,
    pub verdict: Verdict,
    pub lhs: CertifiedReal,
    pub rhs: CertifiedReal,
    pub slack: CertifiedReal,
    /// Ordered key/value trail: counts, sets, parameters.
    pub witness: Vec<(String, String)>,
    pub runtime_ms: u64,
}

impl CheckReport {
    pub fn new(id: &str, lhs: CertifiedReal, rhs: CertifiedReal, ambiguous: bool) -> Self {
        CheckReport {
            inequality_id: id.to_string(),
            verdict: compare_sides(&lhs, &rhs, ambiguous),
            slack: lhs.sub(&rhs),
            lhs,
            rhs,
            witness: Vec::new(),
            runtime_ms: 0,
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.witness.push((key.to_string(), value.to_string()));
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn witness(&self, key: &str) -> Option<&str> {
        self.witness.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// `[lo, hi]` decimal enclosure, or the exact rational.
pub fn show_enclosure(x: &CertifiedReal, digits: usize) -> String {
    match x.exact_value() {
        Some(v) => format_rational(v),
        None => x.to_decimal_string(digits),
    }
}

impl Serialize for CheckReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let enc = |x: &CertifiedReal| {
            serde_json::json!({
                "lo": format_rational(x.lo()),
                "hi": format_rational(x.hi()),
                "approx": x.to_f64(),
            })
        };
        let witness: serde_json::Map<String, serde_json::Value> = self
            .witness
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let mut st = s.serialize_struct("CheckReport", 7)?;
        st.serialize_field("inequality_id", &self.inequality_id)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("lhs", &enc(&self.lhs))?;
        st.serialize_field("rhs", &enc(&self.rhs))?;
        st.serialize_field("slack", &enc(&self.slack))?;
        st.serialize_field("witness", &witness)?;
        st.serialize_field("runtime_ms", &self.runtime_ms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn verdict_rules() {
        let e = CertifiedReal::exact;
        assert_eq!(compare_sides(&e(int(3)), &e(int(3)), false), Verdict::HoldsWithEquality);
        assert_eq!(compare_sides(&e(int(3)), &e(int(2)), false), Verdict::Holds);
        assert_eq!(compare_sides(&e(int(2)), &e(int(3)), false), Verdict::Violation);
        assert_eq!(compare_sides(&e(int(3)), &e(int(2)), true), Verdict::AmbiguousWithinTolerance);
        let tiny = CertifiedReal::new(int(2) - rat(1, 10i64.pow(18)) * rat(1, 1000), int(2));
        assert_eq!(compare_sides(&tiny, &e(int(2)), false), Verdict::HoldsWithEquality);
        let wide = CertifiedReal::new(rat(19, 10), rat(21, 10));
        assert_eq!(compare_sides(&wide, &e(int(2)), false), Verdict::AmbiguousWithinTolerance);
        assert_eq!("Violation".parse::<Verdict>().unwrap(), Verdict::Violation);
    }
}
