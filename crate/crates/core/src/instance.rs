//! JSON instance files. Every number is rational text such as `"3/2"`.

use std::path::Path;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{BblForm, BblInstance, GridFunction, HMode, Sample};
use crate::geometry::{Point, SetRep};
use crate::lattice::Lattice;
use crate::rational::{parse_rational, Exponent, Rational};
use crate::verification::WeakCube;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(rename = "K", alias = "A", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<SetRep>,
    #[serde(rename = "L", alias = "B", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<SetRep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Sample>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Sample>>,
    /// Explicit `h`; the minimal admissible `h` is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Sample>>,
    /// Rows are the basis vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Point>>,
    /// `"closed"` for `[0, 1]ⁿ` or `"corners"` for `{0, 1}ⁿ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cube: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip)]
    source: String,
}

/// `line L, column C` of the first occurrence of the key `"name"`.
fn locate(source: &str, name: &str) -> Option<String> {
    let at = source.find(&format!("\"{name}\""))?;
    let before = &source[..at];
    let line = before.matches('\n').count() + 1;
    let column = at - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    Some(format!("line {line}, column {column}"))
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut file: InstanceFile = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let reason = msg.split(" at line ").next().unwrap_or(&msg).to_string();
            Error::parse(format!("line {}, column {}", e.line(), e.column()), reason)
        })?;
        file.source = text.to_string();
        if file.n == 0 {
            return Err(file.field_error("n", "n must be at least 1"));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialises")
    }

    fn field_error(&self, field: &str, reason: impl Into<String>) -> Error {
        let reason = reason.into();
        match locate(&self.source, field) {
            Some(at) => Error::invalid(field, format!("{reason} ({at})")),
            None => Error::invalid(field, reason),
        }
    }

    fn relocate(&self, field: &str, e: Error) -> Error {
        match e {
            Error::InvalidParameter { reason, .. } => self.field_error(field, reason),
            other => other,
        }
    }

    fn text<'a>(&self, field: &str, v: &'a Option<String>) -> Result<&'a str> {
        v.as_deref().ok_or_else(|| self.field_error(field, format!("missing field {field}")))
    }

    fn rational(&self, field: &str, v: &Option<String>) -> Result<Rational> {
        parse_rational(self.text(field, v)?).map_err(|e| self.field_error(field, e.to_string()))
    }

    /// `p ≥ 1`.
    pub fn p(&self) -> Result<Exponent> {
        let p = Exponent::Finite(self.rational("p", &self.p)?);
        p.check_p().map_err(|e| self.relocate("p", e))?;
        Ok(p)
    }

    /// `p`, defaulting to 1 when absent.
    pub fn p_or_one(&self) -> Result<Exponent> {
        match self.p {
            Some(_) => self.p(),
            None => Ok(Exponent::Finite(Rational::one())),
        }
    }

    /// `λ ∈ (0, 1)`.
    pub fn lambda(&self) -> Result<Rational> {
        let l = self.rational("lambda", &self.lambda)?;
        if !l.is_positive() || l >= Rational::one() {
            return Err(self.field_error("lambda", format!("λ must lie in (0, 1), got {}", self.lambda.as_deref().unwrap_or(""))));
        }
        Ok(l)
    }

    /// `α`, defaulting to `+∞`.
    pub fn alpha(&self) -> Result<Exponent> {
        match &self.alpha {
            None => Ok(Exponent::PosInf),
            Some(a) => a.parse().map_err(|e: Error| self.field_error("alpha", e.to_string())),
        }
    }

    /// Positive `(t, s)`.
    pub fn ts(&self) -> Result<(Rational, Rational)> {
        let t = self.rational("t", &self.t)?;
        let s = self.rational("s", &self.s)?;
        for (name, v) in [("t", &t), ("s", &s)] {
            if !v.is_positive() {
                return Err(self.field_error(name, format!("{name} must be positive")));
            }
        }
        Ok((t, s))
    }

    pub fn has_ts(&self) -> bool {
        self.t.is_some() || self.s.is_some()
    }

    fn set(&self, field: &str, v: &Option<SetRep>) -> Result<SetRep> {
        let set = v.clone().ok_or_else(|| self.field_error(field, format!("missing field {field}")))?;
        set.validate().map_err(|e| self.relocate(field, e))?;
        if set.dim() != self.n {
            return Err(self.field_error(field, format!("dimension {} differs from n = {}", set.dim(), self.n)));
        }
        Ok(set)
    }

    pub fn k(&self) -> Result<SetRep> {
        self.set("K", &self.k)
    }

    pub fn l(&self) -> Result<SetRep> {
        self.set("L", &self.l)
    }

    pub fn lattice(&self) -> Result<Lattice> {
        match &self.lattice {
            None => Ok(Lattice::standard(self.n)),
            Some(basis) => {
                if basis.len() != self.n {
                    return Err(self.field_error("lattice", "need n basis vectors"));
                }
                Lattice::new(basis.clone()).map_err(|e| self.relocate("lattice", e))
            }
        }
    }

    pub fn weak_cube(&self) -> Result<WeakCube> {
        match self.cube.as_deref() {
            None | Some("closed") => Ok(WeakCube::Closed),
            Some("corners") => Ok(WeakCube::Corners),
            Some(other) => Err(self.field_error("cube", format!("expected \"closed\" or \"corners\", got {other:?}"))),
        }
    }

    fn function(&self, field: &str, v: &Option<Vec<Sample>>, domain: &SetRep) -> Result<GridFunction> {
        let f = match v {
            Some(support) => GridFunction {
                support: support.clone(),
                domain: domain.clone(),
            },
            None => match domain {
                SetRep::FinitePoints { points } => GridFunction::indicator(points),
                _ => return Err(self.field_error(field, format!("missing field {field}; only finite sets default to their indicator"))),
            },
        };
        f.validate().map_err(|e| self.relocate(field, e))?;
        Ok(f)
    }

    /// The functional instance; `t`, `s` select the `tK + sL` form.
    pub fn bbl(&self) -> Result<(BblInstance, BblForm)> {
        let (k, l) = (self.k()?, self.l()?);
        let h = match &self.h {
            None => HMode::MinimalOracle,
            Some(support) => {
                let pts: Vec<Point> = support.iter().map(|s| s.0.clone()).collect();
                let domain = if pts.is_empty() { SetRep::points(vec![Point::origin(self.n)]) } else { SetRep::points(pts) };
                HMode::Explicit {
                    h: self.function("h", &self.h, &domain)?,
                }
            }
        };
        let form = if self.has_ts() {
            let (t, s) = self.ts()?;
            BblForm::Ts { t, s }
        } else {
            BblForm::Lambda
        };
        let lambda = match (&form, &self.lambda) {
            (BblForm::Ts { t, s }, None) => s / (t + s),
            _ => self.lambda()?,
        };
        let inst = BblInstance {
            n: self.n,
            p: self.p()?,
            lambda,
            alpha: self.alpha()?,
            f: self.function("f", &self.f, &k)?,
            g: self.function("g", &self.g, &l)?,
            k,
            l,
            h,
        };
        inst.validate().map_err(|e| match e {
            Error::InvalidParameter { field, reason } => self.field_error(&field, reason),
            other => other,
        })?;
        Ok((inst, form))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const SHARP: &str = r#"{
  "n": 2,
  "p": "2",
  "lambda": "1/2",
  "K": {"kind": "axis_box", "intervals": [{"lo": "0", "hi": "2"}, {"lo": "0", "hi": "2"}]},
  "L": {"kind": "axis_box", "intervals": [{"lo": "0", "hi": "2"}, {"lo": "0", "hi": "2"}]}
}"#;

    #[test]
    fn parses_and_round_trips() {
        let f = InstanceFile::parse(SHARP).unwrap();
        assert_eq!(f.lambda().unwrap(), rat(1, 2));
        assert_eq!(f.k().unwrap().dim(), 2);
        let again = InstanceFile::parse(&f.to_json()).unwrap();
        assert_eq!(again.k, f.k);
    }

    #[test]
    fn errors_name_field_and_position() {
        let bad = SHARP.replace("\"1/2\"", "\"5/4\"");
        let e = InstanceFile::parse(&bad).unwrap().lambda().unwrap_err().to_string();
        assert!(e.contains("lambda") && e.contains("(0, 1)") && e.contains("line 4"), "{e}");
        let e = InstanceFile::parse("{\"n\": 1,\n \"p\": 1.5}").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = InstanceFile::parse(&SHARP.replace("\"n\": 2", "\"n\": 3")).unwrap().k().unwrap_err().to_string();
        assert!(e.contains("dimension"), "{e}");
    }

    #[test]
    fn bbl_defaults_to_indicators() {
        let text = r#"{"n": 1, "p": "2", "lambda": "1/2", "alpha": "1",
            "K": {"kind": "finite_points", "points": [["0"], ["1"]]},
            "L": {"kind": "finite_points", "points": [["0"], ["2"]]},
            "f": [[["1"], "3"]]}"#;
        let (inst, form) = InstanceFile::parse(text).unwrap().bbl().unwrap();
        assert_eq!(form, BblForm::Lambda);
        assert_eq!(inst.f.value(&Point::from_ints(&[1])), rat(3, 1));
        assert_eq!(inst.g.support.len(), 2);
        assert_eq!(inst.h, HMode::MinimalOracle);
    }
}
