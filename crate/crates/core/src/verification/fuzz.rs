use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use super::{check_bm_ts, check_cardinality, check_dbm_p1, check_dlpbm, check_lpbm_ts};
use crate::error::{Error, Result};
use crate::functions::{check_discrete_bbl, BblForm, BblInstance, GridFunction, HMode};
use crate::geometry::{Interval, Point, SetRep};
use crate::rational::{format_rational, int, rat, Exponent, Rational};
use crate::report::{CheckReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    Dlpbm,
    DbmP1,
    BmTs,
    LpbmTs,
    Cardinality,
    DiscreteBbl,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::Dlpbm,
        Target::DbmP1,
        Target::BmTs,
        Target::LpbmTs,
        Target::Cardinality,
        Target::DiscreteBbl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Target::Dlpbm => "dlpbm",
            Target::DbmP1 => "dbm-p1",
            Target::BmTs => "bm-ts",
            Target::LpbmTs => "lpbm-ts",
            Target::Cardinality => "cardinality",
            Target::DiscreteBbl => "discrete-bbl",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::invalid("inequality", format!("unknown fuzz target {s:?}")))
    }
}

/// A choice of `α`; `NegHalfOverN` is `−1/(2n)` for the drawn dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaChoice {
    Fixed(Exponent),
    NegHalfOverN,
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: u64,
    /// Largest dimension drawn, at most 3.
    pub n: usize,
    pub coordinate_bound: i64,
    pub p_choices: Vec<Rational>,
    pub lambda_choices: Vec<Rational>,
    pub alpha_choices: Vec<AlphaChoice>,
    pub target: Target,
    pub tol: Rational,
}

impl FuzzConfig {
    pub fn new(target: Target, seed: u64, trials: u64) -> Self {
        FuzzConfig {
            seed,
            trials,
            n: 2,
            coordinate_bound: 5,
            p_choices: vec![int(1), rat(3, 2), int(2), int(3)],
            lambda_choices: vec![rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3)],
            alpha_choices: vec![
                AlphaChoice::NegHalfOverN,
                AlphaChoice::Fixed(Exponent::from_ratio(0, 1)),
                AlphaChoice::Fixed(Exponent::from_ratio(1, 1)),
                AlphaChoice::Fixed(Exponent::PosInf),
            ],
            target,
            tol: rat(1, 1_000_000_000),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.n) {
            return Err(Error::invalid("n", "fuzz dimension must lie in 1..=3"));
        }
        if self.coordinate_bound < 1 {
            return Err(Error::invalid("bound", "coordinate bound must be positive"));
        }
        if self.p_choices.is_empty() || self.lambda_choices.is_empty() || self.alpha_choices.is_empty() {
            return Err(Error::invalid("choices", "choice lists must be nonempty"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub target: String,
    pub seed: u64,
    pub trials: u64,
    pub holds: u64,
    pub equalities: u64,
    pub ambiguous: u64,
    pub violations: u64,
    pub errors: u64,
    /// Ambiguous verdicts by cause.
    pub ambiguous_causes: BTreeMap<String, u64>,
    pub error_messages: BTreeMap<String, u64>,
    pub min_slack: Option<f64>,
    pub worst_instance: Option<String>,
    pub violating_instances: Vec<String>,
}

impl FuzzSummary {
    /// Ambiguous verdicts without a recorded boundary-point or enclosure cause.
    pub fn unexplained_ambiguous(&self) -> u64 {
        self.ambiguous
            - self
                .ambiguous_causes
                .iter()
                .filter(|(k, _)| k.as_str() != "unknown")
                .map(|(_, v)| v)
                .sum::<u64>()
    }
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target      {}", self.target)?;
        writeln!(f, "seed        {}", self.seed)?;
        writeln!(f, "trials      {}", self.trials)?;
        writeln!(f, "holds       {}", self.holds)?;
        writeln!(f, "equalities  {}", self.equalities)?;
        writeln!(f, "ambiguous   {}", self.ambiguous)?;
        for (k, v) in &self.ambiguous_causes {
            writeln!(f, "  {k}: {v}")?;
        }
        writeln!(f, "violations  {}", self.violations)?;
        writeln!(f, "errors      {}", self.errors)?;
        for (k, v) in &self.error_messages {
            writeln!(f, "  {k}: {v}")?;
        }
        if let Some(s) = self.min_slack {
            writeln!(f, "min slack   {s:.6e}")?;
        }
        if let Some(w) = &self.worst_instance {
            writeln!(f, "worst       {w}")?;
        }
        for v in &self.violating_instances {
            writeln!(f, "violation   {v}")?;
        }
        Ok(())
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, b: i64) -> Point {
    Point((0..n).map(|_| int(rng.gen_range(-b..=b))).collect())
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, b: i64) -> Vec<Point> {
    let k = rng.gen_range(1..=4);
    let mut v: Vec<Point> = (0..k).map(|_| random_point(rng, n, b)).collect();
    v.sort();
    v.dedup();
    v
}

/// A box with denominators at most 4 around a lattice point.
fn random_box(rng: &mut ChaCha8Rng, n: usize, b: i64) -> SetRep {
    let intervals = (0..n)
        .map(|_| {
            let c = int(rng.gen_range(-b..=b));
            let d: i64 = rng.gen_range(1..=4);
            let below = rat(rng.gen_range(0..=2 * d), d);
            let above = rat(rng.gen_range(0..=2 * d), d);
            let lo_open = below > int(0) && rng.gen_bool(0.25);
            let hi_open = above > int(0) && rng.gen_bool(0.25);
            Interval {
                lo: &c - below,
                hi: &c + above,
                lo_open,
                hi_open,
            }
        })
        .collect();
    SetRep::AxisBox { intervals }
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, b: i64) -> SetRep {
    if rng.gen_bool(0.5) {
        SetRep::points(random_points(rng, n, b))
    } else {
        random_box(rng, n, b)
    }
}

fn random_function(rng: &mut ChaCha8Rng, pts: &[Point]) -> GridFunction {
    let values = [rat(1, 2), int(1), rat(3, 2), int(2), int(3)];
    GridFunction::new(
        pts.iter().map(|p| (p.clone(), values.choose(rng).unwrap().clone())).collect(),
        SetRep::points(pts.to_vec()),
    )
    .expect("valid random function")
}

fn pick<T: Clone>(rng: &mut ChaCha8Rng, v: &[T]) -> T {
    v.choose(rng).expect("nonempty").clone()
}

fn describe(parts: &[(&str, String)]) -> String {
    parts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn set_json(s: &SetRep) -> String {
    serde_json::to_string(s).expect("serializable")
}

fn weight(rng: &mut ChaCha8Rng) -> Rational {
    pick(rng, &[rat(1, 4), rat(1, 2), int(1), rat(3, 2), int(2), int(3)])
}

/// Draws the instance of a trial and returns a closure evaluating it at a
/// tolerance, plus a description.
type Run = Box<dyn Fn(&Rational) -> Result<CheckReport> + Send + Sync>;

fn trial(config: &FuzzConfig, index: u64) -> (Run, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let n = rng.gen_range(1..=config.n);
    let b = config.coordinate_bound;
    let lambda = pick(&mut rng, &config.lambda_choices);
    let p = Exponent::Finite(pick(&mut rng, &config.p_choices));
    match config.target {
        Target::Dlpbm | Target::DbmP1 => {
            let (k, l) = (random_set(&mut rng, n, b), random_set(&mut rng, n, b));
            let d = describe(&[("K", set_json(&k)), ("L", set_json(&l)), ("lambda", format_rational(&lambda)), ("p", p.to_string())]);
            if config.target == Target::Dlpbm {
                (Box::new(move |tol| check_dlpbm(&k, &l, &lambda, &p, tol)), d)
            } else {
                (Box::new(move |tol| check_dbm_p1(&k, &l, &lambda, tol)), d)
            }
        }
        Target::BmTs | Target::LpbmTs => {
            let (k, l) = (random_set(&mut rng, n, b), random_set(&mut rng, n, b));
            let (t, s) = (weight(&mut rng), weight(&mut rng));
            let d = describe(&[
                ("K", set_json(&k)),
                ("L", set_json(&l)),
                ("t", format_rational(&t)),
                ("s", format_rational(&s)),
                ("p", p.to_string()),
            ]);
            if config.target == Target::LpbmTs {
                (Box::new(move |tol| check_lpbm_ts(&k, &l, &t, &s, &p, tol)), d)
            } else {
                (Box::new(move |tol| check_bm_ts(&k, &l, &t, &s, tol)), d)
            }
        }
        Target::Cardinality => {
            let a = SetRep::points(random_points(&mut rng, n, b));
            let c = SetRep::points(random_points(&mut rng, n, b));
            let d = describe(&[("A", set_json(&a)), ("B", set_json(&c)), ("p", p.to_string())]);
            (Box::new(move |tol| check_cardinality(&a, &c, &p, tol)), d)
        }
        Target::DiscreteBbl => {
            let (kp, lp) = (random_points(&mut rng, n, b), random_points(&mut rng, n, b));
            let alpha = match pick(&mut rng, &config.alpha_choices) {
                AlphaChoice::Fixed(a) => a,
                AlphaChoice::NegHalfOverN => Exponent::Finite(rat(-1, 2 * n as i64)),
            };
            let f = random_function(&mut rng, &kp);
            let g = random_function(&mut rng, &lp);
            let form = if !alpha.is_zero() && rng.gen_bool(0.25) {
                BblForm::Ts {
                    t: weight(&mut rng),
                    s: weight(&mut rng),
                }
            } else {
                BblForm::Lambda
            };
            let inst = BblInstance {
                n,
                p: p.clone(),
                lambda: lambda.clone(),
                alpha: alpha.clone(),
                k: SetRep::points(kp),
                l: SetRep::points(lp),
                f,
                g,
                h: HMode::MinimalOracle,
            };
            let d = describe(&[
                ("f", serde_json::to_string(&inst.f.support).expect("serializable")),
                ("g", serde_json::to_string(&inst.g.support).expect("serializable")),
                ("lambda", format_rational(&lambda)),
                ("p", p.to_string()),
                ("alpha", alpha.to_string()),
                ("form", format!("{form:?}")),
            ]);
            (Box::new(move |tol| check_discrete_bbl(&inst, &form, tol)), d)
        }
    }
}

enum Outcome {
    Report(Box<CheckReport>),
    Failed(String),
}

fn run_trial(config: &FuzzConfig, index: u64) -> (Outcome, String) {
    let (check, desc) = trial(config, index);
    let first = match check(&config.tol) {
        Ok(r) => r,
        Err(e) => return (Outcome::Failed(e.to_string()), desc),
    };
    if first.verdict != Verdict::Violation {
        return (Outcome::Report(Box::new(first)), desc);
    }
    let tight = &config.tol / Rational::from_integer(1_000_000.into());
    match check(&tight) {
        Ok(r) => (Outcome::Report(Box::new(r)), desc),
        Err(e) => (Outcome::Failed(e.to_string()), desc),
    }
}

fn ambiguity_cause(r: &CheckReport) -> String {
    match r.witness("ambiguous_points") {
        Some(c) if c != "0" => "boundary points undecided".into(),
        _ if r.lhs.width_f64() > 0.0 || r.rhs.width_f64() > 0.0 => "enclosures overlap".into(),
        _ => "unknown".into(),
    }
}

/// Runs `trials` seeded trials; trial `i` draws from its own stream, so the
/// summary does not depend on scheduling.
pub fn fuzz(config: &FuzzConfig) -> Result<FuzzSummary> {
    config.validate()?;
    let run = |i: u64| (i, run_trial(config, i));
    #[cfg(feature = "parallel")]
    let outcomes: Vec<(u64, (Outcome, String))> = (0..config.trials).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<(u64, (Outcome, String))> = (0..config.trials).map(run).collect();
    let mut s = FuzzSummary {
        target: config.target.to_string(),
        seed: config.seed,
        trials: config.trials,
        ..Default::default()
    };
    for (i, (outcome, desc)) in outcomes {
        let r = match outcome {
            Outcome::Failed(msg) => {
                s.errors += 1;
                *s.error_messages.entry(msg).or_default() += 1;
                continue;
            }
            Outcome::Report(r) => r,
        };
        match r.verdict {
            Verdict::Holds => s.holds += 1,
            Verdict::HoldsWithEquality => s.equalities += 1,
            Verdict::AmbiguousWithinTolerance => {
                s.ambiguous += 1;
                *s.ambiguous_causes.entry(ambiguity_cause(&r)).or_default() += 1;
            }
            Verdict::Violation => {
                s.violations += 1;
                s.violating_instances.push(format!("trial={i} {desc}"));
            }
        }
        let slack = r.slack.lo().clone();
        let slack = crate::rational::to_f64(&slack);
        if s.min_slack.is_none_or(|m| slack < m) {
            s.min_slack = Some(slack);
            s.worst_instance = Some(format!("trial={i} {desc}"));
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_clean() {
        for target in Target::ALL {
            let mut c = FuzzConfig::new(target, 42, 12);
            c.coordinate_bound = 2;
            let a = fuzz(&c).unwrap();
            let b = fuzz(&c).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.violations, 0, "{a}");
            assert_eq!(a.errors, 0, "{a}");
        }
        let empty = fuzz(&FuzzConfig::new(Target::Dlpbm, 1, 0)).unwrap();
        assert_eq!((empty.trials, empty.holds, empty.min_slack), (0, 0, None));
    }
}
