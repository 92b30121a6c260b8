//! The `bmlab` command line: instance files in, reports out.

pub mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use bmlab::functions::{check_discrete_bbl, check_lattice_variant};
use bmlab::geometry::PCombo;
use bmlab::instance::InstanceFile;
use bmlab::lattice::{gcount, gcount_pcombo};
use bmlab::rational::{parse_rational, Rational};
use bmlab::report::CheckReport;
use bmlab::verification::{
    check_bm_ts, check_cardinality, check_cardinality_modified_cube, check_dbm_p1, check_dlpbm, check_lpbm_ts,
    converge_experiment, fuzz, repro, check_volume_lpbm, FuzzConfig, Target, REPRO_CASES,
};
use bmlab::Error;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use output::{write_csv, write_table, ReportRow};

pub const CHECK_IDS: [&str; 9] = [
    "dlpbm",
    "dbm-p1",
    "lpbm-ts",
    "bm-ts",
    "cardinality",
    "cardinality-modified-cube",
    "discrete-bbl",
    "discrete-bbl-lattice",
    "volume-lpbm",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "bmlab", version, about = "Exact checks of discrete L_p Brunn-Minkowski type inequalities")]
pub struct Cli {
    /// Ambiguity threshold, rational ("1/1000") or decimal exponent ("1e-9").
    #[arg(long, global = true, default_value = "1e-9")]
    pub tol: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Omit the timestamp line and zero the runtimes, making output reproducible.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one checker on an instance file.
    Check { id: String, instance: PathBuf },
    /// Reproduce a built-in example.
    Repro { case: String },
    /// Random instances against one checker.
    Fuzz {
        id: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        bound: i64,
    },
    /// Discretised sides against their continuous limits for m = 0..=m_max.
    Converge {
        instance: PathBuf,
        #[arg(long, default_value_t = 6)]
        m_max: u32,
    },
    /// Lattice points of K, or of the p-combination when L is given.
    Gcount { instance: PathBuf },
}

/// Process exit code together with everything written to stdout and stderr.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// `1e-9`, `0.001` or rational text.
pub fn parse_tol(text: &str) -> Result<Rational, Error> {
    let bad = || Error::invalid("tol", format!("cannot read {text:?}; use a positive rational or a form like 1e-9"));
    let (mant, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let mant = match mant.split_once('.') {
        Some((w, f)) => {
            let digits: BigInt = format!("{w}{f}").parse().map_err(|_| bad())?;
            Rational::new(digits, BigInt::from(10).pow(f.len() as u32))
        }
        None => parse_rational(mant).map_err(|_| bad())?,
    };
    let ten = Rational::from_integer(BigInt::from(10));
    let scale = if exp >= 0 { ten.pow(exp) } else { ten.pow(-exp).recip() };
    let tol = mant * scale;
    if tol <= Rational::from_integer(BigInt::from(0)) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    Ok(tol)
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Ambiguous(_) => 1,
        _ => 3,
    }
}

struct Ctx {
    tol: Rational,
    format: Format,
    timing: bool,
    out: String,
}

impl Ctx {
    fn stamp(&mut self, start: Instant) {
        if self.timing {
            let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            writeln!(self.out, "# unix_time {now} elapsed_ms {}", start.elapsed().as_millis()).unwrap();
        }
    }

    fn reports(&mut self, reports: &[(CheckReport, Vec<(String, String)>)]) {
        let rows: Vec<ReportRow> = reports.iter().map(|(r, _)| ReportRow::from_report(r, self.timing)).collect();
        match self.format {
            Format::Csv => self.out.push_str(&write_csv(&rows)),
            Format::Table => {
                for (i, ((r, extra), row)) in reports.iter().zip(&rows).enumerate() {
                    if i > 0 {
                        self.out.push('\n');
                    }
                    self.out.push_str(&write_table(r, row));
                    for (k, v) in extra {
                        writeln!(self.out, "{k:<14}{v}").unwrap();
                    }
                }
            }
        }
    }
}

fn run_check(ctx: &mut Ctx, id: &str, path: &Path) -> Result<i32, Error> {
    let file = InstanceFile::load(path)?;
    let tol = ctx.tol.clone();
    let report = match id {
        "dlpbm" => check_dlpbm(&file.k()?, &file.l()?, &file.lambda()?, &file.p()?, &tol)?,
        "dbm-p1" => check_dbm_p1(&file.k()?, &file.l()?, &file.lambda()?, &tol)?,
        "lpbm-ts" => {
            let (t, s) = file.ts()?;
            check_lpbm_ts(&file.k()?, &file.l()?, &t, &s, &file.p()?, &tol)?
        }
        "bm-ts" => {
            let (t, s) = file.ts()?;
            check_bm_ts(&file.k()?, &file.l()?, &t, &s, &tol)?
        }
        "cardinality" => check_cardinality(&file.k()?, &file.l()?, &file.p()?, &tol)?,
        "cardinality-modified-cube" => {
            check_cardinality_modified_cube(&file.k()?, &file.l()?, &file.p()?, file.weak_cube()?, &tol)?
        }
        "discrete-bbl" => {
            let (inst, form) = file.bbl()?;
            check_discrete_bbl(&inst, &form, &tol)?
        }
        "discrete-bbl-lattice" => {
            let (inst, _) = file.bbl()?;
            check_lattice_variant(&inst, &file.lattice()?, &tol)?
        }
        "volume-lpbm" => check_volume_lpbm(
            &file.k()?,
            &file.l()?,
            &file.lambda()?,
            &file.p()?,
            file.samples.unwrap_or(200_000),
            file.seed.unwrap_or(1),
            &tol,
        )?,
        other => {
            return Err(Error::invalid("id", format!("unknown inequality {other:?}; known: {}", CHECK_IDS.join(", "))))
        }
    };
    let code = report.verdict.exit_code();
    ctx.reports(&[(report, Vec::new())]);
    Ok(code)
}

fn run_repro(ctx: &mut Ctx, case: &str) -> Result<i32, Error> {
    if !REPRO_CASES.contains(&case) {
        return Err(Error::invalid("case", format!("unknown case {case:?}; known: {}", REPRO_CASES.join(", "))));
    }
    let outcomes = repro(case, &ctx.tol)?;
    let all = outcomes.iter().all(|o| o.matched);
    let reports: Vec<_> = outcomes
        .into_iter()
        .map(|o| {
            let extra = vec![
                ("expected".to_string(), o.expected),
                ("matched".to_string(), o.matched.to_string()),
            ];
            (o.report, extra)
        })
        .collect();
    ctx.reports(&reports);
    Ok(if all { 0 } else { 2 })
}

fn run_fuzz(ctx: &mut Ctx, id: &str, seed: u64, trials: u64, n: usize, bound: i64) -> Result<i32, Error> {
    let target: Target = id.parse()?;
    if !(1..=3).contains(&n) {
        return Err(Error::invalid("n", "n must lie in 1..=3"));
    }
    if bound < 1 {
        return Err(Error::invalid("bound", "bound must be at least 1"));
    }
    let mut config = FuzzConfig::new(target, seed, trials);
    config.n = n;
    config.coordinate_bound = bound;
    config.tol = ctx.tol.clone();
    let s = fuzz(&config)?;
    match ctx.format {
        Format::Table => ctx.out.push_str(&s.to_string()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["target", "seed", "trials", "holds", "equalities", "ambiguous", "violations", "errors", "min_slack"])
                .and_then(|_| {
                    w.write_record([
                        s.target.to_string(),
                        s.seed.to_string(),
                        s.trials.to_string(),
                        s.holds.to_string(),
                        s.equalities.to_string(),
                        s.ambiguous.to_string(),
                        s.violations.to_string(),
                        s.errors.to_string(),
                        s.min_slack.map_or(String::new(), |m| format!("{m:e}")),
                    ])
                })
                .expect("in-memory csv");
            ctx.out.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8"));
        }
    }
    Ok(if s.violations > 0 {
        2
    } else if s.unexplained_ambiguous() > 0 || s.errors > 0 {
        1
    } else {
        0
    })
}

fn run_converge(ctx: &mut Ctx, path: &Path, m_max: u32) -> Result<i32, Error> {
    let file = InstanceFile::load(path)?;
    let table = converge_experiment(&file.k()?, &file.l()?, &file.lambda()?, &file.p()?, &file.alpha()?, m_max, &ctx.tol)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "count", "lhs", "rhs", "lhs_limit", "rhs_limit", "gap", "ambiguous_points"]).expect("in-memory csv");
    for r in &table.rows {
        w.write_record([
            r.m.to_string(),
            r.count.to_string(),
            format!("{:.12}", r.lhs.to_f64()),
            format!("{:.12}", r.rhs.to_f64()),
            format!("{:.12}", table.lhs_limit.to_f64()),
            format!("{:.12}", table.rhs_limit.to_f64()),
            format!("{:.6e}", r.gap),
            r.ambiguous_points.to_string(),
        ])
        .expect("in-memory csv");
    }
    ctx.out.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8"));
    if ctx.format == Format::Table {
        writeln!(ctx.out, "# continuous lhs by {}", table.lhs_limit_method).unwrap();
        writeln!(ctx.out, "# gaps settle: {}", table.gaps_settle()).unwrap();
    }
    let ambiguous = table.rows.iter().any(|r| r.ambiguous_points > 0);
    Ok(if ambiguous { 1 } else { 0 })
}

fn run_gcount(ctx: &mut Ctx, path: &Path) -> Result<i32, Error> {
    let file = InstanceFile::load(path)?;
    let lattice = file.lattice()?;
    let (what, result) = if file.l.is_some() {
        let combo = PCombo::lambda(file.k()?, file.l()?, file.lambda()?, file.p_or_one()?)?;
        ("M_p(K, L)", gcount_pcombo(&combo, &lattice, &ctx.tol)?)
    } else {
        ("K", gcount(&file.k()?, &lattice)?)
    };
    let points: Vec<String> = result.ambiguous_points.iter().map(|p| p.to_string()).collect();
    match ctx.format {
        Format::Table => {
            writeln!(ctx.out, "{:<18}{what}", "set").unwrap();
            writeln!(ctx.out, "{:<18}{}", "count", result.count).unwrap();
            writeln!(ctx.out, "{:<18}{}", "ambiguous_points", points.len()).unwrap();
            for p in &points {
                writeln!(ctx.out, "  {p}").unwrap();
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["set", "count", "ambiguous_points"])
                .and_then(|_| w.write_record([what.to_string(), result.count.to_string(), points.join(" ")]))
                .expect("in-memory csv");
            ctx.out.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8"));
        }
    }
    Ok(if result.is_exact() { 0 } else { 1 })
}

pub fn run(cli: Cli) -> Outcome {
    let start = Instant::now();
    let tol = match parse_tol(&cli.tol) {
        Ok(t) => t,
        Err(e) => {
            return Outcome {
                code: 3,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let mut ctx = Ctx {
        tol,
        format: cli.format,
        timing: !cli.no_timestamp,
        out: String::new(),
    };
    let result = match &cli.command {
        Command::Check { id, instance } => run_check(&mut ctx, id, instance),
        Command::Repro { case } => run_repro(&mut ctx, case),
        Command::Fuzz { id, seed, trials, n, bound } => run_fuzz(&mut ctx, id, *seed, *trials, *n, *bound),
        Command::Converge { instance, m_max } => run_converge(&mut ctx, instance, *m_max),
        Command::Gcount { instance } => run_gcount(&mut ctx, instance),
    };
    match result {
        Ok(code) => {
            ctx.stamp(start);
            Outcome {
                code,
                stdout: ctx.out,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: error_code(&e),
            stdout: ctx.out,
            stderr: format!("error: {e}\n"),
        },
    }
}
