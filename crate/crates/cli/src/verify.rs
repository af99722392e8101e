//! Verification suites behind `axy verify`.

use std::time::Instant;

use axy_core::counting::{
    count_bruteforce, count_divisor, sum_bruteforce_prefix, sum_hyperbola, Equation,
};
use axy_core::meanvalue::{
    integral_identity_check, lemma5_lhs, lemma5_lhs_series, lemma5_rhs, lemma6_check,
    mobius_identity_check,
};
use axy_core::Result;
use rayon::prelude::*;

use crate::output::{Cell, OutputRecord};

pub const COLUMNS: [&str; 8] = ["suite", "a", "param", "lhs", "rhs", "gap", "tolerance", "pass"];

pub const LEMMA5_TOL: f64 = 1e-9;
pub const LEMMA6_TOL: f64 = 2.0;
pub const MOBIUS_TOL: f64 = 1e-12;
pub const DEFAULT_T_MAX: u64 = 100_000;
pub const DEFAULT_N_MAX: u64 = 2000;
pub const DEFAULT_LEMMA6_W: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];
pub const GENERAL_COEFF_MAX: u64 = 5;
pub const GENERAL_N_MAX: u64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Lemma5,
    Lemma6,
    Mobius,
    Integral,
    Oracle,
    All,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub a_min: Option<u64>,
    pub a_max: u64,
    pub n_max: u64,
    pub lemma6_w: Vec<u64>,
    pub t_max: u64,
    pub series_w: Option<u64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Case {
    pub suite: &'static str,
    pub a: u64,
    pub param: String,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub elapsed_ms: f64,
}

impl Case {
    pub fn passed(&self) -> bool {
        self.gap <= self.tolerance
    }

    fn into_row(self) -> (Vec<Cell>, f64) {
        let pass = self.passed();
        (
            vec![
                self.suite.into(),
                self.a.into(),
                self.param.into(),
                self.lhs.into(),
                self.rhs.into(),
                self.gap.into(),
                self.tolerance.into(),
                pass.into(),
            ],
            self.elapsed_ms,
        )
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_secs_f64() * 1e3))
}

fn modulus_range(opts: &VerifyOptions, floor: u64) -> Vec<u64> {
    let lo = opts.a_min.unwrap_or(floor).max(floor);
    (lo..=opts.a_max).collect()
}

pub fn lemma5(opts: &VerifyOptions) -> Result<Vec<Case>> {
    let tol = opts.tolerance.unwrap_or(LEMMA5_TOL);
    let mut cases: Vec<Case> = modulus_range(opts, 2)
        .into_par_iter()
        .map(|a| {
            let ((lhs, rhs), ms) = timed(|| Ok((lemma5_lhs(a)?, lemma5_rhs(a)?)))?;
            Ok(Case {
                suite: "lemma5",
                a,
                param: String::new(),
                lhs,
                rhs,
                gap: (lhs - rhs).abs(),
                tolerance: tol,
                elapsed_ms: ms,
            })
        })
        .collect::<Result<_>>()?;
    if let Some(w) = opts.series_w {
        let series: Vec<Case> = modulus_range(opts, 2)
            .into_iter()
            .map(|a| {
                let ((lhs, rhs), ms) = timed(|| Ok((lemma5_lhs_series(a, w)?, lemma5_lhs(a)?)))?;
                Ok(Case {
                    suite: "lemma5-series",
                    a,
                    param: format!("w={w}"),
                    lhs,
                    rhs,
                    gap: (lhs - rhs).abs(),
                    tolerance: 2.0 * a as f64 / w as f64 + 1e-8,
                    elapsed_ms: ms,
                })
            })
            .collect::<Result<_>>()?;
        cases.extend(series);
    }
    Ok(cases)
}

pub fn lemma6(opts: &VerifyOptions) -> Result<Vec<Case>> {
    let tol = opts.tolerance.unwrap_or(LEMMA6_TOL);
    let pairs: Vec<(u64, u64)> = modulus_range(opts, 2)
        .into_iter()
        .flat_map(|a| opts.lemma6_w.iter().map(move |&w| (a, w)))
        .filter(|&(a, w)| w >= a)
        .collect();
    pairs
        .into_par_iter()
        .map(|(a, w)| {
            let (c, ms) = timed(|| lemma6_check(a, w as f64))?;
            Ok(Case {
                suite: "lemma6",
                a,
                param: format!("w={w}"),
                lhs: c.lhs,
                rhs: c.rhs,
                gap: c.scaled_gap,
                tolerance: tol,
                elapsed_ms: ms,
            })
        })
        .collect()
}

pub fn mobius(opts: &VerifyOptions) -> Result<Vec<Case>> {
    let tol = opts.tolerance.unwrap_or(MOBIUS_TOL);
    modulus_range(opts, 2)
        .into_par_iter()
        .map(|a| {
            let (c, ms) = timed(|| mobius_identity_check(a))?;
            Ok(Case {
                suite: "mobius",
                a,
                param: String::new(),
                lhs: c.lhs,
                rhs: c.rhs,
                gap: (c.lhs - c.rhs).abs(),
                tolerance: tol,
                elapsed_ms: ms,
            })
        })
        .collect()
}

pub fn integral(opts: &VerifyOptions) -> Result<Vec<Case>> {
    let t_max = opts.t_max;
    modulus_range(opts, 2)
        .into_par_iter()
        .filter(|&a| t_max >= 10 * a)
        .map(|a| {
            let (c, ms) = timed(|| integral_identity_check(a, t_max))?;
            Ok(Case {
                suite: "integral",
                a,
                param: format!("t_max={t_max}"),
                lhs: c.numeric,
                rhs: c.closed,
                gap: (c.numeric - c.closed).abs(),
                tolerance: opts.tolerance.unwrap_or((a + 2) as f64 / t_max as f64),
                elapsed_ms: ms,
            })
        })
        .collect()
}

/// Mismatch counts between independent counting routes. `lhs` is the number
/// of cases compared, `rhs` the number that agreed, `gap` the mismatches.
pub fn oracle(opts: &VerifyOptions) -> Result<Vec<Case>> {
    let tol = opts.tolerance.unwrap_or(0.0);
    let n_max = opts.n_max;
    let case = |suite, a, param: String, total: u64, bad: u64, ms| Case {
        suite,
        a,
        param,
        lhs: total as f64,
        rhs: (total - bad) as f64,
        gap: bad as f64,
        tolerance: tol,
        elapsed_ms: ms,
    };

    let moduli = modulus_range(opts, 1);
    let mut cases: Vec<Case> = moduli
        .par_iter()
        .map(|&a| {
            let eq = Equation::standard(a)?;
            let (bad, ms) = timed(|| {
                let mut bad = 0u64;
                for n in 0..=n_max {
                    if count_divisor(&eq, n)? != count_bruteforce(&eq, n)? {
                        bad += 1;
                    }
                }
                Ok(bad)
            })?;
            Ok(case("oracle-count", a, format!("n<={n_max}"), n_max + 1, bad, ms))
        })
        .collect::<Result<_>>()?;

    let sums: Vec<Case> = moduli
        .par_iter()
        .filter(|&&a| a >= 2)
        .map(|&a| {
            let (bad, ms) = timed(|| {
                let prefix = sum_bruteforce_prefix(&Equation::standard(a)?, n_max)?;
                let mut bad = 0u64;
                for (n, &s) in prefix.iter().enumerate() {
                    if sum_hyperbola(a, n as u64)? != s {
                        bad += 1;
                    }
                }
                Ok(bad)
            })?;
            Ok(case("oracle-sum", a, format!("N<={n_max}"), n_max + 1, bad, ms))
        })
        .collect::<Result<_>>()?;
    cases.extend(sums);

    let general_n = n_max.min(GENERAL_N_MAX);
    let triples: Vec<(u64, u64, u64)> = moduli
        .iter()
        .filter(|&&a| a <= GENERAL_COEFF_MAX)
        .flat_map(|&a| {
            (1..=GENERAL_COEFF_MAX)
                .flat_map(move |b| (1..=GENERAL_COEFF_MAX).map(move |c| (a, b, c)))
        })
        .collect();
    let general: Vec<Case> = triples
        .into_par_iter()
        .map(|(a, b, c)| {
            let eq = Equation::general(a, b, c)?;
            let (bad, ms) = timed(|| {
                let mut bad = 0u64;
                for n in 0..=general_n {
                    if count_divisor(&eq, n)? != count_bruteforce(&eq, n)? {
                        bad += 1;
                    }
                }
                Ok(bad)
            })?;
            Ok(case(
                "oracle-general",
                a,
                format!("b={b};c={c};n<={general_n}"),
                general_n + 1,
                bad,
                ms,
            ))
        })
        .collect::<Result<_>>()?;
    cases.extend(general);
    Ok(cases)
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Case>> {
    Ok(match suite {
        Suite::Lemma5 => lemma5(opts)?,
        Suite::Lemma6 => lemma6(opts)?,
        Suite::Mobius => mobius(opts)?,
        Suite::Integral => integral(opts)?,
        Suite::Oracle => oracle(opts)?,
        Suite::All => {
            let mut all = lemma5(opts)?;
            all.extend(lemma6(opts)?);
            all.extend(mobius(opts)?);
            all.extend(integral(opts)?);
            all.extend(oracle(opts)?);
            all
        }
    })
}

pub fn to_record(cases: Vec<Case>) -> OutputRecord {
    let mut record = OutputRecord::new("verify", &COLUMNS);
    for c in cases {
        let (row, ms) = c.into_row();
        record.push_row(row, ms);
    }
    record
}
