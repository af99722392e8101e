use std::path::PathBuf;
use std::time::Instant;

use axy_core::counting::{
    count_divisor, solutions_bruteforce, sum_bruteforce, sum_hyperbola, Equation,
};
use axy_core::meanvalue::{
    constant_c, constant_c_lattice, evaluate_row, fit_error_exponent, geometric_grid,
    MeanValueRow,
};
use axy_core::{Error, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::output::{Cell, Format, OutputRecord};
use crate::verify::{self, Suite, VerifyOptions};

/// Largest N the per-n summation accepts.
pub const BRUTEFORCE_SUM_LIMIT: u64 = 1_000_000;
/// Largest n for which `count -v` lists solutions.
pub const SOLUTION_LIST_LIMIT: u64 = 1_000_000;
/// Scans touching N at or above this print progress to stderr.
const PROGRESS_THRESHOLD: u64 = 100_000_000;

pub const SCAN_COLUMNS: [&str; 9] = [
    "a", "N", "S", "C_a", "main", "delta", "bound", "ratio", "warn_a_large",
];

#[derive(Debug, Parser)]
#[command(name = "axy", version, about = "Count solutions of axy - x - y = n and check the mean-value asymptotic")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,

    /// Drop the per-row timing footer.
    #[arg(long, global = true)]
    pub no_timings: bool,

    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// R(n): solutions of axy - bx - cy = n.
    Count(CountArgs),
    /// S(N) = sum of R(n) over 0 <= n <= N.
    Sum(CountArgs),
    /// The constant C(a) of the main term.
    Constant(ConstantArgs),
    /// Main term, remainder and error-bound ratio over a geometric N grid.
    Scan(GridArgs),
    /// Numerical identity checks; exits 1 if any case fails.
    Verify(VerifyArgs),
    /// Least-squares exponent of |delta| against N over a geometric grid.
    Fit(GridArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub a: u64,
    /// n for `count`, N for `sum`.
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    #[arg(long, default_value_t = 1)]
    pub c: u64,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[arg(long)]
    pub a: u64,
    /// Tabulate every modulus from --a to --a-max.
    #[arg(long)]
    pub a_max: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub n_min: u64,
    #[arg(long)]
    pub n_max: u64,
    #[arg(long, default_value_t = 10)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub which: Suite,
    #[arg(long)]
    pub a_min: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub a_max: u64,
    /// Range of n (and N) for the counting oracles.
    #[arg(long, default_value_t = verify::DEFAULT_N_MAX)]
    pub n_max: u64,
    /// Cutoffs for the lemma6 suite.
    #[arg(long, value_delimiter = ',', default_values_t = verify::DEFAULT_LEMMA6_W)]
    pub w: Vec<u64>,
    #[arg(long, default_value_t = verify::DEFAULT_T_MAX)]
    pub t_max: u64,
    /// Also compare the lemma5 sum against L(1, chi) series truncated here.
    #[arg(long)]
    pub series_w: Option<u64>,
    /// Override the selected suite's tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

/// Result of one invocation: the record to print and whether verification passed.
pub struct Outcome {
    pub record: OutputRecord,
    pub all_passed: bool,
}

impl From<OutputRecord> for Outcome {
    fn from(record: OutputRecord) -> Self {
        Outcome {
            record,
            all_passed: true,
        }
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Count(args) => cmd_count(args, cli.verbose).map(Into::into),
        Command::Sum(args) => cmd_sum(args).map(Into::into),
        Command::Constant(args) => cmd_constant(args).map(Into::into),
        Command::Scan(args) => cmd_scan(args, cli.verbose).map(Into::into),
        Command::Verify(args) => cmd_verify(args),
        Command::Fit(args) => cmd_fit(args, cli.verbose).map(Into::into),
    }
}

pub fn cmd_count(args: &CountArgs, verbosity: u8) -> Result<OutputRecord> {
    let eq = Equation::general(args.a, args.b, args.c)?;
    let list = verbosity >= 1 && args.n <= SOLUTION_LIST_LIMIT;
    let columns: &[&'static str] = if list {
        &["a", "b", "c", "n", "R", "solutions"]
    } else {
        &["a", "b", "c", "n", "R"]
    };
    let mut record = OutputRecord::new("count", columns)
        .param("a", args.a)
        .param("b", args.b)
        .param("c", args.c)
        .param("n", args.n);
    let start = Instant::now();
    let r = count_divisor(&eq, args.n)?;
    let mut row: Vec<Cell> = vec![
        args.a.into(),
        args.b.into(),
        args.c.into(),
        args.n.into(),
        r.get().into(),
    ];
    if list {
        let sols = solutions_bruteforce(&eq, args.n)?;
        let text: Vec<String> = sols.iter().map(|(x, y)| format!("{x}:{y}")).collect();
        row.push(text.join(";").into());
    }
    record.push_row(row, elapsed_ms(start));
    Ok(record)
}

pub fn cmd_sum(args: &CountArgs) -> Result<OutputRecord> {
    let eq = Equation::general(args.a, args.b, args.c)?;
    let mut record = OutputRecord::new("sum", &["a", "b", "c", "N", "S", "method"])
        .param("a", args.a)
        .param("b", args.b)
        .param("c", args.c)
        .param("N", args.n);
    let start = Instant::now();
    let (s, method) = if eq.is_standard() && eq.a() >= 2 {
        (sum_hyperbola(eq.a(), args.n)?, "hyperbola")
    } else if args.n <= BRUTEFORCE_SUM_LIMIT {
        (sum_bruteforce(&eq, args.n)?, "divisor")
    } else {
        return Err(Error::InvalidArgument(format!(
            "only the standard form with a >= 2 supports N > {BRUTEFORCE_SUM_LIMIT}"
        )));
    };
    record.push_row(
        vec![
            args.a.into(),
            args.b.into(),
            args.c.into(),
            args.n.into(),
            s.get().into(),
            method.into(),
        ],
        elapsed_ms(start),
    );
    Ok(record)
}

pub fn cmd_constant(args: &ConstantArgs) -> Result<OutputRecord> {
    let hi = args.a_max.unwrap_or(args.a);
    if hi < args.a {
        return Err(Error::InvalidArgument("--a-max below --a".into()));
    }
    let mut record = OutputRecord::new("constant", &["a", "C_a", "C_a_lattice"])
        .param("a", args.a)
        .param("a_max", hi);
    for a in args.a..=hi {
        let start = Instant::now();
        let row = vec![a.into(), constant_c(a)?.into(), constant_c_lattice(a)?.into()];
        record.push_row(row, elapsed_ms(start));
    }
    Ok(record)
}

fn grid_rows(args: &GridArgs, verbosity: u8) -> Result<Vec<(MeanValueRow, f64)>> {
    let grid = geometric_grid(args.n_min, args.n_max, args.points)?;
    let progress = verbosity >= 1 || args.n_max >= PROGRESS_THRESHOLD;
    let total = grid.len();
    grid.par_iter()
        .map(|&n| {
            let start = Instant::now();
            let row = evaluate_row(args.a, n)?;
            let ms = elapsed_ms(start);
            if progress {
                eprintln!("a={} N={n}: {ms:.1} ms ({total} rows total)", args.a);
            }
            Ok((row, ms))
        })
        .collect()
}

pub fn scan_row(row: &MeanValueRow) -> Vec<Cell> {
    vec![
        row.a.into(),
        row.n.into(),
        row.s.get().into(),
        row.c_of_a.into(),
        row.main.into(),
        row.delta.into(),
        row.bound.into(),
        row.ratio.into(),
        row.warn_a_large.into(),
    ]
}

pub fn cmd_scan(args: &GridArgs, verbosity: u8) -> Result<OutputRecord> {
    let mut record = OutputRecord::new("scan", &SCAN_COLUMNS)
        .param("a", args.a)
        .param("n_min", args.n_min)
        .param("n_max", args.n_max)
        .param("points", args.points);
    for (row, ms) in grid_rows(args, verbosity)? {
        record.push_row(scan_row(&row), ms);
    }
    Ok(record)
}

pub fn cmd_fit(args: &GridArgs, verbosity: u8) -> Result<OutputRecord> {
    let mut record = OutputRecord::new("fit", &["a", "slope", "intercept", "r_squared", "rows_used"])
        .param("a", args.a)
        .param("n_min", args.n_min)
        .param("n_max", args.n_max)
        .param("points", args.points);
    let timed = grid_rows(args, verbosity)?;
    let start = Instant::now();
    let rows: Vec<MeanValueRow> = timed.iter().map(|(r, _)| *r).collect();
    let fit = fit_error_exponent(&rows)?;
    let total: f64 = timed.iter().map(|(_, ms)| ms).sum::<f64>() + elapsed_ms(start);
    record.push_row(
        vec![
            args.a.into(),
            fit.slope.into(),
            fit.intercept.into(),
            fit.r_squared.into(),
            fit.rows_used.into(),
        ],
        total,
    );
    Ok(record)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    if args.tolerance.is_some() && args.which == Suite::All {
        return Err(Error::InvalidArgument(
            "--tolerance needs a single suite, not `all`".into(),
        ));
    }
    let opts = VerifyOptions {
        a_min: args.a_min,
        a_max: args.a_max,
        n_max: args.n_max,
        lemma6_w: args.w.clone(),
        t_max: args.t_max,
        series_w: args.series_w,
        tolerance: args.tolerance,
    };
    let cases = verify::run(args.which, &opts)?;
    let failed = cases.iter().filter(|c| !c.passed()).count();
    eprintln!("verify: {}/{} cases passed", cases.len() - failed, cases.len());
    let record = verify::to_record(cases)
        .param("suite", suite_name(args.which))
        .param("a_max", args.a_max)
        .param("n_max", args.n_max)
        .param("t_max", args.t_max);
    Ok(Outcome {
        record,
        all_passed: failed == 0,
    })
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Lemma5 => "lemma5",
        Suite::Lemma6 => "lemma6",
        Suite::Mobius => "mobius",
        Suite::Integral => "integral",
        Suite::Oracle => "oracle",
        Suite::All => "all",
    }
}
