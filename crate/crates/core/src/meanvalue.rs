//! Main term, remainder and error-bound ratio for `S_a(N)`, plus numerical
//! checks of the constant's ingredients.
//!
//! All logarithms are natural.

use rayon::prelude::*;

use crate::arithmetic::{factorize, SolutionCount};
use crate::characters::CharacterGroup;
use crate::characters::ResidueHarmonicSums;
use crate::counting::sum_hyperbola;
use crate::special::{digamma, CompensatedSum, EULER_GAMMA};
use crate::{Error, Result};

/// Imaginary residue tolerated in the character sum before it is reported.
const IMAGINARY_TOLERANCE: f64 = 1e-10;

fn require_modulus(a: u64) -> Result<()> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be >= 2, got {a}")));
    }
    Ok(())
}

/// `sum_{p | a} ln p / (p - 1)`.
fn prime_log_sum(a: u64) -> Result<f64> {
    let f = factorize(a)?;
    Ok(f.primes()
        .map(|p| (p as f64).ln() / (p - 1) as f64)
        .sum::<CompensatedSum>()
        .value())
}

fn digamma_at_residue(a: u64) -> Result<f64> {
    digamma((a - 1) as f64 / a as f64)
}

/// `C(a) = 2 psi((a-1)/a) + 2 sum_{p|a} ln p/(p-1) + ln a + 2 gamma + 1`.
pub fn constant_c(a: u64) -> Result<f64> {
    require_modulus(a)?;
    let terms = [
        2.0 * digamma_at_residue(a)?,
        2.0 * prime_log_sum(a)?,
        (a as f64).ln(),
        2.0 * EULER_GAMMA,
        1.0,
    ];
    Ok(terms.into_iter().sum::<CompensatedSum>().value())
}

/// `2 psi((a-1)/a) + ln a + 1`: the linear coefficient that the exact
/// hyperbola count converges to.
///
/// It differs from [`constant_c`] by `2 gamma + 2 sum_{p|a} ln p/(p-1)`.
/// Measured remainders against this constant stay of order `sqrt(aN)`,
/// while remainders against [`constant_c`] grow linearly in `N`.
pub fn constant_c_lattice(a: u64) -> Result<f64> {
    require_modulus(a)?;
    let terms = [2.0 * digamma_at_residue(a)?, (a as f64).ln(), 1.0];
    Ok(terms.into_iter().sum::<CompensatedSum>().value())
}

/// `(1/a)(N ln N - C N)` for a given constant `C`.
pub fn main_term_with(a: u64, n: f64, c: f64) -> Result<f64> {
    require_modulus(a)?;
    if n.is_nan() || n <= 0.0 {
        return Err(Error::InvalidArgument(format!("N must be positive, got {n}")));
    }
    Ok((n * n.ln() - c * n) / a as f64)
}

/// `(1/a)(N ln N - C(a) N)`.
pub fn main_term(a: u64, n: f64) -> Result<f64> {
    main_term_with(a, n, constant_c(a)?)
}

/// `phi(a) sqrt(N/a) (ln aN)^2`.
pub fn error_bound(a: u64, n: u64) -> Result<f64> {
    let phi = factorize(a)?.euler_phi() as f64;
    let (af, nf) = (a as f64, n as f64);
    Ok(phi * (nf / af).sqrt() * (af * nf).ln().powi(2))
}

/// `a > N^(1/3) / ln N`: the main term is not expected to dominate.
pub fn a_too_large(a: u64, n: u64) -> bool {
    let nf = n as f64;
    a as f64 > nf.cbrt() / nf.ln()
}

/// One `(a, N)` record of the mean-value decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueRow {
    pub a: u64,
    pub n: u64,
    pub s: SolutionCount,
    pub c_of_a: f64,
    pub main: f64,
    pub delta: f64,
    pub bound: f64,
    pub ratio: f64,
    pub warn_a_large: bool,
}

impl MeanValueRow {
    /// Build a row around an already computed `S_a(N)`.
    pub fn from_count(a: u64, n: u64, s: SolutionCount) -> Result<Self> {
        Self::with_constant(a, n, s, constant_c(a)?)
    }

    pub fn with_constant(a: u64, n: u64, s: SolutionCount, c: f64) -> Result<Self> {
        require_modulus(a)?;
        if n == 0 {
            return Err(Error::InvalidArgument("N >= 1 required".into()));
        }
        let main = main_term_with(a, n as f64, c)?;
        let delta = s.get() as f64 - main;
        let bound = error_bound(a, n)?;
        Ok(MeanValueRow {
            a,
            n,
            s,
            c_of_a: c,
            main,
            delta,
            bound,
            ratio: delta.abs() / bound,
            warn_a_large: a_too_large(a, n),
        })
    }

    pub fn relative_delta(&self) -> f64 {
        (self.delta / self.main).abs()
    }
}

/// Row with `S_a(N)` from the hyperbola sum.
pub fn evaluate_row(a: u64, n: u64) -> Result<MeanValueRow> {
    require_modulus(a)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N >= 1 required".into()));
    }
    MeanValueRow::from_count(a, n, sum_hyperbola(a, n)?)
}

/// Rows for an increasing grid, evaluated in parallel and returned in grid order.
pub fn scan(a: u64, grid: &[u64]) -> Result<Vec<MeanValueRow>> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("N grid must be strictly increasing".into()));
    }
    grid.par_iter().map(|&n| evaluate_row(a, n)).collect()
}

/// `points` values from `n_min` to `n_max`, evenly spaced in `ln N`, rounded
/// and deduplicated. Both endpoints are included exactly.
pub fn geometric_grid(n_min: u64, n_max: u64, points: usize) -> Result<Vec<u64>> {
    if n_min == 0 || n_min > n_max || points == 0 {
        return Err(Error::InvalidArgument(format!(
            "bad grid: n_min={n_min} n_max={n_max} points={points}"
        )));
    }
    if points == 1 {
        return Ok(vec![n_min]);
    }
    let (lo, hi) = ((n_min as f64).ln(), (n_max as f64).ln());
    let step = (hi - lo) / (points - 1) as f64;
    let mut grid: Vec<u64> = (0..points)
        .map(|i| match i {
            0 => n_min,
            i if i == points - 1 => n_max,
            i => ((lo + step * i as f64).exp().round() as u64).clamp(n_min, n_max),
        })
        .collect();
    grid.dedup();
    Ok(grid)
}

/// Least-squares fit of `ln |delta|` against `ln N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub rows_used: usize,
}

pub fn fit_error_exponent(rows: &[MeanValueRow]) -> Result<ExponentFit> {
    if let Some(first) = rows.first() {
        if rows.iter().any(|r| r.a != first.a) {
            return Err(Error::DegenerateFit("rows mix different moduli"));
        }
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.delta != 0.0 && r.delta.is_finite())
        .map(|r| ((r.n as f64).ln(), r.delta.abs().ln()))
        .collect();
    if points.len() < 4 {
        return Err(Error::InsufficientRows(points.len()));
    }
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all rows share the same N"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    if !slope.is_finite() {
        return Err(Error::DegenerateFit("non-finite slope"));
    }
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        rows_used: points.len(),
    })
}

/// `(1/phi(a)) sum_{chi != chi_0} conj(chi(-1)) L(1, chi)` with `L(1, chi)` from digamma values.
pub fn lemma5_lhs(a: u64) -> Result<f64> {
    character_parity_sum(a, |chi| chi.l_one_digamma())
}

/// As [`lemma5_lhs`], with `L(1, chi)` replaced by its series truncated at `w`.
pub fn lemma5_lhs_series(a: u64, w: u64) -> Result<f64> {
    require_modulus(a)?;
    let sums = ResidueHarmonicSums::new(a, w);
    character_parity_sum(a, |chi| Ok(sums.l_one(chi)))
}

fn character_parity_sum<F>(a: u64, l_one: F) -> Result<f64>
where
    F: Fn(&crate::characters::DirichletCharacter<'_>) -> Result<num_complex::Complex64>,
{
    require_modulus(a)?;
    let group = CharacterGroup::new(a)?;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for chi in group.characters().filter(|c| !c.is_principal()) {
        // chi(-1) is real, so it equals its conjugate
        let z = l_one(&chi)? * f64::from(chi.parity());
        re.add(z.re);
        im.add(z.im);
    }
    let phi = group.order() as f64;
    let (re, im) = (re.value() / phi, im.value() / phi);
    if im.abs() > IMAGINARY_TOLERANCE {
        return Err(Error::ImaginaryResidue(im));
    }
    Ok(re)
}

/// `-(1/a)(psi((a-1)/a) + sum_{p|a} ln p/(p-1) + ln a + gamma)`.
pub fn lemma5_rhs(a: u64) -> Result<f64> {
    require_modulus(a)?;
    let terms = [
        digamma_at_residue(a)?,
        prime_log_sum(a)?,
        (a as f64).ln(),
        EULER_GAMMA,
    ];
    Ok(-terms.into_iter().sum::<CompensatedSum>().value() / a as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma6Check {
    pub lhs: f64,
    pub rhs: f64,
    /// `w |lhs - rhs|`
    pub scaled_gap: f64,
}

/// `sum_{n <= w, n = -1 (a)} 1/n` against `(1/a)(ln w - psi((a-1)/a) - ln a)`.
pub fn lemma6_check(a: u64, w: f64) -> Result<Lemma6Check> {
    require_modulus(a)?;
    if w.is_nan() || w < a as f64 || !w.is_finite() {
        return Err(Error::InvalidArgument(format!("need w >= a, got w={w} a={a}")));
    }
    let top = w.floor() as u64;
    let mut lhs = CompensatedSum::new();
    let mut n = a - 1;
    while n <= top {
        lhs.add(1.0 / n as f64);
        n += a;
    }
    let lhs = lhs.value();
    let af = a as f64;
    let rhs = (w.ln() - digamma_at_residue(a)? - af.ln()) / af;
    Ok(Lemma6Check {
        lhs,
        rhs,
        scaled_gap: w * (lhs - rhs).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusCheck {
    /// `-sum_{m|a} mu(m) ln m / m` by divisor enumeration
    pub lhs: f64,
    /// `(phi(a)/a) sum_{p|a} ln p/(p-1)` by prime enumeration
    pub rhs: f64,
}

pub fn mobius_identity_check(a: u64) -> Result<MobiusCheck> {
    require_modulus(a)?;
    let f = factorize(a)?;
    let lhs = f
        .divisors()
        .into_iter()
        .filter_map(|m| {
            let mu = factorize(m).ok()?.moebius();
            (mu != 0).then(|| -f64::from(mu) * (m as f64).ln() / m as f64)
        })
        .sum::<CompensatedSum>()
        .value();
    let rhs = f.euler_phi() as f64 / a as f64 * prime_log_sum(a)?;
    Ok(MobiusCheck { lhs, rhs })
}

/// `a {(t+1)/a} - {t} - 1`.
pub fn fractional_integrand(a: u64, t: f64) -> f64 {
    let af = a as f64;
    let q = (t + 1.0) / af;
    af * (q - q.floor()) - (t - t.floor()) - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralCheck {
    pub numeric: f64,
    pub closed: f64,
}

/// `int_1^inf (a{(t+1)/a} - {t} - 1) / t^2 dt` against `psi((a-1)/a) + ln a + gamma`.
///
/// Both fractional parts jump only at integers, so on each `[k, k+1]` the
/// numerator is affine; it is recovered from two interior samples and the
/// piece `int (alpha t + beta)/t^2` is integrated in closed form. Beyond
/// `t_max` the integrand is replaced by its mean over one period.
pub fn integral_identity_check(a: u64, t_max: u64) -> Result<IntegralCheck> {
    require_modulus(a)?;
    if t_max < 10 * a {
        return Err(Error::InvalidArgument(format!(
            "t_max must be at least 10a, got {t_max}"
        )));
    }
    let mut acc = CompensatedSum::new();
    for k in 1..t_max {
        acc.add(affine_piece_integral(a, k as f64, (k + 1) as f64));
    }
    let period_mean = (0..a)
        .map(|k| fractional_integrand(a, k as f64 + 0.5))
        .sum::<f64>()
        / a as f64;
    acc.add(period_mean / t_max as f64);
    let closed = digamma_at_residue(a)? + (a as f64).ln() + EULER_GAMMA;
    Ok(IntegralCheck {
        numeric: acc.value(),
        closed,
    })
}

fn affine_piece_integral(a: u64, t0: f64, t1: f64) -> f64 {
    let h = t1 - t0;
    let (s0, s1) = (t0 + h / 3.0, t0 + 2.0 * h / 3.0);
    let (f0, f1) = (fractional_integrand(a, s0), fractional_integrand(a, s1));
    let alpha = (f1 - f0) / (s1 - s0);
    let beta = f0 - alpha * s0;
    alpha * (t1 / t0).ln() + beta * (1.0 / t0 - 1.0 / t1)
}
