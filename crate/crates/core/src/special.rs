//! Real special functions: digamma, the Euler constant, and compensated
//! summation for long partial sums.

use std::iter::Sum;

use crate::{Error, Result};

/// Euler-Mascheroni constant, correctly rounded to f64.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// `B_{2k} / (2k)` for `k = 1..=7`.
const DIGAMMA_ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Below this the argument is shifted up with `psi(x) = psi(x + 1) - 1/x`.
const DIGAMMA_SHIFT: f64 = 10.0;

pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// Digamma `psi(x) = Gamma'(x) / Gamma(x)` for `x > 0`.
///
/// Absolute error is below 1e-12 on `[1e-3, 1e6]`.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(Error::NonpositiveArgument(x));
    }
    let mut shift = CompensatedSum::new();
    let mut z = x;
    while z < DIGAMMA_SHIFT {
        shift.add(1.0 / z);
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    // Horner in 1/z^2 for sum_k B_{2k} / (2k z^{2k}).
    let series = DIGAMMA_ASYMPTOTIC
        .iter()
        .rev()
        .fold(0.0, |acc, &c| (acc + c) * inv2);
    Ok(z.ln() - 0.5 / z - series - shift.value())
}

/// Neumaier's improved Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        s.extend(iter);
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    terms.into_iter().sum::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn psi(x: f64) -> f64 {
        digamma(x).unwrap()
    }

    #[test]
    fn digamma_reference_values() {
        assert!((psi(1.0) + 0.577_215_664_901_532_9).abs() <= 1e-12);
        assert!((psi(0.5) + 1.963_510_026_021_423_5).abs() <= 1e-12);
        assert!((psi(2.0) - 0.422_784_335_098_467_1).abs() <= 1e-12);
        assert!((psi(1.0) + euler_gamma()).abs() <= 1e-13);
        // Gauss closed forms
        let g = EULER_GAMMA;
        assert!((psi(0.25) - (-g - 3.0 * LN_2 - PI / 2.0)).abs() <= 1e-12);
        assert!((psi(0.75) - (-g - 3.0 * LN_2 + PI / 2.0)).abs() <= 1e-12);
        assert!((psi(0.5) - (-g - 2.0 * LN_2)).abs() <= 1e-12);
    }

    #[test]
    fn digamma_rejects_nonpositive() {
        for x in [0.0, -1.0, -0.5, f64::NAN, f64::INFINITY] {
            assert!(digamma(x).is_err(), "{x}");
        }
    }

    #[test]
    fn digamma_recurrence() {
        for x in [0.1, 0.5, 1.0, 3.7, 100.0, 9.999, 1e-3, 1e5] {
            assert!((psi(x + 1.0) - psi(x) - 1.0 / x).abs() <= 1e-12, "{x}");
        }
    }

    #[test]
    fn digamma_reflection() {
        for x in [0.25, 0.3, 0.4] {
            let lhs = psi(1.0 - x) - psi(x);
            assert!((lhs - PI / (PI * x).tan()).abs() <= 1e-10, "{x}");
        }
    }

    #[test]
    fn digamma_asymptotic_range() {
        // psi(x) ~ ln x - 1/(2x) - 1/(12 x^2) for very large x
        for x in [1e4, 1e5, 1e6] {
            let approx = f64::ln(x) - 0.5 / x - 1.0 / (12.0 * x * x);
            assert!((psi(x) - approx).abs() <= 1e-12, "{x}");
        }
    }

    #[test]
    fn trigamma_partial_sum_matches_derivative() {
        // psi'(z) = sum_{k>=0} 1/(z+k)^2, tail approximated by 1/(z+K+1/2)
        const K: usize = 100_000;
        for z in [0.3, 1.0, 2.5, 7.0] {
            let h = 1e-5;
            let numeric = (psi(z + h) - psi(z - h)) / (2.0 * h);
            let series = compensated_sum((0..=K).map(|k| 1.0 / ((z + k as f64) * (z + k as f64))))
                + 1.0 / (z + K as f64 + 0.5);
            assert!((numeric - series).abs() <= 1e-6, "z={z}: {numeric} vs {series}");
        }
    }

    #[test]
    fn gamma_from_extrapolated_harmonic_numbers() {
        // H_n - ln n - 1/(2n) + 1/(12 n^2) -> gamma with O(n^-4) error
        let n = 1_000_000u64;
        let h = compensated_sum((1..=n).map(|k| 1.0 / k as f64));
        let nf = n as f64;
        let crude = h - nf.ln() - 1.0 / (2.0 * nf);
        assert!((EULER_GAMMA - crude).abs() <= 1e-10);
        let refined = crude + 1.0 / (12.0 * nf * nf);
        assert!((EULER_GAMMA - refined).abs() <= 1e-14);

        // Richardson on g(n) = H_n - ln n, error ~ 1/(2n)
        let g = |n: u64| compensated_sum((1..=n).map(|k| 1.0 / k as f64)) - (n as f64).ln();
        let r1 = 2.0 * g(200_000) - g(100_000);
        assert!((EULER_GAMMA - r1).abs() <= 1e-10);
    }

    #[test]
    fn compensated_sum_examples() {
        assert_eq!(compensated_sum([1.0, 1.0, 1.0]), 3.0);
        assert_eq!(compensated_sum([1e16, 1.0, -1e16]), 1.0);
        let h = compensated_sum((1..=1_000_000u64).map(|k| 1.0 / k as f64));
        assert!((h - 14.392_726_722_865_724).abs() <= 1e-9);
    }

    #[test]
    fn compensated_sum_error_bound() {
        // 0.1 repeated: exact value known to high precision by construction
        let n = 10_000_000u64;
        let s = compensated_sum((0..n).map(|_| 0.1));
        let exact = 0.1f64 * n as f64; // 0.1 (as f64) times n, rounded once
        let bound = 2.0 * f64::EPSILON * (0.1 * n as f64);
        assert!((s - exact).abs() <= bound);
    }
}
