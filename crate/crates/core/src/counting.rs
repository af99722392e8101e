//! Exact counts of `R_a(n)` and `S_a(N) = sum_{0 <= n <= N} R_a(n)`.
//!
//! Three independent routes: solving the equation for `y` at each `x`,
//! enumerating divisors of `an + bc` in the right residue classes, and a
//! hyperbola sum over `uv <= aN + 1` with `u = v = -1 (mod a)`.

use rayon::prelude::*;

use crate::arithmetic::{count_in_progression_unchecked, factorize, isqrt, SolutionCount};
use crate::{Error, Result};

/// Below this many terms the hyperbola sum runs sequentially.
const PARALLEL_TERMS: u64 = 1 << 16;
const CHUNK_TERMS: u64 = 1 << 14;

/// `axy - bx - cy = n`, equivalently `(ax - c)(ay - b) = an + bc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Equation {
    a: u64,
    b: u64,
    c: u64,
}

impl Equation {
    /// The standard form `axy - x - y = n`.
    pub fn standard(a: u64) -> Result<Self> {
        Self::general(a, 1, 1)
    }

    pub fn general(a: u64, b: u64, c: u64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::InvalidArgument(format!(
                "coefficients must be positive, got a={a} b={b} c={c}"
            )));
        }
        Ok(Equation { a, b, c })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn is_standard(&self) -> bool {
        self.b == 1 && self.c == 1
    }

    /// `an + bc`, the right-hand side of the factored form.
    pub fn product_target(&self, n: u64) -> Result<u64> {
        self.a
            .checked_mul(n)
            .and_then(|an| an.checked_add(self.b.checked_mul(self.c)?))
            .ok_or(Error::Overflow("an + bc"))
    }
}

/// All ordered positive solutions `(x, y)`, found by solving for `y` at
/// every admissible `x`: `y = (n + bx) / (ax - c)`.
pub fn solutions_bruteforce(eq: &Equation, n: u64) -> Result<Vec<(u64, u64)>> {
    let Equation { a, b, c } = *eq;
    let target = eq.product_target(n)?;
    // ax - c is a positive divisor of an + bc
    let x_max = target.checked_add(c).ok_or(Error::Overflow("an + bc + c"))? / a;
    let mut out = Vec::new();
    for x in 1..=x_max {
        let ax = a * x;
        if ax <= c {
            continue;
        }
        let num = n
            .checked_add(b.checked_mul(x).ok_or(Error::Overflow("bx"))?)
            .ok_or(Error::Overflow("n + bx"))?;
        let den = ax - c;
        if num % den == 0 {
            let y = num / den;
            if y >= 1 {
                debug_assert_eq!(
                    (a as u128 * x as u128 * y as u128) as i128 - (b * x) as i128 - (c * y) as i128,
                    n as i128
                );
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

pub fn count_bruteforce(eq: &Equation, n: u64) -> Result<SolutionCount> {
    Ok(SolutionCount::new(solutions_bruteforce(eq, n)?.len() as u64))
}

/// Divisors `u` of `an + bc` with `u = -c (mod a)` and `(an + bc)/u = -b (mod a)`.
pub fn count_divisor(eq: &Equation, n: u64) -> Result<SolutionCount> {
    let Equation { a, b, c } = *eq;
    let m = eq.product_target(n)?;
    let want_u = (a - c % a) % a;
    let want_v = (a - b % a) % a;
    let mut count = 0u64;
    for u in factorize(m)?.divisors() {
        if u % a != want_u {
            continue;
        }
        let v = m / u;
        if eq.is_standard() {
            // uv = 1 (mod a) forces v = -1 once u = -1
            debug_assert_eq!(v % a, want_v);
            count += 1;
        } else if v % a == want_v {
            count += 1;
        }
    }
    Ok(SolutionCount::new(count))
}

/// `sum_{n=0}^{N} R(n)` by the divisor method, one `n` at a time.
pub fn sum_bruteforce(eq: &Equation, big_n: u64) -> Result<SolutionCount> {
    sum_bruteforce_prefix(eq, big_n)?
        .last()
        .copied()
        .ok_or(Error::InvalidArgument("empty range".into()))
}

/// Running sums: element `k` is `sum_{n=0}^{k} R(n)`.
pub fn sum_bruteforce_prefix(eq: &Equation, big_n: u64) -> Result<Vec<SolutionCount>> {
    let mut acc = SolutionCount::ZERO;
    let mut out = Vec::with_capacity(big_n as usize + 1);
    for n in 0..=big_n {
        acc = acc.checked_add(count_divisor(eq, n)?)?;
        out.push(acc);
    }
    Ok(out)
}

/// `S_a(N)` for the standard form in `O(sqrt(aN + 1) / a)` steps:
///
/// `2 sum_{u <= sqrt M, u = -1 (a)} floor((M/u + 1)/a) - floor((sqrt M + 1)/a)^2`
///
/// with `M = aN + 1`. Integer-only, so the chunked parallel evaluation is
/// bit-identical to the sequential one.
pub fn sum_hyperbola(a: u64, big_n: u64) -> Result<SolutionCount> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!(
            "hyperbola sum needs a >= 2, got {a}"
        )));
    }
    let m = a
        .checked_mul(big_n)
        .and_then(|an| an.checked_add(1))
        .filter(|&m| m <= i64::MAX as u64)
        .ok_or(Error::Overflow("aN + 1"))?;
    let root = isqrt(m);
    let r = a - 1;
    // u = r, r + a, ..., up to root
    let terms = count_in_progression_unchecked(root, a, r);
    let term = |j: u64| count_in_progression_unchecked(m / (r + j * a), a, r);

    let half = if terms >= PARALLEL_TERMS {
        let chunks = terms.div_ceil(CHUNK_TERMS);
        (0..chunks)
            .into_par_iter()
            .map(|k| {
                let lo = k * CHUNK_TERMS;
                let hi = (lo + CHUNK_TERMS).min(terms);
                (lo..hi).try_fold(0u64, |s, j| s.checked_add(term(j)))
            })
            .try_reduce(|| 0, |x, y| x.checked_add(y))
    } else {
        (0..terms).try_fold(0u64, |s, j| s.checked_add(term(j)))
    }
    .ok_or(Error::Overflow("hyperbola sum"))?;

    let twice = SolutionCount::new(half).checked_mul(SolutionCount::new(2))?;
    let square = SolutionCount::new(terms).checked_mul(SolutionCount::new(terms))?;
    twice.checked_sub(square)
}
