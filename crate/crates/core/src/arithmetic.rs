//! Exact 64-bit number theory: factorization, multiplicative functions,
//! residue-class counting and primitive roots.

use std::fmt;

use crate::{Error, Result};

/// Trial division bound before switching to Pollard rho.
const TRIAL_LIMIT: u64 = 1_000_000;

/// Miller-Rabin bases that are deterministic for every `n < 2^64`.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Gaps of the mod-30 wheel starting from 7.
const WHEEL_GAPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// An exact, overflow-checked count of solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SolutionCount(u64);

impl SolutionCount {
    pub const ZERO: SolutionCount = SolutionCount(0);

    pub fn new(count: u64) -> Self {
        SolutionCount(count)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn checked_add(self, other: SolutionCount) -> Result<SolutionCount> {
        self.0
            .checked_add(other.0)
            .map(SolutionCount)
            .ok_or(Error::Overflow("solution count"))
    }

    pub fn checked_sub(self, other: SolutionCount) -> Result<SolutionCount> {
        self.0
            .checked_sub(other.0)
            .map(SolutionCount)
            .ok_or(Error::Overflow("solution count (underflow)"))
    }

    pub fn checked_mul(self, other: SolutionCount) -> Result<SolutionCount> {
        self.0
            .checked_mul(other.0)
            .map(SolutionCount)
            .ok_or(Error::Overflow("solution count"))
    }
}

impl From<SolutionCount> for u64 {
    fn from(c: SolutionCount) -> u64 {
        c.0
    }
}

impl fmt::Display for SolutionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Prime factorization of a positive 64-bit integer.
///
/// Primes are strictly increasing and the product of `p^e` over the factors
/// reproduces [`Factorization::value`]. The factorization of 1 is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn num_divisors(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    /// All positive divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = Vec::with_capacity(self.num_divisors() as usize);
        divs.push(1u64);
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                // pk * d divides value, so neither product can overflow.
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Euler's totient. `phi(1) = 1`.
    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// The Moebius function. `mu(1) = 1`.
    pub fn moebius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    fn check_invariants(&self) -> bool {
        let mut prod = 1u64;
        for w in self.factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return false;
            }
        }
        for &(p, e) in &self.factors {
            if e == 0 || !is_prime(p) {
                return false;
            }
            match p.checked_pow(e).and_then(|pe| prod.checked_mul(pe)) {
                Some(v) => prod = v,
                None => return false,
            }
        }
        prod == self.value
    }
}

pub fn divisors(f: &Factorization) -> Vec<u64> {
    f.divisors()
}

pub fn euler_phi(f: &Factorization) -> u64 {
    f.euler_phi()
}

pub fn moebius(f: &Factorization) -> i8 {
    f.moebius()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floor of the square root, computed without trusting the float estimate.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    const BATCH: u64 = 128;
    let f = |x: u64, c: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    for c in 1u64.. {
        let mut y = 2u64;
        let mut x = y;
        let mut ys = y;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y, c);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y, c);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys, c);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard rho exhausted all increments")
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factor `m` by wheel trial division up to 10^6, then Miller-Rabin and
/// Pollard rho on whatever cofactor remains.
pub fn factorize(m: u64) -> Result<Factorization> {
    if m == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = m;
    let mut take = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        take(p, &mut rest);
    }
    let mut p = 7u64;
    let mut gap = 0usize;
    while p <= TRIAL_LIMIT && p * p <= rest {
        take(p, &mut rest);
        p += WHEEL_GAPS[gap];
        gap = (gap + 1) % WHEEL_GAPS.len();
    }
    if rest > 1 {
        let mut large = Vec::new();
        split_large(rest, &mut large);
        large.sort_unstable();
        for q in large {
            match factors.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    let f = Factorization { value: m, factors };
    debug_assert!(f.check_invariants());
    Ok(f)
}

/// `|{1 <= v <= x : v = r (mod a)}|`.
///
/// For `r = a - 1` this is `floor((x + 1) / a)`.
pub fn count_in_progression(x: u64, a: u64, r: u64) -> Result<SolutionCount> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be >= 2, got {a}")));
    }
    if r >= a {
        return Err(Error::InvalidArgument(format!(
            "residue {r} not reduced modulo {a}"
        )));
    }
    Ok(SolutionCount(count_in_progression_unchecked(x, a, r)))
}

#[inline]
pub(crate) fn count_in_progression_unchecked(x: u64, a: u64, r: u64) -> u64 {
    if r == 0 {
        x / a
    } else if x < r {
        0
    } else {
        (x - r) / a + 1
    }
}

/// Smallest-candidate primitive root of an odd prime power `p^e <= 2^31`.
///
/// The root modulo `p` is lifted to `p^e` by the usual test on
/// `g^(p-1) mod p^2`, replacing `g` by `g + p` when it fails.
pub fn primitive_root(pe: u64) -> Result<u64> {
    if !(3..=1 << 31).contains(&pe) {
        return Err(Error::NotOddPrimePower(pe));
    }
    let f = factorize(pe)?;
    let &[(p, e)] = f.factors() else {
        return Err(Error::NotOddPrimePower(pe));
    };
    if p == 2 {
        return Err(Error::NotOddPrimePower(pe));
    }
    let order_factors: Vec<u64> = factorize(p - 1)?.primes().collect();
    let g = (2..p)
        .find(|&g| order_factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root");
    if e == 1 {
        return Ok(g);
    }
    let p2 = p * p;
    if pow_mod(g, p - 1, p2) == 1 {
        Ok(g + p)
    } else {
        Ok(g)
    }
}

/// Multiplicative order of `g` modulo `m`, by direct iteration.
pub fn multiplicative_order(g: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(g, m) != 1 {
        return None;
    }
    let g = g % m;
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, g, m);
        k += 1;
    }
    Some(k)
}
