//! Log-gamma, log-factorial, log-binomial and Beta.
//!
//! Large arguments go through Stirling's series with the remainder split off
//! as a small correction term, so that differences such as `ln B(a, b)` never
//! subtract two large log-gamma values from each other.

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Arguments at or above this use the asymptotic series directly.
const STIRLING_MIN: f64 = 10.0;

/// n! for n = 0..=22; every entry is exactly representable.
const FACTORIALS: [f64; 23] = {
    let mut t = [1.0f64; 23];
    let mut i = 1;
    while i < 23 {
        t[i] = t[i - 1] * i as f64;
        i += 1;
    }
    t
};

/// Stirling remainder `ln Γ(x) - [(x - 1/2) ln x - x + ln √(2π)]` for `x >= 10`.
fn stirling_correction(x: f64) -> f64 {
    // B_{2k} / (2k (2k - 1)), k = 1..=8
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let r = 1.0 / x;
    let r2 = r * r;
    let mut acc = 0.0;
    for &c in C.iter().rev() {
        acc = acc * r2 + c;
    }
    acc * r
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x == x.floor() && x <= 23.0 {
        return FACTORIALS[x as usize - 1].ln();
    }
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_correction(x);
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma_unchecked(shifted) - prod.ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma_unchecked(n as f64 + 1.0)
}

pub(crate) fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    let (p, q) = if a <= b { (a, b) } else { (b, a) };
    let s = p + q;
    if p >= STIRLING_MIN {
        let corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(s);
        -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * (p / s).ln() + q * (-p / s).ln_1p()
    } else if q >= STIRLING_MIN {
        let corr = stirling_correction(q) - stirling_correction(s);
        ln_gamma_unchecked(p) + corr + p - p * s.ln() + (q - 0.5) * (-p / s).ln_1p()
    } else {
        ln_gamma_unchecked(p) + ln_gamma_unchecked(q) - ln_gamma_unchecked(s)
    }
}

/// `ln B(a, b)`; symmetric in its arguments bit for bit.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "beta requires positive arguments, got ({a}, {b})"
        )));
    }
    Ok(ln_beta_unchecked(a, b))
}

/// Beta function `B(x, y) = Γ(x) Γ(y) / Γ(x + y)`.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(f64::exp)
}

/// Exact `C(n, k)` when it fits comfortably in 64 bits.
fn small_binomial(n: u64, k: u64) -> Option<u64> {
    if n > 66 {
        return None;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    Some(c as u64)
}

pub(crate) fn ln_binomial_unchecked(n: u64, k: u64) -> f64 {
    if k == 0 || k == n {
        return 0.0;
    }
    if let Some(c) = small_binomial(n, k) {
        return (c as f64).ln();
    }
    -((n + 1) as f64).ln() - ln_beta_unchecked((n - k + 1) as f64, (k + 1) as f64)
}

/// `ln C(n, k)` for `0 <= k <= n`.
pub fn ln_binomial(n: u64, k: i64) -> Result<f64> {
    if k < 0 || k as u64 > n {
        return Err(Error::domain(format!(
            "binomial C({n}, {k}) outside 0 <= k <= n"
        )));
    }
    Ok(ln_binomial_unchecked(n, k as u64))
}
