//! Independent reference evaluations used by the test suites and `spinphase check`.
//!
//! Nothing here shares a code path with the production kernels: the d-matrix is
//! summed in exact rational arithmetic and the closed-form distributions use
//! exact binomials with plain powers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::spin::{MLevel, SpinJ};

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Exact `C(n, k)` rounded to f64.
pub fn exact_binomial(n: u64, k: u64) -> f64 {
    let c = factorial(n) / (factorial(k) * factorial(n - k));
    c.to_f64().unwrap_or(f64::INFINITY)
}

/// `d^j_{mm'}(π/2)` from the explicit alternating sum in exact rationals.
///
/// `d² = P S² / 4^j` is formed exactly, where `P` is the product of the four
/// factorials and `S` the rational sum; only the final square root is inexact.
pub fn exact_wigner_d_pi2(j: SpinJ, m: MLevel, mp: MLevel) -> f64 {
    let tj = j.twice() as i64;
    let (tm, tmp) = (m.twice() as i64, mp.twice() as i64);
    let jpm = ((tj + tm) / 2) as u64;
    let jmm = ((tj - tm) / 2) as u64;
    let jpmp = ((tj + tmp) / 2) as u64;
    let jmmp = ((tj - tmp) / 2) as u64;
    let shift = (tmp - tm) / 2;

    let mut sum = BigRational::zero();
    let q_lo = 0.max(-shift);
    let q_hi = (jmmp as i64).min(jpm as i64);
    for q in q_lo..=q_hi {
        let den = factorial(jmmp - q as u64)
            * factorial(q as u64)
            * factorial((q + shift) as u64)
            * factorial(jpm - q as u64);
        let mut term = BigRational::new(BigInt::one(), BigInt::from(den));
        if q % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    if sum.is_zero() {
        return 0.0;
    }
    let p = factorial(jpm) * factorial(jmm) * factorial(jpmp) * factorial(jmmp);
    let four_j = BigUint::one() << (tj as usize);
    let d2 = BigRational::new(BigInt::from(p), BigInt::from(four_j)) * &sum * &sum;
    let magnitude = d2.to_f64().expect("finite d^2").sqrt();
    if sum.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Binomial number distribution of the coherent state with polar angle `alpha`,
/// `p(m) = C(2j, j+m) sin^{2j+2m}(α/2) cos^{2j-2m}(α/2)`, indexed by `j + m`.
pub fn coherent_number_closed_form(j: SpinJ, alpha: f64) -> Vec<f64> {
    let n = j.twice() as u64;
    let s = (alpha / 2.0).sin();
    let c = (alpha / 2.0).cos();
    (0..=n)
        .map(|k| exact_binomial(n, k) * s.powi(2 * k as i32) * c.powi(2 * (n - k) as i32))
        .collect()
}

/// Number distribution of `|π/4, π/4⟩ + |π/4, π/4 + π/8⟩`:
/// `2 N² C(2j, j+m) sin^{2j+2m}(π/8) cos^{2j-2m}(π/8) (1 + cos((j+m) π/8))`,
/// with `N²` fixed by summing the closed form to one.
pub fn cat_number_closed_form(j: SpinJ) -> Vec<f64> {
    let n = j.twice() as u64;
    let eighth = std::f64::consts::PI / 8.0;
    let s = eighth.sin();
    let c = eighth.cos();
    let raw: Vec<f64> = (0..=n)
        .map(|k| {
            2.0 * exact_binomial(n, k)
                * s.powi(2 * k as i32)
                * c.powi(2 * (n - k) as i32)
                * (1.0 + (k as f64 * eighth).cos())
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}
