//! Wigner rotation-matrix elements `d^j_{m m'}(π/2) = ⟨j m| exp(-i π/2 J_y) |j m'⟩`.
//!
//! The explicit alternating sum over `q` loses roughly thirteen digits to
//! cancellation by `2j = 100`, so production values come from a three-term
//! recurrence instead. Column `m'` of the rotation matrix is the eigenvector of
//! `J_x` with eigenvalue `m'`:
//!
//! ```text
//! √((j-m+1)(j+m)) d_{m-1} + √((j+m+1)(j-m)) d_{m+1} = 2 m' d_m
//! ```
//!
//! Starting from the closed form at `m = j` and recurring inward is stable down
//! to `m = 0`; the lower half follows from `d_{-m,m'} = (-1)^{j-m'} d_{m,m'}`.
//! The alternating sum is kept as [`wigner_d_pi2_alternating`] for small-`j`
//! cross-checks.

use super::gamma::{ln_binomial_unchecked, ln_gamma_unchecked};
use super::signed_log::{compensated_sum, SignedLogValue};
use crate::error::{Error, Result};
use crate::spin::{MLevel, SpinJ};

fn check_level(j: SpinJ, m: MLevel) -> Result<()> {
    MLevel::new(j, m.twice()).map(|_| ())
}

/// `(-1)^n` for integer `n` given as `twice_n / 2`.
fn parity_sign(twice_n: i64) -> f64 {
    debug_assert!(twice_n % 2 == 0);
    if (twice_n / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Column `m'` of `d^j(π/2)`, indexed by `j + m`.
pub fn wigner_d_pi2_column(j: SpinJ, mp: MLevel) -> Result<Vec<f64>> {
    check_level(j, mp)?;
    let tj = j.twice() as i64;
    let tmp = mp.twice() as i64;
    let n = j.dim();
    let mut col = vec![0.0; n];

    // d_{j, m'} = (-1)^{j-m'} √C(2j, j+m') / 2^j
    let start_sign = parity_sign(tj - tmp);
    let ln_start = 0.5 * ln_binomial_unchecked(tj as u64, ((tj + tmp) / 2) as u64)
        - 0.5 * tj as f64 * std::f64::consts::LN_2;
    col[n - 1] = start_sign * ln_start.exp();

    // recur from m = j down to the smallest m >= 0
    let lowest = n / 2;
    let two_mp = tmp as f64;
    let mut above = 0.0;
    for idx in (lowest + 1..n).rev() {
        let tm = 2 * idx as i64 - tj; // 2m for this index
        let up = (((tj + tm) / 2 + 1) * ((tj - tm) / 2)) as f64; // (j+m+1)(j-m)
        let down = (((tj - tm) / 2 + 1) * ((tj + tm) / 2)) as f64; // (j-m+1)(j+m)
        let next = (two_mp * col[idx] - up.sqrt() * above) / down.sqrt();
        above = col[idx];
        col[idx - 1] = next;
    }

    // mirror: d_{-m,m'} = (-1)^{j-m'} d_{m,m'}
    for idx in 0..n / 2 {
        col[idx] = start_sign * col[n - 1 - idx];
    }
    Ok(col)
}

/// Single element `d^j_{m,m'}(π/2)`.
pub fn wigner_d_pi2(j: SpinJ, m: MLevel, mp: MLevel) -> Result<f64> {
    check_level(j, m)?;
    let col = wigner_d_pi2_column(j, mp)?;
    Ok(col[m.index(j)])
}

/// Column `m' = 0` for integer `j`, with exact zeros where `j + m` is odd.
pub fn wigner_d_m0_pi2_column(j: SpinJ) -> Result<Vec<f64>> {
    if !j.is_integer() {
        return Err(Error::domain(format!("d^j_(m0) needs integer j, got {j}")));
    }
    let mut col = wigner_d_pi2_column(j, MLevel::new(j, 0)?)?;
    for (idx, d) in col.iter_mut().enumerate() {
        // j + m == idx
        if idx % 2 == 1 {
            *d = 0.0;
        }
    }
    Ok(col)
}

/// `d^j_{m0}(π/2)`; exactly zero when `j + m` is odd.
pub fn wigner_d_m0_pi2(j: SpinJ, m: MLevel) -> Result<f64> {
    check_level(j, m)?;
    let col = wigner_d_m0_pi2_column(j)?;
    Ok(col[m.index(j)])
}

/// Direct evaluation of the explicit alternating sum
///
/// ```text
/// d^j_{mm'}(π/2) = √((j+m)!(j-m)!(j+m')!(j-m')!) / 2^j
///                  Σ_q (-1)^q / [(j-m'-q)! q! (q+m'-m)! (j+m-q)!]
/// ```
///
/// in signed-log form with a compensated, magnitude-sorted sum. Cancellation
/// makes this unreliable beyond `2j ≈ 30`; use [`wigner_d_pi2`] instead.
pub fn wigner_d_pi2_alternating(j: SpinJ, m: MLevel, mp: MLevel) -> Result<f64> {
    check_level(j, m)?;
    check_level(j, mp)?;
    let tj = j.twice() as i64;
    let (tm, tmp) = (m.twice() as i64, mp.twice() as i64);
    let jpm = (tj + tm) / 2;
    let jmm = (tj - tm) / 2;
    let jpmp = (tj + tmp) / 2;
    let jmmp = (tj - tmp) / 2;
    let shift = (tmp - tm) / 2; // m' - m
    let lnf = |n: i64| ln_gamma_unchecked(n as f64 + 1.0);

    let prefactor = 0.5 * (lnf(jpm) + lnf(jmm) + lnf(jpmp) + lnf(jmmp))
        - 0.5 * tj as f64 * std::f64::consts::LN_2;
    let q_lo = 0.max(-shift);
    let q_hi = jmmp.min(jpm);
    let mut terms: Vec<SignedLogValue> = (q_lo..=q_hi)
        .map(|q| {
            let sign = if q % 2 == 0 { 1 } else { -1 };
            let ln_den = lnf(jmmp - q) + lnf(q) + lnf(q + shift) + lnf(jpm - q);
            SignedLogValue::new(sign, prefactor - ln_den)
        })
        .collect();
    Ok(compensated_sum(&mut terms).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::exact_wigner_d_pi2;

    fn lvl(j: SpinJ, twice_m: i32) -> MLevel {
        MLevel::new(j, twice_m).unwrap()
    }

    #[test]
    fn trivial_values() {
        let half = SpinJ::from_twice(1);
        let d = wigner_d_pi2(half, lvl(half, 1), lvl(half, 1)).unwrap();
        assert!((d - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        let one = SpinJ::integer(1);
        assert!(wigner_d_pi2(one, lvl(one, 0), lvl(one, 0)).unwrap().abs() < 1e-15);

        let zero = SpinJ::integer(0);
        assert_eq!(wigner_d_m0_pi2(zero, lvl(zero, 0)).unwrap(), 1.0);

        let two = SpinJ::integer(2);
        assert_eq!(wigner_d_m0_pi2(two, lvl(two, 2)).unwrap(), 0.0);
    }

    #[test]
    fn small_j_against_exact_rational() {
        // (j=2, m=1, m'=0) and (j=1, m=1, m'=0) from exact rational evaluation
        let two = SpinJ::integer(2);
        let want = exact_wigner_d_pi2(two, lvl(two, 2), lvl(two, 0));
        let got = wigner_d_pi2(two, lvl(two, 2), lvl(two, 0)).unwrap();
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        // closed form: d^2_{10}(β) = -√(3/2) sinβ cosβ vanishes at π/2
        assert!(got.abs() < 1e-15);

        let one = SpinJ::integer(1);
        let want = exact_wigner_d_pi2(one, lvl(one, 2), lvl(one, 0));
        let got = wigner_d_m0_pi2(one, lvl(one, 2)).unwrap();
        assert!((got * got - 0.5).abs() < 1e-15);
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_exact_up_to_2j_30() {
        for tj in 0..=30u32 {
            let j = SpinJ::from_twice(tj);
            for mp in j.levels() {
                let col = wigner_d_pi2_column(j, mp).unwrap();
                for m in j.levels() {
                    let exact = exact_wigner_d_pi2(j, m, mp);
                    let got = col[m.index(j)];
                    assert!(
                        (got - exact).abs() < 1e-13,
                        "2j={tj} m={m} m'={mp}: {got} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn alternating_sum_agrees_at_small_j() {
        for tj in 0..=16u32 {
            let j = SpinJ::from_twice(tj);
            for mp in j.levels() {
                for m in j.levels() {
                    let a = wigner_d_pi2_alternating(j, m, mp).unwrap();
                    let b = wigner_d_pi2(j, m, mp).unwrap();
                    assert!((a - b).abs() < 1e-13, "2j={tj} m={m} m'={mp}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn unitarity_to_2j_100() {
        for tj in 0..=100u32 {
            let j = SpinJ::from_twice(tj);
            for mp in j.levels() {
                let col = wigner_d_pi2_column(j, mp).unwrap();
                let norm: f64 = col.iter().map(|d| d * d).sum();
                assert!((norm - 1.0).abs() < 1e-10, "2j={tj} m'={mp}: {norm}");
            }
        }
    }

    #[test]
    fn transpose_symmetry() {
        for tj in [3u32, 8, 21, 40] {
            let j = SpinJ::from_twice(tj);
            for m in j.levels() {
                for mp in j.levels() {
                    let a = wigner_d_pi2(j, m, mp).unwrap();
                    let b = wigner_d_pi2(j, mp, m).unwrap();
                    let sign = parity_sign((m.twice() - mp.twice()) as i64);
                    assert!((a - sign * b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn parity_zeros_are_exact() {
        for jj in 0..30 {
            let j = SpinJ::integer(jj);
            let col = wigner_d_m0_pi2_column(j).unwrap();
            for (idx, d) in col.iter().enumerate() {
                if idx % 2 == 1 {
                    assert_eq!(*d, 0.0);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_levels() {
        let j = SpinJ::integer(2);
        let other = SpinJ::integer(5);
        let big = MLevel::integer(other, 4).unwrap();
        assert!(wigner_d_pi2(j, big, lvl(j, 0)).is_err());
        let half = SpinJ::from_twice(3);
        assert!(wigner_d_m0_pi2(half, lvl(half, 1)).is_err());
    }
}
