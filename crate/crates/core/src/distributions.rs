//! Q-function, number distribution `p(m)` and phase distribution `p(φ)`.
//!
//! The phase distribution is `p(φ) = Σ_k c_k e^{ikφ}` with
//! `c_k = Σ_{m-m'=k} ρ_{mm'} K(m,m')`, where the kernel is
//!
//! ```text
//! K(m,m') = (2j+1)/(4π) √(C(2j,j+m) C(2j,j+m')) 2 B(j+s+1, j-s+1),   s = (m+m')/2
//!         = B(j+s+1, j-s+1) / (2π √(B(j+m+1, j-m+1) B(j+m'+1, j-m'+1)))
//! ```
//!
//! The second form is what is evaluated, in the log domain.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, gauss_legendre_on};
use crate::specfun::ln_beta_unchecked;
use crate::spin::{MLevel, SpinJ};
use crate::states::{check_theta, coherent_amplitudes, coherent_magnitudes, DensityMatrix};

/// Nodes added to the oracle's θ rule beyond `2j + 2`; 16 brings the error
/// below 1e-15 for every `j` tried, down to `j = 1`.
pub const ORACLE_EXTRA_NODES: usize = 16;

/// Smallest uniform grid that resolves harmonics up to `2j`.
pub fn min_grid(j: SpinJ) -> usize {
    2 * j.twice() as usize + 2
}

/// `Q(θ,φ) = ⟨θ,φ|ρ|θ,φ⟩`.
pub fn q_function(rho: &DensityMatrix, theta: f64, phi: f64) -> Result<f64> {
    check_theta(theta)?;
    if !phi.is_finite() {
        return Err(Error::domain("phi must be finite"));
    }
    let c = coherent_amplitudes(rho.j(), theta, phi);
    Ok(rho.expectation(&c).re)
}

/// `(2j+1)/(4π) ∬ Q sinθ dθ dφ` with Gauss–Legendre in `cos θ` and a uniform
/// sum in `φ`. Sizes below 8 are raised to 8.
pub fn q_normalization_check(rho: &DensityMatrix, n_theta: usize, n_phi: usize) -> f64 {
    let j = rho.j();
    let n_theta = n_theta.max(8);
    let n_phi = n_phi.max(8);
    let (u, w) = gauss_legendre(n_theta);
    let mags: Vec<Vec<f64>> = u.iter().map(|u| coherent_magnitudes(j, u.acos())).collect();
    let mut total = 0.0;
    for i in 0..n_phi {
        let phi = 2.0 * PI * i as f64 / n_phi as f64;
        let phases: Vec<Complex64> = (0..j.dim())
            .map(|k| Complex64::from_polar(1.0, -(k as f64) * phi))
            .collect();
        let mut line = 0.0;
        for (mag, wt) in mags.iter().zip(&w) {
            let c: Vec<Complex64> = mag.iter().zip(&phases).map(|(m, e)| m * e).collect();
            line += wt * rho.expectation(&c).re;
        }
        total += line;
    }
    (j.dim() as f64) / (4.0 * PI) * total * (2.0 * PI / n_phi as f64)
}

/// `p(m) = ⟨j,m|ρ|j,m⟩`, indexed by `j + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberDistribution {
    j: SpinJ,
    p: Vec<f64>,
}

impl NumberDistribution {
    pub fn j(&self) -> SpinJ {
        self.j
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, m: MLevel) -> f64 {
        self.p[m.index(self.j)]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.p.iter().copied().fold(0.0, f64::max)
    }
}

pub fn number_distribution(rho: &DensityMatrix) -> Result<NumberDistribution> {
    let n = rho.dim();
    let mut p = Vec::with_capacity(n);
    for i in 0..n {
        let d = rho.get(i, i).re;
        if d < -1e-10 {
            return Err(Error::Consistency(format!(
                "negative population {d:e} at index {i}"
            )));
        }
        p.push(if d < 0.0 && d > -1e-14 { 0.0 } else { d });
    }
    Ok(NumberDistribution { j: rho.j(), p })
}

/// Mean and variance of `j + m`.
pub fn number_moments(dist: &NumberDistribution) -> (f64, f64) {
    let mean: f64 = dist.p.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let var: f64 = dist
        .p
        .iter()
        .enumerate()
        .map(|(k, p)| (k as f64 - mean).powi(2) * p)
        .sum();
    (mean, var)
}

/// Symmetric positive weight matrix `K(m,m')`, row-major over `j + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseKernel {
    j: SpinJ,
    k: Vec<f64>,
}

impl PhaseKernel {
    pub fn j(&self) -> SpinJ {
        self.j
    }

    pub fn get(&self, m: MLevel, mp: MLevel) -> f64 {
        self.at(m.index(self.j), mp.index(self.j))
    }

    /// By basis indices `j + m`, `j + m'`.
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.k[row * self.j.dim() + col]
    }
}

pub fn phase_kernel(j: SpinJ) -> PhaseKernel {
    let n = j.dim();
    let tj = j.twice() as f64;
    // ln B(j+s+1, j-s+1) tabulated by row+col = 2s + 2j
    let ln_b: Vec<f64> = (0..2 * n - 1)
        .map(|sum| {
            let two_s = sum as f64 - tj;
            ln_beta_unchecked((tj + two_s) / 2.0 + 1.0, (tj - two_s) / 2.0 + 1.0)
        })
        .collect();
    let ln_2pi = (2.0 * PI).ln();
    let mut k = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let ln_k = ln_b[r + c] - 0.5 * (ln_b[2 * r] + ln_b[2 * c]);
            k[r * n + c] = (ln_k - ln_2pi).exp();
        }
    }
    PhaseKernel { j, k }
}

/// `p(φ)` as Fourier coefficients plus samples on `φ_i = -π + 2πi/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    j: SpinJ,
    fourier: Vec<Complex64>,
    grid_phi: Vec<f64>,
    grid_p: Vec<f64>,
}

fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -PI + 2.0 * PI * i as f64 / n as f64)
        .collect()
}

/// `Σ_k c_k e^{ikφ_i}` on the uniform grid, reducing `k i` modulo `n` so every
/// angle comes from one table.
fn synthesize(fourier: &[Complex64], band: usize, n: usize) -> Vec<f64> {
    let table: Vec<(f64, f64)> = (0..n)
        .map(|r| (2.0 * PI * r as f64 / n as f64).sin_cos())
        .map(|(s, c)| (c, s))
        .collect();
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for k in (1..=band).rev() {
                let (cos, sin) = table[(k * i) % n];
                let ck = fourier[band + k];
                // e^{ikφ_i} = (-1)^k e^{2πi k i / n}
                let re = ck.re * cos - ck.im * sin;
                acc += if k % 2 == 0 { re } else { -re };
            }
            fourier[band].re + 2.0 * acc
        })
        .collect()
}

impl PhaseDistribution {
    /// Wraps samples of a density on the uniform grid `-π + 2πi/n`; Fourier
    /// coefficients up to `|k| = 2j` are obtained by DFT.
    pub fn from_samples(band: SpinJ, samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < min_grid(band) {
            return Err(Error::GridTooCoarse {
                n_grid: n,
                required: min_grid(band),
            });
        }
        let grid_phi = uniform_grid(n);
        let b = band.twice() as usize;
        let mut fourier = vec![Complex64::new(0.0, 0.0); 2 * b + 1];
        for k in 0..=b {
            let mut acc = Complex64::new(0.0, 0.0);
            for (phi, p) in grid_phi.iter().zip(&samples) {
                acc += Complex64::from_polar(*p, -(k as f64) * phi);
            }
            let ck = acc / n as f64;
            fourier[b + k] = ck;
            fourier[b - k] = ck.conj();
        }
        fourier[b].im = 0.0;
        Ok(PhaseDistribution {
            j: band,
            fourier,
            grid_phi,
            grid_p: samples,
        })
    }

    pub fn j(&self) -> SpinJ {
        self.j
    }

    pub fn n_grid(&self) -> usize {
        self.grid_p.len()
    }

    /// Grid spacing `2π/n`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.n_grid() as f64
    }

    pub fn grid_phi(&self) -> &[f64] {
        &self.grid_phi
    }

    pub fn grid_p(&self) -> &[f64] {
        &self.grid_p
    }

    /// `c_k` for `k = -2j..=2j`.
    pub fn fourier(&self) -> &[Complex64] {
        &self.fourier
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        let b = self.j.twice() as i64;
        if k.abs() > b {
            Complex64::new(0.0, 0.0)
        } else {
            self.fourier[(b + k) as usize]
        }
    }

    /// `p(φ)` at an arbitrary angle from the Fourier series.
    pub fn eval(&self, phi: f64) -> f64 {
        let b = self.j.twice() as usize;
        let mut acc = 0.0;
        for k in (1..=b).rev() {
            acc += (self.fourier[b + k] * Complex64::from_polar(1.0, k as f64 * phi)).re;
        }
        self.fourier[b].re + 2.0 * acc
    }

    /// Trapezoid rule on the grid; exact for the band-limited density.
    pub fn integral(&self) -> f64 {
        self.grid_p.iter().sum::<f64>() * self.step()
    }

    pub fn min(&self) -> f64 {
        self.grid_p.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.grid_p
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn phase_distribution(rho: &DensityMatrix, n_grid: usize) -> Result<PhaseDistribution> {
    phase_distribution_with_kernel(rho, &phase_kernel(rho.j()), n_grid)
}

/// As [`phase_distribution`] with a precomputed kernel.
pub fn phase_distribution_with_kernel(
    rho: &DensityMatrix,
    kernel: &PhaseKernel,
    n_grid: usize,
) -> Result<PhaseDistribution> {
    let j = rho.j();
    if kernel.j() != j {
        return Err(Error::domain(format!(
            "kernel built for j = {}, state has j = {j}",
            kernel.j()
        )));
    }
    if n_grid < min_grid(j) {
        return Err(Error::GridTooCoarse {
            n_grid,
            required: min_grid(j),
        });
    }
    let n = j.dim();
    let b = n - 1;
    let mut fourier = vec![Complex64::new(0.0, 0.0); 2 * b + 1];
    for k in 0..=b {
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..n - k {
            let row = col + k;
            acc += rho.get(row, col) * kernel.at(row, col);
        }
        fourier[b + k] = acc;
    }
    fourier[b].im = 0.0;
    for k in 1..=b {
        fourier[b - k] = fourier[b + k].conj();
    }
    let grid_p = synthesize(&fourier, b, n_grid);
    Ok(PhaseDistribution {
        j,
        fourier,
        grid_phi: uniform_grid(n_grid),
        grid_p,
    })
}

/// `p(φ_i) = (2j+1)/(4π) ∫_0^π Q(θ,φ_i) sinθ dθ` by Gauss–Legendre in `θ`.
///
/// Terms with odd `m + m'` carry `sinθ` to an odd power and are not polynomial
/// in `cos θ`, so the rule is applied in `θ`, where the integrand is a smooth
/// trigonometric polynomial of degree `2j + 1`. Gauss–Legendre is not exact for
/// those, so at least `2j + 2 + ORACLE_EXTRA_NODES` nodes are used whatever
/// `n_theta` asks for.
pub fn phase_distribution_oracle(
    rho: &DensityMatrix,
    n_grid: usize,
    n_theta: usize,
) -> Result<PhaseDistribution> {
    let j = rho.j();
    if n_grid < min_grid(j) {
        return Err(Error::GridTooCoarse {
            n_grid,
            required: min_grid(j),
        });
    }
    let n_theta = n_theta.max(j.twice() as usize + 2 + ORACLE_EXTRA_NODES);
    let (theta, w) = gauss_legendre_on(n_theta, 0.0, PI);
    let mags: Vec<Vec<f64>> = theta.iter().map(|t| coherent_magnitudes(j, *t)).collect();
    let weights: Vec<f64> = theta.iter().zip(&w).map(|(t, w)| w * t.sin()).collect();
    let prefactor = j.dim() as f64 / (4.0 * PI);
    let grid_phi = uniform_grid(n_grid);
    let samples = grid_phi
        .iter()
        .map(|phi| {
            let phases: Vec<Complex64> = (0..j.dim())
                .map(|k| Complex64::from_polar(1.0, -(k as f64) * phi))
                .collect();
            let mut acc = 0.0;
            for (mag, wt) in mags.iter().zip(&weights) {
                let c: Vec<Complex64> = mag.iter().zip(&phases).map(|(m, e)| m * e).collect();
                acc += wt * rho.expectation(&c).re;
            }
            prefactor * acc
        })
        .collect();
    PhaseDistribution::from_samples(j, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        cat_state, coherent_state, density_of, maximally_mixed, squeezed_state, CoherentSpec,
        PureState,
    };
    use crate::verify::coherent_number_closed_form;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    fn coherent_rho(j: SpinJ, theta: f64, phi: f64) -> DensityMatrix {
        density_of(&coherent_state(j, theta, phi).unwrap())
    }

    fn argmax(p: &[f64]) -> usize {
        let mut best = 0;
        for (i, v) in p.iter().enumerate() {
            if *v > p[best] {
                best = i;
            }
        }
        best
    }

    #[test]
    fn kernel_diagonal_exact_and_symmetric() {
        for tj in [0u32, 1, 7, 40, 101, 400] {
            let j = SpinJ::from_twice(tj);
            let k = phase_kernel(j);
            for r in 0..j.dim() {
                assert!((k.at(r, r) - 1.0 / (2.0 * PI)).abs() < 1e-13);
                for c in 0..j.dim() {
                    assert_eq!(k.at(r, c), k.at(c, r));
                    assert!(k.at(r, c) > 0.0);
                }
            }
        }
    }

    #[test]
    fn kernel_spin_half_off_diagonal() {
        let k = phase_kernel(SpinJ::from_twice(1));
        // (2/4π) · 2 · B(3/2, 3/2) with B(3/2, 3/2) = π/8
        assert!((k.at(0, 1) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn kernel_bounded_at_j50() {
        let k = phase_kernel(SpinJ::integer(50));
        for v in &k.k {
            assert!(v.is_finite() && *v > 0.0 && *v <= 1.0 / (2.0 * PI) + 1e-13);
        }
    }

    #[test]
    fn q_function_examples() {
        let j = SpinJ::integer(6);
        let rho = coherent_rho(j, 1.2, -0.4);
        assert!((q_function(&rho, 1.2, -0.4).unwrap() - 1.0).abs() < 1e-14);

        let bottom = density_of(&PureState::basis(j, MLevel::integer(j, -6).unwrap()).unwrap());
        assert_eq!(q_function(&bottom, PI, 0.3).unwrap(), 0.0);

        let mixed = maximally_mixed(j);
        for (t, p) in [(0.1, 0.2), (1.5, 3.0), (3.0, -1.0)] {
            assert!((q_function(&mixed, t, p).unwrap() - 1.0 / 13.0).abs() < 1e-15);
        }
        assert!(q_function(&mixed, -0.5, 0.0).is_err());
    }

    #[test]
    fn q_normalization() {
        let one = SpinJ::integer(1);
        let top = density_of(&PureState::basis(one, MLevel::integer(one, 1).unwrap()).unwrap());
        assert!((q_normalization_check(&top, 8, 8) - 1.0).abs() < 1e-13);
        let j = SpinJ::integer(10);
        let rho = coherent_rho(j, FRAC_PI_4, FRAC_PI_4);
        assert!((q_normalization_check(&rho, 22, 42) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn number_distribution_matches_binomial() {
        for jj in [10u32, 20, 100] {
            let j = SpinJ::integer(jj);
            for alpha in [FRAC_PI_8, FRAC_PI_4, FRAC_PI_2] {
                let p = number_distribution(&coherent_rho(j, alpha, 0.3)).unwrap();
                let want = coherent_number_closed_form(j, alpha);
                for (a, b) in p.probabilities().iter().zip(&want) {
                    if *b > 1e-280 {
                        assert!((a - b).abs() <= 1e-13 * b, "j={jj} α={alpha}: {a} vs {b}");
                    }
                }
                let (mean, var) = number_moments(&p);
                assert!((mean - jj as f64 * (1.0 - alpha.cos())).abs() < 1e-10);
                assert!((var - 0.5 * jj as f64 * alpha.sin().powi(2)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn moment_examples() {
        let j = SpinJ::integer(10);
        let (mean, var) =
            number_moments(&number_distribution(&coherent_rho(j, FRAC_PI_2, 0.0)).unwrap());
        assert!((mean - 10.0).abs() < 1e-12 && (var - 5.0).abs() < 1e-12);
        let low = density_of(&PureState::basis(j, MLevel::integer(j, -10).unwrap()).unwrap());
        assert_eq!(
            number_moments(&number_distribution(&low).unwrap()),
            (0.0, 0.0)
        );
        let mixed = number_distribution(&maximally_mixed(j)).unwrap();
        assert!(mixed
            .probabilities()
            .iter()
            .all(|p| (p - 1.0 / 21.0).abs() < 1e-16));
    }

    #[test]
    fn diagonal_density_gives_uniform_phase() {
        let j = SpinJ::integer(7);
        let d = phase_distribution(&maximally_mixed(j), 64).unwrap();
        assert!(d
            .grid_p()
            .iter()
            .all(|p| (p - 1.0 / (2.0 * PI)).abs() < 1e-15));
        let o = phase_distribution_oracle(&maximally_mixed(j), 64, 16).unwrap();
        assert!(o
            .grid_p()
            .iter()
            .all(|p| (p - 1.0 / (2.0 * PI)).abs() < 1e-12));
    }

    #[test]
    fn grid_too_coarse() {
        let j = SpinJ::integer(10);
        let rho = maximally_mixed(j);
        assert_eq!(
            phase_distribution(&rho, 41),
            Err(Error::GridTooCoarse {
                n_grid: 41,
                required: 42
            })
        );
        assert!(phase_distribution(&rho, 42).is_ok());
    }

    #[test]
    fn coherent_peak_at_beta_and_normalized() {
        let j = SpinJ::integer(20);
        let d = phase_distribution(&coherent_rho(j, FRAC_PI_4, FRAC_PI_4), 1024).unwrap();
        let i = argmax(d.grid_p());
        assert!((d.grid_phi()[i] - FRAC_PI_4).abs() <= d.step());
        assert!((d.integral() - 1.0).abs() < 1e-12);
        assert!((d.coefficient(0).re - 1.0 / (2.0 * PI)).abs() < 1e-12);
        assert!(d.min() >= -1e-12);
        for k in 0..=40i64 {
            assert_eq!(d.coefficient(-k), d.coefficient(k).conj());
        }
        for idx in [0usize, 17, 300, 1023] {
            assert!((d.eval(d.grid_phi()[idx]) - d.grid_p()[idx]).abs() < 1e-13);
        }
    }

    #[test]
    fn oracle_agrees_with_kernel() {
        let j = SpinJ::integer(10);
        let rho = coherent_rho(j, FRAC_PI_4, FRAC_PI_4);
        let a = phase_distribution(&rho, 256).unwrap();
        let o = phase_distribution_oracle(&rho, 256, 22).unwrap();
        let diff = a
            .grid_p()
            .iter()
            .zip(o.grid_p())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-11, "{diff:e}");

        let j = SpinJ::integer(20);
        let comps = [
            CoherentSpec::at(FRAC_PI_4, FRAC_PI_4).unwrap(),
            CoherentSpec::at(FRAC_PI_4, FRAC_PI_4 + FRAC_PI_8).unwrap(),
        ];
        let rho = density_of(&cat_state(j, &comps).unwrap().state);
        let a = phase_distribution(&rho, 128).unwrap();
        let o = phase_distribution_oracle(&rho, 128, 42).unwrap();
        let diff = a
            .grid_p()
            .iter()
            .zip(o.grid_p())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-10, "{diff:e}");
    }

    #[test]
    fn squeezed_doublet_at_quarter_turns() {
        let j = SpinJ::integer(10);
        let rho = density_of(&squeezed_state(j, 2.6892).unwrap().state);
        let d = phase_distribution(&rho, 1024).unwrap();
        let p = d.grid_p();
        let n = p.len();
        // φ = -π/2 and +π/2 sit on grid indices n/4 and 3n/4
        assert!((p[n / 4] - p[3 * n / 4]).abs() < 1e-13);
        assert!((p[argmax(p)] - p[n / 4]).abs() < 1e-13);
    }

    #[test]
    fn shift_covariance() {
        let j = SpinJ::integer(12);
        let n = 240;
        let step = 2.0 * PI / n as f64;
        let base = phase_distribution(&coherent_rho(j, 1.0, 0.0), n).unwrap();
        let shifted = phase_distribution(&coherent_rho(j, 1.0, 7.0 * step), n).unwrap();
        for i in 0..n {
            let a = base.grid_p()[i];
            let b = shifted.grid_p()[(i + 7) % n];
            assert!((a - b).abs() < 1e-13, "i={i}");
        }
    }

    #[test]
    fn from_samples_round_trip() {
        let j = SpinJ::integer(6);
        let d = phase_distribution(&coherent_rho(j, 0.9, 0.5), 64).unwrap();
        let back = PhaseDistribution::from_samples(j, d.grid_p().to_vec()).unwrap();
        for k in -12..=12 {
            assert!((back.coefficient(k) - d.coefficient(k)).norm() < 1e-15);
        }
        assert!(PhaseDistribution::from_samples(j, vec![0.0; 10]).is_err());
    }
}
