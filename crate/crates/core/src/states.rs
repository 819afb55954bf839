//! Pure states in the `|j,m⟩` basis and their density matrices.
//!
//! Amplitude vectors are indexed by `j + m`, so index 0 is `m = -j`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{ln_binomial_unchecked, wigner_d_m0_pi2_column};
use crate::spin::{MLevel, SpinJ};

const NORM_TOL: f64 = 1e-12;
const DEGENERATE_NORM: f64 = 1e-14;

/// Unit-norm amplitude vector over `m = -j..=j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    j: SpinJ,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps an amplitude vector; it must have length `2j + 1` and unit norm.
    pub fn new(j: SpinJ, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != j.dim() {
            return Err(Error::domain(format!(
                "expected {} amplitudes for j = {j}, got {}",
                j.dim(),
                amps.len()
            )));
        }
        let state = PureState { j, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Consistency(format!(
                "state norm^2 = {norm}, expected 1"
            )));
        }
        Ok(state)
    }

    /// Basis state `|j, m⟩`.
    pub fn basis(j: SpinJ, m: MLevel) -> Result<Self> {
        MLevel::new(j, m.twice())?;
        let mut amps = vec![Complex64::new(0.0, 0.0); j.dim()];
        amps[m.index(j)] = Complex64::new(1.0, 0.0);
        Ok(PureState { j, amps })
    }

    pub fn j(&self) -> SpinJ {
        self.j
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, m: MLevel) -> Complex64 {
        self.amps[m.index(self.j)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// A normalized state together with the constant `N` that normalized it.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub state: PureState,
    pub normalization: f64,
}

/// Direction `(θ, φ)` and complex weight of one coherent component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec {
    theta: f64,
    phi: f64,
    weight: Complex64,
}

impl CoherentSpec {
    pub fn new(theta: f64, phi: f64, weight: Complex64) -> Result<Self> {
        check_theta(theta)?;
        if !phi.is_finite() || !weight.re.is_finite() || !weight.im.is_finite() {
            return Err(Error::domain(
                "coherent component must have finite phi and weight",
            ));
        }
        Ok(CoherentSpec { theta, phi, weight })
    }

    /// Unit weight.
    pub fn at(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta, phi, Complex64::new(1.0, 0.0))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn weight(&self) -> Complex64 {
        self.weight
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain(format!("theta = {theta} outside [0, pi]")))
    }
}

/// Magnitudes `√C(2j,k) sin^k(θ/2) cos^{2j-k}(θ/2)` for `k = j + m`, with
/// `cos(θ/2)` taken as `sin((π - θ)/2)` so that both poles give exact zeros.
///
/// Plain powers are used while every factor stays a normal float; the log-domain
/// form takes over in the far tails.
pub(crate) fn coherent_magnitudes(j: SpinJ, theta: f64) -> Vec<f64> {
    let n = j.twice() as u64;
    let s = (0.5 * theta).sin();
    let c = (0.5 * (PI - theta)).sin();
    let (ln_s, ln_c) = (s.ln(), c.ln());
    (0..=n)
        .map(|k| {
            let half_ln_binom = 0.5 * ln_binomial_unchecked(n, k);
            let root_binom = half_ln_binom.exp();
            let sp = s.powi(k as i32);
            let cp = c.powi((n - k) as i32);
            if sp.is_normal() && cp.is_normal() && root_binom.is_finite() {
                let mag = root_binom * sp * cp;
                if mag.is_normal() {
                    return mag;
                }
            }
            let mut ln_mag = half_ln_binom;
            if k > 0 {
                ln_mag += k as f64 * ln_s;
            }
            if k < n {
                ln_mag += (n - k) as f64 * ln_c;
            }
            // exp flushes anything below e^-745 to exactly zero
            ln_mag.exp()
        })
        .collect()
}

pub(crate) fn coherent_amplitudes(j: SpinJ, theta: f64, phi: f64) -> Vec<Complex64> {
    coherent_magnitudes(j, theta)
        .into_iter()
        .enumerate()
        .map(|(k, mag)| Complex64::from_polar(mag, -(k as f64) * phi))
        .collect()
}

/// Atomic coherent state
/// `|θ,φ⟩ = Σ_m √C(2j, j+m) sin^{j+m}(θ/2) cos^{j-m}(θ/2) e^{-i(j+m)φ} |j,m⟩`.
pub fn coherent_state(j: SpinJ, theta: f64, phi: f64) -> Result<PureState> {
    check_theta(theta)?;
    if !phi.is_finite() {
        return Err(Error::domain("phi must be finite"));
    }
    PureState::new(j, coherent_amplitudes(j, theta, phi))
}

/// `ln tanh(2ζ)`, accurate when `tanh(2ζ)` is close to one.
fn ln_tanh_2zeta(zeta: f64) -> f64 {
    (-2.0 / ((4.0 * zeta).exp() + 1.0)).ln_1p()
}

/// Atomic squeezed state `N tanh(2ζ)^{J_z/2} exp(-i π/2 J_y) |j,0⟩`.
///
/// Amplitudes are real: `tanh(2ζ)^{m/2} d^j_{m0}(π/2)`, normalized numerically.
pub fn squeezed_state(j: SpinJ, zeta: f64) -> Result<Normalized> {
    if !j.is_integer() {
        return Err(Error::domain(format!(
            "squeezed state needs integer j, got {j}"
        )));
    }
    if !zeta.is_finite() || zeta <= 0.0 {
        return Err(Error::domain(format!(
            "zeta must be a positive real, got {zeta}"
        )));
    }
    let d = wigner_d_m0_pi2_column(j)?;
    let ln_t = ln_tanh_2zeta(zeta);
    let exponents: Vec<f64> = j.levels().map(|m| 0.5 * m.value() * ln_t).collect();
    // scale so the largest weight is 1; folded back into N below
    let scale = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = exponents
        .iter()
        .zip(&d)
        .map(|(e, dm)| (e - scale).exp() * dm)
        .collect();
    let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
    let amps = raw.iter().map(|a| Complex64::new(a / norm, 0.0)).collect();
    let normalization = (-scale).exp() / norm;
    Ok(Normalized {
        state: PureState::new(j, amps)?,
        normalization,
    })
}

/// `⟨a|b⟩` between two unit-weight coherent states.
pub fn coherent_overlap(j: SpinJ, a: &CoherentSpec, b: &CoherentSpec) -> Complex64 {
    let va = coherent_amplitudes(j, a.theta, a.phi);
    let vb = coherent_amplitudes(j, b.theta, b.phi);
    va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum()
}

/// Gram matrix `G_kl = ⟨k|l⟩` of the components, row-major.
pub fn gram_matrix(j: SpinJ, components: &[CoherentSpec]) -> Vec<Complex64> {
    let vecs: Vec<Vec<Complex64>> = components
        .iter()
        .map(|c| coherent_amplitudes(j, c.theta, c.phi))
        .collect();
    let n = vecs.len();
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        for l in 0..n {
            g[k * n + l] = vecs[k]
                .iter()
                .zip(&vecs[l])
                .map(|(x, y)| x.conj() * y)
                .sum();
        }
    }
    g
}

/// Normalized superposition `N Σ_k w_k |θ_k, φ_k⟩`, with `N` from the Gram matrix.
pub fn cat_state(j: SpinJ, components: &[CoherentSpec]) -> Result<Normalized> {
    if components.is_empty() {
        return Err(Error::domain("cat state needs at least one component"));
    }
    if components
        .iter()
        .all(|c| c.weight == Complex64::new(0.0, 0.0))
    {
        return Err(Error::domain("all component weights are zero"));
    }
    for c in components {
        check_theta(c.theta)?;
    }
    let g = gram_matrix(j, components);
    let n = components.len();
    let mut norm_sqr = 0.0;
    for k in 0..n {
        for l in 0..n {
            norm_sqr += (components[k].weight.conj() * g[k * n + l] * components[l].weight).re;
        }
    }
    let norm = norm_sqr.max(0.0).sqrt();
    if norm < DEGENERATE_NORM {
        return Err(Error::Degenerate { norm });
    }
    let normalization = 1.0 / norm;
    let mut amps = vec![Complex64::new(0.0, 0.0); j.dim()];
    for c in components {
        let v = coherent_amplitudes(j, c.theta, c.phi);
        for (a, x) in amps.iter_mut().zip(v) {
            *a += c.weight * x;
        }
    }
    for a in amps.iter_mut() {
        *a *= normalization;
    }
    Ok(Normalized {
        state: PureState::new(j, amps)?,
        normalization,
    })
}

/// Hermitian, trace-one operator in the `|j,m⟩` basis, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    j: SpinJ,
    rho: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity (1e-12) and unit trace (1e-12).
    pub fn from_entries(j: SpinJ, rho: Vec<Complex64>) -> Result<Self> {
        let n = j.dim();
        if rho.len() != n * n {
            return Err(Error::domain(format!(
                "expected {}x{n} entries, got {}",
                n,
                rho.len()
            )));
        }
        let dm = DensityMatrix { j, rho };
        let defect = dm.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::Consistency(format!(
                "matrix is not Hermitian (defect {defect:e})"
            )));
        }
        let tr = dm.trace();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::Consistency(format!("trace {tr}, expected 1")));
        }
        Ok(dm)
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::domain("empty mixture"));
        };
        let j = first.j;
        if parts
            .iter()
            .any(|(w, r)| w.is_nan() || *w < 0.0 || r.j != j)
        {
            return Err(Error::domain(
                "mixture weights must be >= 0 and share one j",
            ));
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::domain(format!("mixture weights sum to {total}")));
        }
        let mut rho = vec![Complex64::new(0.0, 0.0); j.dim() * j.dim()];
        for (w, r) in parts {
            for (acc, x) in rho.iter_mut().zip(&r.rho) {
                *acc += *w * x;
            }
        }
        Self::from_entries(j, rho)
    }

    pub fn j(&self) -> SpinJ {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    /// `ρ_{mm'}` by basis indices `j + m`, `j + m'`.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.rho[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// `v† ρ v`.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..n {
            let row = &self.rho[r * n..(r + 1) * n];
            let rv: Complex64 = row.iter().zip(v).map(|(x, y)| x * y).sum();
            acc += v[r].conj() * rv;
        }
        acc
    }
}

/// Pure-state density matrix `ρ_{mm'} = c_m c*_{m'}`.
pub fn density_of(state: &PureState) -> DensityMatrix {
    let c = state.amplitudes();
    let n = c.len();
    let mut rho = Vec::with_capacity(n * n);
    for r in 0..n {
        for col in 0..n {
            rho.push(c[r] * c[col].conj());
        }
    }
    DensityMatrix { j: state.j(), rho }
}

/// Diagonal density matrix with populations `probs` (indexed by `j + m`).
pub fn diagonal_mixture(j: SpinJ, probs: &[f64]) -> Result<DensityMatrix> {
    let n = j.dim();
    if probs.len() != n {
        return Err(Error::domain(format!(
            "expected {n} probabilities, got {}",
            probs.len()
        )));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::domain(
            "probabilities must be finite and non-negative",
        ));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORM_TOL {
        return Err(Error::domain(format!("probabilities sum to {total}")));
    }
    let mut rho = vec![Complex64::new(0.0, 0.0); n * n];
    for (i, p) in probs.iter().enumerate() {
        rho[i * n + i] = Complex64::new(*p, 0.0);
    }
    Ok(DensityMatrix { j, rho })
}

/// The maximally mixed state `I / (2j + 1)`.
pub fn maximally_mixed(j: SpinJ) -> DensityMatrix {
    let n = j.dim();
    let mut rho = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        rho[i * n + i] = Complex64::new(1.0 / n as f64, 0.0);
    }
    DensityMatrix { j, rho }
}
