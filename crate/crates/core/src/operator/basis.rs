//! Eigenfunctions of `L(iσ)`, dual functions and the projection `Π(σ)`.

use num_complex::Complex64;

use super::{dispersion_roots, sigma_c};
use crate::algebra::{inner_product, inner_product_x, same_rate, SeriesFunction, WaveState, TAU_ALG};
use crate::error::{EvansError, Result};
use crate::stokes::WaveParameters;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn ey(c: impl Into<Complex64>, a: f64) -> SeriesFunction {
    SeriesFunction::y_exp(c, a).expect("nonnegative rate")
}

fn root(params: &WaveParameters, sigma: f64, j: usize) -> Result<f64> {
    dispersion_roots(params, sigma)?
        .k(j)
        .ok_or_else(|| EvansError::Unsupported(format!("no real root k_{j} at sigma = {sigma}")))
}

/// `φ_j(σ)` with `(L(iσ) − i k_j) φ_j = 0`.
pub fn eigenfunction(params: &WaveParameters, sigma: f64, j: usize) -> Result<WaveState> {
    let WaveParameters { g, c0, .. } = *params;
    if sigma == 0.0 && j == 3 {
        return Ok(WaveState { phi: SeriesFunction::constant(g / c0), ..WaveState::zero() });
    }
    if sigma == 0.0 && j == 4 {
        return Err(EvansError::Unsupported(
            "phi_4 at sigma = 0 is a generalized eigenvector and is not part of the basis".into(),
        ));
    }
    let k = root(params, sigma, j)?;
    let a = I * (k * c0 - sigma) / g;
    let e = ey(1.0, k.abs());
    Ok(WaveState { phi: e.clone(), u: e.scale(a), eta: SeriesFunction::constant(a) })
}

/// Constant parts `(φ_∞, u_∞)` making a state with the given decaying parts an
/// eigenfunction of `L(λ)†` with eigenvalue `μ`.
fn adjoint_constants(
    params: &WaveParameters,
    lambda: Complex64,
    mu: Complex64,
    phi_dec: &SeriesFunction,
) -> (Complex64, Complex64) {
    let WaveParameters { g, c0, .. } = *params;
    let lc = lambda.conj();
    let r = phi_dec.dy().at_y0().eval(0.0, 0.0) * g / c0;
    let mu2 = mu * mu;
    (lc * lc * r / (g * c0 * mu2), (lc / c0 - mu) * r / mu2)
}

fn unnormalized_dual(params: &WaveParameters, sigma: f64, j: usize) -> Result<WaveState> {
    let WaveParameters { kappa, g, c0, .. } = *params;
    if sigma == 0.0 {
        match j {
            1 | 2 => {
                let phi = if same_rate(kappa, 1.0) {
                    &ey(0.5, 1.0) + &SeriesFunction::monomial(0.5, 0, 0.0, 1, 1.0)?
                } else {
                    (&ey(1.0, 1.0) - &ey(kappa, kappa)).scale(1.0 / (1.0 - kappa * kappa))
                };
                let s = if j == 1 { 1.0 } else { -1.0 };
                let k = -s * kappa;
                let (pc, uc) = adjoint_constants(params, Complex64::new(0.0, 0.0), -I * k, &phi);
                return Ok(WaveState {
                    phi: &phi + &SeriesFunction::constant(pc),
                    u: &ey(I * s * c0 * kappa, kappa) + &SeriesFunction::constant(uc),
                    eta: SeriesFunction::constant(-I * s * c0),
                });
            }
            3 => return Ok(WaveState { phi: SeriesFunction::constant(c0 / g), ..WaveState::zero() }),
            _ => return Err(EvansError::Unsupported(format!("no dual function psi_{j} at sigma = 0"))),
        }
    }
    if sigma <= sigma_c(params) * (1.0 + TAU_ALG) {
        return Err(EvansError::Unsupported(format!(
            "projection formulas for 0 < sigma <= sigma_c are not available (sigma = {sigma})"
        )));
    }
    if j != 2 && j != 4 {
        return Err(EvansError::Unsupported(format!("only psi_2, psi_4 exist for sigma > sigma_c, got j = {j}")));
    }
    let k = root(params, sigma, j)?;
    let d = c0 * c0 * k * k - 2.0 * c0 * k * sigma + kappa * c0 * sigma + sigma * sigma;
    let phi = if same_rate(k, 1.0) {
        // limit k → 1 of the two-exponential combination
        let a = kappa * (c0 * c0 + sigma * sigma) / 2.0;
        let b = kappa * (c0 * c0 - sigma * sigma) / 2.0;
        &ey(a, 1.0) + &SeriesFunction::monomial(b, 0, 0.0, 1, 1.0)?
    } else {
        let a = -k * kappa * (c0 * c0 - sigma * sigma) / (k * k - 1.0);
        let b = -kappa * (sigma * sigma - c0 * c0 * k * k) / (k * k - 1.0);
        &ey(a, 1.0) + &ey(b, k)
    }
    .scale(1.0 / d);
    let w = I * c0 * c0 * kappa * (sigma - c0 * k) / d;
    let u = ey(w * kappa, k);
    let eta = SeriesFunction::constant(-w);
    let (pc, uc) = adjoint_constants(params, I * sigma, -I * k, &phi);
    Ok(WaveState { phi: &phi + &SeriesFunction::constant(pc), u: &u + &SeriesFunction::constant(uc), eta })
}

/// `ψ_j(σ)`, rescaled so that `⟨φ_j, ψ_j⟩ = 1`.
///
/// Supported for `σ = 0` (`j = 1, 2, 3`) and `σ > σ_c` (`j = 2, 4`).
pub fn adjoint_eigenfunction(params: &WaveParameters, sigma: f64, j: usize) -> Result<WaveState> {
    let psi = unnormalized_dual(params, sigma, j)?;
    let n = inner_product(&eigenfunction(params, sigma, j)?, &psi)?;
    if n.norm() < 1e-300 {
        return Err(EvansError::Degenerate(format!("<phi_{j}, psi_{j}> vanishes at sigma = {sigma}")));
    }
    Ok(psi.scale(1.0 / n.conj()))
}

/// Eigenfunctions and dual functions spanning `Y(σ)`.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pub sigma: f64,
    pub labels: Vec<usize>,
    pub ks: Vec<f64>,
    pub phis: Vec<WaveState>,
    pub psis: Vec<WaveState>,
}

impl SpectralBasis {
    pub fn new(params: &WaveParameters, sigma: f64) -> Result<Self> {
        let labels = if sigma == 0.0 {
            vec![1, 2, 3]
        } else if sigma > sigma_c(params) * (1.0 + TAU_ALG) {
            vec![2, 4]
        } else {
            return Err(EvansError::Unsupported(format!(
                "reduced basis for 0 < sigma <= sigma_c is not available (sigma = {sigma})"
            )));
        };
        let roots = dispersion_roots(params, sigma)?;
        let ks = labels.iter().map(|&j| roots.k(j).expect("root exists")).collect();
        let phis = labels.iter().map(|&j| eigenfunction(params, sigma, j)).collect::<Result<_>>()?;
        let psis = labels.iter().map(|&j| adjoint_eigenfunction(params, sigma, j)).collect::<Result<_>>()?;
        Ok(SpectralBasis { sigma, labels, ks, phis, psis })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Same space with `φ_j ↦ s_j φ_j`, `ψ_j ↦ ψ_j / s_j*`.
    pub fn rescaled(&self, s: &[Complex64]) -> Self {
        let mut b = self.clone();
        for (j, &sj) in s.iter().enumerate().take(b.dim()) {
            b.phis[j] = b.phis[j].scale(sj);
            b.psis[j] = b.psis[j].scale(1.0 / sj.conj());
        }
        b
    }

    /// Coordinates `⟨u, ψ_j⟩` of an `x`-free state.
    pub fn coordinates(&self, u: &WaveState) -> Result<Vec<Complex64>> {
        self.psis.iter().map(|p| inner_product(u, p)).collect()
    }

    /// Coordinates of an `x`-dependent state, one series in `x` per direction.
    pub fn coordinates_x(&self, u: &WaveState) -> Result<Vec<SeriesFunction>> {
        self.psis.iter().map(|p| inner_product_x(u, p)).collect()
    }

    /// `Π(σ)u` for an `x`-dependent state.
    pub fn project_x(&self, u: &WaveState) -> Result<WaveState> {
        let mut out = WaveState::zero();
        for (c, phi) in self.coordinates_x(u)?.iter().zip(&self.phis) {
            out = &out + &phi.mul_x(c);
        }
        Ok(out)
    }

    /// Coordinates and reconstruction `Σ ⟨u, ψ_j⟩ φ_j`.
    pub fn project(&self, u: &WaveState) -> Result<(Vec<Complex64>, WaveState)> {
        let c = self.coordinates(u)?;
        let mut out = WaveState::zero();
        for (cj, phi) in c.iter().zip(&self.phis) {
            out = &out + &phi.scale(*cj);
        }
        Ok((c, out))
    }
}

/// Coordinates and projected state of `u` onto `Y(σ)`.
pub fn projection(params: &WaveParameters, sigma: f64, u: &WaveState) -> Result<(Vec<Complex64>, WaveState)> {
    SpectralBasis::new(params, sigma)?.project(u)
}
