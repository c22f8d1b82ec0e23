#![allow(dead_code)]

use deepwater_evans::algebra::{SeriesFunction, Term, WaveState};
use deepwater_evans::evans::{monodromy_expand, monodromy_numeric, CMatrix, MonodromyExpansion};
use deepwater_evans::expansion::Truncation;
use deepwater_evans::operator::sigma_c;
use deepwater_evans::reduction::ReducedSystem;
use deepwater_evans::stokes::WaveParameters;
use num_complex::Complex64;
use proptest::prelude::*;

pub const STOKES_ORDER: usize = 3;

pub fn trunc() -> Truncation {
    Truncation::new(2, 2, 2)
}

pub fn unit() -> WaveParameters {
    WaveParameters::with_speed(1.0, 1.0).unwrap()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `{0} ∪` 20 equispaced points of `[σ_c + 0.05, 3]`.
pub fn sigma_grid(p: &WaveParameters) -> Vec<f64> {
    let lo = sigma_c(p) + 0.05;
    let mut v = vec![0.0];
    v.extend((0..20).map(|i| lo + (3.0 - lo) * f64::from(i) / 19.0));
    v
}

pub fn reduced(p: WaveParameters, sigma: f64) -> ReducedSystem {
    ReducedSystem::build(p, sigma, STOKES_ORDER, trunc()).unwrap()
}

pub fn symbolic(p: WaveParameters, sigma: f64) -> (ReducedSystem, MonodromyExpansion) {
    let red = reduced(p, sigma);
    let mono = monodromy_expand(&red).unwrap();
    (red, mono)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Central-difference estimate of `a^{(m,n)}(T)` from the integrated monodromy.
pub fn finite_difference(red: &ReducedSystem, m: usize, n: usize, h: f64) -> CMatrix {
    let x = |d: f64, e: f64| monodromy_numeric(red, c(d, 0.0), e).unwrap();
    match (m, n) {
        (0, 0) => x(0.0, 0.0),
        (1, 0) => (x(h, 0.0) - x(-h, 0.0)) / c(2.0 * h, 0.0),
        (0, 1) => (x(0.0, h) - x(0.0, -h)) / c(2.0 * h, 0.0),
        (2, 0) => (x(h, 0.0) - x(0.0, 0.0) * c(2.0, 0.0) + x(-h, 0.0)) / c(2.0 * h * h, 0.0),
        (0, 2) => (x(0.0, h) - x(0.0, 0.0) * c(2.0, 0.0) + x(0.0, -h)) / c(2.0 * h * h, 0.0),
        (1, 1) => (x(h, h) - x(h, -h) - x(-h, h) + x(-h, -h)) / c(4.0 * h * h, 0.0),
        _ => panic!("no stencil for ({m},{n})"),
    }
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b))
}

/// `Σ c y^p e^{ay}` with `a ∈ [0.3, 3]`, `p ≤ 2`.
pub fn decaying(max_terms: usize) -> impl Strategy<Value = SeriesFunction> {
    decaying_with_rates(max_terms, 0.3)
}

/// As [`decaying`] with rates in `[lo, 3]`.
pub fn decaying_with_rates(max_terms: usize, lo: f64) -> impl Strategy<Value = SeriesFunction> {
    prop::collection::vec((coeff(), 0u32..3, lo..3.0f64), 1..=max_terms).prop_map(|ts| {
        let terms = ts.into_iter().map(|(c, p, a)| Term::new(c, 0, 0.0, p, a)).collect();
        SeriesFunction::from_terms(terms).unwrap()
    })
}

fn with_constant(f: SeriesFunction, k: Complex64) -> SeriesFunction {
    &f + &SeriesFunction::constant(k)
}

/// A state with `η = u(0)`.
pub fn domain_state() -> impl Strategy<Value = WaveState> {
    (decaying(3), coeff(), decaying(3), coeff()).prop_map(|(phi, k1, u, k2)| {
        let u = with_constant(u, k2);
        let eta = u.at_y0();
        WaveState::new(with_constant(phi, k1), u, eta).unwrap()
    })
}

/// A state with `u_dec(0) + κη = 0`.
pub fn adjoint_domain_state(kappa: f64) -> impl Strategy<Value = WaveState> {
    (decaying(3), coeff(), decaying(3), coeff()).prop_map(move |(phi, k1, v, k2)| {
        let eta = v.at_y0().scale(-1.0 / kappa);
        WaveState::new(with_constant(phi, k1), with_constant(v, k2), eta).unwrap()
    })
}

pub fn params() -> impl Strategy<Value = WaveParameters> {
    (0.5..4.0f64, 0.5..4.0f64).prop_map(|(k, g)| WaveParameters::new(k, g).unwrap())
}

/// Least-squares slope of `y ≈ s x` through the origin.
pub fn slope_through_origin(x: &[f64], y: &[f64]) -> f64 {
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    sxy / sxx
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

/// `∫_{-Y0}^0 f(y) dy` by double-exponential quadrature.
pub fn quadrature_halfline(f: &SeriesFunction, depth: f64) -> Complex64 {
    let re = quadrature::double_exponential::integrate(|y| f.eval(0.0, y).re, -depth, 0.0, 1e-14).integral;
    let im = quadrature::double_exponential::integrate(|y| f.eval(0.0, y).im, -depth, 0.0, 1e-14).integral;
    c(re, im)
}

pub mod checks {
    use super::*;
    use deepwater_evans::algebra::inner_product;
    use deepwater_evans::operator::{apply_l, apply_l_adjoint, SpectralBasis};
    use deepwater_evans::stokes::{ResidualGrid, StokesExpansion};

    /// `|⟨Lu₁,u₂⟩ − ⟨u₁,L†u₂⟩|` relative to the operand sizes. Rates near 1
    /// make `L†u₂` carry coefficients like `1/(a²−1)³`, and the pairing
    /// then cancels terms of that size.
    pub fn adjoint_gap(p: &WaveParameters, lam: Complex64, u1: &WaveState, u2: &WaveState) -> f64 {
        let lu1 = apply_l(p, lam, u1).unwrap();
        let ladj = apply_l_adjoint(p, lam, u2).unwrap();
        let lhs = inner_product(&lu1, u2).unwrap();
        let rhs = inner_product(u1, &ladj).unwrap();
        let scale = (lu1.max_coeff() * u2.max_coeff()).max(u1.max_coeff() * ladj.max_coeff()).max(1.0);
        (lhs - rhs).norm() / scale
    }

    /// `max |⟨φ_i, ψ_j⟩ − δ_ij|`.
    pub fn biorthogonality_gap(p: &WaveParameters, sigma: f64) -> f64 {
        let b = SpectralBasis::new(p, sigma).unwrap();
        let mut worst: f64 = 0.0;
        for (i, phi) in b.phis.iter().enumerate() {
            for (j, psi) in b.psis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner_product(phi, psi).unwrap() - want).norm());
            }
        }
        worst
    }

    /// `‖Π Π u − Π u‖`.
    pub fn idempotence_gap(p: &WaveParameters, sigma: f64, u: &WaveState) -> f64 {
        let b = SpectralBasis::new(p, sigma).unwrap();
        let (_, pu) = b.project(u).unwrap();
        let (_, ppu) = b.project(&pu).unwrap();
        ppu.distance(&pu) / pu.max_coeff().max(1.0)
    }

    /// `‖Π L u − L Π u‖`.
    pub fn commutation_gap(p: &WaveParameters, sigma: f64, u: &WaveState) -> f64 {
        let b = SpectralBasis::new(p, sigma).unwrap();
        let lam = c(0.0, sigma);
        let (_, plu) = b.project(&apply_l(p, lam, u).unwrap()).unwrap();
        let (_, pu) = b.project(u).unwrap();
        let lpu = apply_l(p, lam, &pu).unwrap();
        plu.distance(&lpu) / plu.max_coeff().max(1.0)
    }

    /// Closed-form half-line integral against quadrature on `[−50, 0]`; rates
    /// below about 0.8 leave a tail beyond `y = −50` above the tolerance.
    pub fn quadrature_gap(f: &SeriesFunction) -> f64 {
        let closed = f.integrate_y_halfline().unwrap().eval(0.0, 0.0);
        let quad = quadrature_halfline(f, 50.0);
        (closed - quad).norm() / closed.norm().max(1.0)
    }

    /// Observed order of the truncation residual of the order-2 expansion.
    pub fn stokes_residual_exponent(p: WaveParameters) -> f64 {
        let s = StokesExpansion::expand(p, 2).unwrap();
        let eps = [0.005, 0.01, 0.02, 0.04];
        let grid = ResidualGrid::default();
        let r: Vec<f64> = eps.iter().map(|&e| s.residual(e, &grid).unwrap().truncation_max()).collect();
        loglog_slope(&eps, &r)
    }
}
