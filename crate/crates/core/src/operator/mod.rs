//! The constant-coefficient spectral operator `L(λ)`, its adjoint, the
//! dispersion relation and the `ε`-dependent remainder `B`.
//!
//! States are `(φ, u, η)` with `u` standing for the substituted variable `ũ`,
//! so the domain condition is `η = u(0)` at every amplitude.

mod basis;
mod full;

pub use basis::{adjoint_eigenfunction, eigenfunction, projection, SpectralBasis};
pub use full::{build_b, OperatorExpansion, StateExpansion};

use num_complex::Complex64;

use crate::algebra::{SeriesFunction, WaveState, TAU_ALG};
use crate::error::{EvansError, Result};
use crate::ode::{particular_solution, DEFAULT_YPOW_CAP};
use crate::stokes::WaveParameters;

/// Both branches `σ_±(k) = c0 k ± √(g|k|)`.
pub fn dispersion(params: &WaveParameters, k: f64) -> (f64, f64) {
    let r = (params.g * k.abs()).sqrt();
    (params.c0 * k + r, params.c0 * k - r)
}

/// Branch-point frequency `σ_c = c0 κ / 4`.
pub fn sigma_c(params: &WaveParameters) -> f64 {
    params.c0 * params.kappa / 4.0
}

/// One root `k_j(σ)` of `(σ − c0 k)² = g|k|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub label: usize,
    pub k: f64,
    pub multiplicity: usize,
}

/// Real roots at a fixed `σ ≥ 0`, listed in increasing `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionRoots {
    pub sigma: f64,
    pub roots: Vec<Root>,
}

impl DispersionRoots {
    pub fn k(&self, label: usize) -> Option<f64> {
        self.roots.iter().find(|r| r.label == label).map(|r| r.k)
    }
}

/// Closed-form roots through the quadratic in `√|k|`.
pub fn dispersion_roots(params: &WaveParameters, sigma: f64) -> Result<DispersionRoots> {
    if !(sigma >= 0.0) {
        return Err(EvansError::Invalid(format!("sigma must be >= 0, got {sigma}")));
    }
    let sk = params.kappa.sqrt();
    let q = sigma / params.c0;
    let disc_pos = (params.kappa + 4.0 * q).sqrt();
    let k2 = (0.5 * (sk + disc_pos)).powi(2);
    let k4 = (0.5 * (disc_pos - sk)).powi(2);
    let sc = sigma_c(params);
    let mut roots = Vec::new();
    if sigma <= sc * (1.0 + TAU_ALG) {
        let disc_neg = (params.kappa - 4.0 * q).max(0.0).sqrt();
        let k1 = -(0.5 * (sk + disc_neg)).powi(2);
        let k3 = -(0.5 * (sk - disc_neg)).powi(2);
        let m13 = if disc_neg == 0.0 { 2 } else { 1 };
        roots.push(Root { label: 1, k: k1, multiplicity: m13 });
        if sigma == 0.0 {
            roots.push(Root { label: 3, k: 0.0, multiplicity: 2 });
            roots.push(Root { label: 4, k: 0.0, multiplicity: 2 });
        } else {
            roots.push(Root { label: 3, k: k3, multiplicity: m13 });
            roots.push(Root { label: 4, k: k4, multiplicity: 1 });
        }
    } else {
        roots.push(Root { label: 4, k: k4, multiplicity: 1 });
    }
    roots.push(Root { label: 2, k: k2, multiplicity: 1 });
    Ok(DispersionRoots { sigma, roots })
}

fn check_small(what: &str, residual: &SeriesFunction, scale: f64) -> Result<()> {
    let r = residual.max_coeff();
    if r > TAU_ALG * scale.max(1.0) {
        return Err(EvansError::Precondition(format!("{what} violated by {r:e}")));
    }
    Ok(())
}

/// `L(λ)u` componentwise; requires `η = u(0)`.
pub fn apply_l(params: &WaveParameters, lambda: Complex64, u: &WaveState) -> Result<WaveState> {
    check_small("domain condition eta - u(0) = 0", &(&u.eta - &u.u.at_y0()), u.max_coeff())?;
    Ok(apply_l_unchecked(params, lambda, u))
}

pub(crate) fn apply_l_unchecked(params: &WaveParameters, lambda: Complex64, u: &WaveState) -> WaveState {
    let WaveParameters { g, c0, .. } = *params;
    let phi = (&u.phi.scale(lambda) + &u.u.scale(g)).scale(1.0 / c0);
    let uu = (&(&u.phi.dy().dy().scale(c0 * c0) + &u.phi.scale(lambda * lambda)) + &u.u.scale(g * lambda))
        .scale(-1.0 / (g * c0));
    let eta = (&u.eta.scale(lambda) - &u.phi.dy().at_y0()).scale(1.0 / c0);
    WaveState { phi, u: uu, eta }
}

/// Decaying solution of `φ_p'' − φ_p = (c0² + λ*²) u2 / (g c0)` with `φ_p'(0) = 0`.
pub fn solve_phi_p(params: &WaveParameters, u2: &SeriesFunction, lambda: Complex64) -> Result<SeriesFunction> {
    let (dec, cst) = u2.split_constant();
    if !cst.is_zero() {
        return Err(EvansError::Domain("solve_phi_p takes the decaying part of u only".into()));
    }
    let lc = lambda.conj();
    let q = (params.c0 * params.c0 + lc * lc) / (params.g * params.c0);
    let p = particular_solution(1.0, &dec.scale(q), DEFAULT_YPOW_CAP)?;
    let slope = p.dy().at_y0();
    Ok(&p - &(&slope * &SeriesFunction::y_exp(1.0, 1.0)?))
}

/// `L(λ)†u` for `u` with `u_dec(0) + κη = 0`.
///
/// The constant parts are propagated with the same signs as in `L(λ)`, so
/// `⟨L u1, u2⟩ = ⟨u1, L† u2⟩` holds for states carrying `φ_∞, u_∞`.
pub fn apply_l_adjoint(params: &WaveParameters, lambda: Complex64, u: &WaveState) -> Result<WaveState> {
    let WaveParameters { kappa, g, c0, .. } = *params;
    let (p2, p2c) = u.phi.split_constant();
    let (v2, v2c) = u.u.split_constant();
    check_small("adjoint domain condition u(0) + kappa*eta = 0", &(&v2.at_y0() + &u.eta.scale(kappa)), u.max_coeff())?;
    let lc = lambda.conj();
    let slope0 = p2.dy().at_y0();
    let phi_p = solve_phi_p(params, &v2, lambda)?;

    let mut phi = &(&p2.scale(lc / c0) + &v2.scale(c0 / g)) + &phi_p;
    phi += &(&p2c.scale(lc / c0) - &v2c.scale(lc * lc / (g * c0)));

    let mut uu = &(&p2.scale(g / c0) - &p2.dy().dy().scale(g / c0)) - &v2.scale(lc / c0);
    uu += &(&(&p2c.scale(g / c0) - &v2c.scale(lc / c0)) - &slope0.scale(g / c0));

    let eta = &slope0.scale(g / c0) + &u.eta.scale(lc / c0);
    Ok(WaveState { phi, u: uu, eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{inner_product, parse_series};

    fn unit() -> WaveParameters {
        WaveParameters::with_speed(1.0, 1.0).unwrap()
    }

    #[test]
    fn dispersion_values() {
        let p = unit();
        assert_eq!(dispersion(&p, 1.0), (2.0, 0.0));
        let (sp, _) = dispersion(&p, -0.25);
        assert!((sp - sigma_c(&p)).abs() < 1e-15);
        assert_eq!(dispersion(&p, 0.0), (0.0, 0.0));
    }

    #[test]
    fn roots_at_sample_frequencies() {
        let p = unit();
        let r0 = dispersion_roots(&p, 0.0).unwrap();
        assert_eq!(r0.k(1), Some(-1.0));
        assert_eq!(r0.k(2), Some(1.0));
        assert_eq!(r0.k(3), Some(0.0));
        let r = dispersion_roots(&p, 0.75).unwrap();
        assert_eq!(r.roots.len(), 2);
        assert!((r.k(2).unwrap() - 2.25).abs() < 1e-14);
        assert!((r.k(4).unwrap() - 0.25).abs() < 1e-14);
        let rc = dispersion_roots(&p, 0.25).unwrap();
        assert!((rc.k(1).unwrap() + 0.25).abs() < 1e-14);
        assert!((rc.k(3).unwrap() + 0.25).abs() < 1e-14);
        assert!((rc.k(2).unwrap() - (3.0 + 8f64.sqrt()) / 4.0).abs() < 1e-14);
        assert!((rc.k(4).unwrap() - (3.0 - 8f64.sqrt()) / 4.0).abs() < 1e-14);
        assert_eq!(rc.roots[0].multiplicity, 2);
    }

    #[test]
    fn phi_p_examples() {
        let p = unit();
        let z = Complex64::new(0.0, 0.0);
        let a = solve_phi_p(&p, &parse_series("exp(1*y)").unwrap(), z).unwrap();
        assert!(a.distance(&parse_series("0.5 * y * exp(1*y) - 0.5 * exp(1*y)").unwrap()) < 1e-14);
        let b = solve_phi_p(&p, &parse_series("exp(2*y)").unwrap(), z).unwrap();
        let expect = &SeriesFunction::y_exp(1.0 / 3.0, 2.0).unwrap() - &SeriesFunction::y_exp(2.0 / 3.0, 1.0).unwrap();
        assert!(b.distance(&expect) < 1e-14);
    }

    #[test]
    fn domain_violation_is_rejected() {
        let p = unit();
        let u = WaveState::new(SeriesFunction::zero(), SeriesFunction::constant(1.0), SeriesFunction::zero()).unwrap();
        assert!(matches!(apply_l(&p, Complex64::new(0.0, 0.0), &u), Err(EvansError::Precondition(_))));
    }

    #[test]
    fn adjoint_identity_with_constant_parts() {
        let p = WaveParameters::new(2.0, 3.0).unwrap();
        let lam = Complex64::new(0.3, 0.7);
        let u1 = {
            let phi = parse_series("(1,2) * exp(1.5*y) + (0.5,-1) + y * exp(0.7*y)").unwrap();
            let u = parse_series("(0.2,1) * exp(2*y) + (-1,0.3)").unwrap();
            let eta = u.at_y0();
            WaveState::new(phi, u, eta).unwrap()
        };
        let u2 = {
            let phi = parse_series("(0.4,0.1) * exp(1*y) + (2,1) + (0,1) * exp(3*y)").unwrap();
            let v = parse_series("(1,-1) * exp(0.8*y) + (0.3,0.2) * exp(1*y)").unwrap();
            let eta = v.at_y0().scale(-1.0 / p.kappa);
            WaveState::new(phi, &v + &SeriesFunction::constant(Complex64::new(0.7, -0.4)), eta).unwrap()
        };
        let lhs = inner_product(&apply_l(&p, lam, &u1).unwrap(), &u2).unwrap();
        let rhs = inner_product(&u1, &apply_l_adjoint(&p, lam, &u2).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
    }
}
