//! Newton continuation of the two Benjamin–Feir eigenvalues near the origin.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{evans_eval, monodromy_numeric_tol, ODE_TOL};
use crate::error::{EvansError, Result};
use crate::reduction::ReducedSystem;

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Stop once `|Δ|` falls below this.
    pub tol: f64,
    pub max_iter: usize,
    pub ode_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: NEWTON_TOL, max_iter: NEWTON_MAX_ITER, ode_tol: ODE_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub gamma: f64,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

fn newton(
    f: impl Fn(Complex64) -> Result<Complex64>,
    seed: Complex64,
    h: f64,
    opts: &NewtonOptions,
) -> Option<Complex64> {
    let mut z = seed;
    for _ in 0..opts.max_iter {
        let fz = f(z).ok()?;
        if fz.norm() < opts.tol {
            return Some(z);
        }
        let dh = Complex64::new(h, 0.0);
        let df = (f(z + dh).ok()? - f(z - dh).ok()?) / (2.0 * h);
        if df.norm() == 0.0 {
            return None;
        }
        let step = fz / df;
        z -= step;
        // the integrator floor keeps |Δ| from reaching tol on tiny roots
        if step.norm() <= 1e-14 * z.norm().max(1e-10) {
            return Some(z);
        }
    }
    None
}

/// Both eigenvalues `λ(κ + γ; ε)` near the origin for every `γ`, in input order.
pub fn trace_spectrum(red: &ReducedSystem, eps: f64, gammas: &[f64], opts: &NewtonOptions) -> Result<Vec<TracePoint>> {
    if red.sigma != 0.0 {
        return Err(EvansError::Precondition("spectrum tracing runs on the sigma = 0 reduction".into()));
    }
    let p = red.params;
    gammas
        .par_iter()
        .map(|&gamma| {
            let k = p.kappa + gamma;
            let f = |lam: Complex64| Ok(evans_eval(&monodromy_numeric_tol(red, lam, eps, opts.ode_tol)?, k, p.period));
            let centre = Complex64::new(0.0, p.c0 * gamma / 2.0);
            // the O(γ²) dispersion split keeps the seeds apart at ε = 0
            let offset =
                Complex64::new(p.kappa * gamma.abs() * eps / (2.0 * SQRT_2), p.c0 * gamma * gamma / (8.0 * p.kappa));
            let h = 1e-3 * offset.norm().max(1e-9);
            let l1 = newton(f, centre + offset, h, opts).ok_or(EvansError::Trace { gamma })?;
            let l2 = newton(f, centre - offset, h, opts).ok_or(EvansError::Trace { gamma })?;
            Ok(TracePoint { gamma, lambda1: l1, lambda2: l2 })
        })
        .collect()
}
