//! Monodromy of the reduced system: closed-form expansion and numerical integration.

use std::collections::BTreeMap;

use differential_equations::prelude::{ExplicitRungeKutta, IVP, ODE};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::SeriesFunction;
use crate::error::{EvansError, Result};
use crate::reduction::ReducedSystem;

pub type CMatrix = DMatrix<Complex64>;

/// Relative and absolute tolerance of the numerical monodromy.
pub const ODE_TOL: f64 = 1e-12;

/// `a^{(m,n)}(T)` of `X(T; σ, δ, ε) = Σ a^{(m,n)}(T) δ^m ε^n`.
#[derive(Debug, Clone)]
pub struct MonodromyExpansion {
    pub sigma: f64,
    pub period: f64,
    pub ks: Vec<f64>,
    pub coeffs: BTreeMap<(usize, usize), CMatrix>,
}

impl MonodromyExpansion {
    pub fn dim(&self) -> usize {
        self.ks.len()
    }

    /// `a^{(m,n)}(T)`, zero when outside the truncation.
    pub fn get(&self, m: usize, n: usize) -> CMatrix {
        self.coeffs.get(&(m, n)).cloned().unwrap_or_else(|| CMatrix::zeros(self.dim(), self.dim()))
    }

    /// Truncated `X(T)` at numeric `(δ, ε)`.
    pub fn eval(&self, delta: Complex64, eps: f64) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for (&(m, n), a) in &self.coeffs {
            out += a * (delta.powi(m as i32) * eps.powi(n as i32));
        }
        out
    }
}

/// Variation of parameters on `a_x = A(x) a`, all integrals in closed form.
pub fn monodromy_expand(red: &ReducedSystem) -> Result<MonodromyExpansion> {
    let d = red.dim();
    let ks = red.basis.ks.clone();
    let period = red.params.period;
    let mut funcs: BTreeMap<(usize, usize), Vec<Vec<SeriesFunction>>> = BTreeMap::new();
    let mut a00 = vec![vec![SeriesFunction::zero(); d]; d];
    for i in 0..d {
        a00[i][i] = SeriesFunction::x_mode(1.0, ks[i]);
    }
    funcs.insert((0, 0), a00);

    for (m, n) in red.trunc.orders().into_iter().filter(|&(m, n)| m + n > 0) {
        let mut s = vec![vec![SeriesFunction::zero(); d]; d];
        for (&(p, q), a_pq) in &red.a_terms {
            if (p, q) == (0, 0) || p > m || q > n {
                continue;
            }
            let Some(x_rest) = funcs.get(&(m - p, n - q)) else { continue };
            for i in 0..d {
                for l in 0..d {
                    for k in 0..d {
                        if a_pq[i][k].is_zero() || x_rest[k][l].is_zero() {
                            continue;
                        }
                        s[i][l] += &a_pq[i][k].mul_checked(&x_rest[k][l], crate::algebra::DEFAULT_TERM_CAP)?;
                    }
                }
            }
        }
        let mut out = vec![vec![SeriesFunction::zero(); d]; d];
        for i in 0..d {
            for l in 0..d {
                if s[i][l].is_zero() {
                    continue;
                }
                let integral = s[i][l].shift_x_freq(-ks[i]).integrate_x();
                out[i][l] = integral.shift_x_freq(ks[i]);
            }
        }
        funcs.insert((m, n), out);
    }

    let coeffs = funcs
        .into_iter()
        .map(|(key, mat)| {
            let mut c = CMatrix::zeros(d, d);
            for i in 0..d {
                for l in 0..d {
                    c[(i, l)] = mat[i][l].eval_x(period);
                }
            }
            (key, c)
        })
        .collect();
    Ok(MonodromyExpansion { sigma: red.sigma, period, ks, coeffs })
}

struct Flow<'a> {
    red: &'a ReducedSystem,
    delta: Complex64,
    eps: f64,
}

impl ODE<f64, Vec<f64>> for Flow<'_> {
    fn diff(&self, x: f64, y: &Vec<f64>, dy: &mut Vec<f64>) {
        let d = self.red.dim();
        let a = self.red.eval_matrix(x, self.delta, self.eps);
        // y holds the d×d fundamental matrix column-major as (re, im) pairs
        for col in 0..d {
            for i in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    let idx = 2 * (col * d + k);
                    acc += a[i][k] * Complex64::new(y[idx], y[idx + 1]);
                }
                let idx = 2 * (col * d + i);
                dy[idx] = acc.re;
                dy[idx + 1] = acc.im;
            }
        }
    }
}

/// `X(T; σ, δ, ε)` by adaptive eighth-order integration of the truncated `A`.
pub fn monodromy_numeric(red: &ReducedSystem, delta: Complex64, eps: f64) -> Result<CMatrix> {
    monodromy_numeric_tol(red, delta, eps, ODE_TOL)
}

pub fn monodromy_numeric_tol(red: &ReducedSystem, delta: Complex64, eps: f64, tol: f64) -> Result<CMatrix> {
    let d = red.dim();
    let mut y0 = vec![0.0; 2 * d * d];
    for i in 0..d {
        y0[2 * (i * d + i)] = 1.0;
    }
    let flow = Flow { red, delta, eps };
    let sol = IVP::ode(&flow, 0.0, red.params.period, y0)
        .method(ExplicitRungeKutta::dop853().rtol(tol).atol(tol))
        .solve()
        .map_err(|e| EvansError::Integration(format!("{e:?}")))?;
    let y = sol.y.last().ok_or_else(|| EvansError::Integration("no output".into()))?;
    let mut x = CMatrix::zeros(d, d);
    for col in 0..d {
        for i in 0..d {
            let idx = 2 * (col * d + i);
            x[(i, col)] = Complex64::new(y[idx], y[idx + 1]);
        }
    }
    Ok(x)
}
