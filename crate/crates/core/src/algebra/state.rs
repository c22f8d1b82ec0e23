//! Elements of `H¹_c × L²_c × ℂ` and their pairing.

use std::ops::{Add, Sub};

use num_complex::Complex64;

use super::series::SeriesFunction;
use crate::error::{EvansError, Result};

/// A triple `(φ, u, η)`. `φ` and `u` are functions of `y` (and possibly `x`);
/// `η` carries no `y`-dependence. Constant-in-`y` terms are the `φ_∞`, `u_∞` parts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WaveState {
    pub phi: SeriesFunction,
    pub u: SeriesFunction,
    pub eta: SeriesFunction,
}

impl WaveState {
    pub fn new(phi: SeriesFunction, u: SeriesFunction, eta: SeriesFunction) -> Result<Self> {
        if !eta.is_y_free() {
            return Err(EvansError::Domain("eta component must not depend on y".into()));
        }
        Ok(WaveState { phi, u, eta })
    }

    pub fn zero() -> Self {
        WaveState::default()
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.u.is_zero() && self.eta.is_zero()
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        WaveState { phi: self.phi.scale(c), u: self.u.scale(c), eta: self.eta.scale(c) }
    }

    /// Multiply every component by an `x`-only series.
    pub fn mul_x(&self, f: &SeriesFunction) -> Self {
        WaveState { phi: &self.phi * f, u: &self.u * f, eta: &self.eta * f }
    }

    pub fn shift_x_freq(&self, freq: f64) -> Self {
        WaveState { phi: self.phi.shift_x_freq(freq), u: self.u.shift_x_freq(freq), eta: self.eta.shift_x_freq(freq) }
    }

    pub fn x_mode_coeff(&self, freq: f64) -> Self {
        WaveState { phi: self.phi.x_mode_coeff(freq), u: self.u.x_mode_coeff(freq), eta: self.eta.x_mode_coeff(freq) }
    }

    /// Distinct `x`-frequencies across all components.
    pub fn x_frequencies(&self) -> Vec<f64> {
        let mut all = self.phi.x_frequencies();
        all.extend(self.u.x_frequencies());
        all.extend(self.eta.x_frequencies());
        all.sort_by(f64::total_cmp);
        all.dedup_by(|a, b| super::series::same_rate(*a, *b));
        all
    }

    pub fn dx(&self) -> Self {
        WaveState { phi: self.phi.dx(), u: self.u.dx(), eta: self.eta.dx() }
    }

    pub fn max_coeff(&self) -> f64 {
        self.phi.max_coeff().max(self.u.max_coeff()).max(self.eta.max_coeff())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).max_coeff()
    }

    pub fn is_x_free(&self) -> bool {
        self.phi.is_x_free() && self.u.is_x_free() && self.eta.is_x_free()
    }

    /// Pointwise value of the three components at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> [Complex64; 3] {
        [self.phi.eval(x, y), self.u.eval(x, y), self.eta.eval(x, 0.0)]
    }
}

impl Add for &WaveState {
    type Output = WaveState;
    fn add(self, rhs: &WaveState) -> WaveState {
        WaveState { phi: &self.phi + &rhs.phi, u: &self.u + &rhs.u, eta: &self.eta + &rhs.eta }
    }
}

impl Sub for &WaveState {
    type Output = WaveState;
    fn sub(self, rhs: &WaveState) -> WaveState {
        WaveState { phi: &self.phi - &rhs.phi, u: &self.u - &rhs.u, eta: &self.eta - &rhs.eta }
    }
}

/// `∫ f g* dy` over the half-line for decaying parts.
fn halfline_pair(f: &SeriesFunction, g: &SeriesFunction) -> Result<SeriesFunction> {
    (f * &g.conj()).integrate_y_halfline()
}

/// Inner product of `Y = H¹_c × L²_c × ℂ`, conjugate-linear in the second slot.
///
/// `u2` must be `x`-free. `u1` may carry `x`-dependence, in which case the
/// result is a series in `x` (the pairing is taken mode by mode).
pub fn inner_product_x(u1: &WaveState, u2: &WaveState) -> Result<SeriesFunction> {
    if !u2.is_x_free() {
        return Err(EvansError::Domain("second argument of the pairing must be x-free".into()));
    }
    let (p1, p1c) = u1.phi.split_constant();
    let (p2, p2c) = u2.phi.split_constant();
    let (v1, v1c) = u1.u.split_constant();
    let (v2, v2c) = u2.u.split_constant();
    let mut acc = halfline_pair(&p1, &p2)?;
    acc += &halfline_pair(&p1.dy(), &p2.dy())?;
    acc += &(&p1c * &p2c.conj());
    acc += &halfline_pair(&v1, &v2)?;
    acc += &(&v1c * &v2c.conj());
    acc += &(&u1.eta * &u2.eta.conj());
    Ok(acc)
}

/// Inner product of two `x`-free states.
pub fn inner_product(u1: &WaveState, u2: &WaveState) -> Result<Complex64> {
    if !u1.is_x_free() {
        return Err(EvansError::Domain("first argument of the pairing must be x-free".into()));
    }
    Ok(inner_product_x(u1, u2)?.eval(0.0, 0.0))
}
