//! The full linearization `F(x; λ, ε)` about a Stokes wave in the variables
//! `(φ, ũ, η)`, expanded in `δ = λ − iσ` and `ε`, and its remainder
//! `B = F − L(iσ)`.

use num_complex::Complex64;

use super::apply_l_unchecked;
use crate::algebra::{SeriesFunction, WaveState};
use crate::error::{EvansError, Result};
use crate::expansion::{Expansion, Truncation};
use crate::stokes::{StokesExpansion, WaveParameters};

/// A state-valued `(δ, ε)` expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct StateExpansion {
    pub phi: Expansion,
    pub u: Expansion,
    pub eta: Expansion,
}

impl StateExpansion {
    pub fn get(&self, m: usize, n: usize) -> WaveState {
        WaveState { phi: self.phi.get(m, n), u: self.u.get(m, n), eta: self.eta.get(m, n) }
    }

    pub fn trunc(&self) -> Truncation {
        self.phi.trunc()
    }
}

/// Coefficient functions of the linearization, kept as `(δ, ε)` expansions
/// with `x`-dependent series entries.
#[derive(Debug, Clone)]
pub struct OperatorExpansion {
    pub params: WaveParameters,
    pub sigma: f64,
    trunc: Truncation,
    lambda: Expansion,
    f1: Expansion,
    f2: Expansion,
    f3: Expansion,
    f1x: Expansion,
    f3x: Expansion,
    lam_f2: Expansion,
    lam_f2x: Expansion,
    inv_f1: Expansion,
    hx: Expansion,
    big_phi_y: Expansion,
    big_phi_yy: Expansion,
    big_u_y: Expansion,
}

fn series_expansion(trunc: Truncation, coeffs: &[SeriesFunction], n_max: usize) -> Expansion {
    let mut e = Expansion::zero(trunc);
    for (n, f) in coeffs.iter().enumerate().take(n_max + 1) {
        e.set(0, n, f.clone());
    }
    e
}

/// Expand the linearization about `stokes` at `λ = iσ + δ`.
pub fn build_b(stokes: &StokesExpansion, sigma: f64, trunc: Truncation) -> Result<OperatorExpansion> {
    let n_max = trunc.n_max.min(trunc.total);
    if n_max > stokes.order {
        return Err(EvansError::Truncation(format!("epsilon order {n_max} exceeds the Stokes order {}", stokes.order)));
    }
    if stokes.c.len() <= n_max {
        return Err(EvansError::Truncation(format!(
            "speed correction c_{n_max} is fixed only at Stokes order {}; got order {}",
            n_max + 1,
            stokes.order
        )));
    }
    let params = stokes.params;
    let WaveParameters { g, c0, .. } = params;
    let one = Expansion::constant(trunc, SeriesFunction::constant(1.0));

    let big_phi = series_expansion(trunc, &stokes.phi, n_max);
    let big_h = series_expansion(trunc, &stokes.eta, n_max);
    let speeds: Vec<SeriesFunction> = stokes.c.iter().map(|&c| SeriesFunction::constant(c)).collect();
    let big_c = series_expansion(trunc, &speeds, n_max);

    let hx = big_h.dx();
    let big_phi_y = big_phi.dy();
    let big_phi_yy = big_phi_y.dy();
    let big_u = big_phi.dx().sub(&hx.mul(&big_phi_y)?);
    let big_u_y = big_u.dy();
    let u0 = big_u.at_y0();
    let phi_y0 = big_phi_y.at_y0();

    let mut lambda = Expansion::constant(trunc, SeriesFunction::constant(Complex64::new(0.0, sigma)));
    lambda.set(1, 0, SeriesFunction::constant(1.0));

    // 1/(C − U0) = (1/c0) · 1/(1 + (C − c0 − U0)/c0)
    let speed_gap = big_c.sub(&u0);
    let r = speed_gap.sub(&one.scale(c0)).scale(1.0 / c0);
    let f2 = Expansion::geometric_inverse(&r)?.scale(1.0 / c0);
    let lam_phi_y0 = lambda.mul(&phi_y0)?;
    let f1 = one.scale(g).sub(&lam_phi_y0).mul(&f2)?;
    let f3 = phi_y0.mul(&f2)?;
    // 1/f1 = (C − U0)/g · 1/(1 − λΦ_y(0)/g)
    let inv_f1 = speed_gap.scale(1.0 / g).mul(&Expansion::geometric_inverse(&lam_phi_y0.scale(-1.0 / g))?)?;
    let lam_f2 = lambda.mul(&f2)?;
    let lam_f2x = lambda.mul(&f2.dx())?;

    Ok(OperatorExpansion {
        params,
        sigma,
        trunc,
        f1x: f1.dx(),
        f3x: f3.dx(),
        lambda,
        f1,
        f2,
        f3,
        lam_f2,
        lam_f2x,
        inv_f1,
        hx,
        big_phi_y,
        big_phi_yy,
        big_u_y,
    })
}

impl OperatorExpansion {
    pub fn trunc(&self) -> Truncation {
        self.trunc
    }

    /// `F(x; iσ + δ, ε)u`, order by order.
    pub fn apply_full(&self, state: &WaveState) -> Result<StateExpansion> {
        let t = self.trunc;
        let phi = Expansion::constant(t, state.phi.clone());
        let ut = Expansion::constant(t, state.u.clone());
        let eta = Expansion::constant(t, state.eta.clone());
        let phi_y = phi.dy();
        let phi_yy = phi_y.dy();

        let u = self.f1.mul(&ut)?.add(&self.lam_f2.mul(&phi)?).add(&self.f3.mul(&phi_y)?);
        let u_y = self.f1.mul(&ut.dy())?.add(&self.lam_f2.mul(&phi_y)?).add(&self.f3.mul(&phi_yy)?);
        let kin = self.lambda.mul(&eta)?.add(&self.hx.mul(&u.at_y0())?).sub(&phi_y.at_y0());
        let eta_x = self.f2.mul(&kin)?;
        let phi_x = u.add(&self.hx.mul(&phi_y)?).add(&self.big_phi_y.mul(&eta_x)?);
        let phi_xy = u_y.add(&self.hx.mul(&phi_yy)?).add(&self.big_phi_yy.mul(&eta_x)?);
        let u_x = self.hx.mul(&u_y)?.add(&self.big_u_y.mul(&eta_x)?).sub(&phi_yy);
        let rest = u_x
            .sub(&self.f1x.mul(&ut)?)
            .sub(&self.lam_f2x.mul(&phi)?)
            .sub(&self.lam_f2.mul(&phi_x)?)
            .sub(&self.f3x.mul(&phi_y)?)
            .sub(&self.f3.mul(&phi_xy)?);
        let ut_x = self.inv_f1.mul(&rest)?;
        Ok(StateExpansion { phi: phi_x, u: ut_x, eta: eta_x })
    }

    /// `B(x; σ, δ, ε)u = F u − L(iσ)u`; the (0,0) order vanishes.
    pub fn apply(&self, state: &WaveState) -> Result<StateExpansion> {
        let mut full = self.apply_full(state)?;
        let l0 = apply_l_unchecked(&self.params, Complex64::new(0.0, self.sigma), state);
        full.phi.set(0, 0, &full.phi.get(0, 0) - &l0.phi);
        full.u.set(0, 0, &full.u.get(0, 0) - &l0.u);
        full.eta.set(0, 0, &full.eta.get(0, 0) - &l0.eta);
        Ok(full)
    }
}
