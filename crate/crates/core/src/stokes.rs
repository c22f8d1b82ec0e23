//! Small-amplitude Stokes waves in flattened coordinates.
//!
//! The free surface is mapped to `y = 0` by `y ↦ y − η(x)`. The stationary
//! system in the moving frame is
//!
//! ```text
//! u = φ_x − η_x φ_y,           u_x − η_x u_y + φ_yy = 0        (y < 0)
//! (u − c) η_x − φ_y = 0,       −c u + (u − c) η_x φ_y + u²/2 − φ_y²/2 + g η = 0   (y = 0)
//! ```
//!
//! and is solved order by order in the amplitude `ε`, one Fourier mode at a time.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{same_rate, SeriesFunction};
use crate::error::{EvansError, Result};
use crate::expansion::{Expansion, Truncation};
use crate::ode::{particular_solution, DEFAULT_YPOW_CAP};

/// Highest order the expansion is built to by default.
pub const DEFAULT_MAX_ORDER: usize = 4;

/// Wave number, gravity and the derived linear speed and period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParameters {
    pub kappa: f64,
    pub g: f64,
    pub c0: f64,
    pub period: f64,
}

impl WaveParameters {
    pub fn new(kappa: f64, g: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) || !(g > 0.0 && g.is_finite()) {
            return Err(EvansError::Invalid(format!("need kappa > 0 and g > 0, got kappa={kappa}, g={g}")));
        }
        Ok(WaveParameters { kappa, g, c0: (g / kappa).sqrt(), period: 2.0 * PI / kappa })
    }

    /// Parameters with a prescribed linear speed: `g = κ c0²`.
    pub fn with_speed(kappa: f64, c0: f64) -> Result<Self> {
        Self::new(kappa, kappa * c0 * c0)
    }
}

/// Per-order profiles `φ_n(x, y)`, `η_n(x)` and speed corrections `c_n`.
#[derive(Debug, Clone)]
pub struct StokesExpansion {
    pub params: WaveParameters,
    pub order: usize,
    /// `phi[n]` is `φ_n`; `phi[0]` is zero.
    pub phi: Vec<SeriesFunction>,
    pub eta: Vec<SeriesFunction>,
    /// `c[0] = c0`; `c[n]` is known for `n ≤ order − 1`.
    pub c: Vec<f64>,
}

fn sin_mode(k: f64, amp: f64) -> SeriesFunction {
    &SeriesFunction::x_mode(Complex64::new(0.0, -0.5 * amp), k)
        + &SeriesFunction::x_mode(Complex64::new(0.0, 0.5 * amp), -k)
}

fn cos_mode(k: f64, amp: f64) -> SeriesFunction {
    &SeriesFunction::x_mode(0.5 * amp, k) + &SeriesFunction::x_mode(0.5 * amp, -k)
}

/// Residual pieces of the interior, kinematic and dynamic equations.
struct Residuals<F> {
    interior: F,
    kinematic: F,
    dynamic: F,
}

/// Arithmetic needed to evaluate the flattened system, shared by plain series
/// (numeric `ε`) and truncated `ε`-expansions (symbolic orders).
trait Field: Sized {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Result<Self>;
    fn scale(&self, c: f64) -> Self;
    fn dx(&self) -> Self;
    fn dy(&self) -> Self;
    fn at_y0(&self) -> Self;
}

impl Field for SeriesFunction {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        self.mul_checked(o, crate::algebra::DEFAULT_TERM_CAP)
    }
    fn scale(&self, c: f64) -> Self {
        SeriesFunction::scale(self, c)
    }
    fn dx(&self) -> Self {
        SeriesFunction::dx(self)
    }
    fn dy(&self) -> Self {
        SeriesFunction::dy(self)
    }
    fn at_y0(&self) -> Self {
        SeriesFunction::at_y0(self)
    }
}

impl Field for Expansion {
    fn add(&self, o: &Self) -> Self {
        Expansion::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Expansion::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        Expansion::mul(self, o)
    }
    fn scale(&self, c: f64) -> Self {
        Expansion::scale(self, c)
    }
    fn dx(&self) -> Self {
        Expansion::dx(self)
    }
    fn dy(&self) -> Self {
        Expansion::dy(self)
    }
    fn at_y0(&self) -> Self {
        Expansion::at_y0(self)
    }
}

fn residuals<F: Field>(phi: &F, eta: &F, c: &F, g: f64) -> Result<Residuals<F>> {
    let phi_x = phi.dx();
    let phi_y = phi.dy();
    let eta_x = eta.dx();
    let u = phi_x.sub(&eta_x.mul(&phi_y)?);
    let interior = u.dx().sub(&eta_x.mul(&u.dy())?).add(&phi_y.dy());
    let u0 = u.at_y0();
    let phi_y0 = phi_y.at_y0();
    let u_minus_c = u0.sub(c);
    let kinematic = u_minus_c.mul(&eta_x)?.sub(&phi_y0);
    let dynamic = c
        .mul(&u0)?
        .scale(-1.0)
        .add(&u_minus_c.mul(&eta_x)?.mul(&phi_y0)?)
        .add(&u0.mul(&u0)?.scale(0.5))
        .sub(&phi_y0.mul(&phi_y0)?.scale(0.5))
        .add(&eta.scale(g));
    Ok(Residuals { interior, kinematic, dynamic })
}

/// `Σ_k f_k ε^k` for a list of per-order series.
fn sum_orders(fs: &[SeriesFunction], eps: f64) -> SeriesFunction {
    let mut s = SeriesFunction::zero();
    for (k, f) in fs.iter().enumerate() {
        if !f.is_zero() {
            s += &f.scale(eps.powi(k as i32));
        }
    }
    s
}

fn as_expansion(fs: &[SeriesFunction], trunc: Truncation) -> Expansion {
    let mut e = Expansion::zero(trunc);
    for (k, f) in fs.iter().enumerate() {
        e.set(0, k, f.clone());
    }
    e
}

/// Coefficient of `ε^n` in the residuals of a partial expansion.
fn order_coefficient(
    phi: &[SeriesFunction],
    eta: &[SeriesFunction],
    c: &[f64],
    g: f64,
    n: usize,
) -> Result<Residuals<SeriesFunction>> {
    let trunc = Truncation::new(0, n, n);
    let cs: Vec<SeriesFunction> = c.iter().map(|&v| SeriesFunction::constant(v)).collect();
    let r = residuals(&as_expansion(phi, trunc), &as_expansion(eta, trunc), &as_expansion(&cs, trunc), g)?;
    Ok(Residuals { interior: r.interior.get(0, n), kinematic: r.kinematic.get(0, n), dynamic: r.dynamic.get(0, n) })
}

impl StokesExpansion {
    /// Build the expansion through `order` (2 ≤ order ≤ `max_order`).
    pub fn expand(params: WaveParameters, order: usize) -> Result<Self> {
        Self::expand_with_cap(params, order, DEFAULT_MAX_ORDER)
    }

    pub fn expand_with_cap(params: WaveParameters, order: usize, max_order: usize) -> Result<Self> {
        if order < 1 || order > max_order {
            return Err(EvansError::Invalid(format!("Stokes order must be in 1..={max_order}, got {order}")));
        }
        let WaveParameters { kappa, g, c0, .. } = params;
        let ey = SeriesFunction::y_exp(1.0, kappa)?;
        let mut phi = vec![SeriesFunction::zero(), &sin_mode(kappa, 1.0) * &ey];
        let mut eta = vec![SeriesFunction::zero(), cos_mode(kappa, 1.0 / c0)];
        let mut c = vec![c0];
        for n in 2..=order {
            let mut c_try = c.clone();
            c_try.push(0.0);
            let r = order_coefficient(&phi, &eta, &c_try, g, n)?;
            let (phi_n, eta_n, c_prev) = solve_order(&params, n, &r)?;
            phi.push(phi_n);
            eta.push(eta_n);
            c.push(c_prev);
        }
        Ok(StokesExpansion { params, order, phi, eta, c })
    }

    /// `c_n`, zero when not yet determined.
    pub fn speed_coeff(&self, n: usize) -> f64 {
        self.c.get(n).copied().unwrap_or(0.0)
    }

    /// Truncated `φ(x, y; ε)`.
    pub fn phi_at(&self, eps: f64) -> SeriesFunction {
        sum_orders(&self.phi, eps)
    }

    pub fn eta_at(&self, eps: f64) -> SeriesFunction {
        sum_orders(&self.eta, eps)
    }

    pub fn speed_at(&self, eps: f64) -> f64 {
        self.c.iter().enumerate().map(|(k, ck)| ck * eps.powi(k as i32)).sum()
    }

    /// Sup-norm residuals of the flattened system on the sampling grid.
    pub fn residual(&self, eps: f64, grid: &ResidualGrid) -> Result<StokesResidual> {
        if eps.abs() > 0.1 {
            return Err(EvansError::Precondition(format!("|eps| <= 0.1 required, got {eps}")));
        }
        let phi = self.phi_at(eps);
        let eta = self.eta_at(eps);
        let r = residuals(&phi, &eta, &SeriesFunction::constant(self.speed_at(eps)), self.params.g)?;
        let phi_y = phi.dy();
        let t = self.params.period;
        let mut out = StokesResidual::default();
        for ix in 0..grid.nx {
            let x = t * ix as f64 / grid.nx as f64;
            out.kinematic = out.kinematic.max(r.kinematic.eval(x, 0.0).norm());
            out.dynamic = out.dynamic.max(r.dynamic.eval(x, 0.0).norm());
            out.far_field = out.far_field.max(phi_y.eval(x, -grid.depth).norm());
            for iy in 0..grid.ny {
                let y = -grid.depth * iy as f64 / (grid.ny - 1) as f64;
                out.interior = out.interior.max(r.interior.eval(x, y).norm());
            }
        }
        Ok(out)
    }
}

/// Sampling grid over one period and `y ∈ [−depth, 0]`.
#[derive(Debug, Clone, Copy)]
pub struct ResidualGrid {
    pub nx: usize,
    pub ny: usize,
    pub depth: f64,
}

impl Default for ResidualGrid {
    fn default() -> Self {
        ResidualGrid { nx: 64, ny: 64, depth: 10.0 }
    }
}

/// Residuals of the five flattened equations. The definition `u = φ_x − η_x φ_y`
/// is imposed exactly, so the first equation is identically satisfied; the
/// far-field entry reports `|φ_y|` at the bottom of the grid.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StokesResidual {
    pub definition: f64,
    pub interior: f64,
    pub far_field: f64,
    pub kinematic: f64,
    pub dynamic: f64,
}

impl StokesResidual {
    /// Largest residual among the equations carrying truncation error.
    pub fn truncation_max(&self) -> f64 {
        self.interior.max(self.kinematic).max(self.dynamic)
    }
}

/// Solve the order-`n` linear problem for `(φ_n, η_n)` and `c_{n−1}`.
fn solve_order(
    params: &WaveParameters,
    n: usize,
    r: &Residuals<SeriesFunction>,
) -> Result<(SeriesFunction, SeriesFunction, f64)> {
    let WaveParameters { kappa, g, c0, .. } = *params;
    let i = Complex64::new(0.0, 1.0);
    let mut freqs = r.interior.x_frequencies();
    freqs.extend(r.kinematic.x_frequencies());
    freqs.extend(r.dynamic.x_frequencies());
    freqs.sort_by(f64::total_cmp);
    freqs.dedup_by(|a, b| same_rate(*a, *b));

    let mut phi_n = SeriesFunction::zero();
    let mut eta_n = SeriesFunction::zero();
    let mut c_prev: Option<f64> = None;
    let hier = |mode: i64, msg: String| EvansError::Hierarchy { order: n, mode, msg };

    for &w in &freqs {
        let m = (w / kappa).round() as i64;
        if !same_rate(m as f64 * kappa, w) {
            return Err(hier(m, format!("frequency {w} is not a multiple of kappa")));
        }
        let rint = r.interior.x_mode_coeff(w);
        let rk = r.kinematic.x_mode_coeff(w).eval(0.0, 0.0);
        let rd = r.dynamic.x_mode_coeff(w).eval(0.0, 0.0);
        let s = w.abs();
        // φ̂'' − ω² φ̂ = −r̂_int
        let p = particular_solution(s, &rint.scale(-1.0), DEFAULT_YPOW_CAP).map_err(|e| hier(m, e.to_string()))?;
        let p0 = p.eval(0.0, 0.0);
        let p0y = p.dy().eval(0.0, 0.0);
        if m == 0 {
            if (p0y - rk).norm() > 1e-9 * (1.0 + rk.norm()) {
                return Err(hier(0, format!("mean mass flux mismatch: {p0y} vs {rk}")));
            }
            let (dec, konst) = p.split_constant();
            if !konst.is_zero() {
                return Err(hier(0, "mean potential would be non-decaying".into()));
            }
            phi_n += &dec;
            eta_n += &SeriesFunction::constant(-rd / g);
            continue;
        }
        let iw = i * w;
        let lhs_known = -rk - c0 * iw * rd / g - c0 * c0 * w * w * p0 / g + p0y;
        let amp;
        if m.abs() == 1 {
            // c_{n−1} fixes solvability; the free homogeneous amplitude is set to zero.
            let eta1x = i * w / (2.0 * c0);
            let phi1x = Complex64::new(kappa / 2.0, 0.0);
            let coef = -c0 * iw * phi1x / g - eta1x;
            let cval = lhs_known / coef;
            if cval.im.abs() > 1e-9 * (1.0 + cval.norm()) {
                return Err(hier(m, format!("speed correction is not real: {cval}")));
            }
            match c_prev {
                Some(prev) if (prev - cval.re).abs() > 1e-9 * (1.0 + prev.abs()) => {
                    return Err(hier(m, format!("inconsistent speed corrections {prev} and {}", cval.re)));
                }
                _ => c_prev = Some(cval.re),
            }
            amp = Complex64::new(0.0, 0.0);
        } else {
            let denom = c0 * c0 * w * w / g - s;
            amp = lhs_known / denom;
        }
        let hom = SeriesFunction::y_exp(amp, s)?;
        let phat = &p + &hom;
        let cterm = if m.abs() == 1 { c_prev.unwrap_or(0.0) * kappa / 2.0 } else { 0.0 };
        let hhat = (-rd + c0 * iw * phat.eval(0.0, 0.0) + cterm) / g;
        phi_n += &phat.shift_x_freq(w);
        eta_n += &SeriesFunction::x_mode(hhat, w);
    }
    Ok((phi_n, eta_n, c_prev.unwrap_or(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_series;

    #[test]
    fn order_one_unit_parameters() {
        let p = WaveParameters::new(1.0, 1.0).unwrap();
        let s = StokesExpansion::expand(p, 2).unwrap();
        let phi1 = parse_series("(0,-0.5) * exp(i*1*x) * exp(1*y) + (0,0.5) * exp(i*-1*x) * exp(1*y)").unwrap();
        assert!(s.phi[1].distance(&phi1) < 1e-14);
        assert!(s.eta[1].distance(&parse_series("0.5 * exp(i*1*x) + 0.5 * exp(i*-1*x)").unwrap()) < 1e-14);
    }

    #[test]
    fn order_two_profiles() {
        let p = WaveParameters::new(1.0, 1.0).unwrap();
        let s = StokesExpansion::expand(p, 3).unwrap();
        let phi2 = parse_series("(0,-0.25) * exp(i*2*x) * exp(1*y) + (0,0.25) * exp(i*-2*x) * exp(1*y)").unwrap();
        assert!(s.phi[2].distance(&phi2) < 1e-12, "{}", s.phi[2]);
        let eta2 = parse_series("0.25 * exp(i*2*x) + 0.25 * exp(i*-2*x)").unwrap();
        assert!(s.eta[2].distance(&eta2) < 1e-12, "{}", s.eta[2]);
        assert!(s.c[1].abs() < 1e-12);
        assert!((s.c[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn order_one_kappa_four() {
        let p = WaveParameters::new(4.0, 4.0).unwrap();
        assert!((p.c0 - 1.0).abs() < 1e-15);
        let s = StokesExpansion::expand(p, 1).unwrap();
        assert!(s.eta[1].distance(&parse_series("0.5 * exp(i*4*x) + 0.5 * exp(i*-4*x)").unwrap()) < 1e-14);
    }

    #[test]
    fn general_parameters_match_closed_forms() {
        let p = WaveParameters::new(2.0, 3.0).unwrap();
        let s = StokesExpansion::expand(p, 3).unwrap();
        let (k, c0) = (p.kappa, p.c0);
        assert!((s.c[2] - k * k / (2.0 * c0)).abs() < 1e-12);
        let ey = SeriesFunction::y_exp(1.0, k).unwrap();
        let phi2 = (&sin_mode(2.0 * k, 1.0) * &ey).scale(k / (2.0 * c0));
        assert!(s.phi[2].distance(&phi2) < 1e-12);
        assert!(s.eta[2].distance(&cos_mode(2.0 * k, k / (2.0 * c0 * c0))) < 1e-12);
    }

    #[test]
    fn parity_and_mode_content() {
        let p = WaveParameters::new(1.0, 1.0).unwrap();
        let s = StokesExpansion::expand(p, 4).unwrap();
        for n in 1..=4 {
            for t in s.phi[n].terms() {
                assert!(t.xfreq.abs() <= n as f64 + 1e-9);
                assert!(t.yrate > 0.0);
            }
            for t in s.eta[n].terms() {
                assert!(t.xfreq.abs() <= n as f64 + 1e-9);
                assert_eq!(t.ypow, 0);
            }
            for &x in &[0.3, 1.2, 2.5] {
                let a = s.phi[n].eval(x, -0.4);
                let b = s.phi[n].eval(-x, -0.4);
                assert!((a + b).norm() < 1e-12, "phi_{n} not odd");
                assert!((s.eta[n].eval(x, 0.0) - s.eta[n].eval(-x, 0.0)).norm() < 1e-12);
                assert!(a.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn flat_state_has_zero_residual() {
        let p = WaveParameters::new(1.0, 1.0).unwrap();
        let s = StokesExpansion::expand(p, 2).unwrap();
        let r = s.residual(0.0, &ResidualGrid::default()).unwrap();
        assert_eq!(r.truncation_max(), 0.0);
    }

    #[test]
    fn dynamic_condition_exact_through_order_two() {
        let p = WaveParameters::new(1.0, 1.0).unwrap();
        let s = StokesExpansion::expand(p, 3).unwrap();
        let coeffs = order_coefficient(&s.phi[..3], &s.eta[..3], &s.c[..3], p.g, 2).unwrap();
        assert!(coeffs.dynamic.max_coeff() < 1e-12);
        assert!(coeffs.kinematic.max_coeff() < 1e-12);
        assert!(coeffs.interior.max_coeff() < 1e-12);
    }
}
