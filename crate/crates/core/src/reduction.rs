//! Order-by-order reduction onto `Y(σ)`.
//!
//! With `v = Σ a_j φ_j` and `w = Σ a_j W_j(x)`, the reduced equation reads
//! `a_x = A(x) a` where
//!
//! ```text
//! A_ij = i k_j δ_ij + ⟨B(φ_j + W_j), ψ_i⟩
//! W_j' + Σ_i W_i A_ij = L W_j + (1 − Π) B(φ_j + W_j)
//! ```
//!
//! `W_j` is periodic in `x`; the mode `e^{iνκx}` of `W_j` is found from the
//! resolvent `(iω − L(iσ))` at `ω = k_j + νκ`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::algebra::{inner_product, same_rate, SeriesFunction, WaveState};
use crate::error::{EvansError, Result};
use crate::expansion::Truncation;
use crate::ode::particular_solution;
use crate::operator::{build_b, OperatorExpansion, SpectralBasis, StateExpansion};
use crate::stokes::{StokesExpansion, WaveParameters};

/// Largest power of `y` a reduction function may carry.
pub const REDUCTION_YPOW_CAP: u32 = 1;

/// Square matrix of series in `x`.
pub type CoeffMatrix = Vec<Vec<SeriesFunction>>;

/// `W_j^{(m,n)}` for every basis direction `j`.
#[derive(Debug, Clone)]
pub struct ReductionTerm {
    pub order: (usize, usize),
    pub w: Vec<WaveState>,
}

#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub params: WaveParameters,
    pub sigma: f64,
    pub basis: SpectralBasis,
    pub trunc: Truncation,
    pub a_terms: BTreeMap<(usize, usize), CoeffMatrix>,
    pub w_terms: Vec<ReductionTerm>,
}

fn ey(a: f64) -> SeriesFunction {
    if same_rate(a, 0.0) {
        SeriesFunction::constant(1.0)
    } else {
        SeriesFunction::y_exp(1.0, a).expect("positive rate")
    }
}

fn at0(f: &SeriesFunction) -> Complex64 {
    f.at_y0().eval(0.0, 0.0)
}

/// Solve `(iω − L(iσ)) w = f` for an `x`-free `f`.
///
/// When `iω` is an eigenvalue the forcing must satisfy the boundary
/// solvability condition; the free multiple of the eigenfunction is fixed by
/// `⟨w, ψ_i⟩ = 0` for the basis direction with `k_i = ω`.
pub fn resolvent_solve(params: &WaveParameters, basis: &SpectralBasis, omega: f64, f: &WaveState) -> Result<WaveState> {
    if !f.is_x_free() {
        return Err(EvansError::Precondition("resolvent forcing must be x-free".into()));
    }
    let WaveParameters { g, c0, .. } = *params;
    let sigma = basis.sigma;
    let lam = Complex64::new(0.0, sigma);
    let mu = Complex64::new(0.0, omega);
    let a = c0 * mu - lam;
    let w_abs = if same_rate(omega, 0.0) { 0.0 } else { omega.abs() };
    let scale = f.max_coeff().max(1.0);

    // φ'' − ω²φ = (g f_u + (c0 μ + λ) f_φ) / c0
    let rhs = (&f.u.scale(g) + &f.phi.scale(c0 * mu + lam)).scale(1.0 / c0);
    let part = particular_solution(w_abs, &rhs, REDUCTION_YPOW_CAP)?;
    let hom = ey(w_abs);
    // a²φ(0)/g + φ'(0) = c0 f_η + a c0 f_φ(0)/g
    let bc = |phi: &SeriesFunction| a * a * at0(phi) / g + at0(&phi.dy());
    let target = c0 * f.eta.eval(0.0, 0.0) + a * c0 * at0(&f.phi) / g;
    let s = bc(&hom);
    let res = target - bc(&part);
    let s_scale = 1.0 + w_abs + (c0 * omega - sigma).powi(2) / g;

    let build = |amp: Complex64| {
        let phi = &part + &hom.scale(amp);
        let u = (&phi.scale(a) - &f.phi.scale(c0)).scale(1.0 / g);
        let eta = u.at_y0();
        WaveState { phi, u, eta }
    };

    if s.norm() > 1e-9 * s_scale {
        return Ok(build(res / s));
    }
    if res.norm() > 1e-8 * scale {
        return Err(EvansError::Solvability(format!(
            "i*omega = {omega}i is an eigenvalue and the forcing has boundary residual {:e}",
            res.norm()
        )));
    }
    let idx = basis
        .ks
        .iter()
        .position(|&k| same_rate(k, omega))
        .ok_or_else(|| EvansError::Solvability(format!("omega = {omega} is a root outside the reduced basis")))?;
    let w0 = build(Complex64::new(0.0, 0.0));
    let h = WaveState { phi: hom.clone(), u: hom.scale(a / g), eta: SeriesFunction::constant(a / g) };
    let psi = &basis.psis[idx];
    let amp = -inner_product(&w0, psi)? / inner_product(&h, psi)?;
    Ok(build(amp))
}

fn complement(basis: &SpectralBasis, x: &WaveState) -> Result<(WaveState, Vec<SeriesFunction>)> {
    let coords = basis.coordinates_x(x)?;
    let mut out = x.clone();
    for (c, phi) in coords.iter().zip(&basis.phis) {
        out = &out - &phi.mul_x(c);
    }
    Ok((out, coords))
}

/// Build `W_j^{(m,n)}` for `m + n < total` and `A^{(m,n)}` for `m + n ≤ total`.
pub fn reduce(op: &OperatorExpansion, basis: &SpectralBasis) -> Result<ReducedSystem> {
    if (op.sigma - basis.sigma).abs() > 0.0 {
        return Err(EvansError::Precondition("operator and basis are built at different sigma".into()));
    }
    let params = op.params;
    let trunc = op.trunc();
    let d = basis.dim();

    let b_phi: Vec<StateExpansion> = basis.phis.iter().map(|p| op.apply(p)).collect::<Result<_>>()?;
    // B applied to each computed W_j^{(p,q)}
    let mut b_w: BTreeMap<(usize, usize), Vec<StateExpansion>> = BTreeMap::new();
    let mut w: BTreeMap<(usize, usize), Vec<WaveState>> = BTreeMap::new();
    let mut a_terms: BTreeMap<(usize, usize), CoeffMatrix> = BTreeMap::new();

    let mut a00 = vec![vec![SeriesFunction::zero(); d]; d];
    for j in 0..d {
        a00[j][j] = SeriesFunction::constant(Complex64::new(0.0, basis.ks[j]));
    }
    a_terms.insert((0, 0), a00);

    for (m, n) in trunc.orders().into_iter().filter(|&(m, n)| m + n > 0) {
        let mut forcing = Vec::with_capacity(d);
        let mut a_mn = vec![vec![SeriesFunction::zero(); d]; d];
        for j in 0..d {
            let mut x = b_phi[j].get(m, n);
            for (&(p, q), bws) in &b_w {
                if p <= m && q <= n && (p, q) != (m, n) {
                    x = &x + &bws[j].get(m - p, n - q);
                }
            }
            let (rest, coords) = complement(basis, &x)?;
            for (i, c) in coords.into_iter().enumerate() {
                a_mn[i][j] = c;
            }
            forcing.push(rest);
        }
        a_terms.insert((m, n), a_mn);

        if m + n >= trunc.total {
            continue;
        }
        let mut w_mn = Vec::with_capacity(d);
        for (j, rest) in forcing.into_iter().enumerate() {
            let mut rhs = rest;
            for (&(p, q), wp) in &w {
                if p <= m && q <= n && (p, q) != (m, n) {
                    let a_rs = &a_terms[&(m - p, n - q)];
                    for i in 0..d {
                        rhs = &rhs - &wp[i].mul_x(&a_rs[i][j]);
                    }
                }
            }
            let mut wj = WaveState::zero();
            for freq in rhs.x_frequencies() {
                let annotate =
                    |e: EvansError| EvansError::Reduction { m, n, j: basis.labels[j], freq, source: Box::new(e) };
                let fm = rhs.x_mode_coeff(freq);
                if !fm.is_x_free() {
                    return Err(annotate(EvansError::Unsupported("secular forcing in the reduction".into())));
                }
                let omega = basis.ks[j] + freq;
                let sol = resolvent_solve(&params, basis, omega, &fm).map_err(annotate)?;
                wj = &wj + &sol.shift_x_freq(freq);
            }
            w_mn.push(wj);
        }
        let bws = w_mn.iter().map(|wj| op.apply(wj)).collect::<Result<Vec<_>>>()?;
        b_w.insert((m, n), bws);
        w.insert((m, n), w_mn);
    }

    let w_terms = w.into_iter().map(|(order, w)| ReductionTerm { order, w }).collect();
    Ok(ReducedSystem { params, sigma: basis.sigma, basis: basis.clone(), trunc, a_terms, w_terms })
}

impl ReducedSystem {
    /// Stokes expansion, remainder operator, basis and reduction at one `σ`.
    pub fn build(params: WaveParameters, sigma: f64, stokes_order: usize, trunc: Truncation) -> Result<Self> {
        let stokes = StokesExpansion::expand(params, stokes_order)?;
        let op = build_b(&stokes, sigma, trunc)?;
        let basis = SpectralBasis::new(&params, sigma)?;
        reduce(&op, &basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn a(&self, m: usize, n: usize) -> Option<&CoeffMatrix> {
        self.a_terms.get(&(m, n))
    }

    /// `A(x; σ, δ, ε)` from the truncated expansion.
    pub fn eval_matrix(&self, x: f64, delta: Complex64, eps: f64) -> Vec<Vec<Complex64>> {
        let d = self.dim();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for (&(m, n), mat) in &self.a_terms {
            let w = delta.powi(m as i32) * eps.powi(n as i32);
            for i in 0..d {
                for j in 0..d {
                    out[i][j] += mat[i][j].eval_x(x) * w;
                }
            }
        }
        out
    }

    /// Text dump of every `W_j^{(m,n)}` and `A^{(m,n)}` in the series syntax.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for t in &self.w_terms {
            for (j, wj) in t.w.iter().enumerate() {
                let l = self.basis.labels[j];
                let _ = writeln!(s, "w[{},{}]_{l}.phi = {}", t.order.0, t.order.1, wj.phi);
                let _ = writeln!(s, "w[{},{}]_{l}.u = {}", t.order.0, t.order.1, wj.u);
                let _ = writeln!(s, "w[{},{}]_{l}.eta = {}", t.order.0, t.order.1, wj.eta);
            }
        }
        for (&(m, n), mat) in &self.a_terms {
            for (i, row) in mat.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    let _ = writeln!(s, "A[{m},{n}]({},{}) = {e}", i + 1, j + 1);
                }
            }
        }
        s
    }
}
