//! Periodic Evans function, its expansions and the spectral quantities built on it.

mod monodromy;
mod poly;
mod trace;

pub use monodromy::{monodromy_expand, monodromy_numeric, monodromy_numeric_tol, CMatrix, MonodromyExpansion, ODE_TOL};
pub use poly::{det, Monomial, Poly3};
pub use trace::{trace_spectrum, NewtonOptions, TracePoint, NEWTON_MAX_ITER, NEWTON_TOL};

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::algebra::same_rate;
use crate::error::{EvansError, Result};
use crate::operator::sigma_c;
use crate::stokes::WaveParameters;

/// Agreement required between computed and predicted branch coefficients.
pub const BRANCH_TOL: f64 = 1e-8;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Δ = det(e^{ikT} I − X)`.
pub fn evans_eval(x: &CMatrix, k: f64, period: f64) -> Complex64 {
    let d = x.nrows();
    let m = CMatrix::identity(d, d) * Complex64::from_polar(1.0, k * period) - x;
    match d {
        0 => cx(1.0, 0.0),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => m.determinant(),
    }
}

/// `Δ(iσ + δ, k + γ; ε)` expanded in `(δ, γ, ε)`.
#[derive(Debug, Clone)]
pub struct EvansExpansion {
    pub sigma: f64,
    /// Floquet exponent about which `γ` is measured.
    pub k: f64,
    pub mono: MonodromyExpansion,
    pub d: Poly3,
}

impl EvansExpansion {
    pub fn coeff(&self, l: u32, m: u32, n: u32) -> Complex64 {
        self.d.coeff(l, m, n)
    }

    /// Nonzero `d^{(l,m,n)}` in lexicographic order.
    pub fn table(&self) -> Vec<(Monomial, Complex64)> {
        let scale = self.d.max_coeff();
        self.d.iter().filter(|(_, c)| c.norm() > 1e-14 * scale).map(|(&k, &c)| (k, c)).collect()
    }
}

/// Expand `det(e^{i(k+γ)T} I − X(T; σ, δ, ε))` keeping `δ,γ`-degree `≤ max_dg` and `ε`-degree `≤ max_eps`.
pub fn evans_expand(mono: &MonodromyExpansion, k: f64, max_dg: u32, max_eps: u32) -> EvansExpansion {
    let d = mono.dim();
    let t = mono.period;
    let shift = Poly3::exp_gamma(max_dg, max_eps, Complex64::from_polar(1.0, k * t), t);
    let mut m = vec![vec![Poly3::zero(max_dg, max_eps); d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = shift.clone();
    }
    for (&(p, q), a) in &mono.coeffs {
        for i in 0..d {
            for j in 0..d {
                m[i][j].add_term((p as u32, 0, q as u32), -a[(i, j)]);
            }
        }
    }
    EvansExpansion { sigma: mono.sigma, k, mono: mono.clone(), d: det(&m) }
}

/// Expansion about `λ = 0`, `k = κ` through cubic order in `(δ, γ)` and `ε²`.
pub fn evans_expand_origin(mono: &MonodromyExpansion) -> Result<EvansExpansion> {
    if mono.sigma != 0.0 {
        return Err(EvansError::Precondition(format!("origin expansion needs sigma = 0, got {}", mono.sigma)));
    }
    let kappa = 2.0 * std::f64::consts::PI / mono.period;
    Ok(evans_expand(mono, kappa, 3, 2))
}

/// Roots of `a x² + b x + c`, cancellation-free.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> Result<[Complex64; 2]> {
    if a.norm() == 0.0 {
        return Err(EvansError::Degenerate("quadratic has vanishing leading coefficient".into()));
    }
    let sq = (b * b - 4.0 * a * c).sqrt();
    let q = if (b.conj() * sq).re >= 0.0 { -0.5 * (b + sq) } else { -0.5 * (b - sq) };
    if q.norm() == 0.0 {
        return Ok([cx(0.0, 0.0); 2]);
    }
    Ok([q / a, c / q])
}

fn poly_eval(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(cx(0.0, 0.0), |acc, &ci| acc * x + ci)
}

/// Benjamin–Feir branch coefficients `λ = α^{(1,0)}γ + α^{(1,1)}γε + …`.
#[derive(Debug, Clone)]
pub struct BfBranch {
    /// `dσ/dk` of the dispersion branch through `(κ, 0)`.
    pub slope: f64,
    /// `P(α) = Σ_l d^{(l,3−l,0)} α^l`, ascending powers.
    pub cubic: [Complex64; 4],
    pub alpha10: Complex64,
    /// The simple cubic root discarded by the dispersion match.
    pub rejected: Complex64,
    /// γ³ε² coefficient after `δ = (α^{(1,0)} + xε)γ`, ascending powers of `x`.
    pub quadratic: [Complex64; 3],
    /// Both roots, larger real part first.
    pub alpha11: [Complex64; 2],
    /// γ²ε² coefficient at each `α^{(1,1)}`.
    pub gamma2eps2: [Complex64; 2],
}

/// Branch asymptotics at the origin from the `(δ, γ, ε)` expansion.
pub fn bf_branch(evans: &EvansExpansion, params: &WaveParameters) -> Result<BfBranch> {
    if evans.sigma != 0.0 {
        return Err(EvansError::Precondition("branch asymptotics need the origin expansion".into()));
    }
    if evans.d.max_dg() < 3 || evans.d.max_eps() < 2 {
        return Err(EvansError::Truncation("need the expansion through gamma^3 eps^2".into()));
    }
    let kappa = params.kappa;
    let slope = params.c0 - (params.g * kappa).sqrt() / (2.0 * kappa);
    let expected = cx(0.0, slope);

    let cubic = [evans.coeff(0, 3, 0), evans.coeff(1, 2, 0), evans.coeff(2, 1, 0), evans.coeff(3, 0, 0)];
    let scale = cubic.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if cubic[3].norm() <= 1e-12 * scale {
        return Err(EvansError::Degenerate("delta^3 coefficient vanishes".into()));
    }
    // the double root is the common root of P and P'
    let crit = quadratic_roots(3.0 * cubic[3], 2.0 * cubic[2], cubic[1])?;
    let double = if poly_eval(&cubic, crit[0]).norm() <= poly_eval(&cubic, crit[1]).norm() { crit[0] } else { crit[1] };
    let simple = -cubic[2] / cubic[3] - 2.0 * double;
    let tol = BRANCH_TOL * slope.abs().max(1.0);
    let (alpha10, rejected) = if (double - expected).norm() <= tol {
        (double, simple)
    } else if (simple - expected).norm() <= tol {
        (simple, double)
    } else {
        return Err(EvansError::Consistency(format!(
            "no root of the cubic matches the dispersion slope {expected}: double {double}, simple {simple}"
        )));
    };

    let q_at = |x: f64| evans.d.substitute_branch(alpha10, cx(x, 0.0)).get(&(3, 2)).copied().unwrap_or_default();
    let (q0, qp, qm) = (q_at(0.0), q_at(1.0), q_at(-1.0));
    let quadratic = [q0, 0.5 * (qp - qm), 0.5 * (qp + qm) - q0];
    let mut alpha11 = quadratic_roots(quadratic[2], quadratic[1], quadratic[0])?;
    if alpha11[0].re < alpha11[1].re {
        alpha11.swap(0, 1);
    }
    let g2e2 = |a11: Complex64| evans.d.substitute_branch(alpha10, a11).get(&(2, 2)).copied().unwrap_or_default();
    let gamma2eps2 = [g2e2(alpha11[0]), g2e2(alpha11[1])];
    let g_scale = evans.d.max_coeff().max(1.0);
    for (a, r) in alpha11.iter().zip(&gamma2eps2) {
        if r.norm() > BRANCH_TOL * g_scale {
            return Err(EvansError::Consistency(format!(
                "gamma^2 eps^2 coefficient {r} does not vanish at alpha11 = {a}"
            )));
        }
    }
    Ok(BfBranch { slope, cubic, alpha10, rejected, quadratic, alpha11, gamma2eps2 })
}

/// Predicted `α^{(1,1)} = ±κ/(2√2)`.
pub fn bf_growth_rate(params: &WaveParameters) -> f64 {
    params.kappa / (2.0 * SQRT_2)
}

/// An `N`-resonance between `k₂` and `k₄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceData {
    pub n: u32,
    pub sigma: f64,
    pub k2: f64,
    pub k4: f64,
}

/// Closed-form resonance location with `k₂ − k₄ = Nκ`.
pub fn resonance_find(n: u32, params: &WaveParameters) -> Result<ResonanceData> {
    if n < 2 {
        return Err(EvansError::Invalid(format!("resonance order must be >= 2, got {n}")));
    }
    let kappa = params.kappa;
    let nf = f64::from(n);
    let sigma = (nf * nf - 1.0) * kappa * params.c0 / 4.0;
    let k2 = (nf + 1.0).powi(2) * kappa / 4.0;
    let k4 = (nf - 1.0).powi(2) * kappa / 4.0;
    if sigma <= sigma_c(params) {
        return Err(EvansError::Consistency(format!("resonance sigma {sigma} is not above sigma_c")));
    }
    if !same_rate(k2 - k4, nf * kappa) {
        return Err(EvansError::Consistency(format!("k2 - k4 = {} differs from N kappa", k2 - k4)));
    }
    Ok(ResonanceData { n, sigma, k2, k4 })
}

/// Expansion about `λ = iσ`, `k = k₄` through quadratic order in `(δ, γ)` and `ε⁴`.
pub fn evans_expand_resonance(mono: &MonodromyExpansion, res: &ResonanceData) -> Result<EvansExpansion> {
    if mono.dim() != 2 {
        return Err(EvansError::Precondition(format!("resonance needs a 2x2 monodromy, got {}", mono.dim())));
    }
    if (mono.sigma - res.sigma).abs() > 1e-12 * res.sigma.max(1.0) {
        return Err(EvansError::Precondition(format!(
            "monodromy built at sigma {} but the resonance sits at {}",
            mono.sigma, res.sigma
        )));
    }
    Ok(evans_expand(mono, res.k4, 2, 4))
}

/// The seven leading coefficients of the resonant expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceCoefficients {
    pub delta2: Complex64,
    pub gamma2: Complex64,
    pub eps4: Complex64,
    pub delta_gamma: Complex64,
    pub delta_eps2: Complex64,
    pub gamma_eps2: Complex64,
    pub delta_gamma_eps: Complex64,
}

impl ResonanceCoefficients {
    pub fn named(&self) -> [(&'static str, Complex64); 7] {
        [
            ("delta^2", self.delta2),
            ("gamma^2", self.gamma2),
            ("eps^4", self.eps4),
            ("delta*gamma", self.delta_gamma),
            ("delta*eps^2", self.delta_eps2),
            ("gamma*eps^2", self.gamma_eps2),
            ("delta*gamma*eps", self.delta_gamma_eps),
        ]
    }
}

impl EvansExpansion {
    pub fn resonance_coefficients(&self) -> ResonanceCoefficients {
        ResonanceCoefficients {
            delta2: self.coeff(2, 0, 0),
            gamma2: self.coeff(0, 2, 0),
            eps4: self.coeff(0, 0, 4),
            delta_gamma: self.coeff(1, 1, 0),
            delta_eps2: self.coeff(1, 0, 2),
            gamma_eps2: self.coeff(0, 1, 2),
            delta_gamma_eps: self.coeff(1, 1, 1),
        }
    }
}

/// `ind₂` and the `ε²`-order verdict at a resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ind2 {
    /// `(a₁₁^{(0,2)}a₂₂^{(1,0)} − a₁₁^{(1,0)}a₂₂^{(0,2)}) / (a₁₁^{(1,0)}a₂₂^{(1,0)})`.
    pub ratio: Complex64,
    /// `ratio²`.
    pub value: Complex64,
    /// Roots `α^{(0,2)}` of the quadratic from the `δ²`, `δε²`, `ε⁴` coefficients.
    pub roots: [Complex64; 2],
    pub unstable: bool,
}

impl Ind2 {
    pub fn verdict(&self) -> &'static str {
        if self.unstable {
            "eps^2-order instability"
        } else {
            "no eps^2-order instability"
        }
    }
}

/// `ind₂` from a resonant expansion; unstable when a root `α^{(0,2)}` leaves `iℝ`.
pub fn ind2(evans: &EvansExpansion) -> Result<Ind2> {
    let a10 = evans.mono.get(1, 0);
    let a02 = evans.mono.get(0, 2);
    if a10.nrows() != 2 {
        return Err(EvansError::Precondition("ind2 needs a 2x2 resonant expansion".into()));
    }
    let lead = a10[(0, 0)] * a10[(1, 1)];
    let scale = a10[(0, 0)].norm().max(a10[(1, 1)].norm()).max(1.0);
    if lead.norm() <= 1e-12 * scale * scale {
        return Err(EvansError::Degenerate("a11^(1,0) a22^(1,0) vanishes".into()));
    }
    let ratio = (a02[(0, 0)] * a10[(1, 1)] - a10[(0, 0)] * a02[(1, 1)]) / lead;
    let c = evans.resonance_coefficients();
    let roots = quadratic_roots(c.delta2, c.delta_eps2, c.eps4)?;
    let unstable = roots.iter().any(|r| r.re.abs() > BRANCH_TOL * r.norm().max(1.0));
    Ok(Ind2 { ratio, value: ratio * ratio, roots, unstable })
}
