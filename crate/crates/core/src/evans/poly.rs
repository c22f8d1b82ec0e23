//! Truncated polynomials in `(δ, γ, ε)` with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

/// Exponent triple `(l, m, n)` of `δ^l γ^m ε^n`.
pub type Monomial = (u32, u32, u32);

/// A polynomial in `(δ, γ, ε)` keeping `l + m ≤ max_dg` and `n ≤ max_eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly3 {
    max_dg: u32,
    max_eps: u32,
    coeffs: BTreeMap<Monomial, Complex64>,
}

impl Poly3 {
    pub fn zero(max_dg: u32, max_eps: u32) -> Self {
        Poly3 { max_dg, max_eps, coeffs: BTreeMap::new() }
    }

    pub fn keeps(&self, (l, m, n): Monomial) -> bool {
        l + m <= self.max_dg && n <= self.max_eps
    }

    pub fn monomial(max_dg: u32, max_eps: u32, mono: Monomial, c: Complex64) -> Self {
        let mut p = Self::zero(max_dg, max_eps);
        p.add_term(mono, c);
        p
    }

    pub fn constant(max_dg: u32, max_eps: u32, c: Complex64) -> Self {
        Self::monomial(max_dg, max_eps, (0, 0, 0), c)
    }

    /// `c · e^{iγT}` expanded in `γ`.
    pub fn exp_gamma(max_dg: u32, max_eps: u32, c: Complex64, period: f64) -> Self {
        let mut p = Self::zero(max_dg, max_eps);
        let mut term = c;
        for m in 0..=max_dg {
            p.add_term((0, m, 0), term);
            term *= Complex64::new(0.0, period) / f64::from(m + 1);
        }
        p
    }

    pub fn add_term(&mut self, mono: Monomial, c: Complex64) {
        if !self.keeps(mono) || c == Complex64::new(0.0, 0.0) {
            return;
        }
        *self.coeffs.entry(mono).or_default() += c;
    }

    pub fn coeff(&self, l: u32, m: u32, n: u32) -> Complex64 {
        self.coeffs.get(&(l, m, n)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn max_dg(&self) -> u32 {
        self.max_dg
    }

    pub fn max_eps(&self) -> u32 {
        self.max_eps
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &c) in &other.coeffs {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.max_dg, self.max_eps);
        for (&k, &c) in &self.coeffs {
            out.add_term(k, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.max_dg.min(other.max_dg), self.max_eps.min(other.max_eps));
        for (&(l1, m1, n1), &c1) in &self.coeffs {
            for (&(l2, m2, n2), &c2) in &other.coeffs {
                out.add_term((l1 + l2, m1 + m2, n1 + n2), c1 * c2);
            }
        }
        out
    }

    /// Evaluate at numeric `(δ, γ, ε)`.
    pub fn eval(&self, delta: Complex64, gamma: f64, eps: f64) -> Complex64 {
        self.coeffs.iter().map(|(&(l, m, n), &c)| c * delta.powu(l) * gamma.powi(m as i32) * eps.powi(n as i32)).sum()
    }

    /// Substitute `δ = (α10 + α11 ε) γ`; entry `(g, e)` is the coefficient of `γ^g ε^e`.
    pub fn substitute_branch(&self, a10: Complex64, a11: Complex64) -> BTreeMap<(u32, u32), Complex64> {
        let mut out: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for (&(l, m, n), &c) in &self.coeffs {
            // (α10 + α11 ε)^l = Σ_j C(l,j) α10^{l−j} α11^j ε^j
            let mut binom = 1.0;
            for j in 0..=l {
                let e = n + j;
                if e <= self.max_eps {
                    *out.entry((l + m, e)).or_default() += c * binom * a10.powu(l - j) * a11.powu(j);
                }
                binom *= f64::from(l - j) / f64::from(j + 1);
            }
        }
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(l, m, n), c) in &self.coeffs {
            writeln!(f, "d({l},{m},{n}) = {:+.12e} {:+.12e}i", c.re, c.im)?;
        }
        Ok(())
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn det(m: &[Vec<Poly3>]) -> Poly3 {
    let n = m.len();
    match n {
        0 => Poly3::constant(u32::MAX / 2, u32::MAX / 2, Complex64::new(1.0, 0.0)),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly3::zero(m[0][0].max_dg, m[0][0].max_eps);
            for col in 0..n {
                let minor: Vec<Vec<Poly3>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = m[0][col].mul(&det(&minor));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}
