//! Truncated double power series in `(δ, ε)` with [`SeriesFunction`] coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::algebra::SeriesFunction;
use crate::error::Result;

/// Orders kept in a double expansion: `m ≤ m_max`, `n ≤ n_max`, `m + n ≤ total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub m_max: usize,
    pub n_max: usize,
    pub total: usize,
}

impl Truncation {
    pub fn new(m_max: usize, n_max: usize, total: usize) -> Self {
        Truncation { m_max, n_max, total }
    }

    pub fn keeps(&self, m: usize, n: usize) -> bool {
        m <= self.m_max && n <= self.n_max && m + n <= self.total
    }

    /// All kept orders, sorted by total degree then by `m`.
    pub fn orders(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for s in 0..=self.total {
            for m in 0..=s {
                if self.keeps(m, s - m) {
                    v.push((m, s - m));
                }
            }
        }
        v
    }
}

/// `Σ f^{(m,n)} δ^m ε^n`, truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    trunc: Truncation,
    coeffs: BTreeMap<(usize, usize), SeriesFunction>,
}

impl Expansion {
    pub fn zero(trunc: Truncation) -> Self {
        Expansion { trunc, coeffs: BTreeMap::new() }
    }

    /// A series sitting at a single order.
    pub fn single(trunc: Truncation, m: usize, n: usize, f: SeriesFunction) -> Self {
        let mut e = Self::zero(trunc);
        e.set(m, n, f);
        e
    }

    pub fn constant(trunc: Truncation, f: SeriesFunction) -> Self {
        Self::single(trunc, 0, 0, f)
    }

    pub fn trunc(&self) -> Truncation {
        self.trunc
    }

    pub fn get(&self, m: usize, n: usize) -> SeriesFunction {
        self.coeffs.get(&(m, n)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, m: usize, n: usize, f: SeriesFunction) {
        if !self.trunc.keeps(m, n) {
            return;
        }
        if f.is_zero() {
            self.coeffs.remove(&(m, n));
        } else {
            self.coeffs.insert((m, n), f);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &SeriesFunction)> {
        self.coeffs.iter()
    }

    pub fn map(&self, f: impl Fn(&SeriesFunction) -> SeriesFunction) -> Self {
        let mut out = Self::zero(self.trunc);
        for (&(m, n), s) in &self.coeffs {
            out.set(m, n, f(s));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(m, n), s) in &other.coeffs {
            let cur = out.get(m, n);
            out.set(m, n, &cur + s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        self.map(|s| s.scale(c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), Vec<SeriesFunction>> = BTreeMap::new();
        for (&(m1, n1), a) in &self.coeffs {
            for (&(m2, n2), b) in &other.coeffs {
                let (m, n) = (m1 + m2, n1 + n2);
                if self.trunc.keeps(m, n) {
                    acc.entry((m, n)).or_default().push(a.mul_checked(b, crate::algebra::DEFAULT_TERM_CAP)?);
                }
            }
        }
        let mut out = Self::zero(self.trunc);
        for ((m, n), parts) in acc {
            let mut s = SeriesFunction::zero();
            for p in &parts {
                s += p;
            }
            out.set(m, n, s);
        }
        Ok(out)
    }

    /// Multiply by a plain series (order (0,0)).
    pub fn mul_series(&self, f: &SeriesFunction) -> Self {
        self.map(|s| s * f)
    }

    /// `1/(1 + r)` for `r` with vanishing (0,0) coefficient, as a truncated geometric series.
    pub fn geometric_inverse(r: &Self) -> Result<Self> {
        debug_assert!(r.get(0, 0).is_zero());
        let one = Expansion::constant(r.trunc, SeriesFunction::constant(1.0));
        let mut out = one.clone();
        let mut power = one;
        for _ in 0..r.trunc.total {
            power = power.mul(&r.scale(-1.0))?;
            out = out.add(&power);
        }
        Ok(out)
    }

    pub fn dx(&self) -> Self {
        self.map(SeriesFunction::dx)
    }

    pub fn dy(&self) -> Self {
        self.map(SeriesFunction::dy)
    }

    pub fn at_y0(&self) -> Self {
        self.map(SeriesFunction::at_y0)
    }

    /// Evaluate at numeric `(δ, ε)`, leaving a plain series.
    pub fn at(&self, delta: Complex64, eps: f64) -> SeriesFunction {
        let mut s = SeriesFunction::zero();
        for (&(m, n), f) in &self.coeffs {
            s += &f.scale(delta.powi(m as i32) * eps.powi(n as i32));
        }
        s
    }
}
