//! Finite sums of `c · x^q · e^{iωx} · y^p · e^{ay}`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{EvansError, Result};

/// Relative tolerance used when matching frequencies and decay rates.
pub const TAU_ALG: f64 = 1e-9;

/// Default cap on the number of terms a single series may hold.
pub const DEFAULT_TERM_CAP: usize = 100_000;

/// Coefficients below this fraction of the largest coefficient are dropped.
const DROP_REL: f64 = 1e-14;

/// True when two frequencies/rates coincide up to [`TAU_ALG`].
pub fn same_rate(a: f64, b: f64) -> bool {
    (a - b).abs() <= TAU_ALG * a.abs().max(b.abs()).max(1.0)
}

/// A single monomial-exponential term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub xpow: u32,
    pub xfreq: f64,
    pub ypow: u32,
    pub yrate: f64,
}

impl Term {
    pub fn new(coeff: Complex64, xpow: u32, xfreq: f64, ypow: u32, yrate: f64) -> Self {
        Term { coeff, xpow, xfreq, ypow, yrate }
    }

    /// Pure constant.
    pub fn constant(coeff: Complex64) -> Self {
        Term::new(coeff, 0, 0.0, 0, 0.0)
    }

    fn check(&self) -> Result<()> {
        if self.yrate < -TAU_ALG * self.yrate.abs().max(1.0) {
            return Err(EvansError::Domain(format!(
                "term with negative y-rate {} is unbounded as y -> -inf",
                self.yrate
            )));
        }
        if self.ypow > 0 && same_rate(self.yrate, 0.0) {
            return Err(EvansError::Domain(format!(
                "term y^{} with zero decay rate is unbounded as y -> -inf",
                self.ypow
            )));
        }
        Ok(())
    }

    fn key_cmp(&self, other: &Term) -> Ordering {
        self.xpow
            .cmp(&other.xpow)
            .then(self.ypow.cmp(&other.ypow))
            .then(self.xfreq.total_cmp(&other.xfreq))
            .then(self.yrate.total_cmp(&other.yrate))
    }

    fn same_key(&self, other: &Term) -> bool {
        self.xpow == other.xpow
            && self.ypow == other.ypow
            && same_rate(self.xfreq, other.xfreq)
            && same_rate(self.yrate, other.yrate)
    }

    pub fn is_constant_part(&self) -> bool {
        self.ypow == 0 && same_rate(self.yrate, 0.0)
    }

    pub fn is_y_free(&self) -> bool {
        self.is_constant_part()
    }

    pub fn is_x_free(&self) -> bool {
        self.xpow == 0 && same_rate(self.xfreq, 0.0)
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let xf = Complex64::new(0.0, self.xfreq * x).exp() * x.powi(self.xpow as i32);
        let yf = y.powi(self.ypow as i32) * (self.yrate * y).exp();
        self.coeff * xf * yf
    }
}

/// Canonical finite sum of [`Term`]s. Terms are sorted and merged on equal keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeriesFunction {
    terms: Vec<Term>,
}

impl SeriesFunction {
    pub fn zero() -> Self {
        SeriesFunction { terms: Vec::new() }
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::from_terms(vec![Term::constant(c.into())]).expect("constants are admissible")
    }

    /// `c · e^{iωx}`.
    pub fn x_mode(c: impl Into<Complex64>, xfreq: f64) -> Self {
        Self::from_terms(vec![Term::new(c.into(), 0, xfreq, 0, 0.0)]).expect("admissible")
    }

    /// `c · e^{ay}` with `a >= 0`.
    pub fn y_exp(c: impl Into<Complex64>, yrate: f64) -> Result<Self> {
        Self::from_terms(vec![Term::new(c.into(), 0, 0.0, 0, yrate)])
    }

    /// `c · x^q e^{iωx} y^p e^{ay}`.
    pub fn monomial(c: impl Into<Complex64>, xpow: u32, xfreq: f64, ypow: u32, yrate: f64) -> Result<Self> {
        Self::from_terms(vec![Term::new(c.into(), xpow, xfreq, ypow, yrate)])
    }

    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            t.check()?;
        }
        Ok(Self::canonicalize(terms))
    }

    fn canonicalize(mut terms: Vec<Term>) -> Self {
        terms.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        if terms.is_empty() {
            return SeriesFunction { terms };
        }
        snap(&mut terms, |t| &mut t.xfreq);
        snap(&mut terms, |t| &mut t.yrate);
        terms.sort_by(|a, b| a.key_cmp(b));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.same_key(&t) => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        let scale = out.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
        out.retain(|t| t.coeff.norm() > DROP_REL * scale);
        SeriesFunction { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus; a cheap norm for tolerance checks.
    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    pub fn is_y_free(&self) -> bool {
        self.terms.iter().all(Term::is_y_free)
    }

    pub fn is_x_free(&self) -> bool {
        self.terms.iter().all(Term::is_x_free)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self::canonicalize(self.terms.iter().map(|t| Term { coeff: t.coeff * c, ..*t }).collect())
    }

    pub fn mul_checked(&self, other: &Self, cap: usize) -> Result<Self> {
        if self.terms.len().saturating_mul(other.terms.len()) > cap.saturating_mul(16) {
            return Err(EvansError::TermOverflow { cap });
        }
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(Term {
                    coeff: a.coeff * b.coeff,
                    xpow: a.xpow + b.xpow,
                    xfreq: a.xfreq + b.xfreq,
                    ypow: a.ypow + b.ypow,
                    yrate: a.yrate + b.yrate,
                });
            }
        }
        let s = Self::canonicalize(out);
        if s.terms.len() > cap {
            return Err(EvansError::TermOverflow { cap });
        }
        Ok(s)
    }

    pub fn dx(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.xpow > 0 {
                out.push(Term { coeff: t.coeff * t.xpow as f64, xpow: t.xpow - 1, ..*t });
            }
            if t.xfreq != 0.0 {
                out.push(Term { coeff: t.coeff * Complex64::new(0.0, t.xfreq), ..*t });
            }
        }
        Self::canonicalize(out)
    }

    pub fn dy(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.ypow > 0 {
                out.push(Term { coeff: t.coeff * t.ypow as f64, ypow: t.ypow - 1, ..*t });
            }
            if t.yrate != 0.0 {
                out.push(Term { coeff: t.coeff * t.yrate, ..*t });
            }
        }
        Self::canonicalize(out)
    }

    /// Complex conjugate as a function of real `(x, y)`.
    pub fn conj(&self) -> Self {
        Self::canonicalize(self.terms.iter().map(|t| Term { coeff: t.coeff.conj(), xfreq: -t.xfreq, ..*t }).collect())
    }

    /// Restriction to `y = 0`.
    pub fn at_y0(&self) -> Self {
        Self::canonicalize(
            self.terms.iter().filter(|t| t.ypow == 0).map(|t| Term { ypow: 0, yrate: 0.0, ..*t }).collect(),
        )
    }

    /// Restriction to `x = 0`.
    pub fn at_x0(&self) -> Self {
        Self::canonicalize(
            self.terms.iter().filter(|t| t.xpow == 0).map(|t| Term { xpow: 0, xfreq: 0.0, ..*t }).collect(),
        )
    }

    /// Restriction to `x = x0`; secular and oscillatory factors are folded into coefficients.
    pub fn at_x(&self, x0: f64) -> Self {
        Self::canonicalize(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * Complex64::new(0.0, t.xfreq * x0).exp() * x0.powi(t.xpow as i32),
                    xpow: 0,
                    xfreq: 0.0,
                    ..*t
                })
                .collect(),
        )
    }

    /// Value at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(x, y)).sum()
    }

    /// Value of a function of `x` alone at `y`-independent points (panics never; ignores y-factors at y=0).
    pub fn eval_x(&self, x: f64) -> Complex64 {
        self.eval(x, 0.0)
    }

    /// Split into the `y`-decaying part and the constant-in-`y` part.
    pub fn split_constant(&self) -> (SeriesFunction, SeriesFunction) {
        let (c, d): (Vec<Term>, Vec<Term>) = self.terms.iter().partition(|t| t.is_constant_part());
        (SeriesFunction { terms: d }, SeriesFunction { terms: c })
    }

    /// `∫_{-∞}^0 f dy` term by term using `∫ y^p e^{ay} dy = (-1)^p p!/a^{p+1}`.
    pub fn integrate_y_halfline(&self) -> Result<SeriesFunction> {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.yrate <= 0.0 || same_rate(t.yrate, 0.0) {
                return Err(EvansError::NonIntegrable(format!(
                    "term y^{} e^({} y) is not integrable on (-inf, 0]",
                    t.ypow, t.yrate
                )));
            }
            let p = t.ypow;
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let val = sign * factorial(p) / t.yrate.powi(p as i32 + 1);
            out.push(Term { coeff: t.coeff * val, ypow: 0, yrate: 0.0, ..*t });
        }
        Ok(Self::canonicalize(out))
    }

    /// `∫_0^X f(s) ds` as a function of `X` (y-factors carried along).
    pub fn integrate_x(&self) -> SeriesFunction {
        let mut out = Vec::new();
        for t in &self.terms {
            let q = t.xpow;
            if same_rate(t.xfreq, 0.0) {
                out.push(Term { coeff: t.coeff / (q as f64 + 1.0), xpow: q + 1, xfreq: 0.0, ..*t });
                continue;
            }
            // s^q e^{iωs}: antiderivative e^{iωs} Σ_k (-1)^k q!/(q-k)! s^{q-k} / (iω)^{k+1}
            let iw = Complex64::new(0.0, t.xfreq);
            let mut falling = 1.0;
            for k in 0..=q {
                if k > 0 {
                    falling *= (q - k + 1) as f64;
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let c = t.coeff * sign * falling / iw.powi(k as i32 + 1);
                out.push(Term { coeff: c, xpow: q - k, ..*t });
                if k == q {
                    // value of the antiderivative at s = 0
                    out.push(Term { coeff: -c, xpow: 0, xfreq: 0.0, ..*t });
                }
            }
        }
        Self::canonicalize(out)
    }

    /// Keep only the terms with `x`-frequency `freq` (any power of `x`), returning them with frequency removed.
    pub fn x_mode_coeff(&self, freq: f64) -> SeriesFunction {
        Self::canonicalize(
            self.terms.iter().filter(|t| same_rate(t.xfreq, freq)).map(|t| Term { xfreq: 0.0, ..*t }).collect(),
        )
    }

    /// Distinct `x`-frequencies present, sorted.
    pub fn x_frequencies(&self) -> Vec<f64> {
        let mut f: Vec<f64> = self.terms.iter().map(|t| t.xfreq).collect();
        f.sort_by(f64::total_cmp);
        f.dedup_by(|a, b| same_rate(*a, *b));
        f
    }

    /// Multiply every term by `e^{iωx}`.
    pub fn shift_x_freq(&self, freq: f64) -> SeriesFunction {
        Self::canonicalize(self.terms.iter().map(|t| Term { xfreq: t.xfreq + freq, ..*t }).collect())
    }

    /// Average over one period `[0, period]`; requires all frequencies to be multiples of `2π/period`.
    pub fn period_average(&self, period: f64) -> SeriesFunction {
        self.integrate_x().at_x(period).scale(1.0 / period)
    }

    /// Largest coefficient difference against another series.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).max_coeff()
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Snap values that agree to `TAU_ALG` onto one representative.
fn snap(terms: &mut [Term], field: impl Fn(&mut Term) -> &mut f64) {
    let mut vals: Vec<f64> = terms.iter_mut().map(|t| *field(t)).collect();
    vals.sort_by(f64::total_cmp);
    let mut reps: Vec<f64> = Vec::new();
    for v in vals {
        match reps.last() {
            Some(&r) if same_rate(r, v) => {}
            _ => reps.push(v),
        }
    }
    for t in terms.iter_mut() {
        let v = field(t);
        let idx = reps.partition_point(|r| *r < *v);
        for j in [idx, idx.wrapping_sub(1)] {
            if let Some(&r) = reps.get(j) {
                if same_rate(r, *v) {
                    *v = r;
                    break;
                }
            }
        }
    }
}

impl Add for &SeriesFunction {
    type Output = SeriesFunction;
    fn add(self, rhs: &SeriesFunction) -> SeriesFunction {
        let mut t = self.terms.clone();
        t.extend_from_slice(&rhs.terms);
        SeriesFunction::canonicalize(t)
    }
}

impl Add for SeriesFunction {
    type Output = SeriesFunction;
    fn add(self, rhs: SeriesFunction) -> SeriesFunction {
        &self + &rhs
    }
}

impl AddAssign<&SeriesFunction> for SeriesFunction {
    fn add_assign(&mut self, rhs: &SeriesFunction) {
        *self = &*self + rhs;
    }
}

impl Sub for &SeriesFunction {
    type Output = SeriesFunction;
    fn sub(self, rhs: &SeriesFunction) -> SeriesFunction {
        let mut t = self.terms.clone();
        t.extend(rhs.terms.iter().map(|r| Term { coeff: -r.coeff, ..*r }));
        SeriesFunction::canonicalize(t)
    }
}

impl Sub for SeriesFunction {
    type Output = SeriesFunction;
    fn sub(self, rhs: SeriesFunction) -> SeriesFunction {
        &self - &rhs
    }
}

impl Neg for &SeriesFunction {
    type Output = SeriesFunction;
    fn neg(self) -> SeriesFunction {
        self.scale(-1.0)
    }
}

impl Mul for &SeriesFunction {
    type Output = SeriesFunction;
    /// Panics only if the product exceeds [`DEFAULT_TERM_CAP`]; use [`SeriesFunction::mul_checked`] otherwise.
    fn mul(self, rhs: &SeriesFunction) -> SeriesFunction {
        self.mul_checked(rhs, DEFAULT_TERM_CAP).expect("series product exceeded the term cap")
    }
}

impl Mul for SeriesFunction {
    type Output = SeriesFunction;
    fn mul(self, rhs: SeriesFunction) -> SeriesFunction {
        &self * &rhs
    }
}

impl fmt::Display for SeriesFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0,0)");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:e},{:e})", t.coeff.re, t.coeff.im)?;
            if t.xpow > 0 {
                write!(f, " * x^{}", t.xpow)?;
            }
            if t.xfreq != 0.0 {
                write!(f, " * exp(i*{:e}*x)", t.xfreq)?;
            }
            if t.ypow > 0 {
                write!(f, " * y^{}", t.ypow)?;
            }
            if t.yrate != 0.0 {
                write!(f, " * exp({:e}*y)", t.yrate)?;
            }
        }
        Ok(())
    }
}
