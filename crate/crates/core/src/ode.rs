//! Bounded particular solutions of `P'' − s²P = F` on `y ≤ 0`.

use num_complex::Complex64;

use crate::algebra::{same_rate, SeriesFunction, Term};
use crate::error::{EvansError, Result};

/// Default largest power of `y` a particular solution may carry.
pub const DEFAULT_YPOW_CAP: u32 = 8;

/// Particular solution of `P'' − s²P = F` (`s ≥ 0`) built from polynomial-exponential
/// ansätze. The returned `P` has no pure `e^{sy}` component, so the homogeneous
/// part is left entirely to the caller. `x`-factors of `F` are carried through.
///
/// A constant forcing with `s = 0` would need `y²` and is reported as
/// [`EvansError::NonRepresentable`].
pub fn particular_solution(s: f64, forcing: &SeriesFunction, ypow_cap: u32) -> Result<SeriesFunction> {
    let mut out = Vec::new();
    for t in forcing.terms() {
        let a = t.yrate;
        let p = t.ypow as usize;
        let q: Vec<f64> = if !same_rate(a, s) {
            let d = a * a - s * s;
            let mut q = vec![0.0; p + 3];
            for k in (0..=p).rev() {
                let rhs = if k == p { 1.0 } else { 0.0 };
                q[k] = (rhs - 2.0 * a * (k + 1) as f64 * q[k + 1] - ((k + 2) * (k + 1)) as f64 * q[k + 2]) / d;
            }
            q.truncate(p + 1);
            q
        } else if same_rate(s, 0.0) {
            return Err(EvansError::NonRepresentable(format!(
                "forcing y^{p} with zero rate against a zero-frequency operator needs y^{} in an unweighted space",
                p + 2
            )));
        } else {
            // Q'' + 2aQ' = y^p with Q = Σ_{k=1}^{p+1} q_k y^k
            let mut q = vec![0.0; p + 4];
            for k in (0..=p).rev() {
                let rhs = if k == p { 1.0 } else { 0.0 };
                q[k + 1] = (rhs - ((k + 2) * (k + 1)) as f64 * q[k + 2]) / (2.0 * a * (k + 1) as f64);
            }
            q.truncate(p + 2);
            q
        };
        for (k, &qk) in q.iter().enumerate() {
            if qk == 0.0 {
                continue;
            }
            if k as u32 > ypow_cap {
                return Err(EvansError::NonRepresentable(format!(
                    "particular solution needs y^{k}, above the cap {ypow_cap}"
                )));
            }
            out.push(Term { coeff: t.coeff * Complex64::new(qk, 0.0), ypow: k as u32, yrate: a, ..*t });
        }
    }
    SeriesFunction::from_terms(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_series;

    fn check(s: f64, f: &str) {
        let f = parse_series(f).unwrap();
        let p = particular_solution(s, &f, DEFAULT_YPOW_CAP).unwrap();
        let res = &p.dy().dy() - &p.scale(s * s);
        assert!(res.distance(&f) < 1e-12, "s={s}: {res} vs {f}");
    }

    #[test]
    fn nonresonant_and_resonant() {
        check(1.0, "exp(2*y)");
        check(1.0, "y^2 * exp(3*y) + (0,1) * exp(0.5*y)");
        check(2.0, "exp(2*y)");
        check(2.0, "y * exp(2*y)");
        check(3.0, "5");
        check(0.0, "y * exp(1*y)");
    }

    #[test]
    fn zero_frequency_constant_is_not_representable() {
        let f = SeriesFunction::constant(1.0);
        assert!(matches!(particular_solution(0.0, &f, 8), Err(EvansError::NonRepresentable(_))));
    }
}
