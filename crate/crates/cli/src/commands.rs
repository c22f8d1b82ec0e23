use std::str::FromStr;

use deepwater_evans::evans::{
    bf_branch, bf_growth_rate, evans_expand_origin, evans_expand_resonance, ind2, monodromy_expand, resonance_find,
    trace_spectrum, EvansExpansion, MonodromyExpansion,
};
use deepwater_evans::operator::{dispersion, dispersion_roots, sigma_c, SpectralBasis};
use deepwater_evans::stokes::{ResidualGrid, StokesExpansion};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{complex, csv, real, Report};

/// Where `coeffs` expands: the origin, a resonance, or a plain frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaChoice {
    Value(f64),
    Resonance(u32),
}

impl FromStr for SigmaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(n) = s.strip_prefix("resonance:") {
            return n.parse().map(SigmaChoice::Resonance).map_err(|_| format!("bad resonance order {n:?}"));
        }
        match s.parse::<f64>() {
            Ok(v) if v >= 0.0 => Ok(SigmaChoice::Value(v)),
            _ => Err(format!("expected a frequency >= 0 or resonance:N, got {s:?}")),
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// The 21 frequencies `{0}` and `[σ_c + 0.05, 3]` used for root tables.
pub fn sigma_grid(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let lo = sigma_c(&cfg.params()?) + 0.05;
    let mut v = vec![0.0];
    v.extend(linspace(lo, 3.0_f64.max(lo), 20));
    Ok(v)
}

fn monodromy_tables(rep: &mut Report, mono: &MonodromyExpansion) {
    for (&(m, n), a) in &mono.coeffs {
        rep.matrix(&format!("a({m},{n})"), a);
    }
}

fn evans_table(rep: &mut Report, evans: &EvansExpansion) {
    rep.line(format!("evans expansion about k = {}", real(evans.k)));
    for ((l, m, n), c) in evans.table() {
        rep.line(format!("  d({l},{m},{n}) = {}", complex(c)));
    }
}

pub fn stokes(cfg: &RunConfig, eps: f64, samples: usize) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let s = StokesExpansion::expand(p, cfg.stokes_order)?;
    let mut rep = Report::default();
    rep.line(format!("Stokes expansion to order {} (kappa = {}, g = {}, c0 = {})", s.order, p.kappa, p.g, real(p.c0)));
    for n in 1..=s.order {
        rep.line(format!("phi[{n}] = {}", s.phi[n]));
        rep.line(format!("eta[{n}] = {}", s.eta[n]));
    }
    for (n, c) in s.c.iter().enumerate() {
        rep.line(format!("c[{n}] = {}", real(*c)));
    }
    let r = s.residual(eps, &ResidualGrid::default())?;
    rep.line(format!("max truncation residual at eps = {eps}: {:.3e}", r.truncation_max()));
    let eta = s.eta_at(eps);
    let rows = linspace(0.0, p.period, samples + 1).into_iter().take(samples).map(|x| vec![x, eta.eval_x(x).re]);
    rep.file("stokes.csv", csv(&["x", "eta"], rows));
    Ok(rep)
}

pub fn dispersion_table(cfg: &RunConfig, samples: usize) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let mut rep = Report::default();
    rep.line(format!("sigma_c = {}", real(sigma_c(&p))));
    let ks = linspace(-4.0 * p.kappa, 4.0 * p.kappa, samples);
    rep.file(
        "dispersion.csv",
        csv(
            &["k", "sigma_plus", "sigma_minus"],
            ks.into_iter().map(|k| {
                let (sp, sm) = dispersion(&p, k);
                vec![k, sp, sm]
            }),
        ),
    );
    let mut rows = Vec::new();
    for sigma in sigma_grid(cfg)? {
        let roots = dispersion_roots(&p, sigma)?;
        let listed: Vec<String> = roots.roots.iter().map(|r| format!("k{} = {}", r.label, real(r.k))).collect();
        rep.line(format!("sigma = {}: {}", real(sigma), listed.join(", ")));
        rows.extend(roots.roots.iter().map(|r| vec![sigma, r.label as f64, r.k, r.multiplicity as f64]));
    }
    rep.file("roots.csv", csv(&["sigma", "label", "k", "multiplicity"], rows));
    Ok(rep)
}

pub fn basis(cfg: &RunConfig, sigma: f64) -> Result<Report, CliError> {
    let b = SpectralBasis::new(&cfg.params()?, sigma)?;
    let mut rep = Report::default();
    rep.line(format!("basis at sigma = {}", real(sigma)));
    for j in 0..b.dim() {
        let l = b.labels[j];
        rep.line(format!("k{l} = {}", real(b.ks[j])));
        for (name, s) in [("phi", &b.phis[j]), ("psi", &b.psis[j])] {
            rep.line(format!("{name}{l}.phi = {}", s.phi));
            rep.line(format!("{name}{l}.u = {}", s.u));
            rep.line(format!("{name}{l}.eta = {}", s.eta));
        }
    }
    Ok(rep)
}

pub fn coeffs(cfg: &RunConfig, choice: SigmaChoice) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let (sigma, res) = match choice {
        SigmaChoice::Value(s) => (s, None),
        SigmaChoice::Resonance(n) => {
            let r = resonance_find(n, &p)?;
            (r.sigma, Some(r))
        }
    };
    let red = cfg.reduced(sigma)?;
    let mono = monodromy_expand(&red)?;
    let mut rep = Report::default();
    rep.line(format!("monodromy coefficients at sigma = {}", real(sigma)));
    monodromy_tables(&mut rep, &mono);
    if let Some(r) = res {
        evans_table(&mut rep, &evans_expand_resonance(&mono, &r)?);
    } else if sigma == 0.0 {
        evans_table(&mut rep, &evans_expand_origin(&mono)?);
    }
    if cfg.dump_reduction {
        rep.line("reduction dump:");
        rep.text.push_str(&red.dump());
    }
    Ok(rep)
}

pub fn bf(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let red = cfg.reduced(0.0)?;
    let b = bf_branch(&evans_expand_origin(&monodromy_expand(&red)?)?, &p)?;
    let mut rep = Report::default();
    rep.line(format!("alpha(1,0) = {}", complex(b.alpha10)));
    rep.line(format!("alpha(1,1) = {} and {}", complex(b.alpha11[0]), complex(b.alpha11[1])));
    rep.line(format!("rejected cubic root = {}", complex(b.rejected)));
    let cubic: Vec<String> = b.cubic.iter().map(|c| complex(*c)).collect();
    rep.line(format!("cubic coefficients (ascending) = [{}]", cubic.join(", ")));
    let quad: Vec<String> = b.quadratic.iter().map(|c| complex(*c)).collect();
    rep.line(format!("gamma^3 eps^2 coefficient (ascending) = [{}]", quad.join(", ")));
    let rate = bf_growth_rate(&p);
    let e10 = (b.alpha10 - Complex64::new(0.0, p.c0 / 2.0)).norm();
    let e11 = (b.alpha11[0] - rate).norm().max((b.alpha11[1] + rate).norm());
    rep.check("alpha(1,0) = i c0/2", e10 < 1e-8, &format!("error {e10:.1e}"));
    rep.check("alpha(1,1) = +-kappa/(2 sqrt 2)", e11 < 1e-8, &format!("error {e11:.1e}"));
    Ok(rep)
}

pub fn resonance(cfg: &RunConfig, n: Option<u32>) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let orders: Vec<u32> = n.map_or_else(|| (2..=6).collect(), |n| vec![n]);
    let mut rep = Report::default();
    for n in orders {
        let r = resonance_find(n, &p)?;
        rep.line(format!("N = {n}: sigma = {}, k2 = {}, k4 = {}", real(r.sigma), real(r.k2), real(r.k4)));
        let mono = monodromy_expand(&cfg.reduced(r.sigma)?)?;
        let evans = evans_expand_resonance(&mono, &r)?;
        for (name, c) in evans.resonance_coefficients().named() {
            rep.line(format!("  {name}: {}", complex(c)));
        }
    }
    Ok(rep)
}

pub fn ind2_report(cfg: &RunConfig, n: u32) -> Result<Report, CliError> {
    let p = cfg.params()?;
    let r = resonance_find(n, &p)?;
    let mono = monodromy_expand(&cfg.reduced(r.sigma)?)?;
    let res = ind2(&evans_expand_resonance(&mono, &r)?)?;
    let mut rep = Report::default();
    rep.line(format!("N = {n}, sigma = {}", real(r.sigma)));
    rep.line(format!("ratio = {}", complex(res.ratio)));
    rep.line(format!("ind2 = {}", complex(res.value)));
    rep.line(format!("alpha(0,2) roots = {}, {}", complex(res.roots[0]), complex(res.roots[1])));
    rep.line(format!("verdict: {}", res.verdict()));
    Ok(rep)
}

pub fn trace(cfg: &RunConfig, eps: f64, gamma_min: f64, gamma_max: f64, steps: usize) -> Result<Report, CliError> {
    if steps == 0 || !(gamma_min > 0.0 && gamma_max >= gamma_min) {
        return Err(CliError::Usage("need 0 < gamma-min <= gamma-max and steps >= 1".into()));
    }
    let gammas = linspace(gamma_min, gamma_max, steps);
    let red = cfg.reduced(0.0)?;
    let pts = trace_spectrum(&red, eps, &gammas, &cfg.newton())?;
    let mut rep = Report::default();
    rep.line(format!("eps = {eps}, {steps} gamma values in [{gamma_min}, {gamma_max}]"));
    for t in &pts {
        rep.line(format!("gamma = {}: {}  {}", real(t.gamma), complex(t.lambda1), complex(t.lambda2)));
    }
    rep.file(
        "trace.csv",
        csv(
            &["gamma", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2"],
            pts.iter().map(|t| vec![t.gamma, t.lambda1.re, t.lambda1.im, t.lambda2.re, t.lambda2.im]),
        ),
    );
    Ok(rep)
}
