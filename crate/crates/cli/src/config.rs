//! Run configuration: defaults, a flat `key = value` file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use deepwater_evans::evans::{NewtonOptions, NEWTON_MAX_ITER, NEWTON_TOL, ODE_TOL};
use deepwater_evans::expansion::Truncation;
use deepwater_evans::reduction::ReducedSystem;
use deepwater_evans::stokes::WaveParameters;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kappa: f64,
    pub g: f64,
    pub stokes_order: usize,
    pub m_max: usize,
    pub n_max: usize,
    pub ode_tol: f64,
    pub newton_tol: f64,
    pub out: Option<PathBuf>,
    pub dump_reduction: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kappa: 1.0,
            g: 1.0,
            stokes_order: 3,
            m_max: 2,
            n_max: 2,
            ode_tol: ODE_TOL,
            newton_tol: NEWTON_TOL,
            out: None,
            dump_reduction: false,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Usage(format!("bad value for {key}: {value:?}")))
}

impl RunConfig {
    /// Defaults overridden by the entries of a config file.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key = value", path.display(), lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "kappa" => self.kappa = parse(key, value)?,
            "g" => self.g = parse(key, value)?,
            "order" | "stokes_order" => self.stokes_order = parse(key, value)?,
            "mmax" | "m_max" => self.m_max = parse(key, value)?,
            "nmax" | "n_max" => self.n_max = parse(key, value)?,
            "ode_tol" => self.ode_tol = parse(key, value)?,
            "newton_tol" => self.newton_tol = parse(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "dump_reduction" => self.dump_reduction = parse(key, value)?,
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn params(&self) -> Result<WaveParameters, CliError> {
        WaveParameters::new(self.kappa, self.g).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Orders `δ^m ε^n` with `m ≤ m_max`, `n ≤ n_max` and total degree `≤ max(m_max, n_max)`.
    pub fn trunc(&self) -> Truncation {
        Truncation::new(self.m_max, self.n_max, self.m_max.max(self.n_max))
    }

    pub fn reduced(&self, sigma: f64) -> Result<ReducedSystem, CliError> {
        Ok(ReducedSystem::build(self.params()?, sigma, self.stokes_order, self.trunc())?)
    }

    pub fn newton(&self) -> NewtonOptions {
        NewtonOptions { tol: self.newton_tol, max_iter: NEWTON_MAX_ITER, ode_tol: self.ode_tol }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_entries_override_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "# comment\nkappa = 2\n\norder=2 # inline\nout = results\n").unwrap();
        let cfg = RunConfig::from_file(&path).unwrap();
        assert_eq!(cfg.kappa, 2.0);
        assert_eq!(cfg.stokes_order, 2);
        assert_eq!(cfg.g, 1.0);
        assert_eq!(cfg.out, Some(PathBuf::from("results")));
    }

    #[test]
    fn rejects_unknown_keys_and_garbage() {
        let mut cfg = RunConfig::default();
        assert!(matches!(cfg.set("colour", "red"), Err(CliError::Usage(_))));
        assert!(matches!(cfg.set("kappa", "one"), Err(CliError::Usage(_))));
    }
}
