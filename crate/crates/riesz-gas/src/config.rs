//! Flat `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment; arrays are comma lists.
//! Keys must belong to [`KNOWN_KEYS`] and may appear once.

use crate::error::{Error, Result};
use crate::nsr_solver::{ForcePath, SolverConfig};
use crate::radial_kernel::PotentialSpec;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Every key understood by some subcommand.
pub const KNOWN_KEYS: &[&str] = &[
    "n",
    "alpha",
    "kappa",
    "gamma",
    "mass",
    "e0",
    "epsilon",
    "b",
    "cells",
    "t_final",
    "cfl",
    "dt_max",
    "force_refresh_every",
    "output_every",
    "force_path",
    "max_steps",
    "profile",
    "width",
    "velocity",
    "profile_points",
    "r_min",
    "r_max",
    "grid_points",
    "tol",
    "oracle",
    "modes",
    "amplitudes",
    "eps_list",
    "times",
    "n_max",
    "lattice",
];

/// Parsed configuration: an ordered map from key to raw value.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

fn config_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

impl Config {
    /// Parses configuration text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return config_error(format!(
                    "line {}: expected key = value, got '{line}'",
                    lineno + 1
                ));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return config_error(format!("line {}: unknown key '{key}'", lineno + 1));
            }
            if value.is_empty() {
                return config_error(format!("line {}: empty value for '{key}'", lineno + 1));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return config_error(format!("line {}: duplicate key '{key}'", lineno + 1));
            }
        }
        Ok(Self { entries })
    }

    /// Reads and parses a file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Canonical text: sorted `key=value` lines.
    pub fn canonical(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    /// Sets or replaces a value.
    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    /// True when `key` is present.
    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Typed value of `key`, or `None` when absent.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("invalid value '{v}' for '{key}'"))),
        }
    }

    /// Typed value of `key` or `default`.
    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Typed value of a required key.
    pub fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::Config(format!("missing required key '{key}'")))
    }

    /// Comma-separated list, or `None` when absent.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("invalid list entry '{s}' for '{key}'")))
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    /// Interaction and pressure law; `n`, `alpha` and `gamma` are required, `kappa` defaults to `1`.
    pub fn potential_spec(&self) -> Result<PotentialSpec> {
        PotentialSpec::new(
            self.require("n")?,
            self.require("alpha")?,
            self.get_or("kappa", 1.0)?,
            self.require("gamma")?,
        )
    }

    /// Solver configuration on top of [`Self::potential_spec`].
    pub fn solver_config(&self, default_epsilon: f64) -> Result<SolverConfig> {
        let spec = self.potential_spec()?;
        let mut cfg = SolverConfig::new(
            spec,
            self.get_or("epsilon", default_epsilon)?,
            self.get_or("b", 3.0)?,
            self.get_or("cells", 128)?,
            self.get_or("t_final", 0.1)?,
        );
        cfg.cfl = self.get_or("cfl", cfg.cfl)?;
        cfg.dt_max = self.get_or("dt_max", cfg.dt_max)?;
        cfg.force_refresh_every = self.get_or("force_refresh_every", cfg.force_refresh_every)?;
        cfg.output_every = self.get_or("output_every", cfg.output_every)?;
        cfg.max_steps = self.get_or("max_steps", cfg.max_steps)?;
        if let Some(p) = self.get::<String>("force_path")? {
            cfg.force_path = ForcePath::from_str(&p)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_lists_and_comments() {
        let c = Config::parse(
            "# header\nn = 3\nalpha=1\ngamma = 2 # trailing\namplitudes = 0.001, 0.01,0.1\n\n",
        )
        .unwrap();
        assert_eq!(c.require::<usize>("n").unwrap(), 3);
        assert_eq!(
            c.get_list::<f64>("amplitudes").unwrap().unwrap(),
            vec![0.001, 0.01, 0.1]
        );
        assert_eq!(c.get_or("kappa", 1.0).unwrap(), 1.0);
        assert_eq!(
            c.canonical(),
            "alpha=1\namplitudes=0.001, 0.01,0.1\ngamma=2\nn=3\n"
        );
        let spec = c.potential_spec().unwrap();
        assert!(spec.is_coulomb());
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["n 3", "n = 3\nn = 4", "colour = red", "n =", "n = three"] {
            let parsed = Config::parse(bad).and_then(|c| c.require::<usize>("n"));
            assert!(matches!(parsed, Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn solver_config_is_validated() {
        let c = Config::parse("n=3\nalpha=1\ngamma=2\ncells=8").unwrap();
        assert!(c.solver_config(0.1).is_err());
        let ok =
            Config::parse("n=3\nalpha=1\ngamma=2\ncells=32\nforce_path=coulomb-local").unwrap();
        assert_eq!(
            ok.solver_config(0.1).unwrap().force_path,
            ForcePath::CoulombLocal
        );
    }
}
