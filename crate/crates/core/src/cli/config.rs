//! Run configuration: a `key = value` file overridden by flags, and run manifests.

use crate::error::{Error, Result};
use crate::genus::TwistData;
use crate::lifts::QuadratureSpec;
use num_rational::Rational64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Parses `p/q` or an integer exactly.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::InvalidParameter(format!("'{s}' is not a rational number p/q"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub level: i64,
    pub delta: i64,
    pub twist_r: i64,
    pub quadrature: QuadratureSpec,
    /// Truncation of the vector-valued Eisenstein series.
    pub c_max: i64,
    /// Truncation budget for Green functions and theta kernels.
    pub budget: f64,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            level: 1,
            delta: 5,
            twist_r: 1,
            quadrature: QuadratureSpec::default(),
            c_max: 320,
            budget: 1e-12,
            output_dir: None,
            seed: 20240601,
        }
    }
}

impl RunConfig {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k.trim(), v.trim().trim_matches('"'))?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::InvalidParameter(format!("bad value '{v}' for {key}")))
        }
        match key {
            "level" | "N" => self.level = num(key, value)?,
            "delta" | "D" => self.delta = num(key, value)?,
            "twist_r" | "r" => self.twist_r = num(key, value)?,
            "c_max" => self.c_max = num(key, value)?,
            "budget" => self.budget = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "y_split" | "Y" => self.quadrature.y_split = num(key, value)?,
            "nx" => self.quadrature.nx = num(key, value)?,
            "ny" => self.quadrature.ny = num(key, value)?,
            "n_tail" => self.quadrature.n_tail = num(key, value)?,
            "n_u" => self.quadrature.n_u = num(key, value)?,
            "quadrature_budget" => self.quadrature.budget = num(key, value)?,
            _ => return Err(Error::InvalidParameter(format!("unknown configuration key '{key}'"))),
        }
        Ok(())
    }

    /// Checks the level, the discriminant and r² ≡ Δ (mod 4N).
    pub fn twist(&self) -> Result<TwistData> {
        TwistData::new(self.level, self.delta, self.twist_r)
    }

    pub fn validate(&self) -> Result<()> {
        self.twist()?;
        self.quadrature.validate()?;
        if self.c_max < 0 || !(self.budget > 0.0 && self.budget < 1.0) {
            return Err(Error::InvalidParameter(format!("c_max {} / budget {} out of range", self.c_max, self.budget)));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// What is needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: Vec<String>,
    pub config: RunConfig,
    pub config_sha256: String,
    pub version: String,
    pub threads: usize,
}

impl Manifest {
    pub fn new(command: Vec<String>, config: &RunConfig, threads: usize) -> Self {
        Manifest {
            command,
            config: config.clone(),
            config_sha256: config.hash(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            threads,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), Rational64::new(3, 4));
        assert_eq!(parse_rational(" -23/24 ").unwrap(), Rational64::new(-23, 24));
        assert_eq!(parse_rational("5").unwrap(), Rational64::from_integer(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn config_text() {
        let cfg = RunConfig::from_text("# twist\nN = 6\nD = 73\nr = 1\nnx = 12 # coarse\nbudget=1e-10\n").unwrap();
        assert_eq!((cfg.level, cfg.delta, cfg.twist_r, cfg.quadrature.nx), (6, 73, 1, 12));
        assert_eq!(cfg.budget, 1e-10);
        cfg.validate().unwrap();
        assert!(RunConfig::from_text("N = 6\nD = 5\n").unwrap().validate().is_err());
        assert!(RunConfig::from_text("colour = red").is_err());
        assert_ne!(cfg.hash(), RunConfig::default().hash());
        assert_eq!(cfg.hash(), cfg.clone().hash());
    }
}
