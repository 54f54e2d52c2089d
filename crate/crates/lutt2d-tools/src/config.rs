//! Flat `key = value` configuration.
//!
//! Values come from three layers, later ones winning: built-in defaults,
//! an optional config file, and `--set key=value` overrides. Every key must
//! be known; everything is validated before a command runs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use lutt2d_core::{ModelParams, PartitionParams};

/// Known keys with their defaults and a one-line description.
///
/// The defaults reproduce the Fermi surface (`t′ = −0.2t`, `μ = −0.672t`)
/// and the partition at `Q = 0.45π` shown in the figures.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("t", "1", "nearest-neighbour hopping"),
    ("t_prime", "-0.2", "next-nearest-neighbour hopping"),
    ("V", "2", "nearest-neighbour interaction"),
    ("mu", "-0.672", "chemical potential for the Fermi contour"),
    ("a", "1", "lattice constant"),
    ("n_L", "40", "system size, L = 2 sqrt(2) a n_L"),
    ("n_kappa", "31", "kappa = (n_kappa + 1/2)/n_L"),
    ("n_Q", "36", "Q = pi n_Q/(2 n_L)"),
    ("nu_a", "0.5", "antinodal filling"),
    ("b1", "1", "cutoff width b1"),
    ("b2", "1", "cutoff width b2"),
    ("beta", "10", "inverse temperature"),
    ("resolution", "256", "Fermi-contour sampling per BZ side"),
    ("validity_margin", "0.2", "in/out band margin, in units of t"),
    ("omega", "0", "Matsubara frequencies for veff (comma list)"),
    ("p_max", "", "veff grid half-width in grid steps (default 2 n_L)"),
    ("nodes", "2048", "quadrature nodes of the f_gamma average"),
    ("phi_over_pi", "0.125,0.25", "angles for realspace f mode, in units of pi"),
    ("x_min", "0.01", "smallest scaling variable in realspace f mode"),
    ("x_max", "10", "largest scaling variable in realspace f mode"),
    ("x_points", "60", "points per axis in realspace grids"),
    ("tau", "1", "imaginary times for realspace veff mode (comma list)"),
    ("x_extent", "10", "half-width of the realspace veff grid, in units of a"),
    ("fock_labels", "2", "momentum labels per flavor in the vertex identities"),
];

/// Configuration or usage problem; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<lutt2d_core::Error> for ConfigError {
    fn from(e: lutt2d_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Raw string values keyed by name.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn defaults() -> Self {
        let values = KEYS.iter().map(|(k, v, _)| (k.to_string(), v.to_string())).collect();
        Self { values }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.iter().any(|(k, _, _)| *k == key) {
            return err(format!("unknown config key '{key}'"));
        }
        self.values.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    /// Parses `key=value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("{origin}:{}: expected key=value, got '{line}'", no + 1));
            };
            self.set(k.trim(), v).map_err(|e| ConfigError(format!("{origin}:{}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<(), ConfigError> {
        let Some((k, v)) = kv.split_once('=') else {
            return err(format!("--set expects key=value, got '{kv}'"));
        };
        self.set(k.trim(), v)
    }

    fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let s = self.raw(key);
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => err(format!("{key} must be a finite number (got '{s}')")),
        }
    }

    fn u32(&self, key: &str) -> Result<u32, ConfigError> {
        let s = self.raw(key);
        s.parse::<u32>().or_else(|_| err(format!("{key} must be a non-negative integer (got '{s}')")))
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let s = self.raw(key);
        let out: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
        match out {
            Ok(v) if !v.is_empty() && v.iter().all(|x| x.is_finite()) => Ok(v),
            _ => err(format!("{key} must be a comma-separated list of numbers (got '{s}')")),
        }
    }
}

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    pub partition: PartitionParams,
    pub beta: f64,
    pub resolution: usize,
    pub validity_margin: f64,
    pub omega: Vec<f64>,
    pub p_max: i64,
    pub nodes: usize,
    pub phi_over_pi: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub tau: Vec<f64>,
    pub x_extent: f64,
    pub fock_labels: usize,
}

impl RunConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, ConfigError> {
        let model = ModelParams::new(
            raw.f64("t")?,
            raw.f64("t_prime")?,
            raw.f64("V")?,
            raw.f64("mu")?,
            raw.f64("a")?,
            raw.u32("n_L")?,
        )?;
        let partition = PartitionParams::with_cutoffs(
            &model,
            raw.u32("n_kappa")?,
            raw.u32("n_Q")?,
            raw.f64("nu_a")?,
            raw.f64("b1")?,
            raw.f64("b2")?,
        )?;
        let beta = raw.f64("beta")?;
        if beta <= 0.0 {
            return err(format!("beta must be positive (got {beta})"));
        }
        let p_max = if raw.raw("p_max").is_empty() { 2 * model.n_l as i64 } else { raw.u32("p_max")? as i64 };
        let (x_min, x_max) = (raw.f64("x_min")?, raw.f64("x_max")?);
        if !(x_min > 0.0 && x_max > x_min) {
            return err(format!("need 0 < x_min < x_max (got {x_min}, {x_max})"));
        }
        let x_points = raw.u32("x_points")? as usize;
        if x_points < 2 {
            return err("x_points must be at least 2");
        }
        let x_extent = raw.f64("x_extent")?;
        if x_extent <= 0.0 {
            return err("x_extent must be positive");
        }
        let tau = raw.list("tau")?;
        if tau.contains(&0.0) {
            return err("tau = 0 is singular");
        }
        Ok(Self {
            model,
            partition,
            beta,
            resolution: raw.u32("resolution")? as usize,
            validity_margin: raw.f64("validity_margin")?,
            omega: raw.list("omega")?,
            p_max,
            nodes: raw.u32("nodes")? as usize,
            phi_over_pi: raw.list("phi_over_pi")?,
            x_min,
            x_max,
            x_points,
            tau,
            x_extent,
            fock_labels: raw.u32("fock_labels")? as usize,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = RunConfig::from_raw(&RawConfig::defaults()).unwrap();
        assert_eq!(c.model.n_l, 40);
        assert_eq!(c.p_max, 80);
    }

    #[test]
    fn comments_and_overrides() {
        let mut r = RawConfig::defaults();
        r.apply_text("# size\nn_L = 10 # small\n\nn_kappa=6\nn_Q=9\n", "test").unwrap();
        r.apply_override("V=0.5").unwrap();
        let c = RunConfig::from_raw(&r).unwrap();
        assert_eq!((c.model.n_l, c.partition.n_kappa, c.model.v), (10, 6, 0.5));
    }

    #[test]
    fn bad_input_is_named() {
        let mut r = RawConfig::defaults();
        assert!(r.apply_text("nope = 1", "f").unwrap_err().0.contains("unknown config key 'nope'"));
        assert!(r.apply_text("n_L", "f").unwrap_err().0.contains("f:1"));
        r.set("n_Q", "75").unwrap();
        let e = RunConfig::from_raw(&r).unwrap_err();
        assert!(e.0.contains("nodal window"), "{e}");
    }
}
