//! Runtime configuration: quadrature overrides from the
//! `ISOPERIMETRIX_CONFIG` TOML file plus CLI flags, and the deterministic
//! config hash echoed in every report.

use anyhow::{Context, Result};
use isoperimetrix_core::QuadratureConfig;
use serde::Deserialize;

pub const CONFIG_ENV: &str = "ISOPERIMETRIX_CONFIG";

#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    #[serde(default)]
    quadrature: QuadratureSection,
}

#[derive(Debug, Default, Deserialize)]
struct QuadratureSection {
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_subdivisions: Option<usize>,
    tail_cutoff_mass: Option<f64>,
}

/// Effective quadrature configuration: defaults, overridden by the config
/// file if the env var points to one, overridden by an explicit `--rel-tol`.
pub fn effective_config(rel_tol_flag: Option<f64>) -> Result<QuadratureConfig> {
    let mut cfg = QuadratureConfig::default();
    if let Ok(path) = std::env::var(CONFIG_ENV) {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {CONFIG_ENV} file {path}"))?;
        let parsed: FileConfig =
            toml::from_str(&text).with_context(|| format!("parsing {path} as TOML"))?;
        if let Some(v) = parsed.quadrature.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = parsed.quadrature.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = parsed.quadrature.max_subdivisions {
            cfg.max_subdivisions = v;
        }
        if let Some(v) = parsed.quadrature.tail_cutoff_mass {
            cfg.tail_cutoff_mass = v;
        }
    }
    if let Some(v) = rel_tol_flag {
        cfg.rel_tol = v;
    }
    cfg.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(cfg)
}

/// FNV-1a hash of the canonical config rendering; stable across runs and
/// platforms.
pub fn config_hash(cfg: &QuadratureConfig) -> String {
    let canon = format!(
        "rel_tol={:e};abs_tol={:e};max_subdivisions={};tail_cutoff_mass={:e}",
        cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions, cfg.tail_cutoff_mass
    );
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in canon.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        let cfg = QuadratureConfig::default();
        assert_eq!(config_hash(&cfg), config_hash(&cfg));
        let mut other = cfg.clone();
        other.rel_tol = 1e-8;
        assert_ne!(config_hash(&cfg), config_hash(&other));
    }
}
