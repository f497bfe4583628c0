//! Harness configuration: a JSON file merged with command-line overrides.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "IGQ_VERIFY_CONFIG";

pub const DEFAULT_SEED: u64 = 42;

/// Contents of a config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    /// Check name to tolerance.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Dimensions used by every suite that sweeps over `N`.
    pub dimensions: Option<Vec<usize>>,
    /// Suite name to corpus size.
    #[serde(default)]
    pub trials: BTreeMap<String, usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if let Some(dims) = &self.dimensions {
            if dims.is_empty() || dims.contains(&0) {
                bail!("dimensions must be a nonempty list of positive integers");
            }
        }
        for (name, &tol) in &self.tolerances {
            if !(tol > 0.0 && tol.is_finite()) {
                bail!("tolerance for {name} must be positive and finite");
            }
        }
        Ok(())
    }
}

/// Resolved settings for one harness run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub dimensions: Option<Vec<usize>>,
    /// Applies to every suite when set; takes precedence over `trials`.
    pub trials_override: Option<usize>,
    pub trials: BTreeMap<String, usize>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for Settings {
    fn default() -> Self {
        Self::from_config(ConfigFile::default())
    }
}

impl Settings {
    pub fn from_config(cfg: ConfigFile) -> Self {
        Self {
            seed: cfg.seed.unwrap_or(DEFAULT_SEED),
            dimensions: cfg.dimensions,
            trials_override: None,
            trials: cfg.trials,
            tolerances: cfg.tolerances,
        }
    }

    pub fn trials(&self, suite: &str, default: usize) -> usize {
        self.trials_override.or_else(|| self.trials.get(suite).copied()).unwrap_or(default)
    }

    pub fn dimensions(&self, default: &[usize]) -> Vec<usize> {
        self.dimensions.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn tolerance(&self, check: &str, default: f64) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(default)
    }

    /// Seed of the named check: SplitMix64 of the master seed XOR the 64-bit
    /// FNV-1a hash of the name. Independent of run order and of which other
    /// checks run.
    pub fn seed_for(&self, check: &str) -> u64 {
        split_seed(self.seed, check)
    }
}

pub fn split_seed(master: u64, name: &str) -> u64 {
    splitmix64(master ^ fnv1a64(name.as_bytes()))
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Parses `3`, `2..5` (inclusive), `2..=5` or `2,3,5`.
pub fn parse_dimensions(s: &str) -> anyhow::Result<Vec<usize>> {
    let s = s.trim();
    let dims: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi): (usize, usize) = (lo.trim().parse()?, hi.trim().parse()?);
        if lo > hi {
            bail!("empty dimension range {s}");
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?
    };
    if dims.is_empty() || dims.contains(&0) {
        bail!("dimensions must be positive");
    }
    Ok(dims)
}

/// Parses `check.name=1e-9`.
pub fn parse_tolerance(s: &str) -> anyhow::Result<(String, f64)> {
    let (name, value) = s.split_once('=').context("expected NAME=VALUE")?;
    let value: f64 = value.trim().parse().with_context(|| format!("bad tolerance value in {s}"))?;
    if !(value > 0.0 && value.is_finite()) {
        bail!("tolerance must be positive and finite");
    }
    Ok((name.trim().to_string(), value))
}
