use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use trine_core::ac23::SearchConfig;
use trine_core::dynamics::DEFAULT_MAX_STEPS;
use trine_core::ipf::{CheckLevel, Cond1Reading, IpfOptions};

use crate::error::{io_at, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Light,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cond1 {
    Raw,
    Complemented,
}

/// Run settings shared by every command. All randomness derives from `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub lmin: usize,
    pub lmax: usize,
    pub exhaustive_cutoff: usize,
    pub samples_per_len: u64,
    pub seed: u64,
    pub check_level: Level,
    pub max_steps: usize,
    /// Worker threads, 0 for one per core. Never changes results.
    pub threads: usize,
    pub cond1_interpretation: Cond1,
    pub time_origin: u8,
    pub block_size: u64,
    pub budget: Option<u64>,
}

impl Default for Config {
    fn default() -> Self {
        let s = SearchConfig::default();
        Config {
            lmin: s.lmin,
            lmax: s.lmax,
            exhaustive_cutoff: s.exhaustive_cutoff,
            samples_per_len: s.samples_per_len,
            seed: s.seed,
            check_level: Level::Light,
            max_steps: DEFAULT_MAX_STEPS,
            threads: 0,
            cond1_interpretation: Cond1::Complemented,
            time_origin: 1,
            block_size: s.block_size,
            budget: None,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(io_at(path))?;
        let config: Config = serde_json::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lmin < 3 {
            return Err(Error::Config(format!("lmin must be at least 3, got {}", self.lmin)));
        }
        if self.lmin > self.lmax {
            return Err(Error::Config(format!("lmin {} exceeds lmax {}", self.lmin, self.lmax)));
        }
        if self.time_origin > 1 {
            return Err(Error::Config(format!("time_origin must be 0 or 1, got {}", self.time_origin)));
        }
        if self.block_size == 0 {
            return Err(Error::Config("block_size must be positive".into()));
        }
        Ok(())
    }

    pub fn ipf(&self) -> IpfOptions {
        IpfOptions {
            cond1: match self.cond1_interpretation {
                Cond1::Raw => Cond1Reading::Raw,
                Cond1::Complemented => Cond1Reading::Complemented,
            },
            time_origin: self.time_origin,
        }
    }

    pub fn level(&self) -> CheckLevel {
        match self.check_level {
            Level::Light => CheckLevel::Light,
            Level::Full => CheckLevel::Full,
        }
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            lmin: self.lmin,
            lmax: self.lmax,
            exhaustive_cutoff: self.exhaustive_cutoff,
            samples_per_len: self.samples_per_len,
            seed: self.seed,
            level: self.level(),
            ipf: self.ipf(),
            max_steps: self.max_steps,
            budget: self.budget,
            block_size: self.block_size,
        }
    }

    /// SHA-256 of the canonical JSON form, with `threads` zeroed.
    pub fn hash(&self) -> String {
        let canonical = Config { threads: 0, ..self.clone() };
        let json = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// Thread count: `TRINE_THREADS` wins over `configured`; 0 means one per
/// core.
pub fn thread_count(configured: usize) -> Result<usize> {
    match std::env::var("TRINE_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("TRINE_THREADS must be a number, got {v:?}"))),
        Err(_) => Ok(configured),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_search_defaults() {
        let c = Config::default();
        c.validate().unwrap();
        let s = c.search();
        assert_eq!(s.ipf, IpfOptions::default());
        assert_eq!((s.lmin, s.lmax, s.exhaustive_cutoff), (3, 24, 12));
    }

    #[test]
    fn hash_ignores_threads_only() {
        let a = Config::default();
        let b = Config { threads: 8, ..a.clone() };
        let c = Config { seed: 1, ..a.clone() };
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn partial_files_fill_in_defaults() {
        let c: Config = serde_json::from_str(r#"{"seed": 7, "check_level": "full"}"#).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.level(), CheckLevel::Full);
        assert_eq!(c.lmax, 24);
        assert!(serde_json::from_str::<Config>(r#"{"sead": 7}"#).is_err());
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(Config { lmin: 2, ..Config::default() }.validate().is_err());
        assert!(Config { lmin: 9, lmax: 8, ..Config::default() }.validate().is_err());
        assert!(Config { time_origin: 2, ..Config::default() }.validate().is_err());
    }
}
