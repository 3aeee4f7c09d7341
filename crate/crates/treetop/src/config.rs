//! Run configuration: depth budgets, search budgets, certificate widths and
//! horizons. Every budget is positive; the seed is echoed into every output
//! so runs can be reproduced byte for byte.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {0}: expected key=value")]
    Syntax(usize),
    #[error("line {0}: unknown key `{1}`")]
    UnknownKey(usize, String),
    #[error("line {0}: bad value for `{1}`")]
    BadValue(usize, String),
    #[error("budget `{0}` must be positive")]
    NonPositive(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Seed recorded in outputs (the algorithms themselves are deterministic).
    pub seed: u64,
    /// Initial truncation depth for certificate and linkage searches.
    pub depth: u32,
    /// Depth bound: searches double the truncation depth up to this.
    pub depth_max: u32,
    /// Expansion budget for subdivision search.
    pub budget: u64,
    /// Width k of end/domination certificates.
    pub cert_k: u32,
    /// Horizon m for tail-stabilizer searches.
    pub horizon: usize,
    /// Depth for suitability verification of construction copies.
    pub suit_depth: u32,
    /// Verified indices required to accept a self-similar ray.
    pub selfsim_hits: usize,
    /// Component count that counts as a splitting certificate.
    pub split_m: usize,
    /// Candidate avoid-sets tried by the strong linking search.
    pub attempts: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            depth: 8,
            depth_max: 512,
            budget: 1_000_000,
            cert_k: 4,
            horizon: 4,
            suit_depth: 2,
            selfsim_hits: 1,
            split_m: 2,
            attempts: 64,
        }
    }
}

impl RunConfig {
    /// Applies `key=value` lines (blank lines and `#` comments allowed).
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax(lineno))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue(lineno, key.to_string());
            match key {
                "seed" => self.seed = value.parse().map_err(|_| bad())?,
                "depth" => self.depth = value.parse().map_err(|_| bad())?,
                "depth_max" => self.depth_max = value.parse().map_err(|_| bad())?,
                "budget" => self.budget = value.parse().map_err(|_| bad())?,
                "cert_k" => self.cert_k = value.parse().map_err(|_| bad())?,
                "horizon" => self.horizon = value.parse().map_err(|_| bad())?,
                "suit_depth" => self.suit_depth = value.parse().map_err(|_| bad())?,
                "selfsim_hits" => self.selfsim_hits = value.parse().map_err(|_| bad())?,
                "split_m" => self.split_m = value.parse().map_err(|_| bad())?,
                "attempts" => self.attempts = value.parse().map_err(|_| bad())?,
                _ => return Err(ConfigError::UnknownKey(lineno, key.to_string())),
            }
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.depth == 0 {
            return Err(ConfigError::NonPositive("depth"));
        }
        if self.depth_max < self.depth {
            return Err(ConfigError::NonPositive("depth_max"));
        }
        if self.budget == 0 {
            return Err(ConfigError::NonPositive("budget"));
        }
        if self.cert_k == 0 {
            return Err(ConfigError::NonPositive("cert_k"));
        }
        if self.horizon == 0 {
            return Err(ConfigError::NonPositive("horizon"));
        }
        if self.split_m == 0 {
            return Err(ConfigError::NonPositive("split_m"));
        }
        if self.attempts == 0 {
            return Err(ConfigError::NonPositive("attempts"));
        }
        Ok(())
    }

    /// Canonical `key=value` rendering, echoed into transcripts.
    pub fn render(&self) -> String {
        format!(
            "seed={}\ndepth={}\ndepth_max={}\nbudget={}\ncert_k={}\nhorizon={}\nsuit_depth={}\nselfsim_hits={}\nsplit_m={}\nattempts={}\n",
            self.seed,
            self.depth,
            self.depth_max,
            self.budget,
            self.cert_k,
            self.horizon,
            self.suit_depth,
            self.selfsim_hits,
            self.split_m,
            self.attempts
        )
    }

    pub fn as_map(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("seed", self.seed.to_string());
        m.insert("depth", self.depth.to_string());
        m.insert("depth_max", self.depth_max.to_string());
        m.insert("budget", self.budget.to_string());
        m.insert("cert_k", self.cert_k.to_string());
        m.insert("horizon", self.horizon.to_string());
        m.insert("suit_depth", self.suit_depth.to_string());
        m.insert("selfsim_hits", self.selfsim_hits.to_string());
        m.insert("split_m", self.split_m.to_string());
        m.insert("attempts", self.attempts.to_string());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let mut c = RunConfig::default();
        c.apply_text("seed=7\ndepth=16\n# comment\n\ncert_k = 3\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.depth, 16);
        assert_eq!(c.cert_k, 3);
        let mut d = RunConfig::default();
        d.apply_text(&c.render()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn rejects_bad_lines() {
        let mut c = RunConfig::default();
        assert!(matches!(c.apply_text("nonsense"), Err(ConfigError::Syntax(1))));
        assert!(matches!(
            c.apply_text("mystery=1"),
            Err(ConfigError::UnknownKey(1, _))
        ));
        assert!(matches!(c.apply_text("depth=0"), Err(ConfigError::NonPositive(_))));
    }
}
