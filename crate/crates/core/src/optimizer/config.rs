use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

/// Genetic search settings. Mutation and crossover rates are per mille:
/// mutation applies per gene, crossover per selected pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    pub mutation_per_mille: u32,
    pub crossover_per_mille: u32,
    pub seed: u64,
    pub boost_threshold: f64,
    pub boost_factor: f64,
    /// Stop after this many generations without improvement.
    pub stagnation_limit: Option<usize>,
    pub mu: f64,
    pub top_n: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 200,
            max_iterations: 100,
            mutation_per_mille: 10,
            crossover_per_mille: 1000,
            seed: 0,
            boost_threshold: 0.5,
            boost_factor: 1.5,
            stagnation_limit: None,
            mu: crate::retrieval::DEFAULT_MU,
            top_n: crate::retrieval::DEFAULT_TOP_N,
        }
    }
}

impl GaConfig {
    pub fn mutation_probability(&self) -> f64 {
        f64::from(self.mutation_per_mille) / 1000.0
    }

    pub fn crossover_probability(&self) -> f64 {
        f64::from(self.crossover_per_mille) / 1000.0
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if self.population_size < 2 {
            return fail("population_size must be at least 2");
        }
        if self.mutation_per_mille > 1000 || self.crossover_per_mille > 1000 {
            return fail("mutation and crossover rates are per mille and cannot exceed 1000");
        }
        if !(self.boost_threshold.is_finite() && self.boost_threshold >= 0.0) {
            return fail("boost_threshold must be a non-negative number");
        }
        if !(self.boost_factor.is_finite() && self.boost_factor > 0.0) {
            return fail("boost_factor must be positive");
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return fail("mu must be positive");
        }
        if self.top_n == 0 {
            return fail("top_n must be positive");
        }
        Ok(())
    }

    /// Parses a JSON object or `key = value` lines (`#` starts a comment).
    pub fn parse(text: &str, name: &str) -> Result<Self> {
        let value = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::parse(name, e.line(), e.to_string()))?
        } else {
            let mut map = Map::new();
            for (i, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| Error::parse(name, i + 1, "expected key = value"))?;
                map.insert(k.trim().to_string(), scalar(v.trim()));
            }
            Value::Object(map)
        };
        let cfg: GaConfig = serde_json::from_value(value).map_err(|e| Error::parse(name, 0, e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

fn scalar(v: &str) -> Value {
    if let Ok(n) = v.parse::<u64>() {
        return Value::Number(n.into());
    }
    if let Some(n) = v.parse::<f64>().ok().and_then(Number::from_f64) {
        return Value::Number(n);
    }
    match v {
        "none" | "null" => Value::Null,
        _ => Value::String(v.to_string()),
    }
}
