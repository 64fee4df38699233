//! Job configuration file: defaults that command-line flags override.

use crate::Failure;
use lagframe::io::{from_json, read_text};
use serde::Deserialize;
use std::path::Path;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Seed for randomized sweeps.
    pub seed: Option<u64>,
    /// Default tolerance for closedness and geodesic checks.
    pub tol: Option<f64>,
    /// Default reconstruction step.
    pub step: Option<f64>,
    /// Default sample count for gridded outputs.
    pub samples: Option<usize>,
    /// Default finite-difference step of the first variation.
    pub epsilon: Option<f64>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let cfg: JobConfig = from_json(&read_text(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Failure> {
        for (name, v) in [("tol", self.tol), ("step", self.step), ("epsilon", self.epsilon)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Failure::Usage(format!("config '{name}' must be positive (got {v})")));
                }
            }
        }
        if self.samples.is_some_and(|n| n < 2) {
            return Err(Failure::Usage("config 'samples' must be at least 2".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_and_bad_tolerances_rejected() {
        assert!(from_json::<JobConfig>(r#"{"seed": 3, "colour": 1}"#).is_err());
        let cfg: JobConfig = from_json(r#"{"seed": 3, "tol": 1e-8}"#).unwrap();
        assert_eq!(cfg.seed, Some(3));
        assert!(cfg.validate().is_ok());
        let bad = JobConfig { tol: Some(0.0), ..JobConfig::default() };
        assert!(bad.validate().is_err());
    }
}
