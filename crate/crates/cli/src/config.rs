//! Optional JSON run configuration. Every field may be omitted; flags win.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::MethodArg;
use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub embeddings: Option<PathBuf>,
    pub axes: Option<PathBuf>,
    pub corpus: Option<String>,
    pub sentiment: Option<PathBuf>,
    pub unit_axes: Option<bool>,
    pub method: Option<MethodArg>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
    pub seeds: Option<String>,
    pub test_fraction: Option<f64>,
    pub pca_variance: Option<f64>,
    pub learning_rate: Option<f64>,
    pub max_iterations: Option<usize>,
    pub tolerance: Option<f64>,
    pub l2: Option<f64>,
    pub clusters: Option<usize>,
    pub k: Option<usize>,
    pub out: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        let mut config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        // Relative paths in the file are relative to the file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut config.embeddings,
            &mut config.axes,
            &mut config.sentiment,
            &mut config.out,
            &mut config.out_dir,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let Some(c) = &config.corpus {
            if c.contains(['/', '.']) && Path::new(c).is_relative() {
                config.corpus = Some(base.join(c).to_string_lossy().into_owned());
            }
        }
        Ok(config)
    }
}

/// Parses "1-20" (inclusive) or a comma list such as "1,5,9".
pub fn parse_seed_list(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::usage(format!("invalid seed list {spec:?}"));
    let mut seeds = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (
                    a.trim().parse().map_err(|_| bad())?,
                    b.trim().parse().map_err(|_| bad())?,
                );
                if a > b {
                    return Err(bad());
                }
                seeds.extend(a..=b);
            }
            None => seeds.push(part.parse().map_err(|_| bad())?),
        }
    }
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seed_list("1-3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_seed_list("4, 2,9").unwrap(), vec![4, 2, 9]);
        assert_eq!(parse_seed_list("1-2,7").unwrap(), vec![1, 2, 7]);
        assert!(parse_seed_list("").is_err());
        assert!(parse_seed_list("5-1").is_err());
        assert!(parse_seed_list("x").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"sed": 3}"#).is_err());
        let c: RunConfig =
            serde_json::from_str(r#"{"seed": 3, "method": "baseline_vector"}"#).unwrap();
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.method, Some(MethodArg::Baseline));
    }
}
