//! Experiment configuration, loadable from JSON and overridable by flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{MapDescriptor, MapFamily, MapKind};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// Every field is optional; commands fall back to their own defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Option<String>,
    pub maps: Vec<MapDescriptor>,
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    pub p: Option<usize>,
    pub p_max: Option<usize>,
    pub l: Option<usize>,
    pub eps: Option<String>,
    pub d: Option<usize>,
    pub regex: Vec<String>,
    pub r_lo: Option<f64>,
    pub r_hi: Option<f64>,
    pub steps: Option<usize>,
    pub burn: Option<usize>,
    pub keep: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub cap: Option<usize>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(mut self, over: ExperimentConfig) -> ExperimentConfig {
        macro_rules! take {
            ($($f:ident),*) => {$(if over.$f.is_some() { self.$f = over.$f; })*};
        }
        take!(
            suite, k_min, k_max, p, p_max, l, eps, d, r_lo, r_hi, steps, burn, keep, out, format,
            cap, jobs, seed
        );
        if !over.maps.is_empty() {
            self.maps = over.maps;
        }
        if !over.regex.is_empty() {
            self.regex = over.regex;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if let (Some(a), Some(b)) = (self.k_min, self.k_max) {
            if a > b {
                return bad(format!("empty k range {a}..={b}"));
            }
        }
        if self.k_max == Some(0) || self.p_max == Some(0) {
            return bad("k_max and p_max must be positive".into());
        }
        if let (Some(a), Some(b)) = (self.r_lo, self.r_hi) {
            if !(a <= b) {
                return bad(format!("empty r range [{a}, {b}]"));
            }
        }
        if self.steps == Some(0) || self.cap == Some(0) || self.jobs == Some(0) {
            return bad("steps, cap and jobs must be positive".into());
        }
        if let Some(e) = &self.eps {
            let v: Rat = e.parse()?;
            if !v.is_positive() {
                return bad(format!("eps must be positive, got {e}"));
            }
        }
        for m in &self.maps {
            m.build()?;
        }
        Ok(())
    }

    pub fn eps_rat(&self, default: Rat) -> Result<Rat> {
        match &self.eps {
            Some(s) => s.parse(),
            None => Ok(default),
        }
    }

    pub fn map_list(&self, defaults: &[MapFamily]) -> Result<Vec<MapFamily>> {
        if self.maps.is_empty() {
            return Ok(defaults.to_vec());
        }
        self.maps.iter().map(MapDescriptor::build).collect()
    }
}

/// `kind:r`, e.g. `logistic:0.8671` or `tent:1`.
pub fn parse_map_spec(s: &str) -> Result<MapDescriptor> {
    let (kind, r) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected kind:r, got {s:?}")))?;
    let kind: MapKind = kind.parse()?;
    let d = MapDescriptor {
        kind,
        r: Some(r.to_string()),
        custom_pl: None,
    };
    d.build()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_and_overlay() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(
            &path,
            r#"{"maps":[{"kind":"logistic","r":0.8671}],"k_max":12,"format":"csv","eps":"1/10"}"#,
        )
        .unwrap();
        let cfg = ExperimentConfig::load(&path).unwrap();
        assert_eq!(cfg.k_max, Some(12));
        assert_eq!(cfg.eps_rat(Rat::one()).unwrap(), Rat::new(1, 10));
        let merged = cfg.overlay(ExperimentConfig {
            k_max: Some(4),
            ..ExperimentConfig::default()
        });
        assert_eq!(merged.k_max, Some(4));
        assert_eq!(merged.format, Some(Format::Csv));
        assert_eq!(merged.maps.len(), 1);
    }

    #[test]
    fn rejects_bad_ranges() {
        let cfg = ExperimentConfig {
            k_min: Some(5),
            k_max: Some(3),
            ..ExperimentConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig {
            cap: Some(0),
            ..ExperimentConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn map_specs() {
        assert_eq!(
            parse_map_spec("tent:1").unwrap().build().unwrap(),
            MapFamily::tent(Rat::one()).unwrap()
        );
        assert!(parse_map_spec("tent").is_err());
        assert!(parse_map_spec("logistic:1.5").is_err());
    }
}
