//! Run configuration files.
//!
//! A config is TOML with the sections `[parameters]`, `[domain]`,
//! `[[matching]]`, `[initial]`, `[integrator]`, `[metrics]` and `[output]`.
//! Unknown keys anywhere are errors.

use std::fmt;
use std::path::{Path, PathBuf};

use hrnet_core::domain::{parse_matching, Segment};
use hrnet_core::metrics::{EnvelopeTolerances, DEFAULT_FLOOR};
use hrnet_core::{
    Domain, DomainSpec, HRParameters, InitialCondition, IntegratorConfig, Model, PoincareMode,
    Scheme,
};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub parameters: HRParameters,
    pub domain: DomainSection,
    #[serde(default)]
    pub matching: Vec<Segment>,
    pub initial: InitialCondition,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub metrics: MetricsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    /// One length per axis: `[L]` for an interval, `[Lx, Ly]` for a rectangle.
    pub extents: Vec<f64>,
    pub cells: Vec<usize>,
    #[serde(default)]
    pub poincare: PoincareMode,
}

/// Time step: a positive number or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DtSetting {
    #[default]
    Auto,
    Fixed(f64),
}

impl Serialize for DtSetting {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DtSetting::Auto => s.serialize_str("auto"),
            DtSetting::Fixed(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for DtSetting {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = DtSetting;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive number or \"auto\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<DtSetting, E> {
                if v == "auto" {
                    Ok(DtSetting::Auto)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<DtSetting, E> {
                if v > 0.0 && v.is_finite() {
                    Ok(DtSetting::Fixed(v))
                } else {
                    Err(E::invalid_value(de::Unexpected::Float(v), &self))
                }
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<DtSetting, E> {
                self.visit_f64(v as f64)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSection {
    pub scheme: Scheme,
    pub dt: DtSetting,
    pub cfl_safety: f64,
    pub dt_max: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub solver_tol: f64,
    pub reaction: bool,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let c = IntegratorConfig::default();
        Self {
            scheme: c.scheme,
            dt: DtSetting::Auto,
            cfl_safety: c.cfl_safety,
            dt_max: c.dt_max,
            t_end: c.t_end,
            record_every: c.record_every,
            solver_tol: c.solver_tol,
            reaction: c.reaction,
        }
    }
}

impl IntegratorSection {
    pub fn to_config(&self) -> IntegratorConfig {
        IntegratorConfig {
            scheme: self.scheme,
            dt: match self.dt {
                DtSetting::Auto => None,
                DtSetting::Fixed(x) => Some(x),
            },
            cfl_safety: self.cfl_safety,
            dt_max: self.dt_max,
            t_end: self.t_end,
            record_every: self.record_every,
            solver_tol: self.solver_tol,
            reaction: self.reaction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricsSection {
    /// Share of the recorded span used for liminf/limsup estimates.
    pub tail_fraction: f64,
    pub envelope_tol: f64,
    pub decay_tol: f64,
    pub entry_tol: f64,
    /// Share of the pre-floor records used by the rate fit.
    pub fit_window: f64,
    pub floor: f64,
}

impl Default for MetricsSection {
    fn default() -> Self {
        let t = EnvelopeTolerances::default();
        Self {
            tail_fraction: 0.2,
            envelope_tol: t.envelope,
            decay_tol: t.decay,
            entry_tol: t.entry,
            fit_window: 0.5,
            floor: DEFAULT_FLOOR,
        }
    }
}

impl MetricsSection {
    pub fn tolerances(&self) -> EnvelopeTolerances {
        EnvelopeTolerances {
            envelope: self.envelope_tol,
            decay: self.decay_tol,
            entry: self.entry_tol,
        }
    }

    fn validate(&self) -> Result<(), String> {
        for (name, v) in [("tail_fraction", self.tail_fraction), ("fit_window", self.fit_window)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(format!("metrics.{name} must lie in (0, 1], got {v}"));
            }
        }
        for (name, v) in [
            ("envelope_tol", self.envelope_tol),
            ("decay_tol", self.decay_tol),
            ("entry_tol", self.entry_tol),
            ("floor", self.floor),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("metrics.{name} must be non-negative, got {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: "out".into() }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config {
            origin: origin.to_string(),
            message: e.to_string().trim_end().to_string(),
        })?;
        cfg.metrics.validate().map_err(|message| CliError::Config {
            origin: origin.to_string(),
            message,
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            origin: origin.clone(),
            message: e.to_string(),
        })?;
        Self::from_toml(&text, &origin)
    }

    pub fn domain(&self) -> Result<Domain, CliError> {
        let spec = DomainSpec {
            dim: self.domain.extents.len(),
            extents: self.domain.extents.clone(),
            cells: self.domain.cells.clone(),
        };
        Domain::build(&spec).map_err(|e| CliError::invalid("domain", e))
    }

    /// Parameters, geometry and matching with the derived constants.
    pub fn model(&self) -> Result<Model, CliError> {
        self.model_with(self.parameters)
    }

    pub fn model_with(&self, params: HRParameters) -> Result<Model, CliError> {
        params.validate().map_err(|e| CliError::invalid("parameters", e))?;
        let domain = self.domain()?;
        let matching = parse_matching(&self.matching, &domain, params.n)
            .map_err(|e| CliError::invalid("matching", e))?;
        Model::new(params, domain, matching, self.domain.poincare)
            .map_err(|e| CliError::invalid("parameters", e))
    }

    pub fn integrator(&self) -> IntegratorConfig {
        self.integrator.to_config()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[domain]
extents = [1.0]
cells = [32]

[[matching]]
side = "left"
pairs = "(1,2)"

[initial]
seed = 3

[initial.profile]
kind = "desync"
base = [-1.0, -5.0, 3.0]
offset = [1.0, 0.0, 0.0]
noise = [0.1, 0.0, 0.0]
"#;

    #[test]
    fn minimal_config_uses_profile_defaults() {
        let cfg = RunConfig::from_toml(MINIMAL, "test").unwrap();
        assert_eq!(cfg.parameters, HRParameters::default_profile());
        assert_eq!(cfg.integrator.dt, DtSetting::Auto);
        let model = cfg.model().unwrap();
        assert!(model.matching.couples(0, 1));
    }

    #[test]
    fn unknown_keys_are_named() {
        let text = MINIMAL.replace("cells = [32]", "cells = [32]\nspacing = 2");
        let err = RunConfig::from_toml(&text, "test").unwrap_err().to_string();
        assert!(err.contains("spacing"), "{err}");
        let text = format!("{MINIMAL}\n[integrator]\nsheme = \"imex-euler\"\n");
        let err = RunConfig::from_toml(&text, "test").unwrap_err().to_string();
        assert!(err.contains("sheme") && err.contains("line"), "{err}");
    }

    #[test]
    fn dt_accepts_auto_or_positive() {
        let with = |dt: &str| RunConfig::from_toml(&format!("{MINIMAL}\n[integrator]\ndt = {dt}\n"), "t");
        assert_eq!(with("\"auto\"").unwrap().integrator.dt, DtSetting::Auto);
        assert_eq!(with("0.001").unwrap().integrator.dt, DtSetting::Fixed(0.001));
        assert!(with("-1.0").is_err());
        assert!(with("\"fast\"").is_err());
    }

    #[test]
    fn zero_beta_names_parameter() {
        let text = format!("[parameters]\nbeta = 0.0\n{MINIMAL}");
        let cfg = RunConfig::from_toml(&text, "t").unwrap();
        let err = cfg.model().unwrap_err().to_string();
        assert!(err.contains("beta"), "{err}");
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = RunConfig::from_toml(MINIMAL, "t").unwrap();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_toml(&text, "t").unwrap(), cfg);
    }
}
