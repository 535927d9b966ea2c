use std::collections::BTreeMap;
use std::path::Path;

use kolmocycle::families::{family1_build, family2_build, Family1Params, Family2Params, FAMILY1_KEYS, FAMILY2_KEYS};
use kolmocycle::{KolmogorovSystem, Tolerances};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// A family member by name, or a raw system given by coefficient triples `[i, j, value]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Family { family: String, params: BTreeMap<String, f64> },
    Raw { degree: u32, f: Vec<(u32, u32, f64)>, g: Vec<(u32, u32, f64)> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFields {
    family: String,
    params: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFields {
    degree: u32,
    f: Vec<(u32, u32, f64)>,
    g: Vec<(u32, u32, f64)>,
}

impl<'de> Deserialize<'de> for SystemSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = Value::deserialize(d)?;
        let obj = v.as_object().ok_or_else(|| D::Error::custom("system must be an object"))?;
        match (obj.contains_key("family"), obj.contains_key("degree")) {
            (true, true) => Err(D::Error::custom("system has both `family` and `degree`; give exactly one")),
            (false, false) => Err(D::Error::custom("system needs either `family` + `params` or `degree` + `f` + `g`")),
            (true, false) => {
                let FamilyFields { family, params } = serde_json::from_value(v).map_err(D::Error::custom)?;
                Ok(SystemSpec::Family { family, params })
            }
            (false, true) => {
                let RawFields { degree, f, g } = serde_json::from_value(v).map_err(D::Error::custom)?;
                Ok(SystemSpec::Raw { degree, f, g })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    pub s_min: Option<f64>,
    /// Alternative to `s_min` for windows below the smallest positive double.
    pub log10_s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub grid_n: Option<usize>,
    /// Also search for limit cycles during `analyze`.
    pub with_cycles: bool,
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub analysis: AnalysisOptions,
}

/// A sampling window in `ln s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub ln_s_min: f64,
    pub ln_s_max: f64,
    pub grid_n: usize,
}

impl Window {
    pub const DISPLACEMENT: Window = Window { ln_s_min: -6.907755278982137, ln_s_max: -1.2039728043259361, grid_n: 20 };
    /// Reaches the cycles that bifurcate at `d1 ~ 1e-3`, which sit near `ln s ~ d2/d1`.
    pub const CYCLES: Window = Window { ln_s_min: -1000.0 * std::f64::consts::LN_10, ln_s_max: -1.2039728043259361, grid_n: 60 };

    pub fn points(&self) -> Vec<f64> {
        if self.grid_n == 1 {
            return vec![self.ln_s_min];
        }
        (0..self.grid_n)
            .map(|k| self.ln_s_min + (self.ln_s_max - self.ln_s_min) * k as f64 / (self.grid_n - 1) as f64)
            .collect()
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        cfg.tolerances.validate().map_err(|e| CliError::Parse(e.to_string()))?;
        cfg.family_keys()?;
        Ok(cfg)
    }

    /// Parameter keys of the named family, after checking the params map matches them.
    fn family_keys(&self) -> Result<Option<&'static [&'static str]>, CliError> {
        let SystemSpec::Family { family, params } = &self.system else {
            return Ok(None);
        };
        let keys: &'static [&'static str] = match family.as_str() {
            "ex1" => &FAMILY1_KEYS,
            "ex2" => &FAMILY2_KEYS,
            other => return Err(CliError::Parse(format!("unknown family `{other}` (expected ex1 or ex2)"))),
        };
        for k in params.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(CliError::Parse(format!("unknown parameter `{k}` for {family} (keys {keys:?})")));
            }
        }
        for k in keys {
            if !params.contains_key(*k) {
                return Err(CliError::Parse(format!("missing parameter `{k}` for {family}")));
            }
        }
        Ok(Some(keys))
    }

    pub fn is_family(&self) -> bool {
        matches!(self.system, SystemSpec::Family { .. })
    }

    /// Parameter vector of a family config in key order.
    pub fn family_vector(&self) -> Option<Vec<f64>> {
        match &self.system {
            SystemSpec::Family { family, params } => {
                let keys: &[&str] = if family == "ex1" { &FAMILY1_KEYS } else { &FAMILY2_KEYS };
                Some(keys.iter().map(|k| params[*k]).collect())
            }
            SystemSpec::Raw { .. } => None,
        }
    }

    pub fn with_param(&self, key: &str, value: f64) -> Result<Self, CliError> {
        let mut out = self.clone();
        match &mut out.system {
            SystemSpec::Family { family, params } => {
                if !params.contains_key(key) {
                    return Err(CliError::Parse(format!("`{key}` is not a parameter of {family}")));
                }
                params.insert(key.to_string(), value);
                Ok(out)
            }
            SystemSpec::Raw { .. } => Err(CliError::Parse("sweeps need a family config".into())),
        }
    }

    pub fn build(&self) -> kolmocycle::Result<KolmogorovSystem> {
        match &self.system {
            SystemSpec::Family { family, .. } => build_family(family, &self.family_vector().unwrap_or_default()),
            SystemSpec::Raw { degree, f, g } => KolmogorovSystem::from_terms(*degree, f, g),
        }
    }

    /// Window from the config, falling back to `default` for anything unset.
    pub fn window(&self, default: Window) -> Result<Window, CliError> {
        let a = &self.analysis;
        let ln_s_min = match (a.s_min, a.log10_s_min) {
            (Some(_), Some(_)) => return Err(CliError::Parse("give at most one of s_min and log10_s_min".into())),
            (Some(s), None) => positive_ln(s, "s_min")?,
            (None, Some(l)) => l * std::f64::consts::LN_10,
            (None, None) => default.ln_s_min,
        };
        let ln_s_max = match a.s_max {
            Some(s) => positive_ln(s, "s_max")?,
            None => default.ln_s_max,
        };
        let grid_n = a.grid_n.unwrap_or(default.grid_n);
        if !(ln_s_min < ln_s_max) || !ln_s_min.is_finite() {
            return Err(CliError::Parse(format!("empty window: ln s_min = {ln_s_min}, ln s_max = {ln_s_max}")));
        }
        if grid_n < 2 {
            return Err(CliError::Parse("grid_n must be at least 2".into()));
        }
        Ok(Window { ln_s_min, ln_s_max, grid_n })
    }
}

fn positive_ln(s: f64, name: &str) -> Result<f64, CliError> {
    if s > 0.0 && s.is_finite() {
        Ok(s.ln())
    } else {
        Err(CliError::Parse(format!("{name} must be positive and finite, got {s}")))
    }
}

pub fn build_family(family: &str, mu: &[f64]) -> kolmocycle::Result<KolmogorovSystem> {
    match (family, mu) {
        ("ex1", &[a, p, q]) => family1_build(Family1Params::new(a, p, q)?),
        ("ex2", &[a, b, c, p, q]) => family2_build(Family2Params::new(a, b, c, p, q)?),
        _ => Err(kolmocycle::Error::Domain(format!("family {family} with {} parameters", mu.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_and_raw_forms() {
        let c = RunConfig::parse(r#"{"system": {"family": "ex1", "params": {"a": 1, "p": -2, "q": 2}}}"#).unwrap();
        assert_eq!(c.family_vector(), Some(vec![1.0, -2.0, 2.0]));
        assert_eq!(c.tolerances, Tolerances::default());
        let raw = r#"{"system": {"degree": 2, "f": [[0,0,1],[2,0,1],[0,2,-3]], "g": [[0,0,-1],[2,0,2],[0,2,-1]]},
                      "tolerances": {"quad": 1e-10, "ode": 1e-10, "zero": 1e-8, "pole": 1e-6}}"#;
        let c = RunConfig::parse(raw).unwrap();
        assert!(!c.is_family());
        assert_eq!(c.build().unwrap().degree(), 2);
    }

    #[test]
    fn malformed_configs_are_parse_errors() {
        for text in [
            "{",
            r#"{"system": {"family": "ex1", "params": {"a": 1, "p": -2}}}"#,
            r#"{"system": {"family": "ex3", "params": {}}}"#,
            r#"{"system": {"family": "ex1", "params": {"a": 1, "p": -2, "q": 2, "r": 0}}}"#,
            r#"{"system": {"family": "ex1", "degree": 2, "params": {"a": 1, "p": -2, "q": 2}}}"#,
            r#"{"system": {"family": "ex1", "params": {"a": 1, "p": -2, "q": 2}}, "tolerances": {"quad": -1}}"#,
            r#"{"system": {"family": "ex1", "params": {"a": 1, "p": -2, "q": 2}}, "extra": 1}"#,
        ] {
            assert!(matches!(RunConfig::parse(text), Err(CliError::Parse(_))), "{text}");
        }
    }

    #[test]
    fn window_defaults_and_overrides() {
        let mut c = RunConfig::parse(r#"{"system": {"family": "ex1", "params": {"a": 1, "p": -2, "q": 2}}}"#).unwrap();
        assert_eq!(c.window(Window::DISPLACEMENT).unwrap(), Window::DISPLACEMENT);
        c.analysis.log10_s_min = Some(-500.0);
        c.analysis.grid_n = Some(7);
        let w = c.window(Window::DISPLACEMENT).unwrap();
        assert!((w.ln_s_min + 500.0 * std::f64::consts::LN_10).abs() < 1e-9 && w.grid_n == 7);
        c.analysis.s_min = Some(1e-3);
        assert!(c.window(Window::DISPLACEMENT).is_err());
    }
}
