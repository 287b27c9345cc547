//! Declarative scenario files: JSON with a versioned `schema` field.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use toroidal_core::scalars::{parse_rational, Rational};

use crate::CliError;

pub const SCHEMA: &str = "toroidal-scenario/1";

/// Bundled scenarios, addressable by name in place of a path.
pub const BUNDLED: &[(&str, &str)] = &[("sl2-twisted-default", include_str!("../scenarios/sl2-twisted-default.json"))];

/// Names accepted in `checks`, in run order.
pub const CHECKS: &[&str] = &[
    "delta_identity",
    "mode_commutator",
    "product_forms",
    "mode_table",
    "twisted_jacobi",
    "untwisted_jacobi",
    "weak_commutativity",
    "weak_associativity",
    "iterate_formula",
    "va_automorphism",
    "equivariance",
    "negative_controls",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Structure-constant file in the algebra input format, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismSpec {
    /// Rows of the matrix in the algebra's basis; entries are scalars as in the algebra input.
    pub matrix: Vec<Vec<Value>>,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    pub degree: String,
    pub weight: i64,
    pub exponent_bound: i64,
    pub spatial: i64,
    pub sample_degree: String,
    pub locality_cap: i64,
    pub closure_depth: usize,
    pub closure_members: usize,
    pub pair_degree: i64,
    pub random_pairs: usize,
    pub automorphism_samples: usize,
    pub equivariance_depth: usize,
    pub delta_bound: i64,
    pub commutator_bound: i64,
    pub jacobi_min_per_pair: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            degree: "3".into(),
            weight: 3,
            exponent_bound: 3,
            spatial: 1,
            sample_degree: "1/2".into(),
            locality_cap: 8,
            closure_depth: 2,
            closure_members: 48,
            pair_degree: 4,
            random_pairs: 20,
            automorphism_samples: 60,
            equivariance_depth: 2,
            delta_bound: 6,
            commutator_bound: 4,
            jacobi_min_per_pair: 100,
        }
    }
}

impl Caps {
    pub fn degree_cap(&self) -> Result<Rational, CliError> {
        parse_rational(&self.degree).ok_or_else(|| CliError::validation(format!("caps.degree: not a rational: {:?}", self.degree)))
    }

    pub fn sample_degree(&self) -> Result<Rational, CliError> {
        parse_rational(&self.sample_degree)
            .ok_or_else(|| CliError::validation(format!("caps.sample_degree: not a rational: {:?}", self.sample_degree)))
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
            v.parse().map_err(|_| CliError::validation(format!("caps.{key}: bad value {v:?}")))
        }
        match key {
            "degree" => self.degree = value.into(),
            "sample_degree" => self.sample_degree = value.into(),
            "weight" => self.weight = num(key, value)?,
            "exponent_bound" => self.exponent_bound = num(key, value)?,
            "spatial" => self.spatial = num(key, value)?,
            "locality_cap" => self.locality_cap = num(key, value)?,
            "closure_depth" => self.closure_depth = num(key, value)?,
            "closure_members" => self.closure_members = num(key, value)?,
            "pair_degree" => self.pair_degree = num(key, value)?,
            "random_pairs" => self.random_pairs = num(key, value)?,
            "automorphism_samples" => self.automorphism_samples = num(key, value)?,
            "equivariance_depth" => self.equivariance_depth = num(key, value)?,
            "delta_bound" => self.delta_bound = num(key, value)?,
            "commutator_bound" => self.commutator_bound = num(key, value)?,
            "jacobi_min_per_pair" => self.jacobi_min_per_pair = num(key, value)?,
            _ => return Err(CliError::validation(format!("unknown cap {key:?}"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        let zero = Rational::from_integer(0.into());
        if self.degree_cap()? <= zero || self.sample_degree()? < zero {
            return Err(CliError::validation("caps.degree must be positive and caps.sample_degree nonnegative"));
        }
        let positive = [
            ("weight", self.weight),
            ("exponent_bound", self.exponent_bound),
            ("locality_cap", self.locality_cap),
            ("pair_degree", self.pair_degree),
            ("delta_bound", self.delta_bound),
            ("commutator_bound", self.commutator_bound),
        ];
        for (k, v) in positive {
            if v <= 0 {
                return Err(CliError::validation(format!("caps.{k} must be positive")));
            }
        }
        if self.spatial < 0 {
            return Err(CliError::validation("caps.spatial must be nonnegative"));
        }
        if self.closure_depth == 0 || self.closure_members == 0 || self.random_pairs == 0 || self.automorphism_samples == 0 {
            return Err(CliError::validation("closure and sample counts must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: String,
    pub name: String,
    pub algebra: AlgebraSpec,
    /// `σ_0, σ_1, ..., σ_r` with their intended orders.
    pub automorphisms: Vec<AutomorphismSpec>,
    pub rank: usize,
    pub level: Value,
    #[serde(default)]
    pub caps: Caps,
    pub checks: Vec<String>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Directory that relative paths resolve against; not part of the file.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("reports")
}

impl ScenarioConfig {
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| CliError::validation(format!("config: {e}")))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    /// A bundled scenario name or a path to a JSON file.
    pub fn load(name_or_path: &str) -> Result<Self, CliError> {
        if let Some((_, text)) = BUNDLED.iter().find(|(n, _)| *n == name_or_path) {
            return Self::from_json(text, Path::new("."));
        }
        let path = Path::new(name_or_path);
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn bundled(name: &str) -> Result<Self, CliError> {
        let (_, text) = BUNDLED.iter().find(|(n, _)| *n == name).ok_or_else(|| CliError::validation(format!("no bundled scenario {name:?}")))?;
        Self::from_json(text, Path::new("."))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA {
            return Err(CliError::validation(format!("unsupported schema {:?}, expected {SCHEMA:?}", self.schema)));
        }
        match (&self.algebra.preset, &self.algebra.file) {
            (Some(_), None) | (None, Some(_)) => {}
            _ => return Err(CliError::validation("algebra needs exactly one of preset or file")),
        }
        if self.automorphisms.len() != self.rank + 1 {
            return Err(CliError::validation(format!("rank {} needs {} automorphisms, got {}", self.rank, self.rank + 1, self.automorphisms.len())));
        }
        if self.automorphisms.iter().any(|a| a.order == 0) {
            return Err(CliError::validation("automorphism orders must be positive"));
        }
        self.validate_checks(&self.checks)?;
        self.caps.validate()
    }

    pub fn validate_checks(&self, names: &[String]) -> Result<(), CliError> {
        if names.is_empty() {
            return Err(CliError::validation("no checks selected"));
        }
        for n in names {
            if !CHECKS.contains(&n.as_str()) {
                return Err(CliError::validation(format!("unknown check {n:?}; known: {}", CHECKS.join(", "))));
            }
        }
        Ok(())
    }

    /// `--checks a,b` override.
    pub fn select_checks(&mut self, list: &str) -> Result<(), CliError> {
        let names: Vec<String> = list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        self.validate_checks(&names)?;
        self.checks = names;
        Ok(())
    }

    /// `--caps k=v,...` override.
    pub fn override_caps(&mut self, list: &str) -> Result<(), CliError> {
        for item in list.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| CliError::validation(format!("cap override {item:?} is not key=value")))?;
            self.caps.set(k.trim(), v.trim())?;
        }
        self.caps.validate()
    }

    pub fn algebra_file(&self) -> Option<PathBuf> {
        self.algebra.file.as_ref().map(|f| if f.is_absolute() { f.clone() } else { self.base_dir.join(f) })
    }
}
