//! Batch experiments: a JSON spec in, a deterministic JSON report out.

use std::time::Instant;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::catalog::{preset, Comprehension, SystemConfig};
use crate::search::{
    check_size, consequence_check, pathology_probe, self_instantiation_probe, ConsequenceResult,
    PathologyReport, ProbeResult, SearchError, SearchOptions, Searcher, Target,
};
use crate::semantics::Structure;
use crate::syntax::{parse_formula, russell_body};

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}

impl ExperimentError {
    pub fn is_cap(&self) -> bool {
        matches!(self, ExperimentError::Search(SearchError::CapExceeded(_)))
    }
}

/// A preset name or an inline configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigRef {
    Preset(String),
    Inline(Box<SystemConfig>),
}

impl ConfigRef {
    pub fn resolve(&self) -> Result<SystemConfig, ExperimentError> {
        let cfg = match self {
            ConfigRef::Preset(name) => preset(name)
                .ok_or_else(|| ExperimentError::Invalid(format!("unknown preset '{name}'")))?,
            ConfigRef::Inline(cfg) => (**cfg).clone(),
        };
        cfg.validate()
            .map_err(|e| ExperimentError::Invalid(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProbeSpec {
    Russell {
        variant: Comprehension,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        body: Option<String>,
    },
    Pathology,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Experiment {
    pub config: ConfigRef,
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_depth: Option<usize>,
    #[serde(default)]
    pub probes: Vec<ProbeSpec>,
    #[serde(default)]
    pub consequence_targets: Vec<String>,
}

fn default_witness_cap() -> usize {
    16
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentSpec {
    pub experiments: Vec<Experiment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default = "default_witness_cap")]
    pub witness_cap: usize,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<ExperimentSpec, ExperimentError> {
        serde_json::from_str(text).map_err(|e| ExperimentError::Invalid(e.to_string()))
    }

    /// Checks everything that can be checked before running: configs,
    /// sizes, probe bodies and targets.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.experiments.is_empty() {
            return Err(ExperimentError::Invalid("no experiments".into()));
        }
        for exp in &self.experiments {
            let mut cfg = exp.config.resolve()?;
            if let Some(d) = exp.family_depth {
                cfg.family_depth = d;
                cfg.validate()
                    .map_err(|e| ExperimentError::Invalid(e.to_string()))?;
            }
            if exp.sizes.is_empty() {
                return Err(ExperimentError::Invalid(
                    "an experiment has no sizes".into(),
                ));
            }
            for &n in &exp.sizes {
                check_size(n)?;
            }
            for p in &exp.probes {
                if let ProbeSpec::Russell {
                    body: Some(body), ..
                } = p
                {
                    parse_formula(body)
                        .map_err(|e| ExperimentError::Invalid(format!("probe body: {e}")))?;
                }
            }
            for t in &exp.consequence_targets {
                t.parse::<Target>()
                    .map_err(|e| ExperimentError::Invalid(e.to_string()))?;
            }
        }
        Ok(())
    }
}

pub fn serialize_opt_structure<S: Serializer>(
    s: &Option<Structure>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    match s {
        Some(s) => ser.collect_str(s),
        None => ser.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProbeRecord {
    Russell(ProbeResult),
    Pathology(PathologyReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Cell {
    pub config: String,
    pub size: usize,
    pub family_depth: usize,
    pub candidates: u64,
    pub model_count: u64,
    pub witnesses: Vec<String>,
    pub not_evaluated: Vec<String>,
    pub probes: Vec<ProbeRecord>,
    pub consequences: Vec<ConsequenceResult>,
    /// Wall time, only when timings were requested.
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: String,
    pub spec: ExperimentSpec,
    pub cells: Vec<Cell>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).unwrap_or_default();
        text.push('\n');
        text
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
    pub timings: bool,
}

/// Runs every (experiment, size) cell in spec order.
pub fn run_matrix(spec: &ExperimentSpec, opts: &RunOptions) -> Result<Report, ExperimentError> {
    spec.validate()?;
    let search = SearchOptions {
        workers: opts.workers.max(1),
        witness_cap: Some(spec.witness_cap),
        record_violations: false,
    };
    let mut cells = Vec::new();
    for exp in &spec.experiments {
        let mut cfg = exp.config.resolve()?;
        if let Some(d) = exp.family_depth {
            cfg.family_depth = d;
        }
        let searcher = Searcher::new(&cfg)?;
        let targets: Vec<Target> = exp
            .consequence_targets
            .iter()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()?;
        for &n in &exp.sizes {
            let start = Instant::now();
            let verdict = searcher.run(n, &search)?;
            let mut probes = Vec::new();
            for p in &exp.probes {
                probes.push(match p {
                    ProbeSpec::Russell { variant, body } => {
                        let body = match body {
                            Some(text) => parse_formula(text)
                                .map_err(|e| ExperimentError::Invalid(e.to_string()))?,
                            None => russell_body(),
                        };
                        let result = self_instantiation_probe(*variant, &body)
                            .map_err(|e| ExperimentError::Invalid(e.to_string()))?;
                        ProbeRecord::Russell(result)
                    }
                    ProbeSpec::Pathology => {
                        ProbeRecord::Pathology(pathology_probe(&cfg, n, &search)?)
                    }
                });
            }
            let consequences = targets
                .iter()
                .map(|t| consequence_check(&cfg, n, t, &search))
                .collect::<Result<_, _>>()?;
            cells.push(Cell {
                config: cfg.label(),
                size: n,
                family_depth: cfg.family_depth,
                candidates: verdict.candidates,
                model_count: verdict.model_count,
                witnesses: verdict.witnesses.iter().map(|w| w.to_string()).collect(),
                not_evaluated: verdict.not_evaluated,
                probes,
                consequences,
                elapsed_ms: opts.timings.then(|| start.elapsed().as_millis() as u64),
            });
        }
    }
    Ok(Report {
        version: REPORT_VERSION.to_string(),
        spec: spec.clone(),
        cells,
    })
}

/// One line per cell: config, size, model count, candidates, and anything
/// not evaluated.
pub fn summary_table(report: &Report) -> String {
    let width = report
        .cells
        .iter()
        .map(|c| c.config.len())
        .max()
        .unwrap_or(6)
        .max(6);
    let mut out = format!(
        "{:<width$}  {:>2}  {:>8}  {:>10}  notEvaluated\n",
        "config", "n", "models", "candidates"
    );
    for c in &report.cells {
        out.push_str(&format!(
            "{:<width$}  {:>2}  {:>8}  {:>10}  {}\n",
            c.config,
            c.size,
            c.model_count,
            c.candidates,
            c.not_evaluated.join(",")
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"{
        "experiments": [
            {"config": "NAM1a", "sizes": [1, 2], "familyDepth": 0,
             "probes": [{"kind": "russell", "variant": "noBI"}],
             "consequenceTargets": ["false", "EA8"]},
            {"config": {"comprehension": "rinoBaCo", "nc": "NC2"}, "sizes": [2]}
        ],
        "witnessCap": 2
    }"#;

    #[test]
    fn runs_and_is_deterministic() {
        let spec = ExperimentSpec::from_json(SPEC).unwrap();
        let a = run_matrix(&spec, &RunOptions::default()).unwrap().to_json();
        let b = run_matrix(
            &spec,
            &RunOptions {
                workers: 3,
                timings: false,
            },
        )
        .unwrap()
        .to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"elapsedMs\": null"));
    }

    #[test]
    fn bad_specs() {
        assert!(ExperimentSpec::from_json(r#"{"experiments": []}"#)
            .unwrap()
            .validate()
            .is_err());
        let unknown =
            ExperimentSpec::from_json(r#"{"experiments":[{"config":"NAM7","sizes":[1]}]}"#)
                .unwrap();
        assert!(matches!(
            unknown.validate(),
            Err(ExperimentError::Invalid(_))
        ));
        let big = ExperimentSpec::from_json(r#"{"experiments":[{"config":"NAM0a","sizes":[9]}]}"#)
            .unwrap();
        assert!(big.validate().unwrap_err().is_cap());
        assert!(ExperimentSpec::from_json(r#"{"experiments":[], "bogus": 1}"#).is_err());
    }

    #[test]
    fn summary_has_a_row_per_cell() {
        let spec = ExperimentSpec::from_json(SPEC).unwrap();
        let report = run_matrix(&spec, &RunOptions::default()).unwrap();
        assert_eq!(
            summary_table(&report).lines().count(),
            1 + report.cells.len()
        );
    }
}
