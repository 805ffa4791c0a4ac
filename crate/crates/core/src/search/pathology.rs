//! Where the Russell set and its slim cousins land in each model.

use std::fmt;

use serde::Serialize;

use crate::catalog::{Families, SystemConfig};
use crate::semantics::{hull_with_mode, predicates::slim, ElemSet, Structure};
use crate::syntax::{enumerate_family, russell_body};

use super::models::{SearchOptions, Searcher};
use super::SearchError;

/// How a per-model observation came out across the models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Aggregate {
    #[serde(rename = "ALL")]
    All,
    #[serde(rename = "NONE")]
    None,
    #[serde(rename = "MIXED")]
    Mixed,
    /// Nothing to observe.
    #[serde(rename = "NO-MODELS")]
    NoModels,
}

impl Aggregate {
    pub fn of(values: impl IntoIterator<Item = bool>) -> Aggregate {
        values
            .into_iter()
            .map(|b| if b { Aggregate::All } else { Aggregate::None })
            .fold(Aggregate::NoModels, Aggregate::merge)
    }

    pub fn merge(self, other: Aggregate) -> Aggregate {
        match (self, other) {
            (Aggregate::NoModels, x) | (x, Aggregate::NoModels) => x,
            (a, b) if a == b => a,
            _ => Aggregate::Mixed,
        }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregate::All => "ALL",
            Aggregate::None => "NONE",
            Aggregate::Mixed => "MIXED",
            Aggregate::NoModels => "NO-MODELS",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PathologyReport {
    pub config: String,
    pub size: usize,
    pub models: u64,
    /// `ru in ru` over the admissible denotations of `ru`.
    pub ru_in_ru: Aggregate,
    /// Normal flags of the admissible denotations of `ru`.
    pub ru_normal: Aggregate,
    /// Whether some element has extension `{e : slim(e)}`.
    pub slim_exists: Aggregate,
    pub slim_in_slim: Aggregate,
    /// Whether some element has extension `{e : every set in e* is slim}`.
    pub hered_slim_exists: Aggregate,
    pub hered_slim_in_itself: Aggregate,
}

impl fmt::Display for PathologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} models={} ru-in-ru={} N(ru)={} slim-exists={} slim-in-slim={} \
             heredslim-exists={} heredslim-in-itself={}",
            self.config,
            self.size,
            self.models,
            self.ru_in_ru,
            self.ru_normal,
            self.slim_exists,
            self.slim_in_slim,
            self.hered_slim_exists,
            self.hered_slim_in_itself
        )
    }
}

fn self_membership(s: &Structure, candidates: ElemSet) -> Aggregate {
    Aggregate::of(candidates.iter().map(|e| s.member(e, e)))
}

fn realizers(s: &Structure, target: ElemSet) -> ElemSet {
    s.elements().filter(|&e| s.extension(e) == target).collect()
}

/// Adds the Russell body to the configured family when absent, finds all
/// models of size `n`, and aggregates the observations.
pub fn pathology_probe(
    cfg: &SystemConfig,
    n: usize,
    opts: &SearchOptions,
) -> Result<PathologyReport, SearchError> {
    let mut unary = enumerate_family(cfg.family_depth, cfg.family_constants)?;
    let ru = russell_body();
    unary.extend_with([ru.clone()]);
    let ru_index = unary
        .members
        .iter()
        .position(|m| *m == ru)
        .unwrap_or_default();
    let searcher = Searcher::with_families(cfg, Families::with_unary(cfg, unary)?)?;
    let verdict = searcher.run(
        n,
        &SearchOptions {
            witness_cap: None,
            record_violations: false,
            ..opts.clone()
        },
    )?;
    let mut report = PathologyReport {
        config: cfg.label(),
        size: n,
        models: verdict.model_count,
        ru_in_ru: Aggregate::NoModels,
        ru_normal: Aggregate::NoModels,
        slim_exists: Aggregate::NoModels,
        slim_in_slim: Aggregate::NoModels,
        hered_slim_exists: Aggregate::NoModels,
        hered_slim_in_itself: Aggregate::NoModels,
    };
    for model in &verdict.witnesses {
        if let Some(domains) = searcher.denotation_domains(model) {
            let d = domains[ru_index];
            report.ru_in_ru = report.ru_in_ru.merge(self_membership(model, d));
            report.ru_normal = report
                .ru_normal
                .merge(Aggregate::of(d.iter().map(|e| model.is_normal(e))));
        }
        let slim_ext: ElemSet = model.elements().filter(|&e| slim(model, e)).collect();
        let hered_ext: ElemSet = model
            .elements()
            .filter(|&e| {
                hull_with_mode(model, e, cfg.hull_mode)
                    .iter()
                    .all(|h| slim(model, h))
            })
            .collect();
        for (target, exists, inside) in [
            (slim_ext, &mut report.slim_exists, &mut report.slim_in_slim),
            (
                hered_ext,
                &mut report.hered_slim_exists,
                &mut report.hered_slim_in_itself,
            ),
        ] {
            let r = realizers(model, target);
            *exists = exists.merge(Aggregate::of([!r.is_empty()]));
            if !r.is_empty() {
                *inside = inside.merge(self_membership(model, r));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Comprehension;

    #[test]
    fn aggregate_folds() {
        assert_eq!(Aggregate::of([]), Aggregate::NoModels);
        assert_eq!(Aggregate::of([true, true]), Aggregate::All);
        assert_eq!(Aggregate::of([false]), Aggregate::None);
        assert_eq!(Aggregate::of([true, false]), Aggregate::Mixed);
    }

    #[test]
    fn rabadi_russell_set_is_abnormal_and_self_membered() {
        let cfg = SystemConfig {
            comprehension: Comprehension::RaBaDi,
            family_depth: 0,
            ..SystemConfig::default()
        };
        let r = pathology_probe(&cfg, 2, &SearchOptions::default()).unwrap();
        assert!(r.models > 0);
        assert_eq!(r.ru_in_ru, Aggregate::All);
        assert_eq!(r.ru_normal, Aggregate::None);
    }

    #[test]
    fn rinobaco_russell_set_is_empty_and_abnormal() {
        let cfg = SystemConfig {
            comprehension: Comprehension::RinoBaCo,
            family_depth: 0,
            ..SystemConfig::default()
        };
        let r = pathology_probe(&cfg, 2, &SearchOptions::default()).unwrap();
        assert!(r.models > 0);
        assert_eq!(r.ru_in_ru, Aggregate::None);
        assert_eq!(r.ru_normal, Aggregate::None);
    }
}
