//! Does every model of a system satisfy a further axiom or formula?

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog::{checks, Eventuality, NormalityCondition, SystemConfig};
use crate::semantics::{eval, Assignment, Structure};
use crate::syntax::{parse_formula, Constant, Formula};

use super::models::{SearchOptions, Searcher};
use super::SearchError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Eventuality(Eventuality),
    /// NC`id`, primed or not.
    Normality(u8, bool),
    /// Never holds; a model count in disguise.
    False,
    /// A closed formula, evaluated with the model's table.
    Formula(Formula),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Eventuality(ea) => f.write_str(ea.name()),
            Target::Normality(id, primed) => {
                write!(f, "NC{id}{}", if *primed { "'" } else { "" })
            }
            Target::False => f.write_str("false"),
            Target::Formula(g) => write!(f, "{g}"),
        }
    }
}

impl FromStr for Target {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Target, SearchError> {
        let s = s.trim();
        if s == "false" {
            return Ok(Target::False);
        }
        if let Some(ea) = Eventuality::from_name(s) {
            return Ok(Target::Eventuality(ea));
        }
        let (base, primed) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        if base.starts_with("NC") {
            return match base.parse::<NormalityCondition>() {
                Ok(NormalityCondition::Numbered(id)) if !primed || (5..=8).contains(&id) => {
                    Ok(Target::Normality(id, primed))
                }
                _ => Err(SearchError::Target(s.to_string())),
            };
        }
        let f = parse_formula(s).map_err(|e| SearchError::Target(format!("{s}: {e}")))?;
        if !f.is_closed() {
            return Err(SearchError::Target(format!("{s}: not a closed formula")));
        }
        Ok(Target::Formula(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsequenceResult {
    pub target: String,
    pub size: usize,
    pub models: u64,
    pub failures: u64,
    pub holds: bool,
    /// No models at all, so the target holds trivially.
    pub vacuous: bool,
    #[serde(serialize_with = "crate::experiment::serialize_opt_structure")]
    pub counterexample: Option<Structure>,
}

impl fmt::Display for ConsequenceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.holds, self.vacuous) {
            (_, true) => "VACUOUS",
            (true, false) => "HOLDS",
            (false, false) => "FAILS",
        };
        write!(
            f,
            "{} n={} {status} ({} of {} models fail)",
            self.target, self.size, self.failures, self.models
        )
    }
}

fn structural_target_holds(cfg: &SystemConfig, s: &Structure, target: &Target) -> bool {
    match target {
        Target::Eventuality(Eventuality::EA1) => checks::singleton_at_holds(s, cfg),
        Target::Eventuality(Eventuality::EA3) => checks::non_normal_equipollent(s),
        Target::Eventuality(ea) => s
            .elements()
            .all(|e| checks::eventuality_holds_at(s, cfg, *ea, e)),
        Target::Normality(id, _) => s.elements().all(|e| checks::nc_holds_at(s, cfg, *id, e)),
        Target::False | Target::Formula(_) => false,
    }
}

/// Checks the target at each model of `cfg` of size `n`.
///
/// EA2 and EA9 hold at a model when the structure is also a model of the
/// system extended by them (tables are existential). An `@` left
/// undesignated by the system is read universally.
pub fn consequence_check(
    cfg: &SystemConfig,
    n: usize,
    target: &Target,
    opts: &SearchOptions,
) -> Result<ConsequenceResult, SearchError> {
    let searcher = Searcher::new(cfg)?;
    let verdict = searcher.run(
        n,
        &SearchOptions {
            witness_cap: None,
            record_violations: false,
            ..opts.clone()
        },
    )?;
    let mut extended = cfg.clone();
    extended.name = None;
    match target {
        Target::Eventuality(ea) => {
            extended.eventualities.insert(*ea);
        }
        Target::Normality(id, primed) => {
            extended.nc = NormalityCondition::Numbered(*id);
            extended.primed = *primed;
        }
        _ => {}
    }
    let table_searcher = match target {
        Target::Eventuality(Eventuality::EA2 | Eventuality::EA9) => Some(Searcher::new(&extended)?),
        _ => None,
    };
    let needs_at = matches!(
        target,
        Target::Eventuality(Eventuality::EA1 | Eventuality::EA4)
    );
    let mut failures = 0;
    let mut counterexample = None;
    for model in &verdict.witnesses {
        let ok = match target {
            Target::False => false,
            Target::Formula(f) => eval(model, cfg.philosophy, &Assignment::new(), f)?,
            _ => match &table_searcher {
                Some(s2) => s2.accepts(model),
                None if needs_at && model.designations.get(extended.at_target).is_none() => {
                    at_readings(model, extended.at_target)
                        .iter()
                        .all(|m| structural_target_holds(&extended, m, target))
                }
                None => structural_target_holds(&extended, model, target),
            },
        };
        if !ok {
            failures += 1;
            if counterexample.is_none() {
                counterexample = Some(model.clone());
            }
        }
    }
    Ok(ConsequenceResult {
        target: target.to_string(),
        size: n,
        models: verdict.model_count,
        failures,
        holds: failures == 0,
        vacuous: verdict.model_count == 0,
        counterexample,
    })
}

fn at_readings(s: &Structure, c: Constant) -> Vec<Structure> {
    s.elements()
        .filter(|&e| c != Constant::Us || s.extension(e) == s.universe())
        .map(|e| {
            let mut t = s.clone();
            t.designations.set(c, Some(e));
            t
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names() {
        assert_eq!(
            "EA2".parse::<Target>().unwrap(),
            Target::Eventuality(Eventuality::EA2)
        );
        assert_eq!(
            "NC6'".parse::<Target>().unwrap(),
            Target::Normality(6, true)
        );
        assert!("NC2'".parse::<Target>().is_err());
        assert_eq!("false".parse::<Target>().unwrap(), Target::False);
        assert!(matches!(
            "E x. N(x)".parse::<Target>().unwrap(),
            Target::Formula(_)
        ));
        assert!("x in x".parse::<Target>().is_err());
    }

    #[test]
    fn false_fails_exactly_when_models_exist() {
        let cfg = SystemConfig {
            family_depth: 0,
            ..SystemConfig::default()
        };
        let r = consequence_check(&cfg, 1, &Target::False, &SearchOptions::default()).unwrap();
        assert!(r.models > 0);
        assert!(!r.holds && !r.vacuous);
        assert_eq!(r.failures, r.models);
    }

    #[test]
    fn contradictory_system_is_vacuous() {
        let cfg = SystemConfig {
            comprehension: crate::catalog::Comprehension::Naive,
            ..SystemConfig::default()
        };
        let r = consequence_check(&cfg, 2, &Target::False, &SearchOptions::default()).unwrap();
        assert!(r.holds && r.vacuous);
        assert_eq!(r.to_string(), "false n=2 VACUOUS (0 of 0 models fail)");
    }
}
