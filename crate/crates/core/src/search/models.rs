//! Model search.
//!
//! A candidate is a model when it passes every structure-level check and
//! some denotation table satisfies the formula-level instances. Tables are
//! found without backtracking:
//!
//! - each member's admissible denotations follow from its truth set and the
//!   comprehension variant (restricted to Normal elements for stratified
//!   members under the stratified condition);
//! - members that must share a denotation (alpha-equivalent, or equal truth
//!   sets under EA2) are merged by intersecting their domains;
//! - EA9 clauses are positive disjunctions of Normal flags, so taking a
//!   Normal candidate wherever one exists satisfies every clause that can be
//!   satisfied at all.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    admits, builder_for, checks, comprehension_instance, ea2_instance, ea9_instance,
    list_axiom_instances, not_evaluated, stratified_instance, CatalogError, Eventuality,
    Extensionality, Families, Fundamental, MetaCheck, NormalityCondition, Payload, SchemaId,
    SchemaInstance, SystemConfig,
};
use crate::semantics::{Compiled, ElemSet, Philosophy, Structure};
use crate::syntax::{canonical_term, stratified, Constant, Formula};

use super::enumerate::{check_size, for_each_in_range, relation_count, Constraints};
use super::SearchError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub workers: usize,
    /// Witnesses kept; `None` keeps every model.
    pub witness_cap: Option<usize>,
    pub record_violations: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: 1,
            witness_cap: Some(16),
            record_violations: true,
        }
    }
}

/// Why a candidate failed: the schema and where in it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    /// Index in enumeration order.
    pub candidate: u64,
    pub schema: SchemaId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<usize>,
    /// Index into the comprehension family, or the image family for FA4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub config: SystemConfig,
    pub size: usize,
    pub candidates: u64,
    pub model_count: u64,
    /// Models in enumeration order, each carrying a satisfying table.
    pub witnesses: Vec<Structure>,
    pub violations: Vec<Violation>,
    pub not_evaluated: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Failure {
    schema: SchemaId,
    element: Option<usize>,
    formula: Option<usize>,
}

impl Failure {
    fn at(schema: SchemaId, element: usize) -> Failure {
        Failure {
            schema,
            element: Some(element),
            formula: None,
        }
    }

    fn structure(schema: SchemaId) -> Failure {
        Failure {
            schema,
            element: None,
            formula: None,
        }
    }

    fn formula(schema: SchemaId, formula: usize) -> Failure {
        Failure {
            schema,
            element: None,
            formula: Some(formula),
        }
    }
}

/// A configuration prepared for checking many structures of one size.
pub struct Searcher {
    cfg: SystemConfig,
    families: Families,
    unary: Vec<Compiled>,
    binary: Vec<Compiled>,
    stratified: Vec<bool>,
    /// Alpha-equivalence class of each member (index of its first member).
    alpha: Vec<usize>,
    constraints: Constraints,
}

impl Searcher {
    pub fn new(cfg: &SystemConfig) -> Result<Searcher, SearchError> {
        cfg.validate().map_err(CatalogError::from)?;
        let families = Families::for_config(cfg)?;
        Searcher::with_families(cfg, families)
    }

    pub fn with_families(cfg: &SystemConfig, families: Families) -> Result<Searcher, SearchError> {
        cfg.validate().map_err(CatalogError::from)?;
        let compile = |f: &Formula, free: &[&str]| -> Result<Compiled, SearchError> {
            let names: Vec<String> = free.iter().map(|s| s.to_string()).collect();
            Ok(Compiled::new(f, &names, None).map_err(CatalogError::from)?)
        };
        let mut unary = Vec::new();
        let mut alpha = Vec::new();
        let mut first_of: BTreeMap<_, usize> = BTreeMap::new();
        for (i, m) in families.unary.members.iter().enumerate() {
            let v = crate::catalog::abstraction_variable(m)?;
            unary.push(compile(m, &[v.as_str()])?);
            let key = canonical_term(&builder_for(m)?);
            alpha.push(*first_of.entry(key).or_insert(i));
        }
        let binary = match &families.binary {
            Some(b) => b
                .members
                .iter()
                .map(|m| compile(m, &["x", "y"]))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let stratified = families.unary.members.iter().map(stratified).collect();
        let constraints = Constraints {
            extensional_only: cfg.extensionality == Extensionality::Ee,
            quotiented: cfg.philosophy == Philosophy::B,
            designate: families.needed_constants(cfg).into_iter().collect(),
        };
        Ok(Searcher {
            cfg: cfg.clone(),
            families,
            unary,
            binary,
            stratified,
            alpha,
            constraints,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn families(&self) -> &Families {
        &self.families
    }

    pub fn constraints(&self) -> &Constraints {
        &self.constraints
    }

    /// First failing structure-level check, in canonical instance order.
    fn structural_failure(&self, s: &Structure) -> Option<Failure> {
        let cfg = &self.cfg;
        if cfg.extensionality != Extensionality::None
            && !checks::extensionality_holds(s, cfg.extensionality, cfg.philosophy)
        {
            return Some(Failure::structure(SchemaId::Extensionality(
                cfg.extensionality,
            )));
        }
        if cfg.has(Fundamental::FA1) {
            if let Some(om) = s.designations.get(Constant::Om) {
                if !s.is_normal(om) {
                    return Some(Failure::structure(SchemaId::Fundamental(Fundamental::FA1)));
                }
            }
        }
        if cfg.has(Fundamental::FA2) {
            if let Some(e) = s.elements().find(|&e| !checks::powerset_holds(s, cfg, e)) {
                return Some(Failure::at(SchemaId::Fundamental(Fundamental::FA2), e));
            }
        }
        if cfg.has(Fundamental::FA3) {
            if let Some(e) = s.elements().find(|&e| !checks::union_holds(s, cfg, e)) {
                return Some(Failure::at(SchemaId::Fundamental(Fundamental::FA3), e));
            }
        }
        if !self.binary.is_empty() {
            let mut relations: Vec<(usize, Vec<ElemSet>)> = Vec::new();
            for (i, c) in self.binary.iter().enumerate() {
                let rel = c.relation(s, cfg.philosophy);
                if checks::is_functional(&rel) && !relations.iter().any(|(_, r)| *r == rel) {
                    relations.push((i, rel));
                }
            }
            let schema = SchemaId::Image(cfg.fa4, cfg.drop_normal_y);
            for e in s.elements() {
                for (i, rel) in &relations {
                    if !checks::image_holds(s, cfg, e, rel) {
                        return Some(Failure {
                            schema,
                            element: Some(e),
                            formula: Some(*i),
                        });
                    }
                }
            }
        }
        for ea in Eventuality::ALL {
            if !cfg.has_ea(ea) {
                continue;
            }
            let schema = SchemaId::Eventuality(ea);
            match ea {
                Eventuality::EA2 | Eventuality::EA9 => {}
                Eventuality::EA1 => {
                    if !checks::singleton_at_holds(s, cfg) {
                        return Some(Failure::structure(schema));
                    }
                }
                Eventuality::EA3 => {
                    if !checks::non_normal_equipollent(s) {
                        return Some(Failure::structure(schema));
                    }
                }
                _ => {
                    if let Some(e) = s
                        .elements()
                        .find(|&e| !checks::eventuality_holds_at(s, cfg, ea, e))
                    {
                        return Some(Failure::at(schema, e));
                    }
                }
            }
        }
        if let NormalityCondition::Numbered(id) = cfg.nc {
            if let Some(e) = s.elements().find(|&e| !checks::nc_holds_at(s, cfg, id, e)) {
                return Some(Failure::at(SchemaId::Normality(id, cfg.primed), e));
            }
        }
        None
    }

    /// Per-member admissible denotations before any merging.
    fn member_domains(&self, s: &Structure) -> (Vec<ElemSet>, Vec<ElemSet>) {
        let strat_nc = self.cfg.nc == NormalityCondition::Stratified;
        let mut truths = Vec::with_capacity(self.unary.len());
        let mut domains = Vec::with_capacity(self.unary.len());
        for (i, c) in self.unary.iter().enumerate() {
            let truth = c.truth_set(s, self.cfg.philosophy);
            let mut dom: ElemSet = s
                .elements()
                .filter(|&e| {
                    admits(
                        self.cfg.comprehension,
                        s.extension(e),
                        s.is_normal(e),
                        truth,
                        s.universe(),
                    )
                })
                .collect();
            if strat_nc && self.stratified[i] {
                dom = dom.intersection(s.normal_set());
            }
            truths.push(truth);
            domains.push(dom);
        }
        (truths, domains)
    }

    /// Groups of members that must share a denotation, with the merged
    /// domain, or the instance that makes the merge impossible.
    fn groups(&self, s: &Structure) -> Result<(Vec<usize>, Vec<ElemSet>), Failure> {
        let (truths, domains) = self.member_domains(s);
        let cfg = &self.cfg;
        let comp = SchemaId::Comprehension(cfg.comprehension);
        // Unrestricted comprehension domains first, then the stratified
        // restriction.
        for (i, &truth) in truths.iter().enumerate().take(self.unary.len()) {
            let raw_empty = !s.elements().any(|e| {
                admits(
                    cfg.comprehension,
                    s.extension(e),
                    s.is_normal(e),
                    truth,
                    s.universe(),
                )
            });
            if raw_empty {
                return Err(Failure::formula(comp, i));
            }
        }
        if let Some(i) = domains.iter().position(|d| d.is_empty()) {
            return Err(Failure::formula(SchemaId::StratifiedNormal, i));
        }
        let ea2 = cfg.has_ea(Eventuality::EA2);
        let mut group_of = vec![0usize; self.unary.len()];
        let mut group_domains: Vec<ElemSet> = Vec::new();
        let mut by_truth: BTreeMap<ElemSet, usize> = BTreeMap::new();
        for i in 0..self.unary.len() {
            let existing = if ea2 {
                by_truth.get(&truths[i]).copied()
            } else if self.alpha[i] != i {
                Some(group_of[self.alpha[i]])
            } else {
                None
            };
            match existing {
                Some(g) => {
                    let merged = group_domains[g].intersection(domains[i]);
                    if merged.is_empty() {
                        let schema = if ea2 {
                            SchemaId::Eventuality(Eventuality::EA2)
                        } else {
                            comp
                        };
                        return Err(Failure::formula(schema, i));
                    }
                    group_domains[g] = merged;
                    group_of[i] = g;
                }
                None => {
                    group_of[i] = group_domains.len();
                    by_truth.insert(truths[i], group_domains.len());
                    group_domains.push(domains[i]);
                }
            }
        }
        Ok((group_of, group_domains))
    }

    /// Admissible denotations of each family member on `s`, after merging
    /// members that must share one. `None` when no table exists even before
    /// EA9 is considered.
    pub fn denotation_domains(&self, s: &Structure) -> Option<Vec<ElemSet>> {
        let (group_of, domains) = self.groups(s).ok()?;
        Some(group_of.iter().map(|&g| domains[g]).collect())
    }

    fn solve(&self, s: &Structure) -> Result<Structure, Failure> {
        let (group_of, domains) = self.groups(s)?;
        let mut prefer_normal = vec![false; domains.len()];
        let clauses: Vec<(usize, usize, usize)> = if self.cfg.has_ea(Eventuality::EA9) {
            self.families
                .supplement_of
                .iter()
                .enumerate()
                .map(|(i, &j)| (i, group_of[i], group_of[j]))
                .collect()
        } else {
            Vec::new()
        };
        for &(_, g, h) in &clauses {
            prefer_normal[g] = true;
            prefer_normal[h] = true;
        }
        let chosen: Vec<usize> = domains
            .iter()
            .zip(&prefer_normal)
            .map(|(d, &pref)| {
                let normal = d.intersection(s.normal_set());
                let pick = if pref && !normal.is_empty() {
                    normal
                } else {
                    *d
                };
                pick.first().unwrap_or(0)
            })
            .collect();
        for &(i, g, h) in &clauses {
            if !s.is_normal(chosen[g]) && !s.is_normal(chosen[h]) {
                return Err(Failure::formula(SchemaId::Eventuality(Eventuality::EA9), i));
            }
        }
        let mut model = s.clone();
        for (i, m) in self.families.unary.members.iter().enumerate() {
            let term =
                builder_for(m).map_err(|_| Failure::formula(SchemaId::StratifiedNormal, i))?;
            model.denotations.insert(term, chosen[group_of[i]]);
        }
        Ok(model)
    }

    /// The model with a satisfying table, or the first blocking instance.
    fn check(&self, s: &Structure) -> Result<Structure, Failure> {
        if let Some(f) = self.structural_failure(s) {
            return Err(f);
        }
        self.solve(s)
    }

    /// Whether `s` (designations included, table ignored) is a model.
    pub fn accepts(&self, s: &Structure) -> bool {
        let mut bare = s.clone();
        bare.denotations.clear();
        self.check(&bare).is_ok()
    }

    /// `s` with a satisfying table, if it is a model.
    pub fn model_with_table(&self, s: &Structure) -> Option<Structure> {
        let mut bare = s.clone();
        bare.denotations.clear();
        self.check(&bare).ok()
    }

    /// The instance behind a recorded violation, reconstructed on `s`.
    pub fn violation_instance(
        &self,
        v: &Violation,
        s: &Structure,
    ) -> Result<SchemaInstance, SearchError> {
        let members = &self.families.unary.members;
        let meta = |check| SchemaInstance {
            schema: v.schema,
            source: None,
            payload: Payload::Meta(check),
        };
        Ok(match (v.schema, v.element, v.formula) {
            (SchemaId::Comprehension(c), _, Some(i)) => comprehension_instance(c, &members[i])?,
            (SchemaId::StratifiedNormal, _, Some(i)) => stratified_instance(&members[i])?,
            (SchemaId::Eventuality(Eventuality::EA9), _, Some(i)) => ea9_instance(&members[i])?,
            (SchemaId::Eventuality(Eventuality::EA2), _, Some(i)) => {
                let truths = crate::catalog::truth_sets(&self.cfg, members, s)?;
                let prev = (0..i).rev().find(|&j| truths[j] == truths[i]).unwrap_or(i);
                ea2_instance(&members[prev], &members[i])?
            }
            (SchemaId::Image(..), Some(e), Some(i)) => {
                let relation = self
                    .families
                    .binary
                    .as_ref()
                    .map(|b| b.members[i].clone())
                    .unwrap_or(Formula::Verum);
                SchemaInstance {
                    schema: v.schema,
                    source: Some(relation.clone()),
                    payload: Payload::Meta(MetaCheck::Image {
                        element: e,
                        relation,
                    }),
                }
            }
            (SchemaId::Fundamental(Fundamental::FA1), _, _) => SchemaInstance {
                schema: v.schema,
                source: None,
                payload: Payload::Closed(Formula::normal(crate::syntax::Term::Const(Constant::Om))),
            },
            (_, Some(e), _) => meta(MetaCheck::Element(e)),
            _ => meta(MetaCheck::Structure),
        })
    }

    /// Every axiom instance on `s`, for inspection.
    pub fn instances(&self, s: &Structure) -> Result<Vec<SchemaInstance>, SearchError> {
        Ok(list_axiom_instances(&self.cfg, &self.families, s)?)
    }

    /// Runs the search over all candidates of size `n`.
    pub fn run(&self, n: usize, opts: &SearchOptions) -> Result<Verdict, SearchError> {
        check_size(n)?;
        let total = relation_count(n);
        let chunks = chunk_ranges(total, opts.workers);
        let work = |range: &std::ops::Range<u64>| self.run_chunk(n, range.clone(), opts);
        let results: Vec<ChunkResult> = if opts.workers <= 1 || chunks.len() == 1 {
            chunks.iter().map(work).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.workers)
                .build()
                .map_err(|e| SearchError::Workers(e.to_string()))?;
            pool.install(|| chunks.par_iter().map(work).collect())
        };
        let mut verdict = Verdict {
            config: self.cfg.clone(),
            size: n,
            candidates: 0,
            model_count: 0,
            witnesses: Vec::new(),
            violations: Vec::new(),
            not_evaluated: not_evaluated(&self.cfg, &self.families),
        };
        for r in results {
            let offset = verdict.candidates;
            verdict
                .violations
                .extend(r.violations.into_iter().map(|mut v| {
                    v.candidate += offset;
                    v
                }));
            verdict.candidates += r.candidates;
            verdict.model_count += r.models;
            for w in r.witnesses {
                if opts
                    .witness_cap
                    .is_none_or(|cap| verdict.witnesses.len() < cap)
                {
                    verdict.witnesses.push(w);
                }
            }
        }
        Ok(verdict)
    }

    fn run_chunk(
        &self,
        n: usize,
        codes: std::ops::Range<u64>,
        opts: &SearchOptions,
    ) -> ChunkResult {
        let mut out = ChunkResult::default();
        for_each_in_range(n, codes, &self.constraints, |s| {
            let index = out.candidates;
            out.candidates += 1;
            match self.check(&s) {
                Ok(model) => {
                    out.models += 1;
                    if opts.witness_cap.is_none_or(|cap| out.witnesses.len() < cap) {
                        out.witnesses.push(model);
                    }
                }
                Err(f) => {
                    if opts.record_violations {
                        out.violations.push(Violation {
                            candidate: index,
                            schema: f.schema,
                            element: f.element,
                            formula: f.formula,
                        });
                    }
                }
            }
        });
        out
    }
}

#[derive(Default)]
struct ChunkResult {
    candidates: u64,
    models: u64,
    witnesses: Vec<Structure>,
    violations: Vec<Violation>,
}

fn chunk_ranges(total: u64, workers: usize) -> Vec<std::ops::Range<u64>> {
    let pieces = if workers <= 1 {
        1
    } else {
        (workers as u64 * 8).min(total)
    };
    let step = total.div_ceil(pieces);
    (0..pieces)
        .map(|i| i * step..((i + 1) * step).min(total))
        .filter(|r| !r.is_empty())
        .collect()
}

/// Searches all candidates of size `n` for models of `cfg` with the family
/// of its configured depth.
pub fn find_models(
    cfg: &SystemConfig,
    n: usize,
    opts: &SearchOptions,
) -> Result<Verdict, SearchError> {
    Searcher::new(cfg)?.run(n, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::preset;

    fn small(cfg: SystemConfig) -> SystemConfig {
        SystemConfig {
            family_depth: 0,
            ..cfg
        }
    }

    #[test]
    fn bare_rabadi_accepts_something_at_size_one() {
        let v = find_models(
            &small(SystemConfig::default()),
            1,
            &SearchOptions::default(),
        )
        .unwrap();
        // n=1 extensional: E=0 or E=1, two labels each.
        assert_eq!(v.candidates, 4);
        assert!(v.model_count > 0);
        for w in &v.witnesses {
            assert_eq!(w.denotations.len(), 5);
        }
    }

    #[test]
    fn naive_with_russell_has_no_models() {
        let cfg = SystemConfig {
            comprehension: crate::catalog::Comprehension::Naive,
            ..SystemConfig::default()
        };
        for n in 1..=3 {
            let v = find_models(&cfg, n, &SearchOptions::default()).unwrap();
            assert_eq!(v.model_count, 0, "n={n}");
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = preset("NAM1a").unwrap();
        let seq = find_models(&cfg, 3, &SearchOptions::default()).unwrap();
        let par = find_models(
            &cfg,
            3,
            &SearchOptions {
                workers: 4,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq.model_count, par.model_count);
        assert_eq!(seq.candidates, par.candidates);
        assert_eq!(seq.violations, par.violations);
        let a: Vec<String> = seq.witnesses.iter().map(|s| s.to_string()).collect();
        let b: Vec<String> = par.witnesses.iter().map(|s| s.to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn every_failure_is_recorded_once() {
        let cfg = preset("NAM2c").unwrap();
        let v = find_models(&small(cfg), 2, &SearchOptions::default()).unwrap();
        assert_eq!(v.violations.len() as u64 + v.model_count, v.candidates);
    }
}
