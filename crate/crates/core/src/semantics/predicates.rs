//! Meta-level set operations and element predicates over a structure.
//!
//! Complements, unions, powersets and images are computed as extensions
//! (element sets); [`find_by_ext`] locates an element realizing one, if any.
//! Functions are meta-level maps between extensions, so surjections and
//! equipollence reduce to cardinality comparisons.

use serde::{Deserialize, Serialize};

use super::structure::{ElemSet, Structure};

pub fn ext(s: &Structure, e: usize) -> ElemSet {
    s.extension(e)
}

/// `ko(e)`: the universe minus the extension of `e`.
pub fn complement_ext(s: &Structure, e: usize) -> ElemSet {
    s.universe().difference(s.extension(e))
}

/// The first element (in index order) whose extension is `target` and, if
/// `normal` is given, whose Normal flag matches.
pub fn find_by_ext(s: &Structure, target: ElemSet, normal: Option<bool>) -> Option<usize> {
    s.elements()
        .find(|&e| s.extension(e) == target && normal.is_none_or(|flag| s.is_normal(e) == flag))
}

/// Which reading of the membership hull to use.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum HullMode {
    /// `e` together with everything reachable by descending membership.
    #[default]
    Downward,
    /// The range reading: elements reachable upward from some member of `e`
    /// (members included).
    Literal,
}

/// Elements reachable from `e` by one or more descending steps.
pub fn hull_plus(s: &Structure, e: usize) -> ElemSet {
    let mut reached = s.extension(e);
    loop {
        let next = reached
            .iter()
            .fold(reached, |acc, m| acc.union(s.extension(m)));
        if next == reached {
            return reached;
        }
        reached = next;
    }
}

/// `e*`: `e` with its members, their members, and so on.
pub fn hull(s: &Structure, e: usize) -> ElemSet {
    hull_plus(s, e).union(ElemSet::singleton(e))
}

pub fn hull_with_mode(s: &Structure, e: usize, mode: HullMode) -> ElemSet {
    match mode {
        HullMode::Downward => hull(s, e),
        HullMode::Literal => s
            .extension(e)
            .iter()
            .fold(ElemSet::EMPTY, |acc, z| acc.union(up_closure(s, z))),
    }
}

// {y : z in ... in y}, reflexive.
fn up_closure(s: &Structure, z: usize) -> ElemSet {
    let mut reached = ElemSet::singleton(z);
    loop {
        let next = s
            .elements()
            .filter(|&y| !s.extension(y).intersection(reached).is_empty())
            .fold(reached, |mut acc, y| {
                acc.insert(y);
                acc
            });
        if next == reached {
            return reached;
        }
        reached = next;
    }
}

/// `union(e) = {y : exists z. y in z & z in e}`.
pub fn union_ext(s: &Structure, e: usize) -> ElemSet {
    s.extension(e)
        .iter()
        .fold(ElemSet::EMPTY, |acc, z| acc.union(s.extension(z)))
}

/// `p(e) = {y : ext(y) is a subset of ext(e)}`, optionally restricted to
/// Normal `y`.
pub fn powerset_ext(s: &Structure, e: usize, normal_only: bool) -> ElemSet {
    let base = s.extension(e);
    s.elements()
        .filter(|&y| s.extension(y).is_subset(base) && (!normal_only || s.is_normal(y)))
        .collect()
}

/// Whether some map from `a` onto `b` exists.
pub fn surjection_exists(a: ElemSet, b: ElemSet) -> bool {
    if a.is_empty() || b.is_empty() {
        a.is_empty() && b.is_empty()
    } else {
        a.len() >= b.len()
    }
}

pub fn equipollent(a: ElemSet, b: ElemSet) -> bool {
    a.len() == b.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructuralPredicate {
    Slim,
    Mirimanoff,
    Founded,
    HeriFounded,
    Cantorian,
}

/// Knobs for the element predicates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PredicateOptions {
    pub hull_mode: HullMode,
    /// Read `exists y in x` literally, making the empty set unfounded.
    pub strict_founded: bool,
    pub powerset_normal_only: bool,
}

pub fn structural_predicate(s: &Structure, pred: StructuralPredicate, e: usize) -> bool {
    structural_predicate_with(s, pred, e, &PredicateOptions::default())
}

pub fn structural_predicate_with(
    s: &Structure,
    pred: StructuralPredicate,
    e: usize,
    opts: &PredicateOptions,
) -> bool {
    match pred {
        StructuralPredicate::Slim => slim(s, e),
        StructuralPredicate::Mirimanoff => mirimanoff(s, e),
        StructuralPredicate::Founded => founded(s, e, opts.strict_founded),
        StructuralPredicate::HeriFounded => hull_with_mode(s, e, opts.hull_mode)
            .iter()
            .filter(|&y| !s.extension(y).is_empty())
            .all(|y| founded(s, y, opts.strict_founded)),
        StructuralPredicate::Cantorian => {
            s.extension(e).len() < powerset_ext(s, e, opts.powerset_normal_only).len()
        }
    }
}

/// `card(x) < card(ko(x))`.
pub fn slim(s: &Structure, e: usize) -> bool {
    s.extension(e).len() < complement_ext(s, e).len()
}

/// No infinite descending membership sequence starts at `e`; in a finite
/// structure, no descending path from `e` reaches a cycle.
pub fn mirimanoff(s: &Structure, e: usize) -> bool {
    hull(s, e).iter().all(|y| !hull_plus(s, y).contains(y))
}

/// Some member of `e` is disjoint from `e`. The empty extension counts as
/// founded unless `strict`.
pub fn founded(s: &Structure, e: usize, strict: bool) -> bool {
    let x = s.extension(e);
    if x.is_empty() {
        return !strict;
    }
    x.iter().any(|y| s.extension(y).intersection(x).is_empty())
}
