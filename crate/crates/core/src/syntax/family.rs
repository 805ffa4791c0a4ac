//! Bounded-depth enumeration of formula families.
//!
//! Families stand in for "every wff A" at desk scale. Members are built from
//! atoms over the variables in scope (and optionally the three constants)
//! with a fixed set of reductions:
//!
//! - `&` and `|` are commutative: only `(a & b)` with `a <= b` in the
//!   structural order of [`Formula`] is kept.
//! - Double negation is eliminated: `~` is never applied to a negation.
//!
//! No other identifications are made. Quantifier bodies may ignore their
//! bound variable. Set-builder terms are not generated; a family member that
//! needed one would be a parametric builder with no finite denotation.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Constant, Formula, Term};

/// Largest accepted family depth.
pub const FAMILY_DEPTH_CAP: usize = 2;

const VARIABLE_POOL: [&str; 8] = ["x", "y", "z", "w", "u", "v", "s", "r"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family depth {requested} exceeds the cap of {cap}")]
    DepthCap { requested: usize, cap: usize },
}

/// All formulas up to `depth` whose free variables lie among the first
/// `arity` names of `variables`, in deterministic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaFamily {
    pub depth: usize,
    pub allow_constants: bool,
    /// Free variables first (`arity` of them), then the bound-variable pool.
    pub variables: Vec<String>,
    pub arity: usize,
    pub members: Vec<Formula>,
}

impl FormulaFamily {
    /// The designated free variable of a unary family (`x`).
    pub fn free_variable(&self) -> &str {
        &self.variables[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// A unary family with hand-picked members, e.g. `{~(x in x)}`.
    pub fn from_members(members: Vec<Formula>) -> FormulaFamily {
        let depth = members.iter().map(Formula::depth).max().unwrap_or(0);
        let allow_constants = members.iter().any(|m| !m.constants().is_empty());
        FormulaFamily {
            depth,
            allow_constants,
            variables: VARIABLE_POOL.iter().map(|s| s.to_string()).collect(),
            arity: 1,
            members,
        }
    }

    /// Adds members not already present, keeping the existing order.
    pub fn extend_with(&mut self, extra: impl IntoIterator<Item = Formula>) {
        let mut seen: BTreeSet<Formula> = self.members.iter().cloned().collect();
        for f in extra {
            if seen.insert(f.clone()) {
                self.depth = self.depth.max(f.depth());
                if !f.constants().is_empty() {
                    self.allow_constants = true;
                }
                self.members.push(f);
            }
        }
    }

    /// The family closed under the supplement transform.
    pub fn with_supplements(&self) -> FormulaFamily {
        let mut out = self.clone();
        out.extend_with(self.members.iter().map(Formula::supplement));
        out
    }
}

/// One-free-variable family over `x`. Members have free variables within
/// `{x}`; `T` and `F` are included as the constant predicates.
pub fn enumerate_family(depth: usize, allow_constants: bool) -> Result<FormulaFamily, FamilyError> {
    build(depth, allow_constants, 1)
}

/// Two-free-variable family over `x` (input) and `y` (output), used for the
/// image-set axioms.
pub fn enumerate_binary_family(
    depth: usize,
    allow_constants: bool,
) -> Result<FormulaFamily, FamilyError> {
    build(depth, allow_constants, 2)
}

fn build(depth: usize, allow_constants: bool, arity: usize) -> Result<FormulaFamily, FamilyError> {
    if depth > FAMILY_DEPTH_CAP {
        return Err(FamilyError::DepthCap {
            requested: depth,
            cap: FAMILY_DEPTH_CAP,
        });
    }
    let members = generate(arity, depth, allow_constants);
    Ok(FormulaFamily {
        depth,
        allow_constants,
        variables: VARIABLE_POOL.iter().map(|s| s.to_string()).collect(),
        arity,
        members,
    })
}

fn atoms(scope: usize, allow_constants: bool) -> Vec<Formula> {
    let mut terms: Vec<Term> = VARIABLE_POOL[..scope]
        .iter()
        .map(|v| Term::var(*v))
        .collect();
    if allow_constants {
        terms.extend(Constant::ALL.into_iter().map(Term::Const));
    }
    let mut out = vec![Formula::Verum, Formula::Falsum];
    for a in &terms {
        for b in &terms {
            out.push(Formula::member(a.clone(), b.clone()));
        }
    }
    for a in &terms {
        for b in &terms {
            out.push(Formula::equal(a.clone(), b.clone()));
        }
    }
    out.extend(terms.iter().cloned().map(Formula::normal));
    out
}

/// Formulas of depth <= `depth` with free variables among the first `scope`
/// pool variables. Each level lists the previous level first, then the new
/// formulas, so lower-depth families are prefixes of higher ones.
fn generate(scope: usize, depth: usize, allow_constants: bool) -> Vec<Formula> {
    if depth == 0 {
        return atoms(scope, allow_constants);
    }
    let prev = generate(scope, depth - 1, allow_constants);
    let bound = VARIABLE_POOL[scope];
    let inner = generate(scope + 1, depth - 1, allow_constants);

    let mut seen: BTreeSet<Formula> = prev.iter().cloned().collect();
    let mut out = prev.clone();
    let mut push = |f: Formula, out: &mut Vec<Formula>| {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    };
    for f in &prev {
        if !matches!(f, Formula::Not(_)) {
            push(Formula::not(f.clone()), &mut out);
        }
    }
    for (i, a) in prev.iter().enumerate() {
        for b in &prev[i..] {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            push(Formula::and(lo.clone(), hi.clone()), &mut out);
        }
    }
    for (i, a) in prev.iter().enumerate() {
        for b in &prev[i..] {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            push(Formula::or(lo.clone(), hi.clone()), &mut out);
        }
    }
    for a in &prev {
        for b in &prev {
            push(Formula::implies(a.clone(), b.clone()), &mut out);
        }
    }
    for a in &prev {
        for b in &prev {
            push(Formula::iff(a.clone(), b.clone()), &mut out);
        }
    }
    for body in &inner {
        push(Formula::forall(bound, body.clone()), &mut out);
    }
    for body in &inner {
        push(Formula::exists(bound, body.clone()), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::russell_body;

    #[test]
    fn depth_zero_has_five_atoms() {
        let fam = enumerate_family(0, false).unwrap();
        let shown: Vec<String> = fam.members.iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["T", "F", "x in x", "x = x", "N(x)"]);
    }

    #[test]
    fn depth_one_contains_russell_body() {
        let fam = enumerate_family(1, false).unwrap();
        assert!(fam.members.contains(&russell_body()));
        // 5 atoms, 5 negations, 15 + 15 commutative pairs, 25 + 25 ordered
        // pairs, 12 + 12 quantified atoms over {x, y}.
        assert_eq!(fam.len(), 114);
    }

    #[test]
    fn members_have_only_the_designated_free_variable() {
        let fam = enumerate_family(1, true).unwrap();
        for m in &fam.members {
            assert!(m.free_vars().iter().all(|v| v == "x"), "{m}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_family(3, false),
            Err(FamilyError::DepthCap {
                requested: 3,
                cap: FAMILY_DEPTH_CAP
            })
        );
    }

    #[test]
    fn no_double_negation() {
        let fam = enumerate_family(2, false).unwrap();
        for m in &fam.members {
            if let Formula::Not(inner) = m {
                assert!(!matches!(**inner, Formula::Not(_)));
            }
        }
    }

    #[test]
    fn binary_family_atoms() {
        let fam = enumerate_binary_family(0, false).unwrap();
        assert_eq!(fam.len(), 12);
        assert_eq!(fam.arity, 2);
    }
}
