use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Term};

impl Term {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Builder(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Builder(v, body) => {
                out.insert(v.clone());
                body.collect_all_vars(out);
            }
        }
    }

    /// Capture-avoiding substitution of `t` for free occurrences of `v`.
    pub fn substitute(&self, v: &str, t: &Term) -> Term {
        match self {
            Term::Var(w) if w == v => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Builder(w, body) => {
                let (w, body) = subst_binder(w, body, v, t);
                Term::Builder(w, Box::new(body))
            }
        }
    }

    pub fn supplement(&self) -> Term {
        match self {
            Term::Builder(v, body) => Term::Builder(v.clone(), Box::new(body.supplement())),
            _ => self.clone(),
        }
    }

    pub fn dualize(&self) -> Term {
        match self {
            Term::Builder(v, body) => Term::Builder(v.clone(), Box::new(body.dualize())),
            _ => self.clone(),
        }
    }

    fn rename_bound(&self, used: &mut BTreeSet<String>, map: &mut Vec<(String, String)>) -> Term {
        match self {
            Term::Var(v) => match map.iter().rev().find(|(from, _)| from == v) {
                Some((_, to)) => Term::Var(to.clone()),
                None => self.clone(),
            },
            Term::Const(_) => self.clone(),
            Term::Builder(v, body) => {
                let to = claim(v, used);
                map.push((v.clone(), to.clone()));
                let body = body.rename_bound(used, map);
                map.pop();
                Term::Builder(to, Box::new(body))
            }
        }
    }

    fn canonical(&self, next: &mut usize, map: &mut Vec<(String, String)>) -> Term {
        match self {
            Term::Var(v) => match map.iter().rev().find(|(from, _)| from == v) {
                Some((_, to)) => Term::Var(to.clone()),
                None => self.clone(),
            },
            Term::Const(_) => self.clone(),
            Term::Builder(v, body) => {
                let to = format!("%{next}");
                *next += 1;
                map.push((v.clone(), to.clone()));
                let body = body.canonical_with(next, map);
                map.pop();
                Term::Builder(to, Box::new(body))
            }
        }
    }
}

/// A representative of the alpha-equivalence class of `t`: every binder is
/// renamed positionally to a name outside the surface grammar. Two terms are
/// alpha-equivalent iff their canonical forms are equal.
pub fn canonical_term(t: &Term) -> Term {
    t.canonical(&mut 0, &mut Vec::new())
}

/// First name of the form `base`, `base1`, `base2`, ... not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded name supply")
}

fn claim(v: &str, used: &mut BTreeSet<String>) -> String {
    let name = fresh_name(v, used);
    used.insert(name.clone());
    name
}

fn subst_binder(w: &str, body: &Formula, v: &str, t: &Term) -> (String, Formula) {
    if w == v {
        return (w.to_string(), body.clone());
    }
    let t_free = t.free_vars();
    if t_free.contains(w) && body.free_vars().contains(v) {
        let mut avoid = t_free;
        body.collect_all_vars(&mut avoid);
        avoid.insert(v.to_string());
        let fresh = fresh_name(w, &avoid);
        let renamed = body.substitute(w, &Term::Var(fresh.clone()));
        (fresh, renamed.substitute(v, t))
    } else {
        (w.to_string(), body.substitute(v, t))
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Verum | Formula::Falsum => {}
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Normal(t) => t.collect_free(bound, out),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Verum | Formula::Falsum => {}
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Formula::Normal(t) => t.collect_all_vars(out),
            Formula::Not(f) => f.collect_all_vars(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                out.insert(v.clone());
                f.collect_all_vars(out);
            }
        }
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of `v`.
    /// Binders that would capture a free variable of `t` are renamed.
    pub fn substitute(&self, v: &str, t: &Term) -> Formula {
        match self {
            Formula::Verum | Formula::Falsum => self.clone(),
            Formula::Member(a, b) => Formula::Member(a.substitute(v, t), b.substitute(v, t)),
            Formula::Equal(a, b) => Formula::Equal(a.substitute(v, t), b.substitute(v, t)),
            Formula::Normal(a) => Formula::Normal(a.substitute(v, t)),
            Formula::Not(f) => Formula::not(f.substitute(v, t)),
            Formula::And(a, b) => Formula::and(a.substitute(v, t), b.substitute(v, t)),
            Formula::Or(a, b) => Formula::or(a.substitute(v, t), b.substitute(v, t)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(v, t), b.substitute(v, t)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(v, t), b.substitute(v, t)),
            Formula::Forall(w, body) => {
                let (w, body) = subst_binder(w, body, v, t);
                Formula::forall(w, body)
            }
            Formula::Exists(w, body) => {
                let (w, body) = subst_binder(w, body, v, t);
                Formula::exists(w, body)
            }
        }
    }

    /// Renames bound variables so that every binder is distinct from every
    /// other binder and from the free variables. Names already unique are
    /// kept, so the pass is idempotent.
    pub fn alpha_normalize(&self) -> Formula {
        let mut used = self.free_vars();
        self.rename_bound(&mut used, &mut Vec::new())
    }

    fn rename_bound(
        &self,
        used: &mut BTreeSet<String>,
        map: &mut Vec<(String, String)>,
    ) -> Formula {
        let rb = |f: &Formula, used: &mut BTreeSet<String>, map: &mut Vec<(String, String)>| {
            f.rename_bound(used, map)
        };
        match self {
            Formula::Verum | Formula::Falsum => self.clone(),
            Formula::Member(a, b) => {
                let a = a.rename_bound(used, map);
                Formula::Member(a, b.rename_bound(used, map))
            }
            Formula::Equal(a, b) => {
                let a = a.rename_bound(used, map);
                Formula::Equal(a, b.rename_bound(used, map))
            }
            Formula::Normal(t) => Formula::Normal(t.rename_bound(used, map)),
            Formula::Not(f) => Formula::not(rb(f, used, map)),
            Formula::And(a, b) => {
                let a = rb(a, used, map);
                Formula::and(a, rb(b, used, map))
            }
            Formula::Or(a, b) => {
                let a = rb(a, used, map);
                Formula::or(a, rb(b, used, map))
            }
            Formula::Implies(a, b) => {
                let a = rb(a, used, map);
                Formula::implies(a, rb(b, used, map))
            }
            Formula::Iff(a, b) => {
                let a = rb(a, used, map);
                Formula::iff(a, rb(b, used, map))
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                let to = claim(v, used);
                map.push((v.clone(), to.clone()));
                let body = rb(f, used, map);
                map.pop();
                if matches!(self, Formula::Forall(..)) {
                    Formula::forall(to, body)
                } else {
                    Formula::exists(to, body)
                }
            }
        }
    }

    fn canonical_with(&self, next: &mut usize, map: &mut Vec<(String, String)>) -> Formula {
        match self {
            Formula::Verum | Formula::Falsum => self.clone(),
            Formula::Member(a, b) => {
                let a = a.canonical(next, map);
                Formula::Member(a, b.canonical(next, map))
            }
            Formula::Equal(a, b) => {
                let a = a.canonical(next, map);
                Formula::Equal(a, b.canonical(next, map))
            }
            Formula::Normal(t) => Formula::Normal(t.canonical(next, map)),
            Formula::Not(f) => Formula::not(f.canonical_with(next, map)),
            Formula::And(a, b) => {
                let a = a.canonical_with(next, map);
                Formula::and(a, b.canonical_with(next, map))
            }
            Formula::Or(a, b) => {
                let a = a.canonical_with(next, map);
                Formula::or(a, b.canonical_with(next, map))
            }
            Formula::Implies(a, b) => {
                let a = a.canonical_with(next, map);
                Formula::implies(a, b.canonical_with(next, map))
            }
            Formula::Iff(a, b) => {
                let a = a.canonical_with(next, map);
                Formula::iff(a, b.canonical_with(next, map))
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                let to = format!("%{next}");
                *next += 1;
                map.push((v.clone(), to.clone()));
                let body = f.canonical_with(next, map);
                map.pop();
                if matches!(self, Formula::Forall(..)) {
                    Formula::forall(to, body)
                } else {
                    Formula::exists(to, body)
                }
            }
        }
    }

    /// Counter-valuation: every membership atom `a in b` becomes `~(a in b)`
    /// and every negated membership `~(a in b)` becomes `a in b`, including
    /// inside set-builder bodies.
    pub fn supplement(&self) -> Formula {
        match self {
            Formula::Member(a, b) => Formula::not(Formula::Member(a.supplement(), b.supplement())),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Member(a, b) => Formula::Member(a.supplement(), b.supplement()),
                other => Formula::not(other.supplement()),
            },
            Formula::Verum | Formula::Falsum => self.clone(),
            Formula::Equal(a, b) => Formula::Equal(a.supplement(), b.supplement()),
            Formula::Normal(t) => Formula::Normal(t.supplement()),
            Formula::And(a, b) => Formula::and(a.supplement(), b.supplement()),
            Formula::Or(a, b) => Formula::or(a.supplement(), b.supplement()),
            Formula::Implies(a, b) => Formula::implies(a.supplement(), b.supplement()),
            Formula::Iff(a, b) => Formula::iff(a.supplement(), b.supplement()),
            Formula::Forall(v, f) => Formula::forall(v.clone(), f.supplement()),
            Formula::Exists(v, f) => Formula::exists(v.clone(), f.supplement()),
        }
    }

    /// Swaps `&`/`|` and `A`/`E` everywhere, including set-builder bodies.
    pub fn dualize(&self) -> Formula {
        match self {
            Formula::Verum | Formula::Falsum => self.clone(),
            Formula::Member(a, b) => Formula::Member(a.dualize(), b.dualize()),
            Formula::Equal(a, b) => Formula::Equal(a.dualize(), b.dualize()),
            Formula::Normal(t) => Formula::Normal(t.dualize()),
            Formula::Not(f) => Formula::not(f.dualize()),
            Formula::And(a, b) => Formula::or(a.dualize(), b.dualize()),
            Formula::Or(a, b) => Formula::and(a.dualize(), b.dualize()),
            Formula::Implies(a, b) => Formula::implies(a.dualize(), b.dualize()),
            Formula::Iff(a, b) => Formula::iff(a.dualize(), b.dualize()),
            Formula::Forall(v, f) => Formula::exists(v.clone(), f.dualize()),
            Formula::Exists(v, f) => Formula::forall(v.clone(), f.dualize()),
        }
    }

    /// Renames free variables according to `map` (no capture checks; the
    /// targets must be fresh for the formula).
    pub fn rename_free(&self, map: &BTreeMap<String, String>) -> Formula {
        map.iter().fold(self.clone(), |f, (from, to)| {
            f.substitute(from, &Term::Var(to.clone()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term, russell_term};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn free_vars_of_membership() {
        let fv = p("x in y").free_vars();
        assert_eq!(fv, ["x", "y"].iter().map(|s| s.to_string()).collect());
        assert!(p("A x. E y. x in y").free_vars().is_empty());
        assert_eq!(p("{z|z in w} in x").free_vars().len(), 2);
    }

    #[test]
    fn substitute_russell_term() {
        let f = p("x in x").substitute("x", &russell_term());
        assert_eq!(f, Formula::member(russell_term(), russell_term()));
        assert_eq!(f.to_string(), "{x|~(x in x)} in {x|~(x in x)}");
    }

    #[test]
    fn substitution_avoids_capture() {
        let f = p("A x. x in y");
        let g = f.substitute("y", &Term::var("x"));
        match &g {
            Formula::Forall(v, body) => {
                assert_ne!(v, "x");
                assert_eq!(
                    **body,
                    Formula::member(Term::var(v.clone()), Term::var("x"))
                );
            }
            other => panic!("unexpected {other}"),
        }
        assert_eq!(g.free_vars(), ["x".to_string()].into_iter().collect());
    }

    #[test]
    fn substitution_stops_at_rebinding() {
        let f = p("A y. y in y");
        assert_eq!(f.substitute("y", &Term::var("z")), f);
        let t = parse_term("{y|y in x}").unwrap();
        assert_eq!(t.substitute("y", &Term::var("q")), t);
    }

    #[test]
    fn closed_substitution_removes_variable() {
        let f = p("x in y & E z. z in x");
        let g = f.substitute("x", &russell_term());
        let mut expected = f.free_vars();
        expected.remove("x");
        assert_eq!(g.free_vars(), expected);
    }

    #[test]
    fn alpha_normalize_uniquifies() {
        let f = p("(A y. y in x) & (E y. x in y) & A x. x = x");
        let g = f.alpha_normalize();
        let mut binders = Vec::new();
        fn collect(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::Forall(v, b) | Formula::Exists(v, b) => {
                    out.push(v.clone());
                    collect(b, out);
                }
                Formula::And(a, b) => {
                    collect(a, out);
                    collect(b, out);
                }
                _ => {}
            }
        }
        collect(&g, &mut binders);
        let uniq: BTreeSet<_> = binders.iter().cloned().collect();
        assert_eq!(uniq.len(), binders.len());
        assert!(!uniq.contains("x"));
        assert_eq!(g.alpha_normalize(), g);
    }

    #[test]
    fn canonical_identifies_alpha_variants() {
        let a = parse_term("{x|~(x in x)}").unwrap();
        let b = parse_term("{q|~(q in q)}").unwrap();
        assert_eq!(canonical_term(&a), canonical_term(&b));
        let c = parse_term("{q|~(q in US)}").unwrap();
        assert_ne!(canonical_term(&a), canonical_term(&c));
    }

    #[test]
    fn supplement_examples() {
        assert_eq!(p("x in x").supplement(), p("~(x in x)"));
        assert_eq!(p("x in x").supplement().supplement(), p("x in x"));
        assert_eq!(p("T").supplement(), p("T"));
        assert_eq!(
            p("A y. (y in x & x = y)").supplement(),
            p("A y. (~(y in x) & x = y)")
        );
    }

    #[test]
    fn dualize_example() {
        assert_eq!(
            p("A y. (y in x & y in z)").dualize(),
            p("E y. (y in x | y in z)")
        );
    }

    #[test]
    fn fresh_names() {
        let avoid: BTreeSet<String> = ["y", "y1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_name("y", &avoid), "y2");
        assert_eq!(fresh_name("z", &avoid), "z");
    }
}
