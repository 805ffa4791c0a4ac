//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nam_core::catalog::{builder_for, list_axiom_instances, Families, SystemConfig};
use nam_core::semantics::Structure;
use nam_core::syntax::{canonical_term, Formula, Term};

/// Every denotation table (one element per distinct builder of the family)
/// under which all listed instances hold.
pub fn brute_tables(cfg: &SystemConfig, families: &Families, s: &Structure) -> Vec<Structure> {
    let mut keys: Vec<Term> = Vec::new();
    let mut seen = BTreeSet::new();
    for m in &families.unary.members {
        let t = builder_for(m).unwrap();
        if seen.insert(canonical_term(&t)) {
            keys.push(t);
        }
    }
    let instances = list_axiom_instances(cfg, families, s).unwrap();
    let n = s.size();
    let tables = (n as u64).pow(keys.len() as u32);
    (0..tables)
        .filter_map(|mut code| {
            let mut t = s.clone();
            for k in &keys {
                t.add_denotation(k.clone(), (code % n as u64) as usize)
                    .unwrap();
                code /= n as u64;
            }
            instances
                .iter()
                .all(|i| i.holds(&t, cfg).unwrap())
                .then_some(t)
        })
        .collect()
}

pub fn brute_accepts(cfg: &SystemConfig, families: &Families, s: &Structure) -> bool {
    !brute_tables(cfg, families, s).is_empty()
}

pub fn collect_atoms(f: &Formula, out: &mut Vec<(Term, Term, i32)>) {
    match f {
        Formula::Member(a, b) => out.push((a.clone(), b.clone(), 1)),
        Formula::Equal(a, b) => out.push((a.clone(), b.clone(), 0)),
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => collect_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        _ => {}
    }
}

pub fn term_key(t: &Term) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::Const(c) => c.to_string(),
        Term::Builder(..) => unreachable!("families have no builders"),
    }
}

/// Tries every map from terms to levels `0..k` (k = number of terms).
pub fn brute_stratified(f: &Formula) -> bool {
    let f = f.alpha_normalize();
    let mut atoms = Vec::new();
    collect_atoms(&f, &mut atoms);
    let names: Vec<String> = atoms
        .iter()
        .flat_map(|(a, b, _)| [term_key(a), term_key(b)])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = names.len().max(1);
    let index: BTreeMap<&String, usize> = names.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let total = (k as u64).pow(names.len() as u32);
    (0..total).any(|mut code| {
        let mut level = vec![0i32; names.len()];
        for l in level.iter_mut() {
            *l = (code % k as u64) as i32;
            code /= k as u64;
        }
        atoms
            .iter()
            .all(|(a, b, d)| level[index[&term_key(b)]] - level[index[&term_key(a)]] == *d)
    })
}

/// A descending chain `e = c0 ∋ c1 ∋ ... ∋ c_len`, found by walking paths.
pub fn has_descending_chain(s: &Structure, e: usize, len: usize) -> bool {
    if len == 0 {
        return true;
    }
    s.extension(e)
        .iter()
        .any(|m| has_descending_chain(s, m, len - 1))
}

/// Whether some function from `a` onto `b` exists, by listing all functions.
pub fn brute_surjection(a: &[usize], b: &[usize]) -> bool {
    if a.is_empty() {
        return b.is_empty();
    }
    let total = (b.len() as u64).pow(a.len() as u32);
    (0..total).any(|mut code| {
        let mut hit = vec![false; b.len()];
        for _ in a {
            hit[(code % b.len() as u64) as usize] = true;
            code /= b.len() as u64;
        }
        hit.iter().all(|h| *h)
    })
}
