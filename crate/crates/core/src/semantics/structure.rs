use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{canonical_term, parse_term, Constant, Term};

/// Largest universe a [`Structure`] can hold.
pub const MAX_ELEMENTS: usize = 64;

/// A set of structure elements, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn full(n: usize) -> ElemSet {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: usize) -> ElemSet {
        ElemSet(1u64 << e)
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u64 << e;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Which elements the constants `US`, `OM`, `AT` name, if any.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Designations(pub [Option<usize>; 3]);

impl Designations {
    pub fn get(&self, c: Constant) -> Option<usize> {
        self.0[c.index()]
    }

    pub fn set(&mut self, c: Constant, e: Option<usize>) {
        self.0[c.index()] = e;
    }
}

/// Set-builder denotations, looked up up to alpha-equivalence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Denotations {
    // canonical form -> (term as inserted, element)
    entries: BTreeMap<Term, (Term, usize)>,
}

impl Denotations {
    pub fn insert(&mut self, term: Term, e: usize) {
        self.entries.insert(canonical_term(&term), (term, e));
    }

    pub fn get(&self, term: &Term) -> Option<usize> {
        self.entries.get(&canonical_term(term)).map(|(_, e)| *e)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Entries in canonical-key order.
    pub fn iter(&self) -> impl Iterator<Item = (&Term, usize)> {
        self.entries.values().map(|(t, e)| (t, *e))
    }
}

/// A finite membership structure.
///
/// `members[b]` is the extension of `b`: the set of `a` with `a in b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    n: usize,
    members: Vec<ElemSet>,
    normal: ElemSet,
    pub designations: Designations,
    pub denotations: Denotations,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("universe size {0} is outside 1..={MAX_ELEMENTS}")]
    Size(usize),
    #[error("element {element} out of range for a universe of size {n}")]
    Element { element: usize, n: usize },
    #[error("malformed structure line: {0}")]
    Malformed(String),
}

impl Structure {
    /// `n` elements, empty membership, nothing Normal.
    pub fn new(n: usize) -> Result<Structure, StructureError> {
        if n == 0 || n > MAX_ELEMENTS {
            return Err(StructureError::Size(n));
        }
        Ok(Structure {
            n,
            members: vec![ElemSet::EMPTY; n],
            normal: ElemSet::EMPTY,
            designations: Designations::default(),
            denotations: Denotations::default(),
        })
    }

    /// Builds from extensions given per element.
    pub fn from_extensions(
        extensions: Vec<ElemSet>,
        normal: ElemSet,
    ) -> Result<Structure, StructureError> {
        let n = extensions.len();
        let mut s = Structure::new(n)?;
        let universe = ElemSet::full(n);
        for (e, ext) in extensions.iter().enumerate() {
            if !ext.is_subset(universe) {
                return Err(StructureError::Element {
                    element: ext.difference(universe).first().unwrap_or(0),
                    n,
                });
            }
            s.members[e] = *ext;
        }
        if !normal.is_subset(universe) {
            return Err(StructureError::Element {
                element: normal.difference(universe).first().unwrap_or(0),
                n,
            });
        }
        s.normal = normal;
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// `a in b`.
    pub fn member(&self, a: usize, b: usize) -> bool {
        self.members[b].contains(a)
    }

    pub fn set_member(&mut self, a: usize, b: usize, value: bool) {
        if value {
            self.members[b].insert(a);
        } else {
            self.members[b] = self.members[b].difference(ElemSet::singleton(a));
        }
    }

    pub fn extension(&self, e: usize) -> ElemSet {
        self.members[e]
    }

    pub fn extensions(&self) -> &[ElemSet] {
        &self.members
    }

    pub fn is_normal(&self, e: usize) -> bool {
        self.normal.contains(e)
    }

    pub fn normal_set(&self) -> ElemSet {
        self.normal
    }

    pub fn set_normal(&mut self, e: usize, value: bool) {
        if value {
            self.normal.insert(e);
        } else {
            self.normal = self.normal.difference(ElemSet::singleton(e));
        }
    }

    pub fn designate(&mut self, c: Constant, e: usize) -> Result<(), StructureError> {
        self.check(e)?;
        self.designations.set(c, Some(e));
        Ok(())
    }

    pub fn add_denotation(&mut self, term: Term, e: usize) -> Result<(), StructureError> {
        self.check(e)?;
        self.denotations.insert(term, e);
        Ok(())
    }

    fn check(&self, e: usize) -> Result<(), StructureError> {
        if e < self.n {
            Ok(())
        } else {
            Err(StructureError::Element {
                element: e,
                n: self.n,
            })
        }
    }

    /// No two distinct elements share an extension.
    pub fn is_extensional(&self) -> bool {
        distinct(self.members.iter().copied())
    }

    /// No two distinct elements share both extension and Normal flag; the
    /// structure invariant under equality-as-(DefEq).
    pub fn is_quotiented(&self) -> bool {
        distinct((0..self.n).map(|e| (self.members[e], self.is_normal(e))))
    }
}

fn distinct<T: Ord>(items: impl Iterator<Item = T>) -> bool {
    let mut v: Vec<T> = items.collect();
    let len = v.len();
    v.sort();
    v.dedup();
    v.len() == len
}

fn bits(set: ElemSet, n: usize) -> String {
    (0..n)
        .map(|i| if set.contains(i) { '1' } else { '0' })
        .collect()
}

/// Line format:
/// `n=<int>;E=<row-major 0/1, n*n>;N=<0/1, n>;des=US:<i|->,OM:<i|->,AT:<i|->;den=<term>:<i>(,...)`
/// where row `a`, column `b` of `E` is `a in b`.
impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};E=", self.n)?;
        for a in 0..self.n {
            for b in 0..self.n {
                f.write_str(if self.member(a, b) { "1" } else { "0" })?;
            }
        }
        write!(f, ";N={};des=", bits(self.normal, self.n))?;
        for (i, c) in Constant::ALL.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match self.designations.get(*c) {
                Some(e) => write!(f, "{c}:{e}")?,
                None => write!(f, "{c}:-")?,
            }
        }
        f.write_str(";den=")?;
        for (i, (t, e)) in self.denotations.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}:{e}")?;
        }
        Ok(())
    }
}

impl FromStr for Structure {
    type Err = StructureError;

    fn from_str(line: &str) -> Result<Structure, StructureError> {
        let bad = |what: &str| StructureError::Malformed(what.to_string());
        let mut fields = line.trim().splitn(5, ';');
        let mut field = |key: &str| -> Result<&str, StructureError> {
            let raw = fields
                .next()
                .ok_or_else(|| bad(&format!("missing field {key}")))?;
            raw.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| bad(&format!("expected field {key}, found '{raw}'")))
        };
        let n: usize = field("n")?
            .parse()
            .map_err(|_| bad("n is not an integer"))?;
        let mut s = Structure::new(n)?;
        let e = field("E")?;
        if e.len() != n * n {
            return Err(bad(&format!(
                "E has length {}, expected {}",
                e.len(),
                n * n
            )));
        }
        for (i, ch) in e.chars().enumerate() {
            match ch {
                '1' => s.set_member(i / n, i % n, true),
                '0' => {}
                _ => return Err(bad("E must be a 0/1 string")),
            }
        }
        let normal = field("N")?;
        if normal.len() != n {
            return Err(bad(&format!("N has length {}, expected {n}", normal.len())));
        }
        for (i, ch) in normal.chars().enumerate() {
            match ch {
                '1' => s.set_normal(i, true),
                '0' => {}
                _ => return Err(bad("N must be a 0/1 string")),
            }
        }
        let des = field("des")?;
        for part in des.split(',').filter(|p| !p.is_empty()) {
            let (tag, value) = part
                .split_once(':')
                .ok_or_else(|| bad(&format!("designation '{part}'")))?;
            let c = Constant::from_tag(tag).ok_or_else(|| bad(&format!("constant '{tag}'")))?;
            if value != "-" {
                let e: usize = value
                    .parse()
                    .map_err(|_| bad(&format!("element '{value}'")))?;
                s.designate(c, e)?;
            }
        }
        let den = field("den")?;
        // The term grammar has no ',' or ':' so both split unambiguously.
        for part in den.split(',').filter(|p| !p.trim().is_empty()) {
            let (text, value) = part
                .rsplit_once(':')
                .ok_or_else(|| bad(&format!("denotation '{part}'")))?;
            let term = parse_term(text).map_err(|e| bad(&e.to_string()))?;
            let e: usize = value
                .trim()
                .parse()
                .map_err(|_| bad(&format!("element '{value}'")))?;
            s.add_denotation(term, e)?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::russell_term;

    #[test]
    fn elemset_basics() {
        let s: ElemSet = [0, 2].into_iter().collect();
        assert_eq!(s.len(), 2);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(ElemSet::full(4).difference(s), [1, 3].into_iter().collect());
        assert_eq!(ElemSet::full(64).len(), 64);
    }

    #[test]
    fn serialization_round_trip() {
        let mut s = Structure::new(3).unwrap();
        s.set_member(0, 1, true);
        s.set_member(1, 2, true);
        s.set_member(2, 2, true);
        s.set_normal(1, true);
        s.designate(Constant::Us, 2).unwrap();
        s.add_denotation(russell_term(), 2).unwrap();
        s.add_denotation(parse_term("{x|F}").unwrap(), 0).unwrap();
        let line = s.to_string();
        assert_eq!(
            line,
            "n=3;E=010001001;N=010;des=US:2,OM:-,AT:-;den={x|F}:0,{x|~(x in x)}:2"
        );
        let back: Structure = line.parse().unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_string(), line);
    }

    #[test]
    fn exact_line_layout() {
        let mut s = Structure::new(2).unwrap();
        s.set_member(1, 0, true);
        s.set_normal(0, true);
        assert_eq!(s.to_string(), "n=2;E=0010;N=10;des=US:-,OM:-,AT:-;den=");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!("n=2;E=001;N=10;des=;den=".parse::<Structure>().is_err());
        assert!("n=0;E=;N=;des=;den=".parse::<Structure>().is_err());
        assert!("n=1;E=1;N=1;des=US:3;den=".parse::<Structure>().is_err());
        assert!("n=1;E=1;N=1;des=XX:0;den=".parse::<Structure>().is_err());
        assert!("n=1;E=1;N=1".parse::<Structure>().is_err());
    }

    #[test]
    fn denotations_are_alpha_invariant() {
        let mut s = Structure::new(1).unwrap();
        s.add_denotation(parse_term("{q|~(q in q)}").unwrap(), 0)
            .unwrap();
        assert_eq!(s.denotations.get(&russell_term()), Some(0));
    }

    #[test]
    fn quotient_and_extensionality() {
        let s = Structure::from_extensions(
            vec![ElemSet::full(2), ElemSet::full(2)],
            ElemSet::singleton(0),
        )
        .unwrap();
        assert!(!s.is_extensional());
        assert!(s.is_quotiented());
    }
}
