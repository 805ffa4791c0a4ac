//! Deterministic enumeration of candidate structures.
//!
//! Order: membership relation first, read as the row-major `E` string with
//! its first character most significant; then the Normal labelling, read as
//! the `N` string the same way; then designations, in `US, OM, AT` order with
//! each ranging over element indices ascending.

use crate::semantics::{ElemSet, Structure};
use crate::syntax::Constant;

use super::SearchError;

/// Largest universe the search accepts.
pub const MAX_SEARCH_SIZE: usize = 5;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    /// Skip relations in which two elements share an extension.
    pub extensional_only: bool,
    /// Skip labellings in which two elements share extension and flag.
    pub quotiented: bool,
    /// Constants to designate. `US` ranges only over elements with full
    /// extension; the others over all elements.
    pub designate: Vec<Constant>,
}

pub fn check_size(n: usize) -> Result<(), SearchError> {
    if n == 0 || n > MAX_SEARCH_SIZE {
        Err(SearchError::CapExceeded(format!(
            "universe size {n} is outside 1..={MAX_SEARCH_SIZE}"
        )))
    } else {
        Ok(())
    }
}

/// Number of membership relations on `n` elements.
pub fn relation_count(n: usize) -> u64 {
    1u64 << (n * n)
}

/// Extensions for relation `code`: `E` character `k = a*n + b` (`a in b`)
/// is bit `n*n - 1 - k`.
pub fn decode_relation(n: usize, code: u64) -> Vec<ElemSet> {
    let bits = n * n;
    let mut ext = vec![ElemSet::EMPTY; n];
    for (b, slot) in ext.iter_mut().enumerate() {
        for a in 0..n {
            if code >> (bits - 1 - (a * n + b)) & 1 == 1 {
                slot.insert(a);
            }
        }
    }
    ext
}

fn decode_labels(n: usize, code: u64) -> ElemSet {
    (0..n).filter(|i| code >> (n - 1 - i) & 1 == 1).collect()
}

fn distinct_extensions(ext: &[ElemSet]) -> bool {
    ext.iter()
        .enumerate()
        .all(|(i, a)| ext[i + 1..].iter().all(|b| a != b))
}

fn quotiented(ext: &[ElemSet], normal: ElemSet) -> bool {
    (0..ext.len()).all(|i| {
        (i + 1..ext.len()).all(|j| ext[i] != ext[j] || normal.contains(i) != normal.contains(j))
    })
}

/// Calls `visit` on every candidate with relation code in `codes`, in order.
pub fn for_each_in_range(
    n: usize,
    codes: std::ops::Range<u64>,
    constraints: &Constraints,
    mut visit: impl FnMut(Structure),
) {
    for code in codes {
        let ext = decode_relation(n, code);
        if constraints.extensional_only && !distinct_extensions(&ext) {
            continue;
        }
        for labels in 0..(1u64 << n) {
            let normal = decode_labels(n, labels);
            if constraints.quotiented && !quotiented(&ext, normal) {
                continue;
            }
            let base = match Structure::from_extensions(ext.clone(), normal) {
                Ok(s) => s,
                Err(_) => unreachable!("decoded extensions stay inside the universe"),
            };
            designate(base, &constraints.designate, &mut visit);
        }
    }
}

fn designate(s: Structure, remaining: &[Constant], visit: &mut impl FnMut(Structure)) {
    let Some((&c, rest)) = remaining.split_first() else {
        visit(s);
        return;
    };
    for e in s.elements() {
        if c == Constant::Us && s.extension(e) != s.universe() {
            continue;
        }
        let mut next = s.clone();
        next.designations.set(c, Some(e));
        designate(next, rest, visit);
    }
}

/// All candidates of size `n`, in enumeration order.
pub fn enumerate_structures(
    n: usize,
    constraints: &Constraints,
) -> Result<Vec<Structure>, SearchError> {
    check_size(n)?;
    let mut out = Vec::new();
    for_each_in_range(n, 0..relation_count(n), constraints, |s| out.push(s));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_one_has_four_raw_candidates() {
        let all = enumerate_structures(1, &Constraints::default()).unwrap();
        let lines: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(
            lines,
            [
                "n=1;E=0;N=0;des=US:-,OM:-,AT:-;den=",
                "n=1;E=0;N=1;des=US:-,OM:-,AT:-;den=",
                "n=1;E=1;N=0;des=US:-,OM:-,AT:-;den=",
                "n=1;E=1;N=1;des=US:-,OM:-,AT:-;den=",
            ]
        );
    }

    #[test]
    fn order_follows_the_line_format() {
        let all = enumerate_structures(2, &Constraints::default()).unwrap();
        assert_eq!(all.len(), 64);
        let lines: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
    }

    #[test]
    fn cap() {
        assert!(enumerate_structures(6, &Constraints::default()).is_err());
        assert!(enumerate_structures(0, &Constraints::default()).is_err());
    }

    #[test]
    fn us_designation_needs_a_universal_element() {
        let c = Constraints {
            designate: vec![Constant::Us],
            ..Constraints::default()
        };
        for s in enumerate_structures(2, &c).unwrap() {
            let u = s.designations.get(Constant::Us).unwrap();
            assert_eq!(s.extension(u), s.universe());
        }
    }
}
