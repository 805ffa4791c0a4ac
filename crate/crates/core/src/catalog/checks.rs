//! Meta-level axiom checks on a single structure.
//!
//! Operator results (`ko x`, `p(x)`, `union x`, image sets) are computed as
//! extensions. A consequent `Normal(op x)` holds when some Normal element
//! realizes the extension; when no element realizes it at all the consequent
//! is vacuous, unless `require_closure` is set.

use crate::semantics::predicates::slim;
use crate::semantics::{
    complement_ext, equal_under, equipollent, hull_plus, hull_with_mode, powerset_ext,
    structural_predicate_with, surjection_exists, union_ext, ElemSet, Philosophy,
    StructuralPredicate, Structure,
};
use crate::syntax::Constant;

use super::config::{Eventuality, Extensionality, ImageAxiom, Nc5Mode, SystemConfig};

/// `Normal(op x)` for an operator whose result has extension `target`.
pub fn normal_result(s: &Structure, target: ElemSet, require_closure: bool) -> bool {
    let mut realized = false;
    for e in s.elements() {
        if s.extension(e) == target {
            if s.is_normal(e) {
                return true;
            }
            realized = true;
        }
    }
    !realized && !require_closure
}

/// Like [`normal_result`] but reports "definitely not Normal" only when the
/// result is realized and no realizer is Normal. `None` means unrealized.
fn realized_normal(s: &Structure, target: ElemSet) -> Option<bool> {
    let mut realized = None;
    for e in s.elements() {
        if s.extension(e) == target {
            if s.is_normal(e) {
                return Some(true);
            }
            realized = Some(false);
        }
    }
    realized
}

/// `(A z. (z in x <-> z in y)) -> x = y`, or its Normal-restricted form,
/// for every pair.
pub fn extensionality_holds(s: &Structure, kind: Extensionality, phil: Philosophy) -> bool {
    let mask = match kind {
        Extensionality::Ee => s.universe(),
        Extensionality::Nee => s.normal_set(),
        Extensionality::None => return true,
    };
    let key = |e: usize| s.extension(e).intersection(mask);
    for a in s.elements() {
        for b in a + 1..s.size() {
            if key(a) == key(b) && !equal_under(s, phil, a, b) {
                return false;
            }
        }
    }
    true
}

/// `Normal(x) -> Normal(p(x))`.
pub fn powerset_holds(s: &Structure, cfg: &SystemConfig, e: usize) -> bool {
    !s.is_normal(e)
        || normal_result(
            s,
            powerset_ext(s, e, cfg.powerset_normal_only),
            cfg.require_closure,
        )
}

/// `Normal(x) & A y. (y in x -> Normal(y)) -> Normal(union x)`.
pub fn union_holds(s: &Structure, cfg: &SystemConfig, e: usize) -> bool {
    let x = s.extension(e);
    if !s.is_normal(e) || !x.is_subset(s.normal_set()) {
        return true;
    }
    normal_result(s, union_ext(s, e), cfg.require_closure)
}

pub fn is_functional(relation: &[ElemSet]) -> bool {
    relation.iter().all(|img| img.len() <= 1)
}

/// The image axiom at `e` for a relation given as per-input image sets.
/// Non-functional relations satisfy it vacuously.
pub fn image_holds(s: &Structure, cfg: &SystemConfig, e: usize, relation: &[ElemSet]) -> bool {
    if !s.is_normal(e) || !is_functional(relation) {
        return true;
    }
    let x = s.extension(e);
    let image = x
        .iter()
        .fold(ElemSet::EMPTY, |acc, u| acc.union(relation[u]));
    let normal_or_empty: ElemSet = s
        .elements()
        .filter(|&z| s.is_normal(z) || s.extension(z).is_empty())
        .collect();
    let target = match cfg.fa4 {
        ImageAxiom::None | ImageAxiom::Delta => return true,
        ImageAxiom::Alfa => {
            if image.is_empty() {
                return true;
            }
            image
        }
        ImageAxiom::Beta => {
            if image.is_empty() {
                return true;
            }
            image.intersection(normal_or_empty)
        }
        ImageAxiom::Gamma => image.intersection(s.normal_set()),
        restricted => {
            let domain_ok = match restricted {
                ImageAxiom::Eta => nc1_antecedent(s, e),
                ImageAxiom::Phi => slim(s, e),
                ImageAxiom::Psi => predicate(s, cfg, StructuralPredicate::Mirimanoff, e),
                ImageAxiom::Chi => predicate(s, cfg, StructuralPredicate::Founded, e),
                ImageAxiom::Jota => predicate(s, cfg, StructuralPredicate::HeriFounded, e),
                _ => predicate(s, cfg, StructuralPredicate::Cantorian, e),
            };
            if !domain_ok {
                return true;
            }
            if cfg.drop_normal_y {
                image
            } else {
                image.intersection(s.normal_set())
            }
        }
    };
    normal_result(s, target, cfg.require_closure)
}

fn predicate(s: &Structure, cfg: &SystemConfig, p: StructuralPredicate, e: usize) -> bool {
    structural_predicate_with(s, p, e, &cfg.predicate_options())
}

/// The element playing `@`, if designated.
pub fn at_element(s: &Structure, cfg: &SystemConfig) -> Option<usize> {
    s.designations.get(cfg.at_target)
}

/// EA1: `Normal({@})`. Undesignated `@` makes it vacuous.
pub fn singleton_at_holds(s: &Structure, cfg: &SystemConfig) -> bool {
    match at_element(s, cfg) {
        Some(at) => normal_result(s, ElemSet::singleton(at), cfg.require_closure),
        None => true,
    }
}

/// EA3: any two non-Normal sets are equipollent.
pub fn non_normal_equipollent(s: &Structure) -> bool {
    let mut sizes = s
        .elements()
        .filter(|&e| !s.is_normal(e))
        .map(|e| s.extension(e).len());
    match sizes.next() {
        Some(first) => sizes.all(|k| k == first),
        None => true,
    }
}

/// The per-element eventuality axioms (EA4..EA8, KNoU) at `e`.
pub fn eventuality_holds_at(s: &Structure, cfg: &SystemConfig, ea: Eventuality, e: usize) -> bool {
    let normal = s.is_normal(e);
    let ko = complement_ext(s, e);
    match ea {
        Eventuality::EA4 => {
            let at = at_element(s, cfg);
            !normal
                || s.extension(e).iter().all(|y| {
                    s.is_normal(y) || at.is_some_and(|a| equal_under(s, cfg.philosophy, y, a))
                })
        }
        Eventuality::EA5 => !normal || s.extension(e).is_subset(s.normal_set()),
        Eventuality::EA6 => !normal || normal_result(s, ko, cfg.require_closure),
        Eventuality::EA7 => match realized_normal(s, ko) {
            Some(ko_normal) => normal != ko_normal,
            None => !cfg.require_closure,
        },
        Eventuality::EA8 => {
            normal
                || match realized_normal(s, ko) {
                    Some(ko_normal) => ko_normal,
                    None => !cfg.require_closure,
                }
        }
        Eventuality::KNoU => {
            !normal || s.extension(e).is_empty() || normal_result(s, ko, cfg.require_closure)
        }
        Eventuality::EA1 | Eventuality::EA2 | Eventuality::EA3 | Eventuality::EA9 => true,
    }
}

/// `~(x surjects onto ko x)`.
pub fn nc1_antecedent(s: &Structure, e: usize) -> bool {
    !surjection_exists(s.extension(e), complement_ext(s, e))
}

fn nc5_antecedent(s: &Structure, e: usize, mode: Nc5Mode) -> bool {
    let (x, k) = (s.extension(e), complement_ext(s, e));
    match mode {
        Nc5Mode::Disjunctive => !surjection_exists(x, k) || !surjection_exists(k, x),
        Nc5Mode::Bijection => !equipollent(x, k),
    }
}

/// The antecedent of NC`id` at `e`.
pub fn nc_antecedent(s: &Structure, cfg: &SystemConfig, id: u8, e: usize) -> bool {
    let over_hull = |base: u8| {
        hull_with_mode(s, e, cfg.hull_mode)
            .iter()
            .all(|h| nc_antecedent(s, cfg, base, h))
    };
    match id {
        1 => nc1_antecedent(s, e),
        2 => slim(s, e),
        3 => over_hull(1),
        4 => over_hull(2),
        5 => nc5_antecedent(s, e, cfg.nc5_mode),
        6 => !equipollent(s.extension(e), complement_ext(s, e)),
        7 => over_hull(5),
        8 => over_hull(6),
        9 => !s.member(e, e),
        10 => !hull_plus(s, e).contains(e),
        11 => predicate(s, cfg, StructuralPredicate::Mirimanoff, e),
        12 => predicate(s, cfg, StructuralPredicate::Founded, e),
        13..=16 => over_hull(id - 4),
        _ => false,
    }
}

/// NC`id` at `e`: antecedent implies `Normal(x)`, or one of the escapes
/// (`x = us` for NC1, `x = us | x = 0` for the primed forms).
pub fn nc_holds_at(s: &Structure, cfg: &SystemConfig, id: u8, e: usize) -> bool {
    if s.is_normal(e) || !nc_antecedent(s, cfg, id, e) {
        return true;
    }
    let x = s.extension(e);
    let universal = x == s.universe();
    match id {
        1 => universal,
        5..=8 if cfg.primed => universal || x.is_empty(),
        _ => false,
    }
}

/// Whether the constant is designated to an element with full extension.
pub fn us_is_universal(s: &Structure) -> bool {
    s.designations
        .get(Constant::Us)
        .is_none_or(|u| s.extension(u) == s.universe())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::config::NormalityCondition;

    fn cfg() -> SystemConfig {
        SystemConfig::default()
    }

    fn s(line: &str) -> Structure {
        line.parse().unwrap()
    }

    #[test]
    fn ee_rejects_shared_extensions() {
        let two_empty = s("n=2;E=0000;N=00;des=US:-,OM:-,AT:-;den=");
        assert!(!extensionality_holds(
            &two_empty,
            Extensionality::Ee,
            Philosophy::A
        ));
        assert!(extensionality_holds(
            &two_empty,
            Extensionality::None,
            Philosophy::A
        ));
        let distinct = s("n=2;E=0010;N=10;des=US:-,OM:-,AT:-;den=");
        assert!(extensionality_holds(
            &distinct,
            Extensionality::Ee,
            Philosophy::A
        ));
    }

    #[test]
    fn nee_ignores_non_normal_members() {
        // 0 = {}, 1 = {1}; 1 is not Normal so both agree on Normal members.
        let t = s("n=2;E=0001;N=10;des=US:-,OM:-,AT:-;den=");
        assert!(extensionality_holds(&t, Extensionality::Ee, Philosophy::A));
        assert!(!extensionality_holds(
            &t,
            Extensionality::Nee,
            Philosophy::A
        ));
        let u = s("n=2;E=0001;N=01;des=US:-,OM:-,AT:-;den=");
        assert!(extensionality_holds(&u, Extensionality::Nee, Philosophy::A));
    }

    #[test]
    fn ee_under_b_still_needs_distinct_extensions() {
        let t = s("n=2;E=0000;N=10;des=US:-,OM:-,AT:-;den=");
        assert!(t.is_quotiented());
        assert!(!extensionality_holds(&t, Extensionality::Ee, Philosophy::B));
    }

    #[test]
    fn nc1_escape_for_the_universe() {
        // n=2: 0 = {}, 1 = {0,1}; neither Normal.
        let t = s("n=2;E=0101;N=00;des=US:-,OM:-,AT:-;den=");
        // 0: empty maps onto nothing nonempty, antecedent holds, violated.
        assert!(nc1_antecedent(&t, 0));
        assert!(!nc_holds_at(&t, &cfg(), 1, 0));
        // 1: universal, escapes.
        assert!(nc_holds_at(&t, &cfg(), 1, 1));
        assert!(!nc_holds_at(&t, &cfg(), 2, 0));
    }

    #[test]
    fn primed_escape_for_the_empty_set() {
        let t = s("n=2;E=0101;N=00;des=US:-,OM:-,AT:-;den=");
        let mut c = SystemConfig {
            nc: NormalityCondition::Numbered(6),
            ..cfg()
        };
        assert!(!nc_holds_at(&t, &c, 6, 0));
        c.primed = true;
        assert!(nc_holds_at(&t, &c, 6, 0));
    }

    #[test]
    fn russell_like_self_member_triggers_nc9_only_when_absent() {
        let t = s("n=2;E=0001;N=00;des=US:-,OM:-,AT:-;den=");
        assert!(nc_holds_at(&t, &cfg(), 9, 1));
        assert!(!nc_holds_at(&t, &cfg(), 9, 0));
    }

    #[test]
    fn complement_axioms() {
        // 0 = {}, 1 = {0,1}; 0 Normal only.
        let t = s("n=2;E=0101;N=10;des=US:-,OM:-,AT:-;den=");
        let c = cfg();
        assert!(!eventuality_holds_at(&t, &c, Eventuality::EA6, 0));
        assert!(eventuality_holds_at(&t, &c, Eventuality::KNoU, 0));
        assert!(eventuality_holds_at(&t, &c, Eventuality::EA7, 0));
        assert!(eventuality_holds_at(&t, &c, Eventuality::EA7, 1));
        assert!(eventuality_holds_at(&t, &c, Eventuality::EA8, 1));
        let both = s("n=2;E=0101;N=11;des=US:-,OM:-,AT:-;den=");
        assert!(!eventuality_holds_at(&both, &c, Eventuality::EA7, 0));
        assert!(eventuality_holds_at(&both, &c, Eventuality::EA6, 0));
    }

    #[test]
    fn unrealized_results_are_vacuous_unless_closure_required() {
        // 0 = {}, 1 = {1}: ko(0) = {0,1} has no realizer.
        let t = s("n=2;E=0001;N=10;des=US:-,OM:-,AT:-;den=");
        let mut c = cfg();
        assert!(eventuality_holds_at(&t, &c, Eventuality::EA6, 0));
        c.require_closure = true;
        assert!(!eventuality_holds_at(&t, &c, Eventuality::EA6, 0));
    }

    #[test]
    fn powerset_and_union() {
        // 0 = {}, 1 = {0}; both Normal.
        let t = s("n=2;E=0100;N=11;des=US:-,OM:-,AT:-;den=");
        let c = cfg();
        // p(1) = {0, 1}: unrealized, vacuous.
        assert!(powerset_holds(&t, &c, 1));
        // p(0) = {0}: realized by 1, Normal.
        assert!(powerset_holds(&t, &c, 0));
        // union(1) = {}: realized by 0.
        assert!(union_holds(&t, &c, 1));
        let u = s("n=2;E=0100;N=10;des=US:-,OM:-,AT:-;den=");
        assert!(!powerset_holds(&u, &c, 0));
    }

    #[test]
    fn image_forms() {
        // 0 = {}, 1 = {0}; identity relation.
        let t = s("n=2;E=0100;N=01;des=US:-,OM:-,AT:-;den=");
        let id = vec![ElemSet::singleton(0), ElemSet::singleton(1)];
        let mut c = SystemConfig {
            fa4: ImageAxiom::Alfa,
            ..cfg()
        };
        // image of 1 is {0}, realized by the Normal 1.
        assert!(image_holds(&t, &c, 1, &id));
        // swap: image of 1 is {1}, unrealized.
        let swap = vec![ElemSet::singleton(1), ElemSet::singleton(0)];
        assert!(image_holds(&t, &c, 1, &swap));
        c.require_closure = true;
        assert!(!image_holds(&t, &c, 1, &swap));
        c.fa4 = ImageAxiom::Gamma;
        // gamma filters to Normal elements: {1} ∩ N = {1}.
        assert!(!image_holds(&t, &c, 1, &swap));
        let non_functional = vec![ElemSet::full(2), ElemSet::EMPTY];
        assert!(image_holds(&t, &c, 1, &non_functional));
    }

    #[test]
    fn equipollence_of_non_normal_sets() {
        assert!(!non_normal_equipollent(&s(
            "n=2;E=0100;N=00;des=US:-,OM:-,AT:-;den="
        )));
        assert!(non_normal_equipollent(&s(
            "n=2;E=0100;N=10;des=US:-,OM:-,AT:-;den="
        )));
    }
}
