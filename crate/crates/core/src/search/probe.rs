//! Self-instantiation: substitute `y := {x|A}` into the comprehension
//! instance for `A` and decide the resulting ground constraints.
//!
//! Quantified subformulas are abstracted by propositional variables. A
//! universal `A v. M` becomes `Q` with the side constraint `Q -> M[v:=t]`, an
//! existential becomes `V` with `M[v:=t] -> V`. After substitution every atom
//! mentions only `t`: `t in t` is `P`, `N(t)` is `N`, `t = t` is true.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{builder_for, comprehension_instance, CatalogError, Comprehension, Payload};
use crate::syntax::{canonical_term, Formula, Term};

/// Ground atoms and abstractions beyond this make the probe give up.
pub const PROBE_VARIABLE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("CAP_EXCEEDED: {0}")]
    CapExceeded(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeOutcome {
    #[serde(rename = "CONSISTENT")]
    Consistent,
    #[serde(rename = "CONTRADICTION")]
    Contradiction,
}

impl fmt::Display for ProbeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeOutcome::Consistent => "CONSISTENT",
            ProbeOutcome::Contradiction => "CONTRADICTION",
        })
    }
}

/// Value of a ground atom across all satisfying assignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Forced {
    #[serde(rename = "T")]
    True,
    #[serde(rename = "F")]
    False,
    #[serde(rename = "FREE")]
    Free,
}

impl fmt::Display for Forced {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Forced::True => "T",
            Forced::False => "F",
            Forced::Free => "FREE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeResult {
    pub variant: Comprehension,
    pub body: String,
    pub instance: String,
    pub outcome: ProbeOutcome,
    /// `t in t`; absent on contradiction.
    pub membership: Option<Forced>,
    /// `N(t)`; absent on contradiction.
    pub normal: Option<Forced>,
}

impl fmt::Display for ProbeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.variant.name(), self.body, self.outcome)?;
        if let (Some(p), Some(n)) = (self.membership, self.normal) {
            write!(f, " P={p} N={n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Prop {
    Const(bool),
    Var(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn eval(&self, vals: u64) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Var(i) => vals >> i & 1 == 1,
            Prop::Not(a) => !a.eval(vals),
            Prop::And(a, b) => a.eval(vals) && b.eval(vals),
            Prop::Or(a, b) => a.eval(vals) || b.eval(vals),
            Prop::Implies(a, b) => !a.eval(vals) || b.eval(vals),
            Prop::Iff(a, b) => a.eval(vals) == b.eval(vals),
        }
    }
}

const P: usize = 0;
const N: usize = 1;

struct Grounder {
    key: Term,
    abstractions: BTreeMap<Formula, usize>,
    side: Vec<Prop>,
    next: usize,
}

impl Grounder {
    fn is_t(&self, term: &Term) -> bool {
        canonical_term(term) == self.key
    }

    fn atom_error(&self, f: &Formula) -> ProbeError {
        ProbeError::CapExceeded(format!("ground atom '{f}' is not over the probe term"))
    }

    fn ground(&mut self, f: &Formula, t: &Term) -> Result<Prop, ProbeError> {
        let bx = |p: Prop| Box::new(p);
        Ok(match f {
            Formula::Verum => Prop::Const(true),
            Formula::Falsum => Prop::Const(false),
            Formula::Member(a, b) if self.is_t(a) && self.is_t(b) => Prop::Var(P),
            Formula::Normal(a) if self.is_t(a) => Prop::Var(N),
            Formula::Equal(a, b) if self.is_t(a) && self.is_t(b) => Prop::Const(true),
            Formula::Member(..) | Formula::Normal(_) | Formula::Equal(..) => {
                return Err(self.atom_error(f))
            }
            Formula::Not(a) => Prop::Not(bx(self.ground(a, t)?)),
            Formula::And(a, b) => Prop::And(bx(self.ground(a, t)?), bx(self.ground(b, t)?)),
            Formula::Or(a, b) => Prop::Or(bx(self.ground(a, t)?), bx(self.ground(b, t)?)),
            Formula::Implies(a, b) => Prop::Implies(bx(self.ground(a, t)?), bx(self.ground(b, t)?)),
            Formula::Iff(a, b) => Prop::Iff(bx(self.ground(a, t)?), bx(self.ground(b, t)?)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                if let Some(&q) = self.abstractions.get(f) {
                    return Ok(Prop::Var(q));
                }
                let q = self.next;
                if q >= PROBE_VARIABLE_CAP {
                    return Err(ProbeError::CapExceeded(format!(
                        "more than {PROBE_VARIABLE_CAP} propositional variables"
                    )));
                }
                self.next += 1;
                self.abstractions.insert(f.clone(), q);
                let inst = self.ground(&body.substitute(v, t), t)?;
                self.side.push(if matches!(f, Formula::Forall(..)) {
                    Prop::Implies(bx(Prop::Var(q)), bx(inst))
                } else {
                    Prop::Implies(bx(inst), bx(Prop::Var(q)))
                });
                Prop::Var(q)
            }
        })
    }
}

/// Runs the self-instantiation probe for `variant` on the one-variable
/// formula `body`.
pub fn self_instantiation_probe(
    variant: Comprehension,
    body: &Formula,
) -> Result<ProbeResult, ProbeError> {
    let inst = comprehension_instance(variant, body)?;
    let Payload::Closed(formula) = inst.payload else {
        unreachable!("comprehension instances are closed formulas")
    };
    let t = builder_for(body)?;
    let mut g = Grounder {
        key: canonical_term(&t),
        abstractions: BTreeMap::new(),
        side: Vec::new(),
        next: 2,
    };
    let main = g.ground(&formula, &t)?;
    let vars = g.next;
    let mut seen_p = [false; 2];
    let mut seen_n = [false; 2];
    let mut any = false;
    for vals in 0..(1u64 << vars) {
        if main.eval(vals) && g.side.iter().all(|c| c.eval(vals)) {
            any = true;
            seen_p[(vals >> P & 1) as usize] = true;
            seen_n[(vals >> N & 1) as usize] = true;
        }
    }
    let forced = |seen: [bool; 2]| match seen {
        [true, true] => Forced::Free,
        [false, true] => Forced::True,
        _ => Forced::False,
    };
    Ok(ProbeResult {
        variant,
        body: body.to_string(),
        instance: formula.to_string(),
        outcome: if any {
            ProbeOutcome::Consistent
        } else {
            ProbeOutcome::Contradiction
        },
        membership: any.then(|| forced(seen_p)),
        normal: any.then(|| forced(seen_n)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, russell_body};

    fn run(v: Comprehension) -> ProbeResult {
        self_instantiation_probe(v, &russell_body()).unwrap()
    }

    #[test]
    fn russell_table() {
        assert_eq!(
            run(Comprehension::Naive).outcome,
            ProbeOutcome::Contradiction
        );
        let r = run(Comprehension::RaBaDi);
        assert_eq!(
            (r.membership, r.normal),
            (Some(Forced::True), Some(Forced::False))
        );
        let r = run(Comprehension::RinoBaCo);
        assert_eq!(
            (r.membership, r.normal),
            (Some(Forced::False), Some(Forced::False))
        );
        for v in [Comprehension::NoBI, Comprehension::NoBE] {
            let r = run(v);
            assert_eq!(r.outcome, ProbeOutcome::Consistent);
            assert_eq!(
                (r.membership, r.normal),
                (Some(Forced::Free), Some(Forced::False))
            );
        }
    }

    #[test]
    fn harmless_body_is_consistent_under_naive() {
        let r = self_instantiation_probe(Comprehension::Naive, &parse_formula("x = x").unwrap())
            .unwrap();
        assert_eq!(r.outcome, ProbeOutcome::Consistent);
        assert_eq!(r.membership, Some(Forced::True));
        assert_eq!(r.normal, Some(Forced::Free));
    }

    #[test]
    fn constants_exceed_the_probe() {
        let err =
            self_instantiation_probe(Comprehension::Naive, &parse_formula("x in US").unwrap());
        assert!(matches!(err, Err(ProbeError::CapExceeded(_))));
    }

    #[test]
    fn display_line() {
        assert_eq!(
            run(Comprehension::RaBaDi).to_string(),
            "raBaDi ~(x in x) CONSISTENT P=T N=F"
        );
        assert_eq!(
            run(Comprehension::Naive).to_string(),
            "naive ~(x in x) CONTRADICTION"
        );
    }
}
