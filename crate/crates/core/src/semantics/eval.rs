use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::structure::{ElemSet, Structure};
use crate::syntax::{Constant, Formula, Term};

/// How `=` is read.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum Philosophy {
    /// Element identity; abnormal sets are identified with the universal set.
    #[default]
    A,
    /// Same extension and same Normal flag.
    B,
}

impl fmt::Display for Philosophy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Philosophy::A => "A",
            Philosophy::B => "B",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("UNDESIGNATED_CONSTANT: {0} has no designation")]
    UndesignatedConstant(Constant),
    #[error("UNKNOWN_DENOTATION: {0} has no entry in the denotation table")]
    UnknownDenotation(String),
    #[error("PARAMETRIC_BUILDER: {0} has free variables")]
    ParametricBuilder(String),
    #[error("UNASSIGNED_VARIABLE: {0}")]
    UnassignedVariable(String),
}

pub type Assignment = BTreeMap<String, usize>;

/// Resolves a term to an element.
pub fn denote(s: &Structure, t: &Term, assignment: &Assignment) -> Result<usize, EvalError> {
    match t {
        Term::Var(v) => assignment
            .get(v)
            .copied()
            .ok_or_else(|| EvalError::UnassignedVariable(v.clone())),
        Term::Const(c) => s
            .designations
            .get(*c)
            .ok_or(EvalError::UndesignatedConstant(*c)),
        Term::Builder(..) => {
            if !t.is_closed() {
                return Err(EvalError::ParametricBuilder(t.to_string()));
            }
            s.denotations
                .get(t)
                .ok_or_else(|| EvalError::UnknownDenotation(t.to_string()))
        }
    }
}

/// Tarskian truth of `f` in `s`. Quantifiers range over all elements.
pub fn eval(
    s: &Structure,
    phil: Philosophy,
    assignment: &Assignment,
    f: &Formula,
) -> Result<bool, EvalError> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    for v in &free {
        if !assignment.contains_key(v) {
            return Err(EvalError::UnassignedVariable(v.clone()));
        }
    }
    let compiled = Compiled::new(f, &free, Some(s))?;
    compiled.check_designations(s)?;
    let mut slots: Vec<usize> = free.iter().map(|v| assignment[v]).collect();
    Ok(compiled.eval_with(s, phil, &mut slots))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Operand {
    Slot(u8),
    Const(Constant),
    Elem(u8),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    True,
    False,
    Member(Operand, Operand),
    Equal(Operand, Operand),
    Normal(Operand),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Forall(u8, Box<Node>),
    Exists(u8, Box<Node>),
}

/// A formula with variables resolved to slot indices, for repeated
/// evaluation. Free variables occupy the leading slots in the order given
/// at compile time; set-builders are resolved against a structure's
/// denotation table when compiled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compiled {
    root: Node,
    slots: usize,
    free: usize,
    constants: Vec<Constant>,
}

impl Compiled {
    pub fn new(f: &Formula, free: &[String], s: Option<&Structure>) -> Result<Compiled, EvalError> {
        let mut scope: Vec<String> = free.to_vec();
        let mut max_slots = scope.len();
        let root = compile(f, &mut scope, &mut max_slots, s)?;
        let constants = f.constants().into_iter().collect();
        Ok(Compiled {
            root,
            slots: max_slots,
            free: free.len(),
            constants,
        })
    }

    pub fn check_designations(&self, s: &Structure) -> Result<(), EvalError> {
        for c in &self.constants {
            if s.designations.get(*c).is_none() {
                return Err(EvalError::UndesignatedConstant(*c));
            }
        }
        Ok(())
    }

    /// Evaluates with the free variables bound to `free_values`.
    /// Designations must have been checked.
    pub fn eval_with(&self, s: &Structure, phil: Philosophy, free_values: &mut Vec<usize>) -> bool {
        debug_assert_eq!(free_values.len(), self.free);
        free_values.resize(self.slots.max(self.free), 0);
        let r = node_eval(&self.root, s, phil, free_values);
        free_values.truncate(self.free);
        r
    }

    /// For a formula with one free variable: the set of elements satisfying it.
    pub fn truth_set(&self, s: &Structure, phil: Philosophy) -> ElemSet {
        let mut slots = vec![0; self.slots.max(1)];
        let mut out = ElemSet::EMPTY;
        for e in s.elements() {
            slots[0] = e;
            if node_eval(&self.root, s, phil, &mut slots) {
                out.insert(e);
            }
        }
        out
    }

    /// For a formula with two free variables: the relation as a per-input
    /// image set, `out[a] = {b : f(a, b)}`.
    pub fn relation(&self, s: &Structure, phil: Philosophy) -> Vec<ElemSet> {
        let mut slots = vec![0; self.slots.max(2)];
        let mut out = vec![ElemSet::EMPTY; s.size()];
        for a in s.elements() {
            for b in s.elements() {
                slots[0] = a;
                slots[1] = b;
                if node_eval(&self.root, s, phil, &mut slots) {
                    out[a].insert(b);
                }
            }
        }
        out
    }
}

fn compile(
    f: &Formula,
    scope: &mut Vec<String>,
    max_slots: &mut usize,
    s: Option<&Structure>,
) -> Result<Node, EvalError> {
    let operand = |t: &Term, scope: &Vec<String>| -> Result<Operand, EvalError> {
        match t {
            Term::Var(v) => scope
                .iter()
                .rposition(|w| w == v)
                .map(|i| Operand::Slot(i as u8))
                .ok_or_else(|| EvalError::UnassignedVariable(v.clone())),
            Term::Const(c) => Ok(Operand::Const(*c)),
            Term::Builder(..) => {
                if !t.is_closed() {
                    return Err(EvalError::ParametricBuilder(t.to_string()));
                }
                s.and_then(|s| s.denotations.get(t))
                    .map(|e| Operand::Elem(e as u8))
                    .ok_or_else(|| EvalError::UnknownDenotation(t.to_string()))
            }
        }
    };
    let mut bin = |a: &Formula, b: &Formula, scope: &mut Vec<String>| {
        let a = compile(a, scope, max_slots, s)?;
        let b = compile(b, scope, max_slots, s)?;
        Ok::<_, EvalError>((Box::new(a), Box::new(b)))
    };
    Ok(match f {
        Formula::Verum => Node::True,
        Formula::Falsum => Node::False,
        Formula::Member(a, b) => Node::Member(operand(a, scope)?, operand(b, scope)?),
        Formula::Equal(a, b) => Node::Equal(operand(a, scope)?, operand(b, scope)?),
        Formula::Normal(t) => Node::Normal(operand(t, scope)?),
        Formula::Not(g) => Node::Not(Box::new(compile(g, scope, max_slots, s)?)),
        Formula::And(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            Node::And(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            Node::Or(a, b)
        }
        Formula::Implies(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            Node::Implies(a, b)
        }
        Formula::Iff(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            Node::Iff(a, b)
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            scope.push(v.clone());
            let slot = (scope.len() - 1) as u8;
            *max_slots = (*max_slots).max(scope.len());
            let body = compile(g, scope, max_slots, s);
            scope.pop();
            let body = Box::new(body?);
            if matches!(f, Formula::Forall(..)) {
                Node::Forall(slot, body)
            } else {
                Node::Exists(slot, body)
            }
        }
    })
}

#[inline]
fn value(op: Operand, s: &Structure, slots: &[usize]) -> usize {
    match op {
        Operand::Slot(i) => slots[i as usize],
        Operand::Elem(e) => e as usize,
        Operand::Const(c) => s
            .designations
            .get(c)
            .expect("designations are checked before evaluation"),
    }
}

/// Equality of two elements under a philosophy.
pub fn equal_under(s: &Structure, phil: Philosophy, a: usize, b: usize) -> bool {
    match phil {
        Philosophy::A => a == b,
        Philosophy::B => s.extension(a) == s.extension(b) && s.is_normal(a) == s.is_normal(b),
    }
}

fn node_eval(node: &Node, s: &Structure, phil: Philosophy, slots: &mut [usize]) -> bool {
    match node {
        Node::True => true,
        Node::False => false,
        Node::Member(a, b) => s.member(value(*a, s, slots), value(*b, s, slots)),
        Node::Equal(a, b) => equal_under(s, phil, value(*a, s, slots), value(*b, s, slots)),
        Node::Normal(a) => s.is_normal(value(*a, s, slots)),
        Node::Not(g) => !node_eval(g, s, phil, slots),
        Node::And(a, b) => node_eval(a, s, phil, slots) && node_eval(b, s, phil, slots),
        Node::Or(a, b) => node_eval(a, s, phil, slots) || node_eval(b, s, phil, slots),
        Node::Implies(a, b) => !node_eval(a, s, phil, slots) || node_eval(b, s, phil, slots),
        Node::Iff(a, b) => node_eval(a, s, phil, slots) == node_eval(b, s, phil, slots),
        Node::Forall(slot, g) => {
            let saved = slots[*slot as usize];
            let r = (0..s.size()).all(|e| {
                slots[*slot as usize] = e;
                node_eval(g, s, phil, slots)
            });
            slots[*slot as usize] = saved;
            r
        }
        Node::Exists(slot, g) => {
            let saved = slots[*slot as usize];
            let r = (0..s.size()).any(|e| {
                slots[*slot as usize] = e;
                node_eval(g, s, phil, slots)
            });
            slots[*slot as usize] = saved;
            r
        }
    }
}
