//! First-order formulas over membership, equality and the `Normal` predicate,
//! together with set-builder terms `{x|A}`.
//!
//! The concrete syntax is ASCII:
//!
//! ```text
//! formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" or)*  (right-assoc)
//! or := and ("|" and)* ; and := unary ("&" unary)*
//! unary := "~" unary | "A" var "." unary | "E" var "." unary | atom
//! atom := "(" formula ")" | "T" | "F" | "N" "(" term ")" | term ("in" | "=") term
//! term := var | "US" | "OM" | "AT" | "{" var "|" formula "}" ; var := [a-z][a-z0-9]*
//! ```
//!
//! [`Formula`] and [`Term`] implement `Display` with a canonical layout that
//! parses back to the same tree.

mod family;
mod parse;
mod stratify;
mod transform;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use family::{
    enumerate_binary_family, enumerate_family, FamilyError, FormulaFamily, FAMILY_DEPTH_CAP,
};
pub use parse::{parse, parse_formula, parse_term, ParseError, Syntax};
pub use stratify::stratified;
pub use transform::{canonical_term, fresh_name};

/// The three named constants of the language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Constant {
    /// The universal set `us`.
    #[serde(rename = "US")]
    Us,
    /// `omega`.
    #[serde(rename = "OM")]
    Om,
    /// The "commercial at" constant `@`.
    #[serde(rename = "AT")]
    At,
}

impl Constant {
    pub const ALL: [Constant; 3] = [Constant::Us, Constant::Om, Constant::At];

    pub fn tag(self) -> &'static str {
        match self {
            Constant::Us => "US",
            Constant::Om => "OM",
            Constant::At => "AT",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Constant::Us => 0,
            Constant::Om => 1,
            Constant::At => 2,
        }
    }

    pub fn from_tag(tag: &str) -> Option<Constant> {
        Constant::ALL.into_iter().find(|c| c.tag() == tag)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(Constant),
    /// `{v|body}`; binds `v` inside `body`.
    Builder(String, Box<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Verum,
    Falsum,
    /// `lhs in rhs`
    Member(Term, Term),
    Equal(Term, Term),
    Normal(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn builder(var: impl Into<String>, body: Formula) -> Term {
        Term::Builder(var.into(), Box::new(body))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Builder(_, body) => 1 + body.depth(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl Formula {
    pub fn member(lhs: Term, rhs: Term) -> Formula {
        Formula::Member(lhs, rhs)
    }

    pub fn equal(lhs: Term, rhs: Term) -> Formula {
        Formula::Equal(lhs, rhs)
    }

    pub fn normal(t: Term) -> Formula {
        Formula::Normal(t)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Nesting depth of connectives, quantifiers and set-builders. Atoms
    /// without set-builders have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Verum | Formula::Falsum => 0,
            Formula::Member(a, b) | Formula::Equal(a, b) => a.depth().max(b.depth()),
            Formula::Normal(t) => t.depth(),
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.depth(),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Formula::Verum
                | Formula::Falsum
                | Formula::Member(..)
                | Formula::Equal(..)
                | Formula::Normal(_)
        )
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every constant mentioned anywhere, including inside set-builders.
    pub fn constants(&self) -> std::collections::BTreeSet<Constant> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut std::collections::BTreeSet<Constant>) {
        fn term(t: &Term, out: &mut std::collections::BTreeSet<Constant>) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    out.insert(*c);
                }
                Term::Builder(_, body) => body.collect_constants(out),
            }
        }
        match self {
            Formula::Verum | Formula::Falsum => {}
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::Normal(t) => term(t, out),
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => {
                f.collect_constants(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_constants(out);
                b.collect_constants(out);
            }
        }
    }

    /// True when a set-builder term occurs anywhere.
    pub fn has_builder(&self) -> bool {
        fn term(t: &Term) -> bool {
            matches!(t, Term::Builder(..))
        }
        match self {
            Formula::Verum | Formula::Falsum => false,
            Formula::Member(a, b) | Formula::Equal(a, b) => term(a) || term(b),
            Formula::Normal(t) => term(t),
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.has_builder(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.has_builder() || b.has_builder(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
            Term::Builder(v, body) => write!(f, "{{{v}|{body}}}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Verum => f.write_str("T"),
            Formula::Falsum => f.write_str("F"),
            Formula::Member(a, b) => write!(f, "{a} in {b}"),
            Formula::Equal(a, b) => write!(f, "{a} = {b}"),
            Formula::Normal(t) => write!(f, "N({t})"),
            Formula::Not(inner) => {
                f.write_str("~")?;
                write_operand(f, inner)
            }
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Forall(v, body) => {
                write!(f, "A {v}. ")?;
                write_operand(f, body)
            }
            Formula::Exists(v, body) => {
                write!(f, "E {v}. ")?;
                write_operand(f, body)
            }
        }
    }
}

// Binary atoms under a prefix operator get parentheses: `~(x in x)`.
fn write_operand(f: &mut fmt::Formatter<'_>, inner: &Formula) -> fmt::Result {
    match inner {
        Formula::Member(..) | Formula::Equal(..) => write!(f, "({inner})"),
        _ => write!(f, "{inner}"),
    }
}

/// The Russell body `~(x in x)`.
pub fn russell_body() -> Formula {
    Formula::not(Formula::member(Term::var("x"), Term::var("x")))
}

/// The Russell term `{x|~(x in x)}`.
pub fn russell_term() -> Term {
    Term::builder("x", russell_body())
}
