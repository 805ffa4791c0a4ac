//! Finite membership structures and evaluation over them.

mod eval;
pub mod predicates;
mod structure;

pub use eval::{denote, equal_under, eval, Assignment, Compiled, EvalError, Philosophy};
pub use predicates::{
    complement_ext, equipollent, ext, find_by_ext, hull, hull_plus, hull_with_mode, powerset_ext,
    structural_predicate, structural_predicate_with, surjection_exists, union_ext, HullMode,
    PredicateOptions, StructuralPredicate,
};
pub use structure::{Denotations, Designations, ElemSet, Structure, StructureError, MAX_ELEMENTS};
