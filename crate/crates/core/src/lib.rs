//! A finite-model laboratory for naive axiomatic set theories built around a
//! primitive `Normal` predicate.
//!
//! - [`syntax`]: formulas, set-builder terms, parsing, printing, transforms
//!   and bounded formula families.
//! - [`semantics`]: finite membership structures, evaluation and derived
//!   set-theoretic predicates.
//! - [`catalog`]: comprehension variants, axiom groups, normality conditions
//!   and named system presets.
//! - [`search`]: structure enumeration, model finding, antinomy probes and
//!   finite consequence checks.
//! - [`experiment`]: batch experiment specs and deterministic JSON reports.

pub mod catalog;
pub mod experiment;
pub mod search;
pub mod semantics;
pub mod syntax;
