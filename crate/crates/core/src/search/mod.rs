//! Finite model search, consequence checks and the self-instantiation probe.

mod consequence;
mod enumerate;
mod models;
mod pathology;
mod probe;

use thiserror::Error;

use crate::catalog::CatalogError;
use crate::semantics::EvalError;

pub use consequence::{consequence_check, ConsequenceResult, Target};
pub use enumerate::{
    check_size, decode_relation, enumerate_structures, for_each_in_range, relation_count,
    Constraints, MAX_SEARCH_SIZE,
};
pub use models::{find_models, SearchOptions, Searcher, Verdict, Violation};
pub use pathology::{pathology_probe, Aggregate, PathologyReport};
pub use probe::{
    self_instantiation_probe, Forced, ProbeError, ProbeOutcome, ProbeResult, PROBE_VARIABLE_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("CAP_EXCEEDED: {0}")]
    CapExceeded(String),
    #[error("could not start workers: {0}")]
    Workers(String),
    #[error("invalid target '{0}'")]
    Target(String),
}

impl From<EvalError> for SearchError {
    fn from(e: EvalError) -> Self {
        SearchError::Catalog(CatalogError::Eval(e))
    }
}

impl From<crate::syntax::FamilyError> for SearchError {
    fn from(e: crate::syntax::FamilyError) -> Self {
        SearchError::Catalog(CatalogError::Family(e))
    }
}
