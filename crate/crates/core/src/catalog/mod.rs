//! System configurations, named presets and axiom instances.

pub mod checks;
mod config;
mod instance;

use thiserror::Error;

use crate::semantics::EvalError;
use crate::syntax::FamilyError;

pub use config::{
    preset, Choice, Comprehension, ConfigError, Eventuality, Extensionality, Fundamental,
    ImageAxiom, Nc5Mode, NormalityCondition, SystemConfig, PRESET_NAMES,
};
pub use instance::{
    abstraction_variable, admits, builder_for, comprehension_instance, ea2_instance, ea2_pairs,
    ea9_instance, list_axiom_instances, not_evaluated, stratified_instance, truth_sets, Families,
    MetaCheck, Payload, SchemaId, SchemaInstance,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("ARITY: '{0}' has more than one free variable")]
    Arity(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
