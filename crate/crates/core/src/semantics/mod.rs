//! Worlds, the intensional interpretation `I`, extensionalization `h`,
//! the independent Tarski evaluator and the commuting-diagram checks.

mod diagram;
mod extension;
mod file;
mod interpret;
mod tarski;
mod world;

pub use diagram::{assignment_extend, check_diagram, check_tarski_constraint, tarski_constraint_sides, ConstraintReport, DiagramReport};
pub use extension::{extensionalize, Extensionalizer};
pub use file::{parse_world_file, parse_world_set_file, WorldFile};
pub use interpret::{instantiate_abstraction, interpret, interpret_abstraction};
pub use tarski::{satisfies_tarski, tarski_extension};
pub use world::World;

use thiserror::Error;

use crate::concepts::ConceptError;
use crate::relalg::RelAlgError;
use crate::syntax::{PredicateSymbol, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Concept(#[from] ConceptError),
    #[error(transparent)]
    RelAlg(#[from] RelAlgError),
    #[error("world has no relation for {0}")]
    MissingPredicate(PredicateSymbol),
    #[error("constant {0} has no denotation")]
    UnknownConstant(String),
    #[error("variable {0} is not assigned")]
    UnboundVariable(String),
    #[error("malformed abstraction (α ∪ β not equal to the free variables): {0}")]
    MalformedAbstraction(String),
    #[error("the domain is empty")]
    EmptyDomain,
    #[error("invalid world: {0}")]
    InvalidWorld(String),
    #[error("world file line {line}: {message}")]
    File { line: usize, message: String },
}
