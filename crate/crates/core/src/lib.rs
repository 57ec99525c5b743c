//! Intensional first-order logic with an abstraction operator.
//!
//! Formulas are compiled to interned concepts ([`interpret`]), concepts
//! are evaluated per world through a relational algebra
//! ([`Extensionalizer`]), and the result can be checked against a direct
//! Tarski evaluator ([`check_diagram`]). World sets add `□`/`◇`,
//! Kripke satisfaction and intensional equivalence of abstractions.

pub mod concepts;
pub mod corpus;
pub mod element;
pub mod gen;
pub mod relalg;
pub mod semantics;
pub mod syntax;
pub mod worlds;

pub use concepts::{Concept, ConceptStore};
pub use element::{ConceptId, DomainElement};
pub use relalg::Relation;
pub use semantics::{
    check_diagram, check_tarski_constraint, extensionalize, interpret, interpret_abstraction, tarski_extension,
    Extensionalizer, SemanticsError, World,
};
pub use syntax::{parse_formula, parse_term, Abstraction, Assignment, Formula, Signature, SyntaxError, Term};
pub use worlds::{enumerate_worlds, WorldSet, WorldsError};
