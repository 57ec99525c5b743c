//! Domain elements shared by the syntax, relations and concepts.

use std::fmt;

/// Intern key of a concept inside a [`ConceptStore`](crate::concepts::ConceptStore).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptId(pub u32);

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the domain `D = D₋₁ ∪ D_I`.
///
/// The derived ordering is the canonical printing order: the empty tuple
/// first, then particulars by name, then reified concepts by id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DomainElement {
    /// The distinguished particular `⟨⟩`.
    EmptyTuple,
    /// An ordinary individual.
    Particular(String),
    /// A concept reified as an individual.
    Concept(ConceptId),
}

impl DomainElement {
    pub fn particular(name: impl Into<String>) -> Self {
        DomainElement::Particular(name.into())
    }

    pub fn is_concept(&self) -> bool {
        matches!(self, DomainElement::Concept(_))
    }
}

/// Plain rendering: `a`, `@7`, `<>`.
impl fmt::Display for DomainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainElement::EmptyTuple => f.write_str("<>"),
            DomainElement::Particular(name) => f.write_str(name),
            DomainElement::Concept(id) => write!(f, "@{id}"),
        }
    }
}

/// Builds a sorted, deduplicated list of particulars from names.
pub fn particulars<I, S>(names: I) -> Vec<DomainElement>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut out: Vec<DomainElement> = names.into_iter().map(DomainElement::particular).collect();
    out.sort();
    out.dedup();
    out
}
