use std::collections::BTreeMap;
use std::sync::Arc;

use crate::element::DomainElement;
use crate::relalg::{identity_relation, Relation};
use crate::syntax::PredicateSymbol;

use super::SemanticsError;

/// A Tarski interpretation: a non-empty domain, rigid constant
/// denotations and one relation per predicate letter. The identity
/// predicate is always `R₌` and is not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    name: String,
    domain: Arc<Vec<DomainElement>>,
    consts: Arc<BTreeMap<String, DomainElement>>,
    preds: BTreeMap<PredicateSymbol, Relation>,
    identity: Arc<Relation>,
    labels: Arc<BTreeMap<DomainElement, String>>,
}

impl World {
    pub fn new(
        name: impl Into<String>,
        domain: Vec<DomainElement>,
        consts: BTreeMap<String, DomainElement>,
        preds: BTreeMap<PredicateSymbol, Relation>,
    ) -> Result<World, SemanticsError> {
        let mut domain = domain;
        domain.sort();
        domain.dedup();
        let identity = Arc::new(identity_relation(&domain));
        World::from_shared(name.into(), Arc::new(domain), Arc::new(consts), preds, identity, Arc::default())
    }

    /// Builds a world that shares domain, constants and element labels
    /// with `self`.
    pub fn sibling(
        &self,
        name: impl Into<String>,
        preds: BTreeMap<PredicateSymbol, Relation>,
    ) -> Result<World, SemanticsError> {
        World::from_shared(
            name.into(),
            self.domain.clone(),
            self.consts.clone(),
            preds,
            self.identity.clone(),
            self.labels.clone(),
        )
    }

    pub(crate) fn from_shared(
        name: String,
        domain: Arc<Vec<DomainElement>>,
        consts: Arc<BTreeMap<String, DomainElement>>,
        preds: BTreeMap<PredicateSymbol, Relation>,
        identity: Arc<Relation>,
        labels: Arc<BTreeMap<DomainElement, String>>,
    ) -> Result<World, SemanticsError> {
        if domain.is_empty() {
            return Err(SemanticsError::EmptyDomain);
        }
        for (c, d) in consts.iter() {
            if domain.binary_search(d).is_err() {
                return Err(SemanticsError::InvalidWorld(format!("constant {c} denotes {d}, which is outside the domain")));
            }
        }
        for (p, r) in &preds {
            if p.is_builtin() {
                return Err(SemanticsError::InvalidWorld(format!("{p} is built in and cannot be declared")));
            }
            if r.arity() != p.arity {
                return Err(SemanticsError::InvalidWorld(format!("{p} given a relation of arity {}", r.arity())));
            }
            for t in r.iter() {
                if let Some(e) = t.iter().find(|e| domain.binary_search(e).is_err()) {
                    return Err(SemanticsError::InvalidWorld(format!("{p} mentions {e}, which is outside the domain")));
                }
            }
        }
        Ok(World { name, domain, consts, preds, identity, labels })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Sorted, deduplicated domain.
    pub fn domain(&self) -> &[DomainElement] {
        &self.domain
    }

    pub fn constants(&self) -> &BTreeMap<String, DomainElement> {
        &self.consts
    }

    pub fn constant(&self, name: &str) -> Result<&DomainElement, SemanticsError> {
        self.consts.get(name).ok_or_else(|| SemanticsError::UnknownConstant(name.to_string()))
    }

    pub fn predicates(&self) -> &BTreeMap<PredicateSymbol, Relation> {
        &self.preds
    }

    /// `I_T(p)`; the identity predicate yields `R₌`.
    pub fn relation(&self, p: &PredicateSymbol) -> Result<&Relation, SemanticsError> {
        if p.is_identity() {
            return Ok(&self.identity);
        }
        self.preds.get(p).ok_or_else(|| SemanticsError::MissingPredicate(p.clone()))
    }

    pub fn identity(&self) -> &Relation {
        &self.identity
    }

    /// Display names of reified concepts, as declared in a world file.
    pub fn labels(&self) -> &BTreeMap<DomainElement, String> {
        &self.labels
    }

    /// Whether `other` shares this world's domain and constant map.
    pub fn same_frame(&self, other: &World) -> bool {
        self.domain == other.domain && self.consts == other.consts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::particulars;

    #[test]
    fn identity_is_built_in() {
        let w = World::new("w", particulars(["b", "a"]), BTreeMap::new(), BTreeMap::new()).unwrap();
        assert_eq!(w.domain(), particulars(["a", "b"]).as_slice());
        assert_eq!(w.relation(&PredicateSymbol::identity()).unwrap(), &Relation::of_names(2, &[&["a", "a"], &["b", "b"]]));
        assert!(matches!(
            w.relation(&PredicateSymbol::new("p", 1)),
            Err(SemanticsError::MissingPredicate(_))
        ));
    }

    #[test]
    fn invalid_worlds() {
        let d = particulars(["a"]);
        assert!(matches!(World::new("w", vec![], BTreeMap::new(), BTreeMap::new()), Err(SemanticsError::EmptyDomain)));
        let bad = BTreeMap::from([(PredicateSymbol::new("p", 1), Relation::of_names(1, &[&["z"]]))]);
        assert!(World::new("w", d.clone(), BTreeMap::new(), bad).is_err());
        let bad = BTreeMap::from([(PredicateSymbol::new("p", 2), Relation::of_names(1, &[&["a"]]))]);
        assert!(World::new("w", d.clone(), BTreeMap::new(), bad).is_err());
        let bad = BTreeMap::from([(PredicateSymbol::identity(), Relation::empty(2))]);
        assert!(World::new("w", d.clone(), BTreeMap::new(), bad).is_err());
        let consts = BTreeMap::from([("c".to_string(), DomainElement::particular("q"))]);
        assert!(World::new("w", d, consts, BTreeMap::new()).is_err());
    }
}
