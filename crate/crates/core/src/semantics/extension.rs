//! Extensionalization `h = is(w)`: concepts to relations, by recursion
//! over the concept structure using the relational algebra.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::concepts::{AtomArg, Concept, ConceptNode, ConceptStore, FamilyId};
use crate::element::{ConceptId, DomainElement};
use crate::relalg::{all_tuples, complement, natural_join, project_out, Relation, Tuple};
use crate::syntax::PredicateSymbol;

use super::interpret::instantiate_abstraction;
use super::{SemanticsError, World};

/// `β` values grouped by the concept they instantiate a template to.
type FamilyIndex = HashMap<DomainElement, Vec<Tuple>>;

/// Evaluates concepts in a fixed, non-empty list of worlds sharing one
/// domain. `necess` is read as an intersection over all of them.
///
/// Results are memoized per `(concept, world)`; the cache tolerates
/// concurrent use.
pub struct Extensionalizer<'a> {
    store: &'a ConceptStore,
    worlds: &'a [World],
    memo: Option<Vec<RwLock<HashMap<ConceptId, Arc<Relation>>>>>,
    families: RwLock<HashMap<FamilyId, Arc<FamilyIndex>>>,
}

impl<'a> Extensionalizer<'a> {
    pub fn new(store: &'a ConceptStore, worlds: &'a [World]) -> Self {
        assert!(!worlds.is_empty(), "at least one world is required");
        Extensionalizer {
            store,
            worlds,
            memo: Some(worlds.iter().map(|_| RwLock::default()).collect()),
            families: RwLock::default(),
        }
    }

    /// Same evaluator with the memo table switched off.
    pub fn uncached(store: &'a ConceptStore, worlds: &'a [World]) -> Self {
        Extensionalizer { memo: None, ..Extensionalizer::new(store, worlds) }
    }

    pub fn worlds(&self) -> &'a [World] {
        self.worlds
    }

    pub fn store(&self) -> &'a ConceptStore {
        self.store
    }

    /// `h(u)` in world number `world`; the result has arity `degree(u)`.
    pub fn extensionalize(&self, u: &Concept, world: usize) -> Result<Relation, SemanticsError> {
        Ok((*self.eval(u, world)?).clone())
    }

    /// `⋂_w h_w(u)`.
    pub fn box_extension(&self, u: &Concept) -> Result<Relation, SemanticsError> {
        let mut acc = (*self.eval(u, 0)?).clone();
        for w in 1..self.worlds.len() {
            acc = acc.intersection(&*self.eval(u, w)?)?;
        }
        Ok(acc)
    }

    /// `⋃_w h_w(u)`.
    pub fn diamond_extension(&self, u: &Concept) -> Result<Relation, SemanticsError> {
        let mut acc = (*self.eval(u, 0)?).clone();
        for w in 1..self.worlds.len() {
            acc = acc.union(&*self.eval(u, w)?)?;
        }
        Ok(acc)
    }

    fn eval(&self, u: &Concept, world: usize) -> Result<Arc<Relation>, SemanticsError> {
        if let Some(memo) = &self.memo {
            if let Some(r) = memo[world].read().expect("memo lock").get(&u.id()) {
                return Ok(r.clone());
            }
        }
        let r = Arc::new(self.compute(u, world)?);
        debug_assert_eq!(r.arity(), u.degree(), "extension of {u}");
        if let Some(memo) = &self.memo {
            memo[world].write().expect("memo lock").entry(u.id()).or_insert_with(|| r.clone());
        }
        Ok(r)
    }

    fn compute(&self, u: &Concept, world: usize) -> Result<Relation, SemanticsError> {
        let w = &self.worlds[world];
        Ok(match u.node() {
            ConceptNode::Truth => Relation::truth(),
            ConceptNode::Id => w.identity().clone(),
            ConceptNode::Atom { pred, args } => self.atom(w, pred, args, u.degree())?,
            ConceptNode::Conj { pairs, left, right } => {
                natural_join(&*self.eval(left, world)?, &*self.eval(right, world)?, pairs)
            }
            ConceptNode::Neg(sub) => complement(&*self.eval(sub, world)?, w.domain())?,
            ConceptNode::Exists { index, sub } => project_out(&*self.eval(sub, world)?, *index),
            ConceptNode::Union(members) => {
                let mut acc = Relation::empty(u.degree());
                for m in members {
                    acc = acc.union(&*self.eval(m, world)?)?;
                }
                acc
            }
            ConceptNode::Necess(sub) => self.box_extension(sub)?,
        })
    }

    /// Selects the tuples of `p` matching the ground arguments and
    /// repeated slots, then keeps one column per slot.
    fn atom(&self, w: &World, pred: &PredicateSymbol, args: &[AtomArg], degree: usize) -> Result<Relation, SemanticsError> {
        let rel = w.relation(pred)?;
        let mut fixed: Vec<Option<DomainElement>> = Vec::with_capacity(args.len());
        let mut families = Vec::new();
        for (pos, a) in args.iter().enumerate() {
            fixed.push(match a {
                AtomArg::Elem(e) => Some(e.clone()),
                AtomArg::Const(c) => Some(w.constant(c)?.clone()),
                AtomArg::Family { family, slots } => {
                    families.push((pos, self.family_index(*family, w)?, slots));
                    None
                }
                AtomArg::Slot(_) => None,
            });
        }
        let mut out = Relation::empty(degree);
        'tuples: for t in rel.iter() {
            let mut binding: Vec<Option<DomainElement>> = vec![None; degree];
            for (pos, a) in args.iter().enumerate() {
                if let Some(e) = &fixed[pos] {
                    if &t[pos] != e {
                        continue 'tuples;
                    }
                } else if let AtomArg::Slot(s) = a {
                    match &binding[s - 1] {
                        Some(prev) if prev != &t[pos] => continue 'tuples,
                        Some(_) => {}
                        None => binding[s - 1] = Some(t[pos].clone()),
                    }
                }
            }
            let mut partial = vec![binding];
            for (pos, index, slots) in &families {
                let Some(candidates) = index.get(&t[*pos]) else { continue 'tuples };
                let mut next = Vec::new();
                for b in &partial {
                    'cand: for values in candidates {
                        let mut b = b.clone();
                        for (s, v) in slots.iter().zip(values) {
                            match &b[s - 1] {
                                Some(prev) if prev != v => continue 'cand,
                                Some(_) => {}
                                None => b[s - 1] = Some(v.clone()),
                            }
                        }
                        next.push(b);
                    }
                }
                partial = next;
            }
            for b in partial {
                out.insert(b.into_iter().map(|e| e.expect("every slot is bound by some argument")).collect())?;
            }
        }
        Ok(out)
    }

    fn family_index(&self, id: FamilyId, w: &World) -> Result<Arc<FamilyIndex>, SemanticsError> {
        if let Some(ix) = self.families.read().expect("family lock").get(&id) {
            return Ok(ix.clone());
        }
        let template = self.store.family(id);
        let mut index = FamilyIndex::new();
        for values in all_tuples(w.domain(), template.beta.len()) {
            let c = instantiate_abstraction(self.store, &template, &values)?;
            index.entry(c.handle()).or_default().push(values);
        }
        let index = Arc::new(index);
        self.families.write().expect("family lock").entry(id).or_insert_with(|| index.clone());
        Ok(index)
    }
}

/// `h(u)` for a single world.
pub fn extensionalize(store: &ConceptStore, u: &Concept, w: &World) -> Result<Relation, SemanticsError> {
    Extensionalizer::new(store, std::slice::from_ref(w)).extensionalize(u, 0)
}
