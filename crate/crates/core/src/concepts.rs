//! The intensional algebra: hash-consed concept expressions built from
//! atomic concepts with `conj_S`, `neg`, `exists_n`, `union` and `necess`.
//!
//! A concept's identity is its canonical structure. The only rewrite is
//! `neg(neg(u)) → u`; logically equivalent but differently built concepts
//! stay distinct.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::element::{ConceptId, DomainElement};
use crate::relalg::{join_pairs_valid, JoinPairs};
use crate::syntax::{Abstraction, PredicateSymbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConceptError {
    #[error("{pred} expects {expected} argument(s), got {found}")]
    ArityMismatch { pred: PredicateSymbol, expected: usize, found: usize },
    #[error("slots must be numbered 1, 2, ... in order of first occurrence")]
    SlotOrder,
    #[error("union of an empty set of concepts")]
    EmptyUnion,
    #[error("union members have different degrees: {0:?}")]
    MixedDegrees(Vec<usize>),
}

/// Index of an abstraction template in the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyId(pub u32);

/// Argument position of an atomic concept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomArg {
    /// Free-variable slot, 1-based in order of first occurrence.
    Slot(usize),
    /// A ground domain element.
    Elem(DomainElement),
    /// A language constant, denoted rigidly through the world's constant map.
    Const(String),
    /// An abstracted term whose `β` variables are filled from `slots`:
    /// the argument denotes `I(φ[β/(slot values)])`.
    Family { family: FamilyId, slots: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConceptNode {
    Atom { pred: PredicateSymbol, args: Vec<AtomArg> },
    Conj { pairs: JoinPairs, left: Concept, right: Concept },
    Neg(Concept),
    Exists { index: usize, sub: Concept },
    /// Members sorted by id, at least two.
    Union(Vec<Concept>),
    Necess(Concept),
    Id,
    Truth,
}

#[derive(Debug)]
struct ConceptData {
    id: ConceptId,
    degree: usize,
    node: ConceptNode,
}

/// Shared handle to an interned concept. Equality and hashing go by id,
/// so two handles are equal exactly when they come from the same
/// canonical structure in the same store.
#[derive(Debug, Clone)]
pub struct Concept(Arc<ConceptData>);

impl PartialEq for Concept {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Concept {}

impl Hash for Concept {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl PartialOrd for Concept {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Concept {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl Concept {
    pub fn id(&self) -> ConceptId {
        self.0.id
    }

    /// `n` such that the concept lives in `D_n`.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn node(&self) -> &ConceptNode {
        &self.0.node
    }

    /// The concept as a domain element of `D_I`.
    pub fn handle(&self) -> DomainElement {
        DomainElement::Concept(self.0.id)
    }
}

#[derive(Default)]
struct Inner {
    table: HashMap<ConceptNode, Concept>,
    by_id: Vec<Concept>,
    families: Vec<Arc<Abstraction>>,
    family_ids: HashMap<Abstraction, FamilyId>,
}

/// Intern registry for concepts and abstraction templates. Safe to share
/// across threads; interning the same node from several threads yields
/// one id.
#[derive(Default)]
pub struct ConceptStore {
    inner: RwLock<Inner>,
}

impl fmt::Debug for ConceptStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConceptStore").field("concepts", &self.len()).finish()
    }
}

fn slot_count(args: &[AtomArg]) -> Result<usize, ConceptError> {
    let mut next = 1;
    let mut see = |s: usize| -> Result<(), ConceptError> {
        if s == next {
            next += 1;
            Ok(())
        } else if s >= 1 && s < next {
            Ok(())
        } else {
            Err(ConceptError::SlotOrder)
        }
    };
    for a in args {
        match a {
            AtomArg::Slot(s) => see(*s)?,
            AtomArg::Family { slots, .. } => {
                for s in slots {
                    see(*s)?;
                }
            }
            AtomArg::Elem(_) | AtomArg::Const(_) => {}
        }
    }
    Ok(next - 1)
}

impl ConceptStore {
    pub fn new() -> Self {
        ConceptStore::default()
    }

    /// Number of distinct concepts interned so far.
    pub fn len(&self) -> usize {
        self.inner.read().expect("store lock").by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, id: ConceptId) -> Option<Concept> {
        self.inner.read().expect("store lock").by_id.get(id.0 as usize).cloned()
    }

    /// Returns the unique concept for `node`, creating it if needed.
    /// `neg(neg(u))` is resolved to `u` before lookup.
    pub fn intern(&self, node: ConceptNode, degree: usize) -> Concept {
        if let ConceptNode::Neg(inner) = &node {
            if let ConceptNode::Neg(u) = inner.node() {
                return u.clone();
            }
        }
        if let Some(c) = self.inner.read().expect("store lock").table.get(&node) {
            return c.clone();
        }
        let mut inner = self.inner.write().expect("store lock");
        if let Some(c) = inner.table.get(&node) {
            return c.clone();
        }
        let id = ConceptId(inner.by_id.len() as u32);
        let c = Concept(Arc::new(ConceptData { id, degree, node: node.clone() }));
        inner.table.insert(node, c.clone());
        inner.by_id.push(c.clone());
        c
    }

    /// Registers an abstraction template, identified up to renaming of
    /// its `α` and `β` variables.
    pub fn intern_family(&self, abs: &Abstraction) -> FamilyId {
        let canon = canonical_template(abs);
        if let Some(id) = self.inner.read().expect("store lock").family_ids.get(&canon) {
            return *id;
        }
        let mut inner = self.inner.write().expect("store lock");
        if let Some(id) = inner.family_ids.get(&canon) {
            return *id;
        }
        let id = FamilyId(inner.families.len() as u32);
        inner.families.push(Arc::new(canon.clone()));
        inner.family_ids.insert(canon, id);
        id
    }

    /// The canonical template registered under `id`: its `β` variables
    /// are named `?1, ?2, ...` and its `α` variables `!1, !2, ...`.
    pub fn family(&self, id: FamilyId) -> Arc<Abstraction> {
        self.inner.read().expect("store lock").families[id.0 as usize].clone()
    }

    pub fn atom(&self, pred: PredicateSymbol, args: Vec<AtomArg>) -> Result<Concept, ConceptError> {
        if args.len() != pred.arity {
            return Err(ConceptError::ArityMismatch { expected: pred.arity, found: args.len(), pred });
        }
        let degree = slot_count(&args)?;
        if pred.is_truth() {
            return Ok(self.truth());
        }
        if pred.is_identity() && args == [AtomArg::Slot(1), AtomArg::Slot(2)] {
            return Ok(self.id_concept());
        }
        Ok(self.intern(ConceptNode::Atom { pred, args }, degree))
    }

    /// `Id ∈ D₂`.
    pub fn id_concept(&self) -> Concept {
        self.intern(ConceptNode::Id, 2)
    }

    /// `Truth ∈ D₀`.
    pub fn truth(&self) -> Concept {
        self.intern(ConceptNode::Truth, 0)
    }

    pub fn falsity(&self) -> Concept {
        self.neg(&self.truth())
    }

    /// `conj_S(u, v)` of degree `k + j − |S|` for a usable `S`, else `k + j`.
    pub fn conj(&self, pairs: JoinPairs, u: &Concept, v: &Concept) -> Concept {
        let (k, j) = (u.degree(), v.degree());
        let degree = if join_pairs_valid(&pairs, k, j) { k + j - pairs.len() } else { k + j };
        self.intern(ConceptNode::Conj { pairs, left: u.clone(), right: v.clone() }, degree)
    }

    pub fn neg(&self, u: &Concept) -> Concept {
        self.intern(ConceptNode::Neg(u.clone()), u.degree())
    }

    /// `exists_n(u)`; the identity when `n` is outside `1..=degree(u)`.
    pub fn exists(&self, n: usize, u: &Concept) -> Concept {
        if n < 1 || n > u.degree() {
            return u.clone();
        }
        self.intern(ConceptNode::Exists { index: n, sub: u.clone() }, u.degree() - 1)
    }

    pub fn necess(&self, u: &Concept) -> Concept {
        self.intern(ConceptNode::Necess(u.clone()), u.degree())
    }

    /// `union(B)` for a non-empty set of concepts of one degree. A
    /// singleton (after deduplication) is its own union.
    pub fn union<I>(&self, members: I) -> Result<Concept, ConceptError>
    where
        I: IntoIterator<Item = Concept>,
    {
        let set: BTreeSet<Concept> = members.into_iter().collect();
        let degrees: BTreeSet<usize> = set.iter().map(Concept::degree).collect();
        match degrees.len() {
            0 => return Err(ConceptError::EmptyUnion),
            1 => {}
            _ => return Err(ConceptError::MixedDegrees(degrees.into_iter().collect())),
        }
        let degree = *degrees.iter().next().expect("one degree");
        let mut members: Vec<Concept> = set.into_iter().collect();
        if members.len() == 1 {
            return Ok(members.pop().expect("one member"));
        }
        Ok(self.intern(ConceptNode::Union(members), degree))
    }

    /// `neg(conj_S(neg(u₁), conj_S(..., neg(uₙ))))` with `S = {(l,l) | 1 ≤ l ≤ i}`:
    /// the union written with the primitive operations only.
    pub fn union_expansion(&self, members: &[Concept]) -> Result<Concept, ConceptError> {
        let first = members.first().ok_or(ConceptError::EmptyUnion)?;
        let degree = first.degree();
        if members.iter().any(|m| m.degree() != degree) {
            return Err(ConceptError::MixedDegrees(members.iter().map(Concept::degree).collect()));
        }
        if members.len() == 1 {
            return Ok(first.clone());
        }
        let pairs: JoinPairs = (1..=degree).map(|l| (l, l)).collect();
        let mut acc = self.neg(members.last().expect("non-empty"));
        for m in members[..members.len() - 1].iter().rev() {
            acc = self.conj(pairs.clone(), &self.neg(m), &acc);
        }
        Ok(self.neg(&acc))
    }
}

/// Renames `β` to `?i` and `α` to `!i` so alpha-variant templates coincide.
fn canonical_template(abs: &Abstraction) -> Abstraction {
    let mut body = abs.body.clone();
    let mut alpha = Vec::with_capacity(abs.alpha.len());
    let mut beta = Vec::with_capacity(abs.beta.len());
    for (i, v) in abs.alpha.iter().enumerate() {
        let name = format!("!{}", i + 1);
        body = body.substitute(v, &Term::Var(name.clone())).expect("reserved names are never bound");
        alpha.push(name);
    }
    for (i, v) in abs.beta.iter().enumerate() {
        let name = format!("?{}", i + 1);
        body = body.substitute(v, &Term::Var(name.clone())).expect("reserved names are never bound");
        beta.push(name);
    }
    Abstraction { body, alpha, beta }
}

fn write_pairs(f: &mut fmt::Formatter<'_>, pairs: &JoinPairs) -> fmt::Result {
    f.write_str("{")?;
    for (i, (a, b)) in pairs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "({a},{b})")?;
    }
    f.write_str("}")
}

impl fmt::Display for AtomArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomArg::Slot(s) => write!(f, "_{s}"),
            AtomArg::Elem(e) => write!(f, "{}", Term::Elem(e.clone())),
            AtomArg::Const(c) => f.write_str(c),
            AtomArg::Family { family, slots } => {
                write!(f, "(abs {}", family.0)?;
                for s in slots {
                    write!(f, " _{s}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// S-expression rendering, e.g. `(conj {(1,1)} (atom p/1 _1) (neg (atom q/1 _1)))`.
impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            ConceptNode::Atom { pred, args } => {
                write!(f, "(atom {pred}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            ConceptNode::Conj { pairs, left, right } => {
                f.write_str("(conj ")?;
                write_pairs(f, pairs)?;
                write!(f, " {left} {right})")
            }
            ConceptNode::Neg(u) => write!(f, "(neg {u})"),
            ConceptNode::Exists { index, sub } => write!(f, "(exists {index} {sub})"),
            ConceptNode::Union(members) => {
                f.write_str("(union")?;
                for m in members {
                    write!(f, " {m}")?;
                }
                f.write_str(")")
            }
            ConceptNode::Necess(u) => write!(f, "(necess {u})"),
            ConceptNode::Id => f.write_str("Id"),
            ConceptNode::Truth => f.write_str("Truth"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unary(store: &ConceptStore, name: &str) -> Concept {
        store.atom(PredicateSymbol::new(name, 1), vec![AtomArg::Slot(1)]).unwrap()
    }

    fn of_degree(store: &ConceptStore, name: &str, n: usize) -> Concept {
        store.atom(PredicateSymbol::new(name, n), (1..=n).map(AtomArg::Slot).collect()).unwrap()
    }

    fn pairs(ps: &[(usize, usize)]) -> JoinPairs {
        ps.iter().copied().collect()
    }

    #[test]
    fn distinct_predicates_give_distinct_concepts() {
        let s = ConceptStore::new();
        let u = unary(&s, "p1");
        let v = unary(&s, "p2");
        assert_ne!(u.id(), v.id());
        assert_eq!(u.id(), unary(&s, "p1").id());
    }

    #[test]
    fn identity_atom_is_id_concept() {
        let s = ConceptStore::new();
        let id = s.atom(PredicateSymbol::identity(), vec![AtomArg::Slot(1), AtomArg::Slot(2)]).unwrap();
        assert_eq!(id, s.id_concept());
        assert_eq!(id.degree(), 2);
        let diag = s.atom(PredicateSymbol::identity(), vec![AtomArg::Slot(1), AtomArg::Slot(1)]).unwrap();
        assert_ne!(diag, s.id_concept());
        assert_eq!(diag.degree(), 1);
    }

    #[test]
    fn ground_atom_is_proposition() {
        let s = ConceptStore::new();
        let p = s
            .atom(
                PredicateSymbol::new("p", 2),
                vec![AtomArg::Elem(DomainElement::particular("a")), AtomArg::Elem(DomainElement::particular("b"))],
            )
            .unwrap();
        assert_eq!(p.degree(), 0);
        assert_eq!(s.truth().degree(), 0);
    }

    #[test]
    fn atom_errors() {
        let s = ConceptStore::new();
        assert!(matches!(
            s.atom(PredicateSymbol::new("p", 2), vec![AtomArg::Slot(1)]),
            Err(ConceptError::ArityMismatch { .. })
        ));
        assert_eq!(
            s.atom(PredicateSymbol::new("p", 2), vec![AtomArg::Slot(2), AtomArg::Slot(1)]),
            Err(ConceptError::SlotOrder)
        );
    }

    #[test]
    fn conj_degrees() {
        let s = ConceptStore::new();
        let u = of_degree(&s, "phi", 5);
        let v = of_degree(&s, "psi", 4);
        assert_eq!(s.conj(pairs(&[(4, 1), (2, 3)]), &u, &v).degree(), 7);
        let t = s.truth();
        assert_eq!(s.conj(JoinPairs::new(), &t, &t).degree(), 0);
        let p = unary(&s, "p");
        let q = unary(&s, "q");
        assert_eq!(s.conj(pairs(&[(1, 1)]), &p, &q).degree(), 1);
        assert_eq!(s.conj(pairs(&[(2, 1)]), &p, &q).degree(), 2);
    }

    #[test]
    fn neg_rules() {
        let s = ConceptStore::new();
        let u = of_degree(&s, "phi", 5);
        assert_eq!(s.neg(&u).degree(), 5);
        assert_eq!(s.neg(&s.neg(&u)), u);
        let f = s.neg(&s.truth());
        assert_eq!(f.degree(), 0);
        assert_eq!(f, s.falsity());
    }

    #[test]
    fn exists_rules() {
        let s = ConceptStore::new();
        let u = of_degree(&s, "phi", 5);
        assert_eq!(s.exists(3, &u).degree(), 4);
        assert_eq!(s.exists(0, &u), u);
        assert_eq!(s.exists(6, &u), u);
        assert_eq!(s.exists(1, &unary(&s, "p")).degree(), 0);
    }

    #[test]
    fn union_rules() {
        let s = ConceptStore::new();
        let p = unary(&s, "p");
        let q = unary(&s, "q");
        assert_eq!(s.union([p.clone()]).unwrap(), p);
        assert_eq!(s.union([p.clone(), p.clone()]).unwrap(), p);
        let pq = s.union([p.clone(), q.clone()]).unwrap();
        assert_eq!(pq.degree(), 1);
        assert_eq!(s.union([q.clone(), p.clone()]).unwrap(), pq);
        assert_eq!(s.union(Vec::new()), Err(ConceptError::EmptyUnion));
        assert!(matches!(s.union([p, s.truth()]), Err(ConceptError::MixedDegrees(_))));
    }

    #[test]
    fn necess_keeps_degree() {
        let s = ConceptStore::new();
        let p = unary(&s, "p");
        assert_eq!(s.necess(&p).degree(), 1);
        assert_ne!(s.necess(&p), p);
    }

    #[test]
    fn no_commutativity_collapse() {
        let s = ConceptStore::new();
        let p = unary(&s, "p");
        let q = unary(&s, "q");
        let pq = s.conj(pairs(&[(1, 1)]), &p, &q);
        let qp = s.conj(pairs(&[(1, 1)]), &q, &p);
        assert_ne!(pq, qp);
    }

    #[test]
    fn union_expansion_shape() {
        let s = ConceptStore::new();
        let p = unary(&s, "p");
        let q = unary(&s, "q");
        let e = s.union_expansion(&[p.clone(), q.clone()]).unwrap();
        assert_eq!(e.to_string(), "(neg (conj {(1,1)} (neg (atom p/1 _1)) (neg (atom q/1 _1))))");
        assert_eq!(s.union_expansion(&[p.clone()]).unwrap(), p);
    }

    #[test]
    fn pretty_printing() {
        let s = ConceptStore::new();
        let c = s.conj(pairs(&[(1, 1)]), &unary(&s, "p1"), &unary(&s, "p2"));
        assert_eq!(c.to_string(), "(conj {(1,1)} (atom p1/1 _1) (atom p2/1 _1))");
        assert_eq!(s.exists(1, &unary(&s, "p")).to_string(), "(exists 1 (atom p/1 _1))");
        assert_eq!(s.necess(&s.id_concept()).to_string(), "(necess Id)");
    }

    #[test]
    fn concurrent_interning_is_linearizable() {
        let s = Arc::new(ConceptStore::new());
        let ids: Vec<Vec<ConceptId>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..8)
                .map(|t| {
                    let s = Arc::clone(&s);
                    scope.spawn(move || {
                        (0..50)
                            .map(|i| {
                                let name = format!("p{}", (i + t) % 50);
                                s.atom(PredicateSymbol::new(name, 1), vec![AtomArg::Slot(1)]).unwrap().id()
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert_eq!(s.len(), 50);
        let by_name: HashMap<String, ConceptId> = (0..50)
            .map(|i| (format!("p{i}"), unary(&s, &format!("p{i}")).id()))
            .collect();
        for (t, row) in ids.iter().enumerate() {
            for (i, id) in row.iter().enumerate() {
                assert_eq!(by_name[&format!("p{}", (i + t) % 50)], *id);
            }
        }
    }
}
