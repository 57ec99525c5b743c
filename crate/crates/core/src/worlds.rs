//! Finite world sets under S5 accessibility: exhaustive enumeration,
//! Montague intensions, `□`/`◇` extensions, Kripke satisfaction and
//! intensional equivalence of abstracted terms.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::concepts::{Concept, ConceptStore};
use crate::element::DomainElement;
use crate::relalg::{all_tuples, identity_relation, Relation, Tuple};
use crate::semantics::{interpret, Extensionalizer, SemanticsError, World};
use crate::syntax::{Abstraction, Assignment, Formula, PredicateSymbol, Term};

/// Default bound on the number of enumerated worlds.
pub const DEFAULT_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorldsError {
    #[error("a world set needs at least one world")]
    Empty,
    #[error("world {0} does not share the domain and constants of the first world")]
    FrameMismatch(String),
    #[error("enumeration would produce 2^{bits} worlds, above the limit of {limit}")]
    LimitExceeded { bits: u64, limit: u64 },
    #[error("no world {0} in the set")]
    NoSuchWorld(String),
    #[error("abstractions have {left} and {right} abstracted variables")]
    AlphaArityMismatch { left: usize, right: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Non-empty list of worlds over one domain and constant map, each
/// accessible from every other.
#[derive(Debug, Clone)]
pub struct WorldSet {
    worlds: Vec<World>,
}

impl WorldSet {
    pub fn new(worlds: Vec<World>) -> Result<WorldSet, WorldsError> {
        let first = worlds.first().ok_or(WorldsError::Empty)?;
        if let Some(w) = worlds.iter().find(|w| !w.same_frame(first)) {
            return Err(WorldsError::FrameMismatch(w.name().to_string()));
        }
        Ok(WorldSet { worlds })
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn domain(&self) -> &[DomainElement] {
        self.worlds[0].domain()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, WorldsError> {
        self.worlds
            .iter()
            .position(|w| w.name() == name)
            .ok_or_else(|| WorldsError::NoSuchWorld(name.to_string()))
    }

    pub fn extensionalizer<'a>(&'a self, store: &'a ConceptStore) -> Extensionalizer<'a> {
        Extensionalizer::new(store, &self.worlds)
    }
}

/// Every assignment of extensions to `preds` over `domain`, named
/// `w0, w1, ...`. Predicates are ordered by name then arity, tuples
/// lexicographically; world `i` contains the tuple with bit number `j`
/// of `i` set, the first predicate taking the lowest bits.
pub fn enumerate_worlds(
    preds: &[PredicateSymbol],
    domain: Vec<DomainElement>,
    consts: BTreeMap<String, DomainElement>,
    limit: u64,
) -> Result<WorldSet, WorldsError> {
    let mut preds: Vec<PredicateSymbol> = preds.iter().filter(|p| !p.is_builtin()).cloned().collect();
    preds.sort_by(|a, b| (&a.name, a.arity).cmp(&(&b.name, b.arity)));
    preds.dedup();
    let mut domain = domain;
    domain.sort();
    domain.dedup();
    if domain.is_empty() {
        return Err(SemanticsError::EmptyDomain.into());
    }
    let cells: Vec<(usize, Tuple)> = preds
        .iter()
        .enumerate()
        .flat_map(|(i, p)| all_tuples(&domain, p.arity).into_iter().map(move |t| (i, t)))
        .collect();
    let bits = cells.len() as u64;
    if bits >= 64 || (1u64 << bits) > limit {
        return Err(WorldsError::LimitExceeded { bits, limit });
    }
    let (domain, consts) = (Arc::new(domain), Arc::new(consts));
    let identity = Arc::new(identity_relation(&domain));
    let labels = Arc::new(BTreeMap::new());
    let mut worlds = Vec::with_capacity(1 << bits);
    for i in 0u64..(1 << bits) {
        let mut rels: Vec<Relation> = preds.iter().map(|p| Relation::empty(p.arity)).collect();
        for (j, (p, t)) in cells.iter().enumerate() {
            if i >> j & 1 == 1 {
                rels[*p].insert(t.clone()).map_err(SemanticsError::from)?;
            }
        }
        worlds.push(World::from_shared(
            format!("w{i}"),
            domain.clone(),
            consts.clone(),
            preds.iter().cloned().zip(rels).collect(),
            identity.clone(),
            labels.clone(),
        )?);
    }
    WorldSet::new(worlds)
}

/// `I_n(φ)`: the concept of `φ` and its extension in each world.
#[derive(Debug, Clone)]
pub struct Intension {
    pub concept: Concept,
    /// `(world name, extension)` in world-set order.
    pub table: Vec<(String, Relation)>,
}

pub fn montague_intension(store: &ConceptStore, f: &Formula, ws: &WorldSet) -> Result<Intension, WorldsError> {
    let concept = interpret(store, f)?;
    let ext = ws.extensionalizer(store);
    let attrs = f.free_vars().into_vec();
    let table = (0..ws.len())
        .into_par_iter()
        .map(|w| -> Result<(String, Relation), SemanticsError> {
            let r = ext.extensionalize(&concept, w)?.with_attrs(attrs.clone())?;
            Ok((ws.worlds[w].name().to_string(), r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Intension { concept, table })
}

/// `⋂_w h_w(u)` over the set.
pub fn box_extension(store: &ConceptStore, u: &Concept, ws: &WorldSet) -> Result<Relation, WorldsError> {
    Ok(ws.extensionalizer(store).box_extension(u)?)
}

/// `⋃_w h_w(u)` over the set.
pub fn diamond_extension(store: &ConceptStore, u: &Concept, ws: &WorldSet) -> Result<Relation, WorldsError> {
    Ok(ws.extensionalizer(store).diamond_extension(u)?)
}

/// `M ⊨_{w,g} φ`, evaluated on `φ/g` clause by clause: atoms through
/// the world's relations, `∃x ψ` as `ψ` when `x` is not free in `ψ` and
/// otherwise as `ψ[x/u]` for some `u ∈ D`, and `□ψ` over every world.
pub fn satisfies(
    store: &ConceptStore,
    ws: &WorldSet,
    world: usize,
    g: &Assignment,
    f: &Formula,
) -> Result<bool, WorldsError> {
    if world >= ws.len() {
        return Err(WorldsError::NoSuchWorld(format!("#{world}")));
    }
    let sentence = f.ground(g).map_err(SemanticsError::from)?;
    Ok(sat(store, ws, world, &sentence)?)
}

fn sat(store: &ConceptStore, ws: &WorldSet, world: usize, f: &Formula) -> Result<bool, SemanticsError> {
    let w = &ws.worlds[world];
    Ok(match f {
        Formula::Atom { pred, args } => {
            if pred.is_truth() {
                return Ok(true);
            }
            let mut tuple = Vec::with_capacity(args.len());
            for t in args {
                tuple.push(match t {
                    Term::Elem(e) => e.clone(),
                    Term::Const(c) => w.constant(c)?.clone(),
                    Term::Abs(a) => interpret(store, &a.body)?.handle(),
                    Term::Var(v) => return Err(SemanticsError::UnboundVariable(v.clone())),
                });
            }
            w.relation(pred)?.contains(&tuple)
        }
        Formula::Conj(l, r) => sat(store, ws, world, l)? && sat(store, ws, world, r)?,
        Formula::Neg(s) => !sat(store, ws, world, s)?,
        Formula::Exists(x, s) if !s.is_free(x) => sat(store, ws, world, s)?,
        Formula::Exists(x, s) => {
            for u in w.domain() {
                if sat(store, ws, world, &s.substitute(x, &Term::Elem(u.clone()))?)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Nec(s) => {
            for v in 0..ws.len() {
                if !sat(store, ws, v, s)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// Where two abstractions were found to differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// `None` for weak equivalence, which compares across all worlds.
    pub world: Option<String>,
    pub tuple: Tuple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivReport {
    pub equivalent: bool,
    pub witness: Option<Witness>,
    /// Both sides denote the same interned concept.
    pub concepts_identical: bool,
    /// Number of worlds the verdict is relative to.
    pub worlds: usize,
}

struct Grounded {
    concept: Concept,
    /// Extension column `i` holds the `α` position `order[i]`.
    order: Vec<usize>,
}

fn ground_abstraction(store: &ConceptStore, t: &Abstraction, g: &Assignment) -> Result<Grounded, SemanticsError> {
    t.validate().map_err(|e| SemanticsError::MalformedAbstraction(e.to_string()))?;
    let values = t
        .beta
        .iter()
        .map(|b| g.get(b).cloned().ok_or_else(|| SemanticsError::UnboundVariable(b.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let body = t.body.instantiate(&t.beta, &values);
    let order = body
        .free_vars()
        .iter()
        .map(|v| t.alpha.iter().position(|a| a == v).expect("validated: free variables are α"))
        .collect();
    Ok(Grounded { concept: interpret(store, &body)?, order })
}

/// Reorders columns into `α` order.
fn align(r: &Relation, order: &[usize]) -> Result<Relation, SemanticsError> {
    let mut out = Relation::empty(r.arity());
    for t in r.iter() {
        let mut aligned = t.clone();
        for (col, &pos) in order.iter().enumerate() {
            aligned[pos] = t[col].clone();
        }
        out.insert(aligned)?;
    }
    Ok(out)
}

fn grounded_pair(
    store: &ConceptStore,
    t1: &Abstraction,
    t2: &Abstraction,
    g: &Assignment,
) -> Result<(Grounded, Grounded), WorldsError> {
    if t1.alpha.len() != t2.alpha.len() {
        return Err(WorldsError::AlphaArityMismatch { left: t1.alpha.len(), right: t2.alpha.len() });
    }
    Ok((ground_abstraction(store, t1, g)?, ground_abstraction(store, t2, g)?))
}

fn first_difference(a: &Relation, b: &Relation) -> Option<Tuple> {
    a.symmetric_difference(b).into_iter().next()
}

/// `t₁ ≍ t₂`: the grounded concepts have the same extension, columns
/// matched by `α` position, in every world of the set.
pub fn strong_equiv(
    store: &ConceptStore,
    t1: &Abstraction,
    t2: &Abstraction,
    g: &Assignment,
    ws: &WorldSet,
) -> Result<EquivReport, WorldsError> {
    let (a, b) = grounded_pair(store, t1, t2, g)?;
    let ext = ws.extensionalizer(store);
    let mut witness = None;
    for w in 0..ws.len() {
        let ra = align(&ext.extensionalize(&a.concept, w)?, &a.order)?;
        let rb = align(&ext.extensionalize(&b.concept, w)?, &b.order)?;
        if let Some(tuple) = first_difference(&ra, &rb) {
            witness = Some(Witness { world: Some(ws.worlds[w].name().to_string()), tuple });
            break;
        }
    }
    Ok(EquivReport {
        equivalent: witness.is_none(),
        witness,
        concepts_identical: a.concept == b.concept,
        worlds: ws.len(),
    })
}

/// `t₁ ≈ t₂`: equal `◇`-extensions, i.e. unions over all worlds.
pub fn weak_equiv(
    store: &ConceptStore,
    t1: &Abstraction,
    t2: &Abstraction,
    g: &Assignment,
    ws: &WorldSet,
) -> Result<EquivReport, WorldsError> {
    let (a, b) = grounded_pair(store, t1, t2, g)?;
    let ext = ws.extensionalizer(store);
    let ra = align(&ext.diamond_extension(&a.concept)?, &a.order)?;
    let rb = align(&ext.diamond_extension(&b.concept)?, &b.order)?;
    let witness = first_difference(&ra, &rb).map(|tuple| Witness { world: None, tuple });
    Ok(EquivReport {
        equivalent: witness.is_none(),
        witness,
        concepts_identical: a.concept == b.concept,
        worlds: ws.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::particulars;
    use crate::semantics::parse_world_set_file;
    use crate::syntax::{parse_abstraction, parse_formula, Signature};

    fn ab() -> Vec<DomainElement> {
        particulars(["a", "b"])
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::open()).unwrap()
    }

    fn p1() -> Vec<PredicateSymbol> {
        vec![PredicateSymbol::new("p", 1)]
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_worlds(&p1(), ab(), BTreeMap::new(), DEFAULT_LIMIT).unwrap().len(), 4);
        let pq = [PredicateSymbol::new("q", 2), PredicateSymbol::new("p", 1)];
        let ws = enumerate_worlds(&pq, ab(), BTreeMap::new(), DEFAULT_LIMIT).unwrap();
        assert_eq!(ws.len(), 64);
        assert_eq!(ws.worlds()[1].relation(&PredicateSymbol::new("p", 1)).unwrap().len(), 1);
        let big = enumerate_worlds(&[PredicateSymbol::new("p", 3)], particulars(["a", "b", "c", "d", "e", "f"]), BTreeMap::new(), DEFAULT_LIMIT);
        assert_eq!(big.unwrap_err(), WorldsError::LimitExceeded { bits: 216, limit: DEFAULT_LIMIT });
        assert!(matches!(
            enumerate_worlds(&pq, ab(), BTreeMap::new(), 63),
            Err(WorldsError::LimitExceeded { bits: 6, limit: 63 })
        ));
    }

    #[test]
    fn intension_table_and_modal_extensions() {
        let store = ConceptStore::new();
        let ws = enumerate_worlds(&p1(), ab(), BTreeMap::new(), DEFAULT_LIMIT).unwrap();
        let i = montague_intension(&store, &f("p(x)"), &ws).unwrap();
        let sizes: Vec<usize> = i.table.iter().map(|(_, r)| r.len()).collect();
        assert_eq!(sizes, [0, 1, 1, 2]);
        let u = i.concept;
        assert!(box_extension(&store, &u, &ws).unwrap().is_empty());
        assert_eq!(diamond_extension(&store, &u, &ws).unwrap(), Relation::of_names(1, &[&["a"], &["b"]]));
        assert!(box_extension(&store, &store.truth(), &ws).unwrap().is_true());
        assert!(diamond_extension(&store, &store.falsity(), &ws).unwrap().is_empty());
        let top = montague_intension(&store, &f("true"), &ws).unwrap();
        assert!(top.table.iter().all(|(_, r)| r.is_true()));
    }

    #[test]
    fn kripke_agrees_with_extensions() {
        let store = ConceptStore::new();
        let pq = [PredicateSymbol::new("p", 1), PredicateSymbol::new("q", 2)];
        let ws = enumerate_worlds(&pq, ab(), BTreeMap::new(), DEFAULT_LIMIT).unwrap();
        let ext = ws.extensionalizer(&store);
        for src in ["p(x) & ~q(x, y)", "exists y . q(x, y)", "box p(x)", "dia exists z . q(z, x)", "exists y . p(x)", "q(<< p(z) >>_{z}, x)"] {
            let phi = f(src);
            let fv = phi.free_vars().into_vec();
            for w in 0..ws.len() {
                for vals in all_tuples(ws.domain(), fv.len()) {
                    let g: Assignment = fv.iter().cloned().zip(vals.iter().cloned()).collect();
                    let direct = satisfies(&store, &ws, w, &g, &phi).unwrap();
                    let via = ext.extensionalize(&interpret(&store, &phi.ground(&g).unwrap()).unwrap(), w).unwrap();
                    assert_eq!(direct, via.is_true(), "{src} at {w}");
                }
            }
        }
        let pa = f("box p(#a)");
        let holds = ws.worlds().iter().all(|w| w.relation(&PredicateSymbol::new("p", 1)).unwrap().contains(&particulars(["a"])));
        assert_eq!(satisfies(&store, &ws, 0, &Assignment::new(), &pa).unwrap(), holds);
        assert!(satisfies(&store, &ws, 99, &Assignment::new(), &pa).is_err());
    }

    const BOUGHT_SOLD: &str = "worlds\ndomain a b\n\
        world w1\nrel bought/1 = (a)\nrel sold/1 = (a)\n\
        world w2\nrel bought/1 = (a) (b)\nrel sold/1 = (a) (b)\n\
        world w3\nrel bought/1 =\nrel sold/1 =\n";

    fn abs(s: &str) -> Abstraction {
        parse_abstraction(s, &Signature::open()).unwrap()
    }

    #[test]
    fn bought_and_sold_are_strongly_equivalent_yet_distinct() {
        let store = ConceptStore::new();
        let ws = WorldSet::new(parse_world_set_file(BOUGHT_SOLD, &store, &Signature::open()).unwrap().worlds).unwrap();
        let (t1, t2) = (abs("<< bought(x) >>_{x}"), abs("<< sold(x) >>_{x}"));
        let r = strong_equiv(&store, &t1, &t2, &Assignment::new(), &ws).unwrap();
        assert!(r.equivalent && !r.concepts_identical);
        assert_eq!(r.worlds, 3);
        assert!(weak_equiv(&store, &t1, &t2, &Assignment::new(), &ws).unwrap().equivalent);
        let same = strong_equiv(&store, &t1, &t1, &Assignment::new(), &ws).unwrap();
        assert!(same.equivalent && same.concepts_identical);
    }

    #[test]
    fn witnesses_and_weak_only() {
        let store = ConceptStore::new();
        let text = "domain a b\nworld u\nrel p/1 = (a)\nrel q/1 =\nworld v\nrel p/1 =\nrel q/1 = (a)\n";
        let ws = WorldSet::new(parse_world_set_file(text, &store, &Signature::open()).unwrap().worlds).unwrap();
        let g = Assignment::new();
        let (tp, tq) = (abs("<< p(x) >>_{x}"), abs("<< q(x) >>_{x}"));
        let strong = strong_equiv(&store, &tp, &tq, &g, &ws).unwrap();
        assert!(!strong.equivalent);
        assert_eq!(strong.witness, Some(Witness { world: Some("u".into()), tuple: particulars(["a"]) }));
        assert!(weak_equiv(&store, &tp, &tq, &g, &ws).unwrap().equivalent);
        let (sp, sq) = (abs("<< exists x . p(x) >>_{}"), abs("<< exists x . q(x) >>_{}"));
        assert!(!strong_equiv(&store, &sp, &sq, &g, &ws).unwrap().equivalent);
        assert!(weak_equiv(&store, &sp, &sq, &g, &ws).unwrap().equivalent);
        assert_eq!(
            strong_equiv(&store, &tp, &sp, &g, &ws).unwrap_err(),
            WorldsError::AlphaArityMismatch { left: 1, right: 0 }
        );
    }

    #[test]
    fn alignment_follows_alpha_positions() {
        let store = ConceptStore::new();
        let text = "domain a b\nrel r/2 = (a, b)\nrel s/2 = (b, a)\n";
        let ws = WorldSet::new(parse_world_set_file(text, &store, &Signature::open()).unwrap().worlds).unwrap();
        let g = Assignment::new();
        let r = strong_equiv(&store, &abs("<< r(x, y) >>_{x, y}"), &abs("<< s(y, x) >>_{x, y}"), &g, &ws).unwrap();
        assert!(r.equivalent);
        let r = strong_equiv(&store, &abs("<< r(x, y) >>_{x, y}"), &abs("<< s(x, y) >>_{x, y}"), &g, &ws).unwrap();
        assert!(!r.equivalent);
        let with_beta = abs("<< r(x, y) >>_{x}^{y}");
        let gb = Assignment::from([("y".to_string(), DomainElement::particular("b"))]);
        let r = strong_equiv(&store, &with_beta, &abs("<< s(y, x) >>_{x}^{y}"), &gb, &ws).unwrap();
        assert!(r.equivalent);
        assert!(strong_equiv(&store, &with_beta, &with_beta, &Assignment::new(), &ws).is_err());
    }

    #[test]
    fn frames_must_match() {
        let a = World::new("a", particulars(["a"]), BTreeMap::new(), BTreeMap::new()).unwrap();
        let b = World::new("b", particulars(["a", "b"]), BTreeMap::new(), BTreeMap::new()).unwrap();
        assert_eq!(WorldSet::new(vec![a, b]).unwrap_err(), WorldsError::FrameMismatch("b".into()));
        assert_eq!(WorldSet::new(vec![]).unwrap_err(), WorldsError::Empty);
    }
}
