//! The fixed intensional interpretation `I`: formulas to concepts.

use crate::concepts::{AtomArg, Concept, ConceptStore};
use crate::element::DomainElement;
use crate::relalg::{all_tuples, JoinPairs};
use crate::syntax::{Abstraction, Formula, Term};

use super::SemanticsError;

/// Compiles `f` homomorphically:
///
/// * `I(p(t₁..tₖ))` is an atomic concept whose slots follow the atom's
///   free-variable tuple,
/// * `I(φ ∧ ψ) = conj_S(I(φ), I(ψ))` with `S` pairing the positions of
///   the variables shared by the two tuples,
/// * `I(¬φ) = neg(I(φ))`,
/// * `I(∃x φ) = exists_n(I(φ))` with `n` the position of `x` in the tuple
///   of `φ`, or `0` when `x` is not free,
/// * `I(□φ) = necess(I(φ))`.
pub fn interpret(store: &ConceptStore, f: &Formula) -> Result<Concept, SemanticsError> {
    Ok(match f {
        Formula::Atom { pred, args } => {
            let slots = f.free_vars();
            let slot = |v: &String| slots.position(v).expect("variable is free in its own atom");
            let mut out = Vec::with_capacity(args.len());
            for t in args {
                out.push(match t {
                    Term::Var(v) => AtomArg::Slot(slot(v)),
                    Term::Const(c) => AtomArg::Const(c.clone()),
                    Term::Elem(e) => AtomArg::Elem(e.clone()),
                    Term::Abs(a) if a.beta.is_empty() => AtomArg::Elem(interpret(store, &a.body)?.handle()),
                    Term::Abs(a) => AtomArg::Family {
                        family: store.intern_family(a),
                        slots: a.beta.iter().map(slot).collect(),
                    },
                });
            }
            store.atom(pred.clone(), out)?
        }
        Formula::Conj(l, r) => {
            let (lv, rv) = (l.free_vars(), r.free_vars());
            let pairs: JoinPairs = lv
                .iter()
                .enumerate()
                .filter_map(|(i, v)| rv.position(v).map(|j| (i + 1, j)))
                .collect();
            store.conj(pairs, &interpret(store, l)?, &interpret(store, r)?)
        }
        Formula::Neg(s) => store.neg(&interpret(store, s)?),
        Formula::Exists(x, s) => {
            let n = s.free_vars().position(x).unwrap_or(0);
            store.exists(n, &interpret(store, s)?)
        }
        Formula::Nec(s) => store.necess(&interpret(store, s)?),
    })
}

/// `I(⋖φ⋗_α^β) = union({I(φ[β/g(β)]) | g ∈ D^β})`, with `β` ranging over
/// `domain`. When `β` is empty this is `I(φ)`.
///
/// An abstraction whose `α ∪ β` differs from the free variables of `φ`
/// has no concept; it is reported as [`SemanticsError::MalformedAbstraction`].
pub fn interpret_abstraction(
    store: &ConceptStore,
    abs: &Abstraction,
    domain: &[DomainElement],
) -> Result<Concept, SemanticsError> {
    abs.validate().map_err(|e| SemanticsError::MalformedAbstraction(e.to_string()))?;
    if abs.beta.is_empty() {
        return interpret(store, &abs.body);
    }
    let mut members = Vec::new();
    for values in all_tuples(domain, abs.beta.len()) {
        members.push(interpret(store, &abs.body.instantiate(&abs.beta, &values))?);
    }
    Ok(store.union(members)?)
}

/// `I(φ[β/g(β)])`: the concept denoted by an abstraction once its `β`
/// variables are fixed.
pub fn instantiate_abstraction(
    store: &ConceptStore,
    abs: &Abstraction,
    values: &[DomainElement],
) -> Result<Concept, SemanticsError> {
    interpret(store, &abs.body.instantiate(&abs.beta, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::particulars;
    use crate::syntax::{parse_formula, parse_term, Signature};

    fn parse(s: &str) -> Formula {
        parse_formula(s, &Signature::open()).unwrap()
    }

    fn sexp(store: &ConceptStore, s: &str) -> String {
        interpret(store, &parse(s)).unwrap().to_string()
    }

    #[test]
    fn conjunction_join_pairs() {
        let store = ConceptStore::new();
        let c = interpret(&store, &parse("phi(x_i,x_j,x_k,x_l,x_m) & psi(x_l,y_i,x_j,y_j)")).unwrap();
        let crate::concepts::ConceptNode::Conj { pairs, left, right } = c.node() else { panic!("{c}") };
        assert_eq!(pairs, &JoinPairs::from([(4, 1), (2, 3)]));
        assert_eq!((left.degree(), right.degree(), c.degree()), (5, 4, 7));
    }

    #[test]
    fn shared_unary_variable() {
        let store = ConceptStore::new();
        assert_eq!(sexp(&store, "p1(x) & p2(x)"), "(conj {(1,1)} (atom p1/1 _1) (atom p2/1 _1))");
    }

    #[test]
    fn existential_positions() {
        let store = ConceptStore::new();
        assert_eq!(sexp(&store, "exists x_k . phi(x_i,x_j,x_k,x_l,x_m)"), "(exists 3 (atom phi/5 _1 _2 _3 _4 _5))");
        // first-occurrence tuple of phi(x_i,x_j,x_i,x_k) is (x_i,x_j,x_k)
        assert_eq!(sexp(&store, "exists x_i . phi(x_i,x_j,x_i,x_k)"), "(exists 1 (atom phi/4 _1 _2 _1 _3))");
        // not free: exists_0 is the identity
        assert_eq!(sexp(&store, "exists y . p(x)"), "(atom p/1 _1)");
    }

    #[test]
    fn double_negation_and_alpha_variants() {
        let store = ConceptStore::new();
        let a = interpret(&store, &parse("~~p(x)")).unwrap();
        let b = interpret(&store, &parse("p(x)")).unwrap();
        let c = interpret(&store, &parse("p(y)")).unwrap();
        assert_eq!(a.id(), b.id());
        assert_eq!(b.id(), c.id());
        assert_ne!(interpret(&store, &parse("q(x,y)")).unwrap(), interpret(&store, &parse("q(x,x)")).unwrap());
    }

    #[test]
    fn identity_and_truth() {
        let store = ConceptStore::new();
        assert_eq!(interpret(&store, &parse("x == y")).unwrap(), store.id_concept());
        assert_eq!(interpret(&store, &parse("true")).unwrap(), store.truth());
        assert_eq!(sexp(&store, "x == #a"), "(atom ==/2 _1 #a)");
    }

    #[test]
    fn abstraction_arguments() {
        let store = ConceptStore::new();
        let closed = interpret(&store, &parse("r(<< p(x) >>_{x})")).unwrap();
        let inner = interpret(&store, &parse("p(x)")).unwrap();
        assert_eq!(closed.to_string(), format!("(atom r/1 #@{})", inner.id()));
        let open = interpret(&store, &parse("r(x, << q(y,z) >>_{y}^{z})")).unwrap();
        assert_eq!(open.degree(), 2);
        assert_eq!(open.to_string(), "(atom r/2 _1 (abs 0 _2))");
        // alpha-variant templates share a family
        let again = interpret(&store, &parse("r(y, << q(x,z) >>_{x}^{z})")).unwrap();
        assert_eq!(open, again);
    }

    #[test]
    fn abstraction_interpretation() {
        let store = ConceptStore::new();
        let d = particulars(["a", "b"]);
        let sig = Signature::open();
        let abs = |s: &str| match parse_term(s, &sig).unwrap() {
            Term::Abs(a) => *a,
            _ => unreachable!(),
        };
        // closed body
        let c = interpret_abstraction(&store, &abs("<< exists x . p(x) >>_{}"), &d).unwrap();
        assert_eq!(c, interpret(&store, &parse("exists x . p(x)")).unwrap());
        assert_eq!(c.degree(), 0);
        // beta empty, alpha all variables
        let c = interpret_abstraction(&store, &abs("<< q(x,y) >>_{x,y}"), &d).unwrap();
        assert_eq!(c, interpret(&store, &parse("q(x,y)")).unwrap());
        // beta = (x) over {a, b}
        let c = interpret_abstraction(&store, &abs("<< p(x) >>_{}^{x}"), &d).unwrap();
        let pa = interpret(&store, &parse("p(#a)")).unwrap();
        let pb = interpret(&store, &parse("p(#b)")).unwrap();
        assert_eq!(c, store.union([pa, pb]).unwrap());
        // degree follows alpha
        assert_eq!(interpret_abstraction(&store, &abs("<< q(x,y) >>_{x}^{y}"), &d).unwrap().degree(), 1);
    }

    #[test]
    fn malformed_abstraction_is_an_error() {
        let store = ConceptStore::new();
        let bad = Abstraction { body: parse("q(x,y)"), alpha: vec!["x".into()], beta: vec![] };
        assert!(matches!(
            interpret_abstraction(&store, &bad, &particulars(["a"])),
            Err(SemanticsError::MalformedAbstraction(_))
        ));
    }
}
