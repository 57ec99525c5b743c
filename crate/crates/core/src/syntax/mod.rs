//! Terms and formulas of intensional FOL with the abstraction operator
//! `⋖φ⋗_α^β`: parsing, free variables, substitution and grounding.

mod ast;
mod lexer;
mod parser;
mod signature;

pub use ast::{Abstraction, Assignment, Formula, PredicateSymbol, Term, VarTuple};
pub use parser::{parse_abstraction, parse_formula, parse_term};
pub use signature::Signature;

pub(crate) use signature::strip_comment;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unexpected character `{found}` at offset {pos}")]
    Lex { pos: usize, found: char },
    #[error("parse error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("arity mismatch: {name} used with {found} argument(s), declared arity {declared:?}")]
    ArityMismatch { name: String, found: usize, declared: Vec<usize> },
    #[error("malformed abstraction: {0}")]
    MalformedAbstraction(String),
    #[error("undeclared {0}")]
    UnknownSymbol(String),
    #[error("substitution would capture variable {var} under {binder}")]
    Capture { var: String, binder: String },
    #[error("assignment does not cover free variable {0}")]
    AssignmentIncomplete(String),
    #[error("signature line {line}: {message}")]
    Signature { line: usize, message: String },
}

/// Canonical free-variable tuple of a formula.
pub fn free_vars(f: &Formula) -> VarTuple {
    f.free_vars()
}

/// `φ[var/t]`, failing if a free variable of `t` would be captured.
pub fn substitute(f: &Formula, var: &str, t: &Term) -> Result<Formula, SyntaxError> {
    f.substitute(var, t)
}

/// `φ/g`: every free variable replaced by its assigned element.
pub fn ground(f: &Formula, g: &Assignment) -> Result<Formula, SyntaxError> {
    f.ground(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::DomainElement;

    fn open(s: &str) -> Formula {
        parse_formula(s, &Signature::open()).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    fn vars(t: &VarTuple) -> Vec<&str> {
        t.iter().map(String::as_str).collect()
    }

    #[test]
    fn conjunction_free_tuple() {
        let f = open("p(x_i,x_j,x_k,x_l,x_m) & q(x_l,y_i,x_j,y_j)");
        assert!(matches!(f, Formula::Conj(..)));
        assert_eq!(vars(&f.free_vars()), ["x_i", "x_j", "x_k", "x_l", "x_m", "y_i", "y_j"]);
    }

    #[test]
    fn contradiction_abstraction() {
        let f = open("r(<< p(x) & ~p(x) >>_{}^{x})");
        let Formula::Atom { args, .. } = &f else { panic!() };
        let Term::Abs(a) = &args[0] else { panic!() };
        assert!(a.alpha.is_empty());
        assert_eq!(a.beta, ["x"]);
        assert_eq!(a.body, Formula::conj(Formula::pred("p", &["x"]), Formula::neg(Formula::pred("p", &["x"]))));
        assert_eq!(vars(&f.free_vars()), ["x"]);
    }

    #[test]
    fn arity_mismatch_against_signature() {
        let sig = Signature::with_predicates(&[("p", 2)]);
        let err = parse_formula("exists x . p(x)", &sig).unwrap_err();
        assert!(matches!(err, SyntaxError::ArityMismatch { ref name, found: 1, .. } if name == "p"), "{err}");
    }

    #[test]
    fn undeclared_symbols_in_strict_mode() {
        let sig = Signature::with_predicates(&[("p", 1)]);
        assert!(matches!(parse_formula("q(x)", &sig), Err(SyntaxError::UnknownSymbol(_))));
        assert!(matches!(parse_formula("p(c)", &sig), Err(SyntaxError::UnknownSymbol(_))));
        let mut sig = sig;
        sig.declare_const("c");
        assert!(parse_formula("p(c)", &sig).is_ok());
    }

    #[test]
    fn existential_removes_variable() {
        let f = open("exists x_k . p(x_i,x_j,x_k,x_l,x_m)");
        assert_eq!(vars(&f.free_vars()), ["x_i", "x_j", "x_l", "x_m"]);
    }

    #[test]
    fn sentences_have_no_free_variables() {
        assert!(open("forall x . exists y . q(x, y)").free_vars().is_empty());
        assert!(open("true").is_sentence());
    }

    #[test]
    fn alpha_binds_inside_abstraction() {
        let f = open("r(x, << p(y,z) >>_{y}^{z})");
        assert_eq!(vars(&f.free_vars()), ["x", "z"]);
    }

    #[test]
    fn alpha_may_reorder() {
        let f = open("r(<< p(x,y) >>_{y,x})");
        assert!(f.is_sentence());
    }

    #[test]
    fn malformed_abstractions() {
        let sig = Signature::open();
        for bad in [
            "r(<< p(x,y) >>_{x})",
            "r(<< p(x,y) >>_{x}^{})",
            "r(<< p(x,y) >>_{x,x}^{y})",
            "r(<< p(x) >>_{z}^{x})",
            "r(<< p(x,y) >>_{}^{y,x})",
        ] {
            assert!(
                matches!(parse_formula(bad, &sig), Err(SyntaxError::MalformedAbstraction(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let p = || Formula::pred("p", &["x"]);
        let q = || Formula::pred("q", &["x"]);
        let r = || Formula::pred("r", &["x"]);
        assert_eq!(open("~p(x) & q(x)"), Formula::conj(Formula::neg(p()), q()));
        assert_eq!(open("p(x) | q(x) & r(x)"), Formula::or(p(), Formula::conj(q(), r())));
        assert_eq!(open("p(x) -> q(x) -> r(x)"), Formula::implies(p(), Formula::implies(q(), r())));
        assert_eq!(open("p(x) -> q(x) <-> r(x)"), Formula::iff(Formula::implies(p(), q()), r()));
        assert_eq!(open("exists x . p(x) & q(x)"), Formula::exists("x", Formula::conj(p(), q())));
        assert_eq!(open("(exists x . p(x)) & q(x)"), Formula::conj(Formula::exists("x", p()), q()));
    }

    #[test]
    fn derived_connectives_are_desugared() {
        let f = open("forall x . p(x) | q(x) -> r(x) <-> exists1 x . p(x)");
        fn core(f: &Formula) -> bool {
            match f {
                Formula::Atom { .. } => true,
                Formula::Conj(l, r) => core(l) && core(r),
                Formula::Neg(s) | Formula::Exists(_, s) => core(s),
                Formula::Nec(_) => false,
            }
        }
        assert!(core(&f));
    }

    #[test]
    fn exists_unique_shape() {
        let phi = Formula::pred("p", &["x"]);
        let expected = Formula::conj(
            Formula::exists("x", phi.clone()),
            Formula::forall(
                "x",
                Formula::forall(
                    "y_1",
                    Formula::implies(
                        Formula::conj(phi.clone(), Formula::pred("p", &["y_1"])),
                        Formula::identity(Term::var("x"), Term::var("y_1")),
                    ),
                ),
            ),
        );
        assert_eq!(open("exists1 x . p(x)"), expected);
        // fresh name avoids variables already in the body
        let f = open("exists1 x . q(x, y_1)");
        assert!(f.all_vars().contains(&"y_2".to_string()));
    }

    #[test]
    fn identity_and_constants() {
        let f = open("x == c");
        assert_eq!(f, Formula::identity(Term::var("x"), Term::constant("c")));
        assert_eq!(open("#a == #@4"), Formula::identity(Term::elem("a"), Term::Elem(DomainElement::Concept(crate::element::ConceptId(4)))));
    }

    #[test]
    fn zero_ary_predicates_and_truth() {
        assert_eq!(open("rain & true"), Formula::conj(Formula::pred("rain", &[]), Formula::top()));
        assert_eq!(open("false"), Formula::bottom());
    }

    #[test]
    fn parse_errors() {
        let sig = Signature::open();
        for bad in ["", "p(x", "p(x) &", "exists . p(x)", "exists a . p(a)", "x", "p(x) q(x)", "f(x) == y", "<< p(x) >>"] {
            assert!(parse_formula(bad, &sig).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn substitution_replaces_free_occurrences() {
        let f = open("p(x) & q(y)");
        assert_eq!(substitute(&f, "x", &Term::constant("c")).unwrap(), open("p(c) & q(y)"));
        let g = open("p(x) & exists x . q(x)");
        assert_eq!(substitute(&g, "x", &Term::elem("a")).unwrap(), open("p(#a) & exists x . q(x)"));
    }

    #[test]
    fn substitution_capture() {
        let f = open("exists x . q(x, y)");
        assert!(matches!(substitute(&f, "y", &Term::var("x")), Err(SyntaxError::Capture { .. })));
        let g = open("r(<< q(x, y) >>_{x}^{y})");
        assert!(matches!(substitute(&g, "y", &Term::var("x")), Err(SyntaxError::Capture { .. })));
        // renaming into a non-captured variable is fine and updates beta
        let h = substitute(&g, "y", &Term::var("z")).unwrap();
        assert_eq!(h, open("r(<< q(x, z) >>_{x}^{z})"));
    }

    #[test]
    fn sequential_beta_substitution() {
        let f = open("q(y1, y2) & p(x)");
        let out = f.instantiate(
            &["y1".to_string(), "y2".to_string()],
            &[DomainElement::particular("a"), DomainElement::particular("b")],
        );
        assert_eq!(out, open("q(#a, #b) & p(x)"));
    }

    #[test]
    fn grounding() {
        let g: Assignment = [("x".to_string(), DomainElement::particular("a"))].into();
        assert_eq!(ground(&open("p(x)"), &g).unwrap(), open("p(#a)"));

        let g: Assignment = [("y".to_string(), DomainElement::particular("b"))].into();
        let t = open("r(<< q(x,y) >>_{x}^{y})");
        assert_eq!(ground(&t, &g).unwrap(), open("r(<< q(x,#b) >>_{x})"));

        let closed = open("exists x . p(x)");
        assert_eq!(ground(&closed, &Assignment::new()).unwrap(), closed);

        assert!(matches!(ground(&open("q(x,y)"), &g), Err(SyntaxError::AssignmentIncomplete(v)) if v == "x"));
    }

    #[test]
    fn printing_examples() {
        assert_eq!(open("p(x) & ~q(x, c)").to_string(), "(p(x) & ~q(x, c))");
        assert_eq!(open("r(<< p(x,y) >>_{x}^{y})").to_string(), "r(<< p(x, y) >>_{x}^{y})");
        assert_eq!(open("~(x == y)").to_string(), "~(x == y)");
        assert_eq!(open("box p(#a)").to_string(), "box p(#a)");
    }
}
