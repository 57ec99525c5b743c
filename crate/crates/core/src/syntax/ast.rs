use std::collections::BTreeMap;
use std::fmt;

use crate::element::DomainElement;

use super::SyntaxError;

/// A predicate letter `p^k`. Symbols are identified by `(name, arity)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredicateSymbol {
    pub name: String,
    pub arity: usize,
}

impl PredicateSymbol {
    pub const IDENTITY_NAME: &'static str = "==";
    pub const TRUTH_NAME: &'static str = "true";

    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredicateSymbol { name: name.into(), arity }
    }

    /// The built-in binary identity predicate.
    pub fn identity() -> Self {
        PredicateSymbol::new(Self::IDENTITY_NAME, 2)
    }

    /// The 0-ary tautology `⊤`.
    pub fn truth() -> Self {
        PredicateSymbol::new(Self::TRUTH_NAME, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.name == Self::IDENTITY_NAME && self.arity == 2
    }

    pub fn is_truth(&self) -> bool {
        self.name == Self::TRUTH_NAME && self.arity == 0
    }

    /// Identity and truth are interpreted the same way in every world.
    pub fn is_builtin(&self) -> bool {
        self.is_identity() || self.is_truth()
    }
}

impl fmt::Display for PredicateSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Assignment `g: V → D`, possibly partial.
pub type Assignment = BTreeMap<String, DomainElement>;

/// Ordered tuple of distinct variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VarTuple(Vec<String>);

impl VarTuple {
    pub fn new() -> Self {
        VarTuple(Vec::new())
    }

    /// Appends `name` unless it is already present.
    pub fn push(&mut self, name: &str) {
        if !self.contains(name) {
            self.0.push(name.to_string());
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.iter().any(|v| v == name)
    }

    /// 1-based position of `name`.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name).map(|i| i + 1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<String> {
        self.0
    }
}

impl From<Vec<String>> for VarTuple {
    fn from(mut names: Vec<String>) -> Self {
        let mut seen = std::collections::HashSet::new();
        names.retain(|n| seen.insert(n.clone()));
        VarTuple(names)
    }
}

impl<'a> From<&[&'a str]> for VarTuple {
    fn from(names: &[&'a str]) -> Self {
        VarTuple::from(names.iter().map(|s| s.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for VarTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.join(","))
    }
}

/// A term of the language: variable, constant, literal domain element
/// (produced by grounding) or abstracted term `⋖φ⋗_α^β`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    Elem(DomainElement),
    Abs(Box<Abstraction>),
}

/// The abstracted term `⋖body⋗_alpha^beta`.
///
/// `alpha` holds the variables abstracted over (bound inside the term),
/// `beta` the remaining free variables of `body` in their body order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Abstraction {
    pub body: Formula,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
}

/// Core formulas. Derived connectives are expanded by the constructors
/// below, so only these variants ever occur.
///
/// `Nec` is the S5 necessity operator used by the modal layer; it is not
/// part of the extensional fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { pred: PredicateSymbol, args: Vec<Term> },
    Conj(Box<Formula>, Box<Formula>),
    Neg(Box<Formula>),
    Exists(String, Box<Formula>),
    Nec(Box<Formula>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn elem(name: impl Into<String>) -> Term {
        Term::Elem(DomainElement::particular(name))
    }

    /// Builds `⋖body⋗_alpha^beta` with `beta` computed from the body.
    pub fn abstraction(body: Formula, alpha: &[&str]) -> Result<Term, SyntaxError> {
        Abstraction::new(body, alpha.iter().map(|s| s.to_string()).collect()).map(|a| Term::Abs(Box::new(a)))
    }

    /// Free variables in left-to-right order of first free occurrence.
    pub fn free_vars(&self) -> VarTuple {
        let mut out = VarTuple::new();
        collect_term(self, &mut Vec::new(), &mut out);
        out
    }
}

impl Abstraction {
    /// Builds an abstraction over `alpha`, computing `beta` as the
    /// remaining free variables of `body`.
    pub fn new(body: Formula, alpha: Vec<String>) -> Result<Abstraction, SyntaxError> {
        let free = body.free_vars();
        let beta = free.iter().filter(|v| !alpha.contains(v)).cloned().collect();
        let abs = Abstraction { body, alpha, beta };
        abs.validate()?;
        Ok(abs)
    }

    /// Checks that `alpha` is a distinct sublist of the body's free
    /// variables and that `beta` is exactly the remainder in body order.
    pub fn validate(&self) -> Result<(), SyntaxError> {
        let free = self.body.free_vars();
        for (i, a) in self.alpha.iter().enumerate() {
            if self.alpha[..i].contains(a) {
                return Err(SyntaxError::MalformedAbstraction(format!(
                    "variable {a} listed twice in alpha"
                )));
            }
            if !free.contains(a) {
                return Err(SyntaxError::MalformedAbstraction(format!(
                    "alpha variable {a} is not free in the body {}",
                    self.body
                )));
            }
        }
        let expected: Vec<String> = free.iter().filter(|v| !self.alpha.contains(v)).cloned().collect();
        if expected != self.beta {
            return Err(SyntaxError::MalformedAbstraction(format!(
                "beta must be ({}) for body {} with alpha ({}), found ({})",
                expected.join(","),
                self.body,
                self.alpha.join(","),
                self.beta.join(",")
            )));
        }
        Ok(())
    }

    fn recompute_beta(&mut self) {
        let free = self.body.free_vars();
        self.beta = free.iter().filter(|v| !self.alpha.contains(v)).cloned().collect();
    }
}

impl Formula {
    pub fn atom(pred: PredicateSymbol, args: Vec<Term>) -> Formula {
        Formula::Atom { pred, args }
    }

    /// Atom over variables only, e.g. `Formula::pred("p", &["x", "y"])`.
    pub fn pred(name: &str, vars: &[&str]) -> Formula {
        Formula::atom(
            PredicateSymbol::new(name, vars.len()),
            vars.iter().map(|v| Term::var(*v)).collect(),
        )
    }

    pub fn top() -> Formula {
        Formula::atom(PredicateSymbol::truth(), Vec::new())
    }

    pub fn bottom() -> Formula {
        Formula::neg(Formula::top())
    }

    pub fn identity(left: Term, right: Term) -> Formula {
        Formula::atom(PredicateSymbol::identity(), vec![left, right])
    }

    pub fn conj(left: Formula, right: Formula) -> Formula {
        Formula::Conj(Box::new(left), Box::new(right))
    }

    pub fn neg(sub: Formula) -> Formula {
        Formula::Neg(Box::new(sub))
    }

    pub fn exists(var: impl Into<String>, sub: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(sub))
    }

    pub fn nec(sub: Formula) -> Formula {
        Formula::Nec(Box::new(sub))
    }

    /// `◇φ = ¬□¬φ`
    pub fn possibly(sub: Formula) -> Formula {
        Formula::neg(Formula::nec(Formula::neg(sub)))
    }

    /// `∀x φ = ¬∃x ¬φ`
    pub fn forall(var: impl Into<String>, sub: Formula) -> Formula {
        Formula::neg(Formula::exists(var, Formula::neg(sub)))
    }

    /// `φ ∨ ψ = ¬(¬φ ∧ ¬ψ)`
    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::neg(Formula::conj(Formula::neg(left), Formula::neg(right)))
    }

    /// `φ ⇒ ψ = ¬φ ∨ ψ`
    pub fn implies(left: Formula, right: Formula) -> Formula {
        Formula::or(Formula::neg(left), right)
    }

    /// `φ ≡ ψ = (φ ⇒ ψ) ∧ (ψ ⇒ φ)`
    pub fn iff(left: Formula, right: Formula) -> Formula {
        Formula::conj(
            Formula::implies(left.clone(), right.clone()),
            Formula::implies(right, left),
        )
    }

    /// `(∃₁x)φ(x) = (∃x)φ(x) ∧ (∀x)(∀y)(φ(x) ∧ φ(y) ⇒ x ≐ y)` with `y`
    /// fresh for `φ`.
    pub fn exists_unique(var: &str, sub: Formula) -> Formula {
        let used = sub.all_vars();
        let fresh = (1..)
            .map(|i| format!("y_{i}"))
            .find(|n| n != var && !used.contains(n))
            .expect("unbounded supply of names");
        let renamed = sub
            .substitute(var, &Term::var(fresh.clone()))
            .expect("fresh variable cannot be captured");
        Formula::conj(
            Formula::exists(var, sub.clone()),
            Formula::forall(
                var,
                Formula::forall(
                    fresh.clone(),
                    Formula::implies(
                        Formula::conj(sub, renamed),
                        Formula::identity(Term::var(var), Term::var(fresh)),
                    ),
                ),
            ),
        )
    }

    /// Canonical tuple of free variables, by first free occurrence.
    pub fn free_vars(&self) -> VarTuple {
        let mut out = VarTuple::new();
        collect_formula(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_free(&self, var: &str) -> bool {
        self.free_vars().contains(var)
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        });
        out
    }

    fn visit_vars(&self, f: &mut dyn FnMut(&str)) {
        match self {
            Formula::Atom { args, .. } => {
                for t in args {
                    visit_term_vars(t, f);
                }
            }
            Formula::Conj(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
            Formula::Neg(s) | Formula::Nec(s) => s.visit_vars(f),
            Formula::Exists(x, s) => {
                f(x);
                s.visit_vars(f);
            }
        }
    }

    /// Whether the formula mentions the necessity operator.
    pub fn is_modal(&self) -> bool {
        match self {
            Formula::Atom { args, .. } => args.iter().any(|t| match t {
                Term::Abs(a) => a.body.is_modal(),
                _ => false,
            }),
            Formula::Conj(l, r) => l.is_modal() || r.is_modal(),
            Formula::Neg(s) | Formula::Exists(_, s) => s.is_modal(),
            Formula::Nec(_) => true,
        }
    }

    /// All abstraction terms, outermost first.
    pub fn abstractions(&self) -> Vec<&Abstraction> {
        let mut out = Vec::new();
        self.collect_abstractions(&mut out);
        out
    }

    fn collect_abstractions<'a>(&'a self, out: &mut Vec<&'a Abstraction>) {
        match self {
            Formula::Atom { args, .. } => {
                for t in args {
                    if let Term::Abs(a) = t {
                        out.push(a);
                        a.body.collect_abstractions(out);
                    }
                }
            }
            Formula::Conj(l, r) => {
                l.collect_abstractions(out);
                r.collect_abstractions(out);
            }
            Formula::Neg(s) | Formula::Nec(s) | Formula::Exists(_, s) => s.collect_abstractions(out),
        }
    }

    /// All predicate symbols used, including those inside abstractions.
    pub fn predicates(&self) -> Vec<PredicateSymbol> {
        let mut out: Vec<PredicateSymbol> = Vec::new();
        self.visit_atoms(&mut |p| {
            if !out.contains(p) {
                out.push(p.clone());
            }
        });
        out
    }

    fn visit_atoms(&self, f: &mut dyn FnMut(&PredicateSymbol)) {
        match self {
            Formula::Atom { pred, args } => {
                f(pred);
                for t in args {
                    if let Term::Abs(a) = t {
                        a.body.visit_atoms(f);
                    }
                }
            }
            Formula::Conj(l, r) => {
                l.visit_atoms(f);
                r.visit_atoms(f);
            }
            Formula::Neg(s) | Formula::Nec(s) | Formula::Exists(_, s) => s.visit_atoms(f),
        }
    }

    /// Number of nodes, counting abstraction bodies.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom { args, .. } => {
                1 + args
                    .iter()
                    .map(|t| match t {
                        Term::Abs(a) => a.body.size(),
                        _ => 0,
                    })
                    .sum::<usize>()
            }
            Formula::Conj(l, r) => 1 + l.size() + r.size(),
            Formula::Neg(s) | Formula::Nec(s) | Formula::Exists(_, s) => 1 + s.size(),
        }
    }

    /// Capture-avoiding substitution `φ[var/t]` of every free occurrence.
    pub fn substitute(&self, var: &str, t: &Term) -> Result<Formula, SyntaxError> {
        let t_free = t.free_vars();
        subst_formula(self, var, t, &t_free)
    }

    /// Sequential substitution `φ[β/g(β)]` of each listed variable by the
    /// corresponding domain element.
    pub fn instantiate(&self, vars: &[String], values: &[DomainElement]) -> Formula {
        debug_assert_eq!(vars.len(), values.len());
        let mut out = self.clone();
        for (v, d) in vars.iter().zip(values) {
            out = out
                .substitute(v, &Term::Elem(d.clone()))
                .expect("elements have no variables to capture");
        }
        out
    }

    /// The ground formula `φ/g`.
    pub fn ground(&self, g: &Assignment) -> Result<Formula, SyntaxError> {
        let free = self.free_vars();
        let mut values = Vec::with_capacity(free.len());
        for v in free.iter() {
            match g.get(v) {
                Some(d) => values.push(d.clone()),
                None => return Err(SyntaxError::AssignmentIncomplete(v.clone())),
            }
        }
        Ok(self.instantiate(free.as_slice(), &values))
    }
}

fn visit_term_vars(t: &Term, f: &mut dyn FnMut(&str)) {
    match t {
        Term::Var(v) => f(v),
        Term::Const(_) | Term::Elem(_) => {}
        Term::Abs(a) => {
            for v in &a.alpha {
                f(v);
            }
            a.body.visit_vars(f);
        }
    }
}

fn collect_term(t: &Term, bound: &mut Vec<String>, out: &mut VarTuple) {
    match t {
        Term::Var(v) => {
            if !bound.contains(v) {
                out.push(v);
            }
        }
        Term::Const(_) | Term::Elem(_) => {}
        Term::Abs(a) => {
            let depth = bound.len();
            bound.extend(a.alpha.iter().cloned());
            collect_formula(&a.body, bound, out);
            bound.truncate(depth);
        }
    }
}

fn collect_formula(f: &Formula, bound: &mut Vec<String>, out: &mut VarTuple) {
    match f {
        Formula::Atom { args, .. } => {
            for t in args {
                collect_term(t, bound, out);
            }
        }
        Formula::Conj(l, r) => {
            collect_formula(l, bound, out);
            collect_formula(r, bound, out);
        }
        Formula::Neg(s) | Formula::Nec(s) => collect_formula(s, bound, out),
        Formula::Exists(x, s) => {
            bound.push(x.clone());
            collect_formula(s, bound, out);
            bound.pop();
        }
    }
}

fn subst_term(t: &Term, var: &str, with: &Term, with_free: &VarTuple) -> Result<Term, SyntaxError> {
    Ok(match t {
        Term::Var(v) if v == var => with.clone(),
        Term::Var(_) | Term::Const(_) | Term::Elem(_) => t.clone(),
        Term::Abs(a) => {
            if a.alpha.iter().any(|v| v == var) || !a.beta.iter().any(|v| v == var) {
                return Ok(t.clone());
            }
            if let Some(c) = a.alpha.iter().find(|v| with_free.contains(v)) {
                return Err(SyntaxError::Capture {
                    var: c.clone(),
                    binder: format!("abstraction alpha ({})", a.alpha.join(",")),
                });
            }
            let mut out = Abstraction {
                body: subst_formula(&a.body, var, with, with_free)?,
                alpha: a.alpha.clone(),
                beta: Vec::new(),
            };
            out.recompute_beta();
            Term::Abs(Box::new(out))
        }
    })
}

fn subst_formula(f: &Formula, var: &str, with: &Term, with_free: &VarTuple) -> Result<Formula, SyntaxError> {
    Ok(match f {
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args
                .iter()
                .map(|t| subst_term(t, var, with, with_free))
                .collect::<Result<_, _>>()?,
        },
        Formula::Conj(l, r) => Formula::conj(
            subst_formula(l, var, with, with_free)?,
            subst_formula(r, var, with, with_free)?,
        ),
        Formula::Neg(s) => Formula::neg(subst_formula(s, var, with, with_free)?),
        Formula::Nec(s) => Formula::nec(subst_formula(s, var, with, with_free)?),
        Formula::Exists(x, s) => {
            if x == var || !s.is_free(var) {
                return Ok(f.clone());
            }
            if with_free.contains(x) {
                return Err(SyntaxError::Capture {
                    var: x.clone(),
                    binder: format!("exists {x}"),
                });
            }
            Formula::exists(x.clone(), subst_formula(s, var, with, with_free)?)
        }
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Elem(DomainElement::Particular(name)) => write!(f, "#{name}"),
            Term::Elem(DomainElement::Concept(id)) => write!(f, "#@{id}"),
            Term::Elem(DomainElement::EmptyTuple) => f.write_str("#<>"),
            Term::Abs(a) => a.fmt(f),
        }
    }
}

impl fmt::Display for Abstraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<< {} >>_{{{}}}", self.body, self.alpha.join(", "))?;
        if !self.beta.is_empty() {
            write!(f, "^{{{}}}", self.beta.join(", "))?;
        }
        Ok(())
    }
}

/// Re-parseable concrete syntax. Binary nodes and quantifiers are always
/// parenthesized.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { pred, args } if pred.is_identity() => write!(f, "{} == {}", args[0], args[1]),
            Formula::Atom { pred, args } if args.is_empty() => f.write_str(&pred.name),
            Formula::Atom { pred, args } => {
                write!(f, "{}(", pred.name)?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Formula::Conj(l, r) => write!(f, "({l} & {r})"),
            Formula::Neg(s) if matches!(**s, Formula::Atom { ref pred, .. } if pred.is_identity()) => {
                write!(f, "~({s})")
            }
            Formula::Neg(s) => write!(f, "~{s}"),
            Formula::Nec(s) if matches!(**s, Formula::Atom { ref pred, .. } if pred.is_identity()) => {
                write!(f, "box ({s})")
            }
            Formula::Nec(s) => write!(f, "box {s}"),
            Formula::Exists(x, s) => write!(f, "(exists {x} . {s})"),
        }
    }
}
