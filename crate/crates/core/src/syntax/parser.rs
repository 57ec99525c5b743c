//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := impl ("<->" impl)*
//! impl    := disj ("->" impl)?
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "~" unary | "box" unary | "dia" unary | quant | atom | "(" formula ")"
//! quant   := ("exists" | "forall" | "exists1") VAR "." formula
//! atom    := PRED "(" term ("," term)* ")" | PRED | "true" | "false" | term "==" term
//! term    := VAR | CONST | "#" IDENT | "<<" formula ">>" ("_{" varlist? "}")? ("^{" varlist? "}")?
//! ```
//!
//! A quantifier's scope extends as far right as possible. Derived
//! connectives are expanded while parsing.

use crate::element::{ConceptId, DomainElement};

use super::lexer::{tokenize, Spanned, Tok};
use super::{Abstraction, Formula, Signature, SyntaxError, Term};

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

/// Parses an abstraction term, rejecting any other kind of term.
pub fn parse_abstraction(text: &str, sig: &Signature) -> Result<Abstraction, SyntaxError> {
    match parse_term(text, sig)? {
        Term::Abs(a) => Ok(*a),
        other => Err(SyntaxError::Parse { pos: 0, message: format!("expected an abstraction term, found `{other}`") }),
    }
}

struct Parser<'s> {
    toks: Vec<Spanned>,
    i: usize,
    end: usize,
    sig: &'s Signature,
}

impl<'s> Parser<'s> {
    fn new(text: &str, sig: &'s Signature) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: tokenize(text)?, i: 0, end: text.len(), sig })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.i + k).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |s| s.pos)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse { pos: self.pos(), message: message.into() })
    }

    fn found(&self) -> String {
        self.peek().map_or_else(|| "end of input".to_string(), Tok::describe)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.found()))
        }
    }

    fn expect_end(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.error(format!("unexpected {}", self.found())),
        }
    }

    fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.implication()?;
        while self.eat(&Tok::Iff) {
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::Amp) {
            let right = self.unary()?;
            left = Formula::conj(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::neg(self.unary()?));
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        match self.peek_ident() {
            Some("box") => {
                self.i += 1;
                Ok(Formula::nec(self.unary()?))
            }
            Some("dia") => {
                self.i += 1;
                Ok(Formula::possibly(self.unary()?))
            }
            Some(kw @ ("exists" | "forall" | "exists1")) => {
                let kw = kw.to_string();
                self.i += 1;
                let var = match self.peek_ident() {
                    Some(v) if self.sig.is_var(v) && !Signature::is_keyword(v) => v.to_string(),
                    _ => return self.error(format!("expected a variable after `{kw}`, found {}", self.found())),
                };
                self.i += 1;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(match kw.as_str() {
                    "exists" => Formula::exists(var, body),
                    "forall" => Formula::forall(var, body),
                    _ => Formula::exists_unique(&var, body),
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        if let Some(name) = self.peek_ident() {
            let name = name.to_string();
            match name.as_str() {
                "true" => {
                    self.i += 1;
                    return Ok(Formula::top());
                }
                "false" => {
                    self.i += 1;
                    return Ok(Formula::bottom());
                }
                _ => {}
            }
            if self.peek_at(1) == Some(&Tok::LParen) && !self.sig.is_var(&name) {
                return self.predicate_application(name);
            }
            let is_term = self.sig.is_var(&name) || self.peek_at(1) == Some(&Tok::EqEq) || self.sig.has_const(&name);
            if !is_term {
                self.i += 1;
                let sym = self.sig.check_pred(&name, 0)?;
                return Ok(Formula::atom(sym, Vec::new()));
            }
        }
        if self.peek().is_none() {
            return self.error("unexpected end of input");
        }
        let left = self.term()?;
        if !self.eat(&Tok::EqEq) {
            return self.error(format!("expected `==` after term `{left}`, found {}", self.found()));
        }
        let right = self.term()?;
        Ok(Formula::identity(left, right))
    }

    fn predicate_application(&mut self, name: String) -> Result<Formula, SyntaxError> {
        self.i += 1;
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        let sym = self.sig.check_pred(&name, args.len())?;
        Ok(Formula::atom(sym, args))
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                if Signature::is_keyword(&name) {
                    return self.error(format!("keyword `{name}` cannot be used as a term"));
                }
                self.i += 1;
                if self.peek() == Some(&Tok::LParen) {
                    return Err(SyntaxError::Parse {
                        pos,
                        message: format!("`{name}(...)` is not a term; function symbols are not supported"),
                    });
                }
                if self.sig.is_var(&name) {
                    Ok(Term::Var(name))
                } else if self.sig.is_strict() && !self.sig.has_const(&name) {
                    Err(SyntaxError::UnknownSymbol(format!("constant {name}")))
                } else {
                    Ok(Term::Const(name))
                }
            }
            Some(Tok::Elem(name)) => {
                self.i += 1;
                Ok(Term::Elem(element_literal(&name).ok_or(SyntaxError::Parse {
                    pos,
                    message: format!("bad element literal `#{name}`"),
                })?))
            }
            Some(Tok::Open) => {
                self.i += 1;
                let body = self.formula()?;
                self.expect(Tok::Close)?;
                let alpha = if self.eat(&Tok::AlphaOpen) { self.varlist()? } else { Vec::new() };
                let beta = if self.eat(&Tok::BetaOpen) { self.varlist()? } else { Vec::new() };
                let abs = Abstraction { body, alpha, beta };
                abs.validate()?;
                Ok(Term::Abs(Box::new(abs)))
            }
            _ => self.error(format!("expected a term, found {}", self.found())),
        }
    }

    /// Comma-separated variables terminated by `}`.
    fn varlist(&mut self) -> Result<Vec<String>, SyntaxError> {
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            match self.peek_ident() {
                Some(v) if self.sig.is_var(v) => {
                    out.push(v.to_string());
                    self.i += 1;
                }
                _ => return self.error(format!("expected a variable, found {}", self.found())),
            }
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            self.expect(Tok::Comma)?;
        }
    }
}

fn element_literal(name: &str) -> Option<DomainElement> {
    if name == "<>" {
        return Some(DomainElement::EmptyTuple);
    }
    if let Some(id) = name.strip_prefix('@') {
        return id.parse().ok().map(|n| DomainElement::Concept(ConceptId(n)));
    }
    Some(DomainElement::Particular(name.to_string()))
}
