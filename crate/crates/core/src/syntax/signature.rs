use std::collections::BTreeSet;

use super::{PredicateSymbol, SyntaxError};

const KEYWORDS: &[&str] = &["exists", "forall", "exists1", "box", "dia", "true", "false"];

/// Declared predicate letters, constants and extra variable names.
///
/// An *open* signature accepts any predicate letter at any arity and any
/// non-variable identifier as a constant; a signature read from a file is
/// strict and rejects undeclared symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    preds: BTreeSet<PredicateSymbol>,
    consts: BTreeSet<String>,
    vars: BTreeSet<String>,
    strict: bool,
}

impl Signature {
    pub fn open() -> Self {
        Signature::default()
    }

    pub fn strict() -> Self {
        Signature { strict: true, ..Signature::default() }
    }

    /// Strict signature over the given predicates.
    pub fn with_predicates(preds: &[(&str, usize)]) -> Self {
        let mut sig = Signature::strict();
        for &(name, arity) in preds {
            sig.declare_pred(PredicateSymbol::new(name, arity));
        }
        sig
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn declare_pred(&mut self, p: PredicateSymbol) -> &mut Self {
        self.preds.insert(p);
        self
    }

    pub fn declare_const(&mut self, name: impl Into<String>) -> &mut Self {
        self.consts.insert(name.into());
        self
    }

    pub fn declare_var(&mut self, name: impl Into<String>) -> &mut Self {
        self.vars.insert(name.into());
        self
    }

    /// User predicates in `(name, arity)` order; built-ins are not listed.
    pub fn predicates(&self) -> impl Iterator<Item = &PredicateSymbol> {
        self.preds.iter()
    }

    pub fn constants(&self) -> impl Iterator<Item = &String> {
        self.consts.iter()
    }

    pub fn has_pred(&self, p: &PredicateSymbol) -> bool {
        p.is_builtin() || self.preds.contains(p)
    }

    pub fn has_const(&self, name: &str) -> bool {
        self.consts.contains(name)
    }

    fn arities(&self, name: &str) -> Vec<usize> {
        self.preds.iter().filter(|p| p.name == name).map(|p| p.arity).collect()
    }

    /// Resolves a predicate use, enforcing declared arities.
    pub fn check_pred(&self, name: &str, arity: usize) -> Result<PredicateSymbol, SyntaxError> {
        let sym = PredicateSymbol::new(name, arity);
        if self.preds.contains(&sym) {
            return Ok(sym);
        }
        let declared = self.arities(name);
        if !declared.is_empty() {
            return Err(SyntaxError::ArityMismatch { name: name.to_string(), found: arity, declared });
        }
        if self.strict {
            return Err(SyntaxError::UnknownSymbol(format!("predicate {name}/{arity}")));
        }
        Ok(sym)
    }

    /// Variables are the declared `var` names plus `x`, `y`, `z` optionally
    /// followed by digits or by `_` and a suffix (`x1`, `y_j`).
    pub fn is_var(&self, name: &str) -> bool {
        if self.vars.contains(name) {
            return true;
        }
        if self.consts.contains(name) || self.preds.iter().any(|p| p.name == name) {
            return false;
        }
        default_var_pattern(name)
    }

    pub fn is_keyword(name: &str) -> bool {
        KEYWORDS.contains(&name)
    }

    /// Parses the `pred p/2`, `const c`, `var w` line format.
    pub fn parse(text: &str) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::strict();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| SyntaxError::Signature { line: lineno + 1, message };
            let mut parts = line.split_whitespace();
            let kind = parts.next().unwrap_or_default();
            let rest: Vec<&str> = parts.collect();
            if rest.len() != 1 {
                return Err(err(format!("expected `{kind} <name>`")));
            }
            let item = rest[0];
            match kind {
                "pred" => {
                    let (name, arity) = item
                        .split_once('/')
                        .ok_or_else(|| err(format!("expected <name>/<arity>, found `{item}`")))?;
                    let arity: usize = arity.parse().map_err(|_| err(format!("bad arity `{arity}`")))?;
                    check_name(name).map_err(err)?;
                    if name == PredicateSymbol::TRUTH_NAME || name == "false" {
                        return Err(err(format!("`{name}` is reserved")));
                    }
                    sig.declare_pred(PredicateSymbol::new(name, arity));
                }
                "const" => {
                    check_name(item).map_err(err)?;
                    sig.declare_const(item);
                }
                "var" => {
                    check_name(item).map_err(err)?;
                    sig.declare_var(item);
                }
                other => return Err(err(format!("unknown declaration `{other}`"))),
            }
        }
        Ok(sig)
    }
}

/// Cuts a `#` comment. A `#` opens a comment at the start of a line or
/// when it stands alone as a word, so element literals like `#a` survive.
pub(crate) fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b != b'#' {
            continue;
        }
        let starts_word = i == 0 || bytes[i - 1].is_ascii_whitespace();
        let ends_word = bytes.get(i + 1).is_none_or(|c| c.is_ascii_whitespace() || *c == b'#');
        if line[..i].trim().is_empty() || (starts_word && ends_word) {
            return &line[..i];
        }
    }
    line
}

fn check_name(name: &str) -> Result<(), String> {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_alphabetic())
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
    if !ok {
        return Err(format!("invalid identifier `{name}`"));
    }
    if Signature::is_keyword(name) && name != PredicateSymbol::TRUTH_NAME {
        return Err(format!("`{name}` is a keyword"));
    }
    Ok(())
}

fn default_var_pattern(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some('x' | 'y' | 'z') => {}
        _ => return false,
    }
    let rest: &str = chars.as_str();
    if rest.is_empty() || rest.chars().all(|c| c.is_ascii_digit() || c == '\'') {
        return true;
    }
    rest.starts_with('_') && rest.len() > 1 && rest[1..].chars().all(|c| c.is_alphanumeric() || c == '_')
}
