//! Text format for worlds and world sets.
//!
//! ```text
//! # comment
//! domain a b
//! const c = a
//! reify k = << p(x) >>_{x}
//! rel p/1 = (a) (k)
//! rel q/2 = (a, b)
//! rel r/0 = ()
//! ```
//!
//! A world set adds `world <name>` blocks after the shared lines; `rel`
//! lines before the first block are defaults for every world. An optional
//! leading `worlds` line is ignored. `reify` enumerates `β` over the
//! elements declared above it.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::concepts::ConceptStore;
use crate::element::DomainElement;
use crate::relalg::{identity_relation, Relation};
use crate::syntax::{parse_abstraction, strip_comment, PredicateSymbol, Signature};

use super::{interpret_abstraction, SemanticsError, World};

/// Parsed world set together with the names used in the file.
#[derive(Debug, Clone)]
pub struct WorldFile {
    pub worlds: Vec<World>,
    /// Particular names and reified labels, mapped to their elements.
    pub names: BTreeMap<String, DomainElement>,
}

type Preds = BTreeMap<PredicateSymbol, Relation>;

struct Builder<'a> {
    store: &'a ConceptStore,
    sig: &'a Signature,
    domain: Vec<DomainElement>,
    names: BTreeMap<String, DomainElement>,
    consts: BTreeMap<String, DomainElement>,
    defaults: Preds,
    blocks: Vec<(String, Preds)>,
}

fn err(line: usize, message: impl Into<String>) -> SemanticsError {
    SemanticsError::File { line, message: message.into() }
}

impl Builder<'_> {
    fn name(&self, line: usize, word: &str) -> Result<DomainElement, SemanticsError> {
        let word = word.strip_prefix('#').unwrap_or(word);
        self.names.get(word).cloned().ok_or_else(|| err(line, format!("`{word}` is not a declared element")))
    }

    fn declare(&mut self, line: usize, name: &str, e: DomainElement) -> Result<(), SemanticsError> {
        if !self.blocks.is_empty() {
            return Err(err(line, "declarations must precede the first `world` block"));
        }
        let valid = name.chars().next().is_some_and(char::is_alphanumeric)
            && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
        if !valid {
            return Err(err(line, format!("invalid element name `{name}`")));
        }
        if self.names.insert(name.to_string(), e.clone()).is_some() {
            return Err(err(line, format!("`{name}` declared twice")));
        }
        if !self.domain.contains(&e) {
            self.domain.push(e);
        }
        Ok(())
    }

    fn line(&mut self, line: usize, text: &str) -> Result<(), SemanticsError> {
        let (keyword, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match keyword {
            "worlds" if rest.is_empty() && self.domain.is_empty() => {}
            "domain" => {
                for n in rest.split_whitespace() {
                    self.declare(line, n, DomainElement::particular(n))?;
                }
            }
            "world" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err(line, "expected `world <name>`"));
                }
                if self.blocks.iter().any(|(n, _)| n == rest) {
                    return Err(err(line, format!("world `{rest}` declared twice")));
                }
                self.blocks.push((rest.to_string(), self.defaults.clone()));
            }
            "const" => {
                let (c, value) = split_eq(line, rest)?;
                if !self.blocks.is_empty() {
                    return Err(err(line, "constants are rigid and must precede the first `world` block"));
                }
                let e = self.name(line, value)?;
                self.consts.insert(c.to_string(), e);
            }
            "reify" => {
                let (label, term) = split_eq(line, rest)?;
                let abs = parse_abstraction(term, self.sig).map_err(|e| err(line, e.to_string()))?;
                let mut domain = self.domain.clone();
                domain.sort();
                if domain.is_empty() && !abs.beta.is_empty() {
                    return Err(err(line, "reify with free variables needs a domain declared first"));
                }
                let c = interpret_abstraction(self.store, &abs, &domain).map_err(|e| err(line, e.to_string()))?;
                self.declare(line, label, c.handle())?;
            }
            "rel" => {
                let (head, body) = split_eq(line, rest)?;
                let pred = parse_pred(line, head)?;
                if pred.is_builtin() {
                    return Err(err(line, format!("{pred} is built in")));
                }
                let mut rel = Relation::empty(pred.arity);
                for t in parse_tuples(line, body)? {
                    let t = t.iter().map(|w| self.name(line, w)).collect::<Result<Vec<_>, _>>()?;
                    rel.insert(t).map_err(|e| err(line, format!("{pred}: {e}")))?;
                }
                let target = match self.blocks.last_mut() {
                    Some((_, preds)) => preds,
                    None => &mut self.defaults,
                };
                if let Some(other) = target.keys().find(|p| p.name == pred.name && p.arity != pred.arity) {
                    return Err(err(line, format!("{pred} conflicts with {other}")));
                }
                target.insert(pred, rel);
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
        Ok(())
    }

    fn finish(self) -> Result<WorldFile, SemanticsError> {
        let Builder { sig, mut domain, names, consts, defaults, blocks, .. } = self;
        if domain.is_empty() {
            return Err(SemanticsError::EmptyDomain);
        }
        domain.sort();
        let blocks = if blocks.is_empty() { vec![("w0".to_string(), defaults)] } else { blocks };
        let mut all: Vec<PredicateSymbol> = sig.predicates().filter(|p| !p.is_builtin()).cloned().collect();
        for (_, preds) in &blocks {
            all.extend(preds.keys().cloned());
        }
        let labels: BTreeMap<DomainElement, String> =
            names.iter().filter(|(_, e)| e.is_concept()).map(|(n, e)| (e.clone(), n.clone())).collect();
        let (domain, consts, labels) = (Arc::new(domain), Arc::new(consts), Arc::new(labels));
        let identity = Arc::new(identity_relation(&domain));
        let mut worlds = Vec::with_capacity(blocks.len());
        for (name, mut preds) in blocks {
            for p in &all {
                preds.entry(p.clone()).or_insert_with(|| Relation::empty(p.arity));
            }
            worlds.push(World::from_shared(
                name,
                domain.clone(),
                consts.clone(),
                preds,
                identity.clone(),
                labels.clone(),
            )?);
        }
        Ok(WorldFile { worlds, names })
    }
}

fn split_eq(line: usize, text: &str) -> Result<(&str, &str), SemanticsError> {
    let (l, r) = text.split_once('=').ok_or_else(|| err(line, "expected `=`"))?;
    let l = l.trim();
    if l.is_empty() {
        return Err(err(line, "missing name before `=`"));
    }
    Ok((l, r.trim()))
}

fn parse_pred(line: usize, head: &str) -> Result<PredicateSymbol, SemanticsError> {
    let (name, arity) = head.split_once('/').ok_or_else(|| err(line, format!("expected `name/arity`, found `{head}`")))?;
    let arity = arity.trim().parse().map_err(|_| err(line, format!("bad arity in `{head}`")))?;
    Ok(PredicateSymbol::new(name.trim(), arity))
}

/// `(a, b) (c, d)` into word lists; `()` is the empty tuple.
fn parse_tuples(line: usize, text: &str) -> Result<Vec<Vec<&str>>, SemanticsError> {
    let mut out = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(|| err(line, format!("expected `(` at `{rest}`")))?;
        let close = inner.find(')').ok_or_else(|| err(line, "unclosed `(`"))?;
        let body = inner[..close].trim();
        out.push(if body.is_empty() { Vec::new() } else { body.split(',').map(str::trim).collect() });
        rest = inner[close + 1..].trim_start();
    }
    Ok(out)
}

/// Parses a file holding any number of `world` blocks (or none, for a
/// single unnamed world called `w0`).
pub fn parse_world_set_file(text: &str, store: &ConceptStore, sig: &Signature) -> Result<WorldFile, SemanticsError> {
    let mut b = Builder {
        store,
        sig,
        domain: Vec::new(),
        names: BTreeMap::new(),
        consts: BTreeMap::new(),
        defaults: Preds::new(),
        blocks: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let text = strip_comment(raw).trim();
        if !text.is_empty() {
            b.line(i + 1, text)?;
        }
    }
    b.finish()
}

/// Parses a file describing exactly one world.
pub fn parse_world_file(text: &str, store: &ConceptStore, sig: &Signature) -> Result<WorldFile, SemanticsError> {
    let file = parse_world_set_file(text, store, sig)?;
    if file.worlds.len() != 1 {
        return Err(err(0, format!("expected one world, found {}", file.worlds.len())));
    }
    Ok(file)
}
