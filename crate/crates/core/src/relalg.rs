//! Finite relations and the extensional algebra over them: natural join
//! `⋈_S`, complement `∼`, column elimination `π₋ₘ`, `f_<>`, the identity
//! relation `R₌` and permutation equivalence `≅`.
//!
//! Column indices are 1-based throughout, matching join pair sets
//! such as `S = {(4,1),(2,3)}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::element::{ConceptId, DomainElement};

pub type Tuple = Vec<DomainElement>;

/// Set of `(left column, right column)` pairs, 1-based.
pub type JoinPairs = BTreeSet<(usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelAlgError {
    #[error("element {0} is outside the domain")]
    OutsideDomain(DomainElement),
    #[error("tuple of length {found} in a relation of arity {arity}")]
    TupleArity { arity: usize, found: usize },
    #[error("relation has no attribute labels")]
    Unlabelled,
    #[error("attribute {0} not present")]
    MissingAttribute(String),
    #[error("attribute labels must be distinct and match the arity: {0:?}")]
    BadAttributes(Vec<String>),
    #[error("attribute sets differ: {left:?} vs {right:?}")]
    LabelMismatch { left: Vec<String>, right: Vec<String> },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("relation text line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A finite set of fixed-arity tuples with optional column labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Tuple>,
    attrs: Option<Vec<String>>,
}

impl Relation {
    pub fn empty(arity: usize) -> Self {
        Relation { arity, tuples: BTreeSet::new(), attrs: None }
    }

    /// `f = ∅` of arity 0.
    pub fn falsity() -> Self {
        Relation::empty(0)
    }

    /// `t = {⟨⟩}`.
    pub fn truth() -> Self {
        let mut r = Relation::empty(0);
        r.tuples.insert(Vec::new());
        r
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Relation::truth()
        } else {
            Relation::falsity()
        }
    }

    pub fn from_tuples<I>(arity: usize, tuples: I) -> Result<Self, RelAlgError>
    where
        I: IntoIterator<Item = Tuple>,
    {
        let mut r = Relation::empty(arity);
        for t in tuples {
            r.insert(t)?;
        }
        Ok(r)
    }

    /// Test helper: tuples of particular names, e.g. `&[&["a", "b"]]`.
    pub fn of_names(arity: usize, tuples: &[&[&str]]) -> Self {
        Relation::from_tuples(
            arity,
            tuples.iter().map(|t| t.iter().map(|n| DomainElement::particular(*n)).collect()),
        )
        .expect("tuple lengths match arity")
    }

    pub fn insert(&mut self, t: Tuple) -> Result<bool, RelAlgError> {
        if t.len() != self.arity {
            return Err(RelAlgError::TupleArity { arity: self.arity, found: t.len() });
        }
        Ok(self.tuples.insert(t))
    }

    pub fn with_attrs<S: Into<String>>(mut self, attrs: impl IntoIterator<Item = S>) -> Result<Self, RelAlgError> {
        let attrs: Vec<String> = attrs.into_iter().map(Into::into).collect();
        let distinct: BTreeSet<&String> = attrs.iter().collect();
        if attrs.len() != self.arity || distinct.len() != attrs.len() {
            return Err(RelAlgError::BadAttributes(attrs));
        }
        self.attrs = Some(attrs);
        Ok(self)
    }

    pub fn without_attrs(mut self) -> Self {
        self.attrs = None;
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn attrs(&self) -> Option<&[String]> {
        self.attrs.as_deref()
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tuple> {
        self.tuples.iter()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[DomainElement]) -> bool {
        self.tuples.contains(t)
    }

    /// Arity 0 and non-empty.
    pub fn is_true(&self) -> bool {
        self.arity == 0 && !self.tuples.is_empty()
    }

    /// Same arity and tuple set; labels are ignored.
    pub fn same_tuples(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.tuples == other.tuples
    }

    fn check_same_arity(&self, other: &Relation) -> Result<(), RelAlgError> {
        if self.arity != other.arity {
            return Err(RelAlgError::ArityMismatch { left: self.arity, right: other.arity });
        }
        Ok(())
    }

    /// Set union; labels are kept from `self`.
    pub fn union(&self, other: &Relation) -> Result<Relation, RelAlgError> {
        self.check_same_arity(other)?;
        let mut out = self.clone();
        out.tuples.extend(other.tuples.iter().cloned());
        Ok(out)
    }

    /// Set intersection; labels are kept from `self`.
    pub fn intersection(&self, other: &Relation) -> Result<Relation, RelAlgError> {
        self.check_same_arity(other)?;
        let mut out = self.clone();
        out.tuples.retain(|t| other.tuples.contains(t));
        Ok(out)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.tuples.is_subset(&other.tuples)
    }

    /// Tuples present in exactly one side.
    pub fn symmetric_difference(&self, other: &Relation) -> Vec<Tuple> {
        self.tuples.symmetric_difference(&other.tuples).cloned().collect()
    }

    /// Reorders columns so that the labels read `order`.
    pub fn permute_to(&self, order: &[String]) -> Result<Relation, RelAlgError> {
        let attrs = self.attrs.as_ref().ok_or(RelAlgError::Unlabelled)?;
        let same: BTreeSet<&String> = attrs.iter().collect();
        let want: BTreeSet<&String> = order.iter().collect();
        if same != want || order.len() != attrs.len() {
            return Err(RelAlgError::LabelMismatch { left: order.to_vec(), right: attrs.clone() });
        }
        let idx: Vec<usize> = order
            .iter()
            .map(|a| attrs.iter().position(|b| b == a).expect("label sets checked"))
            .collect();
        let tuples = self.tuples.iter().map(|t| idx.iter().map(|&i| t[i].clone()).collect()).collect();
        Ok(Relation { arity: self.arity, tuples, attrs: Some(order.to_vec()) })
    }

    /// Parses the text rendering produced by `Display`.
    pub fn from_text(text: &str) -> Result<Relation, RelAlgError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(RelAlgError::Format { line: 1, message: "missing header".into() })?;
        let mut words = header.split_whitespace();
        if words.next() != Some("rel") {
            return Err(RelAlgError::Format { line: hline, message: "header must start with `rel`".into() });
        }
        let arity: usize = words
            .next()
            .and_then(|a| a.parse().ok())
            .ok_or(RelAlgError::Format { line: hline, message: "missing arity".into() })?;
        let attrs: Vec<&str> = words.collect();
        let mut rel = Relation::empty(arity);
        for (line, body) in lines {
            let tuple: Tuple = if body == "()" {
                Vec::new()
            } else {
                body.split_whitespace().map(parse_element).collect()
            };
            rel.insert(tuple).map_err(|e| RelAlgError::Format { line, message: e.to_string() })?;
        }
        if !attrs.is_empty() {
            rel = rel.with_attrs(attrs)?;
        }
        Ok(rel)
    }
}

fn parse_element(word: &str) -> DomainElement {
    if word == "<>" {
        return DomainElement::EmptyTuple;
    }
    if let Some(id) = word.strip_prefix('@').and_then(|n| n.parse().ok()) {
        return DomainElement::Concept(ConceptId(id));
    }
    DomainElement::Particular(word.to_string())
}

/// `rel <arity> [attrs...]` then one tuple per line; `⟨⟩` is `()`.
impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel {}", self.arity)?;
        if let Some(attrs) = &self.attrs {
            for a in attrs {
                write!(f, " {a}")?;
            }
        }
        for t in &self.tuples {
            f.write_str("\n")?;
            if t.is_empty() {
                f.write_str("()")?;
            }
            for (i, e) in t.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

/// `D^k` in canonical (lexicographic) order.
pub fn all_tuples(domain: &[DomainElement], k: usize) -> Vec<Tuple> {
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * domain.len());
        for prefix in &out {
            for d in domain {
                let mut t = prefix.clone();
                t.push(d.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// A join pair set is usable when it is non-empty, every pair is in
/// range and no column is paired twice on either side.
pub fn join_pairs_valid(pairs: &JoinPairs, left_arity: usize, right_arity: usize) -> bool {
    if pairs.is_empty() {
        return false;
    }
    let lefts: BTreeSet<usize> = pairs.iter().map(|p| p.0).collect();
    let rights: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
    lefts.len() == pairs.len()
        && rights.len() == pairs.len()
        && pairs.iter().all(|&(i, j)| (1..=left_arity).contains(&i) && (1..=right_arity).contains(&j))
}

/// `r1 ⋈_S r2`: all columns of `r1`, then the non-joined columns of `r2`.
/// An unusable `S` gives the cartesian product.
pub fn natural_join(r1: &Relation, r2: &Relation, s: &JoinPairs) -> Relation {
    let pairs: Vec<(usize, usize)> = if join_pairs_valid(s, r1.arity, r2.arity) {
        s.iter().map(|&(i, j)| (i - 1, j - 1)).collect()
    } else {
        Vec::new()
    };
    let joined: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
    let kept: Vec<usize> = (0..r2.arity).filter(|j| !joined.contains(j)).collect();

    let mut index: HashMap<Vec<&DomainElement>, Vec<&Tuple>> = HashMap::new();
    for t2 in &r2.tuples {
        index.entry(pairs.iter().map(|p| &t2[p.1]).collect()).or_default().push(t2);
    }
    let mut out = Relation::empty(r1.arity + kept.len());
    for t1 in &r1.tuples {
        let key: Vec<&DomainElement> = pairs.iter().map(|p| &t1[p.0]).collect();
        if let Some(matches) = index.get(&key) {
            for t2 in matches {
                let mut t = t1.clone();
                t.extend(kept.iter().map(|&j| t2[j].clone()));
                out.tuples.insert(t);
            }
        }
    }
    if let (Some(a1), Some(a2)) = (&r1.attrs, &r2.attrs) {
        let mut attrs = a1.clone();
        attrs.extend(kept.iter().map(|&j| a2[j].clone()));
        out = match out.clone().with_attrs(attrs) {
            Ok(labelled) => labelled,
            Err(_) => out,
        };
    }
    out
}

/// `∼r = D^k \ r`.
pub fn complement(r: &Relation, domain: &[DomainElement]) -> Result<Relation, RelAlgError> {
    let known: BTreeSet<&DomainElement> = domain.iter().collect();
    for t in &r.tuples {
        if let Some(e) = t.iter().find(|e| !known.contains(e)) {
            return Err(RelAlgError::OutsideDomain(e.clone()));
        }
    }
    let mut out = Relation { arity: r.arity, tuples: BTreeSet::new(), attrs: r.attrs.clone() };
    let mut sorted: Vec<DomainElement> = known.into_iter().cloned().collect();
    sorted.sort();
    for t in all_tuples(&sorted, r.arity) {
        if !r.tuples.contains(&t) {
            out.tuples.insert(t);
        }
    }
    Ok(out)
}

/// `f_<>(r)`: `{⟨⟩}` when `r` is non-empty, else `∅`.
pub fn f_truth(r: &Relation) -> Relation {
    let mut out = Relation::from_bool(!r.is_empty());
    if r.attrs.is_some() {
        out.attrs = Some(Vec::new());
    }
    out
}

/// `π₋ₘ(r)`: drops column `m` when `1 ≤ m ≤ k` and `k ≥ 2`, is `f_<>(r)`
/// when `m = k = 1` and the identity otherwise.
pub fn project_out(r: &Relation, m: usize) -> Relation {
    let k = r.arity;
    if m == 1 && k == 1 {
        return f_truth(r);
    }
    if m < 1 || m > k || k < 2 {
        return r.clone();
    }
    let col = m - 1;
    let tuples = r
        .tuples
        .iter()
        .map(|t| t.iter().enumerate().filter(|(i, _)| *i != col).map(|(_, e)| e.clone()).collect())
        .collect();
    let attrs = r.attrs.as_ref().map(|a| {
        let mut a = a.clone();
        a.remove(col);
        a
    });
    Relation { arity: k - 1, tuples, attrs }
}

/// `π₋β(r)`: removes every column labelled by a name in `beta`, keeping
/// the order of the rest. Removing all columns yields `f_<>(r)`.
pub fn project_out_many(r: &Relation, beta: &[String]) -> Result<Relation, RelAlgError> {
    let attrs = r.attrs.as_ref().ok_or(RelAlgError::Unlabelled)?;
    if let Some(missing) = beta.iter().find(|b| !attrs.contains(b)) {
        return Err(RelAlgError::MissingAttribute(missing.clone()));
    }
    let mut out = r.clone();
    for name in beta {
        let cols = out.attrs.as_ref().expect("labels preserved by project_out");
        if let Some(i) = cols.iter().position(|a| a == name) {
            out = project_out(&out, i + 1);
        }
    }
    Ok(out)
}

/// `R₌ = {(d,d) | d ∈ D}`.
pub fn identity_relation(domain: &[DomainElement]) -> Relation {
    let mut out = Relation::empty(2);
    for d in domain {
        out.tuples.insert(vec![d.clone(), d.clone()]);
    }
    out
}

/// `r1 ≅ r2`: equal after permuting `r2`'s columns to `r1`'s labels.
pub fn rel_equiv(r1: &Relation, r2: &Relation) -> Result<bool, RelAlgError> {
    let a1 = r1.attrs.as_ref().ok_or(RelAlgError::Unlabelled)?;
    let a2 = r2.attrs.as_ref().ok_or(RelAlgError::Unlabelled)?;
    let s1: BTreeSet<&String> = a1.iter().collect();
    let s2: BTreeSet<&String> = a2.iter().collect();
    if s1 != s2 {
        return Err(RelAlgError::LabelMismatch { left: a1.clone(), right: a2.clone() });
    }
    Ok(r2.permute_to(a1)?.tuples == r1.tuples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::particulars;

    fn pairs(ps: &[(usize, usize)]) -> JoinPairs {
        ps.iter().copied().collect()
    }

    fn labels(r: &Relation) -> Vec<&str> {
        r.attrs().unwrap().iter().map(String::as_str).collect()
    }

    #[test]
    fn join_attribute_order() {
        let r1 = Relation::empty(5).with_attrs(["x_i", "x_j", "x_k", "x_l", "x_m"]).unwrap();
        let r2 = Relation::empty(4).with_attrs(["x_l", "y_i", "x_j", "y_j"]).unwrap();
        let out = natural_join(&r1, &r2, &pairs(&[(4, 1), (2, 3)]));
        assert_eq!(out.arity(), 7);
        assert_eq!(labels(&out), ["x_i", "x_j", "x_k", "x_l", "x_m", "y_i", "y_j"]);
    }

    #[test]
    fn truth_is_join_unit() {
        let r = Relation::of_names(2, &[&["a", "b"], &["b", "a"]]);
        let out = natural_join(&Relation::truth(), &r, &JoinPairs::new());
        assert!(out.same_tuples(&r));
    }

    #[test]
    fn join_on_one_column() {
        let r1 = Relation::of_names(1, &[&["a"], &["b"]]);
        let r2 = Relation::of_names(1, &[&["b"], &["c"]]);
        let out = natural_join(&r1, &r2, &pairs(&[(1, 1)]));
        assert_eq!(out, Relation::of_names(1, &[&["b"]]));
    }

    #[test]
    fn invalid_pairs_give_cartesian_product() {
        let r1 = Relation::of_names(1, &[&["a"], &["b"]]);
        let r2 = Relation::of_names(1, &[&["c"]]);
        for s in [pairs(&[(2, 1)]), pairs(&[(1, 1), (1, 0)]), pairs(&[(1, 1), (1, 2)])] {
            let out = natural_join(&r1, &r2, &s);
            assert_eq!(out, Relation::of_names(2, &[&["a", "c"], &["b", "c"]]), "{s:?}");
        }
    }

    #[test]
    fn complement_examples() {
        let d = particulars(["a", "b"]);
        assert_eq!(complement(&Relation::truth(), &d).unwrap(), Relation::falsity());
        assert_eq!(complement(&Relation::falsity(), &d).unwrap(), Relation::truth());
        assert_eq!(
            complement(&Relation::of_names(1, &[&["a"]]), &d).unwrap(),
            Relation::of_names(1, &[&["b"]])
        );
        let all = complement(&Relation::empty(2), &d).unwrap();
        assert_eq!(all.len(), 4);
        assert!(matches!(
            complement(&Relation::of_names(1, &[&["c"]]), &d),
            Err(RelAlgError::OutsideDomain(_))
        ));
    }

    #[test]
    fn project_out_examples() {
        let r = Relation::empty(5).with_attrs(["x_i", "x_j", "x_k", "x_l", "x_m"]).unwrap();
        assert_eq!(labels(&project_out(&r, 3)), ["x_i", "x_j", "x_l", "x_m"]);
        let unary = Relation::of_names(1, &[&["a"], &["b"]]);
        assert_eq!(project_out(&unary, 1), Relation::truth());
        let binary = Relation::of_names(2, &[&["a", "b"]]);
        assert_eq!(project_out(&binary, 5), binary);
        assert_eq!(project_out(&binary, 0), binary);
        assert_eq!(project_out(&Relation::truth(), 1), Relation::truth());
    }

    #[test]
    fn project_out_collapses_duplicates() {
        let r = Relation::of_names(2, &[&["a", "b"], &["a", "a"]]);
        assert_eq!(project_out(&r, 2), Relation::of_names(1, &[&["a"]]));
    }

    #[test]
    fn f_truth_examples() {
        assert_eq!(f_truth(&Relation::empty(2)), Relation::falsity());
        assert_eq!(f_truth(&Relation::of_names(2, &[&["a", "b"]])), Relation::truth());
        assert_eq!(f_truth(&Relation::truth()), Relation::truth());
    }

    #[test]
    fn project_out_many_examples() {
        let r = Relation::of_names(2, &[&["a", "b"], &["b", "b"]]).with_attrs(["x", "y"]).unwrap();
        let out = project_out_many(&r, &["y".into()]).unwrap();
        assert_eq!(out, Relation::of_names(1, &[&["a"], &["b"]]).with_attrs(["x"]).unwrap());
        assert_eq!(project_out_many(&r, &[]).unwrap(), r);
        let single = Relation::of_names(1, &[&["a"]]).with_attrs(["x"]).unwrap();
        assert!(project_out_many(&single, &["x".into()]).unwrap().is_true());
        assert!(matches!(project_out_many(&r, &["z".into()]), Err(RelAlgError::MissingAttribute(_))));
        assert!(matches!(
            project_out_many(&Relation::of_names(1, &[]), &[]),
            Err(RelAlgError::Unlabelled)
        ));
    }

    #[test]
    fn identity_relation_examples() {
        assert_eq!(identity_relation(&particulars(["a"])), Relation::of_names(2, &[&["a", "a"]]));
        assert_eq!(
            identity_relation(&particulars(["a", "b"])),
            Relation::of_names(2, &[&["a", "a"], &["b", "b"]])
        );
        assert!(identity_relation(&[]).is_empty());
    }

    #[test]
    fn rel_equiv_examples() {
        let r1 = Relation::of_names(2, &[&["a", "b"]]).with_attrs(["x", "y"]).unwrap();
        let r2 = Relation::of_names(2, &[&["b", "a"]]).with_attrs(["y", "x"]).unwrap();
        assert!(rel_equiv(&r1, &r2).unwrap());
        assert!(rel_equiv(&r1, &r1).unwrap());
        let r3 = Relation::of_names(2, &[&["a", "b"]]).with_attrs(["y", "x"]).unwrap();
        assert!(!rel_equiv(&r1, &r3).unwrap());
        let r4 = Relation::of_names(2, &[&["a", "b"]]).with_attrs(["x", "z"]).unwrap();
        assert!(matches!(rel_equiv(&r1, &r4), Err(RelAlgError::LabelMismatch { .. })));
    }

    #[test]
    fn text_format() {
        let r = Relation::of_names(2, &[&["b", "b"], &["a", "b"]]).with_attrs(["x", "y"]).unwrap();
        assert_eq!(r.to_string(), "rel 2 x y\na b\nb b");
        assert_eq!(Relation::from_text(&r.to_string()).unwrap(), r);
        assert_eq!(Relation::truth().to_string(), "rel 0\n()");
        assert_eq!(Relation::from_text("rel 0\n()").unwrap(), Relation::truth());
        assert_eq!(Relation::from_text("rel 0").unwrap(), Relation::falsity());
        assert!(Relation::from_text("rel 2\na").is_err());
        assert!(Relation::from_text("relation 2").is_err());
    }

    #[test]
    fn canonical_element_order() {
        let r = Relation::from_tuples(
            1,
            [
                vec![DomainElement::Concept(ConceptId(0))],
                vec![DomainElement::particular("b")],
                vec![DomainElement::EmptyTuple],
                vec![DomainElement::particular("a")],
            ],
        )
        .unwrap();
        assert_eq!(r.to_string(), "rel 1\n<>\na\nb\n@0");
    }
}
