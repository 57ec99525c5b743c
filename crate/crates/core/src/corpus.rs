//! Bundled formula and abstraction corpora over `p/1`, `q/2` and the
//! constant `c`.

use crate::syntax::{parse_abstraction, parse_formula, strip_comment, Abstraction, Formula, Signature, SyntaxError};

pub const FORMULAS: &str = include_str!("../corpus/formulas.txt");
pub const ABSTRACTIONS: &str = include_str!("../corpus/abstractions.txt");

/// Signature the corpora are written against.
pub fn signature() -> Signature {
    let mut sig = Signature::with_predicates(&[("p", 1), ("q", 2)]);
    sig.declare_const("c");
    sig
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub fn entries(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn formulas() -> Result<Vec<Formula>, (usize, SyntaxError)> {
    let sig = signature();
    entries(FORMULAS).map(|(n, l)| parse_formula(l, &sig).map_err(|e| (n, e))).collect()
}

pub fn abstractions() -> Result<Vec<Abstraction>, (usize, SyntaxError)> {
    let sig = signature();
    entries(ABSTRACTIONS).map(|(n, l)| parse_abstraction(l, &sig).map_err(|e| (n, e))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_parse() {
        let f = formulas().unwrap_or_else(|(n, e)| panic!("formulas line {n}: {e}"));
        assert!(f.len() >= 200);
        let a = abstractions().unwrap_or_else(|(n, e)| panic!("abstractions line {n}: {e}"));
        assert!(a.len() >= 50);
        assert!(a.iter().any(|t| t.alpha.is_empty() && t.beta.is_empty()));
        assert!(a.iter().any(|t| !t.alpha.is_empty() && t.beta.is_empty()));
        assert!(a.iter().any(|t| t.alpha.is_empty() && !t.beta.is_empty()));
        assert!(a.iter().any(|t| !t.alpha.is_empty() && !t.beta.is_empty()));
        assert!(f.iter().all(|f| f.free_vars().len() <= 3));
    }
}
