//! Tarski satisfaction by brute force over assignments, evaluated
//! directly on the formula tree.

use crate::concepts::ConceptStore;
use crate::relalg::{all_tuples, Relation};
use crate::syntax::{Assignment, Formula};

use super::{diagram::assignment_extend, SemanticsError, World};

/// `⊨_g φ` in `worlds[world]`. `□ψ` holds when `ψ` holds under `g` in
/// every world of `worlds`.
pub fn satisfies_tarski(
    store: &ConceptStore,
    worlds: &[World],
    world: usize,
    f: &Formula,
    g: &Assignment,
) -> Result<bool, SemanticsError> {
    let w = &worlds[world];
    Ok(match f {
        Formula::Atom { pred, args } => {
            if pred.is_truth() {
                return Ok(true);
            }
            let vals = args
                .iter()
                .map(|t| assignment_extend(store, t, g, w))
                .collect::<Result<Vec<_>, _>>()?;
            if pred.is_identity() {
                vals[0] == vals[1] && w.domain().binary_search(&vals[0]).is_ok()
            } else {
                w.relation(pred)?.contains(&vals)
            }
        }
        Formula::Conj(l, r) => {
            satisfies_tarski(store, worlds, world, l, g)? && satisfies_tarski(store, worlds, world, r, g)?
        }
        Formula::Neg(s) => !satisfies_tarski(store, worlds, world, s, g)?,
        Formula::Exists(x, s) => {
            let mut g = g.clone();
            for d in w.domain() {
                g.insert(x.clone(), d.clone());
                if satisfies_tarski(store, worlds, world, s, &g)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Nec(s) => {
            for v in 0..worlds.len() {
                if !satisfies_tarski(store, worlds, v, s, g)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// `{⟨g(x₁),...,g(xₙ)⟩ | ⊨_g φ}` over `D^n`, with `(x₁..xₙ)` the free
/// variables of `φ` in canonical order, used as the column labels.
pub fn tarski_extension(
    store: &ConceptStore,
    worlds: &[World],
    world: usize,
    f: &Formula,
) -> Result<Relation, SemanticsError> {
    let fv = f.free_vars().into_vec();
    let mut out = Relation::empty(fv.len());
    for values in all_tuples(worlds[world].domain(), fv.len()) {
        let g: Assignment = fv.iter().cloned().zip(values.iter().cloned()).collect();
        if satisfies_tarski(store, worlds, world, f, &g)? {
            out.insert(values)?;
        }
    }
    Ok(out.with_attrs(fv)?)
}

