//! The commuting diagram `h(I(φ)) = I_T*(φ)` and the Tarski constraint.

use crate::concepts::ConceptStore;
use crate::element::DomainElement;
use crate::relalg::{all_tuples, Relation, Tuple};
use crate::syntax::{Assignment, Formula, Term};

use super::{interpret, tarski_extension, Extensionalizer, SemanticsError, World};

/// `g*(t)`: variables through `g`, constants through the world, and an
/// abstraction to the concept `I(φ[β/g(β)])`.
pub fn assignment_extend(
    store: &ConceptStore,
    t: &Term,
    g: &Assignment,
    w: &World,
) -> Result<DomainElement, SemanticsError> {
    match t {
        Term::Var(v) => g.get(v).cloned().ok_or_else(|| SemanticsError::UnboundVariable(v.clone())),
        Term::Const(c) => Ok(w.constant(c)?.clone()),
        Term::Elem(e) => Ok(e.clone()),
        Term::Abs(a) => {
            let values = a
                .beta
                .iter()
                .map(|b| g.get(b).cloned().ok_or_else(|| SemanticsError::UnboundVariable(b.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(interpret(store, &a.body.instantiate(&a.beta, &values))?.handle())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramReport {
    /// Brute-force Tarski extension, labelled by the free variables.
    pub tarski: Relation,
    /// `h(I(φ))` with the same labels.
    pub algebraic: Relation,
    pub commutes: bool,
    /// Least tuple on which the two sides disagree.
    pub witness: Option<Tuple>,
}

/// Compares `h(I(φ))` with the Tarski extension of `φ` in one world.
pub fn check_diagram(ext: &Extensionalizer<'_>, world: usize, f: &Formula) -> Result<DiagramReport, SemanticsError> {
    let store = ext.store();
    let tarski = tarski_extension(store, ext.worlds(), world, f)?;
    let u = interpret(store, f)?;
    let algebraic = ext.extensionalize(&u, world)?.with_attrs(f.free_vars().into_vec())?;
    let witness = tarski.symmetric_difference(&algebraic).into_iter().next();
    Ok(DiagramReport { commutes: witness.is_none(), tarski, algebraic, witness })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintReport {
    pub assignments: usize,
    /// `(g, h(I(φ/g)) = t, ⟨g(x₁..xₖ)⟩ ∈ h(I(φ)))` wherever the two differ.
    pub failures: Vec<(Assignment, bool, bool)>,
}

impl ConstraintReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The two sides of `h(I(φ/g)) = t  ⇔  ⟨g(x₁),...,g(xₖ)⟩ ∈ h(I(φ))`.
pub fn tarski_constraint_sides(
    ext: &Extensionalizer<'_>,
    world: usize,
    f: &Formula,
    g: &Assignment,
) -> Result<(bool, bool), SemanticsError> {
    let store = ext.store();
    let grounded = interpret(store, &f.ground(g)?)?;
    let left = ext.extensionalize(&grounded, world)?.is_true();
    let tuple: Tuple = f
        .free_vars()
        .iter()
        .map(|v| g.get(v).cloned().ok_or_else(|| SemanticsError::UnboundVariable(v.clone())))
        .collect::<Result<_, _>>()?;
    let right = ext.extensionalize(&interpret(store, f)?, world)?.contains(&tuple);
    Ok((left, right))
}

/// Checks the constraint for every assignment of the free variables of
/// `φ` over the world's domain.
pub fn check_tarski_constraint(
    ext: &Extensionalizer<'_>,
    world: usize,
    f: &Formula,
) -> Result<ConstraintReport, SemanticsError> {
    let fv = f.free_vars().into_vec();
    let mut report = ConstraintReport::default();
    for values in all_tuples(ext.worlds()[world].domain(), fv.len()) {
        let g: Assignment = fv.iter().cloned().zip(values).collect();
        let (left, right) = tarski_constraint_sides(ext, world, f, &g)?;
        report.assignments += 1;
        if left != right {
            report.failures.push((g, left, right));
        }
    }
    Ok(report)
}
