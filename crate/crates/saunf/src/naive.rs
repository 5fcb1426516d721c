//! Exhaustive-enumeration reference implementations.
//!
//! Every predicate the solver-backed modules decide with SAT queries is
//! re-decided here by walking all assignments. These functions are the
//! independent oracles the test suite compares against; they are only
//! usable on small circuits and deliberately share no code with the
//! encodings they check (beyond circuit evaluation itself).

use std::collections::BTreeSet;

use crate::circuit::{Assignment, Circuit, LeafId, Literal, VarId};
use crate::realizability::replay_witness;

/// Enumeration guard: 2^22 assignments is the most we ever walk.
const MAX_VARS: usize = 22;

/// All assignments over the given variables, in a fixed order (variable
/// `vars[i]` toggles with bit `i` of an increasing counter).
pub fn assignments_over(vars: &BTreeSet<VarId>) -> impl Iterator<Item = Assignment> {
    assert!(
        vars.len() <= MAX_VARS,
        "{} variables is too many for brute force",
        vars.len()
    );
    let vars: Vec<VarId> = vars.iter().copied().collect();
    (0..1u64 << vars.len()).map(move |bits| {
        vars.iter()
            .enumerate()
            .map(|(i, &v)| (v, bits >> i & 1 == 1))
            .collect()
    })
}

/// Do the circuits compute the same function over the union of their
/// variables?
pub fn equivalent(a: &Circuit, b: &Circuit) -> bool {
    let mut vars = a.vars();
    vars.extend(b.vars());
    assignments_over(&vars).all(|sigma| a.evaluate(&sigma) == b.evaluate(&sigma))
}

pub fn tautology(circuit: &Circuit) -> bool {
    assignments_over(&circuit.vars()).all(|sigma| circuit.evaluate(&sigma))
}

pub fn satisfiable(circuit: &Circuit) -> Option<Assignment> {
    assignments_over(&circuit.vars()).find(|sigma| circuit.evaluate(sigma))
}

/// Brute-force ∧-realizability of a literal: search every assignment of
/// the other variables for one under which the four cofactors evaluate
/// to exactly (⊤, ⊥, ⊥, ⊥).
pub fn literal_realizable(circuit: &Circuit, lit: Literal) -> Option<Assignment> {
    let mut others = circuit.vars();
    others.remove(&lit.var);
    assignments_over(&others).find(|sigma| replay_witness(circuit, lit, sigma))
}

/// Brute-force ∧-realizability of a leaf subset: label the other
/// same-literal leaves ⊥ first, then search as for a literal. Panics on
/// a set that is empty or not literal-consistent (oracle use only).
pub fn subset_realizable(circuit: &Circuit, set: &BTreeSet<LeafId>) -> Option<Assignment> {
    let masked = mask_to_subset(circuit, set);
    let lit = subset_label(circuit, set);
    let mut others = circuit.vars();
    others.remove(&lit.var);
    assignments_over(&others).find(|sigma| replay_witness(&masked, lit, sigma))
}

/// The common literal of a nonempty literal-consistent leaf set.
pub fn subset_label(circuit: &Circuit, set: &BTreeSet<LeafId>) -> Literal {
    let mut label = None;
    for &leaf in set {
        let lit = circuit
            .leaf_label(leaf)
            .expect("leaf exists")
            .literal()
            .expect("literal-labeled leaf");
        assert!(
            label.is_none() || label == Some(lit),
            "leaf set is not literal-consistent"
        );
        label = Some(lit);
    }
    label.expect("nonempty leaf set")
}

/// The circuit with every same-literal leaf outside `set` labeled ⊥.
pub fn mask_to_subset(circuit: &Circuit, set: &BTreeSet<LeafId>) -> Circuit {
    let lit = subset_label(circuit, set);
    let map = circuit
        .literal_leaves(lit)
        .into_iter()
        .filter(|leaf| !set.contains(leaf))
        .map(|leaf| (leaf, crate::circuit::Label::Const(false)))
        .collect();
    circuit.relabel_leaves(&map).expect("leaves exist")
}

/// Brute-force membership for a structurally valid witness sequence
/// (disjoint, nonempty, literal-consistent sets over output
/// variables): decides conditions 3, 4, and 5 by enumeration. Returns
/// the first violated condition number, or `None` when the sequence
/// passes.
pub fn saunf_brute(spec: &crate::circuit::Spec, sets: &[BTreeSet<LeafId>]) -> Option<u8> {
    let mut current = spec.circuit().clone();
    for (idx, set) in sets.iter().enumerate() {
        if subset_realizable(&current, set).is_some() {
            return Some(if idx == 0 { 3 } else { 4 });
        }
        let relabel = set
            .iter()
            .map(|&l| (l, crate::circuit::Label::Const(true)))
            .collect();
        current = current.relabel_leaves(&relabel).expect("leaves exist");
    }
    if !independent_of(&current, &spec.output_set()) {
        return Some(5);
    }
    None
}

/// Brute-force sequential ∧-unrealizability of whole output literals
/// in the given order (both-polarity ⊤-relabeling between steps).
pub fn synnnf_brute(spec: &crate::circuit::Spec, order: &[VarId]) -> bool {
    let mut current = spec.circuit().clone();
    for &x in order {
        let lit = Literal::positive(x);
        if literal_realizable(&current, lit).is_some() {
            return false;
        }
        current = current.literal_cofactor(lit, true, true);
    }
    true
}

/// Is the circuit's value unchanged under every reassignment of `vars`?
pub fn independent_of(circuit: &Circuit, vars: &BTreeSet<VarId>) -> bool {
    let rest: BTreeSet<VarId> = circuit.vars().difference(vars).copied().collect();
    let tested: BTreeSet<VarId> = vars
        .iter()
        .copied()
        .filter(|v| circuit.vars().contains(v))
        .collect();
    assignments_over(&rest).all(|base| {
        let mut values = assignments_over(&tested).map(|part| {
            let mut sigma = base.clone();
            sigma.extend(part);
            circuit.evaluate(&sigma)
        });
        let first = values.next().expect("at least one assignment");
        values.all(|v| v == first)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitBuilder, Label};

    fn lit(v: u32, neg: bool) -> Literal {
        Literal { var: VarId(v), negated: neg }
    }

    /// x ∧ ¬x: the circuit *is* w ∧ w′, so x is realizable with an
    /// empty assignment.
    #[test]
    fn contradiction_is_realizable() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(lit(1, false));
        let nx = b.literal(lit(1, true));
        let root = b.and(x, nx);
        let c = b.finish(root);
        let w = literal_realizable(&c, lit(1, false)).expect("realizable");
        assert!(w.is_empty());
    }

    /// A single positive leaf cannot depend on w′, so it is
    /// unrealizable.
    #[test]
    fn single_polarity_is_unrealizable() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(lit(1, false));
        let c = b.finish(x);
        assert!(literal_realizable(&c, lit(1, false)).is_none());
    }

    #[test]
    fn independence_by_enumeration() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(lit(1, false));
        let nx = b.literal(lit(1, true));
        let y = b.literal(lit(2, false));
        let tauto = b.or(x, nx);
        let root = b.and(tauto, y);
        let c = b.finish(root);
        let just_x: BTreeSet<VarId> = [VarId(1)].into();
        let just_y: BTreeSet<VarId> = [VarId(2)].into();
        assert!(independent_of(&c, &just_x));
        assert!(!independent_of(&c, &just_y));
        assert!(independent_of(&Circuit::constant(true), &just_y));
    }

    #[test]
    fn subset_masking() {
        let mut b = CircuitBuilder::new();
        let x_a = b.literal(lit(1, false));
        let x_b = b.literal(lit(1, false));
        let root = b.or(x_a, x_b);
        let c = b.finish(root);
        let first = b_leaf_id(&c, 0);
        let masked = mask_to_subset(&c, &[first].into());
        let labels: Vec<Label> = masked.leaves().map(|(_, l)| l).collect();
        assert_eq!(labels, vec![Label::Lit(lit(1, false)), Label::Const(false)]);
    }

    fn b_leaf_id(c: &Circuit, n: u32) -> LeafId {
        let id = LeafId(n);
        assert!(c.leaf_label(id).is_some());
        id
    }
}
