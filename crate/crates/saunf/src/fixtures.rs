//! The worked three-variable example used across tests, examples, and
//! documentation: one input `i`, two outputs `x1`, `x2`, and the
//! relation that holds exactly when `x1 = x2 = ¬i`.
//!
//! The circuit's shape (not just its function) matters: membership
//! witnesses name individual leaves, so the sixteen leaves are created
//! in a fixed order and exposed as `leaves[0]` … `leaves[15]`.

use std::collections::BTreeSet;

use crate::circuit::{Circuit, CircuitBuilder, LeafId, Literal, Spec, VarId};
use crate::normal_form::LeafSequence;

/// The example specification plus handles to its variables and leaves.
pub struct Fig1 {
    pub spec: Spec,
    /// Input variable `i` (v1).
    pub i: VarId,
    /// Output variable `x1` (v2).
    pub x1: VarId,
    /// Output variable `x2` (v3).
    pub x2: VarId,
    /// Leaf ids in creation order; `leaves[k]` is the leaf called `Lk`.
    pub leaves: [LeafId; 16],
}

/// Leaf labels of the example in creation order: `(variable, negated)`.
const LEAF_LABELS: [(u32, bool); 16] = [
    (1, false), // L0: i
    (2, true),  // L1: ¬x1
    (1, true),  // L2: ¬i
    (2, false), // L3: x1
    (1, false), // L4: i
    (3, true),  // L5: ¬x2
    (1, true),  // L6: ¬i
    (3, false), // L7: x2
    (1, false), // L8: i
    (3, true),  // L9: ¬x2
    (2, false), // L10: x1
    (3, true),  // L11: ¬x2
    (1, false), // L12: i
    (3, false), // L13: x2
    (2, true),  // L14: ¬x1
    (3, true),  // L15: ¬x2
];

fn build(leaf_range: std::ops::Range<usize>) -> Circuit {
    let mut b = CircuitBuilder::new();
    let nodes: Vec<_> = LEAF_LABELS[leaf_range.clone()]
        .iter()
        .map(|&(v, negated)| b.literal(Literal { var: VarId(v), negated }))
        .collect();
    // Pair consecutive leaves into ANDs, pair those into ORs, AND the
    // OR pairs, and OR the halves when both are present.
    let ands: Vec<_> = nodes.chunks(2).map(|p| b.and(p[0], p[1])).collect();
    let ors: Vec<_> = ands.chunks(2).map(|p| b.or(p[0], p[1])).collect();
    let halves: Vec<_> = ors.chunks(2).map(|p| b.and(p[0], p[1])).collect();
    let root = match halves.len() {
        1 => halves[0],
        2 => b.or(halves[0], halves[1]),
        n => unreachable!("unexpected half count {n}"),
    };
    b.finish(root)
}

/// The full example: G = G1 ∨ G2 with
/// G1 = ((i∧¬x1) ∨ (¬i∧x1)) ∧ ((i∧¬x2) ∨ (¬i∧x2)) and
/// G2 = ((i∧¬x2) ∨ (x1∧¬x2)) ∧ ((i∧x2) ∨ (¬x1∧¬x2)).
pub fn fig1() -> Fig1 {
    let circuit = build(0..16);
    let spec = Spec::new(
        circuit,
        [VarId(1)].into(),
        vec![VarId(2), VarId(3)],
        BTreeSet::new(),
    )
    .expect("fixture roles are consistent");
    Fig1 {
        spec,
        i: VarId(1),
        x1: VarId(2),
        x2: VarId(3),
        leaves: std::array::from_fn(|k| LeafId(k as u32)),
    }
}

impl Fig1 {
    /// The witness sequence ({L3}, {L7}, {L5}, {L1}) that certifies
    /// membership for the example.
    pub fn good_sequence(&self) -> LeafSequence {
        [3usize, 7, 5, 1]
            .into_iter()
            .map(|k| BTreeSet::from([self.leaves[k]]))
            .collect()
    }

    /// The near-miss ({L10}, {L7}, {L5}, {L1}): structurally valid,
    /// but its first set is ∧-realizable (σ(i) = σ(x2) = ⊥), so
    /// membership fails on the first unrealizability condition.
    pub fn bad_sequence(&self) -> LeafSequence {
        [10usize, 7, 5, 1]
            .into_iter()
            .map(|k| BTreeSet::from([self.leaves[k]]))
            .collect()
    }
}

/// The left disjunct G1 as a standalone circuit (leaves L0…L7, ids
/// 0…7). In it, x1 and x2 are ∧-unrealizable even though both are
/// ∧-realizable in the full G.
pub fn fig1_g1() -> Circuit {
    build(0..8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Assignment, Label};

    fn eval3(c: &Circuit, i: bool, x1: bool, x2: bool) -> bool {
        let sigma: Assignment =
            [(VarId(1), i), (VarId(2), x1), (VarId(3), x2)].into_iter().collect();
        c.evaluate(&sigma)
    }

    #[test]
    fn leaf_identities() {
        let fig = fig1();
        let g = fig.spec.circuit();
        assert_eq!(g.leaf_count(), 16);
        assert_eq!(g.gate_count(), 15);
        for (k, &(v, negated)) in LEAF_LABELS.iter().enumerate() {
            assert_eq!(
                g.leaf_label(fig.leaves[k]),
                Some(Label::Lit(Literal { var: VarId(v), negated })),
                "leaf L{k}"
            );
        }
    }

    /// Hand-derived truth table: G holds exactly when x1 = x2 = ¬i.
    #[test]
    fn truth_table() {
        let fig = fig1();
        let g = fig.spec.circuit();
        for bits in 0..8u32 {
            let (i, x1, x2) = (bits & 1 == 1, bits & 2 == 2, bits & 4 == 4);
            let expected = x1 == !i && x2 == !i;
            assert_eq!(eval3(g, i, x1, x2), expected, "at (i,x1,x2)=({i},{x1},{x2})");
        }
    }

    /// G1 alone holds exactly when x1 ≠ i and x2 ≠ i (same function,
    /// different structure — no x2 literal under an i-polarity mix).
    #[test]
    fn g1_truth_table() {
        let g1 = fig1_g1();
        assert_eq!(g1.leaf_count(), 8);
        for bits in 0..8u32 {
            let (i, x1, x2) = (bits & 1 == 1, bits & 2 == 2, bits & 4 == 4);
            let expected = x1 != i && x2 != i;
            assert_eq!(eval3(&g1, i, x1, x2), expected);
        }
    }

    #[test]
    fn roles() {
        let fig = fig1();
        assert_eq!(fig.spec.outputs(), &[fig.x1, fig.x2]);
        assert!(fig.spec.inputs().contains(&fig.i));
        assert!(fig.spec.aux().is_empty());
    }
}
