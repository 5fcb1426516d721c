//! ∧-realizability of literals and leaf subsets, plus semantic
//! independence from chosen variables — the semantic predicates the
//! normal-form checker and compiler are built on. Each predicate is
//! decided by a single SAT query (or one equivalence query per variable
//! for independence).

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{Assignment, Circuit, CircuitError, Label, LeafId, Literal, VarId};
use crate::sat::oracle::{Oracle, OracleError, SatResult};
use crate::sat::tseitin::Encoder;

#[derive(Debug, thiserror::Error)]
pub enum RealizabilityError {
    #[error("leaf set is empty")]
    EmptySet,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Verdict of an ∧-realizability check. A `Realizable` verdict carries
/// the witness assignment σ over every circuit variable except the
/// tested literal's variable; under it, relabeling the tested literal's
/// leaves with (w, w′) makes the circuit evaluate to exactly w ∧ w′.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realizability {
    Realizable(Assignment),
    Unrealizable,
}

impl Realizability {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Realizability::Realizable(_))
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match self {
            Realizability::Realizable(sigma) => Some(sigma),
            Realizability::Unrealizable => None,
        }
    }
}

/// The four (w, w′) relabelings of an ∧-realizability check and the
/// value the cofactor must take under the witness: (⊤,⊤) ↦ ⊤ and the
/// other three combinations ↦ ⊥.
pub const COFACTOR_PATTERN: [(bool, bool, bool); 4] = [
    (true, true, true),
    (true, false, false),
    (false, true, false),
    (false, false, false),
];

/// Replay a witness: σ certifies ∧-realizability of `lit` exactly when
/// the four cofactors `circuit`|_{ℓ=w,¬ℓ=w′} evaluate to w ∧ w′.
pub fn replay_witness(circuit: &Circuit, lit: Literal, sigma: &Assignment) -> bool {
    COFACTOR_PATTERN
        .iter()
        .all(|&(w, wp, want)| circuit.literal_cofactor(lit, w, wp).evaluate(sigma) == want)
}

/// Is `lit` ∧-realizable in `circuit`? One SAT query over four cofactor
/// copies that share one variable map, so a single model fixes σ for
/// all four at once. Every `Realizable` verdict is replayed through
/// evaluation before being returned.
pub fn check_literal_realizable(
    circuit: &Circuit,
    lit: Literal,
    oracle: &Oracle,
) -> Result<Realizability, RealizabilityError> {
    if !circuit.has_literal_leaf(lit) {
        // With no ℓ-leaf the cofactors cannot depend on w, but w∧w′
        // does; no σ can close that gap.
        return Ok(Realizability::Unrealizable);
    }
    let mut enc = Encoder::new();
    for (w, wp, want) in COFACTOR_PATTERN {
        let root = enc.add_circuit(&circuit.literal_cofactor(lit, w, wp));
        enc.assert_lit(root, want);
    }
    let (cnf, map) = enc.into_parts();
    match oracle.solve(&cnf, &[])? {
        SatResult::Sat(model) => {
            let witness = totalize(circuit, lit.var, &map, &model);
            assert!(
                replay_witness(circuit, lit, &witness),
                "realizability witness failed replay: the cofactor encoding is unsound"
            );
            Ok(Realizability::Realizable(witness))
        }
        SatResult::Unsat => Ok(Realizability::Unrealizable),
    }
}

/// The single literal labeling every leaf of `set`. Errors on an empty
/// set, an unknown leaf, a constant-labeled leaf, or mixed labels.
pub fn set_literal(
    circuit: &Circuit,
    set: &BTreeSet<LeafId>,
) -> Result<Literal, RealizabilityError> {
    let mut found: Option<(LeafId, Literal)> = None;
    for &leaf in set {
        let label = circuit
            .leaf_label(leaf)
            .ok_or(CircuitError::UnknownLeaf(leaf))?;
        let lit = match label {
            Label::Lit(l) => l,
            Label::Const(_) => return Err(CircuitError::ConstLeafInSet(leaf).into()),
        };
        match found {
            None => found = Some((leaf, lit)),
            Some((first, first_lit)) if first_lit != lit => {
                return Err(CircuitError::MixedLeafSet {
                    a: first,
                    a_label: Label::Lit(first_lit),
                    b: leaf,
                    b_label: Label::Lit(lit),
                }
                .into())
            }
            Some(_) => {}
        }
    }
    found.map(|(_, l)| l).ok_or(RealizabilityError::EmptySet)
}

/// Is the leaf subset `set` ∧-realizable in `circuit`? The same-literal
/// leaves outside the set are labeled ⊥ first, then the literal check
/// runs on the result. Witnesses are extended to cover every variable
/// of the original circuit (except the tested one).
pub fn check_subset_realizable(
    circuit: &Circuit,
    set: &BTreeSet<LeafId>,
    oracle: &Oracle,
) -> Result<Realizability, RealizabilityError> {
    let lit = set_literal(circuit, set)?;
    let mask: BTreeMap<LeafId, Label> = circuit
        .literal_leaves(lit)
        .into_iter()
        .filter(|leaf| !set.contains(leaf))
        .map(|leaf| (leaf, Label::Const(false)))
        .collect();
    let masked = circuit.relabel_leaves(&mask)?;
    match check_literal_realizable(&masked, lit, oracle)? {
        Realizability::Realizable(mut sigma) => {
            for v in circuit.vars() {
                if v != lit.var {
                    sigma.entry(v).or_insert(false);
                }
            }
            Ok(Realizability::Realizable(sigma))
        }
        unrealizable => Ok(unrealizable),
    }
}

/// Is the circuit semantically independent of every variable in
/// `vars`? Decided per variable by equivalence of the two pure
/// cofactors `circuit`|_{v=⊤,¬v=⊥} and `circuit`|_{v=⊥,¬v=⊤};
/// variables labeling no leaf are trivially independent and cost no
/// query.
pub fn check_independent(
    circuit: &Circuit,
    vars: &BTreeSet<VarId>,
    oracle: &Oracle,
) -> Result<bool, RealizabilityError> {
    Ok(first_dependent_var(circuit, vars, oracle)?.is_none())
}

/// The lowest-numbered variable in `vars` the circuit semantically
/// depends on, if any. [`check_independent`] is this, collapsed to a
/// boolean.
pub fn first_dependent_var(
    circuit: &Circuit,
    vars: &BTreeSet<VarId>,
    oracle: &Oracle,
) -> Result<Option<VarId>, RealizabilityError> {
    for &v in vars {
        if circuit.var_leaves(v).is_empty() {
            continue;
        }
        let positive = circuit.assign_var(v, true);
        let negative = circuit.assign_var(v, false);
        if !oracle.check_equivalent(&positive, &negative)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn totalize(
    circuit: &Circuit,
    skip: VarId,
    map: &BTreeMap<VarId, i32>,
    model: &[bool],
) -> Assignment {
    let mut sigma = Assignment::new();
    for v in circuit.vars() {
        if v == skip {
            continue;
        }
        let value = map
            .get(&v)
            .map_or(false, |&sv| model[(sv - 1) as usize]);
        sigma.insert(v, value);
    }
    sigma
}
