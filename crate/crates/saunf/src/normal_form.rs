//! Membership checking for the subset-unrealizability normal form and
//! for the stricter whole-literal (SynNNF-style) form, plus cheap
//! structural witness discovery.
//!
//! A witness for the normal form is an ordered sequence of disjoint,
//! literal-consistent leaf sets over the output variables. Membership
//! holds when each set is ∧-unrealizable in the circuit obtained by
//! ⊤-relabeling all earlier sets, and the fully relabeled circuit is
//! semantically independent of the outputs. Circuits that are already
//! independent of their outputs carry a distinguished certificate
//! instead of a (necessarily nonempty) sequence.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::circuit::{
    Assignment, Circuit, CircuitError, Label, LeafId, LeafSet, Literal, Spec, VarId,
};
use crate::realizability::{
    check_literal_realizable, check_subset_realizable, first_dependent_var, set_literal,
    Realizability, RealizabilityError,
};
use crate::sat::oracle::Oracle;

/// An ordered witness sequence: the S = (S₁, …, S_k) of the normal
/// form. Plain data; validity is decided by [`check_saunf`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeafSequence {
    sets: Vec<LeafSet>,
}

impl LeafSequence {
    pub fn new(sets: Vec<LeafSet>) -> Self {
        LeafSequence { sets }
    }

    pub fn sets(&self) -> &[LeafSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LeafSet> {
        self.sets.iter()
    }
}

impl FromIterator<LeafSet> for LeafSequence {
    fn from_iter<T: IntoIterator<Item = LeafSet>>(iter: T) -> Self {
        LeafSequence::new(iter.into_iter().collect())
    }
}

/// What certifies a specification as synthesizable: either a proper
/// witness sequence, or the distinguished marker for a circuit that is
/// already semantically independent of its outputs. The marker is
/// deliberately *not* presented as a witness sequence — the definition
/// requires sequences to be nonempty, so independence gets its own
/// certificate kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Sequence(LeafSequence),
    Independent,
}

impl Certificate {
    pub fn sequence(&self) -> Option<&LeafSequence> {
        match self {
            Certificate::Sequence(seq) => Some(seq),
            Certificate::Independent => None,
        }
    }
}

/// A specification bundled with a membership certificate.
#[derive(Clone, Debug)]
pub struct SaunfWitness {
    spec: Spec,
    certificate: Certificate,
}

impl SaunfWitness {
    /// Bundle without verifying. Use [`SaunfWitness::checked`] when the
    /// certificate comes from an untrusted source.
    pub fn new_unchecked(spec: Spec, certificate: Certificate) -> Self {
        SaunfWitness { spec, certificate }
    }

    /// Bundle and verify, rejecting certificates that fail membership.
    pub fn checked(
        spec: Spec,
        certificate: Certificate,
        oracle: &Oracle,
    ) -> Result<Self, NormalFormError> {
        let witness = SaunfWitness::new_unchecked(spec, certificate);
        match witness.verify(oracle)? {
            SaunfVerdict::Pass => Ok(witness),
            SaunfVerdict::Fail(violation) => Err(NormalFormError::Rejected(violation)),
        }
    }

    pub fn spec(&self) -> &Spec {
        &self.spec
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn into_parts(self) -> (Spec, Certificate) {
        (self.spec, self.certificate)
    }

    /// Re-run the membership check this witness claims to pass.
    pub fn verify(&self, oracle: &Oracle) -> Result<SaunfVerdict, NormalFormError> {
        match &self.certificate {
            Certificate::Sequence(seq) => check_saunf(&self.spec, seq, oracle),
            Certificate::Independent => {
                let outputs = self.spec.output_set();
                match first_dependent_var(self.spec.circuit(), &outputs, oracle)? {
                    None => Ok(SaunfVerdict::Pass),
                    Some(var) => {
                        Ok(SaunfVerdict::Fail(SaunfViolation::DependsOnOutput { var }))
                    }
                }
            }
        }
    }
}

/// Outcome of a membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaunfVerdict {
    Pass,
    Fail(SaunfViolation),
}

impl SaunfVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SaunfVerdict::Pass)
    }

    pub fn violation(&self) -> Option<&SaunfViolation> {
        match self {
            SaunfVerdict::Pass => None,
            SaunfVerdict::Fail(v) => Some(v),
        }
    }
}

/// The first violated membership condition, with its counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaunfViolation {
    /// Condition 1: two sets share a leaf.
    Overlap { earlier: usize, later: usize, leaf: LeafId },
    /// Condition 2: a set mixes labels or contains a constant leaf.
    MixedSet { set: usize, error: CircuitError },
    /// Condition 2: a set's literal is not over an output variable.
    NonOutputLiteral { set: usize, literal: Literal },
    /// Condition 3 (`set` = 0) or 4 (`set` > 0): the set is
    /// ∧-realizable in its stage circuit; σ is the realizability
    /// witness over that circuit's variables.
    SetRealizable { set: usize, witness: Assignment },
    /// Condition 5: the fully relabeled circuit still depends on an
    /// output variable. Also the failure form of an independence
    /// certificate.
    DependsOnOutput { var: VarId },
}

impl SaunfViolation {
    /// The 1-based condition number of the definition this violates.
    pub fn condition(&self) -> u8 {
        match self {
            SaunfViolation::Overlap { .. } => 1,
            SaunfViolation::MixedSet { .. } | SaunfViolation::NonOutputLiteral { .. } => 2,
            SaunfViolation::SetRealizable { set, .. } => {
                if *set == 0 {
                    3
                } else {
                    4
                }
            }
            SaunfViolation::DependsOnOutput { .. } => 5,
        }
    }
}

impl fmt::Display for SaunfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}: ", self.condition())?;
        match self {
            SaunfViolation::Overlap { earlier, later, leaf } => write!(
                f,
                "sets {} and {} are not disjoint (both contain {leaf})",
                earlier + 1,
                later + 1
            ),
            SaunfViolation::MixedSet { set, error } => {
                write!(f, "set {} is not literal-consistent: {error}", set + 1)
            }
            SaunfViolation::NonOutputLiteral { set, literal } => write!(
                f,
                "set {} is labeled {literal}, which is not over an output variable",
                set + 1
            ),
            SaunfViolation::SetRealizable { set, witness } => {
                write!(f, "set {} is ∧-realizable under σ = {{", set + 1)?;
                let mut first = true;
                for (v, val) in witness {
                    if !first {
                        write!(f, ", ")?;
                    }
                    first = false;
                    write!(f, "{v}={}", if *val { "⊤" } else { "⊥" })?;
                }
                write!(f, "}}")
            }
            SaunfViolation::DependsOnOutput { var } => {
                write!(f, "relabeled circuit still depends on output {var}")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum NormalFormError {
    #[error("witness sequence is empty")]
    EmptySequence,
    #[error("set {} in the witness sequence is empty", index + 1)]
    EmptySet { index: usize },
    #[error("order is not a permutation of the declared outputs")]
    NotAPermutation,
    #[error("circuit is not in the whole-literal normal form for this order")]
    NotSequentiallyUnrealizable,
    #[error("witness rejected: {0}")]
    Rejected(SaunfViolation),
    #[error(transparent)]
    Realizability(#[from] RealizabilityError),
}

impl From<CircuitError> for NormalFormError {
    fn from(e: CircuitError) -> Self {
        NormalFormError::Realizability(RealizabilityError::Circuit(e))
    }
}

impl From<crate::sat::oracle::OracleError> for NormalFormError {
    fn from(e: crate::sat::oracle::OracleError) -> Self {
        NormalFormError::Realizability(RealizabilityError::Oracle(e))
    }
}

/// Check the five membership conditions in order, reporting the first
/// violation: (1) pairwise disjointness, (2) literal consistency over
/// the outputs, (3) the first set ∧-unrealizable in the circuit,
/// (4) each later set ∧-unrealizable after ⊤-relabeling its
/// predecessors, (5) the fully relabeled circuit independent of the
/// outputs. An empty sequence, an empty set, or an unknown leaf id is
/// an error, not a verdict.
pub fn check_saunf(
    spec: &Spec,
    sequence: &LeafSequence,
    oracle: &Oracle,
) -> Result<SaunfVerdict, NormalFormError> {
    let circuit = spec.circuit();
    if sequence.is_empty() {
        return Err(NormalFormError::EmptySequence);
    }
    for (idx, set) in sequence.iter().enumerate() {
        if set.is_empty() {
            return Err(NormalFormError::EmptySet { index: idx });
        }
        for &leaf in set {
            if circuit.leaf_label(leaf).is_none() {
                return Err(CircuitError::UnknownLeaf(leaf).into());
            }
        }
    }

    // Condition 1: pairwise disjoint.
    let mut owner: BTreeMap<LeafId, usize> = BTreeMap::new();
    for (idx, set) in sequence.iter().enumerate() {
        for &leaf in set {
            if let Some(&earlier) = owner.get(&leaf) {
                return Ok(SaunfVerdict::Fail(SaunfViolation::Overlap {
                    earlier,
                    later: idx,
                    leaf,
                }));
            }
            owner.insert(leaf, idx);
        }
    }

    // Condition 2: one literal per set, over an output variable.
    for (idx, set) in sequence.iter().enumerate() {
        match set_literal(circuit, set) {
            Ok(lit) => {
                if !spec.is_output(lit.var) {
                    return Ok(SaunfVerdict::Fail(SaunfViolation::NonOutputLiteral {
                        set: idx,
                        literal: lit,
                    }));
                }
            }
            Err(RealizabilityError::Circuit(error)) => {
                return Ok(SaunfVerdict::Fail(SaunfViolation::MixedSet { set: idx, error }))
            }
            Err(other) => return Err(other.into()),
        }
    }

    // Conditions 3 and 4: sequential ∧-unrealizability. Each stage
    // checks the set in the circuit with all earlier sets ⊤-relabeled;
    // the "ℓ-leaves" masked ⊥ by the subset check are those of the
    // *stage* circuit, so earlier ⊤-relabelings are already out of
    // play.
    let mut stage = circuit.clone();
    for (idx, set) in sequence.iter().enumerate() {
        match check_subset_realizable(&stage, set, oracle)? {
            Realizability::Realizable(witness) => {
                return Ok(SaunfVerdict::Fail(SaunfViolation::SetRealizable {
                    set: idx,
                    witness,
                }))
            }
            Realizability::Unrealizable => {}
        }
        let relabel: BTreeMap<LeafId, Label> =
            set.iter().map(|&l| (l, Label::Const(true))).collect();
        stage = stage.relabel_leaves(&relabel)?;
    }

    // Condition 5: independence from the outputs.
    match first_dependent_var(&stage, &spec.output_set(), oracle)? {
        None => Ok(SaunfVerdict::Pass),
        Some(var) => Ok(SaunfVerdict::Fail(SaunfViolation::DependsOnOutput { var })),
    }
}

/// Membership checker with a verdict cache keyed on the circuit
/// structure, the declared outputs, and the sequence — the compiler
/// re-checks the same candidates often.
#[derive(Default)]
pub struct MembershipChecker {
    cache: RefCell<HashMap<(u64, Vec<VarId>, LeafSequence), SaunfVerdict>>,
    hits: Cell<u64>,
    misses: Cell<u64>,
}

impl MembershipChecker {
    pub fn new() -> Self {
        MembershipChecker::default()
    }

    pub fn check(
        &self,
        spec: &Spec,
        sequence: &LeafSequence,
        oracle: &Oracle,
    ) -> Result<SaunfVerdict, NormalFormError> {
        let key = (
            circuit_key(spec.circuit()),
            spec.outputs().to_vec(),
            sequence.clone(),
        );
        if let Some(verdict) = self.cache.borrow().get(&key) {
            self.hits.set(self.hits.get() + 1);
            return Ok(verdict.clone());
        }
        let verdict = check_saunf(spec, sequence, oracle)?;
        self.misses.set(self.misses.get() + 1);
        self.cache.borrow_mut().insert(key, verdict.clone());
        Ok(verdict)
    }

    /// (cache hits, cache misses) so far.
    pub fn stats(&self) -> (u64, u64) {
        (self.hits.get(), self.misses.get())
    }
}

fn circuit_key(circuit: &Circuit) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    circuit.nodes().hash(&mut h);
    circuit.root().hash(&mut h);
    h.finish()
}

/// Is the circuit in the whole-literal normal form for this output
/// order: each positive output literal sequentially ∧-unrealizable
/// after ⊤-relabeling both polarities of its predecessors?
pub fn check_synnnf(
    spec: &Spec,
    order: &[VarId],
    oracle: &Oracle,
) -> Result<bool, NormalFormError> {
    validate_permutation(spec, order)?;
    let mut stage = spec.circuit().clone();
    for &x in order {
        let lit = Literal::positive(x);
        if check_literal_realizable(&stage, lit, oracle)?.is_realizable() {
            return Ok(false);
        }
        stage = stage.literal_cofactor(lit, true, true);
    }
    Ok(true)
}

/// The canonical witness sequence induced by the whole-literal form:
/// for each output in order, the set of all its positive leaves, then
/// the set of all its negative leaves (empty sets dropped). Errors if
/// the circuit is not in the whole-literal form for this order, or if
/// no output labels any leaf (certify independence instead).
pub fn synnnf_to_saunf_sequence(
    spec: &Spec,
    order: &[VarId],
    oracle: &Oracle,
) -> Result<LeafSequence, NormalFormError> {
    if !check_synnnf(spec, order, oracle)? {
        return Err(NormalFormError::NotSequentiallyUnrealizable);
    }
    let circuit = spec.circuit();
    let mut sets = Vec::new();
    for &x in order {
        for lit in [Literal::positive(x), Literal::negative(x)] {
            let leaves = circuit.literal_leaves(lit);
            if !leaves.is_empty() {
                sets.push(leaves);
            }
        }
    }
    if sets.is_empty() {
        return Err(NormalFormError::EmptySequence);
    }
    Ok(LeafSequence::new(sets))
}

/// Structural witness discovery: when every output variable labels
/// leaves in only one polarity, the per-literal full leaf sets (in
/// declared output order) form a witness — each stage has no
/// opposite-polarity leaf, so ∧-unrealizability holds without any SAT
/// query. Condition 5 is still verified. Returns `None` when some
/// output appears in both polarities, or when no output labels a leaf
/// at all (certify independence instead).
pub fn single_polarity_witness(
    spec: &Spec,
    oracle: &Oracle,
) -> Result<Option<LeafSequence>, NormalFormError> {
    let circuit = spec.circuit();
    let mut sets = Vec::new();
    for &x in spec.outputs() {
        let pos = circuit.literal_leaves(Literal::positive(x));
        let neg = circuit.literal_leaves(Literal::negative(x));
        if !pos.is_empty() && !neg.is_empty() {
            return Ok(None);
        }
        let leaves = if pos.is_empty() { neg } else { pos };
        if !leaves.is_empty() {
            sets.push(leaves);
        }
    }
    if sets.is_empty() {
        return Ok(None);
    }
    let mut relabel: BTreeMap<LeafId, Label> = BTreeMap::new();
    for set in &sets {
        for &l in set {
            relabel.insert(l, Label::Const(true));
        }
    }
    let stage = circuit.relabel_leaves(&relabel)?;
    if !crate::realizability::check_independent(&stage, &spec.output_set(), oracle)? {
        return Ok(None);
    }
    Ok(Some(LeafSequence::new(sets)))
}

fn validate_permutation(spec: &Spec, order: &[VarId]) -> Result<(), NormalFormError> {
    let mut sorted: Vec<VarId> = order.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut declared: Vec<VarId> = spec.outputs().to_vec();
    declared.sort_unstable();
    if sorted.len() != order.len() || sorted != declared {
        return Err(NormalFormError::NotAPermutation);
    }
    Ok(())
}
