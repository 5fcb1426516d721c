//! Witness-preserving composition of normal-form circuits:
//! disjunction, polarity-disjoint conjunction, and existential
//! projection of all outputs.
//!
//! Disjunction concatenates the two witness sequences with no ordering
//! constraint between them. Conjunction is only witness-preserving
//! when no output literal appears in one operand with its negation in
//! the other; on a clash the operation refuses (composing through the
//! general case is as hard as compiling from scratch — the CLI offers
//! an explicit conjoin-then-recompile pipeline instead). Projection
//! exploits the normal form: ⊤-relabeling every output leaf computes
//! ∃X in one pass, with no solver involved.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{
    Circuit, CircuitBuilder, CircuitError, Label, LeafId, Literal, Spec, SpecError, VarId,
};
use crate::normal_form::{Certificate, LeafSequence, SaunfWitness};

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    /// The operands declare different output sets.
    #[error("operands declare different output sets")]
    OutputMismatch,
    /// A variable is classified differently by the two operands
    /// (input in one, auxiliary in the other).
    #[error("variable {0} has conflicting roles in the two operands")]
    RoleMismatch(VarId),
    /// Conjunction refused: the literal labels a leaf in the first
    /// operand while its negation labels a leaf in the second.
    #[error("polarity clash on {literal}: present in one operand, negated in the other")]
    PolarityClash { literal: Literal },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Merge the role declarations of two specifications: output sets
/// must coincide (the result keeps the first operand's declaration
/// order); inputs and auxiliaries are unioned and must not conflict.
fn merged_roles(
    a: &Spec,
    b: &Spec,
) -> Result<(BTreeSet<VarId>, Vec<VarId>, BTreeSet<VarId>), AlgebraError> {
    if a.output_set() != b.output_set() {
        return Err(AlgebraError::OutputMismatch);
    }
    let inputs: BTreeSet<VarId> = a.inputs().union(b.inputs()).copied().collect();
    let aux: BTreeSet<VarId> = a.aux().union(b.aux()).copied().collect();
    if let Some(&v) = inputs.intersection(&aux).next() {
        return Err(AlgebraError::RoleMismatch(v));
    }
    Ok((inputs, a.outputs().to_vec(), aux))
}

/// The certificate's sets remapped through an import map; an
/// independence certificate contributes nothing.
fn remapped_sets(
    certificate: &Certificate,
    map: &BTreeMap<LeafId, LeafId>,
) -> Vec<BTreeSet<LeafId>> {
    match certificate {
        Certificate::Independent => Vec::new(),
        Certificate::Sequence(seq) => seq
            .sets()
            .iter()
            .map(|s| s.iter().map(|l| map[l]).collect())
            .collect(),
    }
}

fn certificate_from(sets: Vec<BTreeSet<LeafId>>) -> Certificate {
    if sets.is_empty() {
        Certificate::Independent
    } else {
        Certificate::Sequence(LeafSequence::new(sets))
    }
}

/// Disjunction of two witnesses: OR of the circuits, concatenation of
/// the sequences (first operand's sets first; no compatibility between
/// the two orders is needed). Independence certificates contribute no
/// sets; two independent operands yield an independent result. The
/// result is not re-verified — membership follows from the operands'.
pub fn disjoin(a: &SaunfWitness, b: &SaunfWitness) -> Result<SaunfWitness, AlgebraError> {
    let (inputs, outputs, aux) = merged_roles(a.spec(), b.spec())?;
    let mut builder = CircuitBuilder::new();
    let (root_a, map_a) = builder.import(a.spec().circuit());
    let (root_b, map_b) = builder.import(b.spec().circuit());
    let root = builder.or(root_a, root_b);
    let circuit = builder.finish(root);

    let mut sets = remapped_sets(a.certificate(), &map_a);
    sets.extend(remapped_sets(b.certificate(), &map_b));
    let spec = Spec::new(circuit, inputs, outputs, aux)?;
    Ok(SaunfWitness::new_unchecked(spec, certificate_from(sets)))
}

/// The output literals labeling at least one leaf of the circuit.
fn output_literals(spec: &Spec) -> BTreeSet<Literal> {
    let outputs = spec.output_set();
    spec.circuit()
        .leaves()
        .filter_map(|(_, label)| label.literal())
        .filter(|l| outputs.contains(&l.var))
        .collect()
}

/// First output literal (lowest variable, positive polarity first)
/// present in `a` whose negation is present in `b`, if any.
pub fn polarity_clash(a: &Spec, b: &Spec) -> Option<Literal> {
    let b_literals = output_literals(b);
    output_literals(a).into_iter().find(|&l| b_literals.contains(&!l))
}

/// Conjunction of two witnesses, defined only when no output literal
/// appears in the first operand with its negation in the second: AND
/// of the circuits, concatenation of the sequences, independence
/// contributing nothing. On a clash the operation refuses with the
/// offending literal — a general conjunction would need recompilation.
pub fn conjoin(a: &SaunfWitness, b: &SaunfWitness) -> Result<SaunfWitness, AlgebraError> {
    let (inputs, outputs, aux) = merged_roles(a.spec(), b.spec())?;
    if let Some(literal) = polarity_clash(a.spec(), b.spec()) {
        return Err(AlgebraError::PolarityClash { literal });
    }
    let mut builder = CircuitBuilder::new();
    let (root_a, map_a) = builder.import(a.spec().circuit());
    let (root_b, map_b) = builder.import(b.spec().circuit());
    let root = builder.and(root_a, root_b);
    let circuit = builder.finish(root);

    let mut sets = remapped_sets(a.certificate(), &map_a);
    sets.extend(remapped_sets(b.certificate(), &map_b));
    let spec = Spec::new(circuit, inputs, outputs, aux)?;
    Ok(SaunfWitness::new_unchecked(spec, certificate_from(sets)))
}

/// Existential projection of all outputs, computed without a solver.
/// For a sequence witness, ⊤-relabel every output-labeled leaf (the
/// normal form guarantees this equals ∃X); an independent circuit is
/// its own projection and is returned unchanged up to constant
/// propagation. The result ranges over the parameter variables.
pub fn existential_project(witness: &SaunfWitness) -> Circuit {
    let circuit = witness.spec().circuit();
    match witness.certificate() {
        Certificate::Independent => circuit.cprop_simp().0,
        Certificate::Sequence(_) => {
            let outputs = witness.spec().output_set();
            let relabel: BTreeMap<LeafId, Label> = circuit
                .leaves()
                .filter(|(_, label)| {
                    label.literal().is_some_and(|l| outputs.contains(&l.var))
                })
                .map(|(id, _)| (id, Label::Const(true)))
                .collect();
            circuit
                .relabel_leaves(&relabel)
                .expect("leaf ids come from this circuit")
                .cprop_simp()
                .0
        }
    }
}
