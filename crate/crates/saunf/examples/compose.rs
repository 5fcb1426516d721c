//! Composing certified specifications: disjoin, conjoin, project.
//!
//! Witnessed specifications compose without new solving work — with
//! one caveat for conjunction. Disjunction always preserves
//! membership. Conjunction preserves it only when no output literal
//! appears positively in one operand and negatively in the other; the
//! `polarity_clash` scan decides that up front. Existential
//! projection replaces each output with its synthesized definition,
//! yielding a circuit over the inputs alone.
//!
//! ```sh
//! cargo run --example compose
//! ```

use std::collections::BTreeSet;

use saunf::algebra::{conjoin, disjoin, existential_project, polarity_clash, AlgebraError};
use saunf::circuit::{Circuit, CircuitBuilder, Literal, Spec, VarId};
use saunf::normal_form::{single_polarity_witness, Certificate, SaunfVerdict, SaunfWitness};
use saunf::sat::oracle::Oracle;

/// Build a one-output spec `lhs ∨ rhs` with input i = v1, output x = v2.
fn clause_spec(lhs: Literal, rhs: Literal) -> Spec {
    let mut b = CircuitBuilder::new();
    let l = b.literal(lhs);
    let r = b.literal(rhs);
    let root = b.or(l, r);
    let circuit = b.finish(root);
    let i = VarId(1);
    let x = VarId(2);
    Spec::new(circuit, BTreeSet::from([i]), vec![x], BTreeSet::new()).unwrap()
}

/// Attach the obvious certificate: every output leaf in one set per
/// polarity, discovered by the single-polarity scan.
fn certify(spec: Spec, oracle: &Oracle) -> SaunfWitness {
    let seq = single_polarity_witness(&spec, oracle)
        .unwrap()
        .expect("these clause specs admit a single-polarity witness");
    SaunfWitness::checked(spec, Certificate::Sequence(seq), oracle).unwrap()
}

fn verdict(w: &SaunfWitness, oracle: &Oracle) -> String {
    match w.verify(oracle).unwrap() {
        SaunfVerdict::Pass => "PASS".into(),
        SaunfVerdict::Fail(v) => format!("FAIL {v}"),
    }
}

fn main() {
    let oracle = Oracle::internal();
    let i = VarId(1);
    let x = VarId(2);

    // Three tiny certified specs over the same roles.
    let a = certify(clause_spec(Literal::positive(x), Literal::positive(i)), &oracle); // x ∨ i
    let b = certify(clause_spec(Literal::positive(x), Literal::negative(i)), &oracle); // x ∨ ¬i
    let c = certify(clause_spec(Literal::negative(x), Literal::positive(i)), &oracle); // ¬x ∨ i
    println!("A: x ∨ i   ({})", verdict(&a, &oracle));
    println!("B: x ∨ ¬i  ({})", verdict(&b, &oracle));
    println!("C: ¬x ∨ i  ({})", verdict(&c, &oracle));

    // Conjunction works when both operands use x with one polarity.
    let ab = conjoin(&a, &b).unwrap();
    println!("A ∧ B: {} nodes ({})", ab.spec().circuit().len(), verdict(&ab, &oracle));

    // A uses +x, C uses ¬x: the scan reports the clash and conjoin
    // refuses rather than emit an uncertified result.
    let clash = polarity_clash(a.spec(), c.spec());
    println!("polarity scan for A ∧ C: clash on {:?}", clash.unwrap());
    match conjoin(&a, &c) {
        Err(AlgebraError::PolarityClash { literal }) => {
            println!("conjoin(A, C) refused: output literal {literal} flips polarity");
        }
        other => panic!("expected a polarity refusal, got {other:?}"),
    }

    // Disjunction needs no such scan — it always certifies.
    let ac = disjoin(&a, &c).unwrap();
    println!("A ∨ C: {} nodes ({})", ac.spec().circuit().len(), verdict(&ac, &oracle));

    // Projection: ∃x. (x ∨ i) ∧ (x ∨ ¬i) is valid — x = ⊤ always
    // works — so the projected circuit is a tautology over i.
    let projected: Circuit = existential_project(&ab);
    let as_const = projected.cprop_simp().0.as_constant();
    println!(
        "∃x. A ∧ B simplifies to the constant {:?} (always solvable)",
        as_const.unwrap()
    );

    // The oracle settles the same question for a projection that does
    // not fold to a constant syntactically.
    let proj_c = existential_project(&c);
    let always = oracle
        .check_equivalent(&proj_c, &Circuit::constant(true))
        .unwrap();
    println!("∃x. C is a tautology over the inputs: {always}");
}
