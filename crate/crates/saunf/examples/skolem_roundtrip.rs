//! Round trip: witness → functions → witness.
//!
//! Synthesis and the reverse construction are inverses up to
//! equivalence. Starting from a certified CNF specification, this
//! example synthesizes a function vector, then rebuilds a certified
//! specification from that vector alone. The rebuilt circuit is
//! equivalent to the original, passes membership, and is ready for
//! another round of synthesis. The size report bounds the rebuilt
//! circuit in terms of the inputs to the construction.
//!
//! ```sh
//! cargo run --example skolem_roundtrip
//! ```

use std::collections::BTreeSet;

use saunf::circuit::{CircuitBuilder, Literal, Spec, VarId};
use saunf::compiler::{get_saunf, CompileOptions};
use saunf::normal_form::SaunfVerdict;
use saunf::sat::oracle::Oracle;
use saunf::synthesis::{saunf_from_skolem, sk_gen};

fn main() {
    let oracle = Oracle::internal();

    // A small CNF relation: inputs v1, v2; outputs v3, v4.
    //   (v1 ∨ v3) ∧ (¬v2 ∨ ¬v3 ∨ v4) ∧ (¬v1 ∨ ¬v4)
    let clauses: Vec<Vec<(u32, bool)>> = vec![
        vec![(1, false), (3, false)],
        vec![(2, true), (3, true), (4, false)],
        vec![(1, true), (4, true)],
    ];
    let mut b = CircuitBuilder::new();
    let mut roots = Vec::new();
    for clause in &clauses {
        let lits: Vec<_> = clause
            .iter()
            .map(|&(v, neg)| {
                b.literal(Literal { var: VarId(v), negated: neg })
            })
            .collect();
        roots.push(b.or_all(&lits));
    }
    let root = b.and_all(&roots);
    let circuit = b.finish(root);
    let spec = Spec::new(
        circuit,
        BTreeSet::from([VarId(1), VarId(2)]),
        vec![VarId(3), VarId(4)],
        BTreeSet::new(),
    )
    .unwrap();
    println!("specification: {} nodes, outputs v3, v4", spec.circuit().len());

    // Compile to the normal form and synthesize the vector.
    let (witness, _) = get_saunf(&spec, &oracle, &CompileOptions::default()).unwrap();
    let (psi, _) = sk_gen(&witness, &oracle).unwrap();
    println!(
        "synthesized vector: {} components, vector size {}",
        psi.len(),
        psi.vector_size()
    );

    // Rebuild a certified specification from the vector and the
    // original spec's roles. The construction verifies the vector
    // first, then assembles (F ∨ G) ∧ G′ with a fixed witness shape.
    let (rebuilt, report) = saunf_from_skolem(&spec, &psi, &oracle).unwrap();
    println!(
        "rebuilt: {} nodes from g = {}, psi = {}, m = {} (target bound {}, within: {})",
        report.h,
        report.g,
        report.psi,
        report.outputs,
        report.bound(),
        report.within_bound()
    );

    let equivalent = oracle
        .check_equivalent(spec.circuit(), rebuilt.spec().circuit())
        .unwrap();
    println!("equivalent to the original: {equivalent}");
    match rebuilt.verify(&oracle).unwrap() {
        SaunfVerdict::Pass => println!("membership: PASS"),
        SaunfVerdict::Fail(v) => println!("membership: FAIL {v}"),
    }

    // The rebuilt witness supports synthesis again — the round trip
    // closes.
    let (psi2, _) = sk_gen(&rebuilt, &oracle).unwrap();
    println!(
        "second synthesis over the rebuilt witness: {} components",
        psi2.len()
    );
}
