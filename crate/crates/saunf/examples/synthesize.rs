//! Oracle-free function synthesis from a membership witness.
//!
//! Once a specification carries a verified witness sequence, a
//! definition for every output follows by a linear scan — no further
//! SAT calls. This example synthesizes the two outputs of the worked
//! 16-leaf circuit, inspects the resulting functions, and shows the
//! one-query certification check. It also shows what happens when the
//! witness is bad: synthesis refuses and names the broken condition.
//!
//! ```sh
//! cargo run --example synthesize
//! ```

use saunf::circuit::Assignment;
use saunf::fixtures;
use saunf::normal_form::{Certificate, SaunfWitness};
use saunf::sat::oracle::Oracle;
use saunf::synthesis::{sk_gen, verify_skolem, SynthesisError};

fn main() {
    let oracle = Oracle::internal();
    let fig = fixtures::fig1();

    let witness = SaunfWitness::new_unchecked(
        fig.spec.clone(),
        Certificate::Sequence(fig.good_sequence()),
    );
    let (psi, trace) = sk_gen(&witness, &oracle).unwrap();
    println!(
        "synthesized {} components in {} levels (shared size {})",
        psi.len(),
        trace.depth(),
        psi.shared_size()
    );

    // Evaluate both definitions on each input value. For this circuit
    // the functions come out as x1 = x2 = ¬i: the valid assignments
    // are (i,x1,x2) ∈ {(⊥,⊤,⊤), (⊤,⊥,⊥)}.
    for i in [false, true] {
        let mut sigma = Assignment::new();
        sigma.insert(fig.i, i);
        let x1 = psi.evaluate(fig.x1, &sigma).unwrap();
        let x2 = psi.evaluate(fig.x2, &sigma).unwrap();
        println!(
            "  i = {}  ->  x1 = {}, x2 = {}",
            tv(i),
            tv(x1),
            tv(x2)
        );
    }

    // Certify the whole vector against the specification with a
    // single SAT query: is there an input where the spec is solvable
    // but the synthesized outputs violate it?
    let certified = verify_skolem(&fig.spec, &psi, &oracle).unwrap();
    println!("one-query certification: {certified}");

    // Sanity-check the claim exhaustively (one input variable, so two
    // assignments): wherever ∃x1,x2. G holds, plugging in ψ satisfies G.
    for i in [false, true] {
        let mut sigma = Assignment::new();
        sigma.insert(fig.i, i);
        sigma.insert(fig.x1, psi.evaluate(fig.x1, &sigma).unwrap());
        sigma.insert(fig.x2, psi.evaluate(fig.x2, &sigma).unwrap());
        assert!(fig.spec.circuit().evaluate(&sigma));
    }
    println!("exhaustive audit over both input values: ok");

    // A bad witness is rejected before any functions are built.
    let bad = SaunfWitness::new_unchecked(
        fig.spec.clone(),
        Certificate::Sequence(fig.bad_sequence()),
    );
    match sk_gen(&bad, &oracle) {
        Err(SynthesisError::NotInNormalForm(v)) => {
            println!("bad witness refused: {v}");
        }
        other => panic!("expected a normal-form refusal, got {other:?}"),
    }
}

fn tv(b: bool) -> &'static str {
    if b {
        "⊤"
    } else {
        "⊥"
    }
}
