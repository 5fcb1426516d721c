//! Compile a QDIMACS problem into the normal form, then synthesize.
//!
//! The input is a 2-input XOR relation in prenex 2QBF form
//! (`examples/data/xor2.qdimacs`): universals v1, v2 and one
//! existential v3 with clauses forcing v3 = v1 ⊕ v2. The compiler
//! rewrites the CNF until a witness sequence exists, the checker
//! confirms membership, and synthesis recovers the XOR function.
//!
//! ```sh
//! cargo run --example compile_qdimacs
//! ```

use std::path::Path;

use saunf::circuit::Assignment;
use saunf::compiler::{get_saunf, CompileOptions};
use saunf::formats::qdimacs::read_qdimacs;
use saunf::normal_form::SaunfVerdict;
use saunf::sat::oracle::Oracle;
use saunf::synthesis::sk_gen;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/xor2.qdimacs");
    let text = std::fs::read_to_string(&path).unwrap();
    let spec = read_qdimacs(&text).unwrap();
    println!(
        "parsed {}: {} clauses as a {}-node circuit, outputs {:?}",
        path.file_name().unwrap().to_string_lossy(),
        4,
        spec.circuit().len(),
        spec.outputs()
    );

    let oracle = Oracle::internal();
    let (witness, report) = get_saunf(&spec, &oracle, &CompileOptions::default()).unwrap();
    let sets = witness.certificate().sequence().map_or(0, |s| s.len());
    println!(
        "compiled: {} nodes, {} sets in the witness sequence",
        witness.spec().circuit().len(),
        sets
    );
    println!(
        "  subset extractions: {}, budget exhaustions: {}, case splits: {}, depth: {}",
        report.subset_calls, report.subset_timeouts, report.shannon_splits, report.max_depth
    );

    // The compiled circuit must be equivalent to the original and the
    // witness must pass the membership check.
    let equivalent = oracle
        .check_equivalent(spec.circuit(), witness.spec().circuit())
        .unwrap();
    println!("equivalent to the input: {equivalent}");
    match witness.verify(&oracle).unwrap() {
        SaunfVerdict::Pass => println!("membership: PASS"),
        SaunfVerdict::Fail(v) => println!("membership: FAIL {v}"),
    }

    // Synthesize v3 from the witness and tabulate it: the function
    // must be the parity of the two universals.
    let (psi, _) = sk_gen(&witness, &oracle).unwrap();
    let out = witness.spec().outputs()[0];
    println!("synthesized {out} over {:?}:", witness.spec().inputs());
    for a in [false, true] {
        for b in [false, true] {
            let mut sigma = Assignment::new();
            sigma.insert(saunf::circuit::VarId(1), a);
            sigma.insert(saunf::circuit::VarId(2), b);
            let v = psi.evaluate(out, &sigma).unwrap();
            println!("  v1 = {}, v2 = {}  ->  {out} = {}", b01(a), b01(b), b01(v));
            assert_eq!(v, a ^ b);
        }
    }
    println!("matches v1 ⊕ v2 on all four rows");
}

fn b01(b: bool) -> u8 {
    b as u8
}
