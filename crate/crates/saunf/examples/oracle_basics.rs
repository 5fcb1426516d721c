//! Building circuits by hand and querying the SAT oracle.
//!
//! The core objects are negation-normal-form circuits — DAGs of
//! binary ∧/∨ gates over literal leaves — and an oracle that answers
//! satisfiability, equivalence, and realizability questions about
//! them. This example builds a few circuits from scratch and runs
//! each kind of query once.
//!
//! ```sh
//! cargo run --example oracle_basics
//! ```

use saunf::circuit::{Assignment, Circuit, CircuitBuilder, Literal, VarId};
use saunf::realizability::{check_literal_realizable, Realizability};
use saunf::sat::oracle::Oracle;

fn main() {
    let oracle = Oracle::internal();
    let a = VarId(1);
    let b = VarId(2);

    // XOR in negation normal form: (a ∧ ¬b) ∨ (¬a ∧ b).
    let xor = {
        let mut bld = CircuitBuilder::new();
        let pa = bld.literal(Literal::positive(a));
        let nb = bld.literal(Literal::negative(b));
        let na = bld.literal(Literal::negative(a));
        let pb = bld.literal(Literal::positive(b));
        let left = bld.and(pa, nb);
        let right = bld.and(na, pb);
        let root = bld.or(left, right);
        bld.finish(root)
    };
    println!(
        "xor circuit: {} nodes ({} leaves, {} gates) over {:?}",
        xor.len(),
        xor.leaf_count(),
        xor.gate_count(),
        xor.vars()
    );

    // Direct evaluation under a total assignment.
    let mut sigma = Assignment::new();
    sigma.insert(a, true);
    sigma.insert(b, false);
    println!("xor(⊤, ⊥) = {}", xor.evaluate(&sigma));

    // Satisfiability: the oracle returns a model or None.
    let model = oracle.solve_circuit(&xor).unwrap();
    println!("a model of xor: {:?}", model.unwrap());

    // Equivalence: xor versus its other standard form
    // (a ∨ b) ∧ (¬a ∨ ¬b).
    let xor2 = {
        let mut bld = CircuitBuilder::new();
        let pa = bld.literal(Literal::positive(a));
        let pb = bld.literal(Literal::positive(b));
        let na = bld.literal(Literal::negative(a));
        let nb = bld.literal(Literal::negative(b));
        let l = bld.or(pa, pb);
        let r = bld.or(na, nb);
        let root = bld.and(l, r);
        bld.finish(root)
    };
    println!(
        "the two xor forms are equivalent: {}",
        oracle.check_equivalent(&xor, &xor2).unwrap()
    );

    // Constant propagation simplifies circuits with ⊥/⊤ leaves.
    let padded = {
        let mut bld = CircuitBuilder::new();
        let (root, _) = bld.import(&xor);
        let t = bld.constant(true);
        let new_root = bld.and(root, t);
        bld.finish(new_root)
    };
    let (simplified, info) = padded.cprop_simp();
    println!(
        "cprop: {} nodes -> {} nodes ({} leaves absorbed into constants)",
        padded.len(),
        simplified.len(),
        info.absorbed.len()
    );

    // Realizability: can b's positive leaves be replaced by constants
    // so they act as the cofactor pattern demands? For xor the answer
    // is yes — set a to ⊥ and +b behaves like a free output bit.
    match check_literal_realizable(&xor, Literal::positive(b), &oracle).unwrap() {
        Realizability::Realizable(sigma) => {
            println!("+b is realizable in xor under {sigma:?}");
        }
        Realizability::Unrealizable => println!("+b is unrealizable in xor"),
    }

    // A constant circuit for contrast: nothing to realize.
    let top = Circuit::constant(true);
    match check_literal_realizable(&top, Literal::positive(b), &oracle) {
        Ok(r) => println!("+b in the constant ⊤ circuit: {r:?}"),
        Err(e) => println!("+b in the constant ⊤ circuit: error: {e}"),
    }
}
