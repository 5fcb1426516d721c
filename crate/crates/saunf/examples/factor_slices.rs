//! Factorization slices: hard specifications with known solutions.
//!
//! The relation R(l,j) over n-bit X and Y asks that a window of the
//! product X·Y — bits l through j — match the same window of a given
//! 2n-bit constant I. For narrow windows (j − l < n) a closed-form
//! function vector solves every instance. This example checks those
//! vectors exhaustively for n = 2, prints one worked corner case, and
//! reports certified-witness sizes for the single-bit family, which
//! grow quadratically.
//!
//! ```sh
//! cargo run --example factor_slices
//! ```

use saunf::arith::{
    build_rlj, exhaustive_slice_check, i_var, narrow_slices, saunf_for_rlj, skolem_for_rlj,
    x_var, y_var,
};
use saunf::circuit::Assignment;
use saunf::sat::oracle::Oracle;

fn main() {
    // Every narrow slice of the 2-bit multiplier, checked against all
    // 2^(2n) window constants and all candidate factor pairs.
    let slices = narrow_slices(2);
    println!("n = 2 has {} narrow slices:", slices.len());
    for s in &slices {
        let psi = skolem_for_rlj(2, s.l(), s.j()).unwrap();
        let ok = exhaustive_slice_check(2, s.l(), s.j(), &psi).unwrap();
        println!("  (l, j) = ({}, {})  exhaustive check: {}", s.l(), s.j(), ok);
        assert!(ok);
    }

    // The top corner (l, j) = (3, 4) for n = 2 exercises the special
    // construction: with I-window 0b10 (i.e. i4 = 1, i3 = 0, full
    // I = 0b1000 = 8), the vector picks X = 3, Y = 3 — and indeed
    // 3 · 3 = 9 = 0b1001 agrees with 8 on bits 3..4.
    let psi = skolem_for_rlj(2, 3, 4).unwrap();
    let mut sigma = Assignment::new();
    for k in 1..=4 {
        sigma.insert(i_var(2, k), k == 4);
    }
    let x = (1..=2).fold(0u64, |acc, k| {
        acc | (u64::from(psi.evaluate(x_var(2, k), &sigma).unwrap()) << (k - 1))
    });
    let y = (1..=2).fold(0u64, |acc, k| {
        acc | (u64::from(psi.evaluate(y_var(2, k), &sigma).unwrap()) << (k - 1))
    });
    println!("corner slice (3, 4) at I = 8: X = {x}, Y = {y}, X·Y = {}", x * y);
    assert_eq!((x, y), (3, 3));

    // Certified witnesses for the single-bit family R(1, 1): the
    // specification and its witness stay quadratic in n.
    let oracle = Oracle::internal();
    println!("single-bit slices (l, j) = (1, 1):");
    println!("  n\tspec_nodes\twitness_nodes");
    for n in 2..=4 {
        let spec = build_rlj(n, 1, 1).unwrap();
        let (witness, _) = saunf_for_rlj(n, 1, 1, &oracle).unwrap();
        println!(
            "  {n}\t{}\t\t{}",
            spec.circuit().len(),
            witness.spec().circuit().len()
        );
    }
}
