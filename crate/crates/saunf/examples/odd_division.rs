//! Exact division by an odd constant, solved by a closed-form vector.
//!
//! The relation fixes Y and a 2n-bit I and asks for an n-bit X with
//! X·Y = I, where I is required to be odd (hence Y odd too, and the
//! quotient unique when it exists). The solution vector inverts Y
//! bit-by-bit via the standard restoring recurrence — no search. This
//! example walks one instance, then checks every (Y, I) pair for
//! n = 2 and n = 3, and certifies the n = 2 vector with one SAT call.
//!
//! ```sh
//! cargo run --example odd_division
//! ```

use saunf::arith::{
    exhaustive_division_check, i_var, odd_division_skolem, odd_division_spec, x_var, y_var,
};
use saunf::circuit::Assignment;
use saunf::sat::oracle::Oracle;
use saunf::synthesis::verify_skolem;

fn main() {
    // Worked instance at n = 2: Y = 3, I = 9, so X must be 3.
    let n = 2;
    let psi = odd_division_skolem(n);
    let mut sigma = Assignment::new();
    for k in 1..=n {
        sigma.insert(y_var(n, k), (3 >> (k - 1)) & 1 == 1);
    }
    for k in 1..=2 * n {
        sigma.insert(i_var(n, k), (9 >> (k - 1)) & 1 == 1);
    }
    let x = (1..=n).fold(0u64, |acc, k| {
        acc | (u64::from(psi.evaluate(x_var(n, k), &sigma).unwrap()) << (k - 1))
    });
    println!("n = 2, Y = 3, I = 9  ->  X = {x} (3 · 3 = 9)");
    assert_eq!(x, 3);

    // All solvable instances, for both tractable widths.
    for n in [2u32, 3] {
        let psi = odd_division_skolem(n);
        let ok = exhaustive_division_check(n, &psi);
        println!("n = {n}: every odd product divides back exactly: {ok}");
        assert!(ok);
    }

    // The same claim as a single SAT query against the specification
    // circuit (spec solvable but vector violating it — unsatisfiable).
    let oracle = Oracle::internal();
    let spec = odd_division_spec(2);
    let psi = odd_division_skolem(2);
    let certified = verify_skolem(&spec, &psi, &oracle).unwrap();
    println!("one-query certification at n = 2: {certified}");
}
