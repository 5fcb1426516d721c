//! Normal-form membership on the worked 16-leaf example.
//!
//! The example circuit relates one input `i` (v1) to two outputs `x1`
//! (v2) and `x2` (v3). A membership witness is a sequence of disjoint
//! leaf sets; checking it runs one small SAT query per condition. The
//! witness ({L3}, {L7}, {L5}, {L1}) passes, while swapping the first
//! set for {L10} fails: that set is ∧-realizable, and the checker
//! reports the realizing assignment.
//!
//! ```sh
//! cargo run --example fig1_membership
//! ```

use saunf::fixtures;
use saunf::normal_form::{Certificate, SaunfVerdict, SaunfWitness};
use saunf::realizability::{check_literal_realizable, Realizability};
use saunf::sat::oracle::Oracle;

fn main() {
    let oracle = Oracle::internal();
    let fig = fixtures::fig1();
    println!(
        "circuit: {} nodes, outputs x1 = {}, x2 = {}",
        fig.spec.circuit().len(),
        fig.x1,
        fig.x2
    );

    // The good witness: condition checks pass one set at a time.
    let good = SaunfWitness::new_unchecked(
        fig.spec.clone(),
        Certificate::Sequence(fig.good_sequence()),
    );
    match good.verify(&oracle).unwrap() {
        SaunfVerdict::Pass => println!("({{L3}}, {{L7}}, {{L5}}, {{L1}})  -> PASS"),
        SaunfVerdict::Fail(v) => println!("({{L3}}, {{L7}}, {{L5}}, {{L1}})  -> FAIL {v}"),
    }

    // The near-miss: {L10} (a +x1 leaf) instead of {L3}. The checker
    // pinpoints the violated condition and the realizing assignment —
    // here σ(i) = σ(x2) = ⊥ makes the set behave like a free choice.
    let bad = SaunfWitness::new_unchecked(
        fig.spec.clone(),
        Certificate::Sequence(fig.bad_sequence()),
    );
    match bad.verify(&oracle).unwrap() {
        SaunfVerdict::Pass => println!("({{L10}}, {{L7}}, {{L5}}, {{L1}}) -> PASS"),
        SaunfVerdict::Fail(v) => println!("({{L10}}, {{L7}}, {{L5}}, {{L1}}) -> FAIL {v}"),
    }

    // The same semantic fact at the single-literal level: +x1 as a
    // whole is realizable in the circuit (so any witness must break
    // its +x1 leaves into genuinely unrealizable pieces).
    let lit = saunf::circuit::Literal::positive(fig.x1);
    match check_literal_realizable(fig.spec.circuit(), lit, &oracle).unwrap() {
        Realizability::Realizable(sigma) => {
            let pairs: Vec<String> =
                sigma.iter().map(|(v, b)| format!("{v}={}", if *b { "⊤" } else { "⊥" })).collect();
            println!("literal +x1 is realizable under {{{}}}", pairs.join(", "));
        }
        Realizability::Unrealizable => println!("literal +x1 is unrealizable"),
    }

    // Membership is strictly more flexible than per-variable polarity
    // orders: no output order makes the ordered check succeed here,
    // yet the sequence witness above passes.
    for order in [[fig.x1, fig.x2], [fig.x2, fig.x1]] {
        let verdict = saunf::normal_form::check_synnnf(&fig.spec, &order, &oracle).unwrap();
        println!("ordered-subset membership for ({}, {}): {verdict}", order[0], order[1]);
    }
}
