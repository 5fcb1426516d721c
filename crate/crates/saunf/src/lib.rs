//! Boolean functional synthesis over negation-normal-form circuits.
//!
//! The crate centers on one question: given a relational specification
//! `F(X, I)` over output variables `X` and input variables `I`, produce
//! circuits `psi_x(I)` — one per output — such that `F(Psi(I), I)` holds
//! whenever any choice of outputs could satisfy `F`. Everything here is
//! built around a structural normal form for NNF circuits under which that
//! synthesis problem becomes polynomial: a sequence of leaf subsets, each
//! "and-unrealizable", whose progressive relabeling to true makes the
//! circuit independent of its outputs.
//!
//! What the library provides, module by module:
//!
//! * [`circuit`] — shared-structure NNF circuits with stable leaf
//!   identities, relabeling, constant propagation, and leaf gadgets.
//! * [`sat`] — CNF formulas, a self-contained CDCL solver, circuit-to-CNF
//!   encoding, DIMACS output, and an optional external-solver adapter.
//! * [`realizability`] — the and-realizability test for literals and leaf
//!   subsets, via a single four-cofactor satisfiability query.
//! * [`normal_form`] — leaf-sequence certificates and the membership
//!   checkers (`check_saunf`, `check_synnnf`, single-polarity shortcut).
//! * [`synthesis`] — Skolem function generation from a certified witness,
//!   verification, and the reverse direction (normal-form circuit from any
//!   correct Skolem vector).
//! * [`compiler`] — compilation of CNF specifications into certified
//!   witnesses via unrealizable-subset extraction and Shannon expansion.
//! * [`algebra`] — composition of witnesses: disjunction, guarded
//!   conjunction, and existential projection of outputs.
//! * [`formats`] — text formats: circuit documents, certificate files,
//!   Skolem documents, and QDIMACS input.
//! * [`arith`] — arithmetic benchmark families: array multipliers,
//!   product-bit-slice specifications with closed-form Skolem vectors, and
//!   bitwise division by odd numbers.
//! * [`naive`] — tiny enumeration-based reference implementations used by
//!   the test suite as independent oracles.
//!
//! Each capability has a runnable demonstration under `examples/`:
//!
//! ```text
//! cargo run --example fig1_membership    # build a circuit, check certificates
//! cargo run --example synthesize        # Skolem generation with a level trace
//! cargo run --example compile_qdimacs   # CNF specification -> certified witness
//! cargo run --example compose           # disjoin / conjoin / project witnesses
//! cargo run --example skolem_roundtrip  # witness -> vector -> normal-form circuit
//! cargo run --example factor_slices     # multiplier bit-slice benchmarks
//! cargo run --example odd_division      # bitwise division by odd numbers
//! cargo run --example oracle_basics     # CNF encoding and the SAT oracle
//! ```
//!
//! The same operations are scriptable through the `saunf` binary
//! (`cargo run --bin saunf -- --help`).

pub mod algebra;
pub mod arith;
pub mod circuit;
pub mod cli;
pub mod compiler;
pub mod fixtures;
pub mod formats;
pub mod naive;
pub mod normal_form;
pub mod realizability;
pub mod sat;
pub mod synthesis;
