//! Command-line front end over the text formats: membership checking,
//! ordered-subset decisions, Skolem synthesis and verification, CNF
//! compilation, projection, witness algebra, and the arithmetic
//! benchmark families.
//!
//! Interface contract:
//!
//! * results go to standard output, diagnostics to standard error;
//! * exit codes: `0` success, `1` a negative verdict (membership FAIL,
//!   a `false` decision, failed verification, refused conjunction),
//!   `2` usage errors, `3` resource limits (solver failures, compile
//!   timeouts), `4` unreadable or ill-formed input files;
//! * identical inputs and flags produce byte-identical standard
//!   output — the benchmark wall-time column is the one deliberate
//!   exception;
//! * JSON output (`--json`) carries a `version` field.
//!
//! The SAT backend defaults to the built-in solver; `--solver
//! exec:<command>` selects an external DIMACS process, and the
//! [`SOLVER_ENV`] environment variable supplies a default when the
//! flag is absent.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{self, AlgebraError};
use crate::arith::{self, ArithError};
use crate::circuit::{Circuit, CircuitBuilder, Literal, NodeId, Spec, VarId};
use crate::compiler::{get_saunf, CompileOptions, CompileReport, CompilerError};
use crate::formats::circuit_text::{
    read_circuit, read_witness, write_circuit, write_witness, CircuitDocument,
};
use crate::formats::qdimacs::read_qdimacs;
use crate::formats::skolem_text::{read_skolem, write_skolem};
use crate::formats::FormatError;
use crate::normal_form::{
    check_synnnf, Certificate, NormalFormError, SaunfVerdict, SaunfViolation, SaunfWitness,
};
use crate::realizability::RealizabilityError;
use crate::sat::oracle::{Oracle, OracleConfig, SolverBackend};
use crate::sat::tseitin::{EncLit, Encoder};
use crate::synthesis::{sk_gen, sk_gen_trusted, verify_skolem, SizeReport, SynthesisError};

/// Environment variable holding the default `--solver` specification.
pub const SOLVER_ENV: &str = "SAUNF_SOLVER";

/// Exhaustive benchmark verification enumerates `2^(4n)` cases; past
/// this width, require the solver-backed mode.
const MAX_EXHAUSTIVE_WIDTH: u32 = 6;

#[derive(Parser)]
#[command(
    name = "saunf",
    version,
    about = "Normal-form membership, Skolem synthesis, and compilation \
             for Boolean relational specifications"
)]
struct Cli {
    /// SAT backend: `internal` or `exec:<command>`. Defaults to the
    /// SAUNF_SOLVER environment variable, then to `internal`.
    #[arg(long, global = true)]
    solver: Option<String>,

    /// Random seed (reserved; every current command is deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Log filter for diagnostics on standard error (e.g. `info`,
    /// `saunf::compiler=debug`).
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a witness against the normal-form conditions.
    Check {
        /// Circuit document.
        #[arg(long)]
        circuit: PathBuf,
        /// Witness document; defaults to the certificate embedded in
        /// the circuit document.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Emit the verdict as JSON instead of text.
        #[arg(long)]
        json: bool,
    },

    /// Decide whether ordered singleton subsets witness membership for
    /// a given output order.
    Synnnf {
        /// Circuit document.
        #[arg(long)]
        circuit: PathBuf,
        /// Comma-separated output order; variables are matched by
        /// index, so `x2`, `v2`, and `2` all denote variable 2.
        #[arg(long)]
        order: String,
    },

    /// Generate a Skolem function vector from a witness.
    Synthesize {
        /// Circuit document.
        #[arg(long)]
        circuit: PathBuf,
        /// Witness document; defaults to the embedded certificate.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Output path for the Skolem document.
        #[arg(long)]
        out: PathBuf,
        /// Skip the membership pre-check (trust the witness).
        #[arg(long)]
        no_verify: bool,
    },

    /// Compile a QDIMACS specification into a certified witness.
    Compile {
        /// QDIMACS input (`a` block = inputs, innermost `e` block =
        /// outputs).
        #[arg(long)]
        qdimacs: PathBuf,
        /// Output path for the circuit document (certificate embedded).
        #[arg(long)]
        out: PathBuf,
        /// Output path for the stand-alone witness document.
        #[arg(long)]
        witness_out: PathBuf,
        /// Iteration budget per subset extraction.
        #[arg(long)]
        subset_budget: Option<usize>,
        /// Wall-clock budget for the whole compilation, in
        /// milliseconds.
        #[arg(long)]
        timeout_ms: Option<u64>,
        /// Search hitting sets by increasing cardinality instead of
        /// greedily (small inputs only).
        #[arg(long)]
        exact_hitting_set: bool,
        /// Run the two branches of each case split concurrently.
        #[arg(long)]
        parallel: bool,
    },

    /// Verify a Skolem document against a circuit document.
    Verify {
        /// Circuit document.
        #[arg(long)]
        circuit: PathBuf,
        /// Skolem document.
        #[arg(long)]
        skolem: PathBuf,
    },

    /// Existentially project all outputs out of a witness.
    Project {
        /// Circuit document.
        #[arg(long)]
        circuit: PathBuf,
        /// Witness document; defaults to the embedded certificate.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Output path for the projected circuit document.
        #[arg(long)]
        out: PathBuf,
    },

    /// Disjoin two witnesses; the result is always certified.
    Disjoin(PairArgs),

    /// Conjoin two witnesses; refused on an output-literal polarity
    /// clash unless `--recompile` rebuilds the conjunction from
    /// scratch.
    Conjoin {
        #[command(flatten)]
        pair: PairArgs,
        /// On a polarity clash, re-encode the conjunction to CNF under
        /// fresh variable numbering and compile that instead of
        /// refusing. The variable map is printed on standard output.
        #[arg(long)]
        recompile: bool,
        /// Iteration budget per subset extraction (recompile only).
        #[arg(long)]
        subset_budget: Option<usize>,
        /// Wall-clock budget for recompilation, in milliseconds.
        #[arg(long)]
        timeout_ms: Option<u64>,
    },

    /// Arithmetic benchmark families over n-bit multiplication.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Args)]
struct PairArgs {
    /// First circuit document.
    #[arg(long)]
    circuit_a: PathBuf,
    /// Witness for the first operand; defaults to its embedded
    /// certificate.
    #[arg(long)]
    witness_a: Option<PathBuf>,
    /// Second circuit document.
    #[arg(long)]
    circuit_b: PathBuf,
    /// Witness for the second operand; defaults to its embedded
    /// certificate.
    #[arg(long)]
    witness_b: Option<PathBuf>,
    /// Output path for the combined circuit document (certificate
    /// embedded).
    #[arg(long)]
    out: PathBuf,
    /// Optional output path for the combined stand-alone witness.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Product bit-slice specification with its closed-form vector.
    Factor {
        /// Word width in bits.
        #[arg(long)]
        n: u32,
        /// Low end of the product slice (1-based, LSB first).
        #[arg(long)]
        l: u32,
        /// High end of the product slice.
        #[arg(long)]
        j: u32,
        /// Verification strategy; defaults to exhaustive up to width
        /// 3 and solver-backed beyond.
        #[arg(long, value_enum)]
        verify: Option<VerifyMode>,
        /// Emit the row as JSON instead of a tab-separated table.
        #[arg(long)]
        json: bool,
    },
    /// Division by an odd multiplier via the bit recurrence.
    Divide {
        /// Word width in bits.
        #[arg(long)]
        n: u32,
        /// Verification strategy; defaults to exhaustive up to width
        /// 3 and solver-backed beyond.
        #[arg(long, value_enum)]
        verify: Option<VerifyMode>,
        /// Emit the row as JSON instead of a tab-separated table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    /// Enumerate every input word (small widths only).
    Exhaustive,
    /// One solver query over the defining identity.
    Sat,
}

/// A failure that aborts the command, classified by exit code.
#[derive(Debug)]
enum Failure {
    /// Exit 2: the invocation itself is wrong.
    Usage(String),
    /// Exit 3: a resource limit — solver failure or compile timeout.
    Resource(String),
    /// Exit 4: an input file is unreadable or ill-formed.
    Input(String),
}

type CmdResult = Result<i32, Failure>;

/// Parse arguments from the process environment, run the selected
/// command, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::new().parse_filters(&cli.log_level).try_init();
    if let Some(seed) = cli.seed {
        log::debug!("--seed {seed} accepted; every current command is deterministic");
    }
    let oracle = match resolve_oracle(cli.solver.as_deref()) {
        Ok(oracle) => oracle,
        Err(message) => {
            eprintln!("error: {message}");
            return 2;
        }
    };
    match dispatch(cli.command, &oracle) {
        Ok(code) => code,
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Usage(m) => (2, m),
                Failure::Resource(m) => (3, m),
                Failure::Input(m) => (4, m),
            };
            eprintln!("error: {message}");
            code
        }
    }
}

fn dispatch(command: Command, oracle: &Oracle) -> CmdResult {
    match command {
        Command::Check { circuit, witness, json } => {
            cmd_check(&circuit, witness.as_deref(), json, oracle)
        }
        Command::Synnnf { circuit, order } => cmd_synnnf(&circuit, &order, oracle),
        Command::Synthesize { circuit, witness, out, no_verify } => {
            cmd_synthesize(&circuit, witness.as_deref(), &out, no_verify, oracle)
        }
        Command::Compile {
            qdimacs,
            out,
            witness_out,
            subset_budget,
            timeout_ms,
            exact_hitting_set,
            parallel,
        } => {
            let mut options = compile_options(subset_budget, timeout_ms);
            options.exact_hitting_set = exact_hitting_set;
            options.parallel = parallel;
            cmd_compile(&qdimacs, &out, &witness_out, &options, oracle)
        }
        Command::Verify { circuit, skolem } => cmd_verify(&circuit, &skolem, oracle),
        Command::Project { circuit, witness, out } => {
            cmd_project(&circuit, witness.as_deref(), &out)
        }
        Command::Disjoin(pair) => cmd_disjoin(&pair),
        Command::Conjoin { pair, recompile, subset_budget, timeout_ms } => {
            let options = compile_options(subset_budget, timeout_ms);
            cmd_conjoin(&pair, recompile, &options, oracle)
        }
        Command::Bench(BenchCommand::Factor { n, l, j, verify, json }) => {
            cmd_bench_factor(n, l, j, verify, json, oracle)
        }
        Command::Bench(BenchCommand::Divide { n, verify, json }) => {
            cmd_bench_divide(n, verify, json, oracle)
        }
    }
}

fn resolve_oracle(flag: Option<&str>) -> Result<Oracle, String> {
    let spec = match flag {
        Some(s) => Some(s.to_string()),
        None => std::env::var(SOLVER_ENV).ok(),
    };
    let backend = match spec {
        Some(s) => SolverBackend::from_spec(&s)?,
        None => SolverBackend::Internal,
    };
    Ok(Oracle::new(OracleConfig { backend, ..OracleConfig::default() }))
}

fn compile_options(subset_budget: Option<usize>, timeout_ms: Option<u64>) -> CompileOptions {
    let mut options = CompileOptions::default();
    if let Some(budget) = subset_budget {
        options.subset_budget = budget;
    }
    options.timeout = timeout_ms.map(Duration::from_millis);
    options
}

// ---------------------------------------------------------------- I/O

fn read_to_string(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn format_failure(path: &Path, e: FormatError) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn load_document(path: &Path) -> Result<CircuitDocument, Failure> {
    read_circuit(&read_to_string(path)?).map_err(|e| format_failure(path, e))
}

fn load_spec(path: &Path) -> Result<Spec, Failure> {
    Ok(load_document(path)?.into_spec())
}

/// A circuit document together with the certificate selected by the
/// `--witness` flag, falling back to the document's own.
fn load_witness(circuit: &Path, witness: Option<&Path>) -> Result<SaunfWitness, Failure> {
    let doc = load_document(circuit)?;
    let certificate = match witness {
        Some(path) => {
            read_witness(&read_to_string(path)?, &doc).map_err(|e| format_failure(path, e))?
        }
        None => doc.certificate().ok_or_else(|| {
            Failure::Usage(format!(
                "{}: no unambiguous embedded certificate; pass --witness",
                circuit.display()
            ))
        })?,
    };
    Ok(SaunfWitness::new_unchecked(doc.into_spec(), certificate))
}

// ------------------------------------------------------ error mapping

fn normal_form_failure(e: NormalFormError) -> Failure {
    match e {
        NormalFormError::Realizability(RealizabilityError::Oracle(o)) => {
            Failure::Resource(o.to_string())
        }
        other => Failure::Input(other.to_string()),
    }
}

fn synthesis_failure(e: SynthesisError) -> Failure {
    match e {
        SynthesisError::Oracle(o) => Failure::Resource(o.to_string()),
        SynthesisError::NormalForm(nf) => normal_form_failure(nf),
        other => Failure::Input(other.to_string()),
    }
}

fn compiler_failure(e: CompilerError) -> Failure {
    match e {
        CompilerError::Timeout { .. } => Failure::Resource(e.to_string()),
        CompilerError::Realizability(RealizabilityError::Oracle(o)) => {
            Failure::Resource(o.to_string())
        }
        other => Failure::Input(other.to_string()),
    }
}

fn algebra_failure(e: AlgebraError) -> Failure {
    Failure::Input(e.to_string())
}

fn arith_failure(e: ArithError) -> Failure {
    match e {
        ArithError::Synthesis(s) => synthesis_failure(s),
        other => Failure::Usage(other.to_string()),
    }
}

// ----------------------------------------------------------- commands

fn cmd_check(circuit: &Path, witness: Option<&Path>, json: bool, oracle: &Oracle) -> CmdResult {
    let w = load_witness(circuit, witness)?;
    match w.verify(oracle).map_err(normal_form_failure)? {
        SaunfVerdict::Pass => {
            if json {
                println!("{}", serde_json::json!({ "version": 1, "verdict": "PASS" }));
            } else {
                println!("PASS");
            }
            Ok(0)
        }
        SaunfVerdict::Fail(violation) => {
            if json {
                let mut object = serde_json::json!({
                    "version": 1,
                    "verdict": "FAIL",
                    "condition": violation.condition(),
                    "detail": violation.to_string(),
                });
                if let SaunfViolation::SetRealizable { witness: sigma, .. } = &violation {
                    let map: serde_json::Map<String, serde_json::Value> = sigma
                        .iter()
                        .map(|(v, b)| (v.to_string(), serde_json::Value::Bool(*b)))
                        .collect();
                    object["counterexample"] = serde_json::Value::Object(map);
                }
                println!("{object}");
            } else {
                println!("FAIL {violation}");
            }
            Ok(1)
        }
    }
}

/// Parse a comma-separated variable list; an optional alphabetic
/// prefix before the index is tolerated (`x2`, `v2`, `2`).
fn parse_order(order: &str) -> Result<Vec<VarId>, Failure> {
    let mut vars = Vec::new();
    for token in order.split(',') {
        let token = token.trim();
        let digits = token.trim_start_matches(|c: char| c.is_ascii_alphabetic());
        let index: u32 = digits
            .parse()
            .map_err(|_| Failure::Usage(format!("cannot parse variable `{token}` in --order")))?;
        if index == 0 {
            return Err(Failure::Usage(format!("variable index must be positive: `{token}`")));
        }
        vars.push(VarId(index));
    }
    Ok(vars)
}

fn cmd_synnnf(circuit: &Path, order: &str, oracle: &Oracle) -> CmdResult {
    let spec = load_spec(circuit)?;
    let order = parse_order(order)?;
    match check_synnnf(&spec, &order, oracle) {
        Ok(true) => {
            println!("true");
            Ok(0)
        }
        Ok(false) => {
            println!("false");
            Ok(1)
        }
        Err(NormalFormError::NotAPermutation) => Err(Failure::Usage(
            "--order must list every declared output exactly once".to_string(),
        )),
        Err(e) => Err(normal_form_failure(e)),
    }
}

fn cmd_synthesize(
    circuit: &Path,
    witness: Option<&Path>,
    out: &Path,
    no_verify: bool,
    oracle: &Oracle,
) -> CmdResult {
    let w = load_witness(circuit, witness)?;
    let result = if no_verify { sk_gen_trusted(&w) } else { sk_gen(&w, oracle) };
    match result {
        Ok((vector, trace)) => {
            write_file(out, &write_skolem(&vector))?;
            println!(
                "synthesized {} components in {} levels (shared size {})",
                vector.len(),
                trace.depth(),
                vector.shared_size()
            );
            Ok(0)
        }
        Err(SynthesisError::NotInNormalForm(violation)) => {
            println!("FAIL {violation}");
            Ok(1)
        }
        Err(e) => Err(synthesis_failure(e)),
    }
}

fn certificate_sets(certificate: &Certificate) -> usize {
    match certificate {
        Certificate::Independent => 0,
        Certificate::Sequence(seq) => seq.len(),
    }
}

fn compile_summary(witness: &SaunfWitness, report: &CompileReport) -> String {
    format!(
        "{} nodes, {} sets; {} subset extractions ({} budget exhaustions), {} splits, depth {}",
        witness.spec().circuit().len(),
        certificate_sets(witness.certificate()),
        report.subset_calls,
        report.subset_timeouts,
        report.shannon_splits,
        report.max_depth
    )
}

fn cmd_compile(
    qdimacs: &Path,
    out: &Path,
    witness_out: &Path,
    options: &CompileOptions,
    oracle: &Oracle,
) -> CmdResult {
    let spec = read_qdimacs(&read_to_string(qdimacs)?).map_err(|e| format_failure(qdimacs, e))?;
    let (witness, report) = get_saunf(&spec, oracle, options).map_err(compiler_failure)?;
    write_file(out, &write_circuit(witness.spec(), Some(witness.certificate())))?;
    write_file(witness_out, &write_witness(witness.certificate(), witness.spec().circuit()))?;
    println!("compiled: {}", compile_summary(&witness, &report));
    Ok(0)
}

fn cmd_verify(circuit: &Path, skolem: &Path, oracle: &Oracle) -> CmdResult {
    let spec = load_spec(circuit)?;
    let vector = read_skolem(&read_to_string(skolem)?).map_err(|e| format_failure(skolem, e))?;
    match verify_skolem(&spec, &vector, oracle).map_err(synthesis_failure)? {
        true => {
            println!("true");
            Ok(0)
        }
        false => {
            println!("false");
            Ok(1)
        }
    }
}

fn cmd_project(circuit: &Path, witness: Option<&Path>, out: &Path) -> CmdResult {
    let w = load_witness(circuit, witness)?;
    let projected = algebra::existential_project(&w);
    // The projection ranges over the parameters, but an independent
    // operand may retain value-irrelevant output leaves; declare the
    // former outputs as inputs so the document stays classified.
    let inputs: BTreeSet<VarId> =
        w.spec().inputs().iter().copied().chain(w.spec().output_set()).collect();
    let aux = w.spec().aux().clone();
    let spec = Spec::new(projected, inputs, Vec::new(), aux)
        .map_err(|e| Failure::Input(format!("projection left inconsistent roles: {e}")))?;
    write_file(out, &write_circuit(&spec, None))?;
    println!("projected: {} nodes over {} variables", spec.circuit().len(), spec.circuit().vars().len());
    Ok(0)
}

fn write_pair_outputs(witness: &SaunfWitness, pair: &PairArgs) -> Result<(), Failure> {
    write_file(&pair.out, &write_circuit(witness.spec(), Some(witness.certificate())))?;
    if let Some(path) = &pair.witness_out {
        write_file(path, &write_witness(witness.certificate(), witness.spec().circuit()))?;
    }
    Ok(())
}

fn cmd_disjoin(pair: &PairArgs) -> CmdResult {
    let a = load_witness(&pair.circuit_a, pair.witness_a.as_deref())?;
    let b = load_witness(&pair.circuit_b, pair.witness_b.as_deref())?;
    let combined = algebra::disjoin(&a, &b).map_err(algebra_failure)?;
    write_pair_outputs(&combined, pair)?;
    println!(
        "disjoined: {} nodes, {} sets",
        combined.spec().circuit().len(),
        certificate_sets(combined.certificate())
    );
    Ok(0)
}

fn cmd_conjoin(
    pair: &PairArgs,
    recompile: bool,
    options: &CompileOptions,
    oracle: &Oracle,
) -> CmdResult {
    let a = load_witness(&pair.circuit_a, pair.witness_a.as_deref())?;
    let b = load_witness(&pair.circuit_b, pair.witness_b.as_deref())?;
    match algebra::conjoin(&a, &b) {
        Ok(combined) => {
            write_pair_outputs(&combined, pair)?;
            println!(
                "conjoined: {} nodes, {} sets",
                combined.spec().circuit().len(),
                certificate_sets(combined.certificate())
            );
            Ok(0)
        }
        Err(AlgebraError::PolarityClash { literal }) if recompile => {
            let outcome = recompile_conjunction(&a, &b, options, oracle)?;
            write_pair_outputs(&outcome.witness, pair)?;
            if !outcome.dropped_outputs.is_empty() {
                let list: Vec<String> =
                    outcome.dropped_outputs.iter().map(ToString::to_string).collect();
                eprintln!(
                    "note: outputs absent from the conjunction were dropped: {}",
                    list.join(", ")
                );
            }
            println!(
                "recompiled around polarity clash on {literal}: {}",
                compile_summary(&outcome.witness, &outcome.report)
            );
            for (original, renumbered) in &outcome.map {
                println!("map {original} -> {renumbered}");
            }
            Ok(0)
        }
        Err(AlgebraError::PolarityClash { literal }) => {
            println!("REFUSED polarity clash on {literal}; rerun with --recompile");
            Ok(1)
        }
        Err(e) => Err(algebra_failure(e)),
    }
}

struct RecompileOutcome {
    witness: SaunfWitness,
    report: CompileReport,
    /// Original variable → its index in the recompiled document.
    map: Vec<(VarId, VarId)>,
    /// Declared outputs that appear in neither operand circuit; they
    /// are unconstrained and have no image in the new numbering.
    dropped_outputs: Vec<VarId>,
}

/// Rebuild `A ∧ B` as a fresh CNF specification and compile it.
///
/// The conjunction is encoded to CNF by definitional translation;
/// every defining variable the encoding introduces is existentially
/// determined by the original variables, so those join the outputs.
/// The compiled document ranges over the encoder's contiguous
/// numbering — the returned map sends each original variable to its
/// new index.
fn recompile_conjunction(
    a: &SaunfWitness,
    b: &SaunfWitness,
    options: &CompileOptions,
    oracle: &Oracle,
) -> Result<RecompileOutcome, Failure> {
    // `conjoin` merges roles before it can report a clash, so the
    // merge here cannot fail.
    let inputs: BTreeSet<VarId> =
        a.spec().inputs().union(b.spec().inputs()).copied().collect();
    let aux: BTreeSet<VarId> = a.spec().aux().union(b.spec().aux()).copied().collect();
    let outputs: Vec<VarId> = a.spec().outputs().to_vec();

    let mut builder = CircuitBuilder::new();
    let (root_a, _) = builder.import(a.spec().circuit());
    let (root_b, _) = builder.import(b.spec().circuit());
    let root = builder.and(root_a, root_b);
    let conjunction = builder.finish(root);

    let mut encoder = Encoder::new();
    let encoded = encoder.add_circuit(&conjunction);
    let EncLit::Lit(_) = encoded else {
        // The conjunction collapsed to a constant: nothing is left to
        // compile, and no variable survives into the new numbering.
        let EncLit::Const(value) = encoded else { unreachable!() };
        let spec = Spec::new(Circuit::constant(value), BTreeSet::new(), Vec::new(), BTreeSet::new())
            .expect("a constant circuit has no variables to classify");
        return Ok(RecompileOutcome {
            witness: SaunfWitness::new_unchecked(spec, Certificate::Independent),
            report: CompileReport {
                subset_calls: 0,
                subset_timeouts: 0,
                shannon_splits: 0,
                max_depth: 0,
            },
            map: Vec::new(),
            dropped_outputs: outputs,
        });
    };
    encoder.assert_lit(encoded, true);
    let (cnf, var_map) = encoder.into_parts();

    let mut cnf_builder = CircuitBuilder::new();
    let mut clause_roots = Vec::with_capacity(cnf.clauses().len());
    for clause in cnf.clauses() {
        let leaves: Vec<NodeId> = clause
            .iter()
            .map(|&lit| {
                let var = VarId(lit.unsigned_abs());
                let literal =
                    if lit > 0 { Literal::positive(var) } else { Literal::negative(var) };
                cnf_builder.literal(literal)
            })
            .collect();
        clause_roots.push(cnf_builder.or_all(&leaves));
    }
    let cnf_root = cnf_builder.and_all(&clause_roots);
    let circuit = cnf_builder.finish(cnf_root);

    let renumber = |v: VarId| var_map.get(&v).map(|&s| VarId(s as u32));
    let mapped_inputs: BTreeSet<VarId> = inputs.iter().filter_map(|&v| renumber(v)).collect();
    let mapped_aux: BTreeSet<VarId> = aux.iter().filter_map(|&v| renumber(v)).collect();
    let mut mapped_outputs: Vec<VarId> = Vec::new();
    let mut dropped_outputs: Vec<VarId> = Vec::new();
    for &v in &outputs {
        match renumber(v) {
            Some(mapped) => mapped_outputs.push(mapped),
            None => dropped_outputs.push(v),
        }
    }
    let declared: BTreeSet<VarId> = mapped_inputs
        .iter()
        .chain(&mapped_aux)
        .chain(&mapped_outputs)
        .copied()
        .collect();
    let defining: Vec<VarId> =
        (1..=cnf.num_vars()).map(VarId).filter(|v| !declared.contains(v)).collect();
    mapped_outputs.extend(defining);

    let spec = Spec::new(circuit, mapped_inputs, mapped_outputs, mapped_aux)
        .map_err(|e| Failure::Input(format!("recompiled conjunction has inconsistent roles: {e}")))?;
    let (witness, report) = get_saunf(&spec, oracle, options).map_err(compiler_failure)?;
    let map: Vec<(VarId, VarId)> =
        var_map.iter().map(|(&v, &s)| (v, VarId(s as u32))).collect();
    Ok(RecompileOutcome { witness, report, map, dropped_outputs })
}

// ---------------------------------------------------------- benchmarks

fn pick_mode(requested: Option<VerifyMode>, n: u32) -> VerifyMode {
    requested.unwrap_or(if n <= 3 { VerifyMode::Exhaustive } else { VerifyMode::Sat })
}

fn mode_name(mode: VerifyMode) -> &'static str {
    match mode {
        VerifyMode::Exhaustive => "exhaustive",
        VerifyMode::Sat => "sat",
    }
}

fn guard_exhaustive(n: u32) -> Result<(), Failure> {
    if n > MAX_EXHAUSTIVE_WIDTH {
        return Err(Failure::Usage(format!(
            "exhaustive verification is limited to --n {MAX_EXHAUSTIVE_WIDTH}; use --verify sat"
        )));
    }
    Ok(())
}

fn cmd_bench_factor(
    n: u32,
    l: u32,
    j: u32,
    verify: Option<VerifyMode>,
    json: bool,
    oracle: &Oracle,
) -> CmdResult {
    let start = Instant::now();
    let spec = arith::build_rlj(n, l, j).map_err(arith_failure)?;
    let vector = arith::skolem_for_rlj(n, l, j).map_err(arith_failure)?;
    let mode = pick_mode(verify, n);
    let verified = match mode {
        VerifyMode::Exhaustive => {
            guard_exhaustive(n)?;
            arith::exhaustive_slice_check(n, l, j, &vector).map_err(arith_failure)?
        }
        VerifyMode::Sat => verify_skolem(&spec, &vector, oracle).map_err(synthesis_failure)?,
    };
    let witness_report: Option<SizeReport> = if verified {
        Some(arith::saunf_for_rlj(n, l, j, oracle).map_err(arith_failure)?.1)
    } else {
        None
    };
    let wall_ms = start.elapsed().as_millis() as u64;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "version": 1,
                "benchmark": "factor",
                "n": n,
                "l": l,
                "j": j,
                "spec_nodes": spec.circuit().len(),
                "vector_size": vector.vector_size(),
                "witness_nodes": witness_report.as_ref().map(|r| r.h),
                "bound": witness_report.as_ref().map(|r| r.bound()),
                "verify": mode_name(mode),
                "verified": verified,
                "wall_ms": wall_ms,
            })
        );
    } else {
        let witness_nodes =
            witness_report.as_ref().map_or_else(|| "-".to_string(), |r| r.h.to_string());
        let bound =
            witness_report.as_ref().map_or_else(|| "-".to_string(), |r| r.bound().to_string());
        println!(
            "benchmark\tn\tl\tj\tspec_nodes\tvector_size\twitness_nodes\tbound\tverify\tverified\twall_ms"
        );
        println!(
            "factor\t{n}\t{l}\t{j}\t{}\t{}\t{witness_nodes}\t{bound}\t{}\t{verified}\t{wall_ms}",
            spec.circuit().len(),
            vector.vector_size(),
            mode_name(mode),
        );
    }
    Ok(if verified { 0 } else { 1 })
}

fn cmd_bench_divide(n: u32, verify: Option<VerifyMode>, json: bool, oracle: &Oracle) -> CmdResult {
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".to_string()));
    }
    let start = Instant::now();
    let spec = arith::odd_division_spec(n);
    let vector = arith::odd_division_skolem(n);
    let mode = pick_mode(verify, n);
    let verified = match mode {
        VerifyMode::Exhaustive => {
            guard_exhaustive(n)?;
            arith::exhaustive_division_check(n, &vector)
        }
        VerifyMode::Sat => verify_skolem(&spec, &vector, oracle).map_err(synthesis_failure)?,
    };
    let wall_ms = start.elapsed().as_millis() as u64;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "version": 1,
                "benchmark": "divide",
                "n": n,
                "spec_nodes": spec.circuit().len(),
                "vector_size": vector.vector_size(),
                "verify": mode_name(mode),
                "verified": verified,
                "wall_ms": wall_ms,
            })
        );
    } else {
        println!("benchmark\tn\tspec_nodes\tvector_size\tverify\tverified\twall_ms");
        println!(
            "divide\t{n}\t{}\t{}\t{}\t{verified}\t{wall_ms}",
            spec.circuit().len(),
            vector.vector_size(),
            mode_name(mode),
        );
    }
    Ok(if verified { 0 } else { 1 })
}
