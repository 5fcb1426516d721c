//! The solver entry point the rest of the crate talks to.
//!
//! An [`Oracle`] answers CNF satisfiability queries either with the
//! built-in solver or by shelling out to an external DIMACS solver,
//! and layers circuit-level conveniences (satisfiability of a circuit,
//! equivalence of two circuits) on top. Resource exhaustion is reported
//! as [`OracleError::ResourceLimit`], kept strictly apart from an
//! UNSAT verdict.

use std::cell::Cell;
use std::fs::File;
use std::io::Write as _;
use std::time::{Duration, Instant};

use crate::circuit::{Assignment, Circuit};
use crate::sat::cnf::CnfFormula;
use crate::sat::solver;
use crate::sat::tseitin::{EncLit, Encoder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverBackend {
    /// The built-in CDCL solver.
    Internal,
    /// An external solver invoked as a shell command. `{input}` in the
    /// command is replaced by the DIMACS file path; without a
    /// placeholder the path is appended as a final argument. The
    /// solver must print an `s SATISFIABLE` / `s UNSATISFIABLE` line
    /// and, when satisfiable, `v` model lines.
    External { command: String },
}

impl SolverBackend {
    /// Parse a backend spec as accepted by the command line and the
    /// `SAUNF_SOLVER` environment variable: `internal` or
    /// `exec:<command>`.
    pub fn from_spec(spec: &str) -> Result<Self, String> {
        if spec == "internal" {
            Ok(SolverBackend::Internal)
        } else if let Some(cmd) = spec.strip_prefix("exec:") {
            if cmd.trim().is_empty() {
                Err("empty command in `exec:` solver spec".to_string())
            } else {
                Ok(SolverBackend::External { command: cmd.to_string() })
            }
        } else {
            Err(format!(
                "unknown solver spec `{spec}` (expected `internal` or `exec:<command>`)"
            ))
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub backend: SolverBackend,
    /// Per-query wall-clock budget. `None` means run to completion.
    pub timeout_ms: Option<u64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { backend: SolverBackend::Internal, timeout_ms: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// A satisfying total model, indexed by `var - 1`.
    Sat(Vec<bool>),
    Unsat,
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    /// The query exceeded its time budget. Not a verdict: the formula
    /// may be either satisfiable or unsatisfiable.
    #[error("solver resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("solver backend failure: {0}")]
    Backend(String),
}

pub struct Oracle {
    config: OracleConfig,
    queries: Cell<u64>,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle::internal()
    }
}

impl Oracle {
    pub fn new(config: OracleConfig) -> Self {
        Oracle { config, queries: Cell::new(0) }
    }

    /// An oracle over the built-in solver with no time budget.
    pub fn internal() -> Self {
        Oracle::new(OracleConfig::default())
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    /// Number of satisfiability queries issued so far.
    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    pub fn solve(
        &self,
        formula: &CnfFormula,
        assumptions: &[i32],
    ) -> Result<SatResult, OracleError> {
        self.queries.set(self.queries.get() + 1);
        let deadline = self
            .config
            .timeout_ms
            .map(|ms| Instant::now() + Duration::from_millis(ms));
        log::debug!(
            "sat query #{}: {} vars, {} clauses, {} assumptions",
            self.queries.get(),
            formula.num_vars(),
            formula.clauses().len(),
            assumptions.len()
        );
        match &self.config.backend {
            SolverBackend::Internal => {
                match solver::solve_limited(formula, assumptions, deadline) {
                    Ok(Some(model)) => Ok(SatResult::Sat(model)),
                    Ok(None) => Ok(SatResult::Unsat),
                    Err(solver::Expired) => Err(OracleError::ResourceLimit(format!(
                        "internal solver exceeded {} ms",
                        self.config.timeout_ms.unwrap_or(0)
                    ))),
                }
            }
            SolverBackend::External { command } => {
                self.solve_external(command, formula, assumptions, deadline)
            }
        }
    }

    fn solve_external(
        &self,
        command: &str,
        formula: &CnfFormula,
        assumptions: &[i32],
        deadline: Option<Instant>,
    ) -> Result<SatResult, OracleError> {
        let mut work = formula.clone();
        for &a in assumptions {
            assert!(a != 0, "assumption literal must be nonzero");
            work.ensure_var(a.unsigned_abs());
            work.add_clause(&[a]);
        }

        let dir = tempfile::tempdir().map_err(io_err)?;
        let input = dir.path().join("query.cnf");
        let out_path = dir.path().join("solver.out");
        let err_path = dir.path().join("solver.err");
        let mut file = File::create(&input).map_err(io_err)?;
        work.write_dimacs(&mut file).map_err(io_err)?;
        file.flush().map_err(io_err)?;
        drop(file);

        let input_str = input.to_string_lossy();
        let cmdline = if command.contains("{input}") {
            command.replace("{input}", &input_str)
        } else {
            format!("{command} {input_str}")
        };
        let mut child = std::process::Command::new("sh")
            .arg("-c")
            .arg(&cmdline)
            .stdin(std::process::Stdio::null())
            .stdout(File::create(&out_path).map_err(io_err)?)
            .stderr(File::create(&err_path).map_err(io_err)?)
            .spawn()
            .map_err(|e| OracleError::Backend(format!("failed to spawn `{cmdline}`: {e}")))?;

        loop {
            match child.try_wait().map_err(io_err)? {
                Some(_) => break,
                None => {
                    if let Some(d) = deadline {
                        if Instant::now() >= d {
                            let _ = child.kill();
                            let _ = child.wait();
                            return Err(OracleError::ResourceLimit(format!(
                                "external solver exceeded {} ms",
                                self.config.timeout_ms.unwrap_or(0)
                            )));
                        }
                    }
                    std::thread::sleep(Duration::from_millis(5));
                }
            }
        }

        let stdout = std::fs::read_to_string(&out_path).map_err(io_err)?;
        let result = parse_solver_output(&stdout, work.num_vars()).map_err(|msg| {
            let stderr = std::fs::read_to_string(&err_path).unwrap_or_default();
            OracleError::Backend(format!(
                "{msg} (command `{cmdline}`, stderr: {})",
                stderr.trim().chars().take(400).collect::<String>()
            ))
        })?;
        if let SatResult::Sat(model) = &result {
            if !work.evaluate(model) {
                return Err(OracleError::Backend(format!(
                    "external solver `{cmdline}` returned a non-model"
                )));
            }
        }
        Ok(result)
    }

    /// Is the circuit satisfiable? Returns a satisfying assignment over
    /// the circuit's variables, or `None`.
    pub fn solve_circuit(&self, circuit: &Circuit) -> Result<Option<Assignment>, OracleError> {
        let mut enc = Encoder::new();
        let root = enc.add_circuit(circuit);
        enc.assert_lit(root, true);
        let (cnf, map) = enc.into_parts();
        match self.solve(&cnf, &[])? {
            SatResult::Sat(model) => {
                let mut assignment = Assignment::new();
                for (var, sv) in map {
                    assignment.insert(var, model[(sv - 1) as usize]);
                }
                Ok(Some(assignment))
            }
            SatResult::Unsat => Ok(None),
        }
    }

    /// Do the two circuits compute the same function? Decided by
    /// satisfiability of the exclusive-or miter over a shared variable
    /// map.
    pub fn check_equivalent(&self, a: &Circuit, b: &Circuit) -> Result<bool, OracleError> {
        let mut enc = Encoder::new();
        let la = enc.add_circuit(a);
        let lb = enc.add_circuit(b);
        if let (EncLit::Const(x), EncLit::Const(y)) = (la, lb) {
            return Ok(x == y);
        }
        enc.assert_clause(&[la, lb]);
        enc.assert_clause(&[la.negate(), lb.negate()]);
        let (cnf, _) = enc.into_parts();
        match self.solve(&cnf, &[])? {
            SatResult::Sat(_) => Ok(false),
            SatResult::Unsat => Ok(true),
        }
    }
}

fn io_err(e: std::io::Error) -> OracleError {
    OracleError::Backend(e.to_string())
}

fn parse_solver_output(text: &str, num_vars: u32) -> Result<SatResult, String> {
    let mut verdict: Option<bool> = None;
    let mut model_lits: Vec<i32> = Vec::new();
    let mut saw_model = false;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            match rest.trim() {
                "SATISFIABLE" => verdict = Some(true),
                "UNSATISFIABLE" => verdict = Some(false),
                other => return Err(format!("unrecognized solver status `{other}`")),
            }
        } else if let Some(rest) = line.strip_prefix("v ") {
            saw_model = true;
            for tok in rest.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| format!("bad literal `{tok}` in model line"))?;
                if lit != 0 {
                    model_lits.push(lit);
                }
            }
        }
    }
    match verdict {
        Some(true) => {
            if !saw_model {
                return Err("solver reported SATISFIABLE without a model".to_string());
            }
            let mut model = vec![false; num_vars as usize];
            for lit in model_lits {
                let var = lit.unsigned_abs();
                if (1..=num_vars).contains(&var) {
                    model[(var - 1) as usize] = lit > 0;
                }
            }
            Ok(SatResult::Sat(model))
        }
        Some(false) => Ok(SatResult::Unsat),
        None => Err("no `s` status line in solver output".to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitBuilder, Literal, VarId};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn brutesat_command() -> String {
        format!(
            "/usr/bin/python3 {}/tests/data/brutesat.py {{input}}",
            env!("CARGO_MANIFEST_DIR")
        )
    }

    fn external_oracle(timeout_ms: Option<u64>) -> Oracle {
        Oracle::new(OracleConfig {
            backend: SolverBackend::External { command: brutesat_command() },
            timeout_ms,
        })
    }

    #[test]
    fn backend_specs() {
        assert_eq!(SolverBackend::from_spec("internal"), Ok(SolverBackend::Internal));
        assert_eq!(
            SolverBackend::from_spec("exec:minisat {input}"),
            Ok(SolverBackend::External { command: "minisat {input}".to_string() })
        );
        assert!(SolverBackend::from_spec("exec:").is_err());
        assert!(SolverBackend::from_spec("kissat").is_err());
    }

    #[test]
    fn internal_solve_and_counters() {
        let oracle = Oracle::internal();
        let mut f = CnfFormula::new(2);
        f.add_clause(&[1, 2]);
        f.add_clause(&[-1]);
        match oracle.solve(&f, &[]).unwrap() {
            SatResult::Sat(m) => assert_eq!(m, vec![false, true]),
            SatResult::Unsat => panic!("satisfiable formula reported UNSAT"),
        }
        assert_eq!(oracle.solve(&f, &[-2]).unwrap(), SatResult::Unsat);
        assert_eq!(oracle.queries(), 2);
    }

    #[test]
    fn circuit_equivalence() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(Literal::positive(VarId(1)));
        let y = b.literal(Literal::positive(VarId(2)));
        let root = b.and(x, y);
        let and_xy = b.finish(root);

        let mut b = CircuitBuilder::new();
        let y = b.literal(Literal::positive(VarId(2)));
        let x = b.literal(Literal::positive(VarId(1)));
        let root = b.and(y, x);
        let and_yx = b.finish(root);

        let mut b = CircuitBuilder::new();
        let x = b.literal(Literal::positive(VarId(1)));
        let y = b.literal(Literal::positive(VarId(2)));
        let root = b.or(x, y);
        let or_xy = b.finish(root);

        let oracle = Oracle::internal();
        assert!(oracle.check_equivalent(&and_xy, &and_yx).unwrap());
        assert!(!oracle.check_equivalent(&and_xy, &or_xy).unwrap());

        let tautology = {
            let mut b = CircuitBuilder::new();
            let x = b.literal(Literal::positive(VarId(1)));
            let nx = b.literal(Literal::negative(VarId(1)));
            let root = b.or(x, nx);
            b.finish(root)
        };
        assert!(oracle.check_equivalent(&tautology, &Circuit::constant(true)).unwrap());
        assert!(!oracle.check_equivalent(&tautology, &Circuit::constant(false)).unwrap());
    }

    #[test]
    fn solve_circuit_returns_assignment() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(Literal::positive(VarId(3)));
        let ny = b.literal(Literal::negative(VarId(7)));
        let root = b.and(x, ny);
        let c = b.finish(root);
        let oracle = Oracle::internal();
        let asg = oracle.solve_circuit(&c).unwrap().expect("satisfiable");
        assert!(c.evaluate(&asg));
        assert_eq!(asg[&VarId(3)], true);
        assert_eq!(asg[&VarId(7)], false);
        assert!(oracle.solve_circuit(&Circuit::constant(false)).unwrap().is_none());
    }

    #[test]
    fn parse_output_forms() {
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 3), Ok(SatResult::Unsat));
        assert_eq!(
            parse_solver_output("c comment\ns SATISFIABLE\nv 1 -2 0\n", 2),
            Ok(SatResult::Sat(vec![true, false]))
        );
        assert_eq!(
            parse_solver_output("s SATISFIABLE\nv -1 2\nv 3 0\n", 3),
            Ok(SatResult::Sat(vec![false, true, true]))
        );
        assert!(parse_solver_output("", 1).is_err());
        assert!(parse_solver_output("s SATISFIABLE\n", 1).is_err());
        assert!(parse_solver_output("s MAYBE\n", 1).is_err());
    }

    #[test]
    fn external_backend_agrees_with_internal() {
        let external = external_oracle(Some(30_000));
        let internal = Oracle::internal();
        let mut rng = StdRng::seed_from_u64(0xb707e);
        for _ in 0..8 {
            let num_vars = rng.random_range(1..=6u32);
            let mut f = CnfFormula::new(num_vars);
            for _ in 0..rng.random_range(0..=14usize) {
                let clause: Vec<i32> = (0..rng.random_range(1..=3usize))
                    .map(|_| {
                        let v = rng.random_range(1..=num_vars) as i32;
                        if rng.random_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect();
                f.add_clause(&clause);
            }
            let got = external.solve(&f, &[]).expect("external backend");
            let want = internal.solve(&f, &[]).expect("internal backend");
            match (&got, &want) {
                (SatResult::Sat(m), SatResult::Sat(_)) => assert!(f.evaluate(m)),
                (SatResult::Unsat, SatResult::Unsat) => {}
                _ => panic!("backends disagree: {got:?} vs {want:?}"),
            }
        }
    }

    #[test]
    fn external_timeout_is_resource_limit() {
        let oracle = Oracle::new(OracleConfig {
            backend: SolverBackend::External { command: "sleep 5 # {input}".to_string() },
            timeout_ms: Some(150),
        });
        let mut f = CnfFormula::new(1);
        f.add_clause(&[1]);
        match oracle.solve(&f, &[]) {
            Err(OracleError::ResourceLimit(_)) => {}
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn external_garbage_is_backend_error() {
        let oracle = Oracle::new(OracleConfig {
            backend: SolverBackend::External { command: "true # {input}".to_string() },
            timeout_ms: Some(5_000),
        });
        let f = CnfFormula::new(1);
        match oracle.solve(&f, &[]) {
            Err(OracleError::Backend(_)) => {}
            other => panic!("expected backend error, got {other:?}"),
        }
    }
}
