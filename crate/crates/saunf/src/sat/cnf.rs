//! CNF clause sets in DIMACS-style integer-literal form.

use std::io::{self, Write};

/// A CNF formula: a variable count and a list of clauses. Literals are
/// nonzero integers; `v` means variable `v` is true, `-v` that it is
/// false. Clause order and duplicate clauses are preserved.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> Self {
        CnfFormula { num_vars, clauses: Vec::new() }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Allocate one more variable and return it as a positive literal.
    pub fn fresh_var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    /// Grow the variable range to cover `var` (used when literals are
    /// chosen by the caller rather than via `fresh_var`).
    pub fn ensure_var(&mut self, var: u32) {
        self.num_vars = self.num_vars.max(var);
    }

    /// Add a clause. Empty clauses are legal (they make the formula
    /// unsatisfiable). Panics on a zero literal or one outside the
    /// declared variable range.
    pub fn add_clause(&mut self, lits: &[i32]) {
        for &l in lits {
            assert!(l != 0, "literal 0 is reserved as the clause terminator");
            assert!(
                l.unsigned_abs() <= self.num_vars,
                "literal {l} outside declared range of {} variables",
                self.num_vars
            );
        }
        self.clauses.push(lits.to_vec());
    }

    /// Value of the formula under a total model (`model[v - 1]` is the
    /// value of variable `v`).
    pub fn evaluate(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| Self::clause_satisfied(c, model))
    }

    pub fn clause_satisfied(clause: &[i32], model: &[bool]) -> bool {
        clause.iter().any(|&l| {
            let value = model[(l.unsigned_abs() - 1) as usize];
            if l > 0 {
                value
            } else {
                !value
            }
        })
    }

    /// DIMACS CNF: `p cnf <vars> <clauses>` header, one zero-terminated
    /// clause per line.
    pub fn write_dimacs(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for clause in &self.clauses {
            for &l in clause {
                write!(out, "{l} ")?;
            }
            writeln!(out, "0")?;
        }
        Ok(())
    }

    pub fn to_dimacs_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("DIMACS output is ASCII")
    }
}
