//! Clausal encoding of circuits.
//!
//! An [`Encoder`] maps circuit variables to SAT variables and turns
//! circuits into clauses over them. One encoder can absorb several
//! circuits: circuit variables are shared through a single variable
//! map, so encodings of related circuits (cofactors, miters) constrain
//! the same SAT variables. Definitional variables for gates are
//! introduced with full biconditional clauses, and structurally equal
//! gates are reused across all circuits added to the same encoder.

use std::collections::BTreeMap;

use crate::circuit::{Circuit, Gate, Label, Node, VarId};
use crate::sat::cnf::CnfFormula;

/// A literal in the encoded formula: either a known constant or a
/// DIMACS-style integer literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncLit {
    Const(bool),
    Lit(i32),
}

impl EncLit {
    pub fn negate(self) -> Self {
        match self {
            EncLit::Const(b) => EncLit::Const(!b),
            EncLit::Lit(l) => EncLit::Lit(-l),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Encoder {
    cnf: CnfFormula,
    var_map: BTreeMap<VarId, i32>,
    gate_memo: BTreeMap<(u8, i32, i32), i32>,
}

impl Encoder {
    pub fn new() -> Self {
        Encoder::default()
    }

    /// The SAT variable standing for circuit variable `var`, allocated
    /// on first use.
    pub fn sat_var(&mut self, var: VarId) -> i32 {
        if let Some(&v) = self.var_map.get(&var) {
            return v;
        }
        let fresh = self.cnf.fresh_var();
        self.var_map.insert(var, fresh);
        fresh
    }

    pub fn var_map(&self) -> &BTreeMap<VarId, i32> {
        &self.var_map
    }

    pub fn cnf(&self) -> &CnfFormula {
        &self.cnf
    }

    /// Encode `circuit` and return the literal that carries its value.
    /// No polarity is asserted; combine the returned literal with
    /// [`assert_lit`](Self::assert_lit) or [`assert_clause`](Self::assert_clause).
    pub fn add_circuit(&mut self, circuit: &Circuit) -> EncLit {
        let mut memo: Vec<Option<EncLit>> = vec![None; circuit.nodes().len()];
        for (idx, node) in circuit.nodes().iter().enumerate() {
            let lit = match node {
                Node::Leaf { label, .. } => match label {
                    Label::Const(b) => EncLit::Const(*b),
                    Label::Lit(l) => {
                        let sv = self.sat_var(l.var);
                        EncLit::Lit(if l.negated { -sv } else { sv })
                    }
                },
                Node::Gate { gate, lhs, rhs } => {
                    let a = memo[lhs.index()].expect("children precede parents");
                    let b = memo[rhs.index()].expect("children precede parents");
                    self.gate_lit(*gate, a, b)
                }
            };
            memo[idx] = Some(lit);
        }
        memo[circuit.root().index()].expect("root is stored")
    }

    fn gate_lit(&mut self, gate: Gate, a: EncLit, b: EncLit) -> EncLit {
        use EncLit::{Const, Lit};
        match (gate, a, b) {
            (Gate::And, Const(false), _) | (Gate::And, _, Const(false)) => Const(false),
            (Gate::And, Const(true), x) | (Gate::And, x, Const(true)) => x,
            (Gate::Or, Const(true), _) | (Gate::Or, _, Const(true)) => Const(true),
            (Gate::Or, Const(false), x) | (Gate::Or, x, Const(false)) => x,
            (_, Lit(x), Lit(y)) if x == y => Lit(x),
            (Gate::And, Lit(x), Lit(y)) if x == -y => Const(false),
            (Gate::Or, Lit(x), Lit(y)) if x == -y => Const(true),
            (gate, Lit(x), Lit(y)) => {
                let key = (
                    match gate {
                        Gate::And => 0u8,
                        Gate::Or => 1u8,
                    },
                    x.min(y),
                    x.max(y),
                );
                if let Some(&g) = self.gate_memo.get(&key) {
                    return Lit(g);
                }
                let g = self.cnf.fresh_var();
                match gate {
                    Gate::And => {
                        // g ⇔ x ∧ y
                        self.cnf.add_clause(&[-g, x]);
                        self.cnf.add_clause(&[-g, y]);
                        self.cnf.add_clause(&[g, -x, -y]);
                    }
                    Gate::Or => {
                        // g ⇔ x ∨ y
                        self.cnf.add_clause(&[g, -x]);
                        self.cnf.add_clause(&[g, -y]);
                        self.cnf.add_clause(&[-g, x, y]);
                    }
                }
                self.gate_memo.insert(key, g);
                Lit(g)
            }
        }
    }

    /// Constrain `lit` to the given value.
    pub fn assert_lit(&mut self, lit: EncLit, value: bool) {
        let lit = if value { lit } else { lit.negate() };
        match lit {
            EncLit::Const(true) => {}
            EncLit::Const(false) => self.cnf.add_clause(&[]),
            EncLit::Lit(l) => self.cnf.add_clause(&[l]),
        }
    }

    /// Add a disjunction of encoded literals as a clause. Constant-true
    /// members satisfy the clause outright; constant-false members are
    /// dropped (possibly leaving the empty, unsatisfiable clause).
    pub fn assert_clause(&mut self, lits: &[EncLit]) {
        let mut clause = Vec::with_capacity(lits.len());
        for &l in lits {
            match l {
                EncLit::Const(true) => return,
                EncLit::Const(false) => {}
                EncLit::Lit(x) => clause.push(x),
            }
        }
        self.cnf.add_clause(&clause);
    }

    pub fn into_parts(self) -> (CnfFormula, BTreeMap<VarId, i32>) {
        (self.cnf, self.var_map)
    }
}

/// Encode a single circuit: returns the clauses, the circuit-variable
/// map, and the root literal (unasserted).
pub fn tseitin(circuit: &Circuit) -> (CnfFormula, BTreeMap<VarId, i32>, EncLit) {
    let mut enc = Encoder::new();
    let root = enc.add_circuit(circuit);
    let (cnf, map) = enc.into_parts();
    (cnf, map, root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Assignment, CircuitBuilder, Literal};
    use crate::sat::solver::solve;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_circuit(rng: &mut StdRng, num_vars: u32) -> Circuit {
        let mut b = CircuitBuilder::new();
        let mut pool = Vec::new();
        for v in 1..=num_vars {
            pool.push(b.literal(Literal::positive(VarId(v))));
            pool.push(b.literal(Literal::negative(VarId(v))));
        }
        if rng.random_bool(0.3) {
            pool.push(b.constant(rng.random_bool(0.5)));
        }
        for _ in 0..rng.random_range(1..=14usize) {
            let x = pool[rng.random_range(0..pool.len())];
            let y = pool[rng.random_range(0..pool.len())];
            let n = if rng.random_bool(0.5) { b.and(x, y) } else { b.or(x, y) };
            pool.push(n);
        }
        let root = *pool.last().expect("nonempty pool");
        b.finish(root)
    }

    /// Under a full assignment to the circuit variables, the encoding
    /// (with the root asserted true) is satisfiable exactly when the
    /// circuit evaluates to true.
    #[test]
    fn encoding_matches_evaluation() {
        let mut rng = StdRng::seed_from_u64(0xce11);
        for _ in 0..60 {
            let num_vars = rng.random_range(1..=5u32);
            let circuit = random_circuit(&mut rng, num_vars);
            let mut enc = Encoder::new();
            let root = enc.add_circuit(&circuit);
            enc.assert_lit(root, true);
            let (cnf, map) = enc.into_parts();
            for bits in 0..1u32 << num_vars {
                let mut assignment = Assignment::new();
                let mut assumptions = Vec::new();
                for v in 1..=num_vars {
                    let value = bits >> (v - 1) & 1 == 1;
                    assignment.insert(VarId(v), value);
                    if let Some(&sv) = map.get(&VarId(v)) {
                        assumptions.push(if value { sv } else { -sv });
                    }
                }
                let expected = circuit.evaluate(&assignment);
                let got = solve(&cnf, &assumptions).is_some();
                assert_eq!(got, expected, "mismatch under assignment {assignment:?}");
            }
        }
    }

    #[test]
    fn shared_variable_map_across_circuits() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(Literal::positive(VarId(1)));
        let y = b.literal(Literal::positive(VarId(2)));
        let root = b.and(x, y);
        let and_xy = b.finish(root);

        let mut b2 = CircuitBuilder::new();
        let y2 = b2.literal(Literal::positive(VarId(2)));
        let x2 = b2.literal(Literal::positive(VarId(1)));
        let root2 = b2.and(y2, x2);
        let and_yx = b2.finish(root2);

        // x∧y and y∧x must never disagree when encoded side by side.
        let mut enc = Encoder::new();
        let la = enc.add_circuit(&and_xy);
        let lb = enc.add_circuit(&and_yx);
        enc.assert_clause(&[la, lb]);
        enc.assert_clause(&[la.negate(), lb.negate()]);
        let (cnf, _) = enc.into_parts();
        assert!(solve(&cnf, &[]).is_none());
    }

    #[test]
    fn constants_fold_away() {
        let mut b = CircuitBuilder::new();
        let t = b.constant(true);
        let f = b.constant(false);
        let x = b.literal(Literal::positive(VarId(1)));
        let n1 = b.and(t, x);
        let n2 = b.or(f, n1);
        let c = b.finish(n2);
        let (cnf, map, root) = tseitin(&c);
        assert_eq!(root, EncLit::Lit(map[&VarId(1)]));
        assert!(cnf.clauses().is_empty());

        let mut b = CircuitBuilder::new();
        let f = b.constant(false);
        let x = b.literal(Literal::positive(VarId(1)));
        let n = b.and(f, x);
        let c = b.finish(n);
        let (_, _, root) = tseitin(&c);
        assert_eq!(root, EncLit::Const(false));
    }

    #[test]
    fn complementary_literals_fold() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(Literal::positive(VarId(1)));
        let nx = b.literal(Literal::negative(VarId(1)));
        let or = b.or(x, nx);
        let c = b.finish(or);
        let (_, _, root) = tseitin(&c);
        assert_eq!(root, EncLit::Const(true));
    }
}
