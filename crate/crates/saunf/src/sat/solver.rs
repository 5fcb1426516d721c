//! A small conflict-driven clause-learning SAT solver.
//!
//! Fully deterministic: branching uses activity scores with ties broken
//! toward the lowest variable index, phases are saved per variable, and
//! restarts follow the Luby sequence. No randomness, no timing
//! dependence: the same formula and assumptions always produce the same
//! answer and, when satisfiable, the same model.

use std::time::Instant;

use crate::sat::cnf::CnfFormula;

/// The deadline passed to [`solve_limited`] ran out before the solver
/// reached an answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expired;

/// Decide satisfiability of `formula` under the given assumption
/// literals. Returns a total model indexed by `var - 1` when
/// satisfiable, `None` when unsatisfiable.
pub fn solve(formula: &CnfFormula, assumptions: &[i32]) -> Option<Vec<bool>> {
    match solve_limited(formula, assumptions, None) {
        Ok(result) => result,
        Err(Expired) => unreachable!("no deadline was set"),
    }
}

/// Like [`solve`], but gives up with [`Expired`] once `deadline`
/// passes. The deadline is polled between conflicts, so an answer may
/// arrive slightly late but never wrong.
pub fn solve_limited(
    formula: &CnfFormula,
    assumptions: &[i32],
    deadline: Option<Instant>,
) -> Result<Option<Vec<bool>>, Expired> {
    let mut work = formula.clone();
    for &a in assumptions {
        assert!(a != 0, "assumption literal must be nonzero");
        work.ensure_var(a.unsigned_abs());
        work.add_clause(&[a]);
    }
    let Some(solver) = Solver::new(&work) else {
        return Ok(None);
    };
    let result = solver.run(deadline)?;
    if let Some(model) = &result {
        debug_assert!(work.evaluate(model), "solver returned a non-model");
    }
    Ok(result)
}

const NO_REASON: usize = usize::MAX;

struct Solver {
    num_vars: usize,
    /// Clause database; the first two literals of each clause are watched.
    clauses: Vec<Vec<i32>>,
    /// Clause indices watching each literal (see `lit_index`).
    watches: Vec<Vec<usize>>,
    assign: Vec<Option<bool>>,
    level: Vec<u32>,
    /// Index of the implying clause, or `NO_REASON` for decisions.
    reason: Vec<usize>,
    trail: Vec<i32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    act_inc: f64,
    saved_phase: Vec<bool>,
}

fn var_of(lit: i32) -> usize {
    (lit.unsigned_abs() - 1) as usize
}

fn lit_index(lit: i32) -> usize {
    2 * var_of(lit) + usize::from(lit < 0)
}

impl Solver {
    /// Build the solver state; `None` means the formula was refuted
    /// outright during preprocessing.
    fn new(formula: &CnfFormula) -> Option<Self> {
        let num_vars = formula.num_vars() as usize;
        let mut s = Solver {
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            assign: vec![None; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            act_inc: 1.0,
            saved_phase: vec![true; num_vars],
        };
        for clause in formula.clauses() {
            let mut lits = clause.clone();
            lits.sort_unstable();
            lits.dedup();
            if lits.windows(2).any(|w| w[0] == -w[1]) {
                continue; // tautology
            }
            match lits.len() {
                0 => return None,
                1 => {
                    if !s.enqueue(lits[0], NO_REASON) {
                        return None;
                    }
                }
                _ => {
                    s.attach(lits);
                }
            }
        }
        Some(s)
    }

    fn attach(&mut self, lits: Vec<i32>) -> usize {
        let idx = self.clauses.len();
        self.watches[lit_index(lits[0])].push(idx);
        self.watches[lit_index(lits[1])].push(idx);
        self.clauses.push(lits);
        idx
    }

    fn value(&self, lit: i32) -> Option<bool> {
        self.assign[var_of(lit)].map(|v| v == (lit > 0))
    }

    fn current_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Assign `lit` true. Returns false if it is already false.
    fn enqueue(&mut self, lit: i32, reason: usize) -> bool {
        match self.value(lit) {
            Some(v) => v,
            None => {
                let v = var_of(lit);
                self.assign[v] = Some(lit > 0);
                self.level[v] = self.current_level();
                self.reason[v] = reason;
                self.trail.push(lit);
                true
            }
        }
    }

    /// Propagate to fixpoint; returns the index of a falsified clause
    /// on conflict.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = -p;
            let pending = std::mem::take(&mut self.watches[lit_index(false_lit)]);
            let mut kept = Vec::with_capacity(pending.len());
            let mut conflict = None;
            for (pos, &ci) in pending.iter().enumerate() {
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                debug_assert_eq!(clause[1], false_lit);
                let first = clause[0];
                if self.assign[var_of(first)].map(|v| v == (first > 0)) == Some(true) {
                    kept.push(ci);
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let cand = clause[k];
                    if self.assign[var_of(cand)].map(|v| v == (cand > 0)) != Some(false) {
                        clause.swap(1, k);
                        let new_watch = clause[1];
                        self.watches[lit_index(new_watch)].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                kept.push(ci);
                if !self.enqueue(first, ci) {
                    kept.extend_from_slice(&pending[pos + 1..]);
                    conflict = Some(ci);
                    break;
                }
            }
            self.watches[lit_index(false_lit)] = kept;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, var: usize) {
        self.activity[var] += self.act_inc;
        if self.activity[var] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.act_inc *= 1e-100;
        }
    }

    fn decay(&mut self) {
        self.act_inc /= 0.95;
    }

    /// First-UIP conflict analysis. Returns the learned clause (the
    /// asserting literal first) and the level to backtrack to.
    fn analyze(&mut self, conflict: usize) -> (Vec<i32>, u32) {
        let current = self.current_level();
        let mut learnt: Vec<i32> = vec![0]; // slot 0 holds the UIP
        let mut seen = vec![false; self.num_vars];
        let mut unresolved = 0usize;
        let mut clause_idx = conflict;
        let mut skip_head = false;
        let mut index = self.trail.len();
        let mut p;
        loop {
            let clause = self.clauses[clause_idx][usize::from(skip_head)..].to_vec();
            for q in clause {
                let v = var_of(q);
                if !seen[v] && self.level[v] > 0 {
                    seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        unresolved += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                p = self.trail[index];
                if seen[var_of(p)] {
                    break;
                }
            }
            seen[var_of(p)] = false;
            unresolved -= 1;
            if unresolved == 0 {
                break;
            }
            clause_idx = self.reason[var_of(p)];
            debug_assert_ne!(clause_idx, NO_REASON);
            skip_head = true; // clause[0] is p itself
        }
        learnt[0] = -p;
        let backjump = if learnt.len() == 1 {
            0
        } else {
            let mut max_pos = 1;
            for k in 2..learnt.len() {
                if self.level[var_of(learnt[k])] > self.level[var_of(learnt[max_pos])] {
                    max_pos = k;
                }
            }
            learnt.swap(1, max_pos);
            self.level[var_of(learnt[1])]
        };
        (learnt, backjump)
    }

    fn backtrack(&mut self, target: u32) {
        while self.current_level() > target {
            let boundary = self.trail_lim.pop().expect("level > 0");
            while self.trail.len() > boundary {
                let lit = self.trail.pop().expect("trail nonempty");
                let v = var_of(lit);
                self.saved_phase[v] = lit > 0;
                self.assign[v] = None;
                self.reason[v] = NO_REASON;
            }
        }
        self.qhead = self.trail.len();
    }

    fn pick_branch(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.num_vars {
            if self.assign[v].is_none()
                && best.map_or(true, |b| self.activity[v] > self.activity[b])
            {
                best = Some(v);
            }
        }
        best
    }

    fn run(mut self, deadline: Option<Instant>) -> Result<Option<Vec<bool>>, Expired> {
        let mut total_conflicts = 0u64;
        let mut conflicts_here = 0u64;
        let mut restart_count = 0u32;
        let mut restart_limit = 32 * luby(restart_count);
        loop {
            if let Some(conflict) = self.propagate() {
                if self.current_level() == 0 {
                    return Ok(None);
                }
                total_conflicts += 1;
                if total_conflicts & 0x3f == 0 {
                    if let Some(d) = deadline {
                        if Instant::now() >= d {
                            return Err(Expired);
                        }
                    }
                }
                let (learnt, backjump) = self.analyze(conflict);
                self.backtrack(backjump);
                if learnt.len() == 1 {
                    let ok = self.enqueue(learnt[0], NO_REASON);
                    debug_assert!(ok, "asserting literal must be unassigned");
                } else {
                    let lit = learnt[0];
                    let idx = self.attach(learnt);
                    let ok = self.enqueue(lit, idx);
                    debug_assert!(ok, "asserting literal must be unassigned");
                }
                self.decay();
                conflicts_here += 1;
                if conflicts_here >= restart_limit {
                    self.backtrack(0);
                    conflicts_here = 0;
                    restart_count += 1;
                    restart_limit = 32 * luby(restart_count);
                }
            } else if let Some(v) = self.pick_branch() {
                self.trail_lim.push(self.trail.len());
                let lit = if self.saved_phase[v] {
                    v as i32 + 1
                } else {
                    -(v as i32 + 1)
                };
                self.enqueue(lit, NO_REASON);
            } else {
                return Ok(Some(self.assign.iter().map(|a| a.expect("total")).collect()));
            }
        }
    }
}

/// Luby restart sequence: 1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8, …
fn luby(i: u32) -> u64 {
    let mut x = i as u64 + 1;
    loop {
        let bits = u64::BITS - x.leading_zeros();
        if x == (1u64 << bits) - 1 {
            return 1u64 << (bits - 1);
        }
        x -= (1u64 << (bits - 1)) - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn brute_force(formula: &CnfFormula) -> Option<Vec<bool>> {
        let n = formula.num_vars();
        (0..1u32 << n)
            .map(|bits| (0..n).map(|v| bits >> v & 1 == 1).collect::<Vec<bool>>())
            .find(|model| formula.evaluate(model))
    }

    #[test]
    fn luby_prefix() {
        let want = [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8];
        let got: Vec<u64> = (0..want.len() as u32).map(luby).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn trivial_formulas() {
        let empty = CnfFormula::new(0);
        assert_eq!(solve(&empty, &[]), Some(vec![]));

        let mut falsum = CnfFormula::new(1);
        falsum.add_clause(&[]);
        assert_eq!(solve(&falsum, &[]), None);

        let mut contradiction = CnfFormula::new(1);
        contradiction.add_clause(&[1]);
        contradiction.add_clause(&[-1]);
        assert_eq!(solve(&contradiction, &[]), None);

        let mut tautology = CnfFormula::new(1);
        tautology.add_clause(&[1, -1]);
        assert!(solve(&tautology, &[]).is_some());
    }

    #[test]
    fn unit_chain() {
        // 1, 1→2, 2→3, 3→¬4
        let mut f = CnfFormula::new(4);
        f.add_clause(&[1]);
        f.add_clause(&[-1, 2]);
        f.add_clause(&[-2, 3]);
        f.add_clause(&[-3, -4]);
        assert_eq!(solve(&f, &[]), Some(vec![true, true, true, false]));
    }

    #[test]
    fn assumptions_restrict_models() {
        let mut f = CnfFormula::new(2);
        f.add_clause(&[1, 2]);
        let m = solve(&f, &[-1]).expect("satisfiable under ¬1");
        assert_eq!(m, vec![false, true]);
        assert_eq!(solve(&f, &[-1, -2]), None);
    }

    #[test]
    fn pigeonhole_4_into_3_unsat() {
        // Variable p(i,j): pigeon i in hole j; i in 0..4, j in 0..3.
        let var = |i: i32, j: i32| i * 3 + j + 1;
        let mut f = CnfFormula::new(12);
        for i in 0..4 {
            f.add_clause(&[var(i, 0), var(i, 1), var(i, 2)]);
        }
        for j in 0..3 {
            for i in 0..4 {
                for i2 in i + 1..4 {
                    f.add_clause(&[-var(i, j), -var(i2, j)]);
                }
            }
        }
        assert_eq!(solve(&f, &[]), None);
    }

    #[test]
    fn agrees_with_brute_force_on_random_3cnf() {
        let mut rng = StdRng::seed_from_u64(0x5eed_5a7);
        for round in 0..300 {
            let num_vars = rng.random_range(1..=10u32);
            let num_clauses = rng.random_range(0..=40usize);
            let mut f = CnfFormula::new(num_vars);
            for _ in 0..num_clauses {
                let width = rng.random_range(1..=3usize);
                let clause: Vec<i32> = (0..width)
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
            let expected = brute_force(&f);
            let got = solve(&f, &[]);
            assert_eq!(
                got.is_some(),
                expected.is_some(),
                "round {round}: solver disagrees with brute force on\n{}",
                f.to_dimacs_string()
            );
            if let Some(model) = got {
                assert!(f.evaluate(&model), "round {round}: bogus model");
            }
        }
    }

    #[test]
    fn deterministic_models() {
        let mut rng = StdRng::seed_from_u64(77);
        for _ in 0..50 {
            let num_vars = rng.random_range(1..=9u32);
            let mut f = CnfFormula::new(num_vars);
            for _ in 0..rng.random_range(0..=25usize) {
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
            assert_eq!(solve(&f, &[]), solve(&f, &[]));
        }
    }
}
