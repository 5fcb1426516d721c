//! Compilation of CNF specification circuits into the normal form:
//! ∧-unrealizable subset extraction over clause structure, and
//! Shannon-style decomposition when no usable subset exists.
//!
//! The compiler works on clause lists internally and materializes
//! circuits at combination points, so every recursive step stays in
//! clean two-level shape. All collections on result-affecting paths
//! are ordered (`BTreeMap`/`BTreeSet`), making compilation fully
//! deterministic for a given input and option set — including when the
//! two Shannon branches run on separate threads.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::circuit::{
    Circuit, CircuitBuilder, CircuitError, Gate, Label, LeafId, LeafSet, Literal, Node, NodeId,
    Spec, SpecError, VarId,
};
use crate::normal_form::{Certificate, SaunfWitness};
use crate::realizability::{
    check_independent, check_literal_realizable, check_subset_realizable, Realizability,
    RealizabilityError,
};
use crate::sat::cnf::CnfFormula;
use crate::sat::oracle::{Oracle, OracleConfig, OracleError, SatResult};

/// Clause structure of a CNF circuit: which leaf feeds which clause,
/// and the leaves (with labels) of each clause, in source order.
/// Duplicate clauses and repeated literals are preserved as distinct
/// leaves.
#[derive(Clone, Debug)]
pub struct ClauseIndex {
    clauses: Vec<Vec<(LeafId, Literal)>>,
    leaf_to_clause: BTreeMap<LeafId, usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CompilerError {
    #[error("not a CNF circuit: {reason}")]
    NotCnf { reason: String },
    #[error("no output literal labels any leaf")]
    NoOutputLiteral,
    #[error("compilation exceeded its time budget")]
    Timeout { report: CompileReport },
    #[error(transparent)]
    Realizability(#[from] RealizabilityError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

impl From<OracleError> for CompilerError {
    fn from(e: OracleError) -> Self {
        CompilerError::Realizability(e.into())
    }
}

impl ClauseIndex {
    /// Parse the clause structure of a CNF circuit: an AND-tree over
    /// clauses, each clause an OR-tree over literal leaves. Unit
    /// clauses are plain literal leaves, a ⊥ leaf under the AND-tree
    /// is an empty clause, and a circuit that is the single ⊤ leaf has
    /// no clauses. A ⊥ leaf inside a disjunction is ignored (it is the
    /// identity of ∨); anything else — gates under an OR, ⊤ leaves in
    /// clause position — is rejected.
    pub fn new(circuit: &Circuit) -> Result<Self, CompilerError> {
        let mut clauses = Vec::new();
        if circuit.as_constant() == Some(true) {
            return Ok(ClauseIndex { clauses, leaf_to_clause: BTreeMap::new() });
        }
        let mut conjuncts = Vec::new();
        collect_spine(circuit, circuit.root(), Gate::And, &mut conjuncts);
        for node in conjuncts {
            clauses.push(parse_clause(circuit, node)?);
        }
        let mut leaf_to_clause = BTreeMap::new();
        for (idx, clause) in clauses.iter().enumerate() {
            for &(leaf, _) in clause {
                leaf_to_clause.insert(leaf, idx);
            }
        }
        Ok(ClauseIndex { clauses, leaf_to_clause })
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Leaves of clause `idx` with their labels, in clause order.
    pub fn clause(&self, idx: usize) -> &[(LeafId, Literal)] {
        &self.clauses[idx]
    }

    pub fn clause_leaves(&self, idx: usize) -> LeafSet {
        self.clauses[idx].iter().map(|&(l, _)| l).collect()
    }

    /// The clause a leaf feeds, if the leaf exists.
    pub fn leaf_clause(&self, leaf: LeafId) -> Option<usize> {
        self.leaf_to_clause.get(&leaf).copied()
    }

    /// The clause list as plain literal vectors (leaf identity dropped).
    pub fn literal_clauses(&self) -> Vec<Vec<Literal>> {
        self.clauses
            .iter()
            .map(|c| c.iter().map(|&(_, lit)| lit).collect())
            .collect()
    }
}

/// Collect the leaves of a same-gate spine in left-to-right order.
fn collect_spine(circuit: &Circuit, root: NodeId, gate: Gate, out: &mut Vec<NodeId>) {
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        match *circuit.node(n) {
            Node::Gate { gate: g, lhs, rhs } if g == gate => {
                stack.push(rhs);
                stack.push(lhs);
            }
            _ => out.push(n),
        }
    }
}

fn parse_clause(
    circuit: &Circuit,
    node: NodeId,
) -> Result<Vec<(LeafId, Literal)>, CompilerError> {
    match *circuit.node(node) {
        Node::Leaf { id, label: Label::Lit(lit) } => Ok(vec![(id, lit)]),
        Node::Leaf { label: Label::Const(false), .. } => Ok(Vec::new()),
        Node::Leaf { label: Label::Const(true), .. } => Err(CompilerError::NotCnf {
            reason: "constant-⊤ leaf in clause position".to_string(),
        }),
        Node::Gate { gate: Gate::And, .. } => Err(CompilerError::NotCnf {
            reason: "conjunction nested inside a clause".to_string(),
        }),
        Node::Gate { gate: Gate::Or, .. } => {
            let mut disjuncts = Vec::new();
            collect_spine(circuit, node, Gate::Or, &mut disjuncts);
            let mut lits = Vec::new();
            for d in disjuncts {
                match *circuit.node(d) {
                    Node::Leaf { id, label: Label::Lit(lit) } => lits.push((id, lit)),
                    Node::Leaf { label: Label::Const(false), .. } => {}
                    Node::Leaf { label: Label::Const(true), .. } => {
                        return Err(CompilerError::NotCnf {
                            reason: "constant-⊤ leaf inside a clause".to_string(),
                        });
                    }
                    Node::Gate { .. } => {
                        return Err(CompilerError::NotCnf {
                            reason: "gate nested inside a clause".to_string(),
                        });
                    }
                }
            }
            Ok(lits)
        }
    }
}

/// Knobs for [`get_saunf`].
#[derive(Clone, Debug)]
pub struct CompileOptions {
    /// Maximum realizability-loop iterations per subset extraction;
    /// on exhaustion that extraction conservatively returns ∅.
    pub subset_budget: usize,
    /// Wall-clock budget for the whole compilation; exceeding it
    /// aborts with [`CompilerError::Timeout`].
    pub timeout: Option<Duration>,
    /// Search hitting sets by increasing cardinality instead of
    /// greedily (exhaustive; only sensible for small instances).
    pub exact_hitting_set: bool,
    /// Run the two Shannon branches on separate threads. The result
    /// is identical to a sequential run.
    pub parallel: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            subset_budget: 64,
            timeout: None,
            exact_hitting_set: false,
            parallel: false,
        }
    }
}

/// Progress statistics from a compilation run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CompileReport {
    /// Subset extractions attempted.
    pub subset_calls: u64,
    /// Extractions that hit their iteration budget and returned ∅.
    pub subset_timeouts: u64,
    /// Shannon splits taken.
    pub shannon_splits: u64,
    /// Deepest recursion level reached (0 = no recursion).
    pub max_depth: u64,
}

#[derive(Default)]
struct Counters {
    subset_calls: AtomicU64,
    subset_timeouts: AtomicU64,
    shannon_splits: AtomicU64,
    max_depth: AtomicU64,
}

impl Counters {
    fn report(&self) -> CompileReport {
        CompileReport {
            subset_calls: self.subset_calls.load(Ordering::Relaxed),
            subset_timeouts: self.subset_timeouts.load(Ordering::Relaxed),
            shannon_splits: self.shannon_splits.load(Ordering::Relaxed),
            max_depth: self.max_depth.load(Ordering::Relaxed),
        }
    }
}

/// Working state of one subset extraction, exposed for inspection.
/// Clause references are indices into the extraction's input clause
/// list.
#[derive(Clone, Debug, Default)]
pub struct SubsetSearchState {
    /// Every clause set collected by the realizability loop, in order.
    pub all_s: Vec<BTreeSet<usize>>,
    /// The last collected clause set.
    pub curr_s: BTreeSet<usize>,
    /// The working clause list when the loop stopped (input clauses
    /// followed by the accumulated blocking clauses).
    pub d: Vec<Vec<Literal>>,
    /// The chosen hitting set; `None` when none exists (or the search
    /// gave up), which forces the conservative empty result.
    pub hit_s: Option<BTreeSet<usize>>,
    /// Realizability-loop iterations executed.
    pub iterations: usize,
    /// The loop stopped on its budget rather than on unrealizability.
    pub timed_out: bool,
}

/// Result of a subset extraction on a CNF circuit.
#[derive(Clone, Debug)]
pub struct SubsetResult {
    /// The ∧-unrealizable set of leaves of the input circuit (empty is
    /// always sound).
    pub leaves: LeafSet,
    /// The clauses those leaves feed (clause indices).
    pub clauses: BTreeSet<usize>,
    pub state: SubsetSearchState,
}

/// Deterministic literal choice for decomposition: the literal over
/// `outputs` labeling the most leaves; ties prefer the lowest variable
/// id, then the positive polarity.
pub fn choose_literal(
    circuit: &Circuit,
    outputs: &BTreeSet<VarId>,
) -> Result<Literal, CompilerError> {
    let mut counts: BTreeMap<Literal, usize> = BTreeMap::new();
    for (_, label) in circuit.leaves() {
        if let Label::Lit(lit) = label {
            if outputs.contains(&lit.var) {
                *counts.entry(lit).or_insert(0) += 1;
            }
        }
    }
    let mut best: Option<(Literal, usize)> = None;
    for (lit, n) in counts {
        match best {
            Some((_, m)) if n <= m => {}
            _ => best = Some((lit, n)),
        }
    }
    best.map(|(lit, _)| lit).ok_or(CompilerError::NoOutputLiteral)
}

/// Build a circuit from a clause list, returning each clause's leaf
/// ids (clause order, literal order).
fn build_clauses(clauses: &[Vec<Literal>]) -> (Circuit, Vec<Vec<LeafId>>) {
    let mut b = CircuitBuilder::new();
    let mut leaf_map = Vec::with_capacity(clauses.len());
    let mut roots = Vec::with_capacity(clauses.len());
    for clause in clauses {
        let mut ids = Vec::with_capacity(clause.len());
        let mut nodes = Vec::with_capacity(clause.len());
        for &lit in clause {
            let n = b.literal(lit);
            ids.push(b.leaf_id(n).expect("literal nodes are leaves"));
            nodes.push(n);
        }
        roots.push(b.or_all(&nodes));
        leaf_map.push(ids);
    }
    let root = b.and_all(&roots);
    (b.finish(root), leaf_map)
}

/// `clauses` with the literal set to ⊤: clauses containing it are
/// dropped (satisfied), occurrences of its negation are removed.
fn substitute_true(clauses: &[Vec<Literal>], lit: Literal) -> Vec<Vec<Literal>> {
    clauses
        .iter()
        .filter(|c| !c.contains(&lit))
        .map(|c| c.iter().copied().filter(|&k| k != !lit).collect())
        .collect()
}

/// Is the conjunction of the selected clauses satisfiable together
/// with `forced`?
fn clauses_satisfiable_with(
    clauses: &[Vec<Literal>],
    selected: &BTreeSet<usize>,
    forced: Literal,
    oracle: &Oracle,
) -> Result<bool, CompilerError> {
    let mut vars: BTreeSet<VarId> = [forced.var].into();
    for &i in selected {
        vars.extend(clauses[i].iter().map(|l| l.var));
    }
    let var_index: BTreeMap<VarId, i32> = vars
        .iter()
        .enumerate()
        .map(|(k, &v)| (v, k as i32 + 1))
        .collect();
    let mut cnf = CnfFormula::new(var_index.len() as u32);
    let encode =
        |lit: Literal| -> i32 { if lit.negated { -var_index[&lit.var] } else { var_index[&lit.var] } };
    for &i in selected {
        let clause: Vec<i32> = clauses[i].iter().map(|&l| encode(l)).collect();
        cnf.add_clause(&clause);
    }
    cnf.add_clause(&[encode(forced)]);
    Ok(matches!(oracle.solve(&cnf, &[])?, SatResult::Sat(_)))
}

/// A clause subset intersecting every member of `all_s` whose
/// conjunction is satisfiable with the literal forced to ⊥, minimal
/// under single-element removal; `None` when the search finds no such
/// set. The greedy search (most not-yet-hit sets first, ties to the
/// lowest clause index, infeasible picks skipped) can conservatively
/// miss solutions; the exact mode tries subsets by increasing
/// cardinality and is complete (up to a candidate-count guard).
pub fn satisfiable_hitting_set(
    all_s: &[BTreeSet<usize>],
    clauses: &[Vec<Literal>],
    lit: Literal,
    oracle: &Oracle,
    exact: bool,
) -> Result<Option<BTreeSet<usize>>, CompilerError> {
    if all_s.is_empty() {
        return Ok(Some(BTreeSet::new()));
    }
    if all_s.iter().any(|s| s.is_empty()) {
        return Ok(None);
    }
    let candidates: Vec<usize> = all_s
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    const EXACT_CANDIDATE_CAP: usize = 16;
    if exact && candidates.len() <= EXACT_CANDIDATE_CAP {
        return exact_hitting_set(&candidates, all_s, clauses, lit, oracle);
    }
    if exact {
        log::warn!(
            "exact hitting-set search skipped: {} candidates exceed the cap of {}",
            candidates.len(),
            EXACT_CANDIDATE_CAP
        );
    }

    // Greedy with a feasibility check after each pick.
    let mut picked: BTreeSet<usize> = BTreeSet::new();
    let mut unhit: Vec<&BTreeSet<usize>> = all_s.iter().collect();
    while !unhit.is_empty() {
        let mut ranked: Vec<(usize, usize)> = candidates
            .iter()
            .filter(|c| !picked.contains(c))
            .map(|&c| (c, unhit.iter().filter(|s| s.contains(&c)).count()))
            .filter(|&(_, hits)| hits > 0)
            .collect();
        // Most hits first; ties to the lowest clause index.
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut chosen = None;
        for (c, _) in ranked {
            let mut trial = picked.clone();
            trial.insert(c);
            if clauses_satisfiable_with(clauses, &trial, !lit, oracle)? {
                chosen = Some(c);
                break;
            }
        }
        let Some(c) = chosen else {
            return Ok(None);
        };
        picked.insert(c);
        unhit.retain(|s| !s.contains(&c));
    }

    // Single-element minimization: removal keeps satisfiability (fewer
    // constraints), so only the hitting property needs rechecking.
    for c in picked.clone() {
        let without: BTreeSet<usize> = picked.iter().copied().filter(|&x| x != c).collect();
        if all_s.iter().all(|s| s.iter().any(|x| without.contains(x))) {
            picked = without;
        }
    }
    Ok(Some(picked))
}

fn exact_hitting_set(
    candidates: &[usize],
    all_s: &[BTreeSet<usize>],
    clauses: &[Vec<Literal>],
    lit: Literal,
    oracle: &Oracle,
) -> Result<Option<BTreeSet<usize>>, CompilerError> {
    let n = candidates.len();
    for k in 1..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        'subsets: loop {
            let trial: BTreeSet<usize> = idx.iter().map(|&i| candidates[i]).collect();
            if all_s.iter().all(|s| s.iter().any(|x| trial.contains(x)))
                && clauses_satisfiable_with(clauses, &trial, !lit, oracle)?
            {
                return Ok(Some(trial));
            }
            // Advance to the next k-combination in lexicographic order.
            let mut i = k;
            while i > 0 {
                i -= 1;
                if idx[i] < i + n - k {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    continue 'subsets;
                }
            }
            break;
        }
    }
    Ok(None)
}

/// Core subset extraction over a clause list. Returns the set of
/// clause indices whose literal-leaves form the ∧-unrealizable subset
/// (the subset is clause-closed), plus the search state.
fn subset_search(
    clauses: &[Vec<Literal>],
    lit: Literal,
    oracle: &Oracle,
    budget: usize,
    deadline: Option<Instant>,
    exact: bool,
) -> Result<(BTreeSet<usize>, SubsetSearchState), CompilerError> {
    let mut state = SubsetSearchState { d: clauses.to_vec(), ..Default::default() };

    let eligible: Vec<usize> = (0..clauses.len())
        .filter(|&i| clauses[i].contains(&lit))
        .collect();
    if eligible.is_empty() {
        state.hit_s = Some(BTreeSet::new());
        return Ok((BTreeSet::new(), state));
    }

    let conservative = |mut state: SubsetSearchState, timed_out: bool| {
        state.timed_out = timed_out;
        state.hit_s = None;
        (BTreeSet::new(), state)
    };

    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    loop {
        if state.iterations >= budget || deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(conservative(state, true));
        }
        let (d_ckt, _) = build_clauses(&state.d);
        let sigma = match check_literal_realizable(&d_ckt, lit, oracle)? {
            Realizability::Unrealizable => break,
            Realizability::Realizable(sigma) => sigma,
        };
        state.iterations += 1;

        // Clauses of the *input* list that evaluate exactly to the
        // literal under σ: they contain it, don't contain its negation,
        // and every other literal is false.
        let curr: BTreeSet<usize> = eligible
            .iter()
            .copied()
            .filter(|&i| {
                !clauses[i].contains(&!lit)
                    && clauses[i]
                        .iter()
                        .filter(|k| k.var != lit.var)
                        .all(|k| !k.eval(sigma[&k.var]))
            })
            .collect();
        if curr.is_empty() || !seen.insert(curr.clone()) {
            // Mathematically unreachable (each blocking clause rules
            // out every earlier set); bail out conservatively if an
            // oracle anomaly ever gets us here.
            log::warn!("subset extraction loop anomaly; returning the conservative empty set");
            return Ok(conservative(state, true));
        }

        // Block this set: some other literal of one of its clauses
        // must hold in future witnesses.
        let blocker: BTreeSet<Literal> = curr
            .iter()
            .flat_map(|&i| clauses[i].iter().copied())
            .filter(|&k| k != lit)
            .collect();
        state.d.push(blocker.into_iter().collect());
        state.curr_s = curr.clone();
        state.all_s.push(curr);
    }

    state.hit_s = satisfiable_hitting_set(&state.all_s, clauses, lit, oracle, exact)?;
    let Some(hit) = &state.hit_s else {
        return Ok((BTreeSet::new(), state));
    };
    let u: BTreeSet<usize> = eligible.iter().copied().filter(|i| !hit.contains(i)).collect();

    // Safety net: independently re-verify unrealizability of the
    // returned subset before letting it shape the decomposition.
    if !u.is_empty() {
        let (ckt, leaf_map) = build_clauses(clauses);
        let t: LeafSet = u
            .iter()
            .flat_map(|&i| {
                clauses[i]
                    .iter()
                    .zip(&leaf_map[i])
                    .filter(|&(&k, _)| k == lit)
                    .map(|(_, &leaf)| leaf)
            })
            .collect();
        if let Realizability::Realizable(sigma) = check_subset_realizable(&ckt, &t, oracle)? {
            log::error!(
                "subset extraction produced a realizable set (witness {sigma:?}); \
                 discarding it"
            );
            return Ok((BTreeSet::new(), state));
        }
    }
    Ok((u, state))
}

/// Extract an ∧-unrealizable subset of the literal's leaves from a CNF
/// circuit: repeatedly find an assignment realizing the literal, record
/// which clauses isolate it, block them, and finally keep the leaves
/// of every clause outside a satisfiable hitting set of the records.
/// `budget` caps the loop; on exhaustion the result is the (always
/// sound) empty set, flagged in `state.timed_out`. Every nonempty
/// result is re-verified unrealizable before being returned.
pub fn get_subset(
    circuit: &Circuit,
    lit: Literal,
    budget: usize,
    oracle: &Oracle,
) -> Result<SubsetResult, CompilerError> {
    let index = ClauseIndex::new(circuit)?;
    let clauses = index.literal_clauses();
    let (u, state) = subset_search(&clauses, lit, oracle, budget, None, false)?;
    let leaves: LeafSet = u
        .iter()
        .flat_map(|&i| {
            index
                .clause(i)
                .iter()
                .filter(|&&(_, k)| k == lit)
                .map(|&(leaf, _)| leaf)
        })
        .collect();
    if !leaves.is_empty() {
        if let Realizability::Realizable(sigma) =
            check_subset_realizable(circuit, &leaves, oracle)?
        {
            log::error!(
                "subset extraction produced a realizable set on the source circuit \
                 (witness {sigma:?}); discarding it"
            );
            return Ok(SubsetResult { leaves: LeafSet::new(), clauses: BTreeSet::new(), state });
        }
    }
    Ok(SubsetResult { leaves, clauses: u, state })
}

#[derive(Clone, Copy)]
struct Ctx<'a> {
    outputs: &'a BTreeSet<VarId>,
    options: &'a CompileOptions,
    config: &'a OracleConfig,
    deadline: Option<Instant>,
    counters: &'a Counters,
}

fn is_tautological(clause: &[Literal]) -> bool {
    clause.iter().any(|&k| clause.contains(&!k))
}

/// Compile a CNF specification into an equivalent circuit in the
/// normal form, with its membership witness. The input circuit must be
/// CNF-shaped (see [`ClauseIndex::new`]). A specification already
/// independent of its outputs is returned unchanged under the
/// independence certificate; otherwise the result is a rebuilt
/// circuit, with tautological clauses (which are ≡ ⊤ and would poison
/// the decomposition's subset bookkeeping) dropped. See
/// [`CompileOptions`] for budgets; on wall-clock exhaustion
/// compilation aborts with [`CompilerError::Timeout`] carrying the
/// progress made.
pub fn get_saunf(
    spec: &Spec,
    oracle: &Oracle,
    options: &CompileOptions,
) -> Result<(SaunfWitness, CompileReport), CompilerError> {
    let index = ClauseIndex::new(spec.circuit())?;
    let outputs = spec.output_set();
    if check_independent(spec.circuit(), &outputs, oracle)? {
        return Ok((
            SaunfWitness::new_unchecked(spec.clone(), Certificate::Independent),
            CompileReport::default(),
        ));
    }
    let counters = Counters::default();
    let ctx = Ctx {
        outputs: &outputs,
        options,
        config: oracle.config(),
        deadline: options.timeout.map(|t| Instant::now() + t),
        counters: &counters,
    };
    let clauses: Vec<Vec<Literal>> = index
        .literal_clauses()
        .into_iter()
        .filter(|c| !is_tautological(c))
        .collect();
    let (f, sets) = compile_rec(clauses, oracle, ctx, 0)?;
    let certificate = if sets.is_empty() {
        // Only reachable if the specification were independent, which
        // was ruled out above; keep the sound fallback anyway.
        Certificate::Independent
    } else {
        Certificate::Sequence(sets.into_iter().collect())
    };
    let f_spec = Spec::new(
        f,
        spec.inputs().clone(),
        spec.outputs().to_vec(),
        spec.aux().clone(),
    )?;
    Ok((SaunfWitness::new_unchecked(f_spec, certificate), counters.report()))
}

fn compile_rec(
    clauses: Vec<Vec<Literal>>,
    oracle: &Oracle,
    ctx: Ctx<'_>,
    depth: u64,
) -> Result<(Circuit, Vec<LeafSet>), CompilerError> {
    if ctx.deadline.is_some_and(|d| Instant::now() >= d) {
        return Err(CompilerError::Timeout { report: ctx.counters.report() });
    }
    ctx.counters.max_depth.fetch_max(depth, Ordering::Relaxed);

    let (ckt, _) = build_clauses(&clauses);
    if check_independent(&ckt, ctx.outputs, oracle)? {
        return Ok((ckt, Vec::new()));
    }
    let lit = choose_literal(&ckt, ctx.outputs)?;

    ctx.counters.subset_calls.fetch_add(1, Ordering::Relaxed);
    let (u, state) = subset_search(
        &clauses,
        lit,
        oracle,
        ctx.options.subset_budget,
        ctx.deadline,
        ctx.options.exact_hitting_set,
    )?;
    if state.timed_out {
        ctx.counters.subset_timeouts.fetch_add(1, Ordering::Relaxed);
    }

    let g_prime: Vec<Vec<Literal>> = u.iter().map(|&i| clauses[i].clone()).collect();
    let d: Vec<Vec<Literal>> = (0..clauses.len())
        .filter(|i| !u.contains(i))
        .map(|i| clauses[i].clone())
        .collect();

    let (d_ckt, _) = build_clauses(&d);
    if check_independent(&d_ckt, &[lit.var].into(), oracle)? {
        // No split needed. The recursion substitutes the variable away
        // (sound: the remainder is semantically independent of it),
        // which also guarantees termination when the subset came back
        // empty.
        let child = compile_rec(substitute_true(&d, lit), oracle, ctx, depth + 1)?;
        return Ok(combine_no_split(&g_prime, lit, child));
    }

    ctx.counters.shannon_splits.fetch_add(1, Ordering::Relaxed);
    let pos_clauses = substitute_true(&d, lit);
    let neg_clauses = substitute_true(&d, !lit);
    let (pos, neg) = if ctx.options.parallel {
        std::thread::scope(|scope| {
            let handle = scope.spawn(|| {
                let branch_oracle = Oracle::new(ctx.config.clone());
                compile_rec(neg_clauses, &branch_oracle, ctx, depth + 1)
            });
            let pos = compile_rec(pos_clauses, oracle, ctx, depth + 1);
            let neg = handle.join().expect("Shannon branch thread panicked");
            (pos, neg)
        })
    } else {
        let pos = compile_rec(pos_clauses, oracle, ctx, depth + 1);
        let neg = compile_rec(neg_clauses, oracle, ctx, depth + 1);
        (pos, neg)
    };
    Ok(combine_split(&g_prime, lit, pos?, neg?))
}

/// Rebuild the clauses of G′ inside `builder`, returning the root node
/// and the set of leaves carrying the decomposition literal.
fn emit_g_prime(
    builder: &mut CircuitBuilder,
    g_prime: &[Vec<Literal>],
    lit: Literal,
) -> (NodeId, LeafSet) {
    let mut u_set = LeafSet::new();
    let mut roots = Vec::with_capacity(g_prime.len());
    for clause in g_prime {
        let mut nodes = Vec::with_capacity(clause.len());
        for &k in clause {
            let n = builder.literal(k);
            if k == lit {
                u_set.insert(builder.leaf_id(n).expect("literal nodes are leaves"));
            }
            nodes.push(n);
        }
        roots.push(builder.or_all(&nodes));
    }
    (builder.and_all(&roots), u_set)
}

fn is_trivial_true(circuit: &Circuit, sets: &[LeafSet]) -> bool {
    sets.is_empty() && circuit.as_constant() == Some(true)
}

fn remap_sets(sets: Vec<LeafSet>, map: &BTreeMap<LeafId, LeafId>) -> Vec<LeafSet> {
    sets.into_iter()
        .map(|s| s.iter().map(|l| map[l]).collect())
        .collect()
}

fn combine_no_split(
    g_prime: &[Vec<Literal>],
    lit: Literal,
    (child, child_sets): (Circuit, Vec<LeafSet>),
) -> (Circuit, Vec<LeafSet>) {
    if g_prime.is_empty() {
        return (child, child_sets);
    }
    let mut b = CircuitBuilder::new();
    let (gp_root, u_set) = emit_g_prime(&mut b, g_prime, lit);
    if is_trivial_true(&child, &child_sets) {
        return (b.finish(gp_root), vec![u_set]);
    }
    let (child_root, map) = b.import(&child);
    let root = b.and(gp_root, child_root);
    let mut sets = vec![u_set];
    sets.extend(remap_sets(child_sets, &map));
    (b.finish(root), sets)
}

fn combine_split(
    g_prime: &[Vec<Literal>],
    lit: Literal,
    (pos, pos_sets): (Circuit, Vec<LeafSet>),
    (neg, neg_sets): (Circuit, Vec<LeafSet>),
) -> (Circuit, Vec<LeafSet>) {
    let mut b = CircuitBuilder::new();
    let (gp_root, u_set) = if g_prime.is_empty() {
        (None, LeafSet::new())
    } else {
        let (r, u) = emit_g_prime(&mut b, g_prime, lit);
        (Some(r), u)
    };

    let l_leaf = b.literal(lit);
    let l_id = b.leaf_id(l_leaf).expect("literal nodes are leaves");
    let (pos_branch, pos_remapped) = if is_trivial_true(&pos, &pos_sets) {
        (l_leaf, Vec::new())
    } else {
        let (r, map) = b.import(&pos);
        (b.and(l_leaf, r), remap_sets(pos_sets, &map))
    };
    let nl_leaf = b.literal(!lit);
    let nl_id = b.leaf_id(nl_leaf).expect("literal nodes are leaves");
    let (neg_branch, neg_remapped) = if is_trivial_true(&neg, &neg_sets) {
        (nl_leaf, Vec::new())
    } else {
        let (r, map) = b.import(&neg);
        (b.and(nl_leaf, r), remap_sets(neg_sets, &map))
    };

    let or_node = b.or(pos_branch, neg_branch);
    let root = match gp_root {
        Some(gp) => b.and(gp, or_node),
        None => or_node,
    };

    let mut sets = vec![LeafSet::from([l_id])];
    if !u_set.is_empty() {
        sets.push(u_set);
    }
    sets.push(LeafSet::from([nl_id]));
    sets.extend(pos_remapped);
    sets.extend(neg_remapped);
    (b.finish(root), sets)
}
