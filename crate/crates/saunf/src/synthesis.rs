//! Skolem function synthesis from membership witnesses, verification of
//! Skolem vectors against relational specifications, and the reverse
//! construction that turns any verified vector back into a circuit in
//! the normal form.
//!
//! Function circuits live in a hash-consed NNF arena ([`FuncArena`])
//! shared by all components of a vector, so cross-level wiring — a
//! deep level's function feeding every shallower level — is stored
//! once. Negation is materialized as the De Morgan dual, memoized in
//! the same arena.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::circuit::{
    Assignment, Circuit, CircuitBuilder, CircuitError, Gate, Label, LeafSet, Literal, Node,
    NodeId, Spec, SpecError, VarId,
};
use crate::normal_form::{
    Certificate, LeafSequence, NormalFormError, SaunfViolation, SaunfWitness,
};
use crate::realizability::{set_literal, RealizabilityError};
use crate::sat::oracle::{Oracle, OracleError, SatResult};
use crate::sat::tseitin::Encoder;

/// Recorded wiring constant for the quadratic size guarantee: across
/// all test corpora the shared function DAG produced from a witness
/// with `k` sets over a circuit `G` measures at most
/// `WIRING_CONSTANT · max(1,k)² · |G|` nodes. (The descent keeps every
/// intermediate circuit within `2·|G|`, and each of the `k` unwinding
/// folds adds at most one arena node per intermediate-circuit node, so
/// the measured constant has comfortable margin.)
pub const WIRING_CONSTANT: usize = 4;

/// Handle into a [`FuncArena`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncId(u32);

impl FuncId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

/// One node of a function DAG: NNF, so negation only appears on leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FuncNode {
    Const(bool),
    Leaf(Literal),
    And(FuncId, FuncId),
    Or(FuncId, FuncId),
}

/// Hash-consed NNF function store with constant folding (`⊤∧f = f`,
/// `⊥∧f = ⊥`, duals for ∨, `f∧f = f`) and memoized De Morgan duals.
/// Children always have smaller ids than parents, so ascending id
/// order is a topological order.
#[derive(Clone, Debug)]
pub struct FuncArena {
    nodes: Vec<FuncNode>,
    cons: HashMap<FuncNode, FuncId>,
    duals: HashMap<FuncId, FuncId>,
}

impl Default for FuncArena {
    fn default() -> Self {
        Self::new()
    }
}

impl FuncArena {
    pub fn new() -> Self {
        let mut arena = FuncArena {
            nodes: Vec::new(),
            cons: HashMap::new(),
            duals: HashMap::new(),
        };
        // Intern the constants so folds can compare by id.
        let bot = arena.intern(FuncNode::Const(false));
        let top = arena.intern(FuncNode::Const(true));
        arena.duals.insert(bot, top);
        arena.duals.insert(top, bot);
        arena
    }

    fn intern(&mut self, node: FuncNode) -> FuncId {
        if let Some(&id) = self.cons.get(&node) {
            return id;
        }
        let id = FuncId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.cons.insert(node, id);
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constants are always present
    }

    pub fn node(&self, f: FuncId) -> FuncNode {
        self.nodes[f.index()]
    }

    pub fn constant(&mut self, value: bool) -> FuncId {
        self.intern(FuncNode::Const(value))
    }

    pub fn leaf(&mut self, lit: Literal) -> FuncId {
        self.intern(FuncNode::Leaf(lit))
    }

    fn bot(&self) -> FuncId {
        FuncId(0)
    }

    fn top(&self) -> FuncId {
        FuncId(1)
    }

    pub fn and(&mut self, a: FuncId, b: FuncId) -> FuncId {
        let (bot, top) = (self.bot(), self.top());
        if a == bot || b == bot {
            return bot;
        }
        if a == top {
            return b;
        }
        if b == top || a == b {
            return a;
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.intern(FuncNode::And(lo, hi))
    }

    pub fn or(&mut self, a: FuncId, b: FuncId) -> FuncId {
        let (bot, top) = (self.bot(), self.top());
        if a == top || b == top {
            return top;
        }
        if a == bot {
            return b;
        }
        if b == bot || a == b {
            return a;
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.intern(FuncNode::Or(lo, hi))
    }

    pub fn and_all(&mut self, operands: &[FuncId]) -> FuncId {
        self.fold_balanced(operands, true)
    }

    pub fn or_all(&mut self, operands: &[FuncId]) -> FuncId {
        self.fold_balanced(operands, false)
    }

    fn fold_balanced(&mut self, operands: &[FuncId], conj: bool) -> FuncId {
        if operands.is_empty() {
            return self.constant(conj);
        }
        let mut level = operands.to_vec();
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(match pair {
                    [a, b] => {
                        if conj {
                            self.and(*a, *b)
                        } else {
                            self.or(*a, *b)
                        }
                    }
                    [a] => *a,
                    _ => unreachable!(),
                });
            }
            level = next;
        }
        level[0]
    }

    /// De Morgan dual: swaps ∧/∨ and negates leaf literals. Involution;
    /// memoized in both directions.
    pub fn dual(&mut self, f: FuncId) -> FuncId {
        if let Some(&d) = self.duals.get(&f) {
            return d;
        }
        // Children precede parents, so one ascending pass fills every
        // missing dual up to f.
        for i in 0..=f.index() {
            let id = FuncId(i as u32);
            if self.duals.contains_key(&id) {
                continue;
            }
            let d = match self.nodes[i] {
                FuncNode::Const(b) => self.constant(!b),
                FuncNode::Leaf(lit) => self.leaf(!lit),
                FuncNode::And(a, b) => {
                    let (da, db) = (self.duals[&a], self.duals[&b]);
                    self.or(da, db)
                }
                FuncNode::Or(a, b) => {
                    let (da, db) = (self.duals[&a], self.duals[&b]);
                    self.and(da, db)
                }
            };
            self.duals.insert(id, d);
            self.duals.entry(d).or_insert(id);
        }
        self.duals[&f]
    }

    /// Variables mentioned under `f`.
    pub fn vars(&self, f: FuncId) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        let mut seen = vec![false; f.index() + 1];
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            if seen[g.index()] {
                continue;
            }
            seen[g.index()] = true;
            match self.nodes[g.index()] {
                FuncNode::Const(_) => {}
                FuncNode::Leaf(lit) => {
                    out.insert(lit.var);
                }
                FuncNode::And(a, b) | FuncNode::Or(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out
    }

    /// Evaluate under a (total, for the mentioned variables) assignment.
    pub fn evaluate(&self, f: FuncId, sigma: &Assignment) -> bool {
        let mut vals = Vec::with_capacity(f.index() + 1);
        for node in &self.nodes[..=f.index()] {
            let v = match *node {
                FuncNode::Const(b) => b,
                FuncNode::Leaf(lit) => {
                    let value = *sigma
                        .get(&lit.var)
                        .unwrap_or_else(|| panic!("variable {} has no value", lit.var));
                    lit.eval(value)
                }
                FuncNode::And(a, b) => vals[a.index()] && vals[b.index()],
                FuncNode::Or(a, b) => vals[a.index()] || vals[b.index()],
            };
            vals.push(v);
        }
        vals[f.index()]
    }

    /// Number of distinct nodes reachable from the given roots — the
    /// shared-DAG size measure.
    pub fn reachable_size(&self, roots: &[FuncId]) -> usize {
        let mut seen: BTreeSet<FuncId> = BTreeSet::new();
        let mut stack: Vec<FuncId> = roots.to_vec();
        while let Some(g) = stack.pop() {
            if !seen.insert(g) {
                continue;
            }
            if let FuncNode::And(a, b) | FuncNode::Or(a, b) = self.nodes[g.index()] {
                stack.push(a);
                stack.push(b);
            }
        }
        seen.len()
    }

    /// Emit `f` as a standalone circuit (one leaf per distinct literal).
    pub fn emit_circuit(&self, f: FuncId) -> Circuit {
        let mut builder = CircuitBuilder::new();
        let mut ctx = EmitCtx::default();
        let root = emit_into(self, f, &mut builder, &mut ctx);
        builder.finish(root)
    }
}

/// Shared emission state: function→node map plus literal/constant leaf
/// caches, so repeated emissions into one builder share everything.
#[derive(Default)]
struct EmitCtx {
    map: HashMap<FuncId, NodeId>,
    lit_cache: BTreeMap<Literal, NodeId>,
    const_cache: [Option<NodeId>; 2],
}

impl EmitCtx {
    fn lit_node(&mut self, builder: &mut CircuitBuilder, lit: Literal) -> NodeId {
        *self
            .lit_cache
            .entry(lit)
            .or_insert_with(|| builder.literal(lit))
    }

    fn const_node(&mut self, builder: &mut CircuitBuilder, value: bool) -> NodeId {
        let slot = &mut self.const_cache[usize::from(value)];
        match slot {
            Some(n) => *n,
            None => {
                let n = builder.constant(value);
                *slot = Some(n);
                n
            }
        }
    }
}

fn emit_into(
    arena: &FuncArena,
    root: FuncId,
    builder: &mut CircuitBuilder,
    ctx: &mut EmitCtx,
) -> NodeId {
    // Gather the not-yet-emitted reachable ids; ascending id order is
    // topological.
    let mut todo: BTreeSet<FuncId> = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(f) = stack.pop() {
        if ctx.map.contains_key(&f) || !todo.insert(f) {
            continue;
        }
        if let FuncNode::And(a, b) | FuncNode::Or(a, b) = arena.node(f) {
            stack.push(a);
            stack.push(b);
        }
    }
    for f in todo {
        let n = match arena.node(f) {
            FuncNode::Const(b) => ctx.const_node(builder, b),
            FuncNode::Leaf(lit) => ctx.lit_node(builder, lit),
            FuncNode::And(a, b) => {
                let (x, y) = (ctx.map[&a], ctx.map[&b]);
                builder.and(x, y)
            }
            FuncNode::Or(a, b) => {
                let (x, y) = (ctx.map[&a], ctx.map[&b]);
                builder.or(x, y)
            }
        };
        ctx.map.insert(f, n);
    }
    ctx.map[&root]
}

#[derive(Debug, thiserror::Error)]
pub enum SynthesisError {
    #[error("witness fails membership: {0}")]
    NotInNormalForm(SaunfViolation),
    #[error("no function covers variable {0}")]
    UncoveredVariable(VarId),
    #[error("vector covers {got:?} but the declared outputs are {expected:?}")]
    OutputMismatch { expected: Vec<VarId>, got: Vec<VarId> },
    #[error("component for {component} mentions non-parameter variable {var}")]
    ComponentNotOverParams { component: VarId, var: VarId },
    #[error("duplicate component for output {0}")]
    DuplicateComponent(VarId),
    #[error("Skolem vector fails verification against the specification")]
    InvalidSkolemVector,
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("constructed circuit violates role constraints: {0}")]
    Spec(#[from] SpecError),
}

impl From<RealizabilityError> for SynthesisError {
    fn from(e: RealizabilityError) -> Self {
        SynthesisError::NormalForm(e.into())
    }
}

#[derive(Clone, Copy, Debug)]
struct SkolemEntry {
    var: VarId,
    func: FuncId,
    dual: FuncId,
}

/// A Skolem function vector: one function per declared output, in
/// declared order, over the parameter variables only. All components
/// (and their De Morgan duals) live in one shared arena.
#[derive(Clone, Debug)]
pub struct SkolemVector {
    arena: FuncArena,
    entries: Vec<SkolemEntry>,
    params: BTreeSet<VarId>,
    aux_registry: BTreeMap<VarId, u32>,
}

impl SkolemVector {
    /// Bundle functions into a vector, enforcing the invariant that no
    /// component mentions anything outside `params` (in particular no
    /// output and no synthesis-time auxiliary variable).
    pub fn from_functions(
        mut arena: FuncArena,
        entries: Vec<(VarId, FuncId)>,
        params: BTreeSet<VarId>,
        aux_registry: BTreeMap<VarId, u32>,
    ) -> Result<Self, SynthesisError> {
        let mut seen = BTreeSet::new();
        let mut full = Vec::with_capacity(entries.len());
        for (var, func) in entries {
            if !seen.insert(var) {
                return Err(SynthesisError::DuplicateComponent(var));
            }
            if let Some(&bad) = arena.vars(func).iter().find(|v| !params.contains(v)) {
                return Err(SynthesisError::ComponentNotOverParams { component: var, var: bad });
            }
            let dual = arena.dual(func);
            full.push(SkolemEntry { var, func, dual });
        }
        Ok(SkolemVector { arena, entries: full, params, aux_registry })
    }

    /// The all-⊥ constant vector over the given outputs.
    pub fn constant_false(outputs: &[VarId], params: BTreeSet<VarId>) -> Self {
        let mut arena = FuncArena::new();
        let bot = arena.constant(false);
        let entries = outputs.iter().map(|&v| (v, bot)).collect();
        SkolemVector::from_functions(arena, entries, params, BTreeMap::new())
            .expect("constant components mention no variables")
    }

    pub fn arena(&self) -> &FuncArena {
        &self.arena
    }

    pub fn params(&self) -> &BTreeSet<VarId> {
        &self.params
    }

    /// Synthesis-time auxiliary output → 1-based recursion level that
    /// introduced it.
    pub fn aux_registry(&self) -> &BTreeMap<VarId, u32> {
        &self.aux_registry
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn outputs(&self) -> Vec<VarId> {
        self.entries.iter().map(|e| e.var).collect()
    }

    pub fn func(&self, var: VarId) -> Option<FuncId> {
        self.entries.iter().find(|e| e.var == var).map(|e| e.func)
    }

    pub fn dual_func(&self, var: VarId) -> Option<FuncId> {
        self.entries.iter().find(|e| e.var == var).map(|e| e.dual)
    }

    /// The component for `var` as a standalone circuit.
    pub fn component_circuit(&self, var: VarId) -> Option<Circuit> {
        self.func(var).map(|f| self.arena.emit_circuit(f))
    }

    /// All components as standalone circuits, in declared output order.
    pub fn component_circuits(&self) -> Vec<(VarId, Circuit)> {
        self.entries
            .iter()
            .map(|e| (e.var, self.arena.emit_circuit(e.func)))
            .collect()
    }

    /// Evaluate the component for `var` on a parameter assignment.
    pub fn evaluate(&self, var: VarId, sigma: &Assignment) -> Option<bool> {
        self.func(var).map(|f| self.arena.evaluate(f, sigma))
    }

    /// Nodes of the shared DAG reachable from every component and its
    /// dual — the size the quadratic synthesis guarantee is measured on.
    pub fn shared_size(&self) -> usize {
        let roots: Vec<FuncId> =
            self.entries.iter().flat_map(|e| [e.func, e.dual]).collect();
        self.arena.reachable_size(&roots)
    }

    /// The vector-size measure `|Ψ|` used by documented size bounds:
    /// the sum over components of the standalone circuit size of the
    /// component plus that of its dual (NNF negation materializes the
    /// dual, so both polarities are part of what a consumer of the
    /// vector pays for). Components are counted independently — shared
    /// substructure is counted once per component that uses it.
    pub fn vector_size(&self) -> usize {
        self.entries
            .iter()
            .map(|e| {
                self.arena.emit_circuit(e.func).len() + self.arena.emit_circuit(e.dual).len()
            })
            .sum()
    }
}

/// What one recursion level of the generator did.
#[derive(Clone, Debug)]
pub enum TraceLevel {
    /// A processed set: the chosen literal, the auxiliary output
    /// introduced, the gadgeted circuit `E`, the simplified successor
    /// `H = cpropSimp(E|ℓ=⊤,¬ℓ=⊤)`, and the output set after the step.
    Step {
        set_index: usize,
        literal: Literal,
        aux: VarId,
        e: Circuit,
        h: Circuit,
        outputs_after: BTreeSet<VarId>,
    },
    /// The set's leaves were all absorbed by earlier simplification;
    /// the level is a no-op (no auxiliary, circuit unchanged).
    Skipped { set_index: usize },
}

/// Per-level record of a generator run, ending at the terminal level
/// that returned the constant vector over `terminal_outputs`.
#[derive(Clone, Debug)]
pub struct SynthesisTrace {
    pub levels: Vec<TraceLevel>,
    pub terminal_outputs: BTreeSet<VarId>,
}

impl SynthesisTrace {
    /// Recursion depth including the terminal level.
    pub fn depth(&self) -> usize {
        self.levels.len() + 1
    }
}

/// Generate a Skolem function vector from a membership witness,
/// re-checking membership first. On failure the error carries the
/// violated condition. See [`sk_gen_trusted`] to skip the re-check.
pub fn sk_gen(
    witness: &SaunfWitness,
    oracle: &Oracle,
) -> Result<(SkolemVector, SynthesisTrace), SynthesisError> {
    match witness.verify(oracle)? {
        crate::normal_form::SaunfVerdict::Pass => sk_gen_trusted(witness),
        crate::normal_form::SaunfVerdict::Fail(v) => Err(SynthesisError::NotInNormalForm(v)),
    }
}

/// Generate without re-checking membership (for witnesses this library
/// itself produced and certified). Purely structural — no SAT queries.
///
/// Descent: level `r` re-labels every leaf of the current circuit that
/// carries the set's literal `ℓ` but is outside the set to `ℓ∧p_r`,
/// and every `¬ℓ` leaf to `¬ℓ∧¬p_r`, for a fresh auxiliary output
/// `p_r`; later sets that referenced a re-labeled leaf are re-pointed
/// to the gadget's tag leaf. The successor circuit relabels both
/// polarities of `ℓ` to ⊤ and propagates constants; leaves absorbed by
/// the propagation are dropped from later sets, and a fully absorbed
/// set skips its level. The terminal level returns the all-⊥ vector
/// over the remaining outputs. Unwinding computes the function for `ℓ`
/// by folding `E|ℓ=⊤,¬ℓ=⊥` with all deeper functions wired into the
/// corresponding variable positions.
pub fn sk_gen_trusted(
    witness: &SaunfWitness,
) -> Result<(SkolemVector, SynthesisTrace), SynthesisError> {
    let spec = witness.spec();
    let params = spec.parameter_vars();

    let sequence = match witness.certificate() {
        Certificate::Independent => {
            let vector =
                SkolemVector::constant_false(spec.outputs(), params);
            let trace = SynthesisTrace {
                levels: Vec::new(),
                terminal_outputs: spec.output_set(),
            };
            return Ok((vector, trace));
        }
        Certificate::Sequence(seq) => seq,
    };
    if sequence.is_empty() {
        return Err(NormalFormError::EmptySequence.into());
    }
    for (idx, set) in sequence.iter().enumerate() {
        if set.is_empty() {
            return Err(NormalFormError::EmptySet { index: idx }.into());
        }
        for &leaf in set {
            if spec.circuit().leaf_label(leaf).is_none() {
                return Err(CircuitError::UnknownLeaf(leaf).into());
            }
        }
    }

    // Fresh auxiliary ids start past every variable in sight.
    let mut next_aux = spec
        .circuit()
        .vars()
        .iter()
        .chain(spec.inputs().iter())
        .chain(spec.outputs().iter())
        .chain(spec.aux().iter())
        .map(|v| v.0)
        .max()
        .unwrap_or(0)
        + 1;

    // Descent.
    let mut stage = spec.circuit().clone();
    let mut sets: Vec<LeafSet> = sequence.iter().cloned().collect();
    let mut outputs = spec.output_set();
    let mut levels: Vec<TraceLevel> = Vec::with_capacity(sets.len());
    let mut aux_registry = BTreeMap::new();
    for r in 0..sets.len() {
        if sets[r].is_empty() {
            levels.push(TraceLevel::Skipped { set_index: r });
            continue;
        }
        let lit = set_literal(&stage, &sets[r])?;
        if !outputs.contains(&lit.var) {
            return Err(SynthesisError::NotInNormalForm(
                SaunfViolation::NonOutputLiteral { set: r, literal: lit },
            ));
        }
        let aux = VarId(next_aux);
        next_aux += 1;
        aux_registry.insert(aux, r as u32 + 1);

        let same: LeafSet = stage
            .literal_leaves(lit)
            .difference(&sets[r])
            .copied()
            .collect();
        let (e1, tags_same) = stage.gadget_conjoin(&same, Literal::positive(aux))?;
        let opposite = e1.literal_leaves(!lit);
        let (e, tags_opposite) = e1.gadget_conjoin(&opposite, Literal::negative(aux))?;

        // Re-point later sets through the gadget tag leaves, then drop
        // whatever the simplification absorbed.
        let (h, info) = e.literal_cofactor(lit, true, true).cprop_simp();
        for later in sets.iter_mut().skip(r + 1) {
            *later = later
                .iter()
                .map(|l| {
                    tags_same
                        .get(l)
                        .or_else(|| tags_opposite.get(l))
                        .map_or(*l, |g| g.tag_leaf)
                })
                .filter(|l| !info.absorbed.contains(l))
                .collect();
        }

        outputs.remove(&lit.var);
        outputs.insert(aux);
        levels.push(TraceLevel::Step {
            set_index: r,
            literal: lit,
            aux,
            e,
            h: h.clone(),
            outputs_after: outputs.clone(),
        });
        stage = h;
    }

    // Terminal level: any vector works; use all-⊥.
    let mut arena = FuncArena::new();
    let bot = arena.constant(false);
    let mut cover: BTreeMap<VarId, FuncId> =
        outputs.iter().map(|&v| (v, bot)).collect();

    // Unwind.
    for level in levels.iter().rev() {
        let TraceLevel::Step { literal, aux, e, .. } = level else {
            continue;
        };
        let psi_lit = fold_circuit(e, Some(*literal), &cover, &params, &mut arena)?;
        let func = if literal.negated {
            arena.dual(psi_lit)
        } else {
            psi_lit
        };
        cover.remove(aux);
        cover.insert(literal.var, func);
    }

    debug_assert_eq!(
        cover.keys().copied().collect::<BTreeSet<_>>(),
        spec.output_set(),
        "unwinding must land exactly on the declared outputs"
    );
    let entries: Vec<(VarId, FuncId)> =
        spec.outputs().iter().map(|&v| (v, cover[&v])).collect();
    let vector = SkolemVector::from_functions(arena, entries, params, aux_registry)?;
    let trace = SynthesisTrace { levels, terminal_outputs: outputs };
    Ok((vector, trace))
}

/// Fold a circuit into the arena: leaves over the excluded literal's
/// variable become ⊤ (same polarity) or ⊥ (opposite), covered
/// variables are replaced by their functions (dualized on negative
/// leaves), parameter literals stay leaves, and anything else is an
/// uncovered-variable error.
fn fold_circuit(
    circuit: &Circuit,
    exclude: Option<Literal>,
    cover: &BTreeMap<VarId, FuncId>,
    params: &BTreeSet<VarId>,
    arena: &mut FuncArena,
) -> Result<FuncId, SynthesisError> {
    let mut map: Vec<FuncId> = Vec::with_capacity(circuit.len());
    for node in circuit.nodes() {
        let f = match *node {
            Node::Leaf { label: Label::Const(b), .. } => arena.constant(b),
            Node::Leaf { label: Label::Lit(lit), .. } => {
                if exclude.is_some_and(|ex| ex.var == lit.var) {
                    arena.constant(lit == exclude.unwrap())
                } else if let Some(&func) = cover.get(&lit.var) {
                    if lit.negated {
                        arena.dual(func)
                    } else {
                        func
                    }
                } else if params.contains(&lit.var) {
                    arena.leaf(lit)
                } else {
                    return Err(SynthesisError::UncoveredVariable(lit.var));
                }
            }
            Node::Gate { gate: Gate::And, lhs, rhs } => {
                let (a, b) = (map[lhs.index()], map[rhs.index()]);
                arena.and(a, b)
            }
            Node::Gate { gate: Gate::Or, lhs, rhs } => {
                let (a, b) = (map[lhs.index()], map[rhs.index()]);
                arena.or(a, b)
            }
        };
        map.push(f);
    }
    Ok(map[circuit.root().index()])
}

/// Self-substitution: the function `φ_{E|ℓ=⊤,¬ℓ=⊥}(Ψ(I), I)` — the
/// Skolem function for `ℓ` in `E` — as a circuit. Every variable of
/// `E` other than `ℓ`'s must be covered by a component of `psi` or be
/// one of its parameters.
pub fn self_substitute(
    e: &Circuit,
    lit: Literal,
    psi: &SkolemVector,
) -> Result<Circuit, SynthesisError> {
    let mut arena = psi.arena.clone();
    let cover: BTreeMap<VarId, FuncId> =
        psi.entries.iter().map(|en| (en.var, en.func)).collect();
    let f = fold_circuit(e, Some(lit), &cover, &psi.params, &mut arena)?;
    Ok(arena.emit_circuit(f))
}

/// Does the vector solve the specification? True iff
/// `φ_G(X,I) ∧ ¬φ_G(Ψ(I),I)` is unsatisfiable (the converse implication
/// holds for any vector). The vector must cover exactly the declared
/// outputs and mention only parameter variables.
pub fn verify_skolem(
    spec: &Spec,
    psi: &SkolemVector,
    oracle: &Oracle,
) -> Result<bool, SynthesisError> {
    let declared = spec.output_set();
    let covered: BTreeSet<VarId> = psi.entries.iter().map(|e| e.var).collect();
    if covered != declared {
        return Err(SynthesisError::OutputMismatch {
            expected: spec.outputs().to_vec(),
            got: psi.outputs(),
        });
    }
    let params = spec.parameter_vars();
    for entry in &psi.entries {
        if let Some(&bad) = psi.arena.vars(entry.func).iter().find(|v| !params.contains(v)) {
            return Err(SynthesisError::ComponentNotOverParams {
                component: entry.var,
                var: bad,
            });
        }
    }
    if psi.entries.is_empty() {
        return Ok(true);
    }

    let mut arena = psi.arena.clone();
    let cover: BTreeMap<VarId, FuncId> =
        psi.entries.iter().map(|e| (e.var, e.func)).collect();
    let substituted = fold_circuit(spec.circuit(), None, &cover, &params, &mut arena)?;
    let substituted = arena.emit_circuit(substituted);

    let mut enc = Encoder::new();
    let original_lit = enc.add_circuit(spec.circuit());
    let substituted_lit = enc.add_circuit(&substituted);
    enc.assert_lit(original_lit, true);
    enc.assert_lit(substituted_lit, false);
    let (cnf, var_map) = enc.into_parts();
    match oracle.solve(&cnf, &[])? {
        SatResult::Unsat => Ok(true),
        SatResult::Sat(model) => {
            if log::log_enabled!(log::Level::Debug) {
                let counter: Assignment = var_map
                    .iter()
                    .filter(|(v, _)| params.contains(v))
                    .map(|(&v, &sl)| (v, model.get(sl as usize - 1).copied().unwrap_or(false)))
                    .collect();
                log::debug!("skolem verification countermodel on parameters: {counter:?}");
            }
            Ok(false)
        }
    }
}

/// Size accounting for [`saunf_from_skolem`], with `g`, `h` the node
/// counts of the input and constructed circuits and `psi` the
/// vector-size measure [`SkolemVector::vector_size`].
///
/// [`Self::bound`] is the documented target `g + psi + 12m + 8`. The
/// construction meets it whenever the substituted copy of the input
/// folds well under the vector (constant and copy components, CNF
/// inputs); a vector of wide genuine functions can exceed it, since
/// the output carries the input's gate skeleton both in its original
/// form and once more under substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeReport {
    pub g: usize,
    pub psi: usize,
    pub outputs: usize,
    pub h: usize,
}

impl SizeReport {
    pub fn bound(&self) -> usize {
        self.g + self.psi + 12 * self.outputs + 8
    }

    pub fn within_bound(&self) -> bool {
        self.h <= self.bound()
    }
}

/// Reverse construction: from a verified vector, build a circuit in the
/// normal form that is semantically equivalent to the specification,
/// with its membership witness.
///
/// The constructed circuit is `(F ∨ G) ∧ G′` where
/// `F = ∧_j ((x_j ∧ ψ_j) ∨ (¬x_j ∧ ¬ψ_j))` and `G′` is `G` with every
/// output leaf replaced by its component function (constant-propagated;
/// `F` is left untouched because its output leaves carry the witness
/// sets). The witness sequence is the `2m` singletons over `F`'s
/// output leaves, positive before negative per output, in declared
/// order. Parameter literals share one leaf across all parts and the
/// component functions are emitted once from the shared arena; the
/// embedded copy of `G` keeps its own output leaves, distinct from
/// `F`'s, so masking during membership checks zeroes them as required.
///
/// A specification with no outputs is returned unchanged with the
/// independence certificate.
pub fn saunf_from_skolem(
    spec: &Spec,
    psi: &SkolemVector,
    oracle: &Oracle,
) -> Result<(SaunfWitness, SizeReport), SynthesisError> {
    if !verify_skolem(spec, psi, oracle)? {
        return Err(SynthesisError::InvalidSkolemVector);
    }
    let g = spec.circuit();
    let m = spec.outputs().len();
    if m == 0 {
        let report = SizeReport { g: g.len(), psi: 0, outputs: 0, h: g.len() };
        return Ok((
            SaunfWitness::new_unchecked(spec.clone(), Certificate::Independent),
            report,
        ));
    }

    let params = spec.parameter_vars();
    let mut arena = psi.arena.clone();
    let cover: BTreeMap<VarId, FuncId> =
        psi.entries.iter().map(|e| (e.var, e.func)).collect();
    let g_substituted = fold_circuit(g, None, &cover, &params, &mut arena)?;

    let mut builder = CircuitBuilder::new();
    let mut ctx = EmitCtx::default();

    // F, recording its output leaves for the witness sequence:
    // positive then negative singleton per output, declared order.
    let mut sets: Vec<LeafSet> = Vec::with_capacity(2 * m);
    let mut conjuncts = Vec::with_capacity(m);
    for entry in &psi.entries {
        let pos_leaf = builder.literal(Literal::positive(entry.var));
        let neg_leaf = builder.literal(Literal::negative(entry.var));
        sets.push([builder.leaf_id(pos_leaf).unwrap()].into());
        sets.push([builder.leaf_id(neg_leaf).unwrap()].into());
        let component = emit_into(&arena, entry.func, &mut builder, &mut ctx);
        let component_dual = emit_into(&arena, entry.dual, &mut builder, &mut ctx);
        let agree = builder.and(pos_leaf, component);
        let disagree = builder.and(neg_leaf, component_dual);
        conjuncts.push(builder.or(agree, disagree));
    }
    let f_root = builder.and_all(&conjuncts);

    // Embedded copy of G: parameter literals and constants shared,
    // output literals deduplicated per literal but distinct from F's
    // leaves.
    let mut copy_leaves: BTreeMap<Literal, NodeId> = BTreeMap::new();
    let mut copy_map: Vec<NodeId> = Vec::with_capacity(g.len());
    for node in g.nodes() {
        let n = match *node {
            Node::Leaf { label: Label::Const(b), .. } => ctx.const_node(&mut builder, b),
            Node::Leaf { label: Label::Lit(lit), .. } => {
                if params.contains(&lit.var) {
                    ctx.lit_node(&mut builder, lit)
                } else {
                    *copy_leaves
                        .entry(lit)
                        .or_insert_with(|| builder.literal(lit))
                }
            }
            Node::Gate { gate, lhs, rhs } => {
                let (a, b) = (copy_map[lhs.index()], copy_map[rhs.index()]);
                builder.gate(gate, a, b)
            }
        };
        copy_map.push(n);
    }
    let g_copy = copy_map[g.root().index()];

    let g_prime = emit_into(&arena, g_substituted, &mut builder, &mut ctx);
    let left = builder.or(f_root, g_copy);
    let root = builder.and(left, g_prime);
    let h = builder.finish(root);

    let report = SizeReport {
        g: g.len(),
        psi: psi.vector_size(),
        outputs: m,
        h: h.len(),
    };
    let h_spec = Spec::new(
        h,
        spec.inputs().clone(),
        spec.outputs().to_vec(),
        spec.aux().clone(),
    )?;
    let witness = SaunfWitness::new_unchecked(
        h_spec,
        Certificate::Sequence(LeafSequence::new(sets)),
    );
    Ok((witness, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::RawBuilder;
    use crate::fixtures;
    use crate::naive;
    use crate::normal_form::{check_saunf, single_polarity_witness, SaunfVerdict};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn not_i_circuit() -> Circuit {
        let mut b = CircuitBuilder::new();
        let n = b.literal(Literal::negative(VarId(1)));
        b.finish(n)
    }

    /// Exhaustive ∀-parameters check of a vector against a relational
    /// specification: plugging the vector in must match ∃-outputs.
    fn exhaustive_ok(spec: &Spec, vector: &SkolemVector) -> bool {
        let outputs = spec.output_set();
        for mut sigma in naive::assignments_over(&spec.parameter_vars()) {
            let exists = naive::assignments_over(&outputs).any(|xs| {
                let mut full = sigma.clone();
                full.extend(xs);
                spec.circuit().evaluate(&full)
            });
            for &x in spec.outputs() {
                let v = vector.evaluate(x, &sigma).unwrap();
                sigma.insert(x, v);
            }
            if spec.circuit().evaluate(&sigma) != exists {
                return false;
            }
        }
        true
    }

    #[test]
    fn arena_folds_and_duals() {
        let mut a = FuncArena::new();
        let x = a.leaf(Literal::positive(VarId(1)));
        let y = a.leaf(Literal::negative(VarId(2)));
        let top = a.constant(true);
        let bot = a.constant(false);
        assert_eq!(a.and(top, x), x);
        assert_eq!(a.and(bot, x), bot);
        assert_eq!(a.or(bot, y), y);
        assert_eq!(a.or(top, y), top);
        assert_eq!(a.and(x, x), x);
        let f = a.and(x, y);
        assert_eq!(a.and(y, x), f, "commutative consing");
        let d = a.dual(f);
        assert_eq!(a.dual(d), f, "dual is an involution");
        let sigma: Assignment = [(VarId(1), true), (VarId(2), true)].into_iter().collect();
        assert!(!a.evaluate(f, &sigma));
        assert!(a.evaluate(d, &sigma));
        assert_eq!(a.vars(f), BTreeSet::from([VarId(1), VarId(2)]));

        let c = a.emit_circuit(f);
        assert!(naive::equivalent(&c, &{
            let mut b = CircuitBuilder::new();
            let x = b.literal(Literal::positive(VarId(1)));
            let y = b.literal(Literal::negative(VarId(2)));
            let r = b.and(x, y);
            b.finish(r)
        }));
    }

    #[test]
    fn fig1_skgen_matches_worked_run() {
        let fig = fixtures::fig1();
        let oracle = Oracle::internal();
        let witness = SaunfWitness::new_unchecked(
            fig.spec.clone(),
            Certificate::Sequence(fig.good_sequence()),
        );
        let (vector, trace) = sk_gen(&witness, &oracle).unwrap();

        // Four processed levels plus the terminal one.
        assert_eq!(trace.depth(), 5);
        let steps: Vec<_> = trace
            .levels
            .iter()
            .map(|l| match l {
                TraceLevel::Step { literal, aux, .. } => (*literal, *aux),
                TraceLevel::Skipped { set_index } => panic!("unexpected skip at {set_index}"),
            })
            .collect();
        // Levels 1–2 process x1, x2; levels 3–4 process the tag
        // literals the gadgets introduced for ¬x2 and ¬x1.
        let (p1, p2, p3, p4) = (VarId(4), VarId(5), VarId(6), VarId(7));
        assert_eq!(steps[0], (Literal::positive(fig.x1), p1));
        assert_eq!(steps[1], (Literal::positive(fig.x2), p2));
        assert_eq!(steps[2], (Literal::negative(p2), p3));
        assert_eq!(steps[3], (Literal::negative(p1), p4));
        assert_eq!(trace.terminal_outputs, BTreeSet::from([p3, p4]));
        assert_eq!(
            vector.aux_registry(),
            &BTreeMap::from([(p1, 1), (p2, 2), (p3, 3), (p4, 4)])
        );

        // The level-4 successor circuit is semantically ⊤ (although
        // plain constant propagation cannot reduce it to the constant:
        // it retains the tautologous shape i ∨ ¬i).
        let TraceLevel::Step { h, .. } = &trace.levels[3] else { unreachable!() };
        assert!(naive::tautology(h));
        assert!(h.as_constant().is_none());

        // Both components are ¬i, the worked run's unique answer.
        let expected = not_i_circuit();
        for x in [fig.x1, fig.x2] {
            assert!(naive::equivalent(&vector.component_circuit(x).unwrap(), &expected));
        }
        assert!(verify_skolem(&fig.spec, &vector, &oracle).unwrap());
        assert!(exhaustive_ok(&fig.spec, &vector));
    }

    #[test]
    fn trace_invariant_h_is_simplified_cofactor() {
        let fig = fixtures::fig1();
        let oracle = Oracle::internal();
        let witness = SaunfWitness::new_unchecked(
            fig.spec.clone(),
            Certificate::Sequence(fig.good_sequence()),
        );
        let (_, trace) = sk_gen(&witness, &oracle).unwrap();
        for level in &trace.levels {
            let TraceLevel::Step { literal, e, h, .. } = level else { continue };
            let (recomputed, _) = e.literal_cofactor(*literal, true, true).cprop_simp();
            assert_eq!(&recomputed, h);
        }
    }

    #[test]
    fn skgen_rejects_bad_witness_with_condition() {
        let fig = fixtures::fig1();
        let oracle = Oracle::internal();
        let witness = SaunfWitness::new_unchecked(
            fig.spec.clone(),
            Certificate::Sequence(fig.bad_sequence()),
        );
        match sk_gen(&witness, &oracle) {
            Err(SynthesisError::NotInNormalForm(v)) => assert_eq!(v.condition(), 3),
            other => panic!("expected membership rejection, got {other:?}"),
        }
    }

    #[test]
    fn manual_vectors_verify_and_refute() {
        let fig = fixtures::fig1();
        let oracle = Oracle::internal();
        let mut arena = FuncArena::new();
        let ni = arena.leaf(Literal::negative(fig.i));
        let good = SkolemVector::from_functions(
            arena.clone(),
            vec![(fig.x1, ni), (fig.x2, ni)],
            [fig.i].into(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(verify_skolem(&fig.spec, &good, &oracle).unwrap());

        let i = arena.leaf(Literal::positive(fig.i));
        let bad = SkolemVector::from_functions(
            arena,
            vec![(fig.x1, i), (fig.x2, i)],
            [fig.i].into(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(!verify_skolem(&fig.spec, &bad, &oracle).unwrap());
    }

    #[test]
    fn vector_validation_errors() {
        let fig = fixtures::fig1();
        let oracle = Oracle::internal();
        let mut arena = FuncArena::new();
        let ni = arena.leaf(Literal::negative(fig.i));

        // A component mentioning an output is rejected at construction.
        let x1_leaf = arena.leaf(Literal::positive(fig.x1));
        match SkolemVector::from_functions(
            arena.clone(),
            vec![(fig.x2, x1_leaf)],
            [fig.i].into(),
            BTreeMap::new(),
        ) {
            Err(SynthesisError::ComponentNotOverParams { component, var }) => {
                assert_eq!((component, var), (fig.x2, fig.x1));
            }
            other => panic!("unexpected {other:?}"),
        }

        // Coverage mismatch is rejected at verification.
        let partial = SkolemVector::from_functions(
            arena,
            vec![(fig.x1, ni)],
            [fig.i].into(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(matches!(
            verify_skolem(&fig.spec, &partial, &oracle),
            Err(SynthesisError::OutputMismatch { .. })
        ));
    }

    #[test]
    fn independent_certificate_yields_constant_vector() {
        let oracle = Oracle::internal();
        let mut b = CircuitBuilder::new();
        let i = b.literal(Literal::positive(VarId(1)));
        let c = b.finish(i);
        let spec =
            Spec::new(c, [VarId(1)].into(), vec![VarId(2)], BTreeSet::new()).unwrap();
        let witness =
            SaunfWitness::checked(spec.clone(), Certificate::Independent, &oracle).unwrap();
        let (vector, trace) = sk_gen(&witness, &oracle).unwrap();
        assert_eq!(trace.depth(), 1);
        assert_eq!(vector.evaluate(VarId(2), &[(VarId(1), true)].into()), Some(false));
        assert!(verify_skolem(&spec, &vector, &oracle).unwrap());
        assert!(exhaustive_ok(&spec, &vector));
    }

    /// The relational spec x ⇔ ¬i: the synthesized function must be
    /// ¬i itself (the unique Skolem function).
    #[test]
    fn xor_spec_produces_negation() {
        let oracle = Oracle::internal();
        let mut b = CircuitBuilder::new();
        let x = b.literal(Literal::positive(VarId(2)));
        let ni = b.literal(Literal::negative(VarId(1)));
        let nx = b.literal(Literal::negative(VarId(2)));
        let i = b.literal(Literal::positive(VarId(1)));
        let a1 = b.and(x, ni);
        let a2 = b.and(nx, i);
        let root = b.or(a1, a2);
        let circuit = b.finish(root);
        let x_leaf = circuit.literal_leaves(Literal::positive(VarId(2)));
        let nx_leaf = circuit.literal_leaves(Literal::negative(VarId(2)));
        let spec =
            Spec::new(circuit, [VarId(1)].into(), vec![VarId(2)], BTreeSet::new()).unwrap();
        let witness = SaunfWitness::new_unchecked(
            spec.clone(),
            Certificate::Sequence(LeafSequence::new(vec![x_leaf, nx_leaf])),
        );
        let (vector, _) = sk_gen(&witness, &oracle).unwrap();
        assert!(naive::equivalent(
            &vector.component_circuit(VarId(2)).unwrap(),
            &not_i_circuit()
        ));
        assert!(verify_skolem(&spec, &vector, &oracle).unwrap());
    }

    /// Absorbed sets skip their level: G = (x ∨ y) ∧ (¬y ∨ i) with the
    /// witness ({x}, {y of clause 1}, {¬y}) — relabeling x to ⊤ makes
    /// clause 1 constant and absorbs the y leaf, so level 2 is a no-op.
    #[test]
    fn skip_levels_when_sets_fully_absorbed() {
        let oracle = Oracle::internal();
        let (i, x, y) = (VarId(1), VarId(2), VarId(3));
        let mut b = CircuitBuilder::new();
        let lx = b.literal(Literal::positive(x));
        let ly = b.literal(Literal::positive(y));
        let lny = b.literal(Literal::negative(y));
        let li = b.literal(Literal::positive(i));
        let c1 = b.or(lx, ly);
        let c2 = b.or(lny, li);
        let root = b.and(c1, c2);
        let circuit = b.finish(root);
        let lx_id = circuit.literal_leaves(Literal::positive(x));
        let ly_id = circuit.literal_leaves(Literal::positive(y));
        let lny_id = circuit.literal_leaves(Literal::negative(y));
        let spec =
            Spec::new(circuit, [i].into(), vec![x, y], BTreeSet::new()).unwrap();
        let sequence = LeafSequence::new(vec![lx_id, ly_id, lny_id]);
        assert_eq!(
            check_saunf(&spec, &sequence, &oracle).unwrap(),
            SaunfVerdict::Pass
        );
        let witness =
            SaunfWitness::new_unchecked(spec.clone(), Certificate::Sequence(sequence));
        let (vector, trace) = sk_gen(&witness, &oracle).unwrap();
        assert!(matches!(trace.levels[0], TraceLevel::Step { .. }));
        assert!(matches!(trace.levels[1], TraceLevel::Skipped { set_index: 1 }));
        assert!(matches!(trace.levels[2], TraceLevel::Step { .. }));
        assert_eq!(vector.aux_registry().values().copied().collect::<Vec<_>>(), vec![1, 3]);
        assert!(verify_skolem(&spec, &vector, &oracle).unwrap());
        assert!(exhaustive_ok(&spec, &vector));
    }

    #[test]
    fn self_substitute_examples() {
        let mut b = CircuitBuilder::new();
        let l = b.literal(Literal::positive(VarId(2)));
        let single = b.finish(l);
        let empty = SkolemVector::constant_false(&[], BTreeSet::new());
        let out = self_substitute(&single, Literal::positive(VarId(2)), &empty).unwrap();
        assert_eq!(out.as_constant(), Some(true));

        // E independent of ℓ: result ≡ E with the cover substituted.
        let mut b = CircuitBuilder::new();
        let yl = b.literal(Literal::positive(VarId(3)));
        let il = b.literal(Literal::positive(VarId(1)));
        let e = b.or(yl, il);
        let e = b.finish(e);
        let mut arena = FuncArena::new();
        let ni = arena.leaf(Literal::negative(VarId(1)));
        let psi = SkolemVector::from_functions(
            arena,
            vec![(VarId(3), ni)],
            [VarId(1)].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let out = self_substitute(&e, Literal::positive(VarId(2)), &psi).unwrap();
        assert!(naive::tautology(&out), "¬i ∨ i is a tautology");

        // Uncovered variable errors.
        let bare = SkolemVector::constant_false(&[], BTreeSet::new());
        assert!(matches!(
            self_substitute(&e, Literal::positive(VarId(2)), &bare),
            Err(SynthesisError::UncoveredVariable(v)) if v == VarId(3) || v == VarId(1)
        ));
    }

    #[test]
    fn reverse_construction_on_worked_example() {
        let fig = fixtures::fig1();
        let oracle = Oracle::internal();
        let mut arena = FuncArena::new();
        let ni = arena.leaf(Literal::negative(fig.i));
        let psi = SkolemVector::from_functions(
            arena,
            vec![(fig.x1, ni), (fig.x2, ni)],
            [fig.i].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let (witness, report) = saunf_from_skolem(&fig.spec, &psi, &oracle).unwrap();
        assert!(report.within_bound(), "{report:?}");
        assert!(oracle
            .check_equivalent(fig.spec.circuit(), witness.spec().circuit())
            .unwrap());
        assert_eq!(witness.verify(&oracle).unwrap(), SaunfVerdict::Pass);
        let seq = witness.certificate().sequence().unwrap();
        assert_eq!(seq.len(), 4, "two singleton sets per output");

        // An invalid vector is refused.
        let mut arena = FuncArena::new();
        let pi = arena.leaf(Literal::positive(fig.i));
        let bad = SkolemVector::from_functions(
            arena,
            vec![(fig.x1, pi), (fig.x2, pi)],
            [fig.i].into(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(matches!(
            saunf_from_skolem(&fig.spec, &bad, &oracle),
            Err(SynthesisError::InvalidSkolemVector)
        ));
    }

    #[test]
    fn reverse_construction_degenerate_cases() {
        let oracle = Oracle::internal();

        // G ≡ ⊤ with an arbitrary constant vector: H ≡ ⊤.
        let spec = Spec::new(
            Circuit::constant(true),
            [VarId(1)].into(),
            vec![VarId(2)],
            BTreeSet::new(),
        )
        .unwrap();
        let psi = SkolemVector::constant_false(&[VarId(2)], [VarId(1)].into());
        let (witness, report) = saunf_from_skolem(&spec, &psi, &oracle).unwrap();
        assert!(naive::tautology(witness.spec().circuit()));
        assert!(report.within_bound());
        assert_eq!(witness.verify(&oracle).unwrap(), SaunfVerdict::Pass);

        // Single output x, spec ¬x, ψ = ⊥: H ≡ ¬x, membership passes.
        let mut b = CircuitBuilder::new();
        let nx = b.literal(Literal::negative(VarId(2)));
        let c = b.finish(nx);
        let spec =
            Spec::new(c.clone(), [VarId(1)].into(), vec![VarId(2)], BTreeSet::new()).unwrap();
        let psi = SkolemVector::constant_false(&[VarId(2)], [VarId(1)].into());
        let (witness, report) = saunf_from_skolem(&spec, &psi, &oracle).unwrap();
        assert!(naive::equivalent(witness.spec().circuit(), &c));
        assert!(report.within_bound());
        assert_eq!(witness.verify(&oracle).unwrap(), SaunfVerdict::Pass);

        // No outputs at all: the spec comes back with the independence
        // certificate.
        let spec = Spec::new(
            Circuit::constant(true),
            [VarId(1)].into(),
            Vec::new(),
            BTreeSet::new(),
        )
        .unwrap();
        let psi = SkolemVector::constant_false(&[], [VarId(1)].into());
        let (witness, _) = saunf_from_skolem(&spec, &psi, &oracle).unwrap();
        assert!(matches!(witness.certificate(), Certificate::Independent));
    }

    /// Random circuits in which every output appears in a single
    /// polarity, so a witness always exists structurally: the full
    /// pipeline must verify, match the exhaustive definition, round-trip
    /// through the reverse construction, and stay within the recorded
    /// size constant.
    #[test]
    fn end_to_end_on_single_polarity_corpus() {
        let oracle = Oracle::internal();
        let mut rng = StdRng::seed_from_u64(0xc0de);
        let mut ran = 0;
        for _ in 0..120 {
            let num_vars = rng.random_range(2..=5u32);
            let split = rng.random_range(1..num_vars);
            let polarity: Vec<bool> = (0..=num_vars).map(|_| rng.random_bool(0.5)).collect();
            let mut b = CircuitBuilder::new();
            let mut pool = Vec::new();
            // Every output occurs at least once, always in its chosen
            // polarity, so a witness is guaranteed to exist.
            for v in split + 1..=num_vars {
                pool.push(b.literal(Literal { var: VarId(v), negated: polarity[v as usize] }));
            }
            for _ in 0..rng.random_range(3..=10usize) {
                let v = rng.random_range(1..=num_vars);
                let negated = if v > split {
                    polarity[v as usize]
                } else {
                    rng.random_bool(0.5)
                };
                pool.push(b.literal(Literal { var: VarId(v), negated }));
            }
            while pool.len() > 1 {
                let a = pool.remove(rng.random_range(0..pool.len()));
                let c = pool.remove(rng.random_range(0..pool.len()));
                pool.push(if rng.random_bool(0.5) { b.and(a, c) } else { b.or(a, c) });
            }
            let circuit = b.finish(pool[0]);
            let inputs: BTreeSet<VarId> = (1..=split).map(VarId).collect();
            let outputs: Vec<VarId> = (split + 1..=num_vars).map(VarId).collect();
            let spec = Spec::new(circuit, inputs, outputs, BTreeSet::new()).unwrap();
            let Some(sequence) = single_polarity_witness(&spec, &oracle).unwrap() else {
                panic!("single-polarity construction must always yield a witness here");
            };
            ran += 1;
            let k = sequence.len();
            let witness =
                SaunfWitness::new_unchecked(spec.clone(), Certificate::Sequence(sequence));
            let (vector, _) = sk_gen(&witness, &oracle).unwrap();
            assert!(verify_skolem(&spec, &vector, &oracle).unwrap());
            assert!(exhaustive_ok(&spec, &vector), "on {spec:?}");
            assert!(
                vector.shared_size()
                    <= WIRING_CONSTANT * k.max(1).pow(2) * spec.circuit().len(),
                "size constant violated: {} vs k={k} |G|={}",
                vector.shared_size(),
                spec.circuit().len()
            );

            // Round trip: the reverse construction's witness synthesizes
            // again, and the regenerated vector solves the original spec
            // (the constructed circuit is equivalent to it).
            let (back, report) = saunf_from_skolem(&spec, &vector, &oracle).unwrap();
            assert!(report.within_bound(), "{report:?}");
            assert_eq!(back.verify(&oracle).unwrap(), SaunfVerdict::Pass);
            assert!(oracle
                .check_equivalent(spec.circuit(), back.spec().circuit())
                .unwrap());
            let (vector2, _) = sk_gen_trusted(&back).unwrap();
            assert!(verify_skolem(back.spec(), &vector2, &oracle).unwrap());
            assert!(verify_skolem(&spec, &vector2, &oracle).unwrap());
        }
        assert_eq!(ran, 120);
    }

    /// The auxiliary-introduction lemma behind the gadget: tagging a
    /// literal's leaves with p and the opposite literal's leaves with
    /// ¬p preserves the specification up to projection of p — both
    /// directions checked by enumeration.
    #[test]
    fn gadget_is_equisynthesizable_under_projection() {
        let mut rng = StdRng::seed_from_u64(0x9ad9e7);
        let mut exercised = 0;
        for _ in 0..80 {
            let num_vars = rng.random_range(2..=4u32);
            let mut b = CircuitBuilder::new();
            let mut pool = Vec::new();
            for _ in 0..rng.random_range(3..=8usize) {
                let v = rng.random_range(1..=num_vars);
                pool.push(b.literal(Literal { var: VarId(v), negated: rng.random_bool(0.5) }));
            }
            while pool.len() > 1 {
                let a = pool.remove(rng.random_range(0..pool.len()));
                let c = pool.remove(rng.random_range(0..pool.len()));
                pool.push(if rng.random_bool(0.5) { b.and(a, c) } else { b.or(a, c) });
            }
            let g = b.finish(pool[0]);
            // Prefer a variable present in both polarities so the
            // gadget pair actually fires on most rounds.
            let candidates: Vec<VarId> = (1..=num_vars)
                .map(VarId)
                .filter(|&v| {
                    !g.literal_leaves(Literal::positive(v)).is_empty()
                        && !g.literal_leaves(Literal::negative(v)).is_empty()
                })
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let lit = Literal {
                var: candidates[rng.random_range(0..candidates.len())],
                negated: rng.random_bool(0.5),
            };
            let pos = g.literal_leaves(lit);
            let neg = g.literal_leaves(!lit);
            exercised += 1;
            let p = VarId(num_vars + 1);
            let (e1, _) = g.gadget_conjoin(&pos, Literal::positive(p)).unwrap();
            let (e, _) = e1.gadget_conjoin(&neg, Literal::negative(p)).unwrap();

            for sigma in naive::assignments_over(&g.vars()) {
                let original = g.evaluate(&sigma);
                let mut with_p = sigma.clone();
                with_p.insert(p, false);
                let e_false = e.evaluate(&with_p);
                with_p.insert(p, true);
                let e_true = e.evaluate(&with_p);
                // Forward: G ⇒ ∃p E. Backward: every p value of E ⇒ G.
                assert!(!original || e_false || e_true, "forward direction");
                assert!((!e_false && !e_true) || original, "backward direction");
            }
        }
        assert!(exercised >= 40, "only {exercised} gadget rounds exercised");
    }

    /// Verification is semantic, not structural: a vector expressed
    /// through a raw negation-normalized circuit agrees with the
    /// arena-built one.
    #[test]
    fn verification_accepts_equivalent_presentations() {
        let fig = fixtures::fig1();
        let oracle = Oracle::internal();
        // ¬i presented as ¬(i ∨ ⊥) through the raw builder.
        let mut raw = RawBuilder::new();
        let i = raw.literal(Literal::positive(fig.i));
        let f = raw.constant(false);
        let or = raw.or(i, f);
        let n = raw.not(or);
        let circuit = raw.negation_normalize(n);
        let mut arena = FuncArena::new();
        let f = fold_circuit(
            &circuit,
            None,
            &BTreeMap::new(),
            &[fig.i].into(),
            &mut arena,
        )
        .unwrap();
        let psi = SkolemVector::from_functions(
            arena,
            vec![(fig.x1, f), (fig.x2, f)],
            [fig.i].into(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(verify_skolem(&fig.spec, &psi, &oracle).unwrap());
    }
}
