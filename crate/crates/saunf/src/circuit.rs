//! Immutable NNF circuit DAGs: construction, evaluation, relabeling,
//! cofactoring, constant propagation, and the leaf-gadget transform.
//!
//! A circuit is a rooted DAG whose internal nodes are binary `AND`/`OR`
//! gates and whose leaves carry either a literal or a constant; negation
//! appears only inside leaf labels (negation normal form). Two properties
//! are load-bearing for everything built on top:
//!
//! * **Stable leaf identity.** Leaves are never merged, even when they
//!   carry identical labels. Every leaf occurrence has a [`LeafId`] that
//!   survives relabeling, and simplification reports exactly which leaves
//!   it absorbed. Witness sequences are sets of leaf ids, so every
//!   transform must say which leaves it keeps, replaces, or drops.
//! * **Topological storage.** Nodes are stored children-before-parents,
//!   so evaluation and rewriting are single ascending loops, and the
//!   builder makes cycles unrepresentable.
//!
//! Internal gates are hash-consed — asking the builder twice for
//! `AND(a, b)` over the same operands yields one node — but leaves are
//! deliberately exempt from consing.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// A Boolean variable, identified by a number (positive in all file formats).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A variable or its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: VarId,
    pub negated: bool,
}

impl Literal {
    pub fn positive(var: VarId) -> Self {
        Literal { var, negated: false }
    }

    pub fn negative(var: VarId) -> Self {
        Literal { var, negated: true }
    }

    /// Value of this literal when its variable has the given value.
    pub fn eval(&self, var_value: bool) -> bool {
        var_value ^ self.negated
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal { var: self.var, negated: !self.negated }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬{}", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

/// What a leaf carries: a literal, or a constant ⊤/⊥.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Lit(Literal),
    Const(bool),
}

impl Label {
    pub fn literal(&self) -> Option<Literal> {
        match self {
            Label::Lit(l) => Some(*l),
            Label::Const(_) => None,
        }
    }

    pub fn var(&self) -> Option<VarId> {
        self.literal().map(|l| l.var)
    }
}

impl From<Literal> for Label {
    fn from(l: Literal) -> Label {
        Label::Lit(l)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Lit(l) => write!(f, "{l}"),
            Label::Const(true) => write!(f, "⊤"),
            Label::Const(false) => write!(f, "⊥"),
        }
    }
}

/// Stable identity of one leaf occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafId(pub u32);

impl fmt::Display for LeafId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

/// A set of leaves, conventionally literal-consistent: every member
/// labeled by one shared literal. Consistency is checked where it
/// matters (realizability and membership checks), not by the type.
pub type LeafSet = BTreeSet<LeafId>;

/// Index of a node within one circuit's store.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gate {
    And,
    Or,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf { id: LeafId, label: Label },
    Gate { gate: Gate, lhs: NodeId, rhs: NodeId },
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("leaf {0} does not exist in this circuit")]
    UnknownLeaf(LeafId),
    #[error("leaf set is not literal-consistent: {a} is labeled {a_label}, {b} is labeled {b_label}")]
    MixedLeafSet { a: LeafId, a_label: Label, b: LeafId, b_label: Label },
    #[error("leaf {0} carries a constant label and cannot join a literal-consistent set")]
    ConstLeafInSet(LeafId),
    #[error("variable {0} has no value in the assignment")]
    UnassignedVar(VarId),
}

/// Total or partial assignment of variables.
pub type Assignment = BTreeMap<VarId, bool>;

/// Leaves eliminated by [`Circuit::cprop_simp`]. Surviving leaves keep
/// their original ids, so the survivor map is the identity on the
/// complement of `absorbed`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplifyInfo {
    pub absorbed: BTreeSet<LeafId>,
}

/// The two fresh leaves a gadget introduced for one original leaf:
/// the replacement carrying the original literal, and the tag leaf
/// carrying the auxiliary literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetLeaves {
    pub lit_leaf: LeafId,
    pub tag_leaf: LeafId,
}

/// A rooted NNF circuit. Construct via [`CircuitBuilder`]; all transforms
/// return new circuits and leave the original untouched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    nodes: Vec<Node>,
    root: NodeId,
    leaf_nodes: BTreeMap<LeafId, NodeId>,
    next_leaf: u32,
}

impl Circuit {
    /// Single-leaf constant circuit.
    pub fn constant(value: bool) -> Circuit {
        let mut b = CircuitBuilder::new();
        let n = b.constant(value);
        b.finish(n)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, n: NodeId) -> &Node {
        &self.nodes[n.index()]
    }

    /// All nodes in topological order (children before parents).
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Total node count — the size measure `|G|` used by all bounds.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a circuit always has at least its root node
    }

    pub fn gate_count(&self) -> usize {
        self.nodes.len() - self.leaf_nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_nodes.len()
    }

    /// First leaf id guaranteed fresh with respect to every leaf this
    /// circuit has ever contained (absorbed ids are never reused).
    pub fn next_leaf_id(&self) -> LeafId {
        LeafId(self.next_leaf)
    }

    pub fn leaves(&self) -> impl Iterator<Item = (LeafId, Label)> + '_ {
        self.leaf_nodes.iter().map(move |(&id, &n)| match self.nodes[n.index()] {
            Node::Leaf { label, .. } => (id, label),
            Node::Gate { .. } => unreachable!("leaf map points at a gate"),
        })
    }

    pub fn leaf_label(&self, id: LeafId) -> Option<Label> {
        let n = self.leaf_nodes.get(&id)?;
        match self.nodes[n.index()] {
            Node::Leaf { label, .. } => Some(label),
            Node::Gate { .. } => unreachable!("leaf map points at a gate"),
        }
    }

    pub fn leaf_node(&self, id: LeafId) -> Option<NodeId> {
        self.leaf_nodes.get(&id).copied()
    }

    /// Structural check: is the whole circuit a single constant leaf?
    pub fn as_constant(&self) -> Option<bool> {
        match self.nodes[self.root.index()] {
            Node::Leaf { label: Label::Const(b), .. } => Some(b),
            _ => None,
        }
    }

    /// Variables labeling at least one leaf.
    pub fn vars(&self) -> BTreeSet<VarId> {
        self.leaves().filter_map(|(_, label)| label.var()).collect()
    }

    /// Leaves labeled exactly `lit`.
    pub fn literal_leaves(&self, lit: Literal) -> BTreeSet<LeafId> {
        self.leaves()
            .filter(|(_, label)| label.literal() == Some(lit))
            .map(|(id, _)| id)
            .collect()
    }

    /// Leaves labeled by either polarity of `var`.
    pub fn var_leaves(&self, var: VarId) -> BTreeSet<LeafId> {
        self.leaves()
            .filter(|(_, label)| label.var() == Some(var))
            .map(|(id, _)| id)
            .collect()
    }

    pub fn has_literal_leaf(&self, lit: Literal) -> bool {
        self.leaves().any(|(_, label)| label.literal() == Some(lit))
    }

    pub fn try_evaluate(&self, sigma: &Assignment) -> Result<bool, CircuitError> {
        let mut vals = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::Leaf { label: Label::Const(b), .. } => b,
                Node::Leaf { label: Label::Lit(l), .. } => {
                    let var_value =
                        *sigma.get(&l.var).ok_or(CircuitError::UnassignedVar(l.var))?;
                    l.eval(var_value)
                }
                Node::Gate { gate, lhs, rhs } => {
                    let (a, b) = (vals[lhs.index()], vals[rhs.index()]);
                    match gate {
                        Gate::And => a && b,
                        Gate::Or => a || b,
                    }
                }
            };
            vals.push(v);
        }
        Ok(vals[self.root.index()])
    }

    /// Value of the circuit under `sigma`, which must cover every leaf
    /// variable. Panics on a missing variable; use [`Circuit::try_evaluate`]
    /// for untrusted assignments.
    pub fn evaluate(&self, sigma: &Assignment) -> bool {
        match self.try_evaluate(sigma) {
            Ok(v) => v,
            Err(e) => panic!("evaluate: {e}"),
        }
    }

    /// New circuit with the listed leaves relabeled; identical DAG shape,
    /// identical leaf ids.
    pub fn relabel_leaves(
        &self,
        map: &BTreeMap<LeafId, Label>,
    ) -> Result<Circuit, CircuitError> {
        for id in map.keys() {
            if !self.leaf_nodes.contains_key(id) {
                return Err(CircuitError::UnknownLeaf(*id));
            }
        }
        let mut out = self.clone();
        for (&id, &label) in map {
            let n = out.leaf_nodes[&id];
            if let Node::Leaf { label: slot, .. } = &mut out.nodes[n.index()] {
                *slot = label;
            }
        }
        Ok(out)
    }

    /// New circuit where every leaf labeled by a key of `map` carries the
    /// mapped label instead. Leaf ids are unchanged.
    pub fn relabel_literals(&self, map: &BTreeMap<Literal, Label>) -> Circuit {
        let mut out = self.clone();
        for node in &mut out.nodes {
            if let Node::Leaf { label: Label::Lit(l), .. } = node {
                if let Some(&new_label) = map.get(l) {
                    if let Node::Leaf { label: slot, .. } = node {
                        *slot = new_label;
                    }
                }
            }
        }
        out
    }

    /// `G` with every `lit`-leaf relabeled to the constant `pos` and every
    /// `¬lit`-leaf relabeled to the constant `neg`.
    pub fn literal_cofactor(&self, lit: Literal, pos: bool, neg: bool) -> Circuit {
        let mut map = BTreeMap::new();
        map.insert(lit, Label::Const(pos));
        map.insert(!lit, Label::Const(neg));
        self.relabel_literals(&map)
    }

    /// Substitute a constant for a variable: `v`-leaves become `value`,
    /// `¬v`-leaves become `!value`.
    pub fn assign_var(&self, var: VarId, value: bool) -> Circuit {
        self.literal_cofactor(Literal::positive(var), value, !value)
    }

    /// Relabel every leaf over any of `vars` (both polarities) to ⊤.
    pub fn relabel_vars_true(&self, vars: &BTreeSet<VarId>) -> Circuit {
        let mut out = self.clone();
        for node in &mut out.nodes {
            if let Node::Leaf { label, .. } = node {
                if label.var().is_some_and(|v| vars.contains(&v)) {
                    *label = Label::Const(true);
                }
            }
        }
        out
    }

    /// Constant propagation: folds `⊤∧c→c`, `⊥∧c→⊥`, `⊤∨c→⊤`, `⊥∨c→c`
    /// to a fixed point and drops nodes no longer reachable from the root.
    /// Only these constant rules are applied — no other rewriting — so the
    /// result commutes with any relabeling of the surviving leaves, which
    /// the synthesis pipeline depends on. Surviving leaves keep their ids;
    /// eliminated ones are reported as absorbed. If the root folds to a
    /// constant the result is a fresh single-leaf circuit and every
    /// original leaf is absorbed.
    pub fn cprop_simp(&self) -> (Circuit, SimplifyInfo) {
        #[derive(Clone, Copy)]
        enum Res {
            Const(bool),
            Keep(NodeId), // fully-forwarded surviving representative
        }

        let mut res: Vec<Res> = Vec::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let r = match *node {
                Node::Leaf { label: Label::Const(b), .. } => Res::Const(b),
                Node::Leaf { .. } => Res::Keep(NodeId(i as u32)),
                Node::Gate { gate, lhs, rhs } => {
                    let (a, b) = (res[lhs.index()], res[rhs.index()]);
                    match (gate, a, b) {
                        (Gate::And, Res::Const(false), _)
                        | (Gate::And, _, Res::Const(false)) => Res::Const(false),
                        (Gate::And, Res::Const(true), x)
                        | (Gate::And, x, Res::Const(true)) => x,
                        (Gate::Or, Res::Const(true), _)
                        | (Gate::Or, _, Res::Const(true)) => Res::Const(true),
                        (Gate::Or, Res::Const(false), x)
                        | (Gate::Or, x, Res::Const(false)) => x,
                        (_, Res::Keep(_), Res::Keep(_)) => Res::Keep(NodeId(i as u32)),
                    }
                }
            };
            res.push(r);
        }

        let all_leaves: BTreeSet<LeafId> = self.leaf_nodes.keys().copied().collect();
        let rep = match res[self.root.index()] {
            Res::Const(b) => {
                let mut builder = CircuitBuilder::starting_at_leaf(self.next_leaf);
                let n = builder.constant(b);
                return (builder.finish(n), SimplifyInfo { absorbed: all_leaves });
            }
            Res::Keep(n) => n,
        };

        // Reachability over the folded structure. A surviving gate's
        // effective children are the representatives of its original
        // children, which are earlier in topological order, so one
        // descending pass suffices.
        let mut marked = vec![false; self.nodes.len()];
        marked[rep.index()] = true;
        for i in (0..self.nodes.len()).rev() {
            if !marked[i] {
                continue;
            }
            if let Node::Gate { lhs, rhs, .. } = self.nodes[i] {
                for child in [lhs, rhs] {
                    if let Res::Keep(c) = res[child.index()] {
                        marked[c.index()] = true;
                    }
                }
            }
        }

        let mut builder = CircuitBuilder::starting_at_leaf(self.next_leaf);
        let mut map: Vec<Option<NodeId>> = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if !marked[i] {
                continue;
            }
            let new_node = match *node {
                Node::Leaf { id, label } => builder.leaf_with_id(id, label),
                Node::Gate { gate, lhs, rhs } => {
                    let resolve = |c: NodeId| match res[c.index()] {
                        Res::Keep(n) => map[n.index()].expect("child built before parent"),
                        Res::Const(_) => unreachable!("marked gate with constant child"),
                    };
                    let (a, b) = (resolve(lhs), resolve(rhs));
                    builder.gate(gate, a, b)
                }
            };
            map[i] = Some(new_node);
        }
        let root = map[rep.index()].expect("root representative built");
        let simplified = builder.finish(root);
        let absorbed = all_leaves
            .iter()
            .copied()
            .filter(|id| simplified.leaf_label(*id).is_none())
            .collect();
        (simplified, SimplifyInfo { absorbed })
    }

    /// Replace each target leaf (all sharing one literal label ℓ) by the
    /// conjunction of a fresh ℓ-leaf and a fresh `tag`-leaf. The returned
    /// map records, per original leaf, the two fresh leaves of its gadget;
    /// the original id is retired. Non-target leaves keep their ids.
    pub fn gadget_conjoin(
        &self,
        targets: &BTreeSet<LeafId>,
        tag: Literal,
    ) -> Result<(Circuit, BTreeMap<LeafId, GadgetLeaves>), CircuitError> {
        let mut common: Option<(LeafId, Literal)> = None;
        for &id in targets {
            let label = self.leaf_label(id).ok_or(CircuitError::UnknownLeaf(id))?;
            let lit = match label {
                Label::Lit(l) => l,
                Label::Const(_) => return Err(CircuitError::ConstLeafInSet(id)),
            };
            match common {
                None => common = Some((id, lit)),
                Some((first, l0)) if l0 != lit => {
                    return Err(CircuitError::MixedLeafSet {
                        a: first,
                        a_label: Label::Lit(l0),
                        b: id,
                        b_label: Label::Lit(lit),
                    })
                }
                Some(_) => {}
            }
        }

        let mut builder = CircuitBuilder::starting_at_leaf(self.next_leaf);
        let mut gadgets = BTreeMap::new();
        let mut map: Vec<NodeId> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let new_node = match *node {
                Node::Leaf { id, label } => {
                    if targets.contains(&id) {
                        let lit_node = builder.leaf(label);
                        let tag_node = builder.literal(tag);
                        let lit_leaf = builder.leaf_id(lit_node).unwrap();
                        let tag_leaf = builder.leaf_id(tag_node).unwrap();
                        gadgets.insert(id, GadgetLeaves { lit_leaf, tag_leaf });
                        builder.and(lit_node, tag_node)
                    } else {
                        builder.leaf_with_id(id, label)
                    }
                }
                Node::Gate { gate, lhs, rhs } => {
                    let (a, b) = (map[lhs.index()], map[rhs.index()]);
                    builder.gate(gate, a, b)
                }
            };
            map.push(new_node);
        }
        let root = map[self.root.index()];
        Ok((builder.finish(root), gadgets))
    }

    /// Rename every negated output literal to a fresh positive variable:
    /// `¬x`-leaves become `x'`-leaves. Only outputs with at least one
    /// negated leaf get a fresh variable; the renaming map is returned.
    /// Fresh variable numbers start after every variable of the circuit
    /// and of `outputs`.
    pub fn positive_form(
        &self,
        outputs: &BTreeSet<VarId>,
    ) -> (Circuit, BTreeMap<VarId, VarId>) {
        let max_var = self
            .vars()
            .iter()
            .chain(outputs.iter())
            .map(|v| v.0)
            .max()
            .unwrap_or(0);
        let mut fresh = max_var + 1;
        let mut renaming = BTreeMap::new();
        let mut relabel = BTreeMap::new();
        let negated_vars: BTreeSet<VarId> = self
            .leaves()
            .filter_map(|(_, label)| label.literal())
            .filter(|l| l.negated && outputs.contains(&l.var))
            .map(|l| l.var)
            .collect();
        for var in negated_vars {
            let prime = VarId(fresh);
            fresh += 1;
            renaming.insert(var, prime);
            relabel.insert(
                Literal::negative(var),
                Label::Lit(Literal::positive(prime)),
            );
        }
        (self.relabel_literals(&relabel), renaming)
    }
}

/// The coupling circuit for a positive-form renaming:
/// `∧ over pairs (x, x') of ((x'∧¬x) ∨ (¬x'∧x))`, i.e. each fresh
/// variable is forced to the negation of its original. An empty renaming
/// yields the constant-⊤ circuit.
pub fn polarity_constraint(renaming: &BTreeMap<VarId, VarId>) -> Circuit {
    let mut b = CircuitBuilder::new();
    let mut conjuncts = Vec::new();
    for (&var, &prime) in renaming {
        let x = Literal::positive(var);
        let xp = Literal::positive(prime);
        let (x_n, nx_n) = (b.literal(x), b.literal(!x));
        let (xp_n, nxp_n) = (b.literal(xp), b.literal(!xp));
        let left = b.and(xp_n, nx_n);
        let right = b.and(nxp_n, x_n);
        conjuncts.push(b.or(left, right));
    }
    let root = b.and_all(&conjuncts);
    b.finish(root)
}

/// Builder for [`Circuit`]. Nodes are appended children-first; internal
/// gates are consed, leaves never are. `finish` prunes nodes unreachable
/// from the chosen root (leaf ids of surviving leaves are untouched).
pub struct CircuitBuilder {
    nodes: Vec<Node>,
    gate_cache: HashMap<(Gate, NodeId, NodeId), NodeId>,
    leaf_nodes: BTreeMap<LeafId, NodeId>,
    next_leaf: u32,
}

impl Default for CircuitBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::starting_at_leaf(0)
    }

    /// Builder whose fresh leaf ids start at `first` — used by transforms
    /// that must keep original ids and still mint non-colliding new ones.
    fn starting_at_leaf(first: u32) -> Self {
        CircuitBuilder {
            nodes: Vec::new(),
            gate_cache: HashMap::new(),
            leaf_nodes: BTreeMap::new(),
            next_leaf: first,
        }
    }

    /// Fresh leaf with a fresh id.
    pub fn leaf(&mut self, label: Label) -> NodeId {
        let id = LeafId(self.next_leaf);
        self.next_leaf += 1;
        self.insert_leaf(id, label)
    }

    /// Leaf with a caller-chosen id (transforms preserving identity).
    fn leaf_with_id(&mut self, id: LeafId, label: Label) -> NodeId {
        assert!(
            !self.leaf_nodes.contains_key(&id),
            "duplicate leaf id {id}"
        );
        self.next_leaf = self.next_leaf.max(id.0 + 1);
        self.insert_leaf(id, label)
    }

    fn insert_leaf(&mut self, id: LeafId, label: Label) -> NodeId {
        let n = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node::Leaf { id, label });
        self.leaf_nodes.insert(id, n);
        n
    }

    pub fn literal(&mut self, lit: Literal) -> NodeId {
        self.leaf(Label::Lit(lit))
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.leaf(Label::Const(value))
    }

    /// Id of the leaf at `node`, if `node` is a leaf.
    pub fn leaf_id(&self, node: NodeId) -> Option<LeafId> {
        match self.nodes.get(node.index())? {
            Node::Leaf { id, .. } => Some(*id),
            Node::Gate { .. } => None,
        }
    }

    pub fn gate(&mut self, gate: Gate, lhs: NodeId, rhs: NodeId) -> NodeId {
        assert!(lhs.index() < self.nodes.len() && rhs.index() < self.nodes.len());
        *self.gate_cache.entry((gate, lhs, rhs)).or_insert_with(|| {
            let n = NodeId(self.nodes.len() as u32);
            self.nodes.push(Node::Gate { gate, lhs, rhs });
            n
        })
    }

    pub fn and(&mut self, lhs: NodeId, rhs: NodeId) -> NodeId {
        self.gate(Gate::And, lhs, rhs)
    }

    pub fn or(&mut self, lhs: NodeId, rhs: NodeId) -> NodeId {
        self.gate(Gate::Or, lhs, rhs)
    }

    /// Balanced conjunction; the empty conjunction is a ⊤ leaf.
    pub fn and_all(&mut self, operands: &[NodeId]) -> NodeId {
        self.fold_balanced(Gate::And, operands, true)
    }

    /// Balanced disjunction; the empty disjunction is a ⊥ leaf.
    pub fn or_all(&mut self, operands: &[NodeId]) -> NodeId {
        self.fold_balanced(Gate::Or, operands, false)
    }

    fn fold_balanced(&mut self, gate: Gate, operands: &[NodeId], empty: bool) -> NodeId {
        if operands.is_empty() {
            return self.constant(empty);
        }
        let mut level: Vec<NodeId> = operands.to_vec();
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(match pair {
                    [a, b] => self.gate(gate, *a, *b),
                    [a] => *a,
                    _ => unreachable!(),
                });
            }
            level = next;
        }
        level[0]
    }

    /// Copy another circuit into this builder. Every leaf gets a fresh id
    /// (the returned map records old → new); gates go through consing, so
    /// structure already present is shared.
    pub fn import(&mut self, other: &Circuit) -> (NodeId, BTreeMap<LeafId, LeafId>) {
        let mut leaf_map = BTreeMap::new();
        let mut map: Vec<NodeId> = Vec::with_capacity(other.nodes.len());
        for node in &other.nodes {
            let new_node = match *node {
                Node::Leaf { id, label } => {
                    let n = self.leaf(label);
                    leaf_map.insert(id, self.leaf_id(n).unwrap());
                    n
                }
                Node::Gate { gate, lhs, rhs } => {
                    let (a, b) = (map[lhs.index()], map[rhs.index()]);
                    self.gate(gate, a, b)
                }
            };
            map.push(new_node);
        }
        (map[other.root.index()], leaf_map)
    }

    /// Finish with the given root. Nodes unreachable from the root are
    /// dropped; surviving leaves keep their ids.
    pub fn finish(self, root: NodeId) -> Circuit {
        assert!(root.index() < self.nodes.len(), "root out of range");
        let mut marked = vec![false; self.nodes.len()];
        marked[root.index()] = true;
        for i in (0..self.nodes.len()).rev() {
            if !marked[i] {
                continue;
            }
            if let Node::Gate { lhs, rhs, .. } = self.nodes[i] {
                marked[lhs.index()] = true;
                marked[rhs.index()] = true;
            }
        }

        let mut nodes = Vec::new();
        let mut leaf_nodes = BTreeMap::new();
        let mut map: Vec<Option<NodeId>> = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if !marked[i] {
                continue;
            }
            let n = NodeId(nodes.len() as u32);
            match *node {
                Node::Leaf { id, label } => {
                    nodes.push(Node::Leaf { id, label });
                    leaf_nodes.insert(id, n);
                }
                Node::Gate { gate, lhs, rhs } => {
                    let a = map[lhs.index()].expect("child before parent");
                    let b = map[rhs.index()].expect("child before parent");
                    nodes.push(Node::Gate { gate, lhs: a, rhs: b });
                }
            }
            map[i] = Some(n);
        }
        Circuit {
            nodes,
            root: map[root.index()].unwrap(),
            leaf_nodes,
            next_leaf: self.next_leaf,
        }
    }
}

/// Identity of a node in a [`RawBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawId(u32);

#[derive(Clone, Copy, Debug)]
enum RawNode {
    Leaf(Label),
    Not(RawId),
    Gate(Gate, RawId, RawId),
}

/// Builder for circuits that may contain NOT nodes; `negation_normalize`
/// pushes negations to the leaves by a polarity walk (De Morgan), at most
/// doubling the node count. Children must be created before their
/// parents, so cyclic inputs are unrepresentable by construction.
#[derive(Default)]
pub struct RawBuilder {
    nodes: Vec<RawNode>,
}

impl RawBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: RawNode) -> RawId {
        if let RawNode::Not(c) = node {
            assert!((c.0 as usize) < self.nodes.len());
        }
        if let RawNode::Gate(_, a, b) = node {
            assert!((a.0 as usize) < self.nodes.len() && (b.0 as usize) < self.nodes.len());
        }
        let id = RawId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    pub fn literal(&mut self, lit: Literal) -> RawId {
        self.push(RawNode::Leaf(Label::Lit(lit)))
    }

    pub fn constant(&mut self, value: bool) -> RawId {
        self.push(RawNode::Leaf(Label::Const(value)))
    }

    pub fn not(&mut self, x: RawId) -> RawId {
        self.push(RawNode::Not(x))
    }

    pub fn and(&mut self, a: RawId, b: RawId) -> RawId {
        self.push(RawNode::Gate(Gate::And, a, b))
    }

    pub fn or(&mut self, a: RawId, b: RawId) -> RawId {
        self.push(RawNode::Gate(Gate::Or, a, b))
    }

    /// Evaluate the raw circuit (negation included) under `sigma`.
    pub fn evaluate(&self, root: RawId, sigma: &Assignment) -> bool {
        let mut vals: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                RawNode::Leaf(Label::Const(b)) => b,
                RawNode::Leaf(Label::Lit(l)) => l.eval(sigma[&l.var]),
                RawNode::Not(c) => !vals[c.0 as usize],
                RawNode::Gate(Gate::And, a, b) => vals[a.0 as usize] && vals[b.0 as usize],
                RawNode::Gate(Gate::Or, a, b) => vals[a.0 as usize] || vals[b.0 as usize],
            };
            vals.push(v);
        }
        vals[root.0 as usize]
    }

    /// NNF conversion of the subcircuit rooted at `root`.
    pub fn negation_normalize(&self, root: RawId) -> Circuit {
        // Which (node, polarity) pairs are needed: one descending pass,
        // since children precede parents.
        let n = self.nodes.len();
        let mut needed = vec![[false, false]; n]; // [negative, positive]
        needed[root.0 as usize][1] = true;
        for i in (0..n).rev() {
            for pol in [false, true] {
                if !needed[i][pol as usize] {
                    continue;
                }
                match self.nodes[i] {
                    RawNode::Leaf(_) => {}
                    RawNode::Not(c) => needed[c.0 as usize][!pol as usize] = true,
                    RawNode::Gate(_, a, b) => {
                        needed[a.0 as usize][pol as usize] = true;
                        needed[b.0 as usize][pol as usize] = true;
                    }
                }
            }
        }

        let mut builder = CircuitBuilder::new();
        let mut built: Vec<[Option<NodeId>; 2]> = vec![[None, None]; n];
        for i in 0..n {
            for pol in [false, true] {
                if !needed[i][pol as usize] {
                    continue;
                }
                let node = match self.nodes[i] {
                    RawNode::Leaf(Label::Const(b)) => builder.constant(b == pol),
                    RawNode::Leaf(Label::Lit(l)) => {
                        builder.literal(if pol { l } else { !l })
                    }
                    RawNode::Not(c) => built[c.0 as usize][!pol as usize].unwrap(),
                    RawNode::Gate(gate, a, b) => {
                        // De Morgan: a negated AND becomes an OR of the
                        // negated children, and vice versa.
                        let g = match (gate, pol) {
                            (g, true) => g,
                            (Gate::And, false) => Gate::Or,
                            (Gate::Or, false) => Gate::And,
                        };
                        let (an, bn) = (
                            built[a.0 as usize][pol as usize].unwrap(),
                            built[b.0 as usize][pol as usize].unwrap(),
                        );
                        builder.gate(g, an, bn)
                    }
                };
                built[i][pol as usize] = Some(node);
            }
        }
        builder.finish(built[root.0 as usize][1].unwrap())
    }
}

/// Role of a variable within a [`Spec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarRole {
    Input,
    Output,
    Aux,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("variable {0} is declared as an output more than once")]
    DuplicateOutput(VarId),
    #[error("variable {0} is declared with more than one role")]
    OverlappingRole(VarId),
    #[error("variable {0} labels a leaf but has no declared role")]
    UnclassifiedVar(VarId),
}

/// A relational specification: a circuit together with a partition of its
/// variables into inputs `I`, outputs `X` (order significant — it fixes
/// the order of Skolem vectors and derived witness sequences), and
/// auxiliary parameters. Auxiliaries behave exactly like inputs in every
/// algorithm: synthesized functions may mention them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spec {
    circuit: Circuit,
    inputs: BTreeSet<VarId>,
    outputs: Vec<VarId>,
    aux: BTreeSet<VarId>,
}

impl Spec {
    pub fn new(
        circuit: Circuit,
        inputs: BTreeSet<VarId>,
        outputs: Vec<VarId>,
        aux: BTreeSet<VarId>,
    ) -> Result<Spec, SpecError> {
        let mut output_set = BTreeSet::new();
        for &v in &outputs {
            if !output_set.insert(v) {
                return Err(SpecError::DuplicateOutput(v));
            }
        }
        for &v in &output_set {
            if inputs.contains(&v) || aux.contains(&v) {
                return Err(SpecError::OverlappingRole(v));
            }
        }
        if let Some(&v) = inputs.intersection(&aux).next() {
            return Err(SpecError::OverlappingRole(v));
        }
        for v in circuit.vars() {
            if !inputs.contains(&v) && !output_set.contains(&v) && !aux.contains(&v) {
                return Err(SpecError::UnclassifiedVar(v));
            }
        }
        Ok(Spec { circuit, inputs, outputs, aux })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn inputs(&self) -> &BTreeSet<VarId> {
        &self.inputs
    }

    /// Outputs in declaration order.
    pub fn outputs(&self) -> &[VarId] {
        &self.outputs
    }

    pub fn aux(&self) -> &BTreeSet<VarId> {
        &self.aux
    }

    pub fn output_set(&self) -> BTreeSet<VarId> {
        self.outputs.iter().copied().collect()
    }

    pub fn is_output(&self, v: VarId) -> bool {
        self.outputs.contains(&v)
    }

    /// Variables a Skolem function may mention: inputs plus auxiliaries.
    pub fn parameter_vars(&self) -> BTreeSet<VarId> {
        self.inputs.union(&self.aux).copied().collect()
    }

    pub fn role(&self, v: VarId) -> Option<VarRole> {
        if self.inputs.contains(&v) {
            Some(VarRole::Input)
        } else if self.outputs.contains(&v) {
            Some(VarRole::Output)
        } else if self.aux.contains(&v) {
            Some(VarRole::Aux)
        } else {
            None
        }
    }

    /// Same partition, different circuit; revalidates leaf-var coverage.
    pub fn with_circuit(&self, circuit: Circuit) -> Result<Spec, SpecError> {
        Spec::new(
            circuit,
            self.inputs.clone(),
            self.outputs.clone(),
            self.aux.clone(),
        )
    }
}
