//! Line-based circuit and witness documents.
//!
//! Grammar — one definition per line, `#` starts a comment, blank
//! lines are ignored, and every document begins with `version 1`:
//!
//! ```text
//! version 1
//! var <id> input|output|aux         # declare a variable with a role
//! leaf <name> +<id>|-<id>|T|F       # leaf: literal or constant
//! node <name> AND|OR <ref> <ref>    # binary gate over earlier names
//! root <ref>                        # the root, exactly once
//! seq <k> : {<name>, …} ; … ; {…}   # a k-set leaf sequence
//! independent                       # certificate with no sets
//! ```
//!
//! Names are free-form tokens (no whitespace or `{};,:#`),
//! conventionally `L<i>` for leaves and `N<i>` for gates; leaves and
//! gates share one namespace. Everything is defined before use, so a
//! forward or cyclic reference surfaces as an undefined name at its
//! use site. Variable declaration order is significant: it fixes the
//! output order of the resulting specification. Definitions not
//! reachable from the root are dropped when the circuit is built.
//!
//! A witness document is the same format restricted to `seq` /
//! `independent` lines; its names resolve against a separately parsed
//! circuit document. The `independent` keyword serializes the
//! certificate of a specification whose outputs are semantically
//! unconstrained.
//!
//! Writers emit canonical text: leaves named `L0…` and gates `N0…` in
//! circuit storage order, which reading reproduces exactly — writing
//! a freshly parsed document is byte-identical.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::circuit::{
    Circuit, CircuitBuilder, Gate, Label, LeafId, Literal, Node, NodeId, Spec, VarId,
};
use crate::formats::{strip_comment, FormatError};
use crate::normal_form::{Certificate, LeafSequence};

/// A parsed circuit document: the specification plus any certificate
/// blocks it carried.
#[derive(Debug, Clone)]
pub struct CircuitDocument {
    spec: Spec,
    sequences: Vec<LeafSequence>,
    independent: bool,
    leaf_names: BTreeMap<String, LeafId>,
}

impl CircuitDocument {
    pub fn spec(&self) -> &Spec {
        &self.spec
    }

    pub fn into_spec(self) -> Spec {
        self.spec
    }

    pub fn sequences(&self) -> &[LeafSequence] {
        &self.sequences
    }

    pub fn independent(&self) -> bool {
        self.independent
    }

    /// The certificate the document itself declares: `independent`,
    /// or its single `seq` block. None when the document has no block
    /// (certificates usually travel in a separate witness file).
    pub fn certificate(&self) -> Option<Certificate> {
        if self.independent {
            Some(Certificate::Independent)
        } else if self.sequences.len() == 1 {
            Some(Certificate::Sequence(self.sequences[0].clone()))
        } else {
            None
        }
    }

    /// Resolve a declared leaf name (including names whose leaf was
    /// dropped as unreachable — those fail later, at use).
    pub fn leaf_id(&self, name: &str) -> Option<LeafId> {
        self.leaf_names.get(name).copied()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum NameKind {
    Leaf(LeafId),
    Gate,
}

struct DocParser {
    versioned: bool,
    builder: CircuitBuilder,
    inputs: BTreeSet<VarId>,
    outputs: Vec<VarId>,
    aux: BTreeSet<VarId>,
    declared: BTreeSet<VarId>,
    names: BTreeMap<String, (NodeId, NameKind)>,
    root: Option<NodeId>,
    /// Raw `seq` blocks: line number plus the named sets, resolved
    /// once the circuit exists.
    raw_sequences: Vec<(usize, Vec<Vec<String>>)>,
    independent: bool,
}

pub(crate) fn parse_var_token(token: &str, line: usize) -> Result<VarId, FormatError> {
    match token.parse::<u32>() {
        Ok(n) if n > 0 => Ok(VarId(n)),
        _ => Err(FormatError::parse(
            line,
            format!("`{token}` is not a positive variable number"),
        )),
    }
}

pub(crate) fn check_name(name: &str, line: usize) -> Result<(), FormatError> {
    if name.is_empty() || name.chars().any(|c| "{};,:#".contains(c)) {
        return Err(FormatError::parse(line, format!("invalid name `{name}`")));
    }
    Ok(())
}

pub(crate) fn parse_label(token: &str, line: usize) -> Result<Result<Literal, bool>, FormatError> {
    match token {
        "T" => return Ok(Err(true)),
        "F" => return Ok(Err(false)),
        _ => {}
    }
    let (negated, rest) = match token.split_at_checked(1) {
        Some(("+", rest)) => (false, rest),
        Some(("-", rest)) => (true, rest),
        _ => {
            return Err(FormatError::parse(
                line,
                format!("`{token}` is not a leaf label (+<id>, -<id>, T, or F)"),
            ))
        }
    };
    let var = parse_var_token(rest, line)?;
    Ok(Ok(Literal { var, negated }))
}

/// Parse the sets of a `seq` line: `<k> : {a, b} ; {c} ; …` with the
/// leading `seq` token already removed.
fn parse_seq_sets(rest: &str, line: usize) -> Result<Vec<Vec<String>>, FormatError> {
    let Some((count, body)) = rest.split_once(':') else {
        return Err(FormatError::parse(line, "seq line has no `:`"));
    };
    let declared: usize = count.trim().parse().map_err(|_| {
        FormatError::parse(line, format!("`{}` is not a set count", count.trim()))
    })?;
    let mut sets = Vec::new();
    for part in body.split(';') {
        let part = part.trim();
        let inner = part
            .strip_prefix('{')
            .and_then(|p| p.strip_suffix('}'))
            .ok_or_else(|| {
                FormatError::parse(line, format!("malformed set `{part}` (expected `{{name, …}}`)"))
            })?;
        if inner.trim().is_empty() {
            return Err(FormatError::parse(line, "empty set in leaf sequence"));
        }
        let mut names = Vec::new();
        for name in inner.split(',') {
            let name = name.trim();
            if name.is_empty() {
                return Err(FormatError::parse(line, "empty name in set"));
            }
            names.push(name.to_string());
        }
        sets.push(names);
    }
    if sets.len() != declared {
        return Err(FormatError::parse(
            line,
            format!("seq declares {declared} sets but lists {}", sets.len()),
        ));
    }
    Ok(sets)
}

impl DocParser {
    fn new() -> Self {
        DocParser {
            versioned: false,
            builder: CircuitBuilder::new(),
            inputs: BTreeSet::new(),
            outputs: Vec::new(),
            aux: BTreeSet::new(),
            declared: BTreeSet::new(),
            names: BTreeMap::new(),
            root: None,
            raw_sequences: Vec::new(),
            independent: false,
        }
    }

    fn resolve(&self, name: &str, line: usize) -> Result<NodeId, FormatError> {
        self.names
            .get(name)
            .map(|&(node, _)| node)
            .ok_or_else(|| FormatError::parse(line, format!("reference to undefined name `{name}`")))
    }

    fn define(&mut self, name: &str, node: NodeId, kind: NameKind, line: usize) -> Result<(), FormatError> {
        check_name(name, line)?;
        if self.names.insert(name.to_string(), (node, kind)).is_some() {
            return Err(FormatError::parse(line, format!("duplicate name `{name}`")));
        }
        Ok(())
    }

    fn line(&mut self, line: usize, content: &str) -> Result<(), FormatError> {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let directive = tokens[0];
        if !self.versioned {
            return match tokens.as_slice() {
                ["version", "1"] => {
                    self.versioned = true;
                    Ok(())
                }
                ["version", v] => {
                    Err(FormatError::parse(line, format!("unsupported version `{v}`")))
                }
                _ => Err(FormatError::parse(line, "expected `version 1` as the first line")),
            };
        }
        match directive {
            "version" => Err(FormatError::parse(line, "duplicate version line")),
            "var" => {
                let [_, id, role] = tokens.as_slice() else {
                    return Err(FormatError::parse(line, "expected `var <id> input|output|aux`"));
                };
                let var = parse_var_token(id, line)?;
                if !self.declared.insert(var) {
                    return Err(FormatError::parse(
                        line,
                        format!("variable {} declared twice", var.0),
                    ));
                }
                match *role {
                    "input" => {
                        self.inputs.insert(var);
                    }
                    "output" => self.outputs.push(var),
                    "aux" => {
                        self.aux.insert(var);
                    }
                    other => {
                        return Err(FormatError::parse(
                            line,
                            format!("`{other}` is not a role (input, output, or aux)"),
                        ))
                    }
                }
                Ok(())
            }
            "leaf" => {
                let [_, name, label] = tokens.as_slice() else {
                    return Err(FormatError::parse(line, "expected `leaf <name> <label>`"));
                };
                let node = match parse_label(label, line)? {
                    Ok(lit) => {
                        if !self.declared.contains(&lit.var) {
                            return Err(FormatError::parse(
                                line,
                                format!("leaf references undeclared variable {}", lit.var.0),
                            ));
                        }
                        self.builder.literal(lit)
                    }
                    Err(value) => self.builder.constant(value),
                };
                let id = self.builder.leaf_id(node).expect("just built a leaf");
                self.define(name, node, NameKind::Leaf(id), line)
            }
            "node" => {
                let [_, name, gate, lhs, rhs] = tokens.as_slice() else {
                    return Err(FormatError::parse(
                        line,
                        "expected `node <name> AND|OR <ref> <ref>`",
                    ));
                };
                let gate = match *gate {
                    "AND" => Gate::And,
                    "OR" => Gate::Or,
                    other => {
                        return Err(FormatError::parse(
                            line,
                            format!("`{other}` is not a gate (AND or OR)"),
                        ))
                    }
                };
                let lhs = self.resolve(lhs, line)?;
                let rhs = self.resolve(rhs, line)?;
                let node = self.builder.gate(gate, lhs, rhs);
                self.define(name, node, NameKind::Gate, line)
            }
            "root" => {
                let [_, target] = tokens.as_slice() else {
                    return Err(FormatError::parse(line, "expected `root <ref>`"));
                };
                if self.root.is_some() {
                    return Err(FormatError::parse(line, "duplicate root line"));
                }
                self.root = Some(self.resolve(target, line)?);
                Ok(())
            }
            "seq" => {
                if self.independent {
                    return Err(FormatError::parse(
                        line,
                        "document already declared `independent`",
                    ));
                }
                let rest = content.trim_start().strip_prefix("seq").expect("dispatched on `seq`");
                self.raw_sequences.push((line, parse_seq_sets(rest, line)?));
                Ok(())
            }
            "independent" => {
                if tokens.len() != 1 {
                    return Err(FormatError::parse(line, "expected bare `independent`"));
                }
                if self.independent || !self.raw_sequences.is_empty() {
                    return Err(FormatError::parse(
                        line,
                        "conflicting certificate declarations",
                    ));
                }
                self.independent = true;
                Ok(())
            }
            other => Err(FormatError::parse(line, format!("unknown directive `{other}`"))),
        }
    }

    fn finish(self, end_line: usize) -> Result<CircuitDocument, FormatError> {
        let Some(root) = self.root else {
            return Err(FormatError::parse(end_line, "document ends without a root"));
        };
        let circuit = self.builder.finish(root);
        let leaf_names: BTreeMap<String, LeafId> = self
            .names
            .iter()
            .filter_map(|(name, &(_, kind))| match kind {
                NameKind::Leaf(id) => Some((name.clone(), id)),
                NameKind::Gate => None,
            })
            .collect();
        let mut sequences = Vec::new();
        for (line, raw) in &self.raw_sequences {
            sequences.push(resolve_sequence(raw, *line, &leaf_names, &circuit)?);
        }
        let spec = Spec::new(circuit, self.inputs, self.outputs, self.aux)?;
        Ok(CircuitDocument {
            spec,
            sequences,
            independent: self.independent,
            leaf_names,
        })
    }
}

fn resolve_sequence(
    raw: &[Vec<String>],
    line: usize,
    leaf_names: &BTreeMap<String, LeafId>,
    circuit: &Circuit,
) -> Result<LeafSequence, FormatError> {
    let mut sets = Vec::new();
    for names in raw {
        let mut set = BTreeSet::new();
        for name in names {
            let Some(&id) = leaf_names.get(name.as_str()) else {
                return Err(FormatError::parse(
                    line,
                    format!("`{name}` does not name a leaf"),
                ));
            };
            if circuit.leaf_label(id).is_none() {
                return Err(FormatError::parse(
                    line,
                    format!("leaf `{name}` is not reachable from the root"),
                ));
            }
            set.insert(id);
        }
        sets.push(set);
    }
    Ok(LeafSequence::new(sets))
}

/// Parse a circuit document.
pub fn read_circuit(text: &str) -> Result<CircuitDocument, FormatError> {
    let mut parser = DocParser::new();
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let content = strip_comment(raw, '#').trim();
        if content.is_empty() {
            continue;
        }
        last = idx + 1;
        parser.line(last, content)?;
    }
    if !parser.versioned {
        return Err(FormatError::parse(last.max(1), "expected `version 1` as the first line"));
    }
    parser.finish(last.max(1))
}

/// Parse a witness document (only `seq` / `independent` lines) whose
/// names refer to the given circuit document.
pub fn read_witness(text: &str, doc: &CircuitDocument) -> Result<Certificate, FormatError> {
    let mut versioned = false;
    let mut sequence: Option<LeafSequence> = None;
    let mut independent = false;
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let content = strip_comment(raw, '#').trim();
        if content.is_empty() {
            continue;
        }
        let line = idx + 1;
        last = line;
        let directive = content.split_whitespace().next().expect("non-empty content");
        if !versioned {
            match content.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["version", "1"] => {
                    versioned = true;
                    continue;
                }
                ["version", v] => {
                    return Err(FormatError::parse(line, format!("unsupported version `{v}`")))
                }
                _ => {
                    return Err(FormatError::parse(line, "expected `version 1` as the first line"))
                }
            }
        }
        match directive {
            "seq" => {
                if independent || sequence.is_some() {
                    return Err(FormatError::parse(
                        line,
                        "witness document declares more than one certificate",
                    ));
                }
                let rest = content.trim_start().strip_prefix("seq").expect("dispatched on `seq`");
                let raw_sets = parse_seq_sets(rest, line)?;
                sequence = Some(resolve_sequence(
                    &raw_sets,
                    line,
                    &doc.leaf_names,
                    doc.spec.circuit(),
                )?);
            }
            "independent" => {
                if independent || sequence.is_some() {
                    return Err(FormatError::parse(
                        line,
                        "witness document declares more than one certificate",
                    ));
                }
                independent = true;
            }
            other => {
                return Err(FormatError::parse(
                    line,
                    format!("`{other}` is not allowed in a witness document"),
                ))
            }
        }
    }
    if !versioned {
        return Err(FormatError::parse(last.max(1), "expected `version 1` as the first line"));
    }
    if independent {
        Ok(Certificate::Independent)
    } else if let Some(seq) = sequence {
        Ok(Certificate::Sequence(seq))
    } else {
        Err(FormatError::parse(last.max(1), "witness document declares no certificate"))
    }
}

/// Canonical names for a circuit's nodes, in storage order: leaves
/// `L0…`, gates `N0…`.
fn node_names(circuit: &Circuit) -> (Vec<String>, BTreeMap<LeafId, String>) {
    let mut names = Vec::with_capacity(circuit.nodes().len());
    let mut by_leaf = BTreeMap::new();
    let (mut leaves, mut gates) = (0usize, 0usize);
    for node in circuit.nodes() {
        match node {
            Node::Leaf { id, .. } => {
                let name = format!("L{leaves}");
                leaves += 1;
                by_leaf.insert(*id, name.clone());
                names.push(name);
            }
            Node::Gate { .. } => {
                names.push(format!("N{gates}"));
                gates += 1;
            }
        }
    }
    (names, by_leaf)
}

fn label_text(label: Label) -> String {
    match label {
        Label::Const(true) => "T".to_string(),
        Label::Const(false) => "F".to_string(),
        Label::Lit(l) => format!("{}{}", if l.negated { "-" } else { "+" }, l.var.0),
    }
}

fn sequence_line(seq: &LeafSequence, by_leaf: &BTreeMap<LeafId, String>) -> String {
    let sets: Vec<String> = seq
        .sets()
        .iter()
        .map(|set| {
            let names: Vec<&str> =
                set.iter().map(|id| by_leaf[id].as_str()).collect();
            format!("{{{}}}", names.join(", "))
        })
        .collect();
    format!("seq {} : {}", seq.len(), sets.join(" ; "))
}

fn certificate_lines(
    out: &mut String,
    certificate: &Certificate,
    by_leaf: &BTreeMap<LeafId, String>,
) {
    match certificate {
        Certificate::Independent => out.push_str("independent\n"),
        Certificate::Sequence(seq) => {
            let _ = writeln!(out, "{}", sequence_line(seq, by_leaf));
        }
    }
}

/// Write a specification (and optionally its certificate) as a
/// canonical circuit document.
pub fn write_circuit(spec: &Spec, certificate: Option<&Certificate>) -> String {
    let circuit = spec.circuit();
    let (names, by_leaf) = node_names(circuit);
    let mut out = String::from("version 1\n");
    for &v in spec.inputs() {
        let _ = writeln!(out, "var {} input", v.0);
    }
    for &v in spec.outputs() {
        let _ = writeln!(out, "var {} output", v.0);
    }
    for &v in spec.aux() {
        let _ = writeln!(out, "var {} aux", v.0);
    }
    for (idx, node) in circuit.nodes().iter().enumerate() {
        match node {
            Node::Leaf { label, .. } => {
                let _ = writeln!(out, "leaf {} {}", names[idx], label_text(*label));
            }
            Node::Gate { gate, lhs, rhs } => {
                let gate = match gate {
                    Gate::And => "AND",
                    Gate::Or => "OR",
                };
                let _ = writeln!(
                    out,
                    "node {} {} {} {}",
                    names[idx], gate, names[lhs.index()], names[rhs.index()]
                );
            }
        }
    }
    let _ = writeln!(out, "root {}", names[circuit.root().index()]);
    if let Some(cert) = certificate {
        certificate_lines(&mut out, cert, &by_leaf);
    }
    out
}

/// Write a certificate as a standalone witness document whose names
/// match [`write_circuit`] on the same circuit.
pub fn write_witness(certificate: &Certificate, circuit: &Circuit) -> String {
    let (_, by_leaf) = node_names(circuit);
    let mut out = String::from("version 1\n");
    certificate_lines(&mut out, certificate, &by_leaf);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{get_saunf, CompileOptions};
    use crate::fixtures::fig1;
    use crate::normal_form::SaunfVerdict;
    use crate::sat::oracle::Oracle;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn running_example_round_trips() {
        let f = fig1();
        let cert = Certificate::Sequence(f.good_sequence());
        let text = write_circuit(&f.spec, Some(&cert));
        assert!(text.contains("leaf L0 "));
        assert!(text.contains("leaf L15 "));
        assert_eq!(text.matches("\nleaf ").count(), 16);

        let doc = read_circuit(&text).unwrap();
        assert_eq!(doc.spec, f.spec);
        assert_eq!(doc.certificate(), Some(cert.clone()));

        // Canonical stability: writing the parsed document reproduces
        // the bytes.
        assert_eq!(write_circuit(doc.spec(), doc.certificate().as_ref()), text);

        // The certificate can equally travel in its own file.
        let witness_text = write_witness(&cert, f.spec.circuit());
        assert_eq!(read_witness(&witness_text, &doc).unwrap(), cert);
        let independent_text = write_witness(&Certificate::Independent, f.spec.circuit());
        assert_eq!(
            read_witness(&independent_text, &doc).unwrap(),
            Certificate::Independent
        );
    }

    #[test]
    fn handwritten_document_parses() {
        let text = "\
# the exclusive-or relation, with custom names
version 1
var 1 input
var 2 output

leaf a +2
leaf b -2
leaf i1 +1
leaf i2 -1
node c1 OR a i1
node c2 OR b i2
node f AND c1 c2
root f
seq 2 : {a} ; {b}
";
        let doc = read_circuit(text).unwrap();
        assert_eq!(doc.spec().outputs(), &[VarId(2)]);
        assert_eq!(doc.spec().circuit().len(), 7);
        assert_eq!(doc.sequences().len(), 1);
        let seq = &doc.sequences()[0];
        assert_eq!(seq.sets()[0], BTreeSet::from([doc.leaf_id("a").unwrap()]));
        assert_eq!(seq.sets()[1], BTreeSet::from([doc.leaf_id("b").unwrap()]));

        // Membership holds for this hand-built document.
        let oracle = Oracle::internal();
        let verdict =
            crate::normal_form::check_saunf(doc.spec(), seq, &oracle).unwrap();
        assert_eq!(verdict, SaunfVerdict::Pass);
    }

    #[test]
    fn single_leaf_document() {
        let mut b = CircuitBuilder::new();
        let leaf = b.literal(Literal::positive(VarId(1)));
        let circuit = b.finish(leaf);
        let spec = Spec::new(circuit, [VarId(1)].into(), vec![], BTreeSet::new()).unwrap();
        let text = write_circuit(&spec, None);
        assert_eq!(text, "version 1\nvar 1 input\nleaf L0 +1\nroot L0\n");
        let doc = read_circuit(&text).unwrap();
        assert_eq!(doc.spec, spec);
        assert!(doc.certificate().is_none());
    }

    #[test]
    fn unreachable_definitions_are_dropped() {
        let text = "\
version 1
var 1 input
leaf a +1
leaf unused -1
root a
";
        let doc = read_circuit(text).unwrap();
        assert_eq!(doc.spec().circuit().len(), 1);
        // The name is still declared, but the leaf is gone…
        let unused = doc.leaf_id("unused").unwrap();
        assert!(doc.spec().circuit().leaf_label(unused).is_none());
        // …so a witness naming it is rejected.
        let witness = "version 1\nseq 1 : {unused}\n";
        let err = read_witness(witness, &doc).unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: &[(&str, usize, &str)] = &[
            ("var 1 input\n", 1, "version"),
            ("version 2\n", 1, "unsupported version"),
            ("version 1\nvar 0 input\n", 2, "positive variable"),
            ("version 1\nvar 1 wires\n", 2, "not a role"),
            ("version 1\nvar 1 input\nvar 1 output\n", 3, "declared twice"),
            ("version 1\nleaf a +1\n", 2, "undeclared variable"),
            ("version 1\nvar 1 input\nleaf a +1\nleaf a -1\n", 4, "duplicate name"),
            ("version 1\nvar 1 input\nleaf a *1\n", 3, "not a leaf label"),
            ("version 1\nvar 1 input\nleaf a +1\nnode n AND a b\n", 4, "undefined name"),
            ("version 1\nvar 1 input\nleaf a +1\nnode n XOR a a\n", 4, "not a gate"),
            ("version 1\nvar 1 input\nleaf a +1\nroot a\nroot a\n", 5, "duplicate root"),
            ("version 1\nvar 1 input\nleaf a +1\n", 3, "without a root"),
            ("version 1\nvar 1 input\nleaf a +1\nroot a\nseq 2 : {a}\n", 5, "declares 2 sets"),
            ("version 1\nvar 1 input\nleaf a +1\nroot a\nseq 1 : {}\n", 5, "empty set"),
            ("version 1\nvar 1 input\nleaf a +1\nroot a\nseq 1 : {b}\n", 5, "does not name a leaf"),
            (
                "version 1\nvar 1 input\nleaf a +1\nleaf b +1\nnode n AND a b\nroot n\nseq 1 : {n}\n",
                7,
                "does not name a leaf",
            ),
            (
                "version 1\nvar 1 input\nleaf a +1\nroot a\nindependent\nseq 1 : {a}\n",
                6,
                "already declared `independent`",
            ),
            (
                "version 1\nvar 1 input\nleaf a +1\nroot a\nseq 1 : {a}\nindependent\n",
                6,
                "conflicting certificate",
            ),
            ("version 1\nwires?\n", 2, "unknown directive"),
            ("", 1, "version"),
        ];
        for (text, want_line, fragment) in cases {
            let err = read_circuit(text).unwrap_err();
            match &err {
                FormatError::Parse { line, message } => {
                    assert_eq!(line, want_line, "wrong line for {text:?}: {err}");
                    assert!(
                        message.contains(fragment),
                        "expected {fragment:?} in {message:?} for {text:?}"
                    );
                }
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn witness_reader_rejects_definitions_and_duplicates() {
        let f = fig1();
        let text = write_circuit(&f.spec, None);
        let doc = read_circuit(&text).unwrap();
        let cases: &[(&str, usize, &str)] = &[
            ("version 1\nvar 3 input\n", 2, "not allowed"),
            ("version 1\n", 1, "declares no certificate"),
            ("", 1, "version"),
            ("version 1\nindependent\nindependent\n", 3, "more than one"),
            ("version 1\nseq 1 : {L0}\nindependent\n", 3, "more than one"),
            ("version 1\nindependent\nseq 1 : {L0}\n", 3, "more than one"),
        ];
        for (text, want_line, fragment) in cases {
            let err = read_witness(text, &doc).unwrap_err();
            match &err {
                FormatError::Parse { line, message } => {
                    assert_eq!(line, want_line, "wrong line for {text:?}: {err}");
                    assert!(
                        message.contains(fragment),
                        "expected {fragment:?} in {message:?} for {text:?}"
                    );
                }
                other => panic!("expected a parse error for {text:?}, got {other:?}"),
            }
        }
    }

    /// Compiled witnesses round-trip through the two documents and
    /// re-verify.
    #[test]
    fn compiled_witnesses_round_trip() {
        let oracle = Oracle::internal();
        let mut rng = StdRng::seed_from_u64(0xf0a317);
        for _ in 0..15 {
            let num_vars = rng.random_range(2..=5u32);
            let split = rng.random_range(1..num_vars);
            let mut b = CircuitBuilder::new();
            let mut clause_roots = Vec::new();
            for _ in 0..rng.random_range(1..=4usize) {
                let lits: Vec<_> = (0..rng.random_range(1..=3usize))
                    .map(|_| {
                        let lit = Literal {
                            var: VarId(rng.random_range(1..=num_vars)),
                            negated: rng.random_bool(0.5),
                        };
                        b.literal(lit)
                    })
                    .collect();
                clause_roots.push(b.or_all(&lits));
            }
            let root = b.and_all(&clause_roots);
            let circuit = b.finish(root);
            let spec = Spec::new(
                circuit,
                (1..=split).map(VarId).collect(),
                (split + 1..=num_vars).map(VarId).collect(),
                BTreeSet::new(),
            )
            .unwrap();
            let (witness, _) = get_saunf(&spec, &oracle, &CompileOptions::default()).unwrap();

            let circuit_text = write_circuit(witness.spec(), None);
            let witness_text =
                write_witness(witness.certificate(), witness.spec().circuit());
            let doc = read_circuit(&circuit_text).unwrap();
            assert_eq!(doc.spec, *witness.spec());
            let cert = read_witness(&witness_text, &doc).unwrap();
            assert_eq!(&cert, witness.certificate());
            assert_eq!(write_circuit(doc.spec(), None), circuit_text);

            let reparsed = crate::normal_form::SaunfWitness::new_unchecked(doc.into_spec(), cert);
            assert_eq!(reparsed.verify(&oracle).unwrap(), SaunfVerdict::Pass);
        }
    }
}
