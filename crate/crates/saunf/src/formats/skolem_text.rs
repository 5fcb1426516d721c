//! Skolem-vector documents: one shared function DAG with a designated
//! root per synthesized output.
//!
//! The grammar reuses the circuit-document line forms — `version`,
//! `var`, `leaf`, `node` — without `root`/`seq`, and adds:
//!
//! ```text
//! skolem <id> -> <ref>    # the function for output <id>
//! aux <id> <level>        # synthesis-time auxiliary provenance
//! ```
//!
//! `var … input` (or `aux`) lines declare the function domain — the
//! parameters every component reads — and `var … output` lines the
//! covered outputs, in vector order, mirrored by the `skolem` lines.
//! Functions may share structure: a node referenced by several
//! components (or several `skolem` lines) is written once. `aux`
//! lines carry the registry of synthesis-time auxiliary variables
//! (variable number and the 1-based recursion level that introduced
//! it); they declare no domain variable.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::VarId;
use crate::formats::circuit_text::{check_name, parse_label, parse_var_token};
use crate::formats::{strip_comment, FormatError};
use crate::synthesis::{FuncArena, FuncId, FuncNode, SkolemVector};

/// Write a Skolem vector as a canonical shared-DAG document.
pub fn write_skolem(vector: &SkolemVector) -> String {
    use std::fmt::Write as _;

    let arena = vector.arena();
    let outputs = vector.outputs();
    let entry_funcs: Vec<FuncId> = outputs
        .iter()
        .map(|&v| vector.func(v).expect("every declared output has a component"))
        .collect();

    // Reachable nodes in ascending id order — topological, since
    // children always have smaller ids.
    let mut reach: BTreeSet<FuncId> = BTreeSet::new();
    let mut stack = entry_funcs.clone();
    while let Some(f) = stack.pop() {
        if !reach.insert(f) {
            continue;
        }
        if let FuncNode::And(a, b) | FuncNode::Or(a, b) = arena.node(f) {
            stack.push(a);
            stack.push(b);
        }
    }

    let mut out = String::from("version 1\n");
    for &v in vector.params() {
        let _ = writeln!(out, "var {} input", v.0);
    }
    for &v in &outputs {
        let _ = writeln!(out, "var {} output", v.0);
    }
    for (&v, &level) in vector.aux_registry() {
        let _ = writeln!(out, "aux {} {level}", v.0);
    }

    let mut names: BTreeMap<FuncId, String> = BTreeMap::new();
    let (mut leaves, mut gates) = (0usize, 0usize);
    for &f in &reach {
        match arena.node(f) {
            FuncNode::Const(value) => {
                let name = format!("L{leaves}");
                leaves += 1;
                let _ = writeln!(out, "leaf {name} {}", if value { "T" } else { "F" });
                names.insert(f, name);
            }
            FuncNode::Leaf(lit) => {
                let name = format!("L{leaves}");
                leaves += 1;
                let sign = if lit.negated { "-" } else { "+" };
                let _ = writeln!(out, "leaf {name} {sign}{}", lit.var.0);
                names.insert(f, name);
            }
            FuncNode::And(a, b) | FuncNode::Or(a, b) => {
                let name = format!("N{gates}");
                gates += 1;
                let gate = match arena.node(f) {
                    FuncNode::And(..) => "AND",
                    _ => "OR",
                };
                let _ = writeln!(out, "node {name} {gate} {} {}", names[&a], names[&b]);
                names.insert(f, name);
            }
        }
    }
    for (&v, &f) in outputs.iter().zip(&entry_funcs) {
        let _ = writeln!(out, "skolem {} -> {}", v.0, names[&f]);
    }
    out
}

/// Parse a Skolem-vector document.
pub fn read_skolem(text: &str) -> Result<SkolemVector, FormatError> {
    let mut arena = FuncArena::new();
    let mut versioned = false;
    let mut params: BTreeSet<VarId> = BTreeSet::new();
    let mut declared: BTreeSet<VarId> = BTreeSet::new();
    let mut declared_outputs: Vec<VarId> = Vec::new();
    let mut aux_registry: BTreeMap<VarId, u32> = BTreeMap::new();
    let mut names: BTreeMap<String, FuncId> = BTreeMap::new();
    let mut entries: Vec<(VarId, FuncId)> = Vec::new();
    let mut last = 0;

    for (idx, raw) in text.lines().enumerate() {
        let content = strip_comment(raw, '#').trim();
        if content.is_empty() {
            continue;
        }
        let line = idx + 1;
        last = line;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if !versioned {
            match tokens.as_slice() {
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
        match tokens[0] {
            "var" => {
                let [_, id, role] = tokens.as_slice() else {
                    return Err(FormatError::parse(line, "expected `var <id> input|output|aux`"));
                };
                let var = parse_var_token(id, line)?;
                if !declared.insert(var) {
                    return Err(FormatError::parse(
                        line,
                        format!("variable {} declared twice", var.0),
                    ));
                }
                match *role {
                    "input" | "aux" => {
                        params.insert(var);
                    }
                    "output" => declared_outputs.push(var),
                    other => {
                        return Err(FormatError::parse(
                            line,
                            format!("`{other}` is not a role (input, output, or aux)"),
                        ))
                    }
                }
            }
            "aux" => {
                let [_, id, level] = tokens.as_slice() else {
                    return Err(FormatError::parse(line, "expected `aux <id> <level>`"));
                };
                let var = parse_var_token(id, line)?;
                let level: u32 = level.parse().map_err(|_| {
                    FormatError::parse(line, format!("`{level}` is not a recursion level"))
                })?;
                if aux_registry.insert(var, level).is_some() {
                    return Err(FormatError::parse(
                        line,
                        format!("auxiliary {} registered twice", var.0),
                    ));
                }
            }
            "leaf" => {
                let [_, name, label] = tokens.as_slice() else {
                    return Err(FormatError::parse(line, "expected `leaf <name> <label>`"));
                };
                check_name(name, line)?;
                let func = match parse_label(label, line)? {
                    Ok(lit) => {
                        if !params.contains(&lit.var) {
                            return Err(FormatError::parse(
                                line,
                                format!(
                                    "components read only declared parameters, not variable {}",
                                    lit.var.0
                                ),
                            ));
                        }
                        arena.leaf(lit)
                    }
                    Err(value) => arena.constant(value),
                };
                if names.insert(name.to_string(), func).is_some() {
                    return Err(FormatError::parse(line, format!("duplicate name `{name}`")));
                }
            }
            "node" => {
                let [_, name, gate, lhs, rhs] = tokens.as_slice() else {
                    return Err(FormatError::parse(
                        line,
                        "expected `node <name> AND|OR <ref> <ref>`",
                    ));
                };
                check_name(name, line)?;
                let resolve = |names: &BTreeMap<String, FuncId>, n: &str| {
                    names.get(n).copied().ok_or_else(|| {
                        FormatError::parse(line, format!("reference to undefined name `{n}`"))
                    })
                };
                let lhs = resolve(&names, lhs)?;
                let rhs = resolve(&names, rhs)?;
                let func = match *gate {
                    "AND" => arena.and(lhs, rhs),
                    "OR" => arena.or(lhs, rhs),
                    other => {
                        return Err(FormatError::parse(
                            line,
                            format!("`{other}` is not a gate (AND or OR)"),
                        ))
                    }
                };
                if names.insert(name.to_string(), func).is_some() {
                    return Err(FormatError::parse(line, format!("duplicate name `{name}`")));
                }
            }
            "skolem" => {
                let [_, id, "->", target] = tokens.as_slice() else {
                    return Err(FormatError::parse(line, "expected `skolem <id> -> <ref>`"));
                };
                let var = parse_var_token(id, line)?;
                if entries.iter().any(|&(v, _)| v == var) {
                    return Err(FormatError::parse(
                        line,
                        format!("duplicate skolem line for output {}", var.0),
                    ));
                }
                let func = names.get(*target).copied().ok_or_else(|| {
                    FormatError::parse(line, format!("reference to undefined name `{target}`"))
                })?;
                entries.push((var, func));
            }
            other @ ("root" | "seq" | "independent") => {
                return Err(FormatError::parse(
                    line,
                    format!("`{other}` is not allowed in a Skolem document"),
                ))
            }
            other => return Err(FormatError::parse(line, format!("unknown directive `{other}`"))),
        }
    }
    if !versioned {
        return Err(FormatError::parse(last.max(1), "expected `version 1` as the first line"));
    }
    let entry_vars: Vec<VarId> = entries.iter().map(|&(v, _)| v).collect();
    if entry_vars != declared_outputs {
        return Err(FormatError::parse(
            last.max(1),
            "skolem lines do not match the output declarations",
        ));
    }
    Ok(SkolemVector::from_functions(arena, entries, params, aux_registry)
        .expect("leaf lines only admit declared parameters and duplicates are rejected"))
}
