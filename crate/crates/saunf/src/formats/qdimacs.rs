//! QDIMACS input for CNF specifications.
//!
//! The accepted dialect is the ∀I ∃X fragment: a `p cnf <vars>
//! <clauses>` header, then `a` lines listing input (universal)
//! variables and `e` lines listing output (existential) variables —
//! universals never after existentials — then zero-terminated
//! clauses, possibly spanning lines. Lines starting with `c` are
//! comments. Variables in no quantifier line are inputs. The circuit
//! is the AND of per-clause ORs (balanced trees, one leaf per literal
//! occurrence, clause and literal order preserved); the empty clause
//! is a ⊥ leaf.

use std::collections::BTreeSet;

use crate::circuit::{CircuitBuilder, Literal, Spec, VarId};
use crate::formats::FormatError;

/// Parse a QDIMACS problem into a specification.
pub fn read_qdimacs(text: &str) -> Result<Spec, FormatError> {
    let mut header: Option<(u32, usize)> = None;
    let mut header_line = 0;
    let mut quantified: BTreeSet<u32> = BTreeSet::new();
    let mut universals: Vec<u32> = Vec::new();
    let mut existentials: Vec<u32> = Vec::new();
    let mut existential_seen = false;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Option<Vec<Literal>> = None;
    let mut last = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('c') {
            continue;
        }
        last = line;
        let tokens: Vec<&str> = content.split_whitespace().collect();

        let Some((num_vars, _)) = header else {
            match tokens.as_slice() {
                ["p", "cnf", v, n] => {
                    let v = v.parse::<u32>();
                    let n = n.parse::<usize>();
                    match (v, n) {
                        (Ok(v), Ok(n)) => {
                            header = Some((v, n));
                            header_line = line;
                        }
                        _ => return Err(FormatError::parse(line, "malformed header")),
                    }
                }
                _ => {
                    return Err(FormatError::parse(
                        line,
                        "expected header `p cnf <vars> <clauses>`",
                    ))
                }
            }
            continue;
        };

        match tokens[0] {
            kind @ ("a" | "e") => {
                if !clauses.is_empty() || current.is_some() {
                    return Err(FormatError::parse(line, "quantifier line after clauses"));
                }
                if kind == "a" && existential_seen {
                    return Err(FormatError::parse(
                        line,
                        "universal block after existential block (only ∀∃ prefixes are supported)",
                    ));
                }
                if kind == "e" {
                    existential_seen = true;
                }
                let [vars @ .., terminator] = &tokens[1..] else {
                    return Err(FormatError::parse(line, "quantifier line not zero-terminated"));
                };
                if *terminator != "0" {
                    return Err(FormatError::parse(line, "quantifier line not zero-terminated"));
                }
                for tok in vars {
                    let var = match tok.parse::<u32>() {
                        Ok(v) if v >= 1 && v <= num_vars => v,
                        _ => {
                            return Err(FormatError::parse(
                                line,
                                format!("variable `{tok}` out of range 1..={num_vars}"),
                            ))
                        }
                    };
                    if !quantified.insert(var) {
                        return Err(FormatError::parse(
                            line,
                            format!("variable {var} quantified twice"),
                        ));
                    }
                    if kind == "a" {
                        universals.push(var);
                    } else {
                        existentials.push(var);
                    }
                }
            }
            _ => {
                for tok in &tokens {
                    let lit = tok.parse::<i64>().map_err(|_| {
                        FormatError::parse(line, format!("`{tok}` is not a clause literal"))
                    })?;
                    if lit == 0 {
                        clauses.push(current.take().unwrap_or_default());
                        continue;
                    }
                    let var = lit.unsigned_abs();
                    if var < 1 || var > u64::from(num_vars) {
                        return Err(FormatError::parse(
                            line,
                            format!("variable `{}` out of range 1..={num_vars}", var),
                        ));
                    }
                    current.get_or_insert_with(Vec::new).push(Literal {
                        var: VarId(var as u32),
                        negated: lit < 0,
                    });
                }
            }
        }
    }

    let Some((num_vars, num_clauses)) = header else {
        return Err(FormatError::parse(
            last.max(1),
            "expected header `p cnf <vars> <clauses>`",
        ));
    };
    if current.is_some() {
        return Err(FormatError::parse(last, "clause not zero-terminated"));
    }
    if clauses.len() != num_clauses {
        return Err(FormatError::parse(
            last.max(header_line),
            format!("header declares {num_clauses} clauses, found {}", clauses.len()),
        ));
    }

    let mut builder = CircuitBuilder::new();
    let clause_roots: Vec<_> = clauses
        .iter()
        .map(|clause| {
            let leaves: Vec<_> = clause.iter().map(|&l| builder.literal(l)).collect();
            builder.or_all(&leaves)
        })
        .collect();
    let root = builder.and_all(&clause_roots);
    let circuit = builder.finish(root);

    let outputs: Vec<VarId> = existentials.iter().map(|&v| VarId(v)).collect();
    let inputs: BTreeSet<VarId> = (1..=num_vars)
        .filter(|v| !existentials.contains(v))
        .map(VarId)
        .collect();
    Ok(Spec::new(circuit, inputs, outputs, BTreeSet::new())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Assignment;
    use crate::naive;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn worked_example() {
        let text = "c an exclusive-or relation\np cnf 2 2\na 1 0\ne 2 0\n2 1 0\n-2 -1 0\n";
        let spec = read_qdimacs(text).unwrap();
        assert_eq!(spec.inputs(), &BTreeSet::from([VarId(1)]));
        assert_eq!(spec.outputs(), &[VarId(2)]);
        assert!(spec.aux().is_empty());

        let mut b = CircuitBuilder::new();
        let l1 = b.literal(Literal::positive(VarId(2)));
        let l2 = b.literal(Literal::positive(VarId(1)));
        let c1 = b.or(l1, l2);
        let l3 = b.literal(Literal::negative(VarId(2)));
        let l4 = b.literal(Literal::negative(VarId(1)));
        let c2 = b.or(l3, l4);
        let root = b.and(c1, c2);
        let expected = b.finish(root);
        assert_eq!(*spec.circuit(), expected);
    }

    #[test]
    fn no_quantifier_lines_means_all_inputs() {
        let spec = read_qdimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
        assert_eq!(spec.inputs().len(), 3);
        assert!(spec.outputs().is_empty());
    }

    #[test]
    fn free_variables_default_to_inputs() {
        let spec = read_qdimacs("p cnf 3 1\ne 2 0\n1 -2 3 0\n").unwrap();
        assert_eq!(spec.inputs(), &BTreeSet::from([VarId(1), VarId(3)]));
        assert_eq!(spec.outputs(), &[VarId(2)]);
    }

    #[test]
    fn three_clauses_build_a_balanced_tree() {
        let spec = read_qdimacs("p cnf 2 3\n1 2 0\n-1 2 0\n1 -2 0\n").unwrap();
        // 6 leaves, 3 clause ORs, 2 ANDs.
        assert_eq!(spec.circuit().len(), 11);
        assert_eq!(spec.circuit().leaves().count(), 6);
        // Clause semantics hold on every assignment.
        for sigma in naive::assignments_over(&spec.parameter_vars()) {
            let i = sigma[&VarId(1)];
            let x = sigma[&VarId(2)];
            let expected = (i || x) && (!i || x) && (i || !x);
            assert_eq!(spec.circuit().evaluate(&sigma), expected);
        }
    }

    #[test]
    fn constant_edge_cases() {
        let empty_clause = read_qdimacs("p cnf 1 1\n0\n").unwrap();
        assert_eq!(empty_clause.circuit().as_constant(), Some(false));
        let no_clauses = read_qdimacs("p cnf 1 0\n").unwrap();
        assert_eq!(no_clauses.circuit().as_constant(), Some(true));
    }

    #[test]
    fn multiline_clauses_and_duplicates() {
        let spec = read_qdimacs("p cnf 2 2\n1\n2 0 1 2 0\n").unwrap();
        // Duplicate clauses stay distinct: leaves are never shared.
        assert_eq!(spec.circuit().leaves().count(), 4);
        let sigma: Assignment = [(VarId(1), false), (VarId(2), true)].into();
        assert!(spec.circuit().evaluate(&sigma));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: &[(&str, usize, &str)] = &[
            ("p dnf 1 1\n1 0\n", 1, "header"),
            ("c hi\n1 0\n", 2, "header"),
            ("", 1, "header"),
            ("p cnf 1 1\na 1\n1 0\n", 2, "zero-terminated"),
            ("p cnf 1 1\na 2 0\n1 0\n", 2, "out of range"),
            ("p cnf 2 1\na 1 0\ne 1 0\n1 0\n", 3, "quantified twice"),
            ("p cnf 2 1\ne 2 0\na 1 0\n1 0\n", 3, "universal block after existential"),
            ("p cnf 1 1\n1 0\na 1 0\n", 3, "quantifier line after clauses"),
            ("p cnf 1 1\nx 0\n", 2, "not a clause literal"),
            ("p cnf 1 1\n2 0\n", 2, "out of range"),
            ("p cnf 1 1\n1\n", 2, "clause not zero-terminated"),
            ("p cnf 1 2\n1 0\n", 2, "declares 2 clauses, found 1"),
        ];
        for (text, want_line, fragment) in cases {
            let err = read_qdimacs(text).unwrap_err();
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

    /// The reader agrees with direct clause-list evaluation on every
    /// assignment of random instances.
    #[test]
    fn reader_agrees_with_clause_semantics() {
        let mut rng = StdRng::seed_from_u64(0xd1aca5);
        for _ in 0..40 {
            let num_vars = rng.random_range(1..=5u32);
            let num_clauses = rng.random_range(0..=6usize);
            let clauses: Vec<Vec<i64>> = (0..num_clauses)
                .map(|_| {
                    (0..rng.random_range(0..=3usize))
                        .map(|_| {
                            let v = i64::from(rng.random_range(1..=num_vars));
                            if rng.random_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let mut text = format!("p cnf {num_vars} {num_clauses}\n");
            for clause in &clauses {
                for lit in clause {
                    text.push_str(&format!("{lit} "));
                }
                text.push_str("0\n");
            }
            let spec = read_qdimacs(&text).unwrap();
            let vars: BTreeSet<VarId> = (1..=num_vars).map(VarId).collect();
            for sigma in naive::assignments_over(&vars) {
                let expected = clauses.iter().all(|clause| {
                    clause.iter().any(|&lit| {
                        let value = sigma[&VarId(lit.unsigned_abs() as u32)];
                        if lit > 0 {
                            value
                        } else {
                            !value
                        }
                    })
                });
                assert_eq!(spec.circuit().evaluate(&sigma), expected, "for {text:?}");
            }
        }
    }
}
