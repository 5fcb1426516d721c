#!/usr/bin/env python3
"""Tiny brute-force DIMACS CNF solver used as an external-backend test double.

Reads one DIMACS file, tries every assignment, and prints the standard
"s SATISFIABLE" / "s UNSATISFIABLE" verdict plus "v" model lines.
Exit code 10 for SAT, 20 for UNSAT, 1 on malformed input.
"""

import sys


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: brutesat.py FILE.cnf", file=sys.stderr)
        return 1
    num_vars = None
    clauses = []
    pending = []
    with open(sys.argv[1]) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith(("c", "%")):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    print("bad problem line", file=sys.stderr)
                    return 1
                num_vars = int(parts[2])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    clauses.append(pending)
                    pending = []
                else:
                    pending.append(lit)
    if pending:
        clauses.append(pending)
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    if num_vars > 24:
        print("too many variables for brute force", file=sys.stderr)
        return 1

    for bits in range(1 << num_vars):
        def value(lit: int) -> bool:
            v = bits >> (abs(lit) - 1) & 1 == 1
            return v if lit > 0 else not v

        if all(any(value(l) for l in clause) for clause in clauses):
            print("s SATISFIABLE")
            lits = [v if bits >> (v - 1) & 1 else -v for v in range(1, num_vars + 1)]
            print("v " + " ".join(str(l) for l in lits) + " 0")
            return 10
    print("s UNSATISFIABLE")
    return 20


if __name__ == "__main__":
    sys.exit(main())
