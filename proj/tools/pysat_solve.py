#!/usr/bin/env python3
"""DIMACS front end for the solvers bundled with python-sat.

Usage: pysat_solve.py [--solver NAME] FILE.cnf

Prints SAT-competition output ("s ..." and "v ... 0") and exits with 10
(SAT) or 20 (UNSAT).
"""
import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--solver", default="cadical153")
    parser.add_argument("file")
    args = parser.parse_args()

    cnf = CNF(from_file=args.file)
    with Solver(name=args.solver, bootstrap_with=cnf.clauses) as solver:
        if not solver.solve():
            print("s UNSATISFIABLE")
            return 20
        model = solver.get_model() or []
    print("s SATISFIABLE")
    assigned = {abs(l): l for l in model}
    values = [assigned.get(v, -v) for v in range(1, cnf.nv + 1)]
    line = []
    for lit in values:
        line.append(str(lit))
        if len(line) == 20:
            print("v " + " ".join(line))
            line = []
    line.append("0")
    print("v " + " ".join(line))
    return 10


if __name__ == "__main__":
    sys.exit(main())
