"""``python -m backbone_lab.sat FILE.cnf`` -- solve a DIMACS file, competition-style output."""

import argparse
import sys

from . import DEFAULT_CONFLICT_BUDGET, Solver, parse_dimacs


def main(argv=None):
    parser = argparse.ArgumentParser(prog="python -m backbone_lab.sat")
    parser.add_argument("cnf")
    parser.add_argument("--budget-conflicts", type=int, default=DEFAULT_CONFLICT_BUDGET)
    args = parser.parse_args(argv)
    with open(args.cnf, encoding="ascii") as fh:
        num_vars, clauses = parse_dimacs(fh.read())
    model = Solver(num_vars, clauses, args.budget_conflicts).solve()
    if model is None:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [str(i if model[i] else -i) for i in range(1, num_vars + 1)]
    print("v " + " ".join(lits + ["0"]))
    return 10


if __name__ == "__main__":
    sys.exit(main())
