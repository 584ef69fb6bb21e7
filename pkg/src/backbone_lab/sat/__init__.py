"""Satisfiability for :mod:`backbone_lab.formula` values."""

from __future__ import annotations

import logging
import os
import subprocess
import tempfile
from dataclasses import dataclass, field
from typing import Mapping, Optional

from ..formula import Formula, VarName, variables
from .cdcl import DEFAULT_CONFLICT_BUDGET, Solver
from .cnf import CnfFormula, dimacs_text, parse_dimacs, read_dimacs, tseitin, write_dimacs

log = logging.getLogger(__name__)

SAT = "sat"
UNSAT = "unsat"


@dataclass(frozen=True)
class SatResult:
    status: str
    model: Optional[dict] = field(default=None, compare=True)
    # assumption names that do not occur in the formula and were dropped
    ignored: frozenset = frozenset()

    @property
    def sat(self) -> bool:
        return self.status == SAT


class FormulaSolver:
    """Incremental solver for one formula; answers a sequence of assumption queries.

    Not safe to share between threads while a query is running.
    """

    def __init__(self, f: Formula, conflict_budget=DEFAULT_CONFLICT_BUDGET):
        self.formula = f
        self.cnf = tseitin(f)
        self.solver = Solver(self.cnf.num_vars, self.cnf.clauses, conflict_budget)

    def set_phase(self, preferred: Mapping[VarName, bool]) -> None:
        """Preferred decision polarity for original variables (default False)."""
        origin = self.cnf.origin_map
        for v, b in preferred.items():
            if v in origin:
                self.solver.phase[origin[v]] = bool(b)

    def fix(self, assignment: Mapping[VarName, bool]) -> None:
        """Permanently add the bindings of ``assignment`` as unit clauses."""
        origin = self.cnf.origin_map
        for v, b in assignment.items():
            self.solver.add_clause([origin[v] if b else -origin[v]])

    def solve(self, assumptions: Mapping[VarName, bool] = None) -> SatResult:
        origin = self.cnf.origin_map
        lits = []
        ignored = []
        for v, b in sorted((assumptions or {}).items()):
            if v in origin:
                lits.append(origin[v] if b else -origin[v])
            else:
                ignored.append(v)
        if ignored:
            log.warning("ignoring %d assumption(s) on variables not in the formula", len(ignored))
        model = self.solver.solve(lits)
        if model is None:
            return SatResult(UNSAT, None, frozenset(ignored))
        return SatResult(SAT, self.cnf.project(model), frozenset(ignored))


def solve(f: Formula, conflict_budget=DEFAULT_CONFLICT_BUDGET) -> SatResult:
    return FormulaSolver(f, conflict_budget).solve()


def solve_assuming(
    f: Formula, assumptions: Mapping[VarName, bool], conflict_budget=DEFAULT_CONFLICT_BUDGET
) -> SatResult:
    """Same status as ``solve(substitute(f, assumptions))``; the model also covers the assumed variables."""
    return FormulaSolver(f, conflict_budget).solve(assumptions)


def solve_cnf(cnf: CnfFormula, conflict_budget=DEFAULT_CONFLICT_BUDGET):
    """Model list (index 0 unused) or ``None``."""
    return Solver(cnf.num_vars, cnf.clauses, conflict_budget).solve()


def solve_external(f: Formula, command, timeout=None) -> SatResult:
    """Cross-check through another solver process speaking DIMACS.

    ``command`` is an argv list; the CNF file path is appended.  The process
    must print ``s SATISFIABLE``/``s UNSATISFIABLE`` and ``v`` model lines.
    """
    cnf = tseitin(f)
    fd, path = tempfile.mkstemp(suffix=".cnf")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(dimacs_text(cnf))
        proc = subprocess.run(
            list(command) + [path], capture_output=True, text=True, timeout=timeout
        )
    finally:
        os.unlink(path)
    status = None
    values = {}
    for line in proc.stdout.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit:
                    values[abs(lit)] = lit > 0
    if status == "UNSATISFIABLE":
        return SatResult(UNSAT)
    if status != "SATISFIABLE":
        raise RuntimeError(f"external solver gave no verdict (exit {proc.returncode})")
    return SatResult(SAT, {v: values.get(i, False) for v, i in cnf.origin_map.items()})


def is_satisfiable(f: Formula, conflict_budget=DEFAULT_CONFLICT_BUDGET) -> bool:
    return solve(f, conflict_budget).sat


__all__ = [
    "DEFAULT_CONFLICT_BUDGET",
    "SAT",
    "UNSAT",
    "CnfFormula",
    "FormulaSolver",
    "SatResult",
    "Solver",
    "dimacs_text",
    "is_satisfiable",
    "parse_dimacs",
    "read_dimacs",
    "solve",
    "solve_assuming",
    "solve_cnf",
    "solve_external",
    "tseitin",
    "variables",
    "write_dimacs",
]
