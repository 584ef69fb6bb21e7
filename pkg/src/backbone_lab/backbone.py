"""Backbones: frozen-variable extraction, verification, and value computation.

A set ``S`` of variables of ``F`` is a backbone when exactly one assignment
``a`` to ``S`` leaves ``F[a]`` satisfiable; ``a`` is the backbone's value.
For a satisfiable ``F`` the backbones are exactly the subsets of the frozen
variables (those constant across all models), so the frozen set is the
maximum backbone.  An unsatisfiable formula has no backbones at all.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .errors import BruteLimitExceeded, DomainMismatch, NotABackbone
from .formula import And, Formula, Not, Or, Var, VarName, variables
from .sat import DEFAULT_CONFLICT_BUDGET, FormulaSolver, solve, solve_assuming

DEFAULT_BRUTE_LIMIT = 22


@dataclass(frozen=True)
class FrozenReport:
    frozen: Mapping[VarName, bool] = field(hash=False)
    satisfiable: bool
    method: str

    def __post_init__(self):
        object.__setattr__(self, "frozen", dict(sorted(self.frozen.items())))
        if not self.satisfiable and self.frozen:
            raise ValueError("an unsatisfiable formula has no frozen variables")

    def lines(self):
        out = ["SAT" if self.satisfiable else "UNSAT"]
        out += [f"frozen {v} {int(b)}" for v, b in self.frozen.items()]
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "satisfiable": self.satisfiable,
                "method": self.method,
                "frozen": [[str(v), int(b)] for v, b in self.frozen.items()],
            },
            indent=2,
        )


# --------------------------------------------------------------------------
# exhaustive enumeration


def truth_table(f: Formula, order=None):
    """Evaluate ``f`` on all ``2**n`` total assignments at once.

    Returns ``(order, columns, values)``: row ``r`` assigns ``order[j]`` the
    value ``columns[j][r]`` and ``values[r]`` is ``f``'s value there.
    """
    order = sorted(variables(f)) if order is None else list(order)
    n = len(order)
    rows = np.arange(1 << n, dtype=np.int64)
    columns = {v: ((rows >> (n - 1 - j)) & 1).astype(bool) for j, v in enumerate(order)}

    def ev(node):
        if isinstance(node, Var):
            return columns[node.name]
        if isinstance(node, Not):
            return ~ev(node.child)
        acc = ev(node.children[0]).copy()
        combine = np.logical_and if isinstance(node, And) else np.logical_or
        for child in node.children[1:]:
            combine(acc, ev(child), out=acc)
        return acc

    return order, columns, ev(f)


def frozen_vars_brute(f: Formula, limit: int = DEFAULT_BRUTE_LIMIT) -> FrozenReport:
    n = len(variables(f))
    if n > limit:
        raise BruteLimitExceeded(f"{n} variables exceeds the brute-force limit of {limit}")
    order, columns, values = truth_table(f)
    if not values.any():
        return FrozenReport({}, False, "brute")
    frozen = {}
    for v in order:
        seen = columns[v][values]
        if seen.all():
            frozen[v] = True
        elif not seen.any():
            frozen[v] = False
    return FrozenReport(frozen, True, "brute")


# --------------------------------------------------------------------------
# SAT-based


def frozen_vars_sat(
    f: Formula, conflict_budget=DEFAULT_CONFLICT_BUDGET, among: Optional[Iterable[VarName]] = None
) -> FrozenReport:
    """Frozen variables by assumption queries on one incremental solver.

    ``v`` is frozen at ``b`` iff ``F`` with ``v = not b`` is unsatisfiable.
    Every model found on the way rules out all candidates it disagrees with,
    and decisions prefer the opposite of the first model so each new model
    rules out as many candidates as possible.  ``among`` restricts the
    variables examined; the others are left out of the report.
    """
    solver = FormulaSolver(f, conflict_budget)
    first = solver.solve()
    if not first.sat:
        return FrozenReport({}, False, "sat")
    candidates = dict(first.model)
    if among is not None:
        keep = frozenset(among)
        candidates = {v: b for v, b in candidates.items() if v in keep}
    solver.set_phase({v: not b for v, b in candidates.items()})
    frozen = {}
    for v in sorted(candidates):
        if v not in candidates:
            continue
        b = candidates[v]
        result = solver.solve({v: not b})
        if result.sat:
            for u, val in result.model.items():
                if u in candidates and candidates[u] != val:
                    del candidates[u]
        else:
            frozen[v] = b
            # pin it so later queries start from the stronger formula
            solver.fix({v: b})
    return FrozenReport(frozen, True, "sat")


def _negated_agreement(a: Mapping[VarName, bool]) -> Formula:
    lits = [Not(Var(v)) if b else Var(v) for v, b in sorted(a.items())]
    return lits[0] if len(lits) == 1 else Or(tuple(lits))


def _check_domain(f: Formula, s: Iterable[VarName], a: Mapping[VarName, bool]):
    s = frozenset(s)
    if set(a) != s:
        raise DomainMismatch("assignment must bind exactly the backbone variables")
    missing = s - variables(f)
    if missing:
        raise DomainMismatch(f"not variables of the formula: {sorted(missing)}")
    return s


def verify_backbone(
    f: Formula, s: Iterable[VarName], a: Mapping[VarName, bool], conflict_budget=DEFAULT_CONFLICT_BUDGET
) -> bool:
    """True iff ``s`` is a backbone of ``f`` with value ``a``.

    Two queries: ``F[a]`` must be satisfiable, and no model of ``F`` may
    disagree with ``a`` somewhere on ``s``.
    """
    s = _check_domain(f, s, a)
    if not solve_assuming(f, a, conflict_budget).sat:
        return False
    if not s:
        return True
    return not solve(And((f, _negated_agreement(a))), conflict_budget).sat


def backbone_value(f: Formula, s: Iterable[VarName], conflict_budget=DEFAULT_CONFLICT_BUDGET) -> dict:
    """The unique value of backbone ``s``; raises :class:`NotABackbone` otherwise."""
    s = frozenset(s)
    missing = s - variables(f)
    if missing:
        raise DomainMismatch(f"not variables of the formula: {sorted(missing)}")
    result = solve(f, conflict_budget)
    if not result.sat:
        raise NotABackbone("unsatisfiable formulas have no backbones")
    candidate = {v: result.model[v] for v in sorted(s)}
    if not verify_backbone(f, s, candidate, conflict_budget):
        raise NotABackbone(f"{len(s)} variable(s) do not form a backbone")
    return candidate


def attains_both_values(
    f: Formula, names: Iterable[VarName], conflict_budget=DEFAULT_CONFLICT_BUDGET
) -> bool:
    """True iff each variable in ``names`` is true in some model and false in another."""
    names = sorted(frozenset(names))
    solver = FormulaSolver(f, conflict_budget)
    # two models, one with all of them true and one with all false, settle it at once
    if solver.solve({v: True for v in names}).sat and solver.solve({v: False for v in names}).sat:
        return True
    return all(solver.solve({v: b}).sat for v in names for b in (True, False))


def value_bits(a: Mapping[VarName, bool]) -> str:
    """Bit string of a value, variables in lexicographic order (empty for the empty backbone)."""
    return "".join("1" if a[v] else "0" for v in sorted(a))


__all__ = [
    "DEFAULT_BRUTE_LIMIT",
    "FrozenReport",
    "attains_both_values",
    "backbone_value",
    "frozen_vars_brute",
    "frozen_vars_sat",
    "truth_table",
    "value_bits",
    "verify_backbone",
]
