"""Machine-to-SAT reduction whose output reveals the machine and the input.

``reduce_base`` is an ordinary tableau reduction.  ``reduce`` post-processes
it: every variable is renamed to ``x[TAG,q]`` where ``TAG`` is the machine's
canonical tag and ``q`` the variable's rank in lexicographic order, and a
tautological disjunction over the fresh variable ``x[TAG,p+1]`` is conjoined
that spells out the input bits.  ``invert`` reads both back off the syntax.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import BudgetExceeded
from .formula import (
    And,
    Formula,
    Free,
    Not,
    Or,
    Tagged,
    Var,
    conj,
    disj,
    literal_of,
    read_formula,
    rename,
    variables,
    write_formula,
)
from .machine import BLANK, MachineDescription, MachineTag, canonical_tag

DEFAULT_MAX_STEPS = 64
JUNK = ("", "")

_SYM_NAME = {"0": "0", "1": "1", BLANK: "b"}


def _cell(t, i, s):
    return Var(Free(f"c_{t}_{i}_{_SYM_NAME[s]}"))


def _head(t, i):
    return Var(Free(f"h_{t}_{i}"))


def _state(t, k):
    return Var(Free(f"q_{t}_{k}"))


def _clause(lits):
    return disj(lits)


def _exactly_one(vs):
    out = [_clause(vs)]
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            out.append(Or((Not(vs[a]), Not(vs[b]))))
    return out


def reduce_base(m: MachineDescription, x: str, max_steps: int = DEFAULT_MAX_STEPS) -> Formula:
    """Tableau formula over free names; satisfiable iff ``m`` accepts ``x``.

    ``c_t_i_s``: cell i holds s at step t; ``h_t_i``: head on cell i;
    ``q_t_k``: machine in the k-th state (sorted order).  Constraints are
    emitted step by step.  A nondeterministic step is one disjunction over
    the applicable transitions; everything else is a clause.
    """
    if any(c not in "01" for c in x):
        raise ValueError(f"input must be a bit string: {x!r}")
    T = m.time_bound(len(x))
    if T > max_steps:
        raise BudgetExceeded(f"time bound {T} exceeds the step budget {max_steps}")
    cells = T + 1
    states = m.sorted_states()
    index = {s: k for k, s in enumerate(states)}
    acc = index[m.accept]
    parts = []

    tape = x + BLANK * (cells - len(x))
    parts += [_cell(0, i, tape[i]) for i in range(cells)]
    parts += [_head(0, 0), _state(0, index[m.start])]

    for t in range(T + 1):
        parts += _exactly_one([_state(t, k) for k in range(len(states))])
        parts += _exactly_one([_head(t, i) for i in range(cells)])
        for i in range(cells):
            parts += _exactly_one([_cell(t, i, s) for s in _SYM_NAME])
        if t == T:
            break
        u = t + 1
        # accepting configurations are frozen
        parts.append(_clause([Not(_state(t, acc)), _state(u, acc)]))
        for i in range(cells):
            parts.append(_clause([Not(_state(t, acc)), Not(_head(t, i)), _head(u, i)]))
        for i in range(cells):
            for s in _SYM_NAME:
                premise = [Not(_state(t, acc)), Not(_head(t, i)), Not(_cell(t, i, s))]
                parts.append(_clause(premise + [_cell(u, i, s)]))
        for k, q in enumerate(states):
            if k == acc:
                continue
            for i in range(cells):
                for s in _SYM_NAME:
                    premise = [Not(_state(t, k)), Not(_head(t, i)), Not(_cell(t, i, s))]
                    options = []
                    for tr in m.moves(q, s):
                        j = max(i - 1, 0) if tr.move == "L" else i + 1 if tr.move == "R" else i
                        if j >= cells:
                            continue
                        option = (_state(u, index[tr.next_state]), _cell(u, i, tr.write), _head(u, j))
                        if option not in options:
                            options.append(option)
                    if not options:
                        parts.append(_clause(premise))
                    elif len(options) == 1:
                        parts += [_clause(premise + [c]) for c in options[0]]
                    else:
                        parts.append(Or(tuple(premise + [And(o) for o in options])))
        # cells away from the head keep their symbol
        for i in range(cells):
            for s in _SYM_NAME:
                parts.append(_clause([_head(t, i), Not(_cell(t, i, s)), _cell(u, i, s)]))

    parts.append(_state(T, acc))
    return conj(parts)


def rename_vars(f: Formula, tag: MachineTag):
    """Rename each variable to ``x[tag,q]``, q its 1-based lexicographic rank.

    Returns ``(renamed, p)`` with ``p = numvars(f)``.
    """
    names = sorted(variables(f))
    if any(isinstance(v, Tagged) for v in names):
        raise ValueError("formula already contains reduction-tagged variables")
    mapping = {v: Tagged(tag, q) for q, v in enumerate(names, start=1)}
    return rename(f, mapping), len(names)


def encode_input_block(tag: MachineTag, p: int, x: str) -> Formula:
    """``~v | v | b_1 | ... | b_n`` over ``v = x[tag,p+1]``; a tautology that records ``x``."""
    v = Var(Tagged(tag, p + 1))
    neg = Not(v)
    bits = []
    for c in x:
        if c == "1":
            bits.append(v)
        elif c == "0":
            bits.append(neg)
        else:
            raise ValueError(f"input must be a bit string: {x!r}")
    return Or((neg, v, *bits))


@dataclass(frozen=True)
class ReductionArtifact:
    formula: Formula
    machine_tag: MachineTag
    input: str
    p: int

    @property
    def body(self) -> Formula:
        return self.formula.children[0]

    @property
    def block(self) -> Formula:
        return self.formula.children[1]


def reduce(m: MachineDescription, x: str, max_steps: int = DEFAULT_MAX_STEPS) -> ReductionArtifact:
    tag = canonical_tag(m)
    body, p = rename_vars(reduce_base(m, x, max_steps), tag)
    return ReductionArtifact(And((body, encode_input_block(tag, p, x))), tag, x, p)


def invert(f: Formula):
    """Recover ``(tag, x)`` from a reduction output, or :data:`JUNK`.

    Only the syntax is checked; a formula can decode to a pair without being
    the reduction of that pair.
    """
    if not isinstance(f, And) or len(f.children) != 2:
        return JUNK
    body, block = f.children
    names = variables(body)
    tags = {v.tag for v in names if isinstance(v, Tagged)}
    if len(tags) != 1 or not all(isinstance(v, Tagged) for v in names):
        return JUNK
    (tag,) = tags
    if not isinstance(block, Or):
        return JUNK
    lits = [literal_of(c) for c in block.children]
    if any(lit is None for lit in lits):
        return JUNK
    v = Tagged(tag, len(names) + 1)
    if any(name != v for name, _ in lits):
        return JUNK
    if lits[0][1] or not lits[1][1]:
        return JUNK
    return tag, "".join("1" if positive else "0" for _, positive in lits[2:])


def write_artifact(path, artifact: ReductionArtifact) -> None:
    write_formula(path, artifact.formula)
    meta = {"machine_tag": artifact.machine_tag, "input": artifact.input, "p": artifact.p}
    Path(meta_path(path)).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def read_artifact(path) -> ReductionArtifact:
    meta = json.loads(Path(meta_path(path)).read_text())
    return ReductionArtifact(read_formula(path), meta["machine_tag"], meta["input"], meta["p"])


def meta_path(path) -> str:
    return str(path) + ".json"


__all__ = [
    "JUNK",
    "ReductionArtifact",
    "encode_input_block",
    "invert",
    "read_artifact",
    "reduce",
    "reduce_base",
    "rename_vars",
    "write_artifact",
]
