"""Gadget families built from two complementary machines.

Both families glue the reductions ``L = reduce(N_i, x)`` and
``R = reduce(N_j, x)`` into one disjunction guarded by a series of fresh
variables:

* ``a3k``:  ``(z.1 & ... & z.k & L) | (~z.1 & ... & ~z.k & R)``
* ``thm3``: ``(z.1 & ... & z.m & L) | (~zp.1 & ... & ~zp.m & R)``, with
  ``m`` large enough that the guard series alone makes up nearly half of
  all variables.

When ``N_i`` and ``N_j`` accept complementary languages exactly one of
``L`` and ``R`` is satisfiable, so the guard series is forced and its value
says which machine accepted ``x``.
"""

from __future__ import annotations

import enum
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping, Optional

from .errors import (
    BudgetExceeded,
    DomainMismatch,
    InconsistentOracle,
    NotComplementary,
    WrongFamily,
)
from .formula import (
    And,
    Formula,
    Not,
    Or,
    Tagged,
    Var,
    VarName,
    ZVar,
    literal_of,
    numvars,
    read_formula,
    variables,
    write_formula,
)
from .machine import MachineDescription, accepts, canonical_tag
from .reduction import DEFAULT_MAX_STEPS, JUNK, invert, reduce

log = logging.getLogger(__name__)

A3K = "a3k"
THM3 = "thm3"


def parse_epsilon(value) -> Fraction:
    eps = Fraction(value)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
    return eps


@dataclass(frozen=True)
class ConstructionParams:
    machine_i: MachineDescription
    machine_j: MachineDescription
    k: Optional[int] = None
    epsilon: Optional[Fraction] = None
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if (self.k is None) == (self.epsilon is None):
            raise ValueError("give exactly one of k and epsilon")
        if self.k is not None and (not isinstance(self.k, int) or self.k < 1):
            raise ValueError("k must be a positive integer")
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", parse_epsilon(self.epsilon))
        if self.tag_i == self.tag_j:
            raise ValueError("the two machines must have different tags")

    @property
    def family(self) -> str:
        return A3K if self.k is not None else THM3

    @property
    def tag_i(self) -> str:
        return canonical_tag(self.machine_i)

    @property
    def tag_j(self) -> str:
        return canonical_tag(self.machine_j)


@dataclass(frozen=True)
class GadgetInstance:
    formula: Formula
    x: str
    family: str
    size: int  # k for a3k, m for thm3
    epsilon: Optional[Fraction]
    left: Formula
    right: Formula
    tag_i: str
    tag_j: str

    @property
    def k(self) -> int:
        if self.family != A3K:
            raise WrongFamily("k is defined for a3k gadgets only")
        return self.size

    @property
    def m(self) -> int:
        if self.family != THM3:
            raise WrongFamily("m is defined for thm3 gadgets only")
        return self.size

    @property
    def left_vars(self) -> frozenset:
        return variables(self.left)

    @property
    def right_vars(self) -> frozenset:
        return variables(self.right)

    @property
    def z_vars(self) -> tuple:
        return tuple(ZVar(i) for i in range(1, self.size + 1))

    @property
    def guard_vars_right(self) -> tuple:
        """Variables negated in front of ``R``: ``z`` for a3k, ``zp`` for thm3."""
        if self.family == A3K:
            return self.z_vars
        return tuple(ZVar(i, primed=True) for i in range(1, self.size + 1))

    def threshold(self) -> Fraction:
        return (50 - self.epsilon) / 100


def _guarded(guards, polarity, body):
    lits = [Var(v) if polarity else Not(Var(v)) for v in guards]
    return And((*lits, body))


def _check_complementary(params: ConstructionParams, x: str) -> bool:
    a = accepts(params.machine_i, x)
    b = accepts(params.machine_j, x)
    if a == b:
        raise NotComplementary(f"both machines {'accept' if a else 'reject'} {x!r}")
    return a


def _reductions(params: ConstructionParams, x: str):
    _check_complementary(params, x)
    left = reduce(params.machine_i, x, params.max_steps).formula
    right = reduce(params.machine_j, x, params.max_steps).formula
    return left, right


def build_a3k(params: ConstructionParams, x: str) -> GadgetInstance:
    if params.family != A3K:
        raise WrongFamily("a3k gadgets need k")
    left, right = _reductions(params, x)
    zs = [ZVar(i) for i in range(1, params.k + 1)]
    f = Or((_guarded(zs, True, left), _guarded(zs, False, right)))
    return GadgetInstance(f, x, A3K, params.k, None, left, right, params.tag_i, params.tag_j)


def build_thm3(params: ConstructionParams, x: str) -> GadgetInstance:
    if params.family != THM3:
        raise WrongFamily("thm3 gadgets need epsilon")
    left, right = _reductions(params, x)
    m = compute_m(numvars(left), numvars(right), params.epsilon)
    zs = [ZVar(i) for i in range(1, m + 1)]
    zps = [ZVar(i, primed=True) for i in range(1, m + 1)]
    f = Or((_guarded(zs, True, left), _guarded(zps, False, right)))
    return GadgetInstance(f, x, THM3, m, params.epsilon, left, right, params.tag_i, params.tag_j)


def build(params: ConstructionParams, x: str) -> GadgetInstance:
    return build_a3k(params, x) if params.family == A3K else build_thm3(params, x)


def f_backbone(g: GadgetInstance) -> frozenset:
    """The guard set ``{z.1..z.k}``, read off the construction with no solving."""
    if g.family != A3K:
        raise WrongFamily("f is defined on a3k gadgets only")
    return frozenset(g.z_vars)


def designated_backbone(g: GadgetInstance, member: bool) -> dict:
    """The guard backbone the construction promises, with its value.

    ``member`` says whether ``x`` is accepted by ``machine_i``.
    """
    if g.family == A3K:
        return {v: member for v in g.z_vars}
    return {v: member for v in (g.z_vars if member else g.guard_vars_right)}


# --------------------------------------------------------------------------
# m


def _m_ok(m: int, total: int, eps: Fraction) -> bool:
    return Fraction(m, total + 2 * m) >= (50 - eps) / 100


def compute_m(v_i: int, v_j: int, epsilon) -> int:
    """Least ``m >= 1`` with ``m / (v_i + v_j + 2m) >= (50 - epsilon)/100``."""
    eps = parse_epsilon(epsilon)
    if v_i < 1 or v_j < 1:
        raise ValueError("variable counts must be positive")
    total = v_i + v_j
    t = (50 - eps) / 100
    m = max(1, math.ceil(t * total / (1 - 2 * t)))
    while not _m_ok(m, total, eps):
        m += 1
    while m > 1 and _m_ok(m - 1, total, eps):
        m -= 1
    return m


# --------------------------------------------------------------------------
# membership


def _split_guard(side: Formula, count: Optional[int], primed: bool, polarity: bool):
    """``(guard_count, body)`` if ``side`` is ``guard_1 & ... & guard_c & body``."""
    if not isinstance(side, And):
        return None
    *guards, body = side.children
    if count is not None and len(guards) != count:
        return None
    for i, g in enumerate(guards, start=1):
        if literal_of(g) != (ZVar(i, primed), polarity):
            return None
    return len(guards), body


def membership_test(y: Formula, params: ConstructionParams) -> bool:
    """True iff ``y`` is exactly the gadget of ``params`` for some input."""
    try:
        return _member(y, params)
    except BudgetExceeded:
        log.info("membership test ran out of budget recomputing a reduction")
        return False


def _member(y, params):
    if not isinstance(y, Or) or len(y.children) != 2:
        return False
    thm3 = params.family == THM3
    lhs = _split_guard(y.children[0], None if thm3 else params.k, False, True)
    rhs = _split_guard(y.children[1], None if thm3 else params.k, thm3, False)
    if lhs is None or rhs is None or lhs[0] != rhs[0]:
        return False
    (size, left), (_, right) = lhs, rhs
    if thm3 and size != compute_m(numvars(left), numvars(right), params.epsilon):
        return False
    decoded_i = invert(left)
    decoded_j = invert(right)
    if decoded_i == JUNK or decoded_j == JUNK:
        return False
    (tag_i, x1), (tag_j, x2) = decoded_i, decoded_j
    if x1 != x2 or tag_i != params.tag_i or tag_j != params.tag_j:
        return False
    if reduce(params.machine_i, x1, params.max_steps).formula != left:
        return False
    return reduce(params.machine_j, x2, params.max_steps).formula == right


# --------------------------------------------------------------------------
# reading answers back


def decide_via_backbone_value(
    params: ConstructionParams,
    x: str,
    value_oracle: Callable[[GadgetInstance], Mapping[VarName, bool]],
    gadget: Optional[GadgetInstance] = None,
) -> bool:
    """Membership of ``x`` in ``L(machine_i)`` as claimed by a backbone-value oracle."""
    g = build_a3k(params, x) if gadget is None else gadget
    expected = f_backbone(g)
    value = value_oracle(g)
    if set(value) != expected:
        raise DomainMismatch("oracle must assign exactly the guard variables")
    seen = set(value.values())
    if len(seen) != 1:
        raise InconsistentOracle("oracle gave the guard variables mixed values")
    return seen.pop()


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    IMPOSSIBLE = "impossible"


def classify_backbone_side(g: GadgetInstance, s) -> Side:
    """Which disjunct a backbone ``s`` of a thm3 gadget points at.

    The satisfiable side's guards are forced and the other side's guards
    and reduction variables are free, so a backbone can only mention
    variables of one side.
    """
    s = frozenset(s)
    if not s:
        raise ValueError("the empty backbone says nothing about the side")
    zs = {v for v in s if isinstance(v, ZVar) and not v.primed}
    zps = {v for v in s if isinstance(v, ZVar) and v.primed}
    if zs and zps:
        return Side.IMPOSSIBLE
    if zs:
        return Side.LEFT
    if zps:
        return Side.RIGHT
    if g.family == THM3 and Fraction(len(s), numvars(g.formula)) >= Fraction(2 * g.epsilon, 100):
        # too many to fit inside the reductions alone
        return Side.IMPOSSIBLE
    if not all(isinstance(v, Tagged) for v in s):
        return Side.IMPOSSIBLE
    tags = {v.tag for v in s}
    if len(tags) != 1:
        return Side.IMPOSSIBLE
    (tag,) = tags
    if tag == g.tag_i:
        return Side.LEFT
    if tag == g.tag_j:
        return Side.RIGHT
    return Side.IMPOSSIBLE


# --------------------------------------------------------------------------
# files


def write_gadget(path, g: GadgetInstance) -> None:
    write_formula(path, g.formula)
    meta = {"family": g.family, "x": g.x, "tag_i": g.tag_i, "tag_j": g.tag_j}
    if g.family == A3K:
        meta["k"] = g.size
    else:
        meta["epsilon"] = str(g.epsilon)
        meta["m"] = g.size
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def read_gadget(path) -> GadgetInstance:
    meta = json.loads(Path(str(path) + ".json").read_text())
    f = read_formula(path)
    left = f.children[0].children[-1]
    right = f.children[1].children[-1]
    family = meta["family"]
    size = meta["k"] if family == A3K else meta["m"]
    eps = Fraction(meta["epsilon"]) if family == THM3 else None
    return GadgetInstance(f, meta["x"], family, size, eps, left, right, meta["tag_i"], meta["tag_j"])


__all__ = [
    "A3K",
    "THM3",
    "ConstructionParams",
    "GadgetInstance",
    "Side",
    "build",
    "build_a3k",
    "build_thm3",
    "classify_backbone_side",
    "compute_m",
    "decide_via_backbone_value",
    "designated_backbone",
    "f_backbone",
    "membership_test",
    "parse_epsilon",
    "read_gadget",
    "write_gadget",
]
