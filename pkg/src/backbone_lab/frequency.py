"""Error-count bookkeeping between a gadget family and the language it encodes.

The map ``x -> gadget(x)`` is one-to-one with polynomially bounded output
length.  Any heuristic for backbone values on the gadgets therefore yields a
heuristic for membership in ``L(machine_i)``, and the second one errs on at
most as many inputs of length ``<= n`` as the first errs on gadgets of length
``<= L(n)``, the longest gadget of an input of length ``<= n``.  Here both
sides are counted directly on an enumerated range.
"""

from __future__ import annotations

import itertools
import math
import statistics
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .backbone import backbone_value, frozen_vars_sat, verify_backbone
from .errors import DomainMismatch, InconsistentOracle
from .formula import Formula, VarName, ZVar, numvars, serialize_formula, variables
from .gadgets import (
    A3K,
    ConstructionParams,
    GadgetInstance,
    Side,
    build,
    classify_backbone_side,
    decide_via_backbone_value,
    f_backbone,
)
from .machine import accepts
from .reduction import JUNK, invert


def strings_up_to(max_n: int):
    """Nonempty bit strings of length ``<= max_n``, shortest first, then lexicographic."""
    for n in range(1, max_n + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


@dataclass(frozen=True)
class FamilyMember:
    x: str
    gadget: GadgetInstance
    length: int  # characters in the serialized formula


def enumerate_family(params: ConstructionParams, max_n: int) -> List[FamilyMember]:
    if max_n < 1:
        raise ValueError("max_n must be positive")
    out, seen = [], {}
    for x in strings_up_to(max_n):
        g = build(params, x)
        text = serialize_formula(g.formula)
        if text in seen:
            raise AssertionError(f"inputs {seen[text]!r} and {x!r} give the same gadget")
        seen[text] = x
        out.append(FamilyMember(x, g, len(text)))
    return out


# --------------------------------------------------------------------------
# heuristics


@dataclass(frozen=True)
class HeuristicAdapter:
    name: str
    answer: Callable[[Formula], Mapping[VarName, bool]]


def _guards(f: Formula, primed: bool):
    return sorted(v for v in variables(f) if isinstance(v, ZVar) and v.primed == primed)


def _all_true(f):
    return {v: True for v in _guards(f, False)}


def _all_false(f):
    guards = _guards(f, True) or _guards(f, False)
    return {v: False for v in guards}


def _parity_of_length(f):
    """Guess membership from the parity of the embedded input's length."""
    decoded = invert(f.children[0].children[-1]) if f.children else JUNK
    return _all_true(f) if len(decoded[1]) % 2 == 0 else _all_false(f)


def _oracle(f):
    zs = [v for v in variables(f) if isinstance(v, ZVar)]
    return dict(frozen_vars_sat(f, among=zs).frozen)


ADAPTERS: Dict[str, HeuristicAdapter] = {
    a.name: a
    for a in (
        HeuristicAdapter("all-true", _all_true),
        HeuristicAdapter("all-false", _all_false),
        HeuristicAdapter("parity-of-length", _parity_of_length),
        HeuristicAdapter("oracle", _oracle),
    )
}


def adapter(name: str) -> HeuristicAdapter:
    try:
        return ADAPTERS[name]
    except KeyError:
        raise ValueError(f"unknown heuristic {name!r}; choose from {sorted(ADAPTERS)}") from None


# --------------------------------------------------------------------------
# counting


def truth_a3k(g: GadgetInstance) -> dict:
    return backbone_value(g.formula, f_backbone(g))


def answer_is_correct(g: GadgetInstance, answer: Mapping[VarName, bool], truth=None) -> bool:
    """a3k: the answer is the value of ``f``'s backbone.  thm3: the answer is a
    backbone value whose domain covers at least ``50 - epsilon`` percent of the variables."""
    if g.family == A3K:
        expected = (truth or truth_a3k)(g)
        return dict(answer) == expected
    if Fraction(len(answer), numvars(g.formula)) < g.threshold():
        return False
    return verify_backbone(g.formula, answer.keys(), answer)


@dataclass(frozen=True)
class ErrorCurve:
    """Cumulative error count over gadgets sorted by serialized length."""

    lengths: Tuple[int, ...]
    cumulative: Tuple[int, ...]

    def __call__(self, n: int) -> int:
        i = bisect_right(self.lengths, n)
        return self.cumulative[i - 1] if i else 0

    def as_dict(self) -> Dict[int, int]:
        return dict(zip(self.lengths, self.cumulative))


def error_count_on_A(adapter: HeuristicAdapter, members: List[FamilyMember], truth=None) -> ErrorCurve:
    wrong = _wrong_on_A(adapter, members, truth)
    return _curve([(m.length, w) for m, w in zip(members, wrong)])


def _wrong_on_A(adapter, members, truth):
    return [not answer_is_correct(m.gadget, adapter.answer(m.gadget.formula), truth) for m in members]


def _curve(pairs) -> ErrorCurve:
    pairs = sorted(pairs, key=lambda p: p[0])
    lengths, cumulative, total = [], [], 0
    for length, wrong in pairs:
        total += int(wrong)
        if lengths and lengths[-1] == length:
            cumulative[-1] = total
        else:
            lengths.append(length)
            cumulative.append(total)
    return ErrorCurve(tuple(lengths), tuple(cumulative))


def induced_guess(params: ConstructionParams, m: FamilyMember, answer) -> Optional[bool]:
    """The B-heuristic's guess for ``m.x``; ``None`` when the answer cannot be read."""
    g = m.gadget
    if g.family == A3K:
        try:
            return decide_via_backbone_value(params, m.x, lambda _: answer, gadget=g)
        except (DomainMismatch, InconsistentOracle):
            return None
    if not answer:
        return None
    side = classify_backbone_side(g, answer.keys())
    return {Side.LEFT: True, Side.RIGHT: False}.get(side)


# --------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class DensityRecord:
    n: int
    count: int
    max_len: int


@dataclass(frozen=True)
class DensityProfile:
    records: Tuple[DensityRecord, ...]
    q_hat: Optional[float]
    residual: Optional[float]

    @property
    def epsilon_hat(self) -> Optional[float]:
        return 1 / self.q_hat if self.q_hat else None


def density_profile(members: List[FamilyMember]) -> DensityProfile:
    records = []
    for n in sorted({len(m.x) for m in members}):
        upto = [m for m in members if len(m.x) <= n]
        records.append(DensityRecord(n, len(upto), max(m.length for m in upto)))
    pts = [(math.log(r.n), math.log(r.max_len)) for r in records if r.n >= 2]
    if len(pts) < 2:
        return DensityProfile(tuple(records), None, None)
    xs, ys = zip(*pts)
    slope, intercept = statistics.linear_regression(xs, ys)
    rms = math.sqrt(sum((y - slope * x - intercept) ** 2 for x, y in pts) / len(pts))
    return DensityProfile(tuple(records), slope, rms)


@dataclass(frozen=True)
class TransferRow:
    n: int
    a_count: int
    max_len: int
    errors_a: int
    errors_b: int


@dataclass(frozen=True)
class TransferReport:
    adapter: str
    family: str
    rows: Tuple[TransferRow, ...]
    profile: DensityProfile
    wrong_inputs: Tuple[str, ...] = field(default=())

    @property
    def holds(self) -> bool:
        return all(r.errors_b <= r.errors_a for r in self.rows)

    def text(self) -> str:
        lines = [
            f"# adapter {self.adapter}; family {self.family}",
            "# errors_A counts measured adapter mistakes on gadgets of length <= max_len;",
            "# it is an observed count, not an assumed hardness bound",
            "n\tA_le_n\tmax_len\terrors_A\terrors_B_induced",
        ]
        lines += [f"{r.n}\t{r.a_count}\t{r.max_len}\t{r.errors_a}\t{r.errors_b}" for r in self.rows]
        p = self.profile
        fmt = lambda v: "n/a" if v is None else f"{v:.6f}"  # noqa: E731
        lines += [
            "",
            f"q_hat\t{fmt(p.q_hat)}",
            f"residual\t{fmt(p.residual)}",
            f"epsilon_hat\t{fmt(p.epsilon_hat)}",
            f"transfer_holds\t{'yes' if self.holds else 'no'}",
        ]
        return "\n".join(lines) + "\n"


def transfer_check(
    adapter: HeuristicAdapter,
    params: ConstructionParams,
    max_n: int,
    members: Optional[List[FamilyMember]] = None,
) -> TransferReport:
    members = enumerate_family(params, max_n) if members is None else members
    truth_cache = {}

    def truth(g):
        if g.x not in truth_cache:
            truth_cache[g.x] = truth_a3k(g)
        return truth_cache[g.x]

    answers = [adapter.answer(m.gadget.formula) for m in members]
    wrong_a = [not answer_is_correct(m.gadget, a, truth) for m, a in zip(members, answers)]
    curve_a = _curve([(m.length, w) for m, w in zip(members, wrong_a)])
    wrong_b = [
        induced_guess(params, m, a) != accepts(params.machine_i, m.x) for m, a in zip(members, answers)
    ]
    profile = density_profile(members)
    rows = []
    for rec in profile.records:
        errors_b = sum(w for m, w in zip(members, wrong_b) if len(m.x) <= rec.n)
        a_count = sum(1 for m in members if m.length <= rec.max_len)
        rows.append(TransferRow(rec.n, a_count, rec.max_len, curve_a(rec.max_len), errors_b))
    wrong_inputs = tuple(m.x for m, w in zip(members, wrong_b) if w)
    return TransferReport(adapter.name, params.family, tuple(rows), profile, wrong_inputs)


__all__ = [
    "ADAPTERS",
    "DensityProfile",
    "DensityRecord",
    "ErrorCurve",
    "FamilyMember",
    "HeuristicAdapter",
    "TransferReport",
    "TransferRow",
    "adapter",
    "answer_is_correct",
    "density_profile",
    "enumerate_family",
    "error_count_on_A",
    "induced_guess",
    "strings_up_to",
    "transfer_check",
]
