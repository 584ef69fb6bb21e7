"""Deterministic table producers shared by the acceptance tests.

Each function returns plain text so a second run, in this process or a
fresh one, can be compared byte for byte.  ``python3 acceptance_runs.py
NAME`` prints one table.
"""

from __future__ import annotations

import hashlib
import sys
from functools import lru_cache

from backbone_lab.backbone import backbone_value, value_bits, verify_backbone
from backbone_lab.formula import serialize_formula
from backbone_lab.frequency import adapter, enumerate_family, transfer_check, strings_up_to
from backbone_lab.gadgets import ConstructionParams, build_a3k, f_backbone, membership_test
from backbone_lab.machine import accepts, fixture
from backbone_lab.reduction import reduce
from backbone_lab.sat import solve

PAIR = ("lastbit0", "lastbit1")
INPUTS = tuple(strings_up_to(4))


def digest(f) -> str:
    return hashlib.sha256(serialize_formula(f).encode()).hexdigest()[:16]


@lru_cache(maxsize=None)
def reduction_rows():
    rows = []
    for name in PAIR:
        m = fixture(name)
        for x in INPUTS:
            art = reduce(m, x)
            rows.append((name, x, solve(art.formula).sat, accepts(m, x), digest(art.formula)))
    return tuple(rows)


def reduction_text() -> str:
    return "".join(f"{n}\t{x}\t{int(s)}\t{int(a)}\t{d}\n" for n, x, s, a, d in reduction_rows())


def a3k_params(k):
    return ConstructionParams(fixture(PAIR[0]), fixture(PAIR[1]), k=k)


@lru_cache(maxsize=None)
def a3k_instances():
    out = []
    for k in (1, 2, 3):
        p = a3k_params(k)
        for x in INPUTS:
            out.append((k, x, build_a3k(p, x)))
    return tuple(out)


@lru_cache(maxsize=None)
def a3k_rows():
    rows = []
    for k, x, g in a3k_instances():
        p = a3k_params(k)
        sat = solve(g.formula).sat
        member = membership_test(g.formula, p)
        s = f_backbone(g)
        value = backbone_value(g.formula, s)
        verified = verify_backbone(g.formula, s, value)
        rows.append((k, x, sat, member, verified, value_bits(value), accepts(p.machine_i, x), digest(g.formula)))
    return tuple(rows)


def a3k_text() -> str:
    return "".join(
        f"{k}\t{x}\t{int(s)}\t{int(mb)}\t{int(v)}\t{bits}\t{int(a)}\t{d}\n"
        for k, x, s, mb, v, bits, a, d in a3k_rows()
    )


FREQ_ADAPTERS = ("all-true", "all-false", "oracle")


@lru_cache(maxsize=None)
def family():
    return enumerate_family(a3k_params(1), 4)


@lru_cache(maxsize=None)
def transfer_reports():
    return tuple(transfer_check(adapter(name), a3k_params(1), 4, family()) for name in FREQ_ADAPTERS)


def transfer_text() -> str:
    members = family()
    lines = [f"gadgets {len(members)} distinct {len({digest(m.gadget.formula) for m in members})}\n"]
    for r in transfer_reports():
        lines.append(r.text())
        lines.append("wrong " + ",".join(r.wrong_inputs) + "\n")
    return "".join(lines)


TABLES = {"reduction": reduction_text, "a3k": a3k_text, "transfer": transfer_text}


if __name__ == "__main__":
    sys.stdout.write(TABLES[sys.argv[1]]())
