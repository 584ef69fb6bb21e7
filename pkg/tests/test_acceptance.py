"""Acceptance criteria.  One test per criterion; the first docstring line is
the summary printed at the end of the run."""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

import acceptance_runs as runs
from backbone_lab.backbone import (
    attains_both_values,
    backbone_value,
    frozen_vars_brute,
    frozen_vars_sat,
    value_bits,
    verify_backbone,
)
from backbone_lab.exact import frozen_vars_exact
from backbone_lab.formula import (
    And,
    Free,
    Not,
    Or,
    Tagged,
    Var,
    numvars,
    parse_formula,
    random_formula,
    serialize_formula,
)
from backbone_lab.frequency import strings_up_to
from backbone_lab.gadgets import (
    ConstructionParams,
    Side,
    build_thm3,
    classify_backbone_side,
    compute_m,
    designated_backbone,
)
from backbone_lab.machine import accepts, canonical_tag, fixture
from backbone_lab.reduction import JUNK, encode_input_block, invert, reduce, rename_vars

from oracles import frozen_table, is_backbone_by_definition, linear_scan_m

HERE = Path(__file__).parent
X1, X2 = Free("x1"), Free("x2")


def test_criterion_01_backbone_semantics():
    """criterion 1: worked backbone examples reproduce exactly (< 1 s)"""
    start = time.perf_counter()
    f = parse_formula("(and (var x1) (not (var x2)))")
    report = frozen_vars_brute(f)
    assert report.satisfiable and report.frozen == {X1: True, X2: False}
    assert value_bits(backbone_value(f, report.frozen)) == "10"
    expected = {(): "", (X1,): "1", (X2,): "0", (X1, X2): "10"}
    for s, bits in expected.items():
        value = backbone_value(f, s)
        assert value_bits(value) == bits
        assert verify_backbone(f, s, value)
        assert is_backbone_by_definition(f, s, value)
    g = parse_formula("(or (var x1) (not (var x2)))")
    report = frozen_vars_brute(g)
    assert report.satisfiable and report.frozen == {}
    assert time.perf_counter() - start < 1.0


def test_criterion_02_reduction_correctness():
    """criterion 2: solve(reduce(M,x)) sat iff M accepts x, 60 checks (< 2 min)"""
    start = time.perf_counter()
    rows = runs.reduction_rows()
    assert len(rows) == 60
    mismatches = [(n, x) for n, x, sat, acc, _ in rows if sat != acc]
    assert mismatches == []
    assert time.perf_counter() - start < 120


def _junk_corpus():
    """100 formulas outside the reduction image, all malformed as reduction outputs."""
    rng = random.Random(2024)
    images = [reduce(fixture(n), x).formula for n in runs.PAIR for x in runs.INPUTS]
    other = canonical_tag(fixture("no11"))
    out = []
    for _ in range(30):
        out.append(random_formula(rng, rng.randint(1, 6), rng.randint(1, 20)))
    while len(out) < 100:
        f = rng.choice(images)
        body, block = f.children
        v = block.children[1].name
        lits = list(block.children)
        kind = len(out) % 7
        if kind == 0:
            out.append(body)  # block dropped
        elif kind == 1:
            out.append(And((body, block, block)))
        elif kind == 2:
            out.append(And((block, body)))  # parts swapped
        elif kind == 3:
            out.append(And((body, Or((lits[1], lits[0], *lits[2:])))))
        elif kind == 4:
            wrong = Var(Tagged(v.tag, v.index + 1))
            out.append(And((body, Or((Not(wrong), wrong, *lits[2:])))))
        elif kind == 5:
            out.append(And((And((body, Var(Tagged(other, 1)))), block)))  # two tags
        else:
            out.append(And((body, And(tuple(lits)))))
    return out


def test_criterion_03_inversion():
    """criterion 3: invert recovers (tag, x) on 60 images and gives JUNK on 100 non-images"""
    for name in runs.PAIR:
        m = fixture(name)
        for x in runs.INPUTS:
            assert invert(reduce(m, x).formula) == (canonical_tag(m), x)
    corpus = _junk_corpus()
    assert len(corpus) == 100
    assert len({serialize_formula(f) for f in corpus}) >= 60
    assert [invert(f) for f in corpus] == [JUNK] * 100


def test_criterion_04_appendix_example():
    """criterion 4: renaming and input-block worked example, byte-exact"""
    f = parse_formula("(and (var z1) (not (var z1)) (not (var w)))")
    renamed, p = rename_vars(f, "T")
    assert p == 2
    want = (HERE / "fixtures" / "appendix_renamed.bf").read_bytes()
    assert (serialize_formula(renamed) + "\n").encode() == want
    block = encode_input_block("T", p, "101")
    want = (HERE / "fixtures" / "appendix_block.bf").read_bytes()
    assert (serialize_formula(block) + "\n").encode() == want
    v = Var(Tagged("T", 3))
    assert block.children == (Not(v), v, v, Not(v), v)
    full = And((renamed, block))
    want = (HERE / "fixtures" / "appendix_full.bf").read_bytes()
    assert (serialize_formula(full) + "\n").encode() == want
    assert invert(full) == ("T", "101")


def test_criterion_05_a3k_structure():
    """criterion 5: a3k gadgets for k in 1..3, |x| <= 4: sat, member, f's set verifies, value reveals x (90)"""
    rows = runs.a3k_rows()
    assert len(rows) == 90
    for k, x, sat, member, verified, bits, acc, _ in rows:
        assert sat and member and verified, (k, x)
        assert len(bits) == k
        assert (bits == "1" * k) == acc and (bits == "0" * k) == (not acc), (k, x)


EPSILONS = (Fraction(1), Fraction(1, 2))
THM3_INPUTS = tuple(strings_up_to(3))


@pytest.fixture(scope="module")
def thm3_instances():
    out = []
    for eps in EPSILONS:
        p = ConstructionParams(fixture(runs.PAIR[0]), fixture(runs.PAIR[1]), epsilon=eps)
        for x in THM3_INPUTS:
            out.append((eps, x, build_thm3(p, x), accepts(p.machine_i, x)))
    return out


def _m_passes(m, total, eps):
    return Fraction(m, total + 2 * m) >= (50 - eps) / 100


def test_criterion_06_thm3_structure(thm3_instances):
    """criterion 6: thm3 gadgets for eps in {1, 1/2}, |x| <= 3: m minimal, backbone verifies, free guards, side"""
    assert len(thm3_instances) == 28
    for eps, x, g, member in thm3_instances:
        total = numvars(g.left) + numvars(g.right)
        assert g.m == compute_m(numvars(g.left), numvars(g.right), eps) == linear_scan_m(total, eps)
        assert _m_passes(g.m, total, eps) and not _m_passes(g.m - 1, total, eps)
        a = designated_backbone(g, member)
        assert verify_backbone(g.formula, a.keys(), a), (eps, x)
        assert Fraction(len(a), numvars(g.formula)) >= (50 - eps) / 100
        free = g.guard_vars_right if member else g.z_vars
        assert attains_both_values(g.formula, free), (eps, x)
        side = classify_backbone_side(g, a.keys())
        assert side is (Side.LEFT if member else Side.RIGHT)


def test_criterion_07_compute_m_spot_values():
    """criterion 7: compute_m gives 49 and 2450, matching the linear scan"""
    assert compute_m(1, 1, 1) == 49 == linear_scan_m(2, 1)
    assert compute_m(50, 50, 1) == 2450 == linear_scan_m(100, 1)
    assert compute_m(60, 40, 1) == 2450
    assert not _m_passes(48, 2, Fraction(1))


def test_criterion_08_method_agreement(thm3_instances):
    """criterion 8: brute == sat on 1000 random formulas and exhaustive == sat on all gadgets"""
    rng = random.Random(8)
    for _ in range(1000):
        f = random_formula(rng, rng.randint(1, 14), rng.randint(1, 40))
        brute, sat = frozen_vars_brute(f), frozen_vars_sat(f)
        assert (brute.satisfiable, brute.frozen) == (sat.satisfiable, sat.frozen)
    # spot-check the vectorised table against plain enumeration
    for _ in range(50):
        f = random_formula(rng, rng.randint(1, 8), rng.randint(1, 25))
        brute = frozen_vars_brute(f)
        assert (brute.satisfiable, brute.frozen) == frozen_table(f)
    # gadgets have hundreds to tens of thousands of variables: the exhaustive
    # side splits them into independent pieces before enumerating
    gadgets = [g for _, _, g in runs.a3k_instances()] + [g for _, _, g, _ in thm3_instances]
    assert len(gadgets) == 118
    for g in gadgets:
        exact = frozen_vars_exact(g.formula)
        sat = frozen_vars_sat(g.formula)
        assert (exact.satisfiable, exact.frozen) == (sat.satisfiable, sat.frozen), g.x


def test_criterion_09_frequency_transfer():
    """criterion 9: injective over |x| <= 4, transfer inequality pointwise, all-true errs on 15 of 30 (< 5 min)"""
    start = time.perf_counter()
    members = runs.family()
    assert len(members) == 30
    assert len({serialize_formula(m.gadget.formula) for m in members}) == 30
    reports = dict(zip(runs.FREQ_ADAPTERS, runs.transfer_reports()))
    for name, report in reports.items():
        assert report.holds, name
        for row in report.rows:
            assert row.errors_b <= row.errors_a
    ending_in_1 = tuple(x for x in runs.INPUTS if x.endswith("1"))
    assert len(ending_in_1) == 15
    assert reports["all-true"].wrong_inputs == ending_in_1
    assert reports["all-true"].rows[-1].errors_a == 15
    assert reports["all-false"].rows[-1].errors_a == 15
    assert reports["oracle"].rows[-1].errors_a == 0 and reports["oracle"].wrong_inputs == ()
    assert time.perf_counter() - start < 300


def test_criterion_10_determinism():
    """criterion 10: criteria 2, 5 and 9 tables are byte-identical when re-run in a fresh process"""
    env = dict(os.environ, PYTHONHASHSEED="12345")
    for name, produce in runs.TABLES.items():
        first = produce().encode()
        proc = subprocess.run(
            [sys.executable, str(HERE / "acceptance_runs.py"), name],
            capture_output=True, env=env, cwd=HERE, check=True,
        )
        assert proc.stdout == first, name
