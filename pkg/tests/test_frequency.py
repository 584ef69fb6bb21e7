from fractions import Fraction

import pytest

from backbone_lab.frequency import (
    ADAPTERS,
    ErrorCurve,
    adapter,
    enumerate_family,
    error_count_on_A,
    strings_up_to,
    transfer_check,
)
from backbone_lab.gadgets import ConstructionParams, membership_test
from backbone_lab.machine import fixture

P_A3K = ConstructionParams(fixture("lastbit0"), fixture("lastbit1"), k=1)


@pytest.fixture(scope="module")
def family3():
    return enumerate_family(P_A3K, 3)


def test_strings_order():
    assert list(strings_up_to(2)) == ["0", "1", "00", "01", "10", "11"]
    assert len(list(strings_up_to(4))) == 30


def test_enumerate_small():
    members = enumerate_family(P_A3K, 2)
    assert [m.x for m in members] == ["0", "1", "00", "01", "10", "11"]
    assert all(membership_test(m.gadget.formula, P_A3K) for m in members)


def test_lengths_nondecreasing(family3):
    lengths = [m.length for m in family3]
    by_n = {}
    for m in family3:
        by_n.setdefault(len(m.x), []).append(m.length)
    ns = sorted(by_n)
    assert all(max(by_n[a]) <= min(by_n[b]) for a, b in zip(ns, ns[1:]))
    assert len(set(lengths)) >= 3


def test_error_counts(family3):
    truth_wrong = {m.x for m in family3 if m.x.endswith("1")}
    curve = error_count_on_A(adapter("all-true"), family3)
    assert curve(10**9) == len(truth_wrong) == 7
    assert error_count_on_A(adapter("all-false"), family3)(10**9) == 7
    assert error_count_on_A(adapter("oracle"), family3)(10**9) == 0
    values = list(curve.as_dict().values())
    assert values == sorted(values)


def test_error_curve_lookup():
    c = ErrorCurve((5, 9), (1, 3))
    assert (c(4), c(5), c(8), c(9), c(100)) == (0, 1, 1, 3, 3)


@pytest.mark.parametrize("name", sorted(ADAPTERS))
def test_transfer_holds_for_builtins(name, family3):
    report = transfer_check(adapter(name), P_A3K, 3, family3)
    assert report.holds
    errs_b = [r.errors_b for r in report.rows]
    assert errs_b == sorted(errs_b)


def test_transfer_report_contents(family3):
    report = transfer_check(adapter("all-true"), P_A3K, 3, family3)
    assert report.wrong_inputs == ("1", "01", "11", "001", "011", "101", "111")
    text = report.text()
    assert "n\tA_le_n\tmax_len\terrors_A\terrors_B_induced" in text
    assert "observed count" in text
    assert report.profile.q_hat is not None and report.profile.epsilon_hat == 1 / report.profile.q_hat


def test_thm3_family_transfer():
    p = ConstructionParams(fixture("lastbit0"), fixture("lastbit1"), epsilon=Fraction(1))
    members = enumerate_family(p, 2)
    for name in ("all-true", "all-false", "oracle"):
        report = transfer_check(adapter(name), p, 2, members)
        assert report.holds
    assert transfer_check(adapter("oracle"), p, 2, members).rows[-1].errors_a == 0


def test_unknown_adapter():
    with pytest.raises(ValueError):
        adapter("nope")
