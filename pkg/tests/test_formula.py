import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from backbone_lab.errors import EmptyFormulaError, FormulaSyntaxError, UnboundVariableError
from backbone_lab.formula import (
    And,
    Free,
    Not,
    Or,
    Tagged,
    Var,
    ZVar,
    evaluate,
    numvars,
    parse_formula,
    parse_name,
    random_formula,
    rename,
    serialize_formula,
    substitute,
    variables,
    var,
)

from oracles import eval_naive


def test_name_kinds():
    assert parse_name("z.3") == ZVar(3)
    assert parse_name("zp.12") == ZVar(12, primed=True)
    assert parse_name("x[T,2]") == Tagged("T", 2)
    assert parse_name("c_0_1_b") == Free("c_0_1_b")
    for bad in ("z.01", "z.0", "X1", "x[T,0]", "a-b", ""):
        with pytest.raises(ValueError):
            parse_name(bad)


def test_names_order_by_text():
    names = [parse_name(t) for t in ("zp.1", "x[T,10]", "x[T,2]", "a", "z.2")]
    assert [str(v) for v in sorted(names)] == ["a", "x[T,10]", "x[T,2]", "z.2", "zp.1"]


def test_serialize_shape():
    f = var("x1") & ~var("x2")
    assert serialize_formula(f) == "(and (var x1) (not (var x2)))"
    assert parse_formula(serialize_formula(f)) == f


@pytest.mark.parametrize(
    "text",
    ["(or)", "(and (var a))", "(var)", "(not (var a) (var b))", "(var a) (var b)", "(xor (var a))",
     "(var a", "(var A)", ")"],
)
def test_parse_rejects(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_parse_empty():
    with pytest.raises(EmptyFormulaError):
        parse_formula("   ")


def test_parse_error_has_offset():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("(and (var a) (bogus))")
    assert "offset" in str(info.value)


def test_deep_nesting_parses():
    f = var("a")
    for _ in range(5000):
        f = Not(f)
    text = serialize_formula(f)
    assert serialize_formula(parse_formula(text)) == text


def test_evaluate_needs_total_assignment():
    with pytest.raises(UnboundVariableError):
        evaluate(var("a") & var("b"), {Free("a"): True})


def _formulas():
    return st.builds(
        lambda seed, n, size: random_formula(random.Random(seed), n, size),
        st.integers(0, 10**6),
        st.integers(1, 6),
        st.integers(1, 20),
    )


@settings(max_examples=150, deadline=None)
@given(_formulas())
def test_round_trip(f):
    assert parse_formula(serialize_formula(f)) == f


@settings(max_examples=150, deadline=None)
@given(_formulas(), st.integers(0, 10**6))
def test_substitute_is_restriction(f, seed):
    rng = random.Random(seed)
    names = sorted(variables(f))
    a = {v: rng.random() < 0.5 for v in names if rng.random() < 0.5}
    g = substitute(f, a)
    rest = [v for v in names if v not in a]
    if not isinstance(g, bool):
        # absorption can drop variables, never add them
        assert variables(g) <= set(rest)
    # same truth value on every completion
    for bits in range(1 << len(rest)):
        full = dict(a)
        full.update({v: bool(bits >> i & 1) for i, v in enumerate(rest)})
        want = eval_naive(f, full)
        got = g if isinstance(g, bool) else eval_naive(g, {v: full[v] for v in variables(g)})
        assert got == want


def test_substitute_keeps_untouched_subtrees():
    left = var("a") | var("b")
    f = And((left, var("c")))
    g = substitute(f, {Free("c"): True})
    assert g is left


def test_substitute_constants():
    f = var("a") & ~var("b")
    assert substitute(f, {Free("a"): False}) is False
    assert substitute(f, {Free("a"): True, Free("b"): False}) is True


def test_rename_and_numvars():
    f = And((var("z1"), Not(var("z1")), Not(var("w"))))
    g = rename(f, {Free("z1"): Tagged("T", 2), Free("w"): Tagged("T", 1)})
    assert serialize_formula(g) == "(and (var x[T,2]) (not (var x[T,2])) (not (var x[T,1])))"
    assert numvars(g) == 2


def test_operators_build_binary_nodes():
    f = var("a") | var("b")
    assert isinstance(f, Or) and len(f.children) == 2
    assert isinstance(var("a") & var("b"), And)
    assert isinstance(~var("a"), Not)
    assert Var(Free("a")) == var("a")
