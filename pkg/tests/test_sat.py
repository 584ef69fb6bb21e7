import random
import sys

import pytest

from backbone_lab.errors import BudgetExceeded
from backbone_lab.formula import Free, parse_formula, random_formula, var, variables
from backbone_lab.sat import (
    FormulaSolver,
    Solver,
    dimacs_text,
    parse_dimacs,
    read_dimacs,
    solve,
    solve_assuming,
    solve_external,
    tseitin,
    write_dimacs,
)

from oracles import eval_naive, models


def _random_corpus(count, seed=7, max_vars=8):
    rng = random.Random(seed)
    return [random_formula(rng, rng.randint(1, max_vars), rng.randint(1, 30)) for _ in range(count)]


def test_agrees_with_truth_table():
    for f in _random_corpus(400):
        expect = next(models(f), None) is not None
        result = solve(f)
        assert result.sat == expect
        if result.sat:
            assert eval_naive(f, result.model)


def test_assumptions_match_restriction():
    rng = random.Random(3)
    for f in _random_corpus(200, seed=11):
        names = sorted(variables(f))
        a = {v: rng.random() < 0.5 for v in names if rng.random() < 0.4}
        expect = any(all(m[v] == b for v, b in a.items()) for m in models(f))
        result = solve_assuming(f, a)
        assert result.sat == expect
        if result.sat:
            assert all(result.model[v] == b for v, b in a.items())


def test_unknown_assumptions_are_reported():
    f = var("a") | var("b")
    result = solve_assuming(f, {Free("zzz"): True, Free("a"): False})
    assert result.sat and result.ignored == {Free("zzz")}
    assert result.model[Free("b")] is True


def test_incremental_reuse_matches_fresh():
    rng = random.Random(5)
    for f in _random_corpus(60, seed=13):
        solver = FormulaSolver(f)
        names = sorted(variables(f))
        for _ in range(6):
            a = {v: rng.random() < 0.5 for v in names if rng.random() < 0.5}
            assert solver.solve(a).sat == solve_assuming(f, a).sat


def test_tseitin_models_project_to_models():
    # every CNF model restricted to the originals satisfies the formula,
    # and every formula model extends (the definitions are biconditionals)
    for f in _random_corpus(150, seed=17, max_vars=5):
        cnf = tseitin(f)
        n = len(variables(f))
        assert sorted(cnf.origin_map.values()) == list(range(1, n + 1))
        for m in models(f):
            fixed = [[cnf.origin_map[v] if b else -cnf.origin_map[v]] for v, b in m.items()]
            assert Solver(cnf.num_vars, cnf.clauses + fixed).solve() is not None


def test_deterministic_models():
    for f in _random_corpus(50, seed=19):
        assert solve(f) == solve(f)


def test_budget_exceeded():
    # pigeonhole 7 into 6 needs many conflicts without symmetry handling
    pigeons, holes = 7, 6
    v = lambda p, h: p * holes + h + 1  # noqa: E731
    clauses = [[v(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p in range(pigeons):
            for q in range(p + 1, pigeons):
                clauses.append([-v(p, h), -v(q, h)])
    with pytest.raises(BudgetExceeded):
        Solver(pigeons * holes, clauses, conflict_budget=10).solve()


def test_dimacs_round_trip(tmp_path):
    f = parse_formula("(and (or (var a) (not (var b))) (var x[T,1]))")
    cnf = tseitin(f)
    path = tmp_path / "f.cnf"
    write_dimacs(cnf, path, str(path) + ".map")
    back = read_dimacs(path, str(path) + ".map")
    assert back.num_vars == cnf.num_vars and back.clauses == cnf.clauses
    assert back.origin_map == cnf.origin_map
    assert parse_dimacs(dimacs_text(cnf)) == (cnf.num_vars, cnf.clauses)


def test_dimacs_rejects_garbage():
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2 1\n1 3 0\n")
    with pytest.raises(ValueError):
        parse_dimacs("1 2 0\n")


def test_external_solver_cross_check():
    cmd = [sys.executable, "-m", "backbone_lab.sat"]
    for f in _random_corpus(15, seed=23):
        ext = solve_external(f, cmd)
        assert ext.sat == solve(f).sat
        if ext.sat:
            assert eval_naive(f, ext.model)
