"""Exact frozen-variable computation for formulas too wide to enumerate.

Independent of the Tseitin/CDCL path.  The formula is split wherever its
model set factors:

* the children of an ``and`` fall into variable-connected components, and
  the models of the conjunction are the product of the components' models;
* the models of an ``or`` are the union of its children's models, each
  padded freely over the variables that child does not mention.

So a variable is frozen in a conjunction iff it is frozen in its component,
and frozen in a disjunction iff every satisfiable child mentions it and
freezes it to the same value.  Pieces that do not split further are settled
exhaustively: by truth table when small, otherwise by a reduced ordered BDD.
"""

from __future__ import annotations

from .backbone import DEFAULT_BRUTE_LIMIT, FrozenReport, frozen_vars_brute
from .errors import BudgetExceeded
from .formula import And, Formula, Not, Or, Var, conj, variables

DEFAULT_NODE_LIMIT = 2_000_000


class BDD:
    """Reduced ordered BDD manager.  Node 0 is false, node 1 is true."""

    def __init__(self, order, node_limit=DEFAULT_NODE_LIMIT):
        self.level = {v: i for i, v in enumerate(order)}
        self.terminal_level = len(order)
        self.nodes = [(self.terminal_level, 0, 0), (self.terminal_level, 1, 1)]
        self.unique = {}
        self.node_limit = node_limit
        self._and = {}
        self._or = {}
        self._not = {}

    def mk(self, lvl, lo, hi):
        if lo == hi:
            return lo
        key = (lvl, lo, hi)
        u = self.unique.get(key)
        if u is None:
            if len(self.nodes) >= self.node_limit:
                raise BudgetExceeded(f"BDD grew past {self.node_limit} nodes")
            u = len(self.nodes)
            self.nodes.append(key)
            self.unique[key] = u
        return u

    def var(self, v):
        return self.mk(self.level[v], 0, 1)

    def neg(self, u):
        if u < 2:
            return 1 - u
        r = self._not.get(u)
        if r is None:
            lvl, lo, hi = self.nodes[u]
            r = self.mk(lvl, self.neg(lo), self.neg(hi))
            self._not[u] = r
        return r

    def conj(self, u, v):
        if u == 0 or v == 0:
            return 0
        if u == 1:
            return v
        if v == 1 or u == v:
            return u
        return self._apply(self.conj, self._and, u, v)

    def disj(self, u, v):
        if u == 1 or v == 1:
            return 1
        if u == 0:
            return v
        if v == 0 or u == v:
            return u
        return self._apply(self.disj, self._or, u, v)

    def _apply(self, op, memo, u, v):
        if u > v:
            u, v = v, u
        key = (u, v)
        r = memo.get(key)
        if r is not None:
            return r
        lu, u0, u1 = self.nodes[u]
        lv, v0, v1 = self.nodes[v]
        if lu == lv:
            r = self.mk(lu, op(u0, v0), op(u1, v1))
        elif lu < lv:
            r = self.mk(lu, op(u0, v), op(u1, v))
        else:
            r = self.mk(lv, op(u, v0), op(u, v1))
        memo[key] = r
        return r

    def build(self, f: Formula):
        if isinstance(f, Var):
            return self.var(f.name)
        if isinstance(f, Not):
            return self.neg(self.build(f.child))
        if isinstance(f, And):
            acc = 1
            for c in f.children:
                acc = self.conj(acc, self.build(c))
                if acc == 0:
                    break
            return acc
        acc = 0
        for c in f.children:
            acc = self.disj(acc, self.build(c))
            if acc == 1:
                break
        return acc

    def restrict(self, u, lvl, value):
        memo = {}

        def go(w):
            if w < 2:
                return w
            r = memo.get(w)
            if r is None:
                wl, lo, hi = self.nodes[w]
                if wl > lvl:
                    r = w
                elif wl == lvl:
                    r = hi if value else lo
                else:
                    r = self.mk(wl, go(lo), go(hi))
                memo[w] = r
            return r

        return go(u)


def first_occurrence_order(f: Formula):
    order, seen, stack = [], set(), [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            if node.name not in seen:
                seen.add(node.name)
                order.append(node.name)
        elif isinstance(node, Not):
            stack.append(node.child)
        else:
            stack.extend(reversed(node.children))
    return order


def frozen_by_bdd(f: Formula, node_limit=DEFAULT_NODE_LIMIT):
    """``(satisfiable, frozen)`` for one indivisible piece."""
    order = first_occurrence_order(f)
    bdd = BDD(order, node_limit)
    root = bdd.build(f)
    if root == 0:
        return False, {}
    frozen = {}
    for v in order:
        lvl = bdd.level[v]
        if bdd.restrict(root, lvl, False) == 0:
            frozen[v] = True
        elif bdd.restrict(root, lvl, True) == 0:
            frozen[v] = False
    return True, frozen


def components(children):
    """Group ``children`` into variable-connected components (stable order)."""
    parent = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner = {}
    for i, c in enumerate(children):
        parent[i] = i
        for v in variables(c):
            j = owner.setdefault(v, i)
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(len(children)):
        groups.setdefault(find(i), []).append(children[i])
    return [groups[k] for k in sorted(groups)]


def _frozen(f, brute_limit, node_limit, stats):
    if isinstance(f, Var):
        return True, {f.name: True}
    if isinstance(f, Not) and isinstance(f.child, Var):
        return True, {f.child.name: False}
    if isinstance(f, And):
        groups = components(f.children)
        if len(groups) > 1:
            frozen = {}
            for g in groups:
                sat, part = _frozen(conj(g), brute_limit, node_limit, stats)
                if not sat:
                    return False, {}
                frozen.update(part)
            return True, frozen
    if isinstance(f, Or):
        results = [_frozen(c, brute_limit, node_limit, stats) for c in f.children]
        live = [part for sat, part in results if sat]
        if not live:
            return False, {}
        frozen = dict(live[0])
        for part in live[1:]:
            frozen = {v: b for v, b in frozen.items() if part.get(v) == b}
        return True, frozen
    # indivisible piece
    if len(variables(f)) <= brute_limit:
        stats["brute"] += 1
        report = frozen_vars_brute(f, brute_limit)
        return report.satisfiable, dict(report.frozen)
    stats["bdd"] += 1
    return frozen_by_bdd(f, node_limit)


def frozen_vars_exact(
    f: Formula, brute_limit=DEFAULT_BRUTE_LIMIT, node_limit=DEFAULT_NODE_LIMIT, stats=None
) -> FrozenReport:
    """Maximum backbone by exhaustive (explicit or symbolic) model enumeration."""
    stats = {"brute": 0, "bdd": 0} if stats is None else stats
    stats.setdefault("brute", 0)
    stats.setdefault("bdd", 0)
    sat, frozen = _frozen(f, brute_limit, node_limit, stats)
    return FrozenReport(frozen if sat else {}, sat, "exact")


__all__ = ["BDD", "components", "frozen_by_bdd", "frozen_vars_exact"]
