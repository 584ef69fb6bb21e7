"""Clause-learning SAT solver over integer literals.

Two watched literals per clause, first-UIP learning with non-chronological
backjumping, branching on the lowest-numbered unassigned variable with a
per-variable preferred phase (false unless told otherwise).  There are no
restarts and no randomness, so a given clause list and call sequence always
produces the same models.

Assumptions are handled MiniSat-style: each one occupies its own decision
level, so clauses learned under assumptions remain valid for later calls and
one instance can answer a sequence of queries.
"""

from ..errors import BudgetExceeded

DEFAULT_CONFLICT_BUDGET = 10**6


class Solver:
    def __init__(self, num_vars, clauses=(), conflict_budget=DEFAULT_CONFLICT_BUDGET):
        n = num_vars
        self.num_vars = n
        self.conflict_budget = conflict_budget
        # literal-indexed arrays: lit and -lit land on distinct slots of a
        # length-(2n+1) list through Python's negative indexing
        self.lit_value = [0] * (2 * n + 1)
        self.watches = [[] for _ in range(2 * n + 1)]
        self.level = [0] * (n + 1)
        self.reason = [None] * (n + 1)
        self.seen = [False] * (n + 1)
        self.phase = [False] * (n + 1)
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.next_var = 1
        self.ok = True
        self.num_learnts = 0
        self.conflicts = 0
        self.decisions = 0
        for c in clauses:
            self.add_clause(c)

    # ------------------------------------------------------------------
    def add_clause(self, lits):
        """Add a clause at decision level 0.  Returns False once the formula is unsat."""
        if not self.ok:
            return False
        self._cancel_until(0)
        lv = self.lit_value
        clause = []
        present = set()
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")
            if -lit in present:
                return True  # tautology
            if lit in present:
                continue
            present.add(lit)
            value = lv[lit]
            if value == 1:
                return True
            if value == 0:
                clause.append(lit)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self.watches[clause[0]].append(clause)
        self.watches[clause[1]].append(clause)
        return True

    def _enqueue(self, lit, reason):
        v = lit if lit > 0 else -lit
        self.lit_value[lit] = 1
        self.lit_value[-lit] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        lv = self.lit_value
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        depth = len(self.trail_lim)
        while self.qhead < len(trail):
            false_lit = -trail[self.qhead]
            self.qhead += 1
            watching = watches[false_lit]
            keep = []
            watches[false_lit] = keep
            for i, c in enumerate(watching):
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if lv[first] == 1:
                    keep.append(c)
                    continue
                for k in range(2, len(c)):
                    if lv[c[k]] != -1:
                        c[1] = c[k]
                        c[k] = false_lit
                        watches[c[1]].append(c)
                        break
                else:
                    keep.append(c)
                    if lv[first] == -1:
                        keep.extend(watching[i + 1:])
                        self.qhead = len(trail)
                        return c
                    lv[first] = 1
                    lv[-first] = -1
                    v = first if first > 0 else -first
                    level[v] = depth
                    reason[v] = c
                    trail.append(first)
        return None

    def _analyze(self, conflict):
        seen = self.seen
        level = self.level
        trail = self.trail
        depth = len(self.trail_lim)
        learnt = [0]
        pending = 0
        index = len(trail) - 1
        clause = conflict
        start = 0
        while True:
            for q in clause[start:]:
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    if level[v] >= depth:
                        pending += 1
                    else:
                        learnt.append(q)
            while True:
                p = trail[index]
                index -= 1
                if seen[p if p > 0 else -p]:
                    break
            v = p if p > 0 else -p
            seen[v] = False
            pending -= 1
            if pending == 0:
                break
            clause = self.reason[v]
            start = 1
        learnt[0] = -p
        back = 0
        if len(learnt) > 1:
            best = 1
            for i in range(2, len(learnt)):
                if level[abs(learnt[i])] > level[abs(learnt[best])]:
                    best = i
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[abs(learnt[1])]
        for q in learnt[1:]:
            seen[abs(q)] = False
        return learnt, back

    def _cancel_until(self, depth):
        if len(self.trail_lim) <= depth:
            return
        lv = self.lit_value
        reason = self.reason
        cut = self.trail_lim[depth]
        lowest = self.next_var
        for lit in self.trail[cut:]:
            lv[lit] = 0
            lv[-lit] = 0
            v = lit if lit > 0 else -lit
            reason[v] = None
            if v < lowest:
                lowest = v
        self.next_var = lowest
        del self.trail[cut:]
        del self.trail_lim[depth:]
        self.qhead = len(self.trail)

    def _pick_branch(self):
        lv = self.lit_value
        v = self.next_var
        n = self.num_vars
        while v <= n and lv[v] != 0:
            v += 1
        self.next_var = v
        return v if v <= n else 0

    # ------------------------------------------------------------------
    def solve(self, assumptions=()):
        """Return a model (list indexed by variable, index 0 unused) or None.

        ``None`` means unsatisfiable under ``assumptions``.  Raises
        :class:`BudgetExceeded` if this call alone hits the conflict budget.
        """
        if not self.ok:
            return None
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return None
        assumptions = list(assumptions)
        for lit in assumptions:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"assumption {lit} out of range")
        budget = self.conflict_budget
        used = 0
        try:
            while True:
                conflict = self._propagate()
                if conflict is not None:
                    used += 1
                    self.conflicts += 1
                    if used > budget:
                        raise BudgetExceeded(f"conflict budget of {budget} exhausted")
                    if not self.trail_lim:
                        self.ok = False
                        return None
                    learnt, back = self._analyze(conflict)
                    self._cancel_until(back)
                    if len(learnt) == 1:
                        self._enqueue(learnt[0], None)
                    else:
                        self.watches[learnt[0]].append(learnt)
                        self.watches[learnt[1]].append(learnt)
                        self.num_learnts += 1
                        self._enqueue(learnt[0], learnt)
                    continue
                depth = len(self.trail_lim)
                if depth < len(assumptions):
                    p = assumptions[depth]
                    value = self.lit_value[p]
                    if value == -1:
                        return None
                    self.trail_lim.append(len(self.trail))
                    if value == 0:
                        self._enqueue(p, None)
                    continue
                v = self._pick_branch()
                if v == 0:
                    lv = self.lit_value
                    return [False] + [lv[i] == 1 for i in range(1, self.num_vars + 1)]
                self.decisions += 1
                self.trail_lim.append(len(self.trail))
                self._enqueue(v if self.phase[v] else -v, None)
        finally:
            self._cancel_until(0)
