"""Tseitin translation and DIMACS input/output."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..formula import And, Formula, Not, Or, Var, parse_name, variables


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list
    origin_map: dict = field(default_factory=dict)  # VarName -> variable index

    def __post_init__(self):
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} outside 1..{self.num_vars}")
        if len(set(self.origin_map.values())) != len(self.origin_map):
            raise ValueError("origin_map must be injective")

    def project(self, model) -> dict:
        """Restrict a CNF model (list indexed by variable) to the original names."""
        return {name: bool(model[i]) for name, i in self.origin_map.items()}


def tseitin(f: Formula) -> CnfFormula:
    """Equisatisfiable CNF with one definitional variable per and/or node.

    Original variables get indices ``1..numvars(f)`` in lexicographic name
    order.  Definitions are full biconditionals, so every model of ``f``
    extends to exactly one model of the CNF.  Structurally equal subformulas
    share a definition.
    """
    origin = {v: i for i, v in enumerate(sorted(variables(f)), start=1)}
    clauses = []
    memo = {}
    counter = [len(origin)]

    def encode(node):
        if isinstance(node, Var):
            return origin[node.name]
        if isinstance(node, Not):
            return -encode(node.child)
        known = memo.get(node)
        if known is not None:
            return known
        lits = [encode(c) for c in node.children]
        counter[0] += 1
        aux = counter[0]
        if isinstance(node, And):
            for lit in lits:
                clauses.append([-aux, lit])
            clauses.append([aux] + [-lit for lit in lits])
        elif isinstance(node, Or):
            for lit in lits:
                clauses.append([aux, -lit])
            clauses.append([-aux] + lits)
        else:
            raise TypeError(f"not a formula node: {node!r}")
        memo[node] = aux
        return aux

    root = encode(f)
    clauses.append([root])
    return CnfFormula(counter[0], clauses, origin)


def write_dimacs(cnf: CnfFormula, path, map_path=None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dimacs_text(cnf))
    if map_path is not None:
        with open(map_path, "w", encoding="utf-8") as fh:
            for name, index in sorted(cnf.origin_map.items(), key=lambda kv: kv[1]):
                fh.write(f"{index}\t{name}\n")


def dimacs_text(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str):
    """Return ``(num_vars, clauses)``.  Comment lines start with ``c``."""
    num_vars = None
    declared = None
    clauses = []
    current = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            lit = int(tok)
            if abs(lit) > num_vars:
                raise ValueError(f"line {lineno}: literal {lit} outside 1..{num_vars}")
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if num_vars is None:
        raise ValueError("missing 'p cnf' header")
    if declared != len(clauses):
        raise ValueError(f"header declares {declared} clauses, found {len(clauses)}")
    return num_vars, clauses


def read_dimacs(path, map_path=None) -> CnfFormula:
    with open(path, encoding="ascii") as fh:
        num_vars, clauses = parse_dimacs(fh.read())
    origin = {}
    if map_path is not None:
        with open(map_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    index, text = line.rstrip("\n").split("\t")
                    origin[parse_name(text)] = int(index)
    return CnfFormula(num_vars, clauses, origin)


def origin_names(cnf: CnfFormula) -> list:
    return sorted(cnf.origin_map, key=cnf.origin_map.__getitem__)


__all__ = [
    "CnfFormula",
    "dimacs_text",
    "origin_names",
    "parse_dimacs",
    "read_dimacs",
    "tseitin",
    "write_dimacs",
]
