"""Boolean formula AST, structured variable names, and the ``.bf`` text format.

Formulas are immutable trees of :class:`Var`, :class:`Not`, :class:`And` and
:class:`Or`.  ``And``/``Or`` are n-ary (at least two children) and are never
flattened, so the shape a formula was built with survives serialization.

Variable names come in three syntactically disjoint kinds::

    z.3          ZVar(3)
    zp.3         ZVar(3, primed=True)
    x[TAG,7]     Tagged(TAG, 7)
    cell_0_1_b   Free("cell_0_1_b")

Names order lexicographically by the bytes of their serialization.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .errors import EmptyFormulaError, FormulaSyntaxError, UnboundVariableError

TAG_RE = re.compile(r"[A-Za-z0-9_.;=/+\-]+")
IDENT_RE = re.compile(r"[a-z0-9_]+")
_INT = r"[1-9][0-9]*"
_NAME_RE = re.compile(
    rf"z\.(?P<z>{_INT})|zp\.(?P<zp>{_INT})|x\[(?P<tag>{TAG_RE.pattern}),(?P<q>{_INT})\]"
)


class VarName:
    """Base class of the three variable-name kinds."""

    __slots__ = ()

    def __lt__(self, other):
        if not isinstance(other, VarName):
            return NotImplemented
        return str(self) < str(other)

    def __repr__(self):
        return f"<{str(self)}>"


@dataclass(frozen=True, repr=False, eq=True)
class Tagged(VarName):
    tag: str
    index: int

    def __post_init__(self):
        if not TAG_RE.fullmatch(self.tag):
            raise ValueError(f"bad machine tag in variable name: {self.tag!r}")
        if self.index < 1:
            raise ValueError("tagged variable index must be positive")

    def __str__(self):
        return f"x[{self.tag},{self.index}]"

    __lt__ = VarName.__lt__


@dataclass(frozen=True, repr=False, eq=True)
class ZVar(VarName):
    index: int
    primed: bool = False

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("z-series index must be positive")

    def __str__(self):
        return f"{'zp' if self.primed else 'z'}.{self.index}"

    __lt__ = VarName.__lt__


@dataclass(frozen=True, repr=False, eq=True)
class Free(VarName):
    text: str

    def __post_init__(self):
        if not IDENT_RE.fullmatch(self.text):
            raise ValueError(f"free variable names use [a-z0-9_]: {self.text!r}")

    def __str__(self):
        return self.text

    __lt__ = VarName.__lt__


def parse_name(text: str) -> VarName:
    m = _NAME_RE.fullmatch(text)
    if m:
        if m["z"]:
            return ZVar(int(m["z"]))
        if m["zp"]:
            return ZVar(int(m["zp"]), primed=True)
        return Tagged(m["tag"], int(m["q"]))
    if IDENT_RE.fullmatch(text):
        return Free(text)
    raise ValueError(f"not a variable name: {text!r}")


def name(value: Union[str, VarName]) -> VarName:
    return value if isinstance(value, VarName) else parse_name(value)


# --------------------------------------------------------------------------
# AST


class Formula:
    """Base class of formula nodes.  ``~``, ``&`` and ``|`` build binary nodes."""

    __slots__ = ()

    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __repr__(self):
        text = serialize_formula(self)
        if len(text) > 200:
            text = text[:197] + "..."
        return f"Formula({text})"


class _Cached:
    # hash and variable-set caches for wide gadget formulas
    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__, self._key()))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True, repr=False, eq=True)
class Var(_Cached, Formula):
    name: VarName

    def __post_init__(self):
        if not isinstance(self.name, VarName):
            object.__setattr__(self, "name", parse_name(self.name))

    def _key(self):
        return self.name

    __hash__ = _Cached.__hash__
    __repr__ = Formula.__repr__


@dataclass(frozen=True, repr=False, eq=True)
class Not(_Cached, Formula):
    child: Formula

    def _key(self):
        return self.child

    __hash__ = _Cached.__hash__
    __repr__ = Formula.__repr__


@dataclass(frozen=True, repr=False, eq=True)
class And(_Cached, Formula):
    children: tuple

    def __post_init__(self):
        _check_children(self, "and")

    def _key(self):
        return self.children

    __hash__ = _Cached.__hash__
    __repr__ = Formula.__repr__


@dataclass(frozen=True, repr=False, eq=True)
class Or(_Cached, Formula):
    children: tuple

    def __post_init__(self):
        _check_children(self, "or")

    def _key(self):
        return self.children

    __hash__ = _Cached.__hash__
    __repr__ = Formula.__repr__


def _check_children(node, op):
    children = tuple(node.children)
    if len(children) < 2:
        raise ValueError(f"({op} ...) needs at least two children, got {len(children)}")
    for c in children:
        if not isinstance(c, Formula):
            raise TypeError(f"({op} ...) child is not a Formula: {c!r}")
    object.__setattr__(node, "children", children)


PartialAssignment = Mapping[VarName, bool]


@dataclass(frozen=True)
class BackboneCertificate:
    """A backbone ``vars`` together with its value."""

    vars: frozenset
    value: Mapping[VarName, bool] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", frozenset(self.vars))
        object.__setattr__(self, "value", dict(self.value))
        if set(self.value) != self.vars:
            raise ValueError("backbone value must bind exactly the backbone variables")

    @property
    def size(self):
        return len(self.vars)

    def bits(self) -> str:
        """Value as a bit string, variables in lexicographic order."""
        return "".join("1" if self.value[v] else "0" for v in sorted(self.vars))


def var(text) -> Var:
    return Var(name(text))


def lit(text, positive: bool = True) -> Formula:
    v = var(text)
    return v if positive else Not(v)


def conj(parts: Iterable[Formula]) -> Formula:
    """``And`` of ``parts``, or the single part itself."""
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


def literal_of(node: Formula):
    """``(name, polarity)`` if ``node`` is a literal, else ``None``."""
    if isinstance(node, Var):
        return node.name, True
    if isinstance(node, Not) and isinstance(node.child, Var):
        return node.child.name, False
    return None


# --------------------------------------------------------------------------
# semantics


def variables(f: Formula) -> frozenset:
    cached = f.__dict__.get("_vars")
    if cached is not None:
        return cached
    if isinstance(f, Var):
        result = frozenset((f.name,))
    elif isinstance(f, Not):
        result = variables(f.child)
    else:
        acc = set()
        for c in f.children:
            acc |= variables(c)
        result = frozenset(acc)
    object.__setattr__(f, "_vars", result)
    return result


def numvars(f: Formula) -> int:
    return len(variables(f))


def evaluate(f: Formula, a: PartialAssignment) -> bool:
    if isinstance(f, Var):
        try:
            return bool(a[f.name])
        except KeyError:
            raise UnboundVariableError(f.name) from None
    if isinstance(f, Not):
        return not evaluate(f.child, a)
    if isinstance(f, And):
        # evaluate every child so unbound variables are always reported
        results = [evaluate(c, a) for c in f.children]
        return all(results)
    if isinstance(f, Or):
        results = [evaluate(c, a) for c in f.children]
        return any(results)
    raise TypeError(f"not a formula: {f!r}")


def substitute(f: Formula, a: PartialAssignment) -> Union[Formula, bool]:
    """Plug the bindings of ``a`` into ``f`` and propagate constants.

    The result is either ``True``/``False`` or a formula containing no
    constants.  Unchanged subtrees are returned as the same objects.
    """
    if isinstance(f, Var):
        return bool(a[f.name]) if f.name in a else f
    if isinstance(f, Not):
        c = substitute(f.child, a)
        if isinstance(c, bool):
            return not c
        return f if c is f.child else Not(c)

    absorbing = isinstance(f, Or)  # True absorbs Or, False absorbs And
    kept = []
    changed = False
    for child in f.children:
        c = substitute(child, a)
        if isinstance(c, bool):
            if c is absorbing:
                return absorbing
            changed = True
            continue
        changed |= c is not child
        kept.append(c)
    if not kept:
        return not absorbing
    if not changed:
        return f
    if len(kept) == 1:
        return kept[0]
    return type(f)(tuple(kept))


# --------------------------------------------------------------------------
# text format


def serialize_formula(f: Formula) -> str:
    out = []
    # explicit stack: strings are emitted as-is, nodes are expanded
    stack = [f]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, Var):
            out.append(f"(var {item.name})")
        elif isinstance(item, Not):
            out.append("(not ")
            stack += [")", item.child]
        else:
            out.append("(and" if isinstance(item, And) else "(or")
            stack.append(")")
            for c in reversed(item.children):
                stack += [c, " "]
    return "".join(out)


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")
_OPS = {"var", "not", "and", "or"}


def _tokenize(text):
    pos = 0
    for m in _TOKEN_RE.finditer(text):
        gap = text[pos:m.start()]
        if gap.strip():
            raise FormulaSyntaxError("unexpected character", pos + len(gap) - len(gap.lstrip()))
        pos = m.end()
        yield m.group(), m.start()
    if text[pos:].strip():
        raise FormulaSyntaxError("unexpected character", pos)


def parse_formula(text: str) -> Formula:
    """Parse the s-expression form produced by :func:`serialize_formula`."""
    tokens = list(_tokenize(text))
    if not tokens:
        raise EmptyFormulaError("empty formula")
    tokens.append(("", len(text)))  # end marker
    stack = []  # frames: [op, children, offset]
    i = 0
    while True:
        tok, at = tokens[i]
        if tok == "(":
            op, op_at = tokens[i + 1]
            if op not in _OPS:
                raise FormulaSyntaxError("expected var, not, and or or after '('", op_at)
            if op == "var":
                word, word_at = tokens[i + 2]
                if word in ("(", ")", ""):
                    raise FormulaSyntaxError("expected variable name", word_at)
                try:
                    node = Var(parse_name(word))
                except ValueError as exc:
                    raise FormulaSyntaxError(str(exc), word_at) from None
                if tokens[i + 3][0] != ")":
                    raise FormulaSyntaxError("expected ')' after variable name", tokens[i + 3][1])
                i += 4
            else:
                stack.append([op, [], at])
                i += 2
                continue
        elif tok == ")":
            if not stack:
                raise FormulaSyntaxError("unbalanced ')'", at)
            op, children, op_at = stack.pop()
            if op == "not":
                if len(children) != 1:
                    raise FormulaSyntaxError("(not ...) takes exactly one formula", op_at)
                node = Not(children[0])
            else:
                if len(children) < 2:
                    raise FormulaSyntaxError(f"({op} ...) needs at least two formulas", op_at)
                node = (And if op == "and" else Or)(tuple(children))
            i += 1
        elif tok == "":
            raise FormulaSyntaxError("unexpected end of input", at)
        else:
            raise FormulaSyntaxError(f"unexpected token {tok!r}", at)
        if stack:
            stack[-1][1].append(node)
            continue
        if tokens[i][0] != "":
            raise FormulaSyntaxError("trailing input after formula", tokens[i][1])
        return node


def read_formula(path) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse_formula(fh.read())


def write_formula(path, f: Formula) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_formula(f))
        fh.write("\n")


# --------------------------------------------------------------------------
# random corpora


def random_formula(rng: random.Random, num_vars: int, size: int, names=None) -> Formula:
    """A random formula over at most ``num_vars`` variables with about ``size`` leaves."""
    if names is None:
        names = [Free(f"x{i}") for i in range(1, num_vars + 1)]

    def build(leaves):
        if leaves <= 1:
            node = Var(rng.choice(names))
            return Not(node) if rng.random() < 0.5 else node
        arity = min(leaves, rng.choice((2, 2, 2, 3)))
        cuts = sorted(rng.sample(range(1, leaves), arity - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [leaves])]
        node = (And if rng.random() < 0.5 else Or)(tuple(build(s) for s in sizes))
        return Not(node) if rng.random() < 0.15 else node

    return build(max(1, size))


def rename(f: Formula, mapping: Mapping[VarName, VarName]) -> Formula:
    """Replace variable names through ``mapping``; unmapped names are kept."""
    if isinstance(f, Var):
        new = mapping.get(f.name)
        return f if new is None else Var(new)
    if isinstance(f, Not):
        return Not(rename(f.child, mapping))
    return type(f)(tuple(rename(c, mapping) for c in f.children))
