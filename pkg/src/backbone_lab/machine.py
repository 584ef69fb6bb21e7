"""Clocked one-tape nondeterministic Turing machines over {0, 1, blank}.

A machine runs on input ``x`` for at most ``|x|**e + e`` steps, ``e`` being
its clock exponent.  The input is written left-justified from cell 0 and the
head starts on cell 0.  Moving left from cell 0 leaves the head in place.
The tape is bounded to ``T + 1`` cells for clock bound ``T``; no path can
reach beyond that.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import BudgetExceeded, MachineFormatError

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)
MOVES = ("L", "R", "S")
DEFAULT_MAX_CONFIGS = 10**6

_STATE_RE = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True, order=True)
class Transition:
    state: str
    read: str
    next_state: str
    write: str
    move: str

    def __str__(self):
        return f"{self.state} {self.read} -> {self.next_state} {self.write} {self.move}"


@dataclass(frozen=True)
class MachineDescription:
    states: frozenset
    start: str
    accept: str
    transitions: frozenset
    clock: int = 1
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        if not self.states:
            raise MachineFormatError("machine has no states")
        for s in self.states:
            if not _STATE_RE.fullmatch(s):
                raise MachineFormatError(f"bad state name {s!r}")
        if self.start not in self.states or self.accept not in self.states:
            raise MachineFormatError("start and accept must be declared states")
        if not isinstance(self.clock, int) or self.clock < 1:
            raise MachineFormatError("clock exponent must be a positive integer")
        for t in self.transitions:
            if t.state not in self.states or t.next_state not in self.states:
                raise MachineFormatError(f"transition uses an undeclared state: {t}")
            if t.read not in SYMBOLS or t.write not in SYMBOLS or t.move not in MOVES:
                raise MachineFormatError(f"bad symbol or move in transition: {t}")
            if t.state == self.accept:
                raise MachineFormatError("the accept state must have no outgoing transitions")
        table = {}
        for t in sorted(self.transitions):
            table.setdefault((t.state, t.read), []).append(t)
        object.__setattr__(self, "_table", {k: tuple(v) for k, v in table.items()})

    def time_bound(self, n: int) -> int:
        return n**self.clock + self.clock

    def moves(self, state, symbol):
        """Transitions applicable in ``state`` reading ``symbol``, sorted."""
        return self._table.get((state, symbol), ())

    def sorted_states(self):
        return sorted(self.states)


MachineTag = str

# --------------------------------------------------------------------------
# .tm files


def parse_machine(text: str, label: str = "") -> MachineDescription:
    states, transitions = [], []
    start = accept = clock = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        try:
            if key == "state" and len(parts) == 2:
                states.append(parts[1])
            elif key == "start" and len(parts) == 2:
                start = parts[1]
            elif key == "accept" and len(parts) == 2:
                accept = parts[1]
            elif key == "clock" and len(parts) == 2:
                clock = int(parts[1])
            elif key == "trans" and len(parts) == 7 and parts[3] == "->":
                transitions.append(Transition(parts[1], parts[2], parts[4], parts[5], parts[6]))
            else:
                raise MachineFormatError(f"unrecognised line: {raw.strip()!r}")
        except ValueError as exc:
            raise MachineFormatError(f"line {lineno}: {exc}") from None
        except MachineFormatError as exc:
            raise MachineFormatError(f"line {lineno}: {exc}") from None
    if len(set(states)) != len(states):
        raise MachineFormatError("duplicate state declaration")
    if start is None or accept is None or clock is None:
        raise MachineFormatError("machine file needs start, accept and clock lines")
    return MachineDescription(frozenset(states), start, accept, frozenset(transitions), clock, label)


def read_machine(path) -> MachineDescription:
    with open(path, encoding="utf-8") as fh:
        return parse_machine(fh.read(), label=str(path))


def format_machine(m: MachineDescription) -> str:
    lines = [f"state {s}" for s in m.sorted_states()]
    lines += [f"start {m.start}", f"accept {m.accept}", f"clock {m.clock}"]
    lines += [f"trans {t}" for t in sorted(m.transitions)]
    return "\n".join(lines) + "\n"


def fixture(name: str) -> MachineDescription:
    """Bundled machines: ``lastbit0``, ``lastbit1``, ``contains11``, ``no11``."""
    text = resources.files(__package__).joinpath("fixtures").joinpath(f"{name}.tm").read_text("utf-8")
    return parse_machine(text, label=name)


# --------------------------------------------------------------------------
# tags


def canonical_tag(m: MachineDescription) -> MachineTag:
    """Canonical one-token serialization; usable inside variable names."""
    trans = ".".join(
        f"{t.state}/{t.read}/{t.next_state}/{t.write}/{t.move}" for t in sorted(m.transitions)
    )
    return f"tm;e={m.clock};s={m.start};a={m.accept};Q={'.'.join(m.sorted_states())};D={trans}"


_TAG_RE = re.compile(
    r"tm;e=(?P<e>[1-9][0-9]*);s=(?P<s>[A-Za-z0-9_]+);a=(?P<a>[A-Za-z0-9_]+);"
    r"Q=(?P<q>[A-Za-z0-9_]+(?:\.[A-Za-z0-9_]+)*);D=(?P<d>[A-Za-z0-9_/.]*)"
)


def parse_tag(tag: MachineTag) -> MachineDescription:
    m = _TAG_RE.fullmatch(tag)
    if m is None:
        raise MachineFormatError(f"malformed machine tag {tag!r}")
    transitions = []
    if m["d"]:
        for item in m["d"].split("."):
            parts = item.split("/")
            if len(parts) != 5:
                raise MachineFormatError(f"malformed transition {item!r} in tag")
            transitions.append(Transition(*parts))
    machine = MachineDescription(
        frozenset(m["q"].split(".")), m["s"], m["a"], frozenset(transitions), int(m["e"])
    )
    if canonical_tag(machine) != tag:
        raise MachineFormatError("tag is not in canonical form")
    return machine


# --------------------------------------------------------------------------
# simulation


def step(m: MachineDescription, config, tape_cells: int):
    """Successor configurations of ``(state, head, tape)``."""
    state, head, tape = config
    out = []
    for t in m.moves(state, tape[head]):
        if t.move == "L":
            new_head = max(head - 1, 0)
        elif t.move == "R":
            new_head = head + 1
        else:
            new_head = head
        if new_head >= tape_cells:
            continue
        new_tape = tape[:head] + t.write + tape[head + 1:]
        out.append((t.next_state, new_head, new_tape))
    return out


def initial_config(m: MachineDescription, x: str, tape_cells: int):
    return (m.start, 0, x + BLANK * (tape_cells - len(x)))


def accepts(m: MachineDescription, x: str, max_configs: int = DEFAULT_MAX_CONFIGS) -> bool:
    """True iff some computation path reaches the accept state within the clock bound."""
    if any(c not in "01" for c in x):
        raise ValueError(f"input must be a bit string: {x!r}")
    bound = m.time_bound(len(x))
    cells = bound + 1
    frontier = {initial_config(m, x, cells)}
    visited = len(frontier)
    for t in range(bound + 1):
        if any(c[0] == m.accept for c in frontier):
            return True
        if t == bound:
            break
        nxt = set()
        for config in frontier:
            nxt.update(step(m, config, cells))
        visited += len(nxt)
        if visited > max_configs:
            raise BudgetExceeded(f"simulation visited more than {max_configs} configurations")
        if not nxt:
            return False
        frontier = nxt
    return False


def trace(m: MachineDescription, x: str):
    """Breadth-first frontiers, one set per time step (for debugging and tests)."""
    bound = m.time_bound(len(x))
    frontier = {initial_config(m, x, bound + 1)}
    layers = [frontier]
    for _ in range(bound):
        frontier = {c for config in frontier for c in step(m, config, bound + 1)}
        layers.append(frontier)
    return layers


__all__ = [
    "BLANK",
    "MachineDescription",
    "MachineTag",
    "Transition",
    "accepts",
    "canonical_tag",
    "fixture",
    "format_machine",
    "parse_machine",
    "parse_tag",
    "read_machine",
]
