"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 unreadable or invalid input, 3 budget
exceeded, 4 the property asked about is false (JUNK, NONMEMBER, not a
backbone, transfer inequality violated).
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from . import backbone as bb
from .errors import (
    BudgetExceeded,
    DomainMismatch,
    FormulaSyntaxError,
    MachineFormatError,
    NotABackbone,
    NotComplementary,
    WrongFamily,
)
from .exact import frozen_vars_exact
from .formula import parse_name, random_formula, read_formula, serialize_formula, write_formula
from .frequency import ADAPTERS, adapter, transfer_check
from .gadgets import ConstructionParams, build_a3k, build_thm3, membership_test, write_gadget
from .machine import fixture, read_machine
from .reduction import JUNK, invert, reduce, write_artifact
from .sat import DEFAULT_CONFLICT_BUDGET, tseitin, write_dimacs

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_NEGATIVE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class InputError(Exception):
    pass


def _machine(where: str):
    """A ``.tm`` path, or the name of a bundled machine."""
    if os.path.exists(where):
        return read_machine(where)
    try:
        return fixture(where)
    except FileNotFoundError:
        raise InputError(f"no machine file or bundled machine named {where!r}") from None


def _epsilon(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _bits(text: str) -> str:
    if any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError(f"not a bit string: {text!r}")
    return text


def _names(text: str):
    return [parse_name(t) for t in text.split(",") if t]


def _params(args) -> ConstructionParams:
    return ConstructionParams(
        _machine(args.mi),
        _machine(args.mj),
        k=getattr(args, "k", None),
        epsilon=getattr(args, "epsilon", None),
        max_steps=args.max_steps,
    )


def _out(line=""):
    sys.stdout.write(line + "\n")


# --------------------------------------------------------------------------
# subcommands


def cmd_reduce(args):
    art = reduce(_machine(args.machine), args.input, args.max_steps)
    write_artifact(args.out, art)
    _out(f"tag {art.machine_tag}")
    _out(f"p {art.p}")
    return EXIT_OK


def cmd_invert(args):
    decoded = invert(read_formula(args.formula))
    if decoded == JUNK:
        _out("JUNK")
        return EXIT_NEGATIVE
    _out(f"tag {decoded[0]}")
    _out(f"input {decoded[1]}")
    return EXIT_OK


def cmd_build(args):
    params = _params(args)
    g = build_a3k(params, args.input) if args.family == "a3k" else build_thm3(params, args.input)
    write_gadget(args.out, g)
    _out(f"family {g.family}")
    _out(f"{'k' if g.family == 'a3k' else 'm'} {g.size}")
    _out(f"input {g.x}")
    return EXIT_OK


def cmd_member(args):
    ok = membership_test(read_formula(args.formula), _params(args))
    _out("MEMBER" if ok else "NONMEMBER")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_backbone(args):
    f = read_formula(args.formula)
    if args.method == "brute":
        report = bb.frozen_vars_brute(f, args.brute_limit)
    elif args.method == "sat":
        report = bb.frozen_vars_sat(f, args.budget_conflicts)
    else:
        report = frozen_vars_exact(f, args.brute_limit)
    sys.stdout.write(report.to_json() + "\n" if args.json else report.text())
    return EXIT_OK


def cmd_backbone_value(args):
    f = read_formula(args.formula)
    s = _names(args.vars)
    try:
        value = bb.backbone_value(f, s, args.budget_conflicts)
    except NotABackbone:
        _out("NOT A BACKBONE")
        return EXIT_NEGATIVE
    _out("vars " + ",".join(str(v) for v in sorted(value)))
    _out("values " + bb.value_bits(value))
    return EXIT_OK


def cmd_verify(args):
    f = read_formula(args.formula)
    s = sorted(_names(args.vars))
    if len(args.values) != len(s):
        raise InputError("--values needs one bit per variable in --vars")
    # bits follow the sorted variable order, as printed by backbone-value
    a = {v: c == "1" for v, c in zip(s, args.values)}
    ok = bb.verify_backbone(f, s, a, args.budget_conflicts)
    _out("BACKBONE" if ok else "NOT A BACKBONE")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_freq(args):
    report = transfer_check(adapter(args.heuristic), _params(args), args.max_n)
    sys.stdout.write(report.text())
    return EXIT_OK if report.holds else EXIT_NEGATIVE


def cmd_export_dimacs(args):
    cnf = tseitin(read_formula(args.formula))
    map_path = args.map or args.out + ".map"
    write_dimacs(cnf, args.out, map_path)
    _out(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    return EXIT_OK


def cmd_random_formula(args):
    rng = random.Random(args.seed)
    f = random_formula(rng, args.vars, args.size)
    if args.out:
        write_formula(args.out, f)
    else:
        _out(serialize_formula(f))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-conflicts", type=int, default=argparse.SUPPRESS)
    common.add_argument("--brute-limit", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-steps", type=int, default=argparse.SUPPRESS)

    p = _Parser(prog="backbone-lab", description="Backbone gadgets, reductions and checks.")
    p.add_argument("--budget-conflicts", type=int, default=DEFAULT_CONFLICT_BUDGET,
                   help="SAT conflict budget per query (default 10^6)")
    p.add_argument("--brute-limit", type=int, default=bb.DEFAULT_BRUTE_LIMIT,
                   help="largest variable count for truth-table enumeration (default 22)")
    p.add_argument("--seed", type=int, default=0, help="seed for random corpora")
    p.add_argument("--max-steps", type=int, default=64, help="largest machine clock bound to encode")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("reduce", cmd_reduce, "reduce a machine and input to a formula")
    sp.add_argument("--machine", required=True)
    sp.add_argument("--input", required=True, type=_bits)
    sp.add_argument("--out", required=True)

    sp = add("invert", cmd_invert, "recover machine tag and input from a reduction output")
    sp.add_argument("--formula", required=True)

    bp = add("build", None, "build a gadget")
    bsub = bp.add_subparsers(dest="family", metavar="FAMILY", parser_class=_Parser)
    bsub.required = True
    for fam in ("a3k", "thm3"):
        fp = bsub.add_parser(fam, parents=[common])
        fp.set_defaults(func=cmd_build)
        fp.add_argument("--mi", required=True)
        fp.add_argument("--mj", required=True)
        if fam == "a3k":
            fp.add_argument("--k", required=True, type=int)
        else:
            fp.add_argument("--epsilon", required=True, type=_epsilon)
        fp.add_argument("--input", required=True, type=_bits)
        fp.add_argument("--out", required=True)

    def family_args(sp):
        sp.add_argument("--mi", required=True)
        sp.add_argument("--mj", required=True)
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--k", type=int)
        g.add_argument("--epsilon", type=_epsilon)

    sp = add("member", cmd_member, "test gadget-family membership")
    sp.add_argument("--formula", required=True)
    family_args(sp)

    sp = add("backbone", cmd_backbone, "frozen variables (maximum backbone)")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--method", choices=("brute", "sat", "exact"), default="sat")
    sp.add_argument("--json", action="store_true")

    sp = add("backbone-value", cmd_backbone_value, "value of a backbone")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--vars", required=True, help="comma-separated variable names")

    sp = add("verify", cmd_verify, "check a backbone and its value")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--vars", required=True)
    sp.add_argument("--values", required=True, type=_bits,
                    help="one bit per variable, variables in sorted order")

    sp = add("freq", cmd_freq, "heuristic error transfer report")
    family_args(sp)
    sp.add_argument("--max-n", required=True, type=int)
    sp.add_argument("--heuristic", required=True, choices=sorted(ADAPTERS))

    sp = add("export-dimacs", cmd_export_dimacs, "write the Tseitin CNF in DIMACS form")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--map", help="sidecar variable map (default OUT.map)")

    sp = add("random-formula", cmd_random_formula, "random formula for test corpora (uses --seed)")
    sp.add_argument("--vars", required=True, type=int)
    sp.add_argument("--size", required=True, type=int)
    sp.add_argument("--out")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        InputError,
        FormulaSyntaxError,
        MachineFormatError,
        NotComplementary,
        DomainMismatch,
        WrongFamily,
        ValueError,
        KeyError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
