"""
Command-line surface. ``run(argv)`` parses, dispatches, prints the report on stdout and returns
the exit code: 0 true/success, 1 predicate false, 2 input or logic error, 3 resource cap.

This is the only place exceptions become exit codes. Logging goes to stderr so stdout stays
byte-deterministic.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import pandas as pd

from . import constants as C
from .closure import contains, generate, is_closed, separating_system
from .domain_core import FiniteDomain, Operation
from .errors import GaloisError, InputError, LogicError, ResourceCapError
from .formats import emit_ops, emit_systems, format_multiset, format_op, format_pointed, format_tuple, parse_multiset
from .linear_terms import format_term, linear_term_witnesses, mu, saturate
from .minors import is_extensive_minor, is_restrictive_minor, tight_minor
from .preservation import characterized_ops, preserves_relation, violation
from .selftest import run_acceptance
from .systems import (
    System,
    arity_floor_system,
    breadth_restrict,
    empty_system,
    equality_system,
    from_relation,
    quotient,
    trivial,
    union,
    validate,
)
from .workspace import Workspace

logger = logging.getLogger(__name__)


def _csv(value: str) -> List[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="galois_tool.py",
                                 description="Operations, systems of pointed multisets and their Galois connection")
    ap.add_argument("--caps", action="append", default=[], metavar="KEY=VALUE",
                    help="override a resource cap (repeatable)")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closure", help="generate the arity-bounded closure of a set of operations")
    _closure_inputs(p)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--list", action="store_true", help="print every member as an op line")
    mode.add_argument("--contains", metavar="NAME", help="exit 0 iff the named op is a member")
    mode.add_argument("--check", action="store_true", help="exit 0 iff the generators are already closed")

    p = sub.add_parser("separate", help="build a system separating a non-member from the closure")
    _closure_inputs(p)
    p.add_argument("--target", required=True, metavar="NAME")
    p.add_argument("--out", required=True, metavar="SYSFILE")

    p = sub.add_parser("preserve", help="does an operation preserve a system or relation")
    p.add_argument("--ops", required=True, metavar="FILE")
    p.add_argument("--op", required=True, metavar="NAME")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--system", metavar="FILE")
    target.add_argument("--rel", metavar="FILE")
    p.add_argument("--name", metavar="NAME", help="system to test (default: every system in the file)")
    p.add_argument("--rel-name", metavar="NAME")
    p.add_argument("--explain", action="store_true", help="print the violating matrix")

    p = sub.add_parser("characterize", help="operations of arity <= N preserving the given systems")
    p.add_argument("--system", required=True, type=_csv, metavar="FILE[,FILE...]")
    p.add_argument("--domain", required=True, type=int, metavar="K")
    p.add_argument("--max-arity", required=True, type=int, metavar="N")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--list", action="store_true")
    mode.add_argument("--summary", action="store_true")

    p = sub.add_parser("minor", help="tight conjunctive minor of a family via a scheme")
    p.add_argument("--systems", required=True, type=_csv, metavar="FILE[,FILE...]")
    p.add_argument("--scheme", required=True, metavar="FILE")
    p.add_argument("--scheme-name", metavar="NAME")
    p.add_argument("--breadth", required=True, type=int, metavar="B")
    p.add_argument("--check", metavar="SYSFILE", help="report whether this system is a conjunctive minor")
    p.add_argument("--out", metavar="SYSFILE")

    p = sub.add_parser("sys", help="construct or transform systems")
    p.add_argument("action", choices=["trivial", "empty", "equality", "relation", "floor",
                                      "quotient", "restrict", "union", "validate"])
    p.add_argument("--m", type=int)
    p.add_argument("--breadth", type=int)
    p.add_argument("--domain", type=int, metavar="K")
    p.add_argument("--p", type=int, help="arity floor for 'floor'")
    p.add_argument("--rel", metavar="FILE")
    p.add_argument("--rel-name", metavar="NAME")
    p.add_argument("--system", type=_csv, metavar="FILE[,FILE...]")
    p.add_argument("--by", metavar="{t1,...}", help="divisor multiset for 'quotient'")
    p.add_argument("--name", default="s", metavar="NAME")
    p.add_argument("--out", metavar="SYSFILE")

    p = sub.add_parser("rel", help="the relation system (Φ_R, Φ′_R) of a relation")
    p.add_argument("--rel", required=True, metavar="FILE")
    p.add_argument("--name", required=True, metavar="NAME")
    p.add_argument("--breadth", required=True, type=int, metavar="B")
    p.add_argument("--out", required=True, metavar="SYSFILE")

    p = sub.add_parser("mu", help="emit the operation mu_n")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--domain", required=True, type=int, metavar="K")
    p.add_argument("--name", required=True)
    p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("linear-terms", help="operations induced by linear terms")
    p.add_argument("--ops", required=True, metavar="FILE")
    p.add_argument("--sig", required=True, type=_csv, metavar="a,b,...")
    p.add_argument("--arity", required=True, type=int, metavar="n")
    p.add_argument("--max-complexity", type=int, metavar="C",
                   help="complexity bound (default: saturate)")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--list", action="store_true")
    mode.add_argument("--show-terms", action="store_true")

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true", help="skip the long cases")
    return ap


def _closure_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ops", required=True, metavar="FILE")
    p.add_argument("--gens", type=_csv, default=[], metavar="a,b,...")
    p.add_argument("--max-arity", required=True, type=int, metavar="N")
    p.add_argument("--with-delta", action="store_true")
    p.add_argument("--no-projections", action="store_true")


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------
def _write(text: str, path: Optional[str], out: TextIO) -> None:
    if path:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None
    else:
        out.write(text)


def _verdict(value: bool, out: TextIO) -> int:
    out.write("true\n" if value else "false\n")
    return C.EXIT_TRUE if value else C.EXIT_FALSE


def _generators(ws: Workspace, names: Sequence[str]) -> Dict[str, Operation]:
    return {name: ws.op(name) for name in names}


def _fragment(ws: Workspace, args):
    return generate(_generators(ws, args.gens), args.max_arity, ws.require_domain(),
                    with_projections=not args.no_projections, with_delta=args.with_delta,
                    caps=ws.caps)


def _named_members(ops: Sequence[Operation], prefix: str = "c") -> List[Tuple[str, Operation]]:
    counters: Dict[int, int] = {}
    named = []
    for f in sorted(ops, key=Operation.sort_key):
        i = counters.get(f.arity, 0)
        counters[f.arity] = i + 1
        named.append((f"{prefix}{f.arity}_{i}", f))
    return named


def _domain_flag(ws: Workspace, k: Optional[int]) -> FiniteDomain:
    if k is not None:
        domain = FiniteDomain(k)
        if ws.domain is not None and ws.domain != domain:
            raise InputError(f"--domain {k} disagrees with the loaded files (k={ws.domain.size})")
        ws.domain = domain
    return ws.require_domain()


def _need(value, flag: str, action: str):
    if value is None:
        raise InputError(f"'sys {action}' needs {flag}")
    return value


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------
def cmd_closure(ws: Workspace, args, out: TextIO) -> int:
    ws.load_ops(args.ops)
    if args.check:
        report = is_closed(list(_generators(ws, args.gens).values()), args.max_arity, args.with_delta)
        out.write(f"{'closed' if report.closed else 'not closed'}: {report.reason}\n")
        if report.witness is not None:
            out.write(format_op("missing", report.witness) + "\n")
        return C.EXIT_TRUE if report.closed else C.EXIT_FALSE
    fragment = _fragment(ws, args)
    if args.contains:
        return _verdict(contains(fragment, ws.op(args.contains)), out)
    members = fragment.all_members()
    out.write(emit_ops(fragment.domain, [(fragment.name_of(f), f) for f in members]))
    return C.EXIT_TRUE


def cmd_separate(ws: Workspace, args, out: TextIO) -> int:
    ws.load_ops(args.ops)
    fragment = _fragment(ws, args)
    system = separating_system(fragment, ws.op(args.target), caps=ws.caps)
    _write(emit_systems(system.domain, [(f"sep_{args.target}", system)]), args.out, out)
    out.write(f"separating system: m={system.arity} breadth={system.breadth} "
              f"|ante|={len(system.ante)} |cons|={len(system.cons)}\n")
    return C.EXIT_TRUE


def cmd_preserve(ws: Workspace, args, out: TextIO) -> int:
    ws.load_ops(args.ops)
    f = ws.op(args.op)
    if args.rel:
        ws.load_relations(args.rel)
        if not args.rel_name:
            raise InputError("--rel needs --rel-name")
        return _verdict(preserves_relation(f, ws.relation(args.rel_name), ws.caps), out)
    loaded = ws.load_systems(args.system)
    targets = [(args.name, ws.system(args.name))] if args.name else list(loaded.items())
    for name, system in targets:
        witness = violation(f, system)
        if witness is not None:
            if args.explain:
                d, m = system.domain, system.arity
                out.write(f"system {name}: matrix {format_multiset(witness.member, d)} "
                          f"with M1 columns {' '.join(format_tuple(c, m, d) for c in witness.columns)} "
                          f"maps to {format_tuple(witness.image, m, d)}; "
                          f"cons {format_pointed(witness.pointed, m, d)} is missing\n")
            return _verdict(False, out)
    return _verdict(True, out)


def cmd_characterize(ws: Workspace, args, out: TextIO) -> int:
    domain = _domain_flag(ws, args.domain)
    systems: List[System] = []
    for path in args.system:
        systems.extend(ws.load_systems(path).values())
    found = characterized_ops(systems, args.max_arity, domain, ws.caps)
    if args.list:
        out.write(emit_ops(domain, _named_members(found)))
        return C.EXIT_TRUE
    k = domain.size
    summary = pd.DataFrame({
        "arity": list(range(1, args.max_arity + 1)),
        "candidates": [k ** (k ** n) for n in range(1, args.max_arity + 1)],
        "preserving": [sum(1 for f in found if f.arity == n) for n in range(1, args.max_arity + 1)],
    })
    out.write(summary.to_string(index=False) + "\n")
    return C.EXIT_TRUE


def cmd_minor(ws: Workspace, args, out: TextIO) -> int:
    family: List[System] = []
    for path in args.systems:
        family.extend(ws.load_systems(path).values())
    schemes = ws.load_schemes(args.scheme)
    if args.scheme_name:
        if args.scheme_name not in schemes:
            raise InputError(f"unknown scheme {args.scheme_name!r}")
        scheme = schemes[args.scheme_name]
    elif len(schemes) == 1:
        scheme = next(iter(schemes.values()))
    else:
        raise InputError(f"{args.scheme} holds {len(schemes)} schemes; pick one with --scheme-name")
    if args.check:
        candidate = ws.only_system(ws.load_systems(args.check), args.check)
        restrictive = is_restrictive_minor(candidate, family, scheme, ws.caps)
        extensive = is_extensive_minor(candidate, family, scheme, ws.caps)
        out.write(f"restrictive: {str(restrictive).lower()}\nextensive: {str(extensive).lower()}\n")
        return _verdict(restrictive and extensive, out)
    minor = tight_minor(family, scheme, args.breadth, ws.caps)
    _write(emit_systems(minor.domain, [("minor", minor)]), args.out, out)
    return C.EXIT_TRUE


def cmd_sys(ws: Workspace, args, out: TextIO) -> int:
    action = args.action
    if action == "validate":
        code = C.EXIT_TRUE
        for path in _need(args.system, "--system", action):
            for name, system in ws.load_systems(path, check_valid=False).items():
                check = validate(system)
                out.write(f"{name}: {'ok' if check.valid else 'invalid: ' + check.reason}\n")
                if not check.valid:
                    code = C.EXIT_FALSE
        return code

    if action in ("trivial", "empty", "equality"):
        domain = _domain_flag(ws, args.domain)
        m = _need(args.m, "--m", action)
        if action == "trivial":
            system = trivial(m, _need(args.breadth, "--breadth", action), domain, ws.caps)
        elif action == "equality":
            system = equality_system(m, _need(args.breadth, "--breadth", action), domain, ws.caps)
        else:
            system = empty_system(m, domain, args.breadth or 0)
    elif action == "floor":
        domain = _domain_flag(ws, args.domain)
        system = arity_floor_system(_need(args.p, "--p", action), domain, args.breadth)
    elif action == "relation":
        ws.load_relations(_need(args.rel, "--rel", action))
        relation = ws.relation(_need(args.rel_name, "--rel-name", action))
        system = from_relation(relation, _need(args.breadth, "--breadth", action), ws.caps)
    else:
        loaded: List[System] = []
        for path in _need(args.system, "--system", action):
            loaded.extend(ws.load_systems(path).values())
        if action == "union":
            system = union(loaded)
        elif len(loaded) != 1:
            raise InputError(f"'sys {action}' needs exactly one input system, got {len(loaded)}")
        elif action == "quotient":
            base = loaded[0]
            divisor = parse_multiset(_need(args.by, "--by", action), base.arity, base.domain)
            system = quotient(base, divisor)
        else:
            system = breadth_restrict(loaded[0], _need(args.breadth, "--breadth", action))
    _write(emit_systems(system.domain, [(args.name, system)]), args.out, out)
    return C.EXIT_TRUE


def cmd_rel(ws: Workspace, args, out: TextIO) -> int:
    ws.load_relations(args.rel)
    system = from_relation(ws.relation(args.name), args.breadth, ws.caps)
    _write(emit_systems(system.domain, [(args.name, system)]), args.out, out)
    return C.EXIT_TRUE


def cmd_mu(ws: Workspace, args, out: TextIO) -> int:
    domain = FiniteDomain(args.domain)
    f = mu(args.n, domain)
    _write(emit_ops(domain, [(args.name, f)]), args.out, out)
    return C.EXIT_TRUE


def cmd_linear_terms(ws: Workspace, args, out: TextIO) -> int:
    ws.load_ops(args.ops)
    assignment = _generators(ws, args.sig)
    domain = ws.require_domain()
    if args.max_complexity is None:
        complexity, _ = saturate(assignment, args.arity, domain, caps=ws.caps)
        logger.info("saturated at complexity %d", complexity)
    else:
        complexity = args.max_complexity
    witnesses = linear_term_witnesses(assignment, args.arity, complexity, domain, ws.caps)
    named = _named_members(list(witnesses), prefix="t")
    if args.list:
        out.write(emit_ops(domain, named))
    else:
        lines = [f"domain {domain.size}"]
        lines.extend(f"{format_op(name, f)}  # {format_term(witnesses[f])}" for name, f in named)
        out.write("\n".join(lines) + "\n")
    return C.EXIT_TRUE


def cmd_selftest(ws: Workspace, args, out: TextIO) -> int:
    report = run_acceptance(quick=args.quick, caps=ws.caps)
    out.write(report.drop(columns="seconds").to_string(index=False) + "\n")
    passed = bool(report["passed"].all())
    out.write("all criteria passed\n" if passed else "some criteria FAILED\n")
    return C.EXIT_TRUE if passed else C.EXIT_FALSE


COMMANDS = {
    "closure": cmd_closure,
    "separate": cmd_separate,
    "preserve": cmd_preserve,
    "characterize": cmd_characterize,
    "minor": cmd_minor,
    "sys": cmd_sys,
    "rel": cmd_rel,
    "mu": cmd_mu,
    "linear-terms": cmd_linear_terms,
    "selftest": cmd_selftest,
}


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors
        return C.EXIT_TRUE if exc.code in (0, None) else C.EXIT_INPUT_ERROR
    configure_logging(args.verbose)
    try:
        ws = Workspace.with_caps(args.caps)
        return COMMANDS[args.command](ws, args, out)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return C.EXIT_RESOURCE_CAP
    except (InputError, LogicError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return C.EXIT_INPUT_ERROR
    except GaloisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return C.EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(run())
