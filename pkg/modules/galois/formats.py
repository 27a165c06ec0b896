"""
Parse and emit the four text formats: operations, relations, systems and schemes.

    domain <k>
    op <name> <arity> <table>                 table: k**arity base-k digits in rank order
    rel <name> <m> <t1> <t2> ...              each t an m-digit tuple
    system <name> m=<m> breadth=<B>
    ante {t1,t2,...}                          ε is {}
    cons <t0> {t1,...}
    scheme <name> target=<m> vars=<v1,...>
    map <n_j> <img_0> ... <img_{n_j-1}>        img: 0-based coordinate or declared var

'#' starts a comment. Ops, rel and system files start with ``domain <k>`` (readers of rel and
system files also accept a domain supplied by the caller). Writers emit exactly this grammar in
canonical order, so parse-then-emit is the identity on canonical text. Parsed systems are
validated; an invalid one is rejected with the violated condition.
"""
from __future__ import annotations

import re
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from . import constants as C
from .domain_core import FiniteDomain, Operation, rank, unrank
from .errors import FormatError, InputError
from .minors import Scheme
from .multisets import Multiset, PointedMultiset
from .preservation import Relation
from .systems import System, validate

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"0|[1-9][0-9]*")


def _lines(text: str) -> Iterator[Tuple[int, str, List[str]]]:
    """(line number, stripped line, tokens) for every non-blank, non-comment line."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line, line.split()


def _name(token: str, line_no: int, line: str) -> str:
    if not _NAME.fullmatch(token):
        raise FormatError(f"invalid name {token!r}", line_no, line)
    return token


def _int(token: str, what: str, line_no: int, line: str) -> int:
    if not _INT.fullmatch(token):
        raise FormatError(f"{what} must be a non-negative integer, got {token!r}", line_no, line)
    return int(token)


def _domain_line(tokens: List[str], line_no: int, line: str) -> FiniteDomain:
    if len(tokens) != 2:
        raise FormatError("expected 'domain <k>'", line_no, line)
    k = _int(tokens[1], "domain size", line_no, line)
    if not 1 <= k <= C.MAX_DIGIT_DOMAIN_SIZE:
        raise FormatError(f"text formats support 1 <= k <= {C.MAX_DIGIT_DOMAIN_SIZE}, got {k}",
                          line_no, line)
    return FiniteDomain(k)


def _set_domain(current: Optional[FiniteDomain], found: FiniteDomain, seen_header: bool,
                line_no: int, line: str) -> FiniteDomain:
    if seen_header:
        raise FormatError("duplicate domain line", line_no, line)
    if current is not None and current != found:
        raise FormatError(f"file declares k={found.size} but k={current.size} is in use", line_no, line)
    return found


def _require_domain(domain: Optional[FiniteDomain], line_no: int, line: str) -> FiniteDomain:
    if domain is None:
        raise FormatError("a 'domain <k>' line must come first", line_no, line)
    return domain


def _check_new(names: Dict, name: str, kind: str, line_no: int, line: str) -> None:
    if name in names:
        raise FormatError(f"duplicate {kind} name {name!r}", line_no, line)


# ---------------------------------------------------------------------------
# Tuples and multiset literals
# ---------------------------------------------------------------------------
def format_tuple(r: int, m: int, domain: FiniteDomain) -> str:
    return "".join(str(a) for a in unrank(r, m, domain))


def parse_tuple(token: str, m: int, domain: FiniteDomain, line_no: Optional[int] = None,
                line: str = "") -> int:
    if len(token) != m:
        raise FormatError(f"tuple {token!r} must have {m} digits", line_no, line)
    if not token.isdigit() or any(int(ch) >= domain.size for ch in token):
        raise FormatError(f"tuple {token!r} has a digit outside 0..{domain.size - 1}", line_no, line)
    return rank([int(ch) for ch in token], domain)


def format_multiset(s: Multiset, domain: FiniteDomain) -> str:
    return "{" + ",".join(format_tuple(p, s.arity, domain) for p in s.points()) + "}"


def parse_multiset(literal: str, m: int, domain: FiniteDomain, line_no: Optional[int] = None,
                   line: str = "") -> Multiset:
    if not (literal.startswith("{") and literal.endswith("}")):
        raise FormatError(f"multiset literal must look like {{t1,t2,...}}, got {literal!r}", line_no, line)
    body = literal[1:-1]
    if not body:
        return Multiset.empty(m)
    return Multiset.from_points(m, (parse_tuple(t, m, domain, line_no, line) for t in body.split(",")))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------
def parse_ops(text: str) -> Tuple[FiniteDomain, Dict[str, Operation]]:
    domain: Optional[FiniteDomain] = None
    ops: Dict[str, Operation] = {}
    for line_no, line, tokens in _lines(text):
        if tokens[0] == "domain":
            domain = _set_domain(None, _domain_line(tokens, line_no, line), domain is not None,
                                 line_no, line)
        elif tokens[0] == "op":
            domain = _require_domain(domain, line_no, line)
            if len(tokens) != 4:
                raise FormatError("expected 'op <name> <arity> <table>'", line_no, line)
            name = _name(tokens[1], line_no, line)
            _check_new(ops, name, "op", line_no, line)
            arity = _int(tokens[2], "arity", line_no, line)
            table = tokens[3]
            if arity < 1:
                raise FormatError("arity must be >= 1", line_no, line)
            if len(table) != domain.size ** arity:
                raise FormatError(f"table needs {domain.size ** arity} digits, got {len(table)}",
                                  line_no, line)
            if not table.isdigit() or any(int(ch) >= domain.size for ch in table):
                raise FormatError(f"table has a digit outside 0..{domain.size - 1}", line_no, line)
            ops[name] = Operation.from_values(domain, arity, (int(ch) for ch in table))
        else:
            raise FormatError(f"unknown directive {tokens[0]!r}", line_no, line)
    if domain is None:
        raise FormatError("missing 'domain <k>' line")
    return domain, ops


def format_op(name: str, f: Operation) -> str:
    if f.domain.size > C.MAX_DIGIT_DOMAIN_SIZE:
        raise InputError(f"k={f.domain.size} cannot be written with one digit per entry")
    return f"op {name} {f.arity} {f.table_string()}"


def emit_ops(domain: FiniteDomain, named: Iterable[Tuple[str, Operation]]) -> str:
    lines = [f"domain {domain.size}"]
    lines.extend(format_op(name, f) for name, f in named)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------
def parse_relations(text: str, domain: Optional[FiniteDomain] = None
                    ) -> Tuple[FiniteDomain, Dict[str, Relation]]:
    seen_header = False
    relations: Dict[str, Relation] = {}
    for line_no, line, tokens in _lines(text):
        if tokens[0] == "domain":
            domain = _set_domain(domain, _domain_line(tokens, line_no, line), seen_header, line_no, line)
            seen_header = True
        elif tokens[0] == "rel":
            domain = _require_domain(domain, line_no, line)
            if len(tokens) < 3:
                raise FormatError("expected 'rel <name> <m> t1 t2 ...'", line_no, line)
            name = _name(tokens[1], line_no, line)
            _check_new(relations, name, "rel", line_no, line)
            m = _int(tokens[2], "relation arity", line_no, line)
            if m < 1:
                raise FormatError("relation arity must be >= 1", line_no, line)
            ranks = [parse_tuple(t, m, domain, line_no, line) for t in tokens[3:]]
            relations[name] = Relation(domain, m, frozenset(ranks))
        else:
            raise FormatError(f"unknown directive {tokens[0]!r}", line_no, line)
    if domain is None:
        raise FormatError("missing 'domain <k>' line")
    return domain, relations


def format_relation(name: str, relation: Relation) -> str:
    tuples = " ".join(format_tuple(r, relation.arity, relation.domain) for r in sorted(relation.tuples))
    return f"rel {name} {relation.arity}" + (f" {tuples}" if tuples else "")


def emit_relations(domain: FiniteDomain, named: Iterable[Tuple[str, Relation]]) -> str:
    lines = [f"domain {domain.size}"]
    lines.extend(format_relation(name, r) for name, r in named)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------
_SYSTEM_HEADER = re.compile(r"system (\S+) m=(\S+) breadth=(\S+)")
_ANTE = re.compile(r"ante (\{\S*\})")
_CONS = re.compile(r"cons (\S+) (\{\S*\})")


def parse_systems(text: str, domain: Optional[FiniteDomain] = None, check_valid: bool = True
                  ) -> Tuple[FiniteDomain, Dict[str, System]]:
    """``check_valid=False`` skips the defining conditions (``sys validate`` reports them itself)."""
    seen_header = False
    systems: Dict[str, System] = {}
    current = None   # [name, m, breadth, ante, cons, header line no, header text]

    def close() -> None:
        if current is None:
            return
        name, m, breadth, ante, cons, line_no, line = current
        system = System(domain, m, breadth, frozenset(ante), frozenset(cons))
        check = validate(system) if check_valid else None
        if check is not None and not check.valid:
            raise FormatError(f"system {name} is invalid: {check.reason}", line_no, line)
        systems[name] = system

    for line_no, line, tokens in _lines(text):
        line = " ".join(tokens)
        if tokens[0] == "domain":
            if current is not None:
                raise FormatError("the domain line must precede every system", line_no, line)
            domain = _set_domain(domain, _domain_line(tokens, line_no, line), seen_header, line_no, line)
            seen_header = True
        elif tokens[0] == "system":
            domain = _require_domain(domain, line_no, line)
            match = _SYSTEM_HEADER.fullmatch(line)
            if not match:
                raise FormatError("expected 'system <name> m=<m> breadth=<B>'", line_no, line)
            close()
            name = _name(match.group(1), line_no, line)
            if name in systems or (current is not None and current[0] == name):
                raise FormatError(f"duplicate system name {name!r}", line_no, line)
            m = _int(match.group(2), "m", line_no, line)
            breadth = _int(match.group(3), "breadth", line_no, line)
            if m < 1:
                raise FormatError("system arity must be >= 1", line_no, line)
            current = [name, m, breadth, set(), set(), line_no, line]
        elif tokens[0] in ("ante", "cons"):
            if current is None:
                raise FormatError(f"'{tokens[0]}' line outside a system block", line_no, line)
            m = current[1]
            if tokens[0] == "ante":
                match = _ANTE.fullmatch(line)
                if not match:
                    raise FormatError("expected 'ante {t1,t2,...}'", line_no, line)
                current[3].add(parse_multiset(match.group(1), m, domain, line_no, line))
            else:
                match = _CONS.fullmatch(line)
                if not match:
                    raise FormatError("expected 'cons <t0> {t1,...}'", line_no, line)
                point = parse_tuple(match.group(1), m, domain, line_no, line)
                rest = parse_multiset(match.group(2), m, domain, line_no, line)
                current[4].add(PointedMultiset(point, rest))
        else:
            raise FormatError(f"unknown directive {tokens[0]!r}", line_no, line)
    close()
    if domain is None:
        raise FormatError("missing 'domain <k>' line")
    return domain, systems


def format_pointed(pm: PointedMultiset, m: int, domain: FiniteDomain) -> str:
    return f"{format_tuple(pm.point, m, domain)} {format_multiset(pm.rest, domain)}"


def format_system(name: str, system: System) -> List[str]:
    d = system.domain
    lines = [f"system {name} m={system.arity} breadth={system.breadth}"]
    lines.extend(f"ante {format_multiset(s, d)}" for s in system.sorted_ante())
    lines.extend(f"cons {format_pointed(pm, system.arity, d)}" for pm in system.sorted_cons())
    return lines


def emit_systems(domain: FiniteDomain, named: Iterable[Tuple[str, System]]) -> str:
    lines = [f"domain {domain.size}"]
    for name, system in named:
        if system.domain != domain:
            raise InputError(f"system {name} lives on k={system.domain.size}, not k={domain.size}")
        lines.extend(format_system(name, system))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Schemes
# ---------------------------------------------------------------------------
_SCHEME_HEADER = re.compile(r"scheme (\S+) target=(\S+) vars=(\S*)")


def parse_schemes(text: str) -> Dict[str, Scheme]:
    schemes: Dict[str, Scheme] = {}
    current = None   # [name, target, vars, maps, line no, line]

    def close() -> None:
        if current is None:
            return
        name, target, names, maps, line_no, line = current
        try:
            schemes[name] = Scheme(target, tuple(names), tuple(maps))
        except InputError as exc:
            raise FormatError(f"scheme {name} is invalid: {exc}", line_no, line) from None

    for line_no, line, tokens in _lines(text):
        line = " ".join(tokens)
        if tokens[0] == "scheme":
            match = _SCHEME_HEADER.fullmatch(line)
            if not match:
                raise FormatError("expected 'scheme <name> target=<m> vars=<v1,...>'", line_no, line)
            close()
            name = _name(match.group(1), line_no, line)
            if name in schemes or (current is not None and current[0] == name):
                raise FormatError(f"duplicate scheme name {name!r}", line_no, line)
            target = _int(match.group(2), "target", line_no, line)
            names = [_name(v, line_no, line) for v in match.group(3).split(",")] if match.group(3) else []
            current = [name, target, names, [], line_no, line]
        elif tokens[0] == "map":
            if current is None:
                raise FormatError("'map' line outside a scheme block", line_no, line)
            if len(tokens) < 2:
                raise FormatError("expected 'map <n_j> <img_0> ...'", line_no, line)
            n_j = _int(tokens[1], "source arity", line_no, line)
            images = tokens[2:]
            if len(images) != n_j:
                raise FormatError(f"map declares {n_j} images but lists {len(images)}", line_no, line)
            parsed = []
            for img in images:
                if _INT.fullmatch(img):
                    parsed.append(int(img))
                elif img in current[2]:
                    parsed.append(img)
                else:
                    raise FormatError(f"image {img!r} is neither a coordinate nor a declared var",
                                      line_no, line)
            current[3].append(tuple(parsed))
        else:
            raise FormatError(f"unknown directive {tokens[0]!r}", line_no, line)
    close()
    return schemes


def format_scheme(name: str, scheme: Scheme) -> List[str]:
    lines = [f"scheme {name} target={scheme.target} vars={','.join(scheme.indeterminates)}"]
    lines.extend(f"map {len(h)} " + " ".join(str(img) for img in h) for h in scheme.maps)
    return lines


def emit_schemes(named: Iterable[Tuple[str, Scheme]]) -> str:
    lines: List[str] = []
    for name, scheme in named:
        lines.extend(format_scheme(name, scheme))
    return "\n".join(lines) + "\n"
