"""
Terms over a finite signature, linearity, evaluation, linear term operations and the μ_n family.

Linear terms are enumerated by complexity: first the term shapes (trees with anonymous leaves),
then every injective labelling of the leaves by x_1..x_n. A shape with more leaves than n has no
linear labelling and is pruned. Evaluation is vectorised: x_i is the i-th coordinate grid of
``np.indices`` and a symbol node indexes its operation's table with its children's grids.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np

from .caps import Caps, resolve
from .domain_core import FiniteDomain, Operation
from .errors import InputError, ResourceCapError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise InputError(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Apply:
    symbol: str
    args: Tuple["Term", ...]


Term = Union[Var, Apply]


@dataclass(frozen=True)
class Signature:
    """Operation symbols with their arities, in declaration order."""
    symbols: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple((str(s), int(a)) for s, a in self.symbols))
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate symbol in signature {names}")
        for s, a in self.symbols:
            if a < 1:
                raise InputError(f"symbol {s} needs arity >= 1, got {a}")

    @classmethod
    def from_assignment(cls, assignment: Mapping[str, Operation]) -> "Signature":
        return cls(tuple((name, f.arity) for name, f in assignment.items()))

    def arity_of(self, symbol: str) -> int:
        for s, a in self.symbols:
            if s == symbol:
                return a
        raise InputError(f"unknown operation symbol {symbol!r}")


# ---------------------------------------------------------------------------
# Term predicates
# ---------------------------------------------------------------------------
def variables(t: Term) -> List[int]:
    """Variable indices in left-to-right order, with repetitions."""
    if isinstance(t, Var):
        return [t.index]
    return [i for arg in t.args for i in variables(arg)]


def is_linear(t: Term) -> bool:
    occurrences = variables(t)
    return len(occurrences) == len(set(occurrences))


def complexity(t: Term) -> int:
    if isinstance(t, Var):
        return 0
    return 1 + sum(complexity(arg) for arg in t.args)


def check_term(t: Term, signature: Signature, n: int) -> None:
    if isinstance(t, Var):
        if t.index > n:
            raise InputError(f"variable x{t.index} exceeds the term arity {n}")
        return
    arity = signature.arity_of(t.symbol)
    if len(t.args) != arity:
        raise InputError(f"{t.symbol} takes {arity} arguments, got {len(t.args)}")
    for arg in t.args:
        check_term(arg, signature, n)


def eval_term(t: Term, assignment: Mapping[str, Operation], n: int,
              domain: FiniteDomain) -> Operation:
    """t^A as an n-ary operation."""
    if n < 1:
        raise InputError(f"term arity must be >= 1, got {n}")
    signature = Signature.from_assignment(assignment)
    check_term(t, signature, n)
    for name, f in assignment.items():
        if f.domain != domain:
            raise InputError(f"symbol {name} is interpreted on k={f.domain.size}, expected k={domain.size}")
    grid = np.indices((domain.size,) * n, dtype=np.intp)
    return Operation.from_array(domain, _eval_array(t, assignment, grid))


def _eval_array(t: Term, assignment: Mapping[str, Operation], grid: np.ndarray) -> np.ndarray:
    if isinstance(t, Var):
        return grid[t.index - 1]
    children = tuple(_eval_array(arg, assignment, grid) for arg in t.args)
    return assignment[t.symbol].array[children]


# ---------------------------------------------------------------------------
# Text form: f(x1,g(x2),x3)
# ---------------------------------------------------------------------------
_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),]))")
_VAR = re.compile(r"x([1-9][0-9]*)")


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    return f"{t.symbol}({','.join(format_term(arg) for arg in t.args)})"


def parse_term(text: str) -> Term:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise InputError(f"unexpected character at position {pos} in {text!r}")
        tokens.append(match.group("name") or match.group("punct"))
        pos = match.end()
    term, used = _parse_tokens(tokens, 0, text)
    if used != len(tokens):
        raise InputError(f"trailing input after term in {text!r}")
    return term


def _parse_tokens(tokens: List[str], i: int, text: str) -> Tuple[Term, int]:
    if i >= len(tokens) or tokens[i] in "(),":
        raise InputError(f"expected a variable or symbol in {text!r}")
    name = tokens[i]
    if i + 1 < len(tokens) and tokens[i + 1] == "(":
        args = []
        i += 2
        while True:
            arg, i = _parse_tokens(tokens, i, text)
            args.append(arg)
            if i < len(tokens) and tokens[i] == ",":
                i += 1
                continue
            if i < len(tokens) and tokens[i] == ")":
                return Apply(name, tuple(args)), i + 1
            raise InputError(f"unbalanced parentheses in {text!r}")
    match = _VAR.fullmatch(name)
    if not match:
        raise InputError(f"{name!r} is neither a variable x<i> nor an applied symbol")
    return Var(int(match.group(1))), i + 1


# ---------------------------------------------------------------------------
# Linear term enumeration
# ---------------------------------------------------------------------------
_LEAF = Var(1)


@lru_cache(maxsize=None)
def _shapes(signature: Signature, c: int, max_leaves: int) -> Tuple[Tuple[Term, int], ...]:
    """Shapes of complexity c with at most ``max_leaves`` leaves, as (shape, leaf count)."""
    if max_leaves < 1:
        return ()
    if c == 0:
        return ((_LEAF, 1),)
    found = []
    for symbol, arity in signature.symbols:
        for split in _compositions(c - 1, arity):
            found.extend((Apply(symbol, children), leaves)
                         for children, leaves in _children(signature, split, max_leaves))
    return tuple(found)


def _children(signature: Signature, split: Tuple[int, ...], budget: int):
    if not split:
        yield (), 0
        return
    head, tail = split[0], split[1:]
    # leave at least one leaf for each remaining child
    for shape, leaves in _shapes(signature, head, budget - len(tail)):
        for rest, rest_leaves in _children(signature, tail, budget - leaves):
            yield (shape,) + rest, leaves + rest_leaves


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _label(shape: Term, labels: Iterator[int]) -> Term:
    if isinstance(shape, Var):
        return Var(next(labels))
    return Apply(shape.symbol, tuple(_label(arg, labels) for arg in shape.args))


def linear_terms(signature: Signature, n: int, max_complexity: int,
                 caps: Optional[Caps] = None) -> Iterator[Term]:
    """Every n-ary linear term of complexity <= C: by complexity, shape, then labelling."""
    caps = resolve(caps)
    if n < 1:
        raise InputError(f"term arity must be >= 1, got {n}")
    produced = 0
    for c in range(max_complexity + 1):
        for shape, leaves in _shapes(signature, c, n):
            for labels in itertools.permutations(range(1, n + 1), leaves):
                produced += 1
                caps.require("term_enumeration", produced)
                yield _label(shape, iter(labels))


def linear_term_witnesses(assignment: Mapping[str, Operation], n: int, max_complexity: int,
                          domain: FiniteDomain, caps: Optional[Caps] = None) -> Dict[Operation, Term]:
    """Each linear term operation mapped to the first term (in enumeration order) inducing it."""
    signature = Signature.from_assignment(assignment)
    witnesses: Dict[Operation, Term] = {}
    for t in linear_terms(signature, n, max_complexity, caps):
        f = eval_term(t, assignment, n, domain)
        witnesses.setdefault(f, t)
    logger.info("linear terms: n=%d, C=%d -> %d operations", n, max_complexity, len(witnesses))
    return witnesses


def linear_term_ops(assignment: Mapping[str, Operation], n: int, max_complexity: int,
                    domain: FiniteDomain, caps: Optional[Caps] = None) -> FrozenSet[Operation]:
    return frozenset(linear_term_witnesses(assignment, n, max_complexity, domain, caps))


def saturate(assignment: Mapping[str, Operation], n: int, domain: FiniteDomain,
             start: int = 0, caps: Optional[Caps] = None) -> Tuple[int, FrozenSet[Operation]]:
    """Smallest C >= start with ops(C + 1) == ops(C)."""
    caps = resolve(caps)
    c = start
    current = linear_term_ops(assignment, n, c, domain, caps)
    while True:
        if c + 1 > caps.term_complexity:
            raise ResourceCapError("term_complexity", c + 1, caps.term_complexity)
        following = linear_term_ops(assignment, n, c + 1, domain, caps)
        if following == current:
            return c, current
        c, current = c + 1, following


# ---------------------------------------------------------------------------
# μ_n
# ---------------------------------------------------------------------------
def mu(n: int, domain: FiniteDomain) -> Operation:
    """1 exactly on 0/1-tuples of Hamming weight 1 or n-1, 0 elsewhere."""
    if n < 3:
        raise InputError(f"mu_n needs n >= 3, got {n}")
    if domain.size < 2:
        raise InputError("mu_n needs a domain with the two elements 0 and 1")
    grid = np.indices((domain.size,) * n)
    boolean = (grid <= 1).all(axis=0)
    weight = grid.sum(axis=0)
    table = boolean & ((weight == 1) | (weight == n - 1))
    return Operation.from_array(domain, table.astype(np.uint8))
