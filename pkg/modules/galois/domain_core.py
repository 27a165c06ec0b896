"""
Finite domains, ranked tuples, dense operation tables and the Mal'cev operations.

An n-ary operation on A = {0, ..., k-1} is stored as its value table in rank order, where
rank(t) = sum t[i] * k**(m-1-i) (first coordinate most significant). That order is exactly the
C-order flattening of a ``(k,)*n`` numpy array, so every Mal'cev operation is an array view:

    zeta   f(x2, ..., xn, x1)         np.moveaxis(a, -1, 0)
    tau    f(x2, x1, x3, ..., xn)     np.swapaxes(a, 0, 1)
    delta  f(x1, x1, x2, ..., xn-1)   np.diagonal(a, 0, 0, 1) with the diagonal moved first
    nabla  f(x2, ..., xn+1)           np.broadcast_to(a, (k,) + a.shape)
    star   f(g(x1..xm), xm+1, ...)    a_f[a_g]

Pure functions over immutable values; nothing here does I/O.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from . import constants as C
from .caps import Caps, resolve
from .errors import InputError

Point = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Finite domains and tuple ranking
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class FiniteDomain:
    """A = {0, ..., size-1}."""
    size: int

    def __post_init__(self):
        if not isinstance(self.size, (int, np.integer)) or self.size < 1:
            raise InputError(f"domain size must be an integer >= 1, got {self.size!r}")
        if self.size > C.MAX_DOMAIN_SIZE:
            raise InputError(f"domain size {self.size} exceeds {C.MAX_DOMAIN_SIZE}")

    @property
    def elements(self) -> range:
        return range(self.size)

    def check_arity(self, n: int, caps: Optional[Caps] = None) -> None:
        limit = resolve(caps).max_arity(self.size)
        if n < 1:
            raise InputError(f"arity must be >= 1, got {n}")
        if n > limit:
            raise InputError(f"arity {n} exceeds the table cap {limit} for k={self.size}")


def rank(t: Sequence[int], domain: FiniteDomain) -> int:
    k = domain.size
    r = 0
    for a in t:
        if not 0 <= a < k:
            raise InputError(f"tuple entry {a} out of range for k={k}: {tuple(t)}")
        r = r * k + int(a)
    return r


def unrank(r: int, m: int, domain: FiniteDomain) -> Point:
    return _unrank(int(r), int(m), domain.size)


@lru_cache(maxsize=1 << 16)
def _unrank(r: int, m: int, k: int) -> Point:
    if m < 0 or not 0 <= r < k ** m:
        raise InputError(f"rank {r} out of range for m={m}, k={k}")
    digits = [0] * m
    for i in range(m - 1, -1, -1):
        r, digits[i] = divmod(r, k)
    return tuple(digits)


def all_tuples(m: int, domain: FiniteDomain) -> Iterator[Point]:
    """A^m in rank order."""
    return itertools.product(domain.elements, repeat=m)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Operation:
    """A finitary operation, n >= 1, as a dense value table in rank order.

    Equality is table equality over the same domain and arity; an operation and its
    cylindrification are different values.
    """
    domain: FiniteDomain
    arity: int
    table: bytes

    def __post_init__(self):
        if self.arity < 1:
            raise InputError(f"nullary operations are not supported (arity {self.arity})")
        expected = self.domain.size ** self.arity
        if len(self.table) != expected:
            raise InputError(f"table of an {self.arity}-ary operation on k={self.domain.size} "
                             f"needs {expected} entries, got {len(self.table)}")
        if self.table and max(self.table) >= self.domain.size:
            raise InputError(f"table entry {max(self.table)} out of range for k={self.domain.size}")

    # -- constructors --------------------------------------------------------
    @classmethod
    def from_values(cls, domain: FiniteDomain, arity: int, values: Iterable[int]) -> "Operation":
        values = [int(v) for v in values]
        if any(v < 0 for v in values):
            raise InputError("table entries must be non-negative")
        if any(v >= domain.size for v in values):
            raise InputError(f"table entry out of range for k={domain.size}")
        return cls(domain, arity, bytes(values))

    @classmethod
    def from_array(cls, domain: FiniteDomain, array: np.ndarray) -> "Operation":
        array = np.ascontiguousarray(array, dtype=np.uint8)
        return cls(domain, array.ndim, array.tobytes())

    @classmethod
    def from_function(cls, domain: FiniteDomain, arity: int,
                      fn: Callable[..., int]) -> "Operation":
        return cls.from_values(domain, arity, (fn(*t) for t in all_tuples(arity, domain)))

    # -- views ---------------------------------------------------------------
    @cached_property
    def array(self) -> np.ndarray:
        """Read-only ``(k,)*n`` uint8 view of the table."""
        a = np.frombuffer(self.table, dtype=np.uint8).reshape((self.domain.size,) * self.arity)
        a.flags.writeable = False
        return a

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise InputError(f"{self.arity}-ary operation called with {len(args)} arguments")
        return self.table[rank(args, self.domain)]

    def table_string(self) -> str:
        return "".join(str(v) for v in self.table)

    def sort_key(self) -> Tuple[int, bytes]:
        """(arity, table rank): the canonical listing order."""
        return (self.arity, self.table)

    def __repr__(self) -> str:
        body = self.table_string() if self.domain.size <= 10 else self.table.hex()
        return f"Operation(k={self.domain.size}, n={self.arity}, {body})"


def enumerate_operations(domain: FiniteDomain, n: int,
                         caps: Optional[Caps] = None) -> Iterator[Operation]:
    """All k**(k**n) n-ary operations in ascending table rank."""
    caps = resolve(caps)
    domain.check_arity(n, caps)
    caps.require("characterize_tables", domain.size ** (domain.size ** n))
    for values in itertools.product(domain.elements, repeat=domain.size ** n):
        yield Operation(domain, n, bytes(values))


def projection(n: int, i: int, domain: FiniteDomain) -> Operation:
    """e_i^{n,A}, 1 <= i <= n."""
    if not 1 <= i <= n:
        raise InputError(f"projection index {i} out of range 1..{n}")
    grid = np.indices((domain.size,) * n, dtype=np.uint8)
    return Operation.from_array(domain, grid[i - 1])


def projections(n: int, domain: FiniteDomain) -> Tuple[Operation, ...]:
    return tuple(projection(n, i, domain) for i in range(1, n + 1))


# ---------------------------------------------------------------------------
# Mal'cev operations. For n = 1, zeta, tau and delta return f unchanged.
# ---------------------------------------------------------------------------
def zeta(f: Operation) -> Operation:
    if f.arity == 1:
        return f
    return Operation.from_array(f.domain, np.moveaxis(f.array, -1, 0))


def tau(f: Operation) -> Operation:
    if f.arity == 1:
        return f
    return Operation.from_array(f.domain, np.swapaxes(f.array, 0, 1))


def delta(f: Operation) -> Operation:
    if f.arity == 1:
        return f
    diagonal = np.diagonal(f.array, axis1=0, axis2=1)  # diagonal axis goes last
    return Operation.from_array(f.domain, np.moveaxis(diagonal, -1, 0))


def nabla(f: Operation) -> Operation:
    k = f.domain.size
    return Operation.from_array(f.domain, np.broadcast_to(f.array, (k,) + f.array.shape))


def star(f: Operation, g: Operation) -> Operation:
    """(f * g)(x1, ..., x_{m+n-1}) = f(g(x1, ..., xm), x_{m+1}, ..., x_{m+n-1})."""
    if f.domain != g.domain:
        raise InputError(f"cannot compose across domains k={f.domain.size} and k={g.domain.size}")
    return Operation.from_array(f.domain, f.array[g.array])


# ---------------------------------------------------------------------------
# Matrices and row-wise application
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Matrix:
    """An m x n matrix over A kept as its ordered columns (each an m-tuple)."""
    domain: FiniteDomain
    rows: int
    columns: Tuple[Point, ...] = ()

    def __post_init__(self):
        if self.rows < 1:
            raise InputError(f"a matrix needs at least one row, got {self.rows}")
        columns = tuple(tuple(int(a) for a in c) for c in self.columns)
        object.__setattr__(self, "columns", columns)
        for c in columns:
            if len(c) != self.rows:
                raise InputError(f"column {c} has {len(c)} entries, expected {self.rows}")
            if any(not 0 <= a < self.domain.size for a in c):
                raise InputError(f"column {c} has an entry out of range for k={self.domain.size}")

    @property
    def width(self) -> int:
        return len(self.columns)

    def column_ranks(self) -> Tuple[int, ...]:
        return tuple(rank(c, self.domain) for c in self.columns)

    def row(self, i: int) -> Point:
        return tuple(c[i] for c in self.columns)


def all_rows_matrix(n: int, domain: FiniteDomain) -> Matrix:
    """The k**n x n matrix whose rows are all of A^n in rank order."""
    rows = list(all_tuples(n, domain))
    return Matrix(domain, len(rows), tuple(tuple(r[j] for r in rows) for j in range(n)))


def apply_rows(f: Operation, matrix: Matrix) -> Point:
    """fM: the m-tuple of f applied to each row of M."""
    if matrix.domain != f.domain:
        raise InputError("operation and matrix live on different domains")
    if matrix.width != f.arity:
        raise InputError(f"{f.arity}-ary operation applied to a matrix with {matrix.width} columns")
    values = f.array[tuple(np.array(matrix.columns, dtype=np.intp))]
    return tuple(int(v) for v in values)


def apply_to_points(f: Operation, points: Sequence[int], m: int) -> int:
    """Rank of fM where M's columns are the m-tuples ranked ``points``."""
    if len(points) != f.arity:
        raise InputError(f"{f.arity}-ary operation applied to {len(points)} columns")
    columns = np.array([_unrank(int(p), m, f.domain.size) for p in points], dtype=np.intp)
    values = f.array[tuple(columns)]
    return rank(values.tolist(), f.domain)


def hconcat(parts: Sequence[Matrix]) -> Matrix:
    """[M1 | M2 | ... | Mp]."""
    if not parts:
        raise InputError("hconcat needs at least one matrix")
    first = parts[0]
    for part in parts[1:]:
        if part.rows != first.rows or part.domain != first.domain:
            raise InputError(f"cannot concatenate a {part.rows}-row matrix with a "
                             f"{first.rows}-row matrix")
    return Matrix(first.domain, first.rows, tuple(c for part in parts for c in part.columns))
