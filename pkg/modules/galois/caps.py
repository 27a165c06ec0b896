"""
The cap set every enumerating algorithm reads (``Caps``), built from ``constants.py``.

``Caps.with_overrides`` realises the ``--caps key=value`` CLI flag. Environment variables are
never consulted: a run is fully determined by its input files and flags.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Mapping, Optional

from . import constants as C
from .errors import InputError, ResourceCapError


@dataclass(frozen=True)
class Caps:
    max_arity_k2: int = C.MAX_ARITY_K2
    max_arity_k3: int = C.MAX_ARITY_K3
    max_table_entries: int = C.MAX_TABLE_ENTRIES
    skolem_budget: int = C.SKOLEM_BUDGET
    separation_candidates: int = C.SEPARATION_CANDIDATE_CAP
    separation_rows: int = C.SEPARATION_ROW_CAP
    fragment_members: int = C.FRAGMENT_MEMBER_CAP
    characterize_tables: int = C.CHARACTERIZE_TABLE_CAP
    closure_members: int = C.CLOSURE_MEMBER_CAP
    relation_matrices: int = C.RELATION_MATRIX_CAP
    term_enumeration: int = C.TERM_ENUMERATION_CAP
    term_complexity: int = C.TERM_COMPLEXITY_LIMIT

    def max_arity(self, k: int) -> int:
        """Largest operation arity whose dense table is allowed over a k-element domain."""
        if k == 2:
            return self.max_arity_k2
        if k == 3:
            return self.max_arity_k3
        if k == 1:
            return self.max_arity_k2
        n = 1
        while k ** (n + 1) <= self.max_table_entries:
            n += 1
        return n

    def require(self, cap: str, needed: int) -> None:
        """Raise ``ResourceCapError`` if ``needed`` exceeds the cap named ``cap``."""
        limit = getattr(self, cap)
        if needed > limit:
            raise ResourceCapError(cap, needed, limit)

    def with_overrides(self, overrides: Mapping[str, str]) -> "Caps":
        known = {f.name for f in fields(self)}
        values = {}
        for key, raw in overrides.items():
            if key not in known:
                raise InputError(f"unknown cap {key!r}; known caps: {', '.join(sorted(known))}")
            try:
                value = int(str(raw).replace("_", ""))
            except ValueError:
                raise InputError(f"cap {key} needs an integer value, got {raw!r}") from None
            if value < 0:
                raise InputError(f"cap {key} must be non-negative, got {value}")
            values[key] = value
        return replace(self, **values)


def resolve(caps: Optional[Caps]) -> Caps:
    return caps if caps is not None else Caps()


def parse_cap_assignments(items) -> dict:
    """``["skolem_budget=512", ...]`` -> ``{"skolem_budget": "512"}``."""
    result = {}
    for item in items or ():
        key, sep, value = str(item).partition("=")
        if not sep or not key.strip():
            raise InputError(f"--caps expects key=value, got {item!r}")
        result[key.strip()] = value.strip()
    return result
