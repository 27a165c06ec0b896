"""
The workspace a CLI run operates on: one domain, the named objects loaded from files, and the
cap set. Every loaded object must live on the workspace domain; names are unique per kind.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from .caps import Caps, parse_cap_assignments, resolve
from .domain_core import FiniteDomain, Operation
from .errors import InputError
from .formats import parse_ops, parse_relations, parse_schemes, parse_systems
from .minors import Scheme
from .preservation import Relation
from .systems import System

logger = logging.getLogger(__name__)

__all__ = ["Caps", "Workspace", "read_text"]


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


@dataclass
class Workspace:
    domain: Optional[FiniteDomain] = None
    caps: Caps = field(default_factory=Caps)
    operations: Dict[str, Operation] = field(default_factory=dict)
    relations: Dict[str, Relation] = field(default_factory=dict)
    systems: Dict[str, System] = field(default_factory=dict)
    schemes: Dict[str, Scheme] = field(default_factory=dict)

    @classmethod
    def with_caps(cls, assignments=None, domain: Optional[FiniteDomain] = None) -> "Workspace":
        """``assignments`` are ``key=value`` strings as given to ``--caps``."""
        caps = resolve(None).with_overrides(parse_cap_assignments(assignments))
        return cls(domain=domain, caps=caps)

    def _adopt_domain(self, domain: FiniteDomain, source) -> None:
        if self.domain is None:
            self.domain = domain
        elif self.domain != domain:
            raise InputError(f"{source} declares k={domain.size} but the workspace uses k={self.domain.size}")

    def require_domain(self) -> FiniteDomain:
        if self.domain is None:
            raise InputError("no domain: load an ops file or pass --domain")
        return self.domain

    @staticmethod
    def _merge(target: Dict, loaded: Dict, kind: str, source) -> None:
        for name, obj in loaded.items():
            if name in target:
                raise InputError(f"duplicate {kind} name {name!r} (from {source})")
            target[name] = obj

    def load_ops(self, path) -> Dict[str, Operation]:
        domain, ops = parse_ops(read_text(path))
        self._adopt_domain(domain, path)
        self._merge(self.operations, ops, "op", path)
        logger.info("loaded %d operations from %s", len(ops), path)
        return ops

    def load_relations(self, path) -> Dict[str, Relation]:
        domain, relations = parse_relations(read_text(path), self.domain)
        self._adopt_domain(domain, path)
        self._merge(self.relations, relations, "rel", path)
        return relations

    def load_systems(self, path, check_valid: bool = True) -> Dict[str, System]:
        domain, systems = parse_systems(read_text(path), self.domain, check_valid)
        self._adopt_domain(domain, path)
        self._merge(self.systems, systems, "system", path)
        logger.info("loaded %d systems from %s", len(systems), path)
        return systems

    def load_schemes(self, path) -> Dict[str, Scheme]:
        schemes = parse_schemes(read_text(path))
        self._merge(self.schemes, schemes, "scheme", path)
        return schemes

    def op(self, name: str) -> Operation:
        try:
            return self.operations[name]
        except KeyError:
            raise InputError(f"unknown op {name!r}") from None

    def relation(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            raise InputError(f"unknown rel {name!r}") from None

    def system(self, name: str) -> System:
        try:
            return self.systems[name]
        except KeyError:
            raise InputError(f"unknown system {name!r}") from None

    def only_system(self, loaded: Dict[str, System], path) -> System:
        if len(loaded) != 1:
            raise InputError(f"{path} must hold exactly one system, found {len(loaded)}")
        return next(iter(loaded.values()))
