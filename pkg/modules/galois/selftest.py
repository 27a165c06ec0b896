"""
Acceptance suite behind ``galois_tool.py selftest``.

Each check returns ``(passed, detail)``; ``run_acceptance`` times them and collects the rows in a
pandas DataFrame for the report. ``quick`` skips the long separating-system case and shrinks the
randomized and exhaustive suites.
"""
from __future__ import annotations

import itertools
import logging
import time
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from . import constants as C
from .caps import Caps, resolve
from .closure import contains, generate, separating_system
from .domain_core import FiniteDomain, Operation, enumerate_operations, projections
from .formats import (
    emit_ops,
    emit_relations,
    emit_schemes,
    emit_systems,
    parse_ops,
    parse_relations,
    parse_schemes,
    parse_systems,
)
from .linear_terms import linear_term_ops, mu
from .minors import (
    Scheme,
    add_dummy_args,
    conjunctive_equality,
    equality_chain_scheme,
    identify_args,
    tight_minor,
)
from .multisets import enumerate_bounded
from .preservation import (
    Relation,
    all_preserve,
    characterized_ops,
    preserves_relation,
    preserves_system,
    preserves_via_quotients,
)
from .systems import (
    arity_floor_system,
    breadth_restrict,
    contains_trivial_breadth,
    empty_system,
    enumerate_systems,
    equality_system,
    from_relation,
    quotient,
    random_system,
    trivial,
    union,
)

logger = logging.getLogger(__name__)

BOOL = FiniteDomain(2)
AND = Operation.from_values(BOOL, 2, [0, 0, 0, 1])

Check = Callable[[Caps, bool], Tuple[bool, str]]


def small_ops(domain: FiniteDomain = BOOL, max_arity: int = 2) -> List[Operation]:
    return [f for n in range(1, max_arity + 1) for f in enumerate_operations(domain, n)]


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------
def check_mu_separation(caps: Caps, quick: bool):
    mu3, mu4 = mu(3, BOOL), mu(4, BOOL)
    without = generate({"mu3": mu3}, 4, BOOL, caps=caps)
    both = generate({"mu3": mu3, "mu4": mu4}, 4, BOOL, caps=caps)
    ok = not contains(without, mu4) and contains(both, mu3) and contains(both, mu4)
    return ok, f"|<mu3>|={len(without)}, |<mu3,mu4>|={len(both)}"


def check_arity_floor(caps: Caps, quick: bool):
    found = characterized_ops([arity_floor_system(2, BOOL)], 3, BOOL, caps)
    counts = [sum(1 for f in found if f.arity == n) for n in (1, 2, 3)]
    return counts == [0, 16, 256], f"per-arity counts {counts}"


def check_relation_systems(caps: Caps, quick: bool):
    relations = [
        Relation.from_tuples(BOOL, 2, [(0, 0), (0, 1), (1, 1)]),
        Relation.from_tuples(BOOL, 2, [(0, 1), (1, 0)]),
        Relation.from_tuples(BOOL, 2, [(1, 1)]),
    ]
    mismatches = 0
    for r in relations:
        system = from_relation(r, 3, caps)
        for f in small_ops():
            if preserves_relation(f, r, caps) != preserves_system(f, system):
                mismatches += 1
    return mismatches == 0, f"{mismatches} mismatches"


def check_linear_terms(caps: Caps, quick: bool):
    mu3 = mu(3, BOOL)
    fragment = generate({"mu3": mu3}, 3, BOOL, caps=caps)
    details = []
    ok = True
    for n in (1, 2, 3):
        at4 = linear_term_ops({"mu3": mu3}, n, 4, BOOL, caps)
        at5 = linear_term_ops({"mu3": mu3}, n, 5, BOOL, caps)
        ok &= at4 == fragment.members_of_arity(n) and at5 == at4
        details.append(f"n={n}:{len(at4)}")
    return ok, ", ".join(details)


def check_separating_systems(caps: Caps, quick: bool):
    projections_only = generate({}, 3, BOOL, caps=caps)
    first = separating_system(projections_only, AND, caps=caps)
    detail = f"AND: m={first.arity}, |ante|={len(first.ante)}"
    if quick:
        return True, detail + " (mu4 case skipped)"
    fragment = generate({"mu3": mu(3, BOOL)}, 4, BOOL, caps=caps)
    second = separating_system(fragment, mu(4, BOOL), caps=caps)
    return True, detail + f"; mu4: m={second.arity}, |ante|={len(second.ante)}"


def random_scheme(rng: np.random.Generator, target: int, arities: List[int], n_vars: int) -> Scheme:
    names = tuple(f"v{i}" for i in range(n_vars))
    pool = list(range(target)) + list(names)
    maps = tuple(tuple(pool[int(rng.integers(len(pool)))] for _ in range(n)) for n in arities)
    return Scheme(target, names, maps)


def check_minor_preservation(caps: Caps, quick: bool):
    rng = np.random.default_rng(C.SELFTEST_SEED)
    ops = small_ops()
    instances = C.MINOR_SUITE_INSTANCES // 5 if quick else C.MINOR_SUITE_INSTANCES
    violations = 0
    for _ in range(instances):
        target = int(rng.integers(1, 3))
        breadth = int(rng.integers(0, 4))
        arities = [int(rng.integers(1, 3)) for _ in range(int(rng.integers(1, 3)))]
        scheme = random_scheme(rng, target, arities, int(rng.integers(0, 2)))
        family = [random_system(n, breadth, BOOL, rng, caps=caps) for n in arities]
        minor = tight_minor(family, scheme, breadth, caps)
        preserving = [f for f in ops if all(preserves_system(f, s) for s in family)]
        if not all_preserve(preserving, minor):
            violations += sum(1 for f in preserving if not preserves_system(f, minor))
    return violations == 0, f"{instances} instances, {violations} violations"


def check_system_lemmas(caps: Caps, quick: bool):
    ops = small_ops()
    max_breadth = 1 if quick else 2
    violations = 0
    checked = 0
    unions = 0
    for breadth in range(max_breadth + 1):
        systems = list(enumerate_systems(1, breadth, BOOL, caps))
        divisors = list(enumerate_bounded(1, range(2), breadth + 1))
        verdicts = {}
        for system in systems:
            for f in ops:
                keep = preserves_system(f, system)
                verdicts[(system, f)] = keep
                checked += 1
                if keep and not all(preserves_system(f, quotient(system, s)) for s in divisors):
                    violations += 1
                layered = all(preserves_system(f, breadth_restrict(system, p)) for p in range(breadth + 1))
                if layered != keep:
                    violations += 1
                for p in range(breadth + 1):
                    if contains_trivial_breadth(system, p) and preserves_via_quotients(f, system, p) != keep:
                        violations += 1
        # union is symmetric, so unordered pairs cover every case
        for a, b in itertools.combinations_with_replacement(systems, 2):
            shared = [f for f in ops if verdicts[(a, f)] and verdicts[(b, f)]]
            if not shared:
                continue
            unions += 1
            joined = union([a, b])
            violations += sum(1 for f in shared if not preserves_system(f, joined))
    return violations == 0, f"{checked} (system, op) pairs, {unions} unions, {violations} violations"


def check_simple_minors(caps: Caps, quick: bool):
    failures = []
    for breadth in range(4):
        if identify_args(equality_system(2, breadth, BOOL, caps), 0, 1, caps) != trivial(1, breadth, BOOL, caps):
            failures.append(f"identify B={breadth}")
        for m in (1, 2, 3):
            if conjunctive_equality(m, breadth, BOOL, caps) != equality_system(m, breadth, BOOL, caps):
                failures.append(f"equality m={m} B={breadth}")
            dummy = add_dummy_args(empty_system(1, BOOL, breadth), m - 1, caps)
            if dummy != empty_system(m, BOOL, breadth):
                failures.append(f"dummy m={m} B={breadth}")
    return not failures, ", ".join(failures) or "all constructions equal"


def check_round_trips(caps: Caps, quick: bool):
    ops = [("e1", projections(1, BOOL)[0]), ("and", AND), ("mu3", mu(3, BOOL)), ("mu4", mu(4, BOOL))]
    relations = [("le", Relation.from_tuples(BOOL, 2, [(0, 0), (0, 1), (1, 1)])),
                 ("empty", Relation(BOOL, 2))]
    systems = [("omega", trivial(1, 2, BOOL, caps)), ("eq", equality_system(2, 1, BOOL, caps)),
               ("floor", arity_floor_system(3, BOOL)), ("le", from_relation(relations[0][1], 2, caps)),
               ("nothing", empty_system(2, BOOL, 1))]
    schemes = [("chain", equality_chain_scheme(3)),
               ("proj", Scheme(1, ("v",), ((0, "v"),)))]
    failures = []

    text = emit_ops(BOOL, ops)
    _, parsed = parse_ops(text)
    if list(parsed.items()) != ops or emit_ops(BOOL, parsed.items()) != text:
        failures.append("ops")
    text = emit_relations(BOOL, relations)
    _, parsed = parse_relations(text)
    if list(parsed.items()) != relations or emit_relations(BOOL, parsed.items()) != text:
        failures.append("rel")
    text = emit_systems(BOOL, systems)
    _, parsed = parse_systems(text)
    if list(parsed.items()) != systems or emit_systems(BOOL, parsed.items()) != text:
        failures.append("system")
    text = emit_schemes(schemes)
    parsed = parse_schemes(text)
    if list(parsed.items()) != schemes or emit_schemes(parsed.items()) != text:
        failures.append("scheme")
    return not failures, ("failed: " + ", ".join(failures)) if failures else "4 formats"


CRITERIA: List[Tuple[int, str, Check]] = [
    (1, "mu-separation", check_mu_separation),
    (2, "arity floor characterization", check_arity_floor),
    (3, "relation systems agree with relations", check_relation_systems),
    (4, "linear terms equal the generated fragment", check_linear_terms),
    (5, "separating systems", check_separating_systems),
    (6, "minor preservation", check_minor_preservation),
    (7, "quotient/union/breadth/dividend lemmas", check_system_lemmas),
    (8, "simple-minor constructions", check_simple_minors),
    (9, "format round trips", check_round_trips),
]


def run_acceptance(quick: bool = False, caps: Optional[Caps] = None) -> pd.DataFrame:
    caps = resolve(caps)
    rows = []
    for number, title, check in CRITERIA:
        start = time.perf_counter()
        try:
            passed, detail = check(caps, quick)
        except Exception as exc:  # a crash is a failed criterion, reported in the table
            logger.exception("criterion %d crashed", number)
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append({"criterion": number, "check": title, "passed": bool(passed),
                     "seconds": round(time.perf_counter() - start, 2), "detail": detail})
        logger.info("criterion %d %s: %s", number, "passed" if passed else "FAILED", detail)
    return pd.DataFrame(rows, columns=["criterion", "check", "passed", "seconds", "detail"])
