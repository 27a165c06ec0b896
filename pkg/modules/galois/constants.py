"""
Resource caps and defaults for the pointed-multiset Galois toolkit.

Named here, never inlined, so a cap change is a one-line diff and the tests can assert the
documented defaults are followed literally. ``caps.Caps`` is built from these values and is
the only thing the algorithms read; ``--caps key=value`` overrides a field per run.
"""

# ---------------------------------------------------------------------------
# Finite domains and dense operation tables
# ---------------------------------------------------------------------------
MAX_DOMAIN_SIZE = 256         # table entries are stored one per byte
MAX_DIGIT_DOMAIN_SIZE = 10    # the text formats spell one base-k digit per character

# Max table arity per domain size. k=2 -> 64 entries, k=3 -> 81 entries.
MAX_ARITY_K2 = 6
MAX_ARITY_K3 = 4
# Any other k: the largest n with k**n <= this many table entries.
MAX_TABLE_ENTRIES = 256

# ---------------------------------------------------------------------------
# Enumeration budgets
# ---------------------------------------------------------------------------
SKOLEM_BUDGET = 256                 # |A|**|V| per column in minor witness search
SEPARATION_CANDIDATE_CAP = 10 ** 7  # (X, Pi, D) triples in the separating-system construction
SEPARATION_ROW_CAP = 256            # k**n rows of the all-rows witness matrix
FRAGMENT_MEMBER_CAP = 200_000       # multisets of cardinality <= B over A^m (trivial, minors)
CHARACTERIZE_TABLE_CAP = 1 << 17    # k**(k**n) candidate tables per arity
CLOSURE_MEMBER_CAP = 100_000        # members of a generated closed fragment
RELATION_MATRIX_CAP = 10 ** 6       # |R|**n column choices in preserves_relation
TERM_ENUMERATION_CAP = 10 ** 6      # linear terms (shape x variable labelling) evaluated
TERM_COMPLEXITY_LIMIT = 12          # saturate() gives up beyond this complexity

# ---------------------------------------------------------------------------
# Exit codes (cli)
# ---------------------------------------------------------------------------
EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_CAP = 3

# ---------------------------------------------------------------------------
# Self-test
# ---------------------------------------------------------------------------
SELFTEST_SEED = 20240229
MINOR_SUITE_INSTANCES = 100
