"""
Galois theory of iterative algebras over small finite domains.

Exact, brute-force-checkable computations for sets of operations closed under permutation of
variables, cylindrification and composition (the Mal'cev operations ζ, τ, ∇, ∗; Δ optional),
and for their dual objects, systems of pointed multisets: preservation, conjunctive minors,
quotients, the constructive separating system, and linear-term closure with the μ_n family.

Module map:
  * ``constants.py``    : every cap, default and exit code, named.
  * ``caps.py``         : the ``Caps`` set algorithms read; ``--caps key=value`` overrides.
  * ``errors.py``       : exception hierarchy; the CLI maps it onto exit codes.
  * ``domain_core.py``  : finite domains, tuple ranks, dense operation tables (numpy), the
                          Mal'cev operations, matrices and row-wise application.
  * ``multisets.py``    : multisets, pointed multisets, submultiset / partition /
                          arrangement enumeration (sympy's multiset routines).
  * ``systems.py``      : breadth-bounded systems, named constructors, quotient, breadth
                          restriction, union, antecedent restriction, consequent extension.
  * ``minors.py``       : schemes, Skolem witness search, tight / restrictive / extensive
                          conjunctive minors and the simple-minor helpers.
  * ``preservation.py`` : f ▷ R, f ▷ (Φ, Φ′), characterization queries, dividend check.
  * ``closure.py``      : arity-bounded fixpoint ⟨F⟩, membership, separating systems.
  * ``linear_terms.py`` : terms, linearity, evaluation, linear term operations, μ_n.
  * ``formats.py``      : parse/emit of the ops, rel, system and scheme text formats.
  * ``workspace.py``    : the named objects of one CLI run on one domain.
  * ``selftest.py``     : the acceptance suite (pandas report).
  * ``cli.py``          : argparse subcommands and exit codes.

``galois_tool.py`` (repo root) is the batch entrypoint.
"""
