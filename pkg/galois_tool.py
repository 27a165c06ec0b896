#!/usr/bin/env python
"""
Batch entrypoint for the Galois toolkit (modules/galois/).

Usage
-----
    python galois_tool.py mu --n 3 --domain 2 --name mu3 --out mu3.ops
    python galois_tool.py closure --ops mu3.ops --gens mu3 --max-arity 4 --list
    python galois_tool.py preserve --ops ops.txt --op and --system ex1.sys
    python galois_tool.py separate --ops ops.txt --max-arity 3 --target and --out sep.sys
    python galois_tool.py characterize --system ex1.sys --domain 2 --max-arity 3 --summary
    python galois_tool.py selftest --quick

Exit codes: 0 true/success, 1 predicate false, 2 input error, 3 resource cap
(raise a cap with ``--caps name=value`` before the subcommand).
"""
from modules.galois.cli import main

if __name__ == "__main__":
    main()
