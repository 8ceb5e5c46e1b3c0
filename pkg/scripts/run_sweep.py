#!/usr/bin/env python3
"""Seeded random-graph sweep: for each (n, p) cell, sample G(n, p) with
shared-randomness coupling and report the largest even-cycle-free subgraph
found (exact where the solver budget allows, greedy otherwise), the active
regime, and the fitted constant against the regime bound.

Example:
    python3 scripts/run_sweep.py --ell 2 --n 10,20,40 --p 0.1,0.3,0.6 \
        --trials 3 --seed 7 --out sweep.tsv
"""

import sys

from cyclecontainers.cli import main

if __name__ == "__main__":
    sys.argv = [sys.argv[0], "sweep", *sys.argv[1:]]
    main()
