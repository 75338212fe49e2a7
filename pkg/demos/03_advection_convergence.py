#!/usr/bin/env python3
"""Superior accuracy on 1D advection: measured order = design order + 1.

Runs the periodic and inflow/outflow benchmark problems over a mesh ladder
and prints the error/rate tables for all five pairings.
"""

import math

from fdfv import harness
from fdfv.problems import PAIRINGS, get_problem

for pname in ("advection-periodic", "advection-dirichlet"):
    prob = get_problem(pname)
    print(f"\n=== {pname} (L1 errors of the nodal unknowns) ===")
    header = f"{'scheme':18s}" + "".join(f"{n:>11d}" for n in (20, 40, 80, 160))
    print(header + "   rate")
    for key, (_, _, order) in PAIRINGS.items():
        errs = []
        for n in (20, 40, 80, 160):
            errs.append(harness.study_errors(prob, key, n)["nodal_u"])
        rate = math.log2(errs[-2] / errs[-1])
        row = f"{key:18s}" + "".join(f"{e:11.2e}" for e in errs)
        print(row + f"   {rate:.2f} (design order {order - 1} + 1)")
