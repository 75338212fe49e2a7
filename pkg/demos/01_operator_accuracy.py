#!/usr/bin/env python3
"""Walk through the mixed cell-average/nodal derivative operators.

Shows the catalog, verifies each operator's design order from its moment
conditions, and demonstrates the grid-refinement behaviour on smooth data.
"""

import numpy as np

from fdfv import ddo


def exact_window(fn, antideriv, h, x_face, reach=3):
    averages, nodals = {}, {}
    for l in range(-reach, reach + 1):
        nodals[l] = fn(x_face + l * h)
        lo, hi = x_face + (l - 1) * h, x_face + l * h
        averages[l] = (antideriv(hi) - antideriv(lo)) / h
    return averages, nodals


print("The twelve catalog operators and their analysis:")
print(f"{'name':14s} {'order':>5s} {'c_p':>10s} {'b0':>5s} {'s_beta':>6s}")
for name in ddo.CATALOG_NAMES:
    r = ddo.analyze(ddo.catalog(name))
    print(f"{name:14s} {r.designed_order:5d} {r.leading_error:10.5f} "
          f"{r.moments_b[0]:5.0f} {r.s_beta:6d}")

print("\nRefinement of the derivative of sin(x) at x = 0.3:")
print(f"{'name':14s} " + " ".join(f"h={h:<8g}" for h in (0.2, 0.1, 0.05)) + " slope")
for name in ("1st-backward", "2nd-backward", "3rd-B-biased", "4th-B-biased"):
    s = ddo.catalog(name)
    errs = []
    for h in (0.2, 0.1, 0.05):
        avg, nod = exact_window(np.sin, lambda x: -np.cos(x), h, 0.3)
        errs.append(abs(ddo.apply(s, avg, nod, h) - np.cos(0.3)))
    slope = np.log2(errs[-2] / errs[-1])
    print(f"{name:14s} " + " ".join(f"{e:10.2e}" for e in errs) + f"  {slope:.2f}")

print("\nEach operator converges at its design order; the time-marched")
print("scheme built on it gains one more order (see demo 03).")
