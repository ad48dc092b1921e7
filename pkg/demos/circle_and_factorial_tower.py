"""The circle against the tower of classifying spaces B(Z/k!).

Each level B(Z/k!) sees the circle's fundamental group only through the
quotient Z/k!.  The map S1 -> B(Z/k!) sending the edge to the generator is a
weak equivalence "up to bounds" once k! is divisible by every cyclic order
the checker probes.  With probes up to Z/4 and groups up to order 6 that
needs the level Z/120; stopping at Z/6 leaves a Z/4 witness.

Run: python3 demos/circle_and_factorial_tower.py
"""

import time

from phk.corpus import frobenius_map
from phk.homotopy import check_weak_equivalence, pi1_profinite

for depth in (3, 5):
    f = frobenius_map(depth=depth)
    orders = [len(Y.nd[1]) + 1 for Y in f.target.levels]
    t = time.time()
    v = check_weak_equivalence(f, degree_cap=2, coeff_cap=4, quotient_cap=6)
    print(f"depth {depth}, levels Z/{orders}: {v}  [{time.time() - t:.1f}s]")

top = frobenius_map(depth=5).target
A = pi1_profinite(top, N=6)
print("quotients of pi_1 at the top level:", A.names())
print("the circle has the same list:", pi1_profinite(frobenius_map().source, N=6).names())
