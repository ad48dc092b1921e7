"""RP^2, its sphere double cover, the Cartan-Leray spectral sequence and
the Borel construction.

Run: python3 demos/rp2_double_cover.py
"""

from phk.cartan_leray import cartan_leray
from phk.classifying import borel_construction, principal_bundle
from phk.cohomology import LocalSystem, cohomology
from phk.corpus import rp2
from phk.edgepath import edge_path_presentation
from phk.presentations import enumerate_finite_quotients

X = rp2()
print("RP^2 simplices per degree:", X.counts(), "euler:", X.euler())
epi = [e for e in enumerate_finite_quotients(edge_path_presentation(X), 6) if e.order == 2][0]
L = LocalSystem.from_epi(epi, [2])
B = principal_bundle(X, L.cocycle(X))
B.validate()
print("double cover:", B.E.counts(), "euler:", B.E.euler())
print("H^*(cover; Z/2):", [str(cohomology(B.E, [2], n)) for n in range(3)])

ss = cartan_leray(X, B, L)
print("\nE_2 = H^p(Z/2; H^q(S^2; Z/2)):")
for q in range(ss.cap, -1, -1):
    print(f"  q={q}: " + "  ".join(f"{str(ss.e2().get((p, q), '')):>4}" for p in range(ss.cap + 1)))
print("E_inf diagonal orders:", ss.diagonal_orders())
print("H^*(RP^2; Z/2) orders:", [cohomology(X, [2], n).order for n in range(ss.cap + 1)])

Y, f = borel_construction(B)
print("\nBorel construction simplices:", Y.counts())
print("H^*(Borel; Z/2):", [str(cohomology(Y, [2], n)) for n in range(3)])
