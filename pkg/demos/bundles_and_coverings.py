"""Nonabelian H^1, principal bundles and coverings on small spaces.

Run: python3 demos/bundles_and_coverings.py
"""

from phk.classifying import classify_bundles
from phk.cohomology import h1_nonabelian
from phk.corpus import corpus_spaces
from phk.groups import group_by_name
from phk.homotopy import enumerate_coverings

S = corpus_spaces()
G = group_by_name("S3")
for name in ("circle", "wedge2", "torus", "sphere"):
    a = h1_nonabelian(S[name], G, "cocycles")
    b = h1_nonabelian(S[name], G, "presentation")
    print(f"H^1({name}; S3): {len(a)} gauge classes, {len(b)} homomorphism classes")

C = classify_bundles(S["torus"], group_by_name("C2"))
print(f"\nprincipal C2-bundles over the torus: {len(C)} (from {C.n_cocycles} cocycles)")

for name in ("circle", "wedge2", "torus"):
    covs = enumerate_coverings(S[name], 3)
    by_degree = [sum(1 for c in covs if c.degree == d) for d in (1, 2, 3)]
    print(f"connected coverings of {name} of degree 1, 2, 3: {by_degree}")
