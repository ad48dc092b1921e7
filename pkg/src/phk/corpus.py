"""Named test spaces, towers and maps with their documented invariants.

Every entry records the invariants it is expected to have and where the
expectation comes from: ``trivial`` (by construction), ``derived``
(recomputed independently in the test suite) or ``published`` (a standard
result from the literature, also recomputed in the tests).
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import factorial

from .classifying import classifying_space, _bar_id, _bar_canon
from .groups import cyclic
from .simplicial import (FormalSimplex, SMap, SSet, SimplicialRelation, product, quotient,
                         standard_space)
from .towers import SpaceTower, TowerMap


class CorpusError(KeyError):
    pass


def from_facets(facets, D=None, labels=None):
    """Ordered simplicial complex from its facets (vertex tuples, sorted internally)."""
    simp = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            simp.update(combinations(f, k))
    top = max(len(s) for s in simp) - 1
    D = top if D is None else D
    name = (lambda s: "".join(map(str, s))) if labels is None else labels
    nd = [sorted((s for s in simp if len(s) == n + 1)) for n in range(D + 1)]
    faces = {}
    for n in range(1, len(nd)):
        for s in nd[n]:
            faces[name(s)] = tuple(FormalSimplex.nd(name(s[:i] + s[i + 1:]), n - 1)
                                   for i in range(n + 1))
    return SSet(D, [[name(s) for s in lv] for lv in nd], faces, validate=False)


RP2_FACETS = ((1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
              (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6))


def rp2(D=4):
    """Six-vertex triangulation of the projective plane."""
    return from_facets(RP2_FACETS, D)


def circle_subdivided(D=4):
    """Boundary of a triangle: 3 vertices, 3 edges in a cycle."""
    return standard_space("boundary", 2, D)


def collapse_map(D=4):
    """The map from the subdivided circle to the 1-vertex circle collapsing the tree {02, 12}."""
    X = circle_subdivided(D)
    R = SimplicialRelation.collapse(X, ["0", "1", "2", "02", "12"])
    Q, proj = quotient(X, R)
    S1 = standard_space("circle", D=D)
    if Q.nd != S1.nd or Q.faces != S1.faces:
        raise AssertionError("collapse does not produce the standard circle")
    return SMap(X, S1, proj.images)


def wedge2(D=4):
    """One vertex and two loops."""
    return SSet(D, [["*"], ["a", "b"]],
                {"a": (FormalSimplex.nd("*", 0),) * 2, "b": (FormalSimplex.nd("*", 0),) * 2})


def torus(D=4):
    S1 = standard_space("circle", D=D)
    return product(S1, S1, D)


def bzn_tower(depth=4, D=2):
    """Levels ``B(Z/k!)`` for ``k = 1..depth`` with reduction maps ``k+1 -> k``."""
    mods = [factorial(k) for k in range(1, depth + 1)]
    levels = [classifying_space(cyclic(m), D) for m in mods]
    maps = []
    for k in range(depth - 1):
        m = mods[k]
        images = {}
        for n, lv in enumerate(levels[k + 1].nd):
            for x in lv:
                gs = tuple(int(t) % m for t in x[1:-1].split("|")) if n else ()
                surj, base = _bar_canon(gs)
                images[x] = FormalSimplex(_bar_id(base), surj)
        maps.append(SMap(levels[k + 1], levels[k], images))
    return SpaceTower(levels, maps)


def frobenius_map(depth=5, D=2):
    """The constant circle mapped to ``B(Z/k!)``, sending the edge to ``[1]`` at each level."""
    T = bzn_tower(depth, D)
    S1 = standard_space("circle", D=D)
    maps = []
    for Y in T.levels:
        e = FormalSimplex.nd("[1]", 1) if Y.nd[1] else FormalSimplex("[]", (0, 0))
        maps.append(SMap(S1, Y, {"0": FormalSimplex.nd("[]", 0), "01": e}))
    return TowerMap(S1, T, maps)


@dataclass
class CorpusEntry:
    name: str
    builder: object
    params: dict
    expected: dict = field(default_factory=dict)
    description: str = ""

    def build(self, **overrides):
        kw = dict(self.params)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return self.builder(**kw)


def _std(kind, n=1):
    def build(D=4, n=n):
        return standard_space(kind, n, D)
    return build


# expected values: (value, provenance)
CORPUS = {
    "delta": CorpusEntry("delta", _std("delta", 2), {"D": 4, "n": 2}, {
        "counts": ((3, 3, 1, 0, 0), "trivial"),
        "integral_homology": (("Z", "0", "0", "0"), "trivial"),
        "pi1": (("C1",), "trivial"),
    }, "standard simplex Delta[n]"),
    "sphere": CorpusEntry("sphere", _std("sphere", 2), {"D": 4, "n": 2}, {
        "counts": ((1, 0, 1, 0, 0), "trivial"),
        "integral_homology": (("Z", "0", "Z", "0"), "derived"),
        "pi1": (("C1",), "trivial"),
    }, "Delta[n] with its boundary collapsed"),
    "circle": CorpusEntry("circle", _std("circle"), {"D": 4}, {
        "counts": ((1, 1, 0, 0, 0), "trivial"),
        "integral_homology": (("Z", "Z", "0", "0"), "derived"),
        "pi1": (("C1", "C2", "C3", "C4", "C5", "C6"), "published"),
    }, "one vertex, one edge"),
    "circle-subdivided": CorpusEntry("circle-subdivided", circle_subdivided, {"D": 4}, {
        "counts": ((3, 3, 0, 0, 0), "trivial"),
        "integral_homology": (("Z", "Z", "0", "0"), "derived"),
        "pi1": (("C1", "C2", "C3", "C4", "C5", "C6"), "derived"),
    }, "boundary of a triangle"),
    "rp2": CorpusEntry("rp2", rp2, {"D": 4}, {
        "counts": ((6, 15, 10, 0, 0), "derived"),
        "euler": (1, "derived"),
        "integral_homology": (("Z", "Z/2", "0", "0"), "derived"),
        "pi1": (("C1", "C2"), "derived"),
    }, "six-vertex projective plane"),
    "torus": CorpusEntry("torus", torus, {"D": 4}, {
        "counts": ((1, 3, 2, 0, 0), "derived"),
        "integral_homology": (("Z", "Z^2", "Z", "0"), "derived"),
        "pi1_count": (33, "derived"),
    }, "product of two 1-vertex circles"),
    "wedge2": CorpusEntry("wedge2", wedge2, {"D": 4}, {
        "counts": ((1, 2, 0, 0, 0), "trivial"),
        "integral_homology": (("Z", "Z^2", "0", "0"), "derived"),
        "hom_count_C2": (4, "derived"),
    }, "wedge of two circles"),
    "BZn-tower": CorpusEntry("BZn-tower", bzn_tower, {"depth": 4, "D": 2}, {
        "level_orders": ((1, 2, 6, 24), "trivial"),
    }, "classifying spaces of Z/k! with reduction maps"),
    "frobenius-map": CorpusEntry("frobenius-map", frobenius_map, {"depth": 5, "D": 2}, {
        "verdict": ("pass-up-to-bounds", "derived"),
    }, "the circle classifying the generator at each level of the factorial tower"),
}


def corpus_names():
    return list(CORPUS)


def corpus(name, **params):
    """Build a named corpus object; keyword arguments override its parameters."""
    try:
        entry = CORPUS[name]
    except KeyError:
        raise CorpusError(f"unknown corpus entry {name!r}; known: {', '.join(CORPUS)}") from None
    return entry.build(**params)


def corpus_spaces(D=4):
    """The plain simplicial sets of the corpus, by name."""
    return {n: corpus(n, D=D) for n, e in CORPUS.items()
            if n not in ("BZn-tower", "frobenius-map")}
