import pytest

from phk.abelian import FinAb
from phk.classifying import bar_construction, check_unique_lifting
from phk.cohomology import DegreeError, cohomology, pi0
from phk.corpus import collapse_map, corpus_spaces, frobenius_map, rp2
from phk.edgepath import ConnectivityError, edge_path_presentation
from phk.groups import cyclic, symmetric
from phk.homotopy import (check_weak_equivalence, enumerate_coverings, hurewicz_h1,
                          pi1_profinite, pi2_tower)
from phk.presentations import enumerate_finite_quotients, homomorphisms
from phk.simplicial import SMap, FormalSimplex, disjoint_union, standard_space
from phk.towers import TowerMap

SPACES = corpus_spaces(D=4)
CONNECTED = sorted(SPACES)


def test_edge_path_circle():
    P = edge_path_presentation(SPACES["circle"])
    assert P.ngens == 1 and not any(P.relators)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_edge_path_simplex_trivial(n):
    P = edge_path_presentation(standard_space("delta", n, 3))
    assert len(homomorphisms(P, symmetric(3))) == 1


def test_edge_path_wedge_is_free():
    P = edge_path_presentation(SPACES["wedge2"])
    assert len(homomorphisms(P, cyclic(2))) == 4
    assert len(homomorphisms(P, symmetric(3))) == 36


def test_edge_path_disconnected():
    P = standard_space("delta", 0, 2)
    with pytest.raises(ConnectivityError):
        edge_path_presentation(disjoint_union(P, P))


def test_pi1_circle():
    A = pi1_profinite(SPACES["circle"], N=6)
    assert A.names() == ["C1", "C2", "C3", "C4", "C5", "C6"]
    assert A.index_counts() == {k: 1 for k in range(1, 7)}


@pytest.mark.parametrize("name", ["delta", "sphere"])
def test_pi1_simply_connected(name):
    assert pi1_profinite(SPACES[name], N=6).is_trivial()


def test_pi1_rp2():
    assert pi1_profinite(rp2(), N=6).names() == ["C1", "C2"]


@pytest.mark.parametrize("name", CONNECTED)
def test_pi1_matches_quotient_enumeration(name):
    X = SPACES[name]
    A = pi1_profinite(X, N=4)
    Q = enumerate_finite_quotients(edge_path_presentation(X), 4)
    assert [q.fingerprint for q in A.quotients] == [q.fingerprint for q in Q]


def test_pi1_tower_pullbacks():
    T = frobenius_map(depth=4).target
    A = pi1_profinite(T, N=4)
    assert len(A.levels) == 4 and len(A.pullbacks) == 3


def test_coverings_circle():
    covs = enumerate_coverings(SPACES["circle"], 3)
    assert [c.degree for c in covs] == [1, 2, 3]


def test_coverings_simply_connected():
    covs = enumerate_coverings(SPACES["sphere"], 3)
    assert [c.degree for c in covs] == [1]


def test_coverings_rp2():
    covs = enumerate_coverings(rp2(), 2)
    assert [c.degree for c in covs] == [1, 2]
    E = covs[1].space
    assert sum((-1) ** n * len(E.nd[n]) for n in range(3)) == 2


# conjugacy classes of subgroups by index: free group of rank 2 and Z^2
@pytest.mark.parametrize("name,counts", [("wedge2", [1, 3, 7, 26]), ("torus", [1, 3, 4, 7])])
def test_covering_counts(name, counts):
    covs = enumerate_coverings(SPACES[name], 4)
    assert [sum(1 for c in covs if c.degree == d) for d in range(1, 5)] == counts
    for c in covs:
        assert len(pi0(c.space)) == 1
        assert check_unique_lifting(c.space, SPACES[name], c.projection)


@pytest.mark.parametrize("name", CONNECTED)
def test_index_two_covers_match_quotients(name):
    # index-2 subgroups are normal, so each is the kernel of one C2 quotient
    X = SPACES[name]
    covs = enumerate_coverings(X, 2)
    assert sum(1 for c in covs if c.degree == 2) == pi1_profinite(X, N=2).index_counts().get(2, 0)


@pytest.mark.parametrize("name", CONNECTED)
def test_hurewicz_h1(name):
    R = hurewicz_h1(SPACES[name], moduli=range(2, 7))
    assert R.agree


def test_hurewicz_examples():
    R = hurewicz_h1(rp2(), moduli=(2, 3))
    assert [r.abelianized for r in R.rows] == [FinAb.cyclic(2), FinAb()]
    assert [r.homology for r in R.rows] == [FinAb.cyclic(2), FinAb()]
    R = hurewicz_h1(SPACES["circle"], moduli=(2, 3, 4))
    assert [r.homology for r in R.rows] == [FinAb.cyclic(m) for m in (2, 3, 4)]
    assert hurewicz_h1(standard_space("delta", 0, 3), moduli=(2,)).rows[0].homology == FinAb()


def test_pi2_sphere():
    P = pi2_tower(SPACES["sphere"], N=6, moduli=(2, 3, 4, 5))
    assert P.chain == ["C1"]
    for m in (2, 3, 4, 5):
        assert P.towers[m].groups() == [FinAb.cyclic(m)]


def test_pi2_circle():
    P = pi2_tower(SPACES["circle"], N=6, moduli=(2, 3))
    assert P.chain == ["C1", "C2", "C4"]
    assert all(g == FinAb() for g in P.entries.values())


def test_pi2_rp2_top_level_is_sphere():
    P = pi2_tower(rp2(), N=6, moduli=(2, 3))
    assert P.chain == ["C1", "C2"]
    assert P.towers[2].groups()[-1] == FinAb.cyclic(2)
    assert P.towers[3].groups()[-1] == FinAb.cyclic(3)


def test_pi2_bz2():
    _, BG, _ = bar_construction(cyclic(2), 4)
    P = pi2_tower(BG, N=2, moduli=(2,))
    assert P.chain == ["C1", "C2"]
    assert P.towers[2].groups()[-1] == FinAb()


@pytest.mark.parametrize("name", ["circle", "rp2", "torus", "sphere"])
def test_identity_passes(name):
    X = SPACES[name].truncate(3)
    v = check_weak_equivalence(SMap.identity(X), 2, 3, 4)
    assert v.passed
    assert v.bounds == {"degree_cap": 2, "coeff_cap": 3, "quotient_cap": 4}


def test_collapse_passes():
    v = check_weak_equivalence(collapse_map(), 3, 4, 6)
    assert v.passed and str(v).startswith("pass-up-to-bounds")


def test_circle_to_point_fails():
    S1 = SPACES["circle"]
    P = standard_space("delta", 0, 4)
    f = SMap(S1, P, {"0": FormalSimplex.nd(P.nd[0][0], 0),
                     "01": FormalSimplex(P.nd[0][0], (0, 0))})
    v = check_weak_equivalence(f, 2, 4, 6)
    assert not v.passed
    assert str(v.witness).startswith("H^1(.; Z/2): Z/2 vs 0")
    # the witness is re-checkable
    assert str(cohomology(S1, [2], 1)) == v.witness.source_value


def test_pi0_mismatch_witness():
    P = standard_space("delta", 0, 3)
    two = disjoint_union(P, P)
    f = SMap(two, P, {x: FormalSimplex.nd(P.nd[0][0], 0) for x in two.nd[0]})
    v = check_weak_equivalence(f, 1, 2, 2)
    assert v.witness.invariant == "pi0"


def test_degree_cap_limited_by_dimension():
    with pytest.raises(DegreeError):
        check_weak_equivalence(collapse_map(D=2), 3, 2, 2)


def test_tower_map_checks_top_level():
    f = collapse_map(3)
    from phk.towers import SpaceTower
    T = SpaceTower.constant(f.target, 3)
    v = check_weak_equivalence(TowerMap(f.source, T, [f] * 3), 2, 3, 4)
    assert v.passed
    assert all(p[0] == "level 2" for p in v.probes)


def test_frobenius_depth_three_fails():
    v = check_weak_equivalence(frobenius_map(depth=3), 2, 4, 6)
    assert not v.passed
    assert "Z/4" in str(v.witness) and "top level 2" in v.witness.note


def test_frobenius_default_depth_passes():
    v = check_weak_equivalence(frobenius_map(), 2, 4, 6)
    assert v.passed
