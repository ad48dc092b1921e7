import json
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from phk.corpus import corpus_spaces, from_facets, rp2, torus
from phk.simplicial import (FormalSimplex, SMap, SSet, SSetError, SimplicialRelation, build_sset,
                            disjoint_union, pair_map, parse_space, product,
                            product_with_projections, quotient, serialize_space, standard_space)

SPACES = corpus_spaces(4)


def delta1_spec():
    return {"dim_cap": 1, "simplices": {"0": ["0", "1"], "1": ["01"]},
            "faces": {"01": ["1", "0"]}}


def test_build_delta1():
    X = build_sset(delta1_spec())
    assert X.counts() == (2, 1)


def test_dangling_reference_names_simplex():
    spec = delta1_spec()
    spec["faces"]["01"] = ["1", "7"]
    with pytest.raises(SSetError) as exc:
        build_sset(spec)
    assert exc.value.simplex == "01"
    assert exc.value.kind == "dangling"


def test_identity_violation_names_simplex():
    spec = {"dim_cap": 2, "simplices": {"0": ["a", "b"], "1": ["e"], "2": ["t"]},
            "faces": {"e": ["a", "b"], "t": ["e", "e", "e"]}}
    with pytest.raises(SSetError) as exc:
        build_sset(spec)
    assert exc.value.simplex == "t"


def test_noncanonical_formal_rejected():
    spec = {"dim_cap": 2, "simplices": {"0": ["v"], "2": ["t"]},
            "faces": {"t": ["s_0s_0|v", "s_0|v", "s_0|v"]}}
    with pytest.raises(SSetError) as exc:
        build_sset(spec)
    assert exc.value.kind == "noncanonical"


def test_rp2_counts_and_euler():
    X = rp2()
    assert X.counts()[:3] == (6, 15, 10)
    assert 6 - 15 + 10 == X.euler() == 1


@pytest.mark.parametrize("kind,n,counts", [
    ("sphere", 2, (1, 0, 1)),
    ("circle", 1, (1, 1)),
    ("delta", 2, (3, 3, 1)),
    ("boundary", 2, (3, 3, 0)),
    ("sphere", 3, (1, 0, 0, 1)),
])
def test_standard_space_counts(kind, n, counts):
    X = standard_space(kind, n, len(counts) - 1)
    assert X.counts() == counts


def test_standard_space_rejects_small_cap():
    with pytest.raises(SSetError):
        standard_space("delta", 3, 2)


def test_product_with_point_is_isomorphic():
    X = rp2(3)
    pt = standard_space("delta", 0, 3)
    P, pr1, _ = product_with_projections(X, pt)
    assert pr1.is_isomorphism()
    inv = pr1.inverse()
    inv.validate()
    assert pr1.compose(inv) == SMap.identity(X)


def test_torus_counts():
    T = torus(4)
    assert T.counts() == (1, 3, 2, 0, 0)
    assert T.euler() == 0


def _euler_independent(X):
    # recount nondegenerate simplices straight from the JSON form
    doc = json.loads(X.to_json())
    return sum((-1) ** int(k) * len(v) for k, v in doc["simplices"].items())


@pytest.mark.parametrize("a,b", [("circle", "circle"), ("delta", "circle"), ("sphere", "circle"),
                                 ("circle-subdivided", "wedge2"), ("sphere", "sphere")])
def test_euler_multiplicative(a, b):
    X, Y = SPACES[a], SPACES[b]
    P = product(X, Y, 4)
    # top-dimensional truncation spoils chi beyond the cap; all factors here have dim <= 2
    assert _euler_independent(P) == _euler_independent(X) * _euler_independent(Y)


@pytest.mark.parametrize("a,b", [("circle", "sphere"), ("circle-subdivided", "circle")])
def test_product_symmetric(a, b):
    X, Y = SPACES[a], SPACES[b]
    P, p1, p2 = product_with_projections(X, Y, 4)
    Q, q1, q2 = product_with_projections(Y, X, 4)
    swap = pair_map(Q, P, p2, p1)
    back = pair_map(P, Q, q2, q1)
    swap.validate()
    back.validate()
    assert back.compose(swap) == SMap.identity(P)
    assert swap.compose(back) == SMap.identity(Q)


def test_quotient_diagonal_is_identity():
    X = rp2(3)
    Q, proj = quotient(X, SimplicialRelation.diagonal())
    assert Q == X
    assert proj == SMap.identity(X)


def test_delta1_vertices_identified_gives_circle():
    X = standard_space("delta", 1, 3)
    R = SimplicialRelation([(FormalSimplex.nd("0", 0), FormalSimplex.nd("1", 0))])
    Q, proj = quotient(X, R)
    S1 = standard_space("circle", D=3)
    assert Q.counts() == S1.counts()
    assert Q.faces == S1.faces
    assert proj.is_levelwise_surjective()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_is_collapsed_simplex(n):
    X = standard_space("delta", n, n + 1)
    R = SimplicialRelation.collapse(X, [x for lv in X.nd[:n] for x in lv])
    Q, proj = quotient(X, R)
    S = standard_space("sphere", n, n + 1)
    assert Q == S
    assert proj.is_levelwise_surjective()


def test_incompatible_relation_rejected():
    X = standard_space("delta", 1, 2)
    # identifying the edge with a degenerate vertex forces 0 ~ 1, which is not given
    R = SimplicialRelation([(X.simplex("01"), FormalSimplex("0", (0, 0)))])
    with pytest.raises(SSetError):
        quotient(X, R)


def test_quotient_is_coequalizer():
    X = standard_space("boundary", 2, 3)
    R = SimplicialRelation.collapse(X, ["0", "1", "2", "02", "12"])
    Q, proj = quotient(X, R)
    S1 = standard_space("circle", D=3)
    f = SMap(X, S1, {"0": S1.simplex("0"), "1": S1.simplex("0"), "2": S1.simplex("0"),
                     "01": S1.simplex("01"), "02": FormalSimplex("0", (0, 0)),
                     "12": FormalSimplex("0", (0, 0))})
    # f is constant on classes, so it factors through the projection, uniquely
    h = {}
    for x, img in proj.images.items():
        if not img.is_degenerate:
            h.setdefault(img.base, f(x))
    g = SMap(Q, S1, h)
    assert g.compose(proj) == f


def test_disjoint_union_counts():
    pt = standard_space("delta", 0, 2)
    U = disjoint_union(pt, pt)
    assert U.counts() == (2, 0, 0)


# -- canonical forms ---------------------------------------------------------

@st.composite
def words(draw):
    """``(word, k)`` with ``s_{word[0]} ... s_{word[-1]}`` defined on a k-simplex."""
    k = draw(st.integers(0, 3))
    rev, dim = [], k
    for _ in range(draw(st.integers(0, 4))):
        rev.append(draw(st.integers(0, dim)))
        dim += 1
    return list(reversed(rev)), k


@given(words())
def test_canonical_form_idempotent(wk):
    word, k = wk
    x = FormalSimplex.from_word(word, "b", k)
    assert len(x.surj) - 1 == k + len(word)
    again = FormalSimplex.from_word(x.deg_word, "b", k)
    assert again == x
    assert list(x.deg_word) == sorted(set(x.deg_word), reverse=True)


@given(words(), st.data())
def test_degeneracy_identities(wk, data):
    # s_i s_j = s_{j+1} s_i for i <= j
    word, k = wk
    x = FormalSimplex.from_word(word, "b", k)
    n = x.dim
    j = data.draw(st.integers(0, n))
    i = data.draw(st.integers(0, j))
    assert x.degeneracy(j).degeneracy(i) == x.degeneracy(i).degeneracy(j + 1)


@pytest.mark.parametrize("name", sorted(SPACES))
def test_identities_hold_on_corpus(name):
    SPACES[name].check_identities()


@pytest.mark.parametrize("name", sorted(SPACES))
def test_canonical_forms_on_corpus(name):
    X = SPACES[name]
    for n in range(X.dim_cap + 1):
        for fs in X.all_simplices(n):
            assert FormalSimplex.from_word(fs.deg_word, fs.base, fs.base_dim) == fs


@pytest.mark.parametrize("name", sorted(SPACES))
def test_round_trip_bytes(name):
    text = serialize_space(SPACES[name])
    assert serialize_space(parse_space(text)) == text


def test_out_of_order_dimensions_accepted():
    spec = {"simplices": {"1": ["01"], "0": ["0", "1"]}, "faces": {"01": ["1", "0"]}}
    X = build_sset(spec)
    assert json.loads(X.to_json())["simplices"] == {"0": ["0", "1"], "1": ["01"]}


def test_circle_canonical_bytes():
    text = serialize_space(standard_space("circle", D=1))
    assert text == ('{\n  "dim_cap": 1,\n  "simplices": {\n    "0": [\n      "0"\n    ],\n'
                    '    "1": [\n      "01"\n    ]\n  },\n  "faces": {\n    "01": [\n'
                    '      "0",\n      "0"\n    ]\n  }\n}\n')


def test_parse_error_has_location():
    with pytest.raises(SSetError) as exc:
        parse_space('{"dim_cap": 1,\n "simplices": {"0": ["a"] \n')
    assert "line 3" in str(exc.value)


@given(st.lists(st.lists(st.integers(0, 5), min_size=1, max_size=3, unique=True),
                min_size=1, max_size=5))
def test_random_complexes_valid(facets):
    X = from_facets(facets, 3)
    X.check_identities()
    simp = {tuple(sorted(c)) for f in facets for k in range(1, len(f) + 1)
            for c in combinations(sorted(f), k)}
    assert sum(X.counts()) == len(simp)
    assert serialize_space(parse_space(X.to_json())) == X.to_json()


def test_smap_validation_catches_bad_face():
    X = standard_space("delta", 1, 1)
    # sends the edge to itself but both endpoints to vertex 0
    with pytest.raises(SSetError) as exc:
        SMap(X, X, {"0": X.simplex("0"), "1": X.simplex("0"), "01": X.simplex("01")})
    assert exc.value.simplex == "01"


def test_sset_equality_structural():
    a = SSet(1, [["0"], ["01"]], {"01": (FormalSimplex.nd("0", 0),) * 2})
    b = standard_space("circle", D=1)
    assert a == b
