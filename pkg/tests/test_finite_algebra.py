from itertools import combinations, product
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phk.abelian import FinAb, Subquotient, cokernel, homology, image, kernel
from phk.groupcoh import ActionError, group_cohomology, inversion_action
from phk.groups import (GroupError, catalogue, cyclic, direct_product, find_isomorphism,
                        group_by_name, is_isomorphic, symmetric)
from phk.presentations import (Presentation, abelianization, enumerate_finite_quotients,
                               hom_classes, homomorphisms, simplify)
from phk.snf import invariant_factors, rank_mod_p, smith_normal_form


# -- independent oracles -------------------------------------------------------

def det(M):
    """Bareiss fraction-free determinant."""
    M = [list(map(int, r)) for r in M]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def determinantal_factors(A):
    """Invariant factors from gcds of k x k minors."""
    A = [list(map(int, r)) for r in A]
    m, n = len(A), len(A[0]) if A else 0
    ds = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        ds.append(g)
    return [ds[i] // ds[i - 1] for i in range(1, len(ds))]


def rank_mod_p_oracle(A, p):
    M = [[int(x) % p for x in r] for r in A]
    r = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    return r


# -- Smith normal form ---------------------------------------------------------

def check_certificate(A):
    A = np.array(A, dtype=object)
    U, D, V = smith_normal_form(A)
    assert (U.dot(A).dot(V) == D).all()
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    m, n = A.shape
    diag = [D[i, i] for i in range(min(m, n))]
    off = [D[i, j] for i in range(m) for j in range(n) if i != j]
    assert all(x == 0 for x in off)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))
    return nz


def test_snf_certificate_random(rng):
    for _ in range(1000):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = [[rng.randint(-9, 9) if rng.random() < 0.7 else 0 for _ in range(n)]
             for _ in range(m)]
        nz = check_certificate(A)
        if m <= 4 and n <= 4:
            assert nz == determinantal_factors(A)
        assert invariant_factors(A) == nz


def test_snf_examples():
    assert check_certificate([[2, 0], [0, 3]]) == [1, 6]
    U, D, V = smith_normal_form(np.zeros((2, 3), dtype=int))
    assert (D == 0).all() and (U == np.eye(2, dtype=int)).all() and (V == np.eye(3, dtype=int)).all()
    assert check_certificate(np.eye(3, dtype=int)) == [1, 1, 1]


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_invariant_factors_sparse_matches_dense(m, n, data):
    A = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                           min_size=m, max_size=m))
    cols = [{i: A[i][j] for i in range(m) if A[i][j]} for j in range(n)]
    assert invariant_factors((cols, m)) == invariant_factors(A)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rank_mod_p(rng, p):
    for _ in range(200):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
        assert rank_mod_p(A, p) == rank_mod_p_oracle(A, p)


# -- finite abelian groups -------------------------------------------------------

@given(st.lists(st.integers(1, 30), max_size=4), st.integers(0, 2))
def test_finab_invariants(orders, rank):
    A = FinAb.from_orders(orders, rank)
    assert all(b % a == 0 for a, b in zip(A.factors, A.factors[1:]))
    assert all(d >= 2 for d in A.factors)
    size = 1
    for o in orders:
        size *= o
    assert A.rank or A.order == size
    assert FinAb.parse(str(A)) == A


def _elements(orders):
    return list(product(*[range(o) for o in orders]))


def _apply(F, x, dst):
    return tuple(int(v) % o for v, o in zip(np.array(F, dtype=object).dot(np.array(x, dtype=object)), dst))


@given(st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=2),
       st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=2), st.data())
def test_kernel_image_orders(src, dst, data):
    # a homomorphism Z/src -> Z/dst: column j must be killed by src[j]
    F = np.zeros((len(dst), len(src)), dtype=np.int64)
    for j, o in enumerate(src):
        for i, d in enumerate(dst):
            step = d // gcd(d, o)
            F[i, j] = step * data.draw(st.integers(0, d))
    els = _elements(src)
    imgs = {_apply(F, x, dst) for x in els}
    ker = [x for x in els if not any(_apply(F, x, dst))]
    K = kernel(F, src, dst)
    assert Subquotient(K, np.zeros((len(src), 0), dtype=np.int64), src).order == len(ker)
    assert image(F, dst).order == len(imgs)
    size = 1
    for d in dst:
        size *= d
    assert cokernel(F, dst).order == size // len(imgs)


def test_homology_middle_term():
    # Z/4 --2--> Z/4 --2--> Z/4 : ker = {0,2}, im = {0,2}
    H = homology(np.array([[2]]), np.array([[2]]), [4], [4], [4])
    assert H.group == FinAb()
    H = homology(np.zeros((1, 1), dtype=int), np.array([[2]]), [4], [4], [4])
    assert H.group == FinAb.cyclic(2)


# -- finite groups ---------------------------------------------------------------

# number of groups of order n up to isomorphism, n = 1..16
GROUP_COUNTS = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14]


def test_catalogue_counts():
    cat = catalogue()
    counts = [sum(1 for G in cat if G.order == n) for n in range(1, 17)]
    assert counts == GROUP_COUNTS


def test_catalogue_pairwise_non_isomorphic():
    cat = catalogue(12)
    for i, A in enumerate(cat):
        for B in cat[i + 1:]:
            if A.order == B.order:
                assert not is_isomorphic(A, B)


@pytest.mark.parametrize("G", catalogue(8), ids=lambda G: G.name)
def test_catalogue_groups_valid(G):
    G.validate()
    assert G.from_text(G.to_text()).table.tolist() == G.table.tolist()


def test_group_lookup():
    assert group_by_name("Z4").order == 4
    assert group_by_name("S3").order == 6 and not group_by_name("S3").is_abelian()
    assert is_isomorphic(group_by_name("C2xC2"), direct_product(cyclic(2), cyclic(2)))
    with pytest.raises(GroupError):
        group_by_name("nonsense")


def test_bad_table_rejected():
    with pytest.raises(GroupError):
        cyclic(3).from_text("0 1\n1 1")


def test_find_isomorphism_is_homomorphism():
    A, B = symmetric(3), group_by_name("S3")
    phi = find_isomorphism(A, B)
    assert phi is not None
    for a in A.elements:
        for b in A.elements:
            assert phi[A.mul(a, b)] == B.mul(phi[a], phi[b])


# -- presentations -----------------------------------------------------------------

def test_quotients_of_integers():
    qs = enumerate_finite_quotients(Presentation(1, ()), 4)
    assert [q.order for q in qs] == [1, 2, 3, 4]
    assert all(q.target.is_cyclic() for q in qs)


def test_quotients_of_trivial_group():
    qs = enumerate_finite_quotients(Presentation(1, ((1,),)), 6)
    assert [q.order for q in qs] == [1]


def test_quotients_of_z2_index_two():
    P = Presentation.parse("<a,b | aba^-1b^-1>")
    qs = enumerate_finite_quotients(P, 2)
    assert sorted(q.order for q in qs) == [1, 2, 2, 2]


@pytest.mark.parametrize("text,expected", [
    ("<a,b | >", FinAb((), 2)),
    ("<a | a^2>", FinAb.cyclic(2)),
    ("<a,b | abab^-1>", FinAb((2,), 1)),
])
def test_abelianization(text, expected):
    assert abelianization(Presentation.parse(text)) == expected


def _surjection_count(A, C):
    """Surjective homomorphisms from a finite-plus-free abelian group onto abelian C."""
    orders = list(A.factors) + [0] * A.rank
    choices = []
    for o in orders:
        choices.append([c for c in C.elements if o == 0 or C.power(c, o) == 0])
    count = 0
    for imgs in product(*choices):
        if len(C.generated(list(imgs))) == C.order:
            count += 1
    return count


@pytest.mark.parametrize("text", ["<a,b | aba^-1b^-1>", "<a,b | a^2, b^4>", "<a | a^6>",
                                  "<a,b | abab^-1>", "<a,b,c | a^2, [a,b]>"])
def test_abelian_quotients_match_abelianization(text):
    P = Presentation.parse(text.replace("[a,b]", "aba^-1b^-1"))
    A = abelianization(P)
    qs = enumerate_finite_quotients(P, 8)
    for C in catalogue(8):
        if not C.is_abelian():
            continue
        found = sum(1 for q in qs if q.order == C.order and is_isomorphic(q.target, C))
        assert found == _surjection_count(A, C) // len(C.automorphisms())


@given(st.integers(1, 4), st.lists(st.lists(st.integers(-3, 3).filter(bool), min_size=1,
                                           max_size=5), max_size=4), st.data())
def test_simplify_preserves_hom_counts(ngens, rels, data):
    rels = tuple(tuple(x if abs(x) <= ngens else (ngens if x > 0 else -ngens) for x in r)
                 for r in rels)
    P = Presentation(ngens, rels)
    Q, expr = simplify(P)
    G = data.draw(st.sampled_from([cyclic(2), cyclic(3), symmetric(3)]))
    assert sum(1 for _ in homomorphisms(P, G)) == sum(1 for _ in homomorphisms(Q, G))
    assert len(hom_classes(P, G, simplify_first=False)) == len(hom_classes(P, G))


def test_presentation_text_round_trip():
    P = Presentation.parse("<a,b | a^2, ab^-1a^-1b^-1>")
    assert Presentation.parse(P.format()) == P


# -- group cohomology ---------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_cyclic_group_cohomology_pattern(k, m):
    # periodic resolution: 0 in odd steps, multiplication by k in even steps
    H = group_cohomology(cyclic(k), [m], n_max=4)
    expected = [FinAb.cyclic(m)] + [FinAb.cyclic(gcd(k, m))] * 4
    assert H == expected


def test_group_cohomology_examples():
    assert group_cohomology(cyclic(2), [2], n_max=4) == [FinAb.cyclic(2)] * 5
    assert group_cohomology(cyclic(3), [2], n_max=1)[1] == FinAb()
    assert group_cohomology(symmetric(3), [2, 3], n_max=0)[0] == FinAb.from_orders([2, 3])


def test_twisted_group_cohomology():
    # Z/2 acting on Z/3 by inversion: H^0 = fixed points = 0, and |G| kills H^n (n>0)
    G = cyclic(2)
    act = inversion_action(G, [3], [0, 1])
    H = group_cohomology(G, [3], act, n_max=3)
    assert all(h == FinAb() for h in H)


def test_invalid_action_rejected():
    G = cyclic(3)
    bad = [np.eye(1, dtype=int), np.array([[2]]), np.array([[2]])]
    with pytest.raises(ActionError):
        group_cohomology(G, [3], bad, n_max=1)


def test_random_presentations_quotients_sorted(rng):
    for _ in range(10):
        rels = tuple(tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 4)))
                     for _ in range(rng.randint(0, 2)))
        qs = enumerate_finite_quotients(Presentation(2, rels), 6)
        assert [q.order for q in qs] == sorted(q.order for q in qs)
        assert len({q.fingerprint for q in qs}) == len(qs)
        assert qs and qs[0].order == 1
