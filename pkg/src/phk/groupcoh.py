"""Group cohomology from the normalized bar resolution.

A coefficient module is a finite abelian group in coordinates
``Z/o_1 + ... + Z/o_k`` together with one integer matrix per group element
(the action on coordinates).  Cochains are functions on tuples of
non-identity elements, and

    (df)(g_1..g_{n+1}) = g_1 f(g_2..) + sum_i (-1)^i f(..g_i g_{i+1}..)
                         + (-1)^{n+1} f(g_1..g_n).
"""

from itertools import product as iproduct

import numpy as np

from .abelian import FinAb, check_homomorphism, homology


class ActionError(ValueError):
    pass


def _orders(M):
    if isinstance(M, FinAb):
        if M.rank:
            raise ValueError("coefficients must be finite")
        return list(M.factors)
    return [int(o) for o in M]


def trivial_action(G, M):
    k = len(_orders(M))
    return [np.eye(k, dtype=np.int64) for _ in G.elements]


def inversion_action(G, M, hom):
    """``g`` acts by ``(-1)^hom(g)`` where ``hom: G -> Z/2`` is a list of 0/1."""
    k = len(_orders(M))
    return [np.eye(k, dtype=np.int64) * (-1 if hom[g] else 1) for g in G.elements]


def validate_action(G, M, action):
    """Check that ``action`` is a homomorphism ``G -> Aut(M)``."""
    orders = _orders(M)
    k = len(orders)
    if len(action) != G.order:
        raise ActionError("need one matrix per group element")
    mats = [np.asarray(a, dtype=object).reshape(k, k) for a in action]

    def same(A, B):
        return all((A[i, j] - B[i, j]) % orders[i] == 0 for i in range(k) for j in range(k))
    for g, A in enumerate(mats):
        if not check_homomorphism(A, orders, orders):
            raise ActionError(f"action of element {g} is not well defined")
    if not same(mats[0], np.eye(k, dtype=object)):
        raise ActionError("identity does not act trivially")
    for g in G.elements:
        for h in G.elements:
            if not same(mats[g] @ mats[h], mats[G.mul(g, h)]):
                raise ActionError(f"action is not multiplicative at ({g}, {h})")
    return mats


def bar_tuples(G, n):
    nonid = [g for g in G.elements if g != 0]
    return list(iproduct(nonid, repeat=n))


def bar_differential(G, orders, action, n, tuples_n=None, tuples_n1=None):
    """Matrix of ``d: C^n -> C^{n+1}`` on normalized cochains."""
    k = len(orders)
    tn = bar_tuples(G, n) if tuples_n is None else tuples_n
    tn1 = bar_tuples(G, n + 1) if tuples_n1 is None else tuples_n1
    idx = {t: i for i, t in enumerate(tn)}
    D = np.zeros((len(tn1) * k, len(tn) * k), dtype=np.int64)
    eye = np.eye(k, dtype=np.int64)
    for r, T in enumerate(tn1):
        rs = slice(r * k, (r + 1) * k)
        c = idx[T[1:]]
        D[rs, c * k:(c + 1) * k] += np.asarray(action[T[0]], dtype=np.int64)
        for i in range(1, n + 1):
            g = G.mul(T[i - 1], T[i])
            if g == 0:
                continue
            c = idx[T[:i - 1] + (g,) + T[i + 1:]]
            D[rs, c * k:(c + 1) * k] += (-1) ** i * eye
        c = idx[T[:n]]
        D[rs, c * k:(c + 1) * k] += (-1) ** (n + 1) * eye
    return D


def group_cohomology_data(G, M, action=None, n_max=3):
    """Subquotient objects for ``H^n(G; M)``, ``0 <= n <= n_max``."""
    orders = _orders(M)
    k = len(orders)
    action = trivial_action(G, M) if action is None else validate_action(G, M, action)
    tuples = [bar_tuples(G, n) for n in range(n_max + 2)]
    diffs = [bar_differential(G, orders, action, n, tuples[n], tuples[n + 1])
             for n in range(n_max + 1)]
    out = []
    for n in range(n_max + 1):
        mid = orders * len(tuples[n])
        nxt = orders * len(tuples[n + 1])
        d_in = diffs[n - 1] if n > 0 else np.zeros((len(mid), 0), dtype=np.int64)
        if k == 0:
            out.append(homology(np.zeros((0, 0)), np.zeros((0, 0)), [], orders_out=[]))
            continue
        out.append(homology(d_in, diffs[n], mid, orders_out=nxt))
    return out


def group_cohomology(G, M, action=None, n_max=3):
    """``[H^0(G;M), ..., H^{n_max}(G;M)]`` as FinAb."""
    return [S.group for S in group_cohomology_data(G, M, action, n_max)]
