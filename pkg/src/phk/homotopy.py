"""Fundamental groups, coverings, Hurewicz comparisons and the bounded
weak-equivalence checker.
"""

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .abelian import FinAb, factorize, induced_map
from .classifying import GSet, check_unique_lifting, twisted_product
from .cohomology import (DegreeError, LocalSystem, TwistingCocycle, cochain_pullback,
                         cohomology_data, h1_nonabelian, homology, homology_data, is_bijective,
                         pi0, twisted_cohomology_data)
from .edgepath import (ConnectivityError, cocycle_values, edge_path_data, gauge_fix,
                       vertex_components)
from .groups import catalogue, from_elements, symmetric, permutation_elements
from .presentations import (abelianization, coset_table, enumerate_finite_quotients,
                            hom_classes)
from .simplicial import SMap
from .towers import GroupTower, SpaceTower, TowerMap


def _connected(X):
    return len(set(vertex_components(X).values())) == 1


def _require_connected(X):
    if not X.nd[0] or not _connected(X):
        raise ConnectivityError("space must be nonempty and connected")


# ----------------------------------------------------------------------------
# profinite fundamental group


@dataclass
class ProfiniteGroupApprox:
    """Finite quotients of the edge-path group up to order ``bound``.

    ``below[i]`` lists the indices j with ``ker(q_j) <= ker(q_i)``, i.e.
    quotient i factors through quotient j.
    """

    presentation: object
    basepoint: str
    bound: int
    quotients: list
    below: list
    levels: list = field(default=None, repr=False)
    pullbacks: list = field(default=None, repr=False)

    def names(self):
        return [q.name for q in self.quotients]

    def index_counts(self):
        out = {}
        for q in self.quotients:
            out[q.order] = out.get(q.order, 0) + 1
        return out

    def is_trivial(self):
        return len(self.quotients) == 1


def _approx(X, x, N):
    _require_connected(X)
    data = edge_path_data(X, x)
    qs = enumerate_finite_quotients(data.presentation, N)
    below = [[j for j, qj in enumerate(qs) if qi.factors_through(qj)] for qi in qs]
    return ProfiniteGroupApprox(data.presentation, data.basepoint, N, qs, below)


def pullback_images(f, G, images, x=None):
    """Generator images on the source of f of the pullback of a cocycle on the target.

    ``images`` are generator images for the target's edge-path presentation
    at ``f(x)``; the result is for the source's presentation at ``x``.
    """
    X, Y = f.source, f.target
    dX = edge_path_data(X, x)
    dY = edge_path_data(Y, f(X.simplex(dX.basepoint)).base)
    vals = cocycle_values(dY, G, images)
    pulled = {}
    for e in X.nd[1]:
        img = f(X.simplex(e))
        pulled[e] = 0 if img.is_degenerate else vals[img.base]
    out, _ = gauge_fix(X, dX, G, pulled)
    return out


def _pull_quotient_map(f, src_approx, dst_approx):
    """Index map: quotients of the target pulled back to quotients of the source."""
    fps = {q.fingerprint: i for i, q in enumerate(src_approx.quotients)}
    out = []
    for q in dst_approx.quotients:
        imgs = pullback_images(f, q.target, q.images, src_approx.basepoint)
        out.append(fps.get(coset_table(q.target, imgs)))
    return out


def pi1_profinite(X, x=None, N=6):
    """Finite-quotient system of ``pi_1(X, x)`` up to order N.

    For a SpaceTower the system of the last level is returned, with
    ``levels`` holding every level's system and ``pullbacks[k]`` sending
    quotients of level k to quotients of level k+1 along the transition.
    """
    if isinstance(X, SpaceTower):
        levels = [_approx(Y, x if k == len(X) - 1 else None, N) for k, Y in enumerate(X.levels)]
        pulls = [_pull_quotient_map(X.maps[k], levels[k + 1], levels[k]) for k in range(len(X) - 1)]
        top = levels[-1]
        return ProfiniteGroupApprox(top.presentation, top.basepoint, N, top.quotients, top.below,
                                    levels, pulls)
    return _approx(X, x, N)


# ----------------------------------------------------------------------------
# coverings


@dataclass
class Covering:
    space: object
    projection: SMap
    degree: int
    permutations: tuple
    cocycle: TwistingCocycle = field(repr=False, default=None)


def _is_transitive(perms, d):
    seen, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for p in perms:
            for j in (p[i], p.index(i)):
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
    return len(seen) == d


def enumerate_coverings(X, k, x=None):
    """Connected coverings of degree ``<= k``, one per conjugacy class of subgroups.

    Transitive actions of the edge-path group on ``{0..d-1}`` up to
    relabelling correspond to conjugacy classes of index-d subgroups; each is
    realised as a twisted product and checked for unique lifting.
    """
    _require_connected(X)
    if k < 1:
        raise ValueError("index bound must be >= 1")
    if k > 6:
        raise ValueError("index bound above 6 is outside the supported range")
    data = edge_path_data(X, x)
    out = []
    for d in range(1, k + 1):
        Sd = symmetric(d)
        perms = permutation_elements(d)
        for imgs in hom_classes(data.presentation, Sd):
            gperm = [perms[g] for g in imgs]
            if not _is_transitive(gperm, d):
                continue
            tau = TwistingCocycle(X, Sd, cocycle_values(data, Sd, imgs))
            E, proj = twisted_product(X, tau, GSet.permutation(Sd, perms))
            if not _connected(E):
                raise AssertionError("transitive action produced a disconnected cover")
            if not check_unique_lifting(E, X, proj):
                raise AssertionError("cover fails the unique lifting property")
            out.append(Covering(E, proj, d, tuple(tuple(p) for p in gperm), tau))
    return out


# ----------------------------------------------------------------------------
# Hurewicz


@dataclass
class HurewiczRow:
    modulus: int
    abelianized: FinAb
    homology: FinAb

    @property
    def agree(self):
        return self.abelianized == self.homology


@dataclass
class HurewiczReport:
    abelianization: FinAb
    rows: list

    @property
    def agree(self):
        return all(r.agree for r in self.rows)


def hurewicz_h1(X, moduli=(2, 3, 4, 5, 6), x=None):
    """Compare ``pi_1^ab (x) Z/m`` with ``H_1(X; Z/m)`` for each modulus."""
    _require_connected(X)
    ab = abelianization(edge_path_data(X, x).presentation)
    rows = [HurewiczRow(m, ab.tensor(m), homology(X, m, 1)) for m in moduli]
    return HurewiczReport(ab, rows)


# ----------------------------------------------------------------------------
# pi_2 through covers


def _chain_map_matrix(f, n):
    """``f_*: C_n(X) -> C_n(Y)`` on normalized chains."""
    return cochain_pullback(f, n).T


def _cover_map(X, E1, E0, phi):
    """``(x, s) -> (x, phi(s))`` between regular covers (fiber labels are indices)."""
    images = {}
    for n in range(X.dim_cap + 1):
        for x in X.nd[n]:
            for s, t in enumerate(phi):
                images[f"({x},{s})"] = E0.simplex(f"({x},{t})")
    return SMap(E1, E0, images, validate=False)


@dataclass
class Pi2Tower:
    """``H_2`` of regular covers along a chain of finite quotients of pi_1."""

    chain: list
    entries: dict
    towers: dict

    def __str__(self):
        return "; ".join(f"m={m}: {T}" for m, T in self.towers.items())


def _quotient_chain(approx):
    """Greedy chain ``1 = Q_0 <- Q_1 <- ...``, each step the first quotient the
    current top factors through, in the enumeration order."""
    chain = [0]
    while True:
        cur = chain[-1]
        nxt = [i for i in approx.below[cur] if i not in chain]
        if not nxt:
            return chain
        chain.append(nxt[0])


def pi2_tower(X, N=6, moduli=(2, 3, 5), x=None):
    """``H_2(X x_t Q; Z/m)`` for finite quotients Q of pi_1 up to order N.

    The tower for each modulus runs along a maximal chain of quotients, with
    transitions induced by the cover projections.  For simply connected X it
    is the constant tower ``H_2(X; Z/m)``, which is pi_2 mod m by Hurewicz;
    in general it is an approximation.
    """
    approx = pi1_profinite(X, x, N)
    data = edge_path_data(X, x)
    chain = _quotient_chain(approx)
    covers = []
    for i in chain:
        q = approx.quotients[i]
        tau = TwistingCocycle(X, q.target, cocycle_values(data, q.target, q.images))
        covers.append(twisted_product(X, tau)[0])
    entries, towers = {}, {}
    for m in moduli:
        subs = [homology_data(E, m, 2) for E in covers]
        for i, S in zip(chain, subs):
            entries[(approx.quotients[i].name, i, m)] = S.group
        maps = []
        for k in range(len(chain) - 1):
            qa, qb = approx.quotients[chain[k]], approx.quotients[chain[k + 1]]
            f = qb.target.extend_hom(list(qb.images), list(qa.images), qa.target)
            if f is None:
                raise AssertionError("quotient chain is not a chain of factorizations")
            g = _cover_map(X, covers[k + 1], covers[k], f)
            F = _chain_map_matrix(g, 2)
            maps.append(induced_map(F, subs[k + 1], subs[k]))
        towers[m] = GroupTower([S.cyclic for S in subs], maps)
    return Pi2Tower([approx.quotients[i].name for i in chain], entries, towers)


# ----------------------------------------------------------------------------
# bounded weak-equivalence check


@dataclass
class Witness:
    invariant: str
    coefficient: str
    degree: object
    source_value: str
    target_value: str
    note: str = ""

    def __str__(self):
        deg = "" if self.degree is None else f"^{self.degree}"
        s = f"{self.invariant}{deg}(.; {self.coefficient}): {self.source_value} vs {self.target_value}"
        return s + (f" ({self.note})" if self.note else "")


@dataclass
class WEVerdict:
    status: str
    bounds: dict
    witness: Witness = None
    probes: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status == "pass-up-to-bounds"

    def to_dict(self):
        d = {"status": self.status, "bounds": dict(self.bounds),
             "probes": [list(map(str, p)) for p in self.probes]}
        if self.witness is not None:
            w = self.witness
            d["witness"] = {"invariant": w.invariant, "coefficient": w.coefficient,
                            "degree": w.degree, "source": w.source_value,
                            "target": w.target_value, "note": w.note}
        return d

    def __str__(self):
        b = ", ".join(f"{k}={v}" for k, v in self.bounds.items())
        if self.passed:
            return f"pass-up-to-bounds ({b}; {len(self.probes)} probes)"
        return f"fail: {self.witness} ({b})"


def abelian_group_invariants(G):
    """FinAb isomorphic to an abelian FiniteGroup, from counts of p^k-torsion."""
    factors = []
    for p, e in factorize(G.order):
        # ranks[k] = log_p |G[p^(k+1)]|
        ranks, k = [], 0
        while not ranks or ranks[-1] < e:
            k += 1
            c = sum(1 for a in G.elements if G.power(a, p ** k) == 0)
            ranks.append(round(np.log(c) / np.log(p)))
        # number of cyclic factors of order >= p^(i+1)
        ge = [ranks[0]] + [ranks[i] - ranks[i - 1] for i in range(1, len(ranks))] + [0]
        for i in range(len(ranks)):
            factors += [p ** (i + 1)] * (ge[i] - ge[i + 1])
    return FinAb.from_orders(factors)


def _units(m):
    """``(Z/m)^x`` as a FiniteGroup with element labels."""
    from math import gcd
    us = [u for u in range(1, m) if gcd(u, m) == 1] if m > 1 else [0]
    return from_elements(us, lambda a, b: (a * b) % m, name=f"U{m}"), us


def _component_map(f):
    cX, cY = vertex_components(f.source), vertex_components(f.target)
    return {c: cY[f(f.source.simplex(c)).base] for c in set(cX.values())}


def _h1_pullback(f, G):
    """``(|H^1(Y;G)|, |H^1(X;G)|, bijective)`` for ``f: X -> Y``."""
    X, Y = f.source, f.target
    if _connected(X) and _connected(Y):
        xs = set(hom_classes(edge_path_data(X).presentation, G))
        dX = edge_path_data(X)
        ys = hom_classes(edge_path_data(Y, f(X.simplex(dX.basepoint)).base).presentation, G)
        pulled = []
        for imgs in ys:
            p = pullback_images(f, G, imgs, dX.basepoint)
            pulled.append(min(tuple(G.conj(g, a) for a in p) for g in G.elements))
        bij = len(set(pulled)) == len(ys) and set(pulled) == xs
        return len(ys), len(xs), bij
    HX = h1_nonabelian(X, G, "cocycles")
    HY = h1_nonabelian(Y, G, "cocycles")
    pulled = []
    for t in HY.classes:
        tup = tuple(0 if f(X.simplex(e)).is_degenerate else t.values[f(X.simplex(e)).base]
                    for e in X.nd[1])
        pulled.append(HX.orbit_of[tup])
    bij = len(set(pulled)) == len(HX) == len(HY)
    return len(HY), len(HX), bij


def _check_degree_bounds(f, d):
    # probed degrees are n < d; H^n needs (n+1)-simplices
    cap = min(f.source.dim_cap, f.target.dim_cap)
    if d > cap:
        raise DegreeError(f"degree cap {d} exceeds the dimension cap {cap} of the spaces")


def _probe_trivial(f, m, n):
    X, Y = f.source, f.target
    SX, SY = cohomology_data(X, [m], n), cohomology_data(Y, [m], n)
    ok = is_bijective(cochain_pullback(f, n), SY, SX)
    return ok, SY.group, SX.group


def _probe_twisted(f, L, tauY, tauX, n):
    X, Y = f.source, f.target
    SY = twisted_cohomology_data(Y, L, n, tauY)
    SX = twisted_cohomology_data(X, L, n, tauX)
    ok = is_bijective(cochain_pullback(f, n, len(L.orders)), SY, SX)
    return ok, SY.group, SX.group


def check_weak_equivalence(f, degree_cap=2, coeff_cap=4, quotient_cap=6):
    """Bounded weak-equivalence test for ``f: X -> Y`` or a TowerMap.

    A TowerMap is compared through its colimit; the direct system is finite,
    so that is its top level and only ``f.maps[-1]`` is probed.

    Probes, in order: pi_0 bijection; ``H^1(.; G)`` bijection for every
    catalogue group of order ``<= quotient_cap``; ``H^n(.; Z/m)`` for
    ``n < degree_cap`` and ``2 <= m <= coeff_cap``; for connected spaces with
    nontrivial pi_1, twisted ``H^n(.; Z/m)`` for every quotient of pi_1(Y)
    up to ``quotient_cap`` and every action on Z/m.  Cohomology probes check
    that the induced map is bijective.  The first failing probe in this order
    is the witness.
    """
    bounds = {"degree_cap": degree_cap, "coeff_cap": coeff_cap, "quotient_cap": quotient_cap}
    if isinstance(f, TowerMap):
        f.validate()
        k = len(f.maps) - 1
        v = check_weak_equivalence(f.maps[-1], degree_cap, coeff_cap, quotient_cap)
        v.probes = [(f"level {k}",) + tuple(p) for p in v.probes]
        if v.witness is not None:
            w = v.witness
            w.note = (w.note + "; " if w.note else "") + f"top level {k}"
        return v
    X, Y = f.source, f.target
    _check_degree_bounds(f, degree_cap)
    probes = []

    def fail(w):
        return WEVerdict("fail", bounds, w, probes)

    # pi_0
    cmap = _component_map(f)
    cY = pi0(Y)
    probes.append(("pi0",))
    if len(set(cmap.values())) != len(cmap) or set(cmap.values()) != set(cY):
        return fail(Witness("pi0", "-", None, str(len(cY)), str(len(cmap)),
                            "induced map on components is not bijective"))
    # H^1 with finite group coefficients
    for G in catalogue(quotient_cap):
        if G.order == 1:
            continue
        probes.append(("H1", G.name))
        ny, nx, ok = _h1_pullback(f, G)
        if not ok:
            if G.is_abelian():
                A = abelian_group_invariants(G)
                SY = cohomology_data(Y, list(A.factors), 1).group
                SX = cohomology_data(X, list(A.factors), 1).group
                return fail(Witness("H", str(A), 1, str(SX), str(SY),
                                    "pullback on H^1 is not bijective"))
            return fail(Witness("H", G.name, 1, f"{nx} classes", f"{ny} classes",
                                "pullback on nonabelian H^1 is not bijective"))
    # trivial coefficients
    for n in range(degree_cap):
        for m in range(2, coeff_cap + 1):
            probes.append(("H", n, f"Z/{m}"))
            ok, gy, gx = _probe_trivial(f, m, n)
            if not ok:
                return fail(Witness("H", f"Z/{m}", n, str(gx), str(gy),
                                    "" if gx != gy else "groups agree but the induced map is not bijective"))
    # twisted coefficients
    if _connected(X) and _connected(Y):
        dX = edge_path_data(X)
        yb = f(X.simplex(dX.basepoint)).base
        dY = edge_path_data(Y, yb)
        quots = [q for q in enumerate_finite_quotients(dY.presentation, quotient_cap) if q.order > 1]
        for qi, q in enumerate(quots):
            Q = q.target
            tauY = TwistingCocycle(Y, Q, cocycle_values(dY, Q, q.images), validate=False)
            tauX = TwistingCocycle(X, Q, {e: tauY(f(X.simplex(e))) for e in X.nd[1]}, validate=False)
            gens = Q.generating_set()
            for m in range(2, coeff_cap + 1):
                U, us = _units(m)
                acts = []
                for imgs in iproduct(U.elements, repeat=len(gens)):
                    h = Q.extend_hom(gens, list(imgs), U)
                    if h is not None and any(h):
                        acts.append(tuple(us[a] for a in h))
                for ai, act in enumerate(sorted(set(acts))):
                    action = [np.array([[a]], dtype=np.int64) for a in act]
                    L = LocalSystem(Q, q.images, (m,), action, yb)
                    for n in range(degree_cap):
                        probes.append(("Htw", qi, q.name, f"Z/{m}", act, n))
                        ok, gy, gx = _probe_twisted(f, L, tauY, tauX, n)
                        if not ok:
                            return fail(Witness("H_tw", f"Z/{m} via {q.name} acting by {act}", n,
                                                str(gx), str(gy)))
    return WEVerdict("pass-up-to-bounds", bounds, None, probes)
