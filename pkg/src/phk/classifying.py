"""Classifying spaces, Eilenberg-MacLane spaces, twisted products and bundles.

Identifier conventions
----------------------
* ``BG``: ``"[g1|...|gn]"`` with group element indices; the vertex is ``"[]"``.
* ``EG``: ``"(h0,...,hn)"``.
* ``K(M, n)`` and ``L(M, n)``: the support of a Dold-Kan element, written
  ``"rho=m;..."`` where ``rho`` lists the values of a surjection and ``m`` the
  element of M (coordinates joined by ``.``); the zero element is ``"0"``.
* twisted products: ``"(x,s)"`` with ``x`` a base id and ``s`` a fiber label.

A twisting cocycle ``t`` satisfies ``t(d0 s) t(d2 s) = t(d1 s)``.  The
twisted product ``X x_t S`` has ``d_i(x, s) = (d_i x, s)`` for ``i > 0`` and
``d_0(x, s) = (d_0 x, t(e01 x) . s)``.  On a principal bundle G acts on the
right through the fiber.  The universal cocycle on BG is ``t([g]) = g^-1``.
"""

from dataclasses import dataclass, field
from itertools import combinations, product as iproduct

from .abelian import FinAb
from .cohomology import TwistingCocycle, h1_nonabelian
from .edgepath import vertex_components, ConnectivityError
from .groups import from_finab
from .simplicial import (FormalSimplex, SMap, SSet, canon_by_operators,
                         product_with_projections, orbit_quotient,
                         sset_from_model, surj_from_repeats)


class BundleError(ValueError):
    pass


# ----------------------------------------------------------------------------
# bar construction


def _bar_id(gs):
    return "[" + "|".join(map(str, gs)) + "]"


def _eg_id(hs):
    return "(" + ",".join(map(str, hs)) + ")"


def _bar_face(G, gs, i):
    n = len(gs)
    if i == 0:
        return gs[1:]
    if i == n:
        return gs[:-1]
    return gs[:i - 1] + (G.mul(gs[i - 1], gs[i]),) + gs[i + 1:]


def _bar_canon(gs):
    n = len(gs)
    reps = {p for p, g in enumerate(gs) if g == 0}
    return surj_from_repeats(reps, n), tuple(g for g in gs if g != 0)


def _eg_canon(hs):
    n = len(hs) - 1
    reps = {j for j in range(n) if hs[j] == hs[j + 1]}
    base = tuple(h for j, h in enumerate(hs) if j == 0 or hs[j - 1] != h)
    return surj_from_repeats(reps, n), base


def classifying_space(G, D):
    """``BG`` truncated at D: nondegenerate n-simplices are n-tuples of non-identity elements."""
    nonid = [g for g in G.elements if g != 0]
    levels = [list(iproduct(nonid, repeat=n)) for n in range(D + 1)]
    return sset_from_model(D, levels, lambda x, i: _bar_face(G, x, i), _bar_canon, key=_bar_id)


def universal_cocycle(BG, G):
    """``t([g]) = g^-1`` on the edges of BG."""
    return TwistingCocycle(BG, G, {_bar_id((g,)): G.inv(g) for g in G.elements if g}, validate=False)


def bar_construction(G, D):
    """``(EG, BG, proj)`` truncated at D, with ``proj(h) = [h0^-1 h1 | ...]``."""
    if D < 1:
        raise ValueError("D must be >= 1")
    BG = classifying_space(G, D)
    levels = [[hs for hs in iproduct(G.elements, repeat=n + 1)
               if all(hs[j] != hs[j + 1] for j in range(n))] for n in range(D + 1)]
    EG = sset_from_model(D, levels, lambda hs, i: hs[:i] + hs[i + 1:], _eg_canon, key=_eg_id)
    images = {}
    for n, lv in enumerate(levels):
        for hs in lv:
            gs = tuple(G.mul(G.inv(hs[j]), hs[j + 1]) for j in range(n))
            images[_eg_id(hs)] = FormalSimplex.nd(_bar_id(gs), n)
    proj = SMap(EG, BG, images, validate=False)
    return EG, BG, proj


def bar_bundle(G, D):
    """``EG -> BG`` as a PrincipalBundle; g acts by ``h -> g^-1 h``."""
    EG, BG, proj = bar_construction(G, D)
    action = []
    for g in G.elements:
        gi = G.inv(g)
        act = {}
        for n in range(D + 1):
            for x in EG.nd[n]:
                hs = tuple(int(t) for t in x[1:-1].split(","))
                act[x] = _eg_id(tuple(G.mul(gi, h) for h in hs))
        action.append(act)
    return PrincipalBundle(EG, BG, proj, G, action)


# ----------------------------------------------------------------------------
# Dold-Kan


def _surjections(q, k):
    """Order-preserving surjections ``[q] -> [k]`` as value tuples (lex order)."""
    out = []
    for jumps in combinations(range(q), k):
        s, v = [0], 0
        for t in range(q):
            if t in jumps:
                v += 1
            s.append(v)
        out.append(tuple(s))
    return out


def _is_surj(f, k):
    return len(set(f)) == k + 1


class _DoldKan:
    """``Gamma(C)`` for C = M in degree n (and M in degree n+1 with d = id if ``path``)."""

    def __init__(self, M, n, path=False):
        self.M = M
        self.orders = tuple(M.factors)
        self.n = n
        self.path = path
        self.degs = (n, n + 1) if path else (n,)

    def index(self, q):
        return [(k, rho) for k in self.degs if k <= q for rho in _surjections(q, k)]

    def add(self, a, b):
        return tuple((x + y) % o for x, y, o in zip(a, b, self.orders))

    def zero(self):
        return tuple(0 for _ in self.orders)

    def apply(self, x, theta, p):
        """``theta^* x`` for ``theta: [p] -> [q]`` (values tuple); x is a dict."""
        out = {}
        for (k, eta), m in x.items():
            f = tuple(eta[t] for t in theta)
            if _is_surj(f, k):
                key = (k, f)
            elif self.path and k == self.n + 1 and 0 not in f and _is_surj(tuple(v - 1 for v in f), self.n):
                # eta theta = delta_0 rho: contributes through d = id
                key = (self.n, tuple(v - 1 for v in f))
            else:
                continue
            out[key] = self.add(out.get(key, self.zero()), m)
        return {k: v for k, v in out.items() if any(v)}

    def face(self, x, i, q):
        return self.apply(x, tuple(t if t < i else t + 1 for t in range(q)), q - 1)

    def degen(self, x, j, q):
        return self.apply(x, tuple(t if t <= j else t - 1 for t in range(q + 2)), q + 1)

    def all(self, q):
        idx = self.index(q)
        els = FinAb.from_orders(self.orders).elements() if self.orders else [()]
        els = [tuple(e) for e in els]
        for combo in iproduct(els, repeat=len(idx)):
            yield {key: m for key, m in zip(idx, combo) if any(m)}

    def nondegenerate(self, x, q):
        for j in range(q):
            if all(eta[j] == eta[j + 1] for (k, eta) in x):
                return False
        return True

    def key(self, x):
        if not x:
            return "0"
        items = sorted(x.items(), key=lambda kv: (kv[0][0], kv[0][1]))
        return ";".join("".join(map(str, eta)) + "=" + ".".join(map(str, m)) for (k, eta), m in items)


def _frozen(x):
    return tuple(sorted(x.items()))


def _dold_kan_space(M, n, D, path=False):
    M = FinAb.parse(M) if isinstance(M, str) else M
    if M.rank:
        raise ValueError("M must be finite")
    DK = _DoldKan(M, n, path)
    levels = []
    for q in range(D + 1):
        levels.append([_frozen(x) for x in DK.all(q) if DK.nondegenerate(x, q)])

    # sset_from_model wants concrete simplices that know their dimension
    levels_c = [[(q, x) for x in lv] for q, lv in enumerate(levels)]

    def cface(z, i):
        q, x = z
        return (q - 1, _frozen(DK.face(dict(x), i, q)))

    def cdegen(z, j):
        q, x = z
        return (q + 1, _frozen(DK.degen(dict(x), j, q)))
    canon0 = canon_by_operators(cface, cdegen)

    def canon(z):
        return canon0(z, z[0])
    return sset_from_model(D, levels_c, cface, canon, key=lambda z: DK.key(dict(z[1]))), DK


def eilenberg_maclane(M, n, D):
    """``K(M, n)`` truncated at D via the Dold-Kan formula."""
    return _dold_kan_space(M, n, D)[0]


def path_object(M, n, D):
    """``(L(M, n), fib)`` with ``fib: L(M, n) -> K(M, n+1)`` the projection."""
    if D < n + 1:
        raise ValueError("D must be >= n + 1")
    L, DK = _dold_kan_space(M, n, D, path=True)
    K, DKK = _dold_kan_space(M, n + 1, D)
    images = {}
    for q in range(D + 1):
        for x in DK.all(q):
            if not DK.nondegenerate(x, q):
                continue
            y = {(k, eta): m for (k, eta), m in x.items() if k == n + 1}
            # canonical form in K(M, n+1)
            reps = [j for j in range(q) if all(eta[j] == eta[j + 1] for (k, eta) in y)]
            b = y
            qq = q
            for j in sorted(reps, reverse=True):
                b = DKK.face(b, j, qq)
                qq -= 1
            images[DK.key(x)] = FormalSimplex(DKK.key(b), surj_from_repeats(set(reps), q))
    return L, SMap(L, K, images, validate=False)


def bar_to_eilenberg_maclane(M, D):
    """Explicit isomorphism ``B(M) -> K(M, 1)``.

    ``[g1|...|gq]`` goes to the element whose component at the surjection
    jumping after position t is ``g_{t+1}``.
    """
    M = FinAb.parse(M) if isinstance(M, str) else M
    G = from_finab(M)
    BG = classifying_space(G, D)
    K, DK = _dold_kan_space(M, 1, D)
    els = [tuple(e) for e in M.elements()]
    images = {}
    for q in range(D + 1):
        for gs in iproduct([g for g in G.elements if g], repeat=q):
            x = {}
            for t, g in enumerate(gs):
                rho = tuple(0 if i <= t else 1 for i in range(q + 1))
                x[(1, rho)] = els[g]
            images[_bar_id(gs)] = FormalSimplex.nd(DK.key(x), q)
    return SMap(BG, K, images, validate=False)


# ----------------------------------------------------------------------------
# twisted products and principal bundles


@dataclass
class GSet:
    """A finite set with a left G-action: ``act[g][s]`` is the index of ``g.s``."""

    G: object
    labels: tuple
    act: list

    @classmethod
    def regular(cls, G):
        return cls(G, tuple(str(g) for g in G.elements),
                   [[G.mul(g, s) for s in G.elements] for g in G.elements])

    @classmethod
    def trivial(cls, G, labels):
        labels = tuple(str(s) for s in labels)
        return cls(G, labels, [list(range(len(labels))) for _ in G.elements])

    @classmethod
    def permutation(cls, G, perms):
        """``perms[g]`` is the permutation tuple of element g."""
        d = len(perms[0])
        return cls(G, tuple(str(i) for i in range(d)), [list(p) for p in perms])

    def __len__(self):
        return len(self.labels)


def _tp_id(x, s):
    return f"({x},{s})"


def edge(X, fs, i, j):
    """The formal edge from vertex i to vertex j of a formal simplex."""
    v = fs
    for k in range(fs.dim, -1, -1):
        if k not in (i, j):
            v = X.face(v, k)
    return v


def twisted_product(X, tau, S=None):
    """``(E, proj)`` for ``E = X x_tau S`` (S defaults to the regular G-set)."""
    G = tau.G
    tau.validate()
    S = GSet.regular(G) if S is None else S
    D = X.dim_cap
    nd = [[_tp_id(x, s) for x in X.nd[n] for s in S.labels] for n in range(D + 1)]
    faces = {}
    images = {}
    for n in range(D + 1):
        for x in X.nd[n]:
            fs = X.simplex(x)
            t = tau.first_edge_value(fs) if n else 0
            for si, s in enumerate(S.labels):
                y = _tp_id(x, s)
                images[y] = fs
                if n:
                    out = []
                    for i, f in enumerate(X.faces[x]):
                        s2 = S.labels[S.act[t][si]] if i == 0 else s
                        out.append(FormalSimplex(_tp_id(f.base, s2), f.surj))
                    faces[y] = tuple(out)
    E = SSet(D, nd, faces, validate=False)
    return E, SMap(E, X, images, validate=False)


def check_unique_lifting(E, X, proj):
    """Every simplex of X has exactly one lift through each vertex over its 0th vertex."""
    over_vertex = {}
    for e in E.nd[0]:
        over_vertex.setdefault(proj(E.simplex(e)).base, []).append(e)
    for n in range(1, min(E.dim_cap, X.dim_cap) + 1):
        lifts = {}
        for y in E.nd[n]:
            img = proj(E.simplex(y))
            if img.is_degenerate:
                return False
            v0 = E.vertices_of(E.simplex(y))[0]
            lifts.setdefault((img.base, v0), []).append(y)
        for x in X.nd[n]:
            v = X.vertices_of(X.simplex(x))[0]
            for e in over_vertex.get(v, []):
                if len(lifts.get((x, e), [])) != 1:
                    return False
    return True


@dataclass
class PrincipalBundle:
    """``E -> X`` with a free right G-action; ``action[g]`` maps nondegenerate ids."""

    E: SSet
    X: SSet
    proj: SMap
    G: object
    action: list = field(repr=False)
    cocycle: object = field(default=None, repr=False)

    def act(self, fs, g):
        return FormalSimplex(self.action[g][fs.base], fs.surj)

    def validate(self):
        E, G = self.E, self.G
        for g in G.elements:
            for x in self.action[g]:
                fs = E.simplex(x)
                if self.proj(self.act(fs, g)) != self.proj(fs):
                    raise BundleError(f"projection is not invariant at {x!r}")
                if g and self.action[g][x] == x:
                    raise BundleError(f"action is not free at {x!r}")
                if E.dim[x]:
                    for i in range(E.dim[x] + 1):
                        if E.face(self.act(fs, g), i) != self.act(E.face(fs, i), g):
                            raise BundleError(f"action does not commute with d_{i} at {x!r}")
        for g in G.elements:
            for h in G.elements:
                gh = G.mul(g, h)
                for x in self.action[0]:
                    if self.action[h][self.action[g][x]] != self.action[gh][x]:
                        raise BundleError("action is not a right action")
        # E/G -> X is an isomorphism
        for n in range(E.dim_cap + 1):
            orbits = {}
            for x in E.nd[n]:
                img = self.proj(E.simplex(x))
                if img.is_degenerate:
                    raise BundleError(f"{x!r} maps to a degenerate simplex")
                orbits.setdefault(img.base, set()).add(min(self.action[g][x] for g in G.elements))
            if set(orbits) != set(self.X.nd[n]) or any(len(o) != 1 for o in orbits.values()):
                raise BundleError(f"E/G -> X is not bijective in degree {n}")
        return True


def principal_bundle(X, tau):
    """``X x_tau G`` with G acting on the right by ``(x, s) g = (x, s g)``."""
    G = tau.G
    E, proj = twisted_product(X, tau)
    action = []
    for g in G.elements:
        act = {}
        for n in range(X.dim_cap + 1):
            for x in X.nd[n]:
                for s in G.elements:
                    act[_tp_id(x, s)] = _tp_id(x, G.mul(s, g))
        action.append(act)
    return PrincipalBundle(E, X, proj, G, action, tau)


def find_bundle_isomorphism(X, G, tau1, tau2):
    """Equivariant isomorphism ``X x_tau1 G -> X x_tau2 G`` over X, or None.

    An equivariant map over X is fixed by its values ``(v, e) -> (v, h_v)``
    on vertices; the search assigns ``h_v`` vertex by vertex and prunes on
    every edge whose endpoints are both assigned.  A hit is checked as a
    simplicial map in all dimensions.
    """
    verts = list(X.nd[0])
    pos = {v: i for i, v in enumerate(verts)}
    edges = X.nd[1] if X.dim_cap >= 1 else ()
    checks = [[] for _ in verts]
    for e in edges:
        u, w = X.faces[e][1].base, X.faces[e][0].base
        checks[max(pos[u], pos[w])].append((e, u, w))
    h = {}

    def ok(i):
        for e, u, w in checks[i]:
            # (e, s) -> (e, h_u s); d0 must match: h_w t1(e) = t2(e) h_u
            if G.mul(h[w], tau1.values[e]) != G.mul(tau2.values[e], h[u]):
                return False
        return True

    def rec(i):
        if i == len(verts):
            return True
        for g in G.elements:
            h[verts[i]] = g
            if ok(i) and rec(i + 1):
                return True
        del h[verts[i]]
        return False

    if not rec(0):
        return None
    B1, B2 = principal_bundle(X, tau1), principal_bundle(X, tau2)
    images = {}
    for n in range(X.dim_cap + 1):
        for x in X.nd[n]:
            v0 = X.vertices_of(X.simplex(x))[0]
            for s in G.elements:
                images[_tp_id(x, s)] = FormalSimplex.nd(_tp_id(x, G.mul(h[v0], s)), n)
    f = SMap(B1.E, B2.E, images)
    if not f.is_isomorphism():
        raise BundleError("equivariant map over X is not an isomorphism")
    return f


def classifying_map(X, tau, BG):
    """``f: X -> BG`` with ``f^* t_univ = tau``: ``x -> [t(e01)^-1 | t(e12)^-1 | ...]``."""
    G = tau.G
    images = {}
    for n in range(X.dim_cap + 1):
        for x in X.nd[n]:
            fs = X.simplex(x)
            gs = tuple(G.inv(tau(edge(X, fs, i, i + 1))) for i in range(n))
            surj, base = _bar_canon(gs)
            images[x] = FormalSimplex(_bar_id(base), surj)
    return SMap(X, BG, images)


def pullback_cocycle(f, tau):
    """``f^* tau`` on the edges of the source of f."""
    X = f.source
    return TwistingCocycle(X, tau.G, {e: tau(f(X.simplex(e))) for e in X.nd[1]})


@dataclass
class BundleClassification:
    """The bijection between gauge classes of cocycles and bundles up to isomorphism."""

    space: SSet
    group: object
    classes: list
    bundles: list
    classifying_maps: list
    n_cocycles: int

    def __len__(self):
        return len(self.classes)


def classify_bundles(X, G, D=None, limit=2_000_000):
    """Principal G-bundles over connected X, one per class of ``H^1(X; G)``.

    Checks that the bundles are pairwise non-isomorphic, that every cocycle
    lies in a listed class, and that each class is the pullback of the
    universal cocycle along its classifying map into ``BG``.
    """
    if len(set(vertex_components(X).values())) != 1:
        raise ConnectivityError("bundle classification needs a connected space")
    H = h1_nonabelian(X, G, "cocycles", limit=limit)
    reps = H.classes
    bundles = [principal_bundle(X, t) for t in reps]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if find_bundle_isomorphism(X, G, reps[i], reps[j]) is not None:
                raise BundleError(f"classes {i} and {j} give isomorphic bundles")
    D = X.dim_cap if D is None else D
    BG = classifying_space(G, max(D, 2))
    tu = universal_cocycle(BG, G)
    maps = []
    for t in reps:
        f = classifying_map(X, t, BG)
        if pullback_cocycle(f, tu) != t:
            raise BundleError("classifying map does not pull back the universal cocycle")
        maps.append(f)
    return BundleClassification(X, G, reps, bundles, maps, len(H.orbit_of))


# ----------------------------------------------------------------------------
# Borel construction


def borel_construction(B, D=None):
    """``(E x EG)/G`` for the diagonal right action, with its map to the base.

    Returns ``(Y, f)`` with ``f: Y -> X`` induced by the bundle projection.
    """
    D = min(B.E.dim_cap, B.X.dim_cap) if D is None else D
    if D > min(B.E.dim_cap, B.X.dim_cap):
        raise ValueError("D exceeds the bundle's dimension cap")
    G = B.G
    EGB = bar_bundle(G, D)
    P, pr1, pr2 = product_with_projections(B.E.truncate(D) if B.E.dim_cap > D else B.E, EGB.E, D)
    comp = {x: (pr1.images[x], pr2.images[x]) for lv in P.nd for x in lv}
    actions = []
    for g in G.generating_set() if G.order > 1 else []:
        act = {}
        for x, (a, b) in comp.items():
            a2, b2 = B.act(a, g), EGB.act(b, g)
            act[x] = f"({a2.format()},{b2.format()})"
        actions.append(act)
    Y, q = orbit_quotient(P, actions)
    images = {}
    for lv in Y.nd:
        for y in lv:
            images[y] = B.proj(comp[y][0])
    return Y, SMap(Y, B.X if B.X.dim_cap <= D else B.X.truncate(D), images, validate=False)
