"""Chains, homology and cohomology of truncated simplicial sets.

Trivial coefficients go through the integral chain complex and the universal
coefficient theorem, with Smith normal form as the only kernel.  Twisted and
tower coefficients use the exact finite-abelian machinery in
:mod:`phk.abelian`, which also supplies induced maps.
"""

from dataclasses import dataclass, field
import numpy as np

from .abelian import FinAb, homology as ab_homology, image, induced_map
from .edgepath import (ConnectivityError, cocycle_values, edge_path_data,
                       vertex_components)
from .groupcoh import validate_action
from .presentations import hom_classes
from .snf import invariant_factors
from .towers import GroupTower, SpaceTower, tower_lim, tower_lim1


class DegreeError(ValueError):
    pass


class CocycleError(ValueError):
    pass


# ----------------------------------------------------------------------------
# chain complexes


@dataclass
class ChainComplexZ:
    """Normalized integral chains: ``boundary[n]`` is ``C_n -> C_{n-1}`` as sparse columns."""

    space: object
    counts: tuple
    boundary: dict = field(repr=False)

    def dense(self, n):
        rows = self.counts[n - 1] if n >= 1 else 0
        cols = self.counts[n] if n < len(self.counts) else 0
        M = np.zeros((rows, cols), dtype=np.int64)
        if n >= 1 and n in self.boundary:
            for j, col in enumerate(self.boundary[n]):
                for i, v in col.items():
                    M[i, j] = v
        return M

    def rank(self, n):
        if n < 1 or n >= len(self.counts) or not self.counts[n] or not self.counts[n - 1]:
            return 0
        return len(invariant_factors((self.boundary[n], self.counts[n - 1])))


def _boundary_columns(X, n):
    idx = {x: i for i, x in enumerate(X.nd[n - 1])}
    cols = []
    for x in X.nd[n]:
        col = {}
        for i, f in enumerate(X.faces[x]):
            if not f.is_degenerate:
                r = idx[f.base]
                col[r] = col.get(r, 0) + (-1) ** i
        cols.append({r: v for r, v in col.items() if v})
    return cols


def chain_complex(X, n_max=None, check=True):
    """Normalized chain complex of X up to degree ``n_max`` (default dim_cap)."""
    n_max = X.dim_cap if n_max is None else min(n_max, X.dim_cap)
    counts = tuple(len(X.nd[n]) for n in range(n_max + 1))
    bd = {n: _boundary_columns(X, n) for n in range(1, n_max + 1)}
    C = ChainComplexZ(X, counts, bd)
    if check:
        for n in range(2, n_max + 1):
            for j, col in enumerate(bd[n]):
                acc = {}
                for i, v in col.items():
                    for r, w in bd[n - 1][i].items():
                        acc[r] = acc.get(r, 0) + v * w
                if any(acc.values()):
                    raise AssertionError(f"boundary squared is nonzero on {X.nd[n][j]!r}")
    return C


def _check_degree(X, n):
    if n < 0 or n > X.dim_cap - 1:
        raise DegreeError(f"degree {n} outside the validated range 0..{X.dim_cap - 1}")


def _torsion(C, n):
    """Invariant factors > 1 of the boundary into degree n, plus its rank."""
    if n + 1 >= len(C.counts) or not C.counts[n + 1] or not C.counts[n]:
        return [], 0
    fac = invariant_factors((C.boundary[n + 1], C.counts[n]))
    return [d for d in fac if d > 1], len(fac)


def integral_homology(X, n_max=None, C=None):
    """``[H_0(X;Z), ..., H_{n_max}(X;Z)]`` for ``n_max <= dim_cap - 1``."""
    n_max = X.dim_cap - 1 if n_max is None else n_max
    _check_degree(X, n_max)
    C = chain_complex(X, n_max + 1, check=False) if C is None else C
    out = []
    ranks = [0] * (n_max + 3)
    tors = [None] * (n_max + 2)
    for n in range(n_max + 1):
        tors[n], ranks[n + 1] = _torsion(C, n)
    for n in range(n_max + 1):
        free = C.counts[n] - ranks[n] - ranks[n + 1]
        out.append(FinAb(tuple(tors[n]), free))
    return out


def _hom(H, m):
    return FinAb.from_orders([m] * H.rank + [np.gcd(d, m) for d in H.factors])


def _ext(H, m):
    return FinAb.from_orders([np.gcd(d, m) for d in H.factors])


def _coeff_orders(M):
    if isinstance(M, int):
        return [M]
    if isinstance(M, FinAb):
        if M.rank:
            raise ValueError("coefficients must be finite")
        return list(M.factors)
    return [int(o) for o in M]


def cohomology(X, M, n):
    """``H^n(X; M)`` for a finite abelian M, by universal coefficients.

    Valid for ``0 <= n <= dim_cap - 1``.
    """
    _check_degree(X, n)
    C = chain_complex(X, n + 1, check=False)
    Hs = integral_homology(X, n, C)
    orders = []
    for m in _coeff_orders(M):
        orders += list(_hom(Hs[n], m).factors)
        if n >= 1:
            orders += list(_ext(Hs[n - 1], m).factors)
    return FinAb.from_orders(orders)


def cohomology_all(X, M, n_max=None):
    n_max = X.dim_cap - 1 if n_max is None else n_max
    _check_degree(X, n_max)
    C = chain_complex(X, n_max + 1, check=False)
    Hs = integral_homology(X, n_max, C)
    out = []
    for n in range(n_max + 1):
        orders = []
        for m in _coeff_orders(M):
            orders += list(_hom(Hs[n], m).factors)
            if n >= 1:
                orders += list(_ext(Hs[n - 1], m).factors)
        out.append(FinAb.from_orders(orders))
    return out


DEFAULT_MODULI = (2, 6, 24, 120)


def homology(X, m, n, moduli=DEFAULT_MODULI):
    """``H_n(X; Z/m)``; for ``m = 0`` a GroupTower over the divisibility chain ``moduli``."""
    _check_degree(X, n)
    if m == 0:
        levels, maps, prev = [], [], None
        for mm in moduli:
            S = homology_data(X, mm, n)
            if prev is not None:
                maps.append(induced_map(np.eye(len(S.orders), dtype=np.int64), S, prev)
                            if prev.cyclic else np.zeros((0, len(S.cyclic)), dtype=np.int64))
            levels.append(S.cyclic)
            prev = S
        # transitions go from level k+1 to level k
        return GroupTower(levels, maps)
    if m < 2:
        raise ValueError("modulus must be >= 2 (or 0 for the tower)")
    Hs = integral_homology(X, n)
    out = list(Hs[n].tensor(m).factors)
    if n >= 1:
        out += list(Hs[n - 1].tor(m).factors)
    return FinAb.from_orders(out)


def homology_data(X, m, n):
    """``H_n(X; Z/m)`` as a Subquotient of the mod-m chains (for induced maps)."""
    _check_degree(X, n)
    C = chain_complex(X, n + 1, check=False)
    orders = [m] * C.counts[n]
    d_out = C.dense(n) if n >= 1 else np.zeros((0, C.counts[0]), dtype=np.int64)
    d_in = C.dense(n + 1)
    out_orders = [m] * (C.counts[n - 1] if n >= 1 else 0)
    return ab_homology(d_in, d_out, orders, orders_out=out_orders)


def cochain_differential(X, n, k=1):
    """``d: C^n -> C^{n+1}`` with k coefficient coordinates per simplex."""
    B = chain_complex(X, n + 1, check=False).dense(n + 1).T
    return np.kron(B, np.eye(k, dtype=np.int64))


def cohomology_data(X, M, n):
    """``H^n(X; M)`` as a Subquotient of the cochains."""
    _check_degree(X, n)
    orders = _coeff_orders(M)
    k = len(orders)
    C = chain_complex(X, n + 1, check=False)
    d_out = np.kron(C.dense(n + 1).T, np.eye(k, dtype=np.int64))
    d_in = np.kron(C.dense(n).T, np.eye(k, dtype=np.int64)) if n >= 1 \
        else np.zeros((C.counts[0] * k, 0), dtype=np.int64)
    return ab_homology(d_in, d_out, orders * C.counts[n],
                       orders_out=orders * (C.counts[n + 1] if n + 1 < len(C.counts) else 0))


def cohomology_unnormalized(X, M, n):
    """Cohomology from cochains on all simplices, degenerate ones included."""
    _check_degree(X, n)
    orders = _coeff_orders(M)
    k = len(orders)
    levels = [X.all_simplices(d) for d in range(n + 2)]
    idx = [{s: i for i, s in enumerate(lv)} for lv in levels]

    def bd(d):
        B = np.zeros((len(levels[d - 1]), len(levels[d])), dtype=np.int64)
        for j, s in enumerate(levels[d]):
            for i in range(d + 1):
                B[idx[d - 1][X.face(s, i)], j] += (-1) ** i
        return B
    d_out = np.kron(bd(n + 1).T, np.eye(k, dtype=np.int64))
    d_in = np.kron(bd(n).T, np.eye(k, dtype=np.int64)) if n >= 1 \
        else np.zeros((len(levels[0]) * k, 0), dtype=np.int64)
    return ab_homology(d_in, d_out, orders * len(levels[n]),
                       orders_out=orders * len(levels[n + 1])).group


# ----------------------------------------------------------------------------
# pi_0


def pi0(X):
    """Connected components, each named by its first vertex in listing order.

    For a SpaceTower returns ``(levels, maps)`` with ``maps[k]`` sending
    components of level k+1 to components of level k.
    """
    if isinstance(X, SpaceTower):
        levels = [pi0(Y) for Y in X.levels]
        maps = []
        for k, f in enumerate(X.maps):
            comp = vertex_components(X.levels[k])
            maps.append({c: comp[f(c).base] for c in levels[k + 1]})
        return levels, maps
    comp = vertex_components(X)
    return [v for v in X.nd[0] if comp[v] == v]


# ----------------------------------------------------------------------------
# twisting cocycles and nonabelian H^1


class TwistingCocycle:
    """G-valued function on nondegenerate edges with ``t(d0 s) t(d2 s) = t(d1 s)``."""

    def __init__(self, X, G, values, validate=True):
        self.X = X
        self.G = G
        edges = X.nd[1] if X.dim_cap >= 1 else ()
        if isinstance(values, dict):
            vals = {e: int(values.get(e, 0)) for e in edges}
        else:
            vals = {e: int(v) for e, v in zip(edges, values)}
        self.values = vals
        if validate:
            self.validate()

    def __call__(self, fs):
        """Value on a formal edge (degenerate edges carry the identity)."""
        if fs.is_degenerate:
            return 0
        return self.values[fs.base]

    def validate(self):
        X, G = self.X, self.G
        for e, g in self.values.items():
            if not 0 <= g < G.order:
                raise CocycleError(f"value of {e!r} out of range")
        if X.dim_cap < 2:
            return
        for s in X.nd[2]:
            d0, d1, d2 = X.faces[s]
            if G.mul(self(d0), self(d2)) != self(d1):
                raise CocycleError(f"cocycle identity fails on {s!r}")

    def as_tuple(self):
        return tuple(self.values[e] for e in (self.X.nd[1] if self.X.dim_cap >= 1 else ()))

    def first_edge_value(self, fs):
        if fs.dim == 0:
            return 0
        return self(self.X.edge01(fs))

    def __eq__(self, other):
        return isinstance(other, TwistingCocycle) and self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return f"TwistingCocycle({self.G.name}, {self.as_tuple()})"


def _edge_order(X):
    """Edges ordered so that 2-simplices close up early during the search."""
    edges = list(X.nd[1]) if X.dim_cap >= 1 else []
    tris = []
    if X.dim_cap >= 2:
        for s in X.nd[2]:
            tris.append({f.base for f in X.faces[s] if not f.is_degenerate})
    order, placed = [], set()
    remaining = list(edges)
    while remaining:
        best = max(remaining, key=lambda e: (sum(1 for t in tris if e in t and len(t - placed) == 1),
                                             sum(1 for t in tris if e in t and t & placed),
                                             -X.index[e]))
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    return order


def enumerate_cocycles(X, G, limit=2_000_000):
    """All twisting cocycles as tuples over ``X.nd[1]`` (lexicographic order)."""
    edges = list(X.nd[1]) if X.dim_cap >= 1 else []
    pos = {e: i for i, e in enumerate(edges)}
    order = _edge_order(X)
    step = {e: i for i, e in enumerate(order)}
    checks = [[] for _ in order]
    if X.dim_cap >= 2:
        for s in X.nd[2]:
            d0, d1, d2 = X.faces[s]
            terms = [None if f.is_degenerate else f.base for f in (d0, d1, d2)]
            live = [t for t in terms if t is not None]
            last = max(step[t] for t in live) if live else None
            if last is None:
                continue
            checks[last].append(terms)
    vals = [0] * len(edges)
    out = []

    def val(t):
        return 0 if t is None else vals[pos[t]]

    def rec(i):
        if i == len(order):
            out.append(tuple(vals))
            if len(out) > limit:
                raise CocycleError(f"more than {limit} cocycles; enumeration bound exceeded")
            return
        p = pos[order[i]]
        for g in G.elements:
            vals[p] = g
            if all(G.mul(val(a), val(c)) == val(b) for a, b, c in checks[i]):
                rec(i + 1)
        vals[p] = 0

    rec(0)
    out.sort()
    return out


def gauge(X, G, tau, g):
    """``t'(e) = g(d0 e) t(e) g(d1 e)^-1`` on a cocycle tuple."""
    edges = X.nd[1] if X.dim_cap >= 1 else ()
    out = []
    for e, t in zip(edges, tau):
        u, w = X.faces[e][1].base, X.faces[e][0].base
        out.append(G.prod([g[w], t, G.inv(g[u])]))
    return tuple(out)


def gauge_orbits(X, G, cocycles):
    """Partition cocycles into gauge classes; returns a list of sorted orbits."""
    index = {c: i for i, c in enumerate(cocycles)}
    verts = X.nd[0]
    gens = [a for a in G.generating_set()] if G.order > 1 else []
    moves = []
    for v in verts:
        for a in gens:
            g = {w: 0 for w in verts}
            g[v] = a
            moves.append(g)
    seen = [False] * len(cocycles)
    orbits = []
    for i, c in enumerate(cocycles):
        if seen[i]:
            continue
        seen[i] = True
        orb = [c]
        stack = [c]
        while stack:
            x = stack.pop()
            for g in moves:
                y = gauge(X, G, x, g)
                j = index.get(y)
                if j is None:
                    raise CocycleError("gauge transform left the cocycle set")
                if not seen[j]:
                    seen[j] = True
                    orb.append(y)
                    stack.append(y)
        orbits.append(sorted(orb))
    return orbits


@dataclass
class H1Classes:
    """Pointed set of gauge classes; ``classes[0]`` is the trivial class."""

    space: object
    group: object
    classes: list
    method: str
    orbit_of: dict = field(default=None, repr=False)

    def __len__(self):
        return len(self.classes)


def h1_nonabelian(X, G, method="cocycles", basepoint=None, limit=2_000_000):
    """``H^1(X; G)`` as gauge classes of twisting cocycles.

    ``method="cocycles"`` enumerates every cocycle and splits into gauge
    orbits.  ``method="presentation"`` lists homomorphisms from the edge-path
    group modulo conjugation (connected X only).  Both return one
    representative TwistingCocycle per class.
    """
    if method == "cocycles":
        cocycles = enumerate_cocycles(X, G, limit)
        orbits = gauge_orbits(X, G, cocycles)
        triv = tuple(0 for _ in (X.nd[1] if X.dim_cap >= 1 else ()))
        orbits.sort(key=lambda o: (triv not in o, o[0]))
        orbit_of = {c: i for i, o in enumerate(orbits) for c in o}
        reps = [TwistingCocycle(X, G, o[0], validate=False) for o in orbits]
        return H1Classes(X, G, reps, method, orbit_of)
    if method == "presentation":
        comps = pi0(X)
        if len(comps) != 1:
            raise ConnectivityError("presentation method needs a connected space; "
                                    "compute per component instead")
        data = edge_path_data(X, basepoint)
        reps = []
        for imgs in hom_classes(data.presentation, G):
            vals = cocycle_values(data, G, imgs)
            reps.append(TwistingCocycle(X, G, vals, validate=False))
        reps.sort(key=lambda t: (any(t.as_tuple()), t.as_tuple()))
        return H1Classes(X, G, reps, method)
    raise ValueError(f"unknown method {method!r}")


# ----------------------------------------------------------------------------
# local systems and twisted cohomology


@dataclass
class LocalSystem:
    """A finite quotient ``q: pi_1 -> Q`` with a Q-module M.

    ``images`` are the values of q on the edge-path generators of the base
    space at ``basepoint``; ``action[g]`` is the coordinate matrix of g on M.
    """

    Q: object
    images: tuple
    orders: tuple
    action: list
    basepoint: object = None

    @classmethod
    def from_epi(cls, epi, M, action=None, basepoint=None):
        orders = tuple(_coeff_orders(M))
        if action is None:
            action = [np.eye(len(orders), dtype=np.int64) for _ in epi.target.elements]
        return cls(epi.target, tuple(epi.images), orders, list(action), basepoint)

    def cocycle(self, X):
        data = edge_path_data(X, self.basepoint)
        if len(self.images) != len(data.generators):
            raise CocycleError("quotient does not match the edge-path presentation of the space")
        return TwistingCocycle(X, self.Q, cocycle_values(data, self.Q, self.images))


def twisted_differential(X, tau, orders, action, n):
    """``d: C^n -> C^{n+1}`` on equivariant cochains of the cover ``X x_tau Q``.

    ``(dF)(x) = rho(t(x))^{-1} F(d_0 x) + sum_{i>=1} (-1)^i F(d_i x)`` with
    ``t(x)`` the cocycle on the first edge of x.
    """
    k = len(orders)
    src = {x: i for i, x in enumerate(X.nd[n])}
    rows = X.nd[n + 1] if n + 1 <= X.dim_cap else ()
    D = np.zeros((len(rows) * k, len(src) * k), dtype=np.int64)
    G = tau.G
    for r, x in enumerate(rows):
        fs = X.simplex(x)
        for i, f in enumerate(X.faces[x]):
            if f.is_degenerate:
                continue
            c = src[f.base]
            if i == 0:
                t = tau.first_edge_value(fs)
                block = np.asarray(action[G.inv(t)], dtype=np.int64)
            else:
                block = (-1) ** i * np.eye(k, dtype=np.int64)
            D[r * k:(r + 1) * k, c * k:(c + 1) * k] += block
    return D


def twisted_cohomology_data(X, L, n, tau=None):
    _check_degree(X, n)
    if len(L.action) != L.Q.order:
        raise CocycleError("action must list one matrix per element of the quotient")
    validate_action(L.Q, list(L.orders), L.action)
    if len(pi0(X)) != 1:
        raise ConnectivityError("twisted cohomology needs a connected space")
    tau = L.cocycle(X) if tau is None else tau
    orders = list(L.orders)
    d_out = twisted_differential(X, tau, orders, L.action, n)
    d_in = twisted_differential(X, tau, orders, L.action, n - 1) if n >= 1 \
        else np.zeros((len(X.nd[0]) * len(orders), 0), dtype=np.int64)
    nxt = len(X.nd[n + 1]) if n + 1 <= X.dim_cap else 0
    return ab_homology(d_in, d_out, orders * len(X.nd[n]), orders_out=orders * nxt)


def twisted_cohomology(X, L, n):
    """``H^n(X; M)`` with coefficients twisted through a finite quotient of pi_1."""
    return twisted_cohomology_data(X, L, n).group


# ----------------------------------------------------------------------------
# tower coefficients


@dataclass
class ProfiniteCohomology:
    tower: GroupTower
    lim: object
    lim1: FinAb

    def __str__(self):
        return f"{self.lim}; lim^1 = {self.lim1}"


def profinite_cohomology(X, T, n):
    """``H^n(X; lim M_k)`` from the tower ``{H^n(X; M_k)}``, its limit and lim^1."""
    _check_degree(X, n)
    data = [cohomology_data(X, list(T.levels[k]), n) for k in range(len(T))]
    ncells = len(X.nd[n])
    maps = []
    for k in range(len(T) - 1):
        F = np.kron(np.eye(ncells, dtype=np.int64), T.maps[k])
        if data[k].cyclic:
            maps.append(induced_map(F, data[k + 1], data[k]))
        else:
            maps.append(np.zeros((0, len(data[k + 1].cyclic)), dtype=np.int64))
    H = GroupTower([S.cyclic for S in data], maps)
    return ProfiniteCohomology(H, tower_lim(H), tower_lim1(H))


# ----------------------------------------------------------------------------
# induced maps


def cochain_pullback(f, n, k=1):
    """Matrix of ``f^*: C^n(Y) -> C^n(X)`` for ``f: X -> Y`` (k coordinates per simplex)."""
    X, Y = f.source, f.target
    cols = {y: j for j, y in enumerate(Y.nd[n])}
    P = np.zeros((len(X.nd[n]) * k, len(Y.nd[n]) * k), dtype=np.int64)
    for i, x in enumerate(X.nd[n]):
        img = f(X.simplex(x))
        if not img.is_degenerate:
            j = cols[img.base]
            P[i * k:(i + 1) * k, j * k:(j + 1) * k] = np.eye(k, dtype=np.int64)
    return P


def is_bijective(F, src, dst):
    """Whether the map induced by F between two Subquotients is bijective."""
    if src.order != dst.order:
        return False
    if not dst.cyclic:
        return True
    M = induced_map(F, src, dst)
    return image(M, dst.cyclic).order == dst.order
