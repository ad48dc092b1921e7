"""Finite groups as multiplication tables, and a catalogue of small groups.

Elements are ``0..n-1`` with ``0`` the identity.  The catalogue holds one
representative per isomorphism class for every order up to 16, built from
cyclic groups, direct products, dihedral and dicyclic groups and semidirect
products, deduplicated by invariants with an exhaustive isomorphism search as
the tie breaker.
"""

import json
import os
from functools import lru_cache
from itertools import permutations, product as iproduct

import numpy as np

CATALOGUE_MAX = 16


class GroupError(ValueError):
    pass


class FiniteGroup:
    """Group given by its multiplication table ``table[a, b] = a*b``."""

    def __init__(self, table, name=None, validate=True):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError("multiplication table must be a nonempty square grid")
        self.table = t
        self.table.setflags(write=False)
        self.order = t.shape[0]
        self.name = name or f"G{self.order}"
        if validate:
            self.validate()
        self.inverse = np.array([int(np.nonzero(t[a] == 0)[0][0]) for a in range(self.order)],
                                dtype=np.int64)
        self._rows = [tuple(int(x) for x in row) for row in t]

    def validate(self):
        t, n = self.table, self.order
        if np.any(t < 0) or np.any(t >= n):
            raise GroupError("table entries out of range")
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise GroupError("element 0 is not the identity")
        for a in range(n):
            if len(set(t[a].tolist())) != n or len(set(t[:, a].tolist())) != n:
                raise GroupError("table is not a Latin square")
        # (ab)c = a(bc)
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise GroupError("multiplication is not associative")

    # -- arithmetic ---------------------------------------------------------
    def mul(self, a, b):
        return self._rows[a][b]

    def inv(self, a):
        return int(self.inverse[a])

    def prod(self, seq):
        x = 0
        for a in seq:
            x = self._rows[x][a]
        return x

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        x = 0
        for _ in range(k):
            x = self._rows[x][a]
        return x

    def conj(self, g, a):
        """``g a g^-1``."""
        return self._rows[self._rows[g][a]][self.inv(g)]

    def element_order(self, a):
        k, x = 1, a
        while x != 0:
            x = self._rows[x][a]
            k += 1
        return k

    @property
    def elements(self):
        return range(self.order)

    # -- structure ------------------------------------------------------------
    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    def is_cyclic(self):
        return any(self.element_order(a) == self.order for a in self.elements)

    def generated(self, gens):
        """Sorted elements of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self._rows[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def generating_set(self):
        """A small generating set: greedily add elements of largest order."""
        gens, H = [], {0}
        by_order = sorted(self.elements, key=lambda a: (-self.element_order(a), a))
        while len(H) < self.order:
            a = next(a for a in by_order if a not in H)
            gens.append(a)
            H = set(self.generated(gens))
        return gens

    def center(self):
        return [a for a in self.elements if all(self._rows[a][b] == self._rows[b][a] for b in self.elements)]

    def centralizer_size(self, a):
        return sum(1 for b in self.elements if self._rows[a][b] == self._rows[b][a])

    def commutator_subgroup(self):
        comms = {self.prod([a, b, self.inv(a), self.inv(b)]) for a in self.elements for b in self.elements}
        return self.generated(comms)

    def conjugacy_classes(self):
        seen, out = set(), []
        for a in self.elements:
            if a in seen:
                continue
            cl = sorted({self.conj(g, a) for g in self.elements})
            seen.update(cl)
            out.append(cl)
        return out

    def subgroups(self):
        """All subgroups as sorted tuples, ordered by size then elements."""
        subs = {tuple(self.generated([a])) for a in self.elements}
        frontier = set(subs)
        while frontier:
            new = set()
            for H in frontier:
                for a in self.elements:
                    if a not in H:
                        K = tuple(self.generated(list(H) + [a]))
                        if K not in subs:
                            new.add(K)
            subs |= new
            frontier = new
        return sorted(subs, key=lambda H: (len(H), H))

    def invariants(self):
        stats = sorted((self.element_order(a), self.centralizer_size(a)) for a in self.elements)
        return (self.order, tuple(stats), len(self.commutator_subgroup()), len(self.center()))

    # -- homomorphisms ----------------------------------------------------------
    def extend_hom(self, gens, images, target):
        """Extend ``gens[i] -> images[i]`` to a homomorphism, or return None."""
        f = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                fx = f[x]
                for g, h in zip(gens, images):
                    y = self._rows[x][g]
                    fy = target._rows[fx][h]
                    if y in f:
                        if f[y] != fy:
                            return None
                    else:
                        f[y] = fy
                        nxt.append(y)
            frontier = nxt
        if len(f) != self.order:
            return None
        return [f[a] for a in self.elements]

    def automorphisms(self):
        """All automorphisms as tuples ``a -> phi(a)``."""
        gens = self.generating_set()
        cands = [[b for b in self.elements if self.element_order(b) == self.element_order(g)]
                 for g in gens]
        out = []
        for imgs in iproduct(*cands):
            f = self.extend_hom(gens, imgs, self)
            if f is not None and len(set(f)) == self.order:
                out.append(tuple(f))
        return out

    def to_text(self):
        return "\n".join(" ".join(str(int(x)) for x in row) for row in self.table) + "\n"

    @classmethod
    def from_text(cls, text, name=None):
        rows = [line.split() for line in text.strip().splitlines() if line.strip()]
        try:
            t = [[int(x) for x in r] for r in rows]
        except ValueError as exc:
            raise GroupError(f"bad multiplication table: {exc}") from None
        if any(len(r) != len(t) for r in t):
            raise GroupError("multiplication table must be square")
        return cls(t, name=name)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def is_isomorphic(A, B):
    if A.invariants() != B.invariants():
        return False
    return find_isomorphism(A, B) is not None


def find_isomorphism(A, B):
    """An isomorphism ``A -> B`` as a list, or None."""
    if A.order != B.order:
        return None
    gens = A.generating_set()
    cands = [[b for b in B.elements if B.element_order(b) == A.element_order(g)] for g in gens]
    for imgs in iproduct(*cands):
        f = A.extend_hom(gens, imgs, B)
        if f is not None and len(set(f)) == A.order:
            return f
    return None


# ----------------------------------------------------------------------------
# constructions


def from_elements(elements, mul, name=None):
    """Group on an explicit element list (identity first)."""
    idx = {e: i for i, e in enumerate(elements)}
    t = [[idx[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroup(t, name=name, validate=False)


def cyclic(n):
    return from_elements(list(range(n)), lambda a, b: (a + b) % n, name=f"C{n}")


def direct_product(A, B, name=None):
    els = [(a, b) for a in A.elements for b in B.elements]
    return from_elements(els, lambda x, y: (A.mul(x[0], y[0]), B.mul(x[1], y[1])),
                         name=name or f"{A.name}x{B.name}")


def semidirect(N, H, phi, name=None):
    """``N x| H`` with ``phi[h]`` the automorphism of N (as a tuple) for h."""
    els = [(a, h) for a in N.elements for h in H.elements]
    return from_elements(els, lambda x, y: (N.mul(x[0], phi[x[1]][y[0]]), H.mul(x[1], y[1])),
                         name=name or f"{N.name}:{H.name}")


def cyclic_semidirect(m, k, r, name=None):
    """``C_m x| C_k`` where the generator of C_k acts by ``x -> r x``."""
    phi = [tuple((pow(r, h, m) * a) % m for a in range(m)) for h in range(k)]
    special = {(8, 2, 3): "SD16", (8, 2, 5): "M16"}
    return semidirect(cyclic(m), cyclic(k), phi,
                      name=name or special.get((m, k, r), f"C{m}:C{k}"))


def dihedral(m):
    """Symmetries of the m-gon, order 2m."""
    name = "S3" if m == 3 else f"D{m}"
    return cyclic_semidirect(m, 2, m - 1, name=name)


def dicyclic(k):
    """``<a, x | a^2k, x^2 = a^k, x^-1 a x = a^-1>`` of order 4k."""
    n = 2 * k
    els = [(i, j) for j in range(2) for i in range(n)]

    def mul(x, y):
        (i1, j1), (i2, j2) = x, y
        if j1 == 0:
            return ((i1 + i2) % n, j2)
        # a^i1 x a^i2 x^j2 = a^(i1 - i2) x^(1 + j2)
        if j2 == 0:
            return ((i1 - i2) % n, 1)
        return ((i1 - i2 + k) % n, 0)
    name = {2: "Q8", 4: "Q16"}.get(k, f"Dic{k}")
    return from_elements(els, mul, name=name)


def symmetric(d):
    """Symmetric group on ``{0..d-1}``; elements are permutations in lex order."""
    els = list(permutations(range(d)))
    # (p*q)(i) = p(q(i))
    return from_elements(els, lambda p, q: tuple(p[i] for i in q), name=f"S{d}")


def from_permutations(gens, name=None):
    """Permutation group generated by tuples acting on ``{0..d-1}``."""
    d = len(gens[0])
    e = tuple(range(d))
    els = [e]
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[i] for i in g)
                if y not in seen:
                    seen.add(y)
                    els.append(y)
                    nxt.append(y)
        frontier = nxt
    return from_elements(els, lambda p, q: tuple(p[i] for i in q), name=name)


def permutation_elements(d):
    return list(permutations(range(d)))


def from_finab(M):
    """The abelian group ``M`` as a FiniteGroup on ``M.elements()``."""
    orders = M.factors
    els = M.elements()
    return from_elements(els, lambda x, y: tuple((a + b) % o for a, b, o in zip(x, y, orders)),
                         name=str(M).replace(" ", ""))


# ----------------------------------------------------------------------------
# catalogue


def _candidates(n, known):
    yield cyclic(n)
    for a in range(2, n):
        if n % a == 0 and a <= n // a:
            for A in known.get(a, []):
                for B in known.get(n // a, []):
                    if a == n // a and B.name < A.name:
                        continue
                    yield direct_product(A, B)
    if n % 2 == 0 and n >= 6:
        yield dihedral(n // 2)
    if n % 4 == 0 and n >= 8:
        yield dicyclic(n // 4)
    for m in range(3, n):
        if n % m == 0:
            k = n // m
            for r in range(2, m):
                if pow(r, k, m) == 1 and np.gcd(r, m) == 1:
                    yield cyclic_semidirect(m, k, r)
    for p in (2, 3, 5, 7):
        if n % p or n == p:
            continue
        for N in known.get(n // p, []):
            if N.order > 8:
                continue
            for aut in N.automorphisms():
                # element of order p in Aut(N)
                powers = [tuple(range(N.order))]
                for _ in range(p - 1):
                    powers.append(tuple(aut[x] for x in powers[-1]))
                if powers[1] == powers[0]:
                    continue
                if tuple(aut[x] for x in powers[-1]) != powers[0]:
                    continue
                name = "A4" if (n == 12 and p == 3) else None
                yield semidirect(N, cyclic(p), powers, name=name or f"({N.name}):C{p}")


def _build(N):
    known = {}
    for n in range(1, N + 1):
        found, invs = [], []
        for G in _candidates(n, known):
            inv = G.invariants()
            if any(inv == i and find_isomorphism(G, H) is not None for H, i in zip(found, invs)):
                continue
            if G.name == "(C2xC4):C2" and any(G.element_order(z) == 4 for z in G.center()):
                G.name = "C4oD4"  # central product, the Pauli group
            found.append(G)
            invs.append(inv)
        known[n] = found
    return known


@lru_cache(maxsize=None)
def catalogue(N=CATALOGUE_MAX):
    """All groups of order ``<= N`` up to isomorphism, sorted by order.

    Honors ``PHK_CATALOGUE_DIR`` as a cache directory for the tables.
    """
    if N > CATALOGUE_MAX:
        raise GroupError(f"catalogue bound {N} exceeds the supported maximum {CATALOGUE_MAX}")
    cache_dir = os.environ.get("PHK_CATALOGUE_DIR")
    path = os.path.join(cache_dir, f"catalogue_{CATALOGUE_MAX}.json") if cache_dir else None
    if path and os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        groups = [FiniteGroup(d["table"], name=d["name"], validate=False) for d in data]
    else:
        known = _build(CATALOGUE_MAX)
        groups = [G for n in sorted(known) for G in known[n]]
        if path:
            os.makedirs(cache_dir, exist_ok=True)
            with open(path, "w") as fh:
                json.dump([{"name": G.name, "table": G.table.tolist()} for G in groups], fh)
    return tuple(G for G in groups if G.order <= N)


def group_by_name(name):
    """Look up ``C4``, ``Z4``, ``S3``, ``Q8``, ``S4`` ... ."""
    key = name.strip()
    if key.startswith("Z") and key[1:].isdigit():
        key = "C" + key[1:]
    if key.startswith("S") and key[1:].isdigit() and int(key[1:]) >= 4:
        return symmetric(int(key[1:]))
    if key.startswith("C") and key[1:].isdigit():
        return cyclic(int(key[1:]))
    for G in catalogue():
        if G.name == key:
            return G
    raise GroupError(f"unknown group {name!r}")
