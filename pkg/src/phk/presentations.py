"""Finitely presented groups, their abelianization and finite quotients.

Words are tuples of nonzero integers: ``i + 1`` is generator ``i`` and
``-(i + 1)`` its inverse.  A relator ``w`` means the product of its letters,
read left to right, is the identity.
"""

import hashlib
import heapq
import re
from collections import Counter
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np

from .abelian import FinAb
from .groups import catalogue, CATALOGUE_MAX, GroupError
from .snf import invariant_factors

_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_LETTER_RE = re.compile(r"([A-Za-z])(?:\^(-?\d+))?")
_WORD_RE = re.compile(r"(?:[A-Za-z](?:\^-?\d+)?)+")


def free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w):
    w = list(free_reduce(w))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert(w):
    return tuple(-x for x in reversed(w))


def _gen_name(i):
    return _LETTERS[i] if i < len(_LETTERS) else f"x{i}"


@dataclass(frozen=True)
class Presentation:
    """``<x_0, ..., x_{n-1} | relators>``."""

    ngens: int
    relators: tuple = ()

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relators)
        for r in rels:
            for x in r:
                if x == 0 or abs(x) > self.ngens:
                    raise ValueError(f"letter {x} out of range in relator {r}")
        object.__setattr__(self, "relators", rels)

    @classmethod
    def parse(cls, text):
        """Parse ``"a,b | aba^-1b^-1, a^2"`` (generator names are single letters)."""
        if "|" in text:
            gens_part, rels_part = text.split("|", 1)
        else:
            gens_part, rels_part = text, ""
        gens_part = gens_part.strip().strip("<>").strip()
        rels_part = rels_part.strip().strip("<>").strip()
        if gens_part.isdigit():
            names = [_gen_name(i) for i in range(int(gens_part))]
        else:
            names = [g.strip() for g in gens_part.split(",") if g.strip()]
        idx = {g: i for i, g in enumerate(names)}
        rels = []
        for pos, rtxt in enumerate(r for r in rels_part.split(",")):
            rtxt = rtxt.replace(" ", "")
            if not rtxt or rtxt == "1":
                continue
            if not _WORD_RE.fullmatch(rtxt):
                raise ValueError(f"cannot parse relator {pos + 1}: {rtxt!r}")
            word = []
            for m in _LETTER_RE.finditer(rtxt):
                g, e = m.group(1), m.group(2)
                if g not in idx:
                    raise ValueError(f"unknown generator {g!r} in relator {pos + 1}")
                e = int(e) if e else 1
                letter = idx[g] + 1
                word += [letter if e > 0 else -letter] * abs(e)
            rels.append(tuple(word))
        return cls(len(names), tuple(rels))

    def format(self):
        def fmt(w):
            out, i = [], 0
            while i < len(w):
                j = i
                while j < len(w) and w[j] == w[i]:
                    j += 1
                k = j - i
                g = _gen_name(abs(w[i]) - 1)
                e = k if w[i] > 0 else -k
                out.append(g if e == 1 else f"{g}^{e}")
                i = j
            return "".join(out) or "1"
        gens = ",".join(_gen_name(i) for i in range(self.ngens))
        return f"<{gens} | {', '.join(fmt(r) for r in self.relators)}>"

    def __str__(self):
        return self.format()

    def exponent_matrix(self):
        M = np.zeros((len(self.relators), self.ngens), dtype=object)
        for i, r in enumerate(self.relators):
            for x in r:
                M[i, abs(x) - 1] += 1 if x > 0 else -1
        return M


def abelianization(P):
    """Abelianization of ``P`` as a FinAb with free rank."""
    M = P.exponent_matrix()
    if M.size == 0:
        return FinAb((), P.ngens)
    fac = invariant_factors(M)
    return FinAb(tuple(d for d in fac if d > 1), P.ngens - len(fac))


# ----------------------------------------------------------------------------
# Tietze simplification


def _substitute(w, g, repl):
    out = []
    rinv = invert(repl)
    for x in w:
        if x == g:
            out.extend(repl)
        elif x == -g:
            out.extend(rinv)
        else:
            out.append(x)
    return free_reduce(out)


@lru_cache(maxsize=64)
def simplify(P):
    """Eliminate generators that occur exactly once in some relator.

    The shortest such relator (earliest on ties, then lowest generator) is
    used at each step.  Returns ``(Q, expr)`` where ``Q`` is an isomorphic
    presentation and ``expr[i]`` writes the i-th original generator as a word
    in ``Q``.
    """
    rels = {}
    for r in P.relators:
        r = cyclic_reduce(r)
        if r:
            rels[len(rels)] = r
    occ = {g: set() for g in range(1, P.ngens + 1)}
    for ri, r in rels.items():
        for x in r:
            occ[abs(x)].add(ri)
    heap = [(len(r), ri) for ri, r in rels.items()]
    heapq.heapify(heap)
    expr = {i + 1: (i + 1,) for i in range(P.ngens)}
    alive = set(range(1, P.ngens + 1))
    while heap:
        n, ri = heapq.heappop(heap)
        r = rels.get(ri)
        if r is None or len(r) != n:
            continue
        counts = Counter(abs(x) for x in r)
        single = [g for g, c in counts.items() if c == 1]
        if not single:
            continue
        g = min(single)
        k = next(k for k, x in enumerate(r) if abs(x) == g)
        u, x, v = r[:k], r[k], r[k + 1:]
        # u x v = 1  =>  x = u^-1 v^-1
        sol = free_reduce(invert(u) + invert(v))
        if x < 0:
            sol = invert(sol)
        del rels[ri]
        for y in counts:
            occ[y].discard(ri)
        alive.discard(g)
        for rj in sorted(occ.pop(g)):
            old = rels[rj]
            w = cyclic_reduce(_substitute(old, g, sol))
            for y in set(abs(t) for t in old):
                if y in occ:
                    occ[y].discard(rj)
            if not w:
                del rels[rj]
                continue
            rels[rj] = w
            for y in w:
                occ[abs(y)].add(rj)
            heapq.heappush(heap, (len(w), rj))
        for i in expr:
            expr[i] = _substitute(expr[i], g, sol)
    rels = [rels[ri] for ri in sorted(rels)]
    keep = sorted(alive)
    ren = {g: i + 1 for i, g in enumerate(keep)}

    def rn(w):
        return tuple(ren[abs(x)] if x > 0 else -ren[abs(x)] for x in w)
    seen, out = set(), []
    for r in rels:
        rr = rn(r)
        if rr not in seen:
            seen.add(rr)
            out.append(rr)
    Q = Presentation(len(keep), tuple(out))
    return Q, tuple(rn(expr[i + 1]) for i in range(P.ngens))


# ----------------------------------------------------------------------------
# homomorphisms into finite groups


def eval_word(G, w, images):
    x = 0
    for a in w:
        g = images[abs(a) - 1]
        x = G.mul(x, g if a > 0 else G.inv(g))
    return x


def homomorphisms(P, G):
    """All homomorphisms ``P -> G`` as tuples of generator images (lex order)."""
    n = P.ngens
    checks = [[] for _ in range(n)]
    for r in P.relators:
        if r:
            checks[max(abs(x) for x in r) - 1].append(r)
    out = []
    imgs = [0] * n

    def rec(i):
        if i == n:
            out.append(tuple(imgs))
            return
        for g in G.elements:
            imgs[i] = g
            if all(eval_word(G, r, imgs) == 0 for r in checks[i]):
                rec(i + 1)
        imgs[i] = 0

    rec(0)
    return out


def _generates(G, imgs):
    return len(G.generated(imgs)) == G.order


def coset_table(G, imgs):
    """Canonical coset table of the kernel of the epimorphism given by ``imgs``.

    Rows follow the breadth-first labelling of the regular right action
    starting at the identity; equal tables mean equal kernels.
    """
    label = {0: 0}
    order = [0]
    rows = []
    i = 0
    while i < len(order):
        q = order[i]
        row = []
        for g in imgs:
            y = G.mul(q, g)
            if y not in label:
                label[y] = len(order)
                order.append(y)
            row.append(label[y])
        rows.append(tuple(row))
        i += 1
    return tuple(rows)


@dataclass(frozen=True)
class EpiClass:
    """An epimorphism onto a catalogue group, identified by its kernel."""

    target: object = field(compare=False)
    images: tuple = field(compare=False)
    fingerprint: tuple = ()

    @property
    def order(self):
        return self.target.order

    @property
    def index(self):
        return self.target.order

    @property
    def name(self):
        return self.target.name

    def fingerprint_hex(self):
        return hashlib.sha256(repr(self.fingerprint).encode()).hexdigest()[:16]

    def factors_through(self, other):
        """True if ``ker(other) <= ker(self)``, i.e. self factors through other."""
        gens = list(other.images)
        f = other.target.extend_hom(gens, list(self.images), self.target) if gens else [0]
        if f is None:
            return False
        return all(f[a] == b for a, b in zip(other.images, self.images))

    def __repr__(self):
        return f"EpiClass({self.name}, images={self.images})"


def _check_bound(N):
    if N < 1:
        raise ValueError("order bound must be >= 1")
    if N > CATALOGUE_MAX:
        raise GroupError(f"order bound {N} exceeds the catalogue bound {CATALOGUE_MAX}")


def enumerate_finite_quotients(P, N, simplify_first=True):
    """One EpiClass per normal subgroup of index ``<= N``, sorted deterministically.

    The search runs on a Tietze-simplified presentation; images reported are
    those of the original generators.
    """
    _check_bound(N)
    Q, expr = simplify(P) if simplify_first else (P, [(i + 1,) for i in range(P.ngens)])
    seen = set()
    out = []
    for G in catalogue(N):
        for imgs in homomorphisms(Q, G):
            if not _generates(G, imgs):
                continue
            full = tuple(eval_word(G, w, imgs) for w in expr)
            fp = coset_table(G, full)
            if fp in seen:
                continue
            seen.add(fp)
            out.append(EpiClass(G, full, fp))
    cat_index = {id(G): i for i, G in enumerate(catalogue(N))}
    out.sort(key=lambda e: (e.order, cat_index[id(e.target)], e.fingerprint))
    return out


def hom_classes(P, G, simplify_first=True):
    """Homomorphisms ``P -> G`` modulo conjugation in G.

    Returns sorted canonical representatives (the lexicographically least tuple
    of original-generator images in each conjugacy orbit).
    """
    Q, expr = simplify(P) if simplify_first else (P, [(i + 1,) for i in range(P.ngens)])
    reps = set()
    for imgs in homomorphisms(Q, G):
        full = tuple(eval_word(G, w, imgs) for w in expr)
        reps.add(min(tuple(G.conj(g, a) for a in full) for g in G.elements))
    return sorted(reps)
