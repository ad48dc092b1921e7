"""Finite abelian groups and exact linear algebra over them.

A finite abelian group is described by :class:`FinAb` (invariant factors and a
free rank).  Concrete computations happen in an *ambient* group
``Z/o_1 + ... + Z/o_k`` whose elements are integer vectors.  Homomorphisms are
integer matrices acting on those vectors.  Kernels, images and subquotients
are computed one prime at a time over the local rings ``Z/p^a``, where the
pivot of smallest p-adic valuation always divides the rest of its row and
column, so elimination never needs a Euclidean step.
"""

from dataclasses import dataclass
from functools import reduce
from math import gcd

import numpy as np

_QMAX = 1 << 20


def factorize(n):
    """Prime factorization as a sorted list of ``(p, e)`` pairs."""
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def vp(n, p):
    """p-adic valuation of a positive integer."""
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass(frozen=True)
class FinAb:
    """Finitely generated abelian group ``Z^rank + Z/d_1 + ... + Z/d_k``.

    ``factors`` satisfy ``d_1 | d_2 | ... | d_k`` and ``d_i >= 2``.
    """

    factors: tuple = ()
    rank: int = 0

    def __post_init__(self):
        f = tuple(int(d) for d in self.factors)
        if any(d < 2 for d in f):
            raise ValueError(f"invariant factors must be >= 2, got {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"not a divisibility chain: {f}")
        object.__setattr__(self, "factors", f)

    @classmethod
    def from_orders(cls, orders, rank=0):
        """Canonical form of ``Z/o_1 + ... + Z/o_k`` (orders in any order)."""
        primary = {}
        for o in orders:
            o = int(o)
            if o == 0:
                rank += 1
                continue
            for p, e in factorize(o):
                primary.setdefault(p, []).append(p ** e)
        if not primary:
            return cls((), rank)
        length = max(len(v) for v in primary.values())
        inv = [1] * length
        for p, pows in primary.items():
            pows = sorted(pows, reverse=True)
            for i, x in enumerate(pows):
                inv[i] *= x
        return cls(tuple(sorted(inv)), rank)

    @classmethod
    def cyclic(cls, m):
        return cls.from_orders([m])

    @classmethod
    def parse(cls, text):
        """Parse ``"0"``, ``"Z/2"``, ``"Z/2 + Z/4"``, ``"Z^2 + Z/3"`` or ``"2,4"``."""
        text = text.strip()
        if text in ("0", ""):
            return cls()
        orders, rank = [], 0
        for part in text.replace("+", ",").split(","):
            part = part.strip().replace(" ", "")
            if not part:
                continue
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("Z/"):
                orders.append(int(part[2:]))
            elif part.startswith("Z") and part[1:].isdigit():
                orders.append(int(part[1:]))
            elif part.isdigit():
                orders.append(int(part))
            else:
                raise ValueError(f"cannot parse abelian group {text!r}")
        return cls.from_orders(orders, rank)

    @property
    def order(self):
        if self.rank:
            return 0
        return reduce(lambda a, b: a * b, self.factors, 1)

    def is_trivial(self):
        return not self.factors and not self.rank

    def p_rank(self, p):
        """Dimension of ``self / p`` over ``F_p``."""
        return self.rank + sum(1 for d in self.factors if d % p == 0)

    def tensor(self, m):
        """``self (x) Z/m``."""
        return FinAb.from_orders([m] * self.rank + [gcd(d, m) for d in self.factors])

    def tor(self, m):
        """``Tor(self, Z/m)``."""
        return FinAb.from_orders([gcd(d, m) for d in self.factors])

    def __add__(self, other):
        return FinAb.from_orders(self.factors + other.factors, self.rank + other.rank)

    def elements(self):
        """All elements as tuples, in lexicographic order (finite groups only)."""
        if self.rank:
            raise ValueError("infinite group")
        grids = np.indices(self.factors).reshape(len(self.factors), -1).T if self.factors else [()]
        return [tuple(int(x) for x in g) for g in grids]

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.factors]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FinAb({str(self)!r})"


# ----------------------------------------------------------------------------
# local linear algebra over Z/p^a


def _snf_local(A, p, q, want_u=False, want_uinv=False, want_v=False):
    """Diagonalize ``A`` over ``Z/q`` with ``q = p^a``.

    Returns ``(vals, U, Uinv, V)`` with ``U A V`` diagonal, ``vals[i]`` the
    p-adic valuation of the i-th diagonal entry (only nonzero entries listed).
    """
    A = np.array(A, dtype=np.int64) % q
    m, n = A.shape
    U = np.eye(m, dtype=np.int64) if want_u else None
    Ui = np.eye(m, dtype=np.int64) if want_uinv else None
    V = np.eye(n, dtype=np.int64) if want_v else None
    vals = []
    t = 0
    while t < m and t < n:
        # a unit in the current column has minimal valuation; avoid a full scan
        units = np.flatnonzero(A[t:, t] % p)
        e, pe = 0, 1
        if units.size:
            i, j = units[0] + t, t
        else:
            sub = A[t:, t:]
            nz = sub != 0
            if not nz.any():
                break
            mask = nz & (sub % p != 0)
            while not mask.any():
                e += 1
                pe *= p
                mask = nz & (sub % (pe * p) != 0)
            i, j = np.argwhere(mask)[0]
            i += t
            j += t
        if i != t:
            A[[t, i]] = A[[i, t]]
            if U is not None:
                U[[t, i]] = U[[i, t]]
            if Ui is not None:
                Ui[:, [t, i]] = Ui[:, [i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if V is not None:
                V[:, [t, j]] = V[:, [j, t]]
        u = int(A[t, t]) // pe
        if u != 1:
            uinv = pow(u, -1, q)
            A[t] = (A[t] * uinv) % q
            if U is not None:
                U[t] = (U[t] * uinv) % q
            if Ui is not None:
                Ui[:, t] = (Ui[:, t] * u) % q
        f = A[t + 1:, t] // pe
        rows = np.nonzero(f)[0]
        if rows.size:
            fr = f[rows]
            rr = rows + t + 1
            A[rr] = (A[rr] - np.outer(fr, A[t])) % q
            if U is not None:
                U[rr] = (U[rr] - np.outer(fr, U[t])) % q
            if Ui is not None:
                Ui[:, t] = (Ui[:, t] + (Ui[:, rr] @ fr) % q) % q
        g = A[t, t + 1:] // pe
        cols = np.nonzero(g)[0]
        if cols.size:
            cc = cols + t + 1
            A[t, cc] = 0
            if V is not None:
                V[:, cc] = (V[:, cc] - np.outer(V[:, t], g[cols])) % q
        vals.append(e)
        t += 1
    return vals, U, Ui, V


def _local_kernel(F, src_orders, dst_orders, p, q):
    """Generators (columns) of ``{x : F x in T_dst}`` over ``Z/q``."""
    k = len(src_orders)
    extra = [j for j, o in enumerate(dst_orders) if o < q]
    m = len(dst_orders)
    if m == 0 or k == 0:
        return np.eye(k, dtype=np.int64)
    A = np.zeros((m, k + len(extra)), dtype=np.int64)
    A[:, :k] = np.asarray(F, dtype=np.int64).reshape(m, k) % q
    for c, j in enumerate(extra):
        A[j, k + c] = dst_orders[j]
    vals, _, _, V = _snf_local(A, p, q, want_v=True)
    a = vp(q, p)
    gens = []
    for i, e in enumerate(vals):
        if e > 0:
            gens.append((V[:k, i] * p ** (a - e)) % q)
    for i in range(len(vals), A.shape[1]):
        gens.append(V[:k, i] % q)
    if not gens:
        return np.zeros((k, 0), dtype=np.int64)
    return np.stack(gens, axis=1)


class _LocalSQ:
    """p-primary part of a subquotient L/K of an ambient group."""

    def __init__(self, L, K, orders, p, q):
        self.p, self.q = p, q
        self.a = vp(q, p)
        k = len(orders)
        self.k = k
        tcols = [j for j, o in enumerate(orders) if o < q]
        T = np.zeros((k, len(tcols)), dtype=np.int64)
        for c, j in enumerate(tcols):
            T[j, c] = orders[j]
        Lg = np.concatenate([np.asarray(L, dtype=np.int64).reshape(k, -1) % q, T], axis=1)
        vals, U, Ui, _ = _snf_local(Lg, p, q, want_u=True, want_uinv=True)
        self.U = U
        self.r = len(vals)
        self.e = vals
        # basis of L: p^e_i * Ui[:, i]; L = sum Z/p^(a-e_i)
        self.basis = (Ui[:, :self.r] * np.array([p ** e for e in vals], dtype=np.int64)) % q
        Kg = np.concatenate([np.asarray(K, dtype=np.int64).reshape(k, -1) % q, T], axis=1)
        Kc = self._lcoords(Kg)
        rel = np.concatenate(
            [Kc, np.diag([p ** (self.a - e) for e in vals]).astype(np.int64).reshape(self.r, self.r)],
            axis=1)
        vals2, U2, Ui2, _ = _snf_local(rel, p, q, want_u=True, want_uinv=True)
        keep, cyc = [], []
        for i in range(self.r):
            e2 = vals2[i] if i < len(vals2) else self.a
            if e2 > 0:
                keep.append(i)
                cyc.append(p ** e2)
        self.keep = keep
        self.cyclic = cyc
        self.U2 = U2[keep] if self.r else np.zeros((0, 0), dtype=np.int64)
        self.gens = (self.basis @ Ui2[:, keep]) % q if self.r else np.zeros((k, 0), dtype=np.int64)

    def _lcoords(self, W):
        W = np.asarray(W, dtype=np.int64).reshape(self.k, -1) % self.q
        Y = (self.U @ W) % self.q
        if np.any(Y[self.r:]):
            raise ValueError("element not in the subgroup")
        pe = np.array([self.p ** e for e in self.e], dtype=np.int64).reshape(-1, 1)
        Z = Y[:self.r]
        if np.any(Z % pe):
            raise ValueError("element not in the subgroup")
        return Z // pe

    def classify(self, W):
        if not self.cyclic:
            return np.zeros((0, np.asarray(W).reshape(self.k, -1).shape[1]), dtype=np.int64)
        C = (self.U2 @ self._lcoords(W)) % self.q
        return C % np.array(self.cyclic, dtype=np.int64).reshape(-1, 1)


def _primes_of(orders):
    ps = set()
    for o in orders:
        for p, _ in factorize(int(o)):
            ps.add(p)
    return sorted(ps)


def _ppart(orders, p):
    return [p ** vp(int(o), p) for o in orders]


def _idempotent(p, a, N):
    # e = 1 mod p^a, e = 0 mod N / p^a
    q = p ** a
    rest = N // q
    if rest == 1:
        return 1
    return (rest * pow(rest, -1, q)) % N


def _check_orders(orders):
    for o in orders:
        if int(o) < 1:
            raise ValueError("ambient orders must be positive")


def _exponent(orders):
    return reduce(lambda x, y: x * y // gcd(x, y), [int(o) for o in orders], 1)


def _cols(A, k):
    """View ``A`` as a matrix with ``k`` rows (also when ``k == 0``)."""
    A = np.asarray(A, dtype=object)
    if A.ndim == 2 and A.shape[0] == k:
        return A
    if k == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=object)
    return A.reshape(k, -1)


class Subquotient:
    """``L / K`` inside ``Z/o_1 + ... + Z/o_k`` with explicit coordinates.

    Attributes
    ----------
    cyclic : tuple of int
        Prime-power orders of the chosen generators.
    gens : ndarray, shape (k, len(cyclic))
        Ambient representatives of the generators.
    group : FinAb
    """

    def __init__(self, L, K, orders):
        orders = [int(o) for o in orders]
        _check_orders(orders)
        self.orders = tuple(orders)
        k = len(orders)
        N = _exponent(orders)
        self._parts = []
        cyc, gens = [], []
        for p in _primes_of(orders):
            a = vp(N, p)
            q = p ** a
            if q > _QMAX:
                raise ValueError("coefficient orders too large for the int64 kernel")
            part = _LocalSQ(np.asarray(L, dtype=object).reshape(k, -1) % q,
                            np.asarray(K, dtype=object).reshape(k, -1) % q,
                            _ppart(orders, p), p, q)
            eid = _idempotent(p, a, N)
            self._parts.append(part)
            cyc += part.cyclic
            if part.cyclic:
                g = (part.gens.astype(object) * eid)
                g = np.stack([g[j] % orders[j] for j in range(k)]) if k else g
                gens.append(g)
        self.cyclic = tuple(cyc)
        self.gens = np.concatenate(gens, axis=1).astype(np.int64) if gens \
            else np.zeros((k, 0), dtype=np.int64)
        self.group = FinAb.from_orders(cyc)

    @property
    def order(self):
        return self.group.order

    def classify(self, W):
        """Coordinates of ambient vectors (columns of ``W``) in the generators."""
        W = _cols(W, len(self.orders))
        out = [part.classify(W % part.q) for part in self._parts]
        if not out:
            return np.zeros((0, W.shape[1]), dtype=np.int64)
        return np.concatenate(out, axis=0)

    def is_zero_class(self, w):
        return not np.any(self.classify(w))


def kernel(F, src_orders, dst_orders):
    """Generators of the kernel of ``F: Z/src -> Z/dst`` as ambient vectors."""
    src_orders = [int(o) for o in src_orders]
    dst_orders = [int(o) for o in dst_orders]
    k = len(src_orders)
    F = np.asarray(F, dtype=object).reshape(len(dst_orders), k)
    N = _exponent(src_orders + dst_orders)
    gens = []
    for p in _primes_of(src_orders):
        a = vp(N, p)
        q = p ** a
        sp = _ppart(src_orders, p)
        dp = _ppart(dst_orders, p)
        G = _local_kernel(F % q, sp, dp, p, q)
        eid = _idempotent(p, a, N)
        G = G.astype(object) * eid
        for j in range(k):
            G[j] %= src_orders[j]
        gens.append(G)
    if not gens:
        return np.zeros((k, 0), dtype=np.int64)
    return np.concatenate(gens, axis=1).astype(np.int64)


def check_homomorphism(F, src_orders, dst_orders):
    """True if the integer matrix ``F`` defines a map ``Z/src -> Z/dst``."""
    F = np.asarray(F, dtype=object).reshape(len(dst_orders), len(src_orders))
    for j, o in enumerate(src_orders):
        for i, d in enumerate(dst_orders):
            if (F[i, j] * o) % d:
                return False
    return True


def homology(F_in, F_out, orders_mid, orders_in=None, orders_out=()):
    """``ker F_out / im F_in`` at the middle term of ``A -> B -> C``."""
    k = len(orders_mid)
    Z = kernel(F_out, orders_mid, orders_out) if len(orders_out) else np.eye(k, dtype=np.int64)
    B = _cols(F_in, k) if F_in is not None \
        else np.zeros((k, 0), dtype=np.int64)
    return Subquotient(Z, B, orders_mid)


def image(F, dst_orders):
    k = len(dst_orders)
    return Subquotient(_cols(F, k), np.zeros((k, 0), dtype=np.int64), dst_orders)


def cokernel(F, dst_orders):
    k = len(dst_orders)
    return Subquotient(np.eye(k, dtype=np.int64), _cols(F, k), dst_orders)


def induced_map(F, src: Subquotient, dst: Subquotient):
    """Matrix of the map induced by ``F`` in generator coordinates."""
    W = np.asarray(F, dtype=object).reshape(len(dst.orders), len(src.orders)) @ src.gens.astype(object)
    return dst.classify(W)
