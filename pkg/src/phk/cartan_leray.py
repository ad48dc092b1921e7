"""Cartan-Leray spectral sequence of a finite Galois cover.

For a principal G-bundle ``E -> X`` and a G-module M the double complex is

    C^{p,q} = normalized bar cochains G^p -> C^q(E; M),

where G acts on ``C^q(E; M)`` by ``(g.c)(y) = rho(g) c(y g)``.  The
horizontal differential is the bar differential, the vertical one is
``(-1)^p`` times the cochain differential of E.  Pages of the column
filtration are computed from

    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1}),
    Z_r^p = {x in F^p : Dx in F^{p+r}},

in exact finite-abelian arithmetic, and ``d_r`` is induced by D.  The row
filtration collapses (``C^q(E; M)`` is co-induced), identifying the
abutment with the twisted cohomology of X.
"""

from dataclasses import dataclass, field

import numpy as np

from .abelian import FinAb, Subquotient, homology as ab_homology, image, kernel
from .cohomology import DegreeError, twisted_cohomology_data, cohomology_data
from .edgepath import edge_path_data, gauge_fix
from .groupcoh import bar_tuples, group_cohomology_data, validate_action


class SpectralSequenceError(ValueError):
    pass


@dataclass
class SpectralSequencePages:
    """Pages ``E_r^{p,q}`` (r >= 2) for ``p + q <= cap``.

    ``differentials[r][(p, q)]`` is the matrix of ``d_r`` out of ``(p, q)``
    in generator coordinates, present when the target total degree is also
    in range.  ``abutment[n]`` records the order of the diagonal sum of
    ``E_inf`` next to the order of ``H^n(X; M)`` computed directly.
    """

    cap: int
    pages: dict
    differentials: dict
    e_infinity: dict
    e2_expected: dict
    abutment: dict
    row_check: dict = field(default_factory=dict)

    def e2(self):
        return self.pages[2]

    def diagonal_orders(self, r=None):
        page = self.e_infinity if r is None else self.pages[r]
        out = {}
        for (p, q), A in page.items():
            out[p + q] = out.get(p + q, 1) * A.order
        return out

    def abutment_ok(self):
        return all(a == b for a, b in self.abutment.values())

    def e2_ok(self):
        return all(self.pages[2][k] == v for k, v in self.e2_expected.items())

    def format(self):
        lines = []
        for r in sorted(self.pages):
            for (p, q), A in sorted(self.pages[r].items()):
                d = self.differentials.get(r, {}).get((p, q))
                im = "-" if d is None else str(_image_order(d, self.pages[r].get((p + r, q - r + 1))))
                lines.append(f"r={r} p={p} q={q} E={A} |im d|={im}")
        for n, (a, b) in sorted(self.abutment.items()):
            lines.append(f"abutment n={n} |E_inf|={a} |H|={b}")
        return "\n".join(lines)


def _image_order(M, target):
    if target is None or M.size == 0:
        return 1
    return image(M, list(_cyc(target))).order


def _cyc(A):
    return list(A.factors)


class _Double:
    def __init__(self, bundle, orders, action, top):
        self.B = bundle
        self.G = bundle.G
        self.E = bundle.E
        self.orders = list(orders)
        self.k = len(orders)
        self.action = [np.asarray(a, dtype=np.int64) for a in action]
        self.top = top
        self.tuples = [bar_tuples(self.G, p) for p in range(top + 1)]
        self.idx = [{t: i for i, t in enumerate(tp)} for tp in self.tuples]
        self.cells = [list(self.E.nd[q]) if q <= self.E.dim_cap else [] for q in range(top + 1)]
        self.cidx = [{y: i for i, y in enumerate(c)} for c in self.cells]
        # block layout of Tot^n, p ascending
        self.off = {}
        self.size = []
        for n in range(top + 1):
            o = 0
            for p in range(n + 1):
                self.off[(p, n - p)] = o
                o += len(self.tuples[p]) * len(self.cells[n - p]) * self.k
            self.size.append(o)
        self._gmats = {}

    def tot_orders(self, n):
        return self.orders * (self.size[n] // self.k) if self.k else []

    def fstart(self, n, p):
        if p <= 0:
            return 0
        if p > n:
            return self.size[n]
        return self.off[(p, n - p)]

    def module_action(self, g, q):
        """Matrix of g on ``C^q(E; M)``."""
        key = (g, q)
        if key not in self._gmats:
            cells, k = self.cells[q], self.k
            A = np.zeros((len(cells) * k, len(cells) * k), dtype=np.int64)
            act = self.B.action[g]
            for i, y in enumerate(cells):
                j = self.cidx[q][act[y]]
                A[i * k:(i + 1) * k, j * k:(j + 1) * k] = self.action[g]
            self._gmats[key] = A
        return self._gmats[key]

    def delta(self, q):
        """Cochain differential ``C^q(E; M) -> C^{q+1}(E; M)``."""
        k = self.k
        rows, cols = self.cells[q + 1], self.cidx[q]
        M = np.zeros((len(rows) * k, len(self.cells[q]) * k), dtype=np.int64)
        for r, y in enumerate(rows):
            for i, f in enumerate(self.E.faces[y]):
                if not f.is_degenerate:
                    c = cols[f.base]
                    M[r * k:(r + 1) * k, c * k:(c + 1) * k] += (-1) ** i * np.eye(k, dtype=np.int64)
        return M

    def D(self, n):
        """Total differential ``Tot^n -> Tot^{n+1}``."""
        G, k = self.G, self.k
        out = np.zeros((self.size[n + 1], self.size[n]), dtype=np.int64)
        for p in range(n + 1):
            q = n - p
            nq = len(self.cells[q]) * k
            src = self.off[(p, q)]
            # vertical
            if q + 1 <= self.E.dim_cap:
                dv = (-1) ** p * self.delta(q)
                dst = self.off[(p, q + 1)]
                ncq = len(self.cells[q + 1]) * k
                for t in range(len(self.tuples[p])):
                    out[dst + t * ncq:dst + (t + 1) * ncq, src + t * nq:src + (t + 1) * nq] += dv
            # horizontal
            dst = self.off[(p + 1, q)]
            eye = np.eye(nq, dtype=np.int64)
            for r, T in enumerate(self.tuples[p + 1]):
                rs = slice(dst + r * nq, dst + (r + 1) * nq)

                def col(t):
                    c = self.idx[p][t]
                    return slice(src + c * nq, src + (c + 1) * nq)
                out[rs, col(T[1:])] += self.module_action(T[0], q)
                for i in range(1, p + 1):
                    g = G.mul(T[i - 1], T[i])
                    if g:
                        out[rs, col(T[:i - 1] + (g,) + T[i + 1:])] += (-1) ** i * eye
                out[rs, col(T[:p])] += (-1) ** (p + 1) * eye
        return out


def _zr(dc, Ds, n, p, r):
    """Generators of ``Z_r^p`` in total degree n as ambient Tot^n columns."""
    size = dc.size[n]
    s = dc.fstart(n, p)
    if s >= size:
        return np.zeros((size, 0), dtype=np.int64)
    src_orders = dc.tot_orders(n)[s:]
    cut = dc.fstart(n + 1, p + r)
    if cut == 0:
        gens = np.eye(size - s, dtype=np.int64)
    else:
        F = Ds[n][:cut, s:]
        gens = kernel(F, src_orders, dc.tot_orders(n + 1)[:cut])
    out = np.zeros((size, gens.shape[1]), dtype=np.int64)
    out[s:, :] = gens
    return out


def _page_entry(dc, Ds, n, p, r):
    L = _zr(dc, Ds, n, p, r)
    K1 = _zr(dc, Ds, n, p + 1, r - 1)
    if n >= 1:
        Zb = _zr(dc, Ds, n - 1, p - r + 1, r - 1)
        K2 = (Ds[n - 1].astype(object) @ Zb.astype(object)) if Zb.shape[1] else \
            np.zeros((dc.size[n], 0), dtype=np.int64)
    else:
        K2 = np.zeros((dc.size[n], 0), dtype=np.int64)
    K = np.concatenate([K1.astype(object), np.asarray(K2, dtype=object)], axis=1)
    return Subquotient(L, K, dc.tot_orders(n))


def _check_cover(X, bundle, L):
    if bundle.X is not X and bundle.X != X:
        raise SpectralSequenceError("bundle base is not X")
    if bundle.G.order != L.Q.order or not np.array_equal(bundle.G.table, L.Q.table):
        raise SpectralSequenceError("bundle group and local system quotient differ")
    if bundle.cocycle is None:
        raise SpectralSequenceError("bundle carries no cocycle")
    if X.nd[1] and L.images:
        data = edge_path_data(X, L.basepoint)
        imgs, _ = gauge_fix(X, data, L.Q, bundle.cocycle.values)
        G = L.Q
        a = min(tuple(G.conj(g, x) for x in imgs) for g in G.elements)
        b = min(tuple(G.conj(g, x) for x in L.images) for g in G.elements)
        if a != b:
            raise SpectralSequenceError("cover does not realise the quotient of the local system")


def cartan_leray(X, bundle, L, cap=None):
    """Pages of the Cartan-Leray spectral sequence of ``bundle`` with coefficients L.

    ``cap`` bounds the total degree of the reported entries and must be at
    most ``dim_cap - 1`` of both X and the cover.
    """
    D = min(X.dim_cap, bundle.E.dim_cap)
    cap = D - 1 if cap is None else cap
    if cap > D - 1 or cap < 0:
        raise DegreeError(f"cap {cap} outside the validated range 0..{D - 1}")
    _check_cover(X, bundle, L)
    validate_action(L.Q, list(L.orders), L.action)
    top = cap + 1
    dc = _Double(bundle, L.orders, L.action, top + 1)
    Ds = [dc.D(n) for n in range(top)]
    # Tot^{top} -> Tot^{top+1} is never needed: pages stop at total degree cap
    rmax = cap + 2
    pages, diffs, subs = {}, {}, {}
    for r in range(2, rmax + 1):
        pages[r], subs[r] = {}, {}
        for n in range(cap + 1):
            for p in range(n + 1):
                S = _page_entry(dc, Ds, n, p, r)
                subs[r][(p, n - p)] = S
                pages[r][(p, n - p)] = S.group
    for r in range(2, rmax + 1):
        diffs[r] = {}
        for (p, q), S in subs[r].items():
            tgt = subs[r].get((p + r, q - r + 1))
            n = p + q
            if n + 1 > cap or tgt is None:
                continue
            W = Ds[n].astype(object) @ S.gens.astype(object)
            diffs[r][(p, q)] = tgt.classify(W) if tgt.cyclic else \
                np.zeros((0, len(S.cyclic)), dtype=np.int64)
    e_inf = pages[rmax]
    # E_2 expected: H^p(G; H^q(E; M))
    expected = {}
    for q in range(cap + 1):
        Hq = cohomology_data(bundle.E, list(L.orders), q)
        acts = []
        for g in dc.G.elements:
            A = dc.module_action(g, q)
            acts.append(Hq.classify(A.astype(object) @ Hq.gens.astype(object)) if Hq.cyclic
                        else np.zeros((0, 0), dtype=np.int64))
        if Hq.cyclic:
            gc = group_cohomology_data(dc.G, list(Hq.cyclic), acts, n_max=cap - q)
            for p in range(cap - q + 1):
                expected[(p, q)] = gc[p].group
        else:
            for p in range(cap - q + 1):
                expected[(p, q)] = FinAb()
    # row filtration: H^p(G; C^q(E; M)) vanishes for p > 0
    row = {}
    for q in range(cap + 1):
        nq = len(dc.cells[q]) * dc.k
        if nq == 0:
            row[q] = [FinAb()] * (cap - q + 1)
            continue
        acts = [dc.module_action(g, q) for g in dc.G.elements]
        gc = group_cohomology_data(dc.G, dc.orders * (nq // dc.k), acts, n_max=max(cap - q, 0))
        row[q] = [S.group for S in gc]
    # abutment
    diag = {}
    for (p, q), A in e_inf.items():
        diag[p + q] = diag.get(p + q, 1) * A.order
    tau = bundle.cocycle
    abut = {}
    for n in range(cap + 1):
        H = twisted_cohomology_data(X, L, n, tau).group
        abut[n] = (diag.get(n, 1), H.order)
    return SpectralSequencePages(cap, pages, diffs, e_inf, expected, abut, row)


def check_pages(ss):
    """Structural checks: ``d_r d_r = 0``, ``E_{r+1} = H(E_r, d_r)`` where both
    differentials are in range, and diagonal orders never grow."""
    problems = []
    for r, dr in ss.differentials.items():
        page = ss.pages[r]
        for (p, q), M in dr.items():
            nxt = dr.get((p + r, q - r + 1))
            if nxt is None or M.size == 0 or nxt.size == 0:
                continue
            C = (nxt.astype(object) @ M.astype(object))
            orders = _cyc(page[(p + 2 * r, q - 2 * r + 2)])
            if any(C[i, j] % orders[i] for i in range(C.shape[0]) for j in range(C.shape[1])):
                problems.append(f"d_{r} d_{r} != 0 at {(p, q)}")
        if r + 1 not in ss.pages:
            continue
        for (p, q), A in page.items():
            n = p + q
            if n + 1 > ss.cap and q - r + 1 >= 0:
                continue
            out = dr.get((p, q))
            inc = dr.get((p - r, q + r - 1))
            orders = _cyc(A)
            if not orders:
                continue
            Fo = out if out is not None else np.zeros((0, len(orders)), dtype=np.int64)
            Fi = inc if inc is not None else np.zeros((len(orders), 0), dtype=np.int64)
            tgt = ss.pages[r].get((p + r, q - r + 1))
            H = ab_homology(Fi, Fo, orders, orders_out=_cyc(tgt) if tgt is not None else [])
            if H.group != ss.pages[r + 1][(p, q)]:
                problems.append(f"E_{r + 1} is not the homology of E_{r} at {(p, q)}")
    e2 = ss.diagonal_orders(2)
    einf = ss.diagonal_orders()
    for n in einf:
        if einf[n] > e2.get(n, 1):
            problems.append(f"diagonal {n} grows from E_2 to E_inf")
    return problems
