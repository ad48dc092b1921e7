"""Smith normal form over the integers.

Two entry points:

* :func:`smith_normal_form` returns the full certificate ``U, D, V`` with
  ``U @ A @ V == D``.  Entries are Python integers (numpy object arrays) so
  nothing overflows.
* :func:`invariant_factors` only returns the nonzero diagonal of ``D``.  It
  first eliminates unit pivots on a sparse representation, which is what
  simplicial boundary matrices are made of, and runs the dense algorithm on
  whatever is left.
"""

import numpy as np


def _as_rows(A):
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return [[int(x) for x in row] for row in A], A.shape


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _find_pivot(M, t, m, n):
    # smallest nonzero magnitude, ties broken by row then column
    best = None
    for i in range(t, m):
        row = M[i]
        for j in range(t, n):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best
    return best


def smith_normal_form(A):
    """Smith normal form with unimodular certificates.

    Parameters
    ----------
    A : array_like of int, shape (m, n)

    Returns
    -------
    U, D, V : numpy object arrays
        ``U`` is m x m, ``V`` is n x n, both unimodular, and ``U A V = D`` where
        ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.

    Examples
    --------
    >>> U, D, V = smith_normal_form([[2, 0], [0, 3]])
    >>> [D[0, 0], D[1, 1]]
    [1, 6]
    """
    M, (m, n) = _as_rows(A)
    U = _identity(m)
    V = _identity(n)

    def swap_rows(a, b):
        if a != b:
            M[a], M[b] = M[b], M[a]
            U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        if a != b:
            for row in M:
                row[a], row[b] = row[b], row[a]
            for row in V:
                row[a], row[b] = row[b], row[a]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        M[dst] = [x + c * y for x, y in zip(M[dst], M[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in M:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        piv = _find_pivot(M, t, m, n)
        if piv is None:
            break
        _, i, j = piv
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // p
                    add_row(i, t, -q)
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // p
                    add_col(j, t, -q)
                    if M[t][j]:
                        dirty = True
            if dirty:
                # a remainder is smaller than the pivot; restart on it
                best = None
                for i in range(t, m):
                    if M[i][t] and (best is None or abs(M[i][t]) < best[0]):
                        best = (abs(M[i][t]), i, t)
                for j in range(t, n):
                    if M[t][j] and (best is None or abs(M[t][j]) < best[0]):
                        best = (abs(M[t][j]), t, j)
                _, i, j = best
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: push an offending row into the pivot row
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if M[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    out = lambda L, r, c: np.array(L, dtype=object).reshape(r, c)
    return out(U, m, m), out(M, m, n), out(V, n, n)


def _dense_factors(rows, ncols):
    if not rows or ncols == 0:
        return []
    _, D, _ = smith_normal_form(rows)
    k = min(D.shape)
    return [int(D[i, i]) for i in range(k) if D[i, i] != 0]


def invariant_factors(A):
    """Nonzero invariant factors of an integer matrix, in divisibility order.

    ``A`` is either array-like or a sparse column list ``(cols, nrows)`` where
    ``cols[j]`` is a dict ``{row: value}``.
    """
    if isinstance(A, tuple) and len(A) == 2 and isinstance(A[0], list):
        cols, nrows = A
    else:
        arr = np.asarray(A, dtype=object)
        if arr.size == 0:
            return []
        nrows = arr.shape[0]
        cols = [{i: int(arr[i, j]) for i in range(nrows) if arr[i, j]}
                for j in range(arr.shape[1])]
    rows = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
    colrows = {}
    for i, r in rows.items():
        for j in r:
            colrows.setdefault(j, set()).add(i)
    ones = 0
    while True:
        # unit pivot in the shortest column keeps fill-in low
        best = None
        for j, rs in colrows.items():
            if best is not None and len(rs) >= best[0]:
                continue
            for i in rs:
                if abs(rows[i][j]) == 1:
                    best = (len(rs), i, j)
                    break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = rows.pop(pi)
        u = prow[pj]
        for j in prow:
            colrows[j].discard(pi)
        for i in list(colrows[pj]):
            r = rows[i]
            c = r[pj] * u  # u = +-1, so c = r[pj] / u
            for j, v in prow.items():
                nv = r.get(j, 0) - c * v
                if nv:
                    if j not in r:
                        colrows[j].add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    colrows[j].discard(i)
            if not r:
                del rows[i]
        del colrows[pj]
        for j in list(prow):
            if j in colrows and not colrows[j]:
                del colrows[j]
        ones += 1
    rest = []
    if rows:
        rlist = sorted(rows)
        clist = sorted(colrows)
        cidx = {j: k for k, j in enumerate(clist)}
        dense = [[0] * len(clist) for _ in rlist]
        for a, i in enumerate(rlist):
            for j, v in rows[i].items():
                dense[a][cidx[j]] = v
        rest = _dense_factors(dense, len(clist))
    return [1] * ones + rest


def rank_mod_p(A, p):
    """Rank of an integer matrix over F_p by numpy row reduction."""
    M = np.array(A, dtype=np.int64) % p
    if M.size == 0:
        return 0
    m, n = M.shape
    r = 0
    for c in range(n):
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        M[[r, i]] = M[[i, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        col = M[:, c].copy()
        col[r] = 0
        M = (M - np.outer(col, M[r])) % p
        r += 1
        if r == m:
            break
    return r
