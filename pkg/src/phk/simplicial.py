"""Levelwise-finite simplicial sets truncated at a dimension cap.

Only nondegenerate simplices are stored.  Every other simplex is a
:class:`FormalSimplex`: a nondegenerate base together with an order-preserving
surjection ``eta: [n] -> [k]``, meaning the simplex ``eta^* base``.  The
surjection is the Eilenberg-Zilber normal form in disguise: its repeat
positions ``{t : eta(t) = eta(t+1)}``, listed in decreasing order, are the
degeneracy word ``s_{i1} ... s_{ir}`` of the canonical form.

Faces of formal simplices are derived from the stored faces of the bases:
``d_i (eta^* y) = (eta delta_i)^* y`` and ``eta delta_i`` factors as a
surjection followed by at most one coface.
"""

import json
import re
from itertools import combinations
from typing import NamedTuple

_FORMAL_RE = re.compile(r"^((?:s_\d+)+)\|(.*)$")
_DEG_RE = re.compile(r"s_(\d+)")


class SSetError(ValueError):
    """Invalid simplicial data; ``simplex`` names the offending simplex."""

    def __init__(self, message, simplex=None, kind="invalid"):
        super().__init__(message)
        self.simplex = simplex
        self.kind = kind


def surj_from_repeats(reps, n):
    """Surjection on ``[n]`` whose repeat positions are ``reps``."""
    out = [0]
    for t in range(n):
        out.append(out[-1] + (0 if t in reps else 1))
    return tuple(out)


def repeats(surj):
    return tuple(t for t in range(len(surj) - 1) if surj[t] == surj[t + 1])


class FormalSimplex(NamedTuple):
    """``surj^* base`` with ``surj`` a nondecreasing surjection onto ``[dim(base)]``."""

    base: str
    surj: tuple

    @classmethod
    def nd(cls, base, k):
        return cls(base, tuple(range(k + 1)))

    @property
    def dim(self):
        return len(self.surj) - 1

    @property
    def base_dim(self):
        return self.surj[-1]

    @property
    def deg_word(self):
        """Strictly decreasing degeneracy indices of the canonical form."""
        return tuple(reversed(repeats(self.surj)))

    @property
    def is_degenerate(self):
        return self.surj[-1] != len(self.surj) - 1

    def degeneracy(self, j):
        s = self.surj
        if not 0 <= j < len(s):
            raise SSetError(f"s_{j} undefined in dimension {self.dim}", self.base)
        return FormalSimplex(self.base, s[:j + 1] + s[j:])

    def pullback(self, theta):
        """``theta^*`` of this simplex for a surjection ``theta`` onto ``[dim]``."""
        return FormalSimplex(self.base, tuple(self.surj[v] for v in theta))

    @classmethod
    def from_word(cls, word, base, base_dim):
        """Normalize ``s_{word[0]} s_{word[1]} ... base`` (any order of indices)."""
        x = cls.nd(base, base_dim)
        for j in reversed(tuple(word)):
            x = x.degeneracy(j)
        return x

    def format(self):
        w = self.deg_word
        if not w:
            return self.base
        return "".join(f"s_{i}" for i in w) + "|" + self.base

    def __str__(self):
        return self.format()


def parse_formal(text, dims, dim=None, where=None):
    """Parse ``"s_1s_0|base"`` or ``"base"`` against known base dimensions."""
    m = _FORMAL_RE.match(text)
    if m:
        word = tuple(int(x) for x in _DEG_RE.findall(m.group(1)))
        base = m.group(2)
    else:
        word, base = (), text
    if base not in dims:
        raise SSetError(f"dangling reference {base!r} in {where!r}", where, "dangling")
    k = dims[base]
    n = k + len(word)
    if any(word[i] <= word[i + 1] for i in range(len(word) - 1)):
        raise SSetError(f"non-canonical formal simplex {text!r} in {where!r}", where, "noncanonical")
    if word and word[0] > n - 1:
        raise SSetError(f"degeneracy index out of range in {text!r} ({where!r})", where, "noncanonical")
    if dim is not None and n != dim:
        raise SSetError(f"formal simplex {text!r} has dimension {n}, expected {dim} ({where!r})",
                        where, "dimension")
    return FormalSimplex(base, surj_from_repeats(set(word), n))


class SSet:
    """A simplicial set truncated at ``dim_cap``.

    Parameters
    ----------
    dim_cap : int
    nd : sequence of sequences of str
        ``nd[n]`` lists the nondegenerate n-simplices, ``0 <= n <= dim_cap``.
    faces : dict
        ``faces[x]`` is the tuple ``(d_0 x, ..., d_n x)`` of FormalSimplex.
    validate : bool
        Run all structural checks (references, canonical forms, identities).
    """

    def __init__(self, dim_cap, nd, faces, validate=True):
        self.dim_cap = int(dim_cap)
        nd = [tuple(level) for level in nd]
        nd += [()] * (self.dim_cap + 1 - len(nd))
        self.nd = tuple(nd[:self.dim_cap + 1])
        self.faces = {k: tuple(v) for k, v in faces.items() if v}
        self.dim = {}
        self.index = {}
        for n, level in enumerate(self.nd):
            for i, x in enumerate(level):
                if x in self.dim:
                    raise SSetError(f"duplicate simplex id {x!r}", x, "duplicate")
                self.dim[x] = n
                self.index[x] = i
        self._fcache = {}
        if validate:
            self.validate()

    # -- basic data -------------------------------------------------------
    def counts(self):
        return tuple(len(level) for level in self.nd)

    def euler(self):
        return sum((-1) ** n * c for n, c in enumerate(self.counts()))

    def top_dim(self):
        return max((n for n, lv in enumerate(self.nd) if lv), default=-1)

    def simplex(self, x):
        return FormalSimplex.nd(x, self.dim[x])

    def vertices_of(self, fs):
        """Vertex ids of a formal simplex, in order."""
        out = []
        for i in range(fs.dim + 1):
            v = fs
            # vertex i: apply all faces except i
            for j in range(fs.dim, i, -1):
                v = self.face(v, j)
            for _ in range(i):
                v = self.face(v, 0)
            out.append(v.base)
        return tuple(out)

    def edge01(self, fs):
        """The edge from vertex 0 to vertex 1 of an n-simplex, n >= 1."""
        e = fs
        while e.dim > 1:
            e = self.face(e, e.dim)
        return e

    # -- face calculus ------------------------------------------------------
    def face(self, fs, i):
        key = (fs, i)
        hit = self._fcache.get(key)
        if hit is not None:
            return hit
        s = fs.surj
        n = len(s) - 1
        if n == 0 or not 0 <= i <= n:
            raise SSetError(f"d_{i} undefined on {fs.format()!r}", fs.base)
        rest = s[:i] + s[i + 1:]
        v = s[i]
        if (i > 0 and s[i - 1] == v) or (i < n and s[i + 1] == v):
            out = FormalSimplex(fs.base, rest)
        else:
            z = self.faces[fs.base][v]
            eta = tuple(x - 1 if x > v else x for x in rest)
            out = FormalSimplex(z.base, tuple(z.surj[t] for t in eta))
        self._fcache[key] = out
        return out

    def all_simplices(self, n):
        """Every n-simplex (degenerate ones included) as a FormalSimplex."""
        out = []
        for k in range(min(n, self.dim_cap), -1, -1):
            for reps in combinations(range(n), n - k):
                eta = surj_from_repeats(set(reps), n)
                out.extend(FormalSimplex(x, eta) for x in self.nd[k])
        return out

    def count_all(self, n):
        from math import comb
        return sum(comb(n, n - k) * len(self.nd[k]) for k in range(min(n, self.dim_cap) + 1))

    # -- validation -----------------------------------------------------------
    def validate(self):
        for n, level in enumerate(self.nd):
            for x in level:
                if not isinstance(x, str):
                    raise SSetError(f"simplex id {x!r} is not a string", x)
                if _FORMAL_RE.match(x):
                    raise SSetError(f"simplex id {x!r} looks like a formal simplex", x)
                fl = self.faces.get(x, ())
                if n == 0:
                    if fl:
                        raise SSetError(f"vertex {x!r} has faces", x)
                    continue
                if len(fl) != n + 1:
                    raise SSetError(f"{x!r} has {len(fl)} faces, expected {n + 1}", x, "faces")
                for i, f in enumerate(fl):
                    if f.base not in self.dim:
                        raise SSetError(f"dangling reference {f.base!r} in face d_{i} of {x!r}",
                                        x, "dangling")
                    if f.dim != n - 1 or f.surj[-1] != self.dim[f.base] or \
                            any(f.surj[t + 1] - f.surj[t] not in (0, 1) for t in range(f.dim)) or \
                            f.surj[0] != 0:
                        raise SSetError(f"face d_{i} of {x!r} is not a canonical {n - 1}-simplex",
                                        x, "noncanonical")
        for k in self.faces:
            if k not in self.dim:
                raise SSetError(f"faces given for unknown simplex {k!r}", k, "dangling")
        for n in range(2, self.dim_cap + 1):
            for x in self.nd[n]:
                fs = self.simplex(x)
                for j in range(1, n + 1):
                    for i in range(j):
                        a = self.face(self.face(fs, j), i)
                        b = self.face(self.face(fs, i), j - 1)
                        if a != b:
                            raise SSetError(
                                f"simplicial identity d_{i}d_{j} = d_{j - 1}d_{i} fails on {x!r}: "
                                f"{a.format()} != {b.format()}", x, "identity")

    def check_identities(self, n_max=None):
        """Check all simplicial identities on every simplex up to ``n_max``."""
        n_max = self.dim_cap if n_max is None else n_max
        for n in range(0, n_max + 1):
            for fs in self.all_simplices(n):
                for j in range(n + 1):
                    if n >= 2:
                        for i in range(j):
                            if self.face(self.face(fs, j), i) != self.face(self.face(fs, i), j - 1):
                                return False
                    if n + 1 <= n_max:
                        sj = fs.degeneracy(j)
                        for i in range(n + 2):
                            lhs = self.face(sj, i)
                            if i < j:
                                rhs = self.face(fs, i).degeneracy(j - 1) if n >= 1 else None
                            elif i in (j, j + 1):
                                rhs = fs
                            else:
                                rhs = self.face(fs, i - 1).degeneracy(j) if n >= 1 else None
                            if rhs is not None and lhs != rhs:
                                return False
                        for i in range(j + 1):
                            if fs.degeneracy(j).degeneracy(i) != fs.degeneracy(i).degeneracy(j + 1):
                                return False
        return True

    # -- comparison and serialization ---------------------------------------
    def __eq__(self, other):
        return isinstance(other, SSet) and self.dim_cap == other.dim_cap and \
            self.nd == other.nd and self.faces == other.faces

    def __hash__(self):
        return hash((self.dim_cap, self.nd))

    def __repr__(self):
        return f"SSet(dim_cap={self.dim_cap}, counts={self.counts()})"

    def to_dict(self):
        return {
            "dim_cap": self.dim_cap,
            "simplices": {str(n): list(level) for n, level in enumerate(self.nd)},
            "faces": {x: [f.format() for f in self.faces[x]]
                      for level in self.nd[1:] for x in level},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def truncate(self, D):
        """The same simplicial set with a smaller dimension cap."""
        if D > self.dim_cap:
            raise SSetError(f"cannot raise dim_cap from {self.dim_cap} to {D}")
        keep = {x for lv in self.nd[:D + 1] for x in lv}
        return SSet(D, self.nd[:D + 1], {x: f for x, f in self.faces.items() if x in keep},
                    validate=False)


def build_sset(spec):
    """Build and validate an SSet from the JSON-shaped listing.

    ``spec`` has keys ``dim_cap`` (optional, defaults to the top listed
    dimension), ``simplices`` (dimension -> ids) and ``faces`` (id -> formal
    strings).  Dimensions may be listed in any order.
    """
    if not isinstance(spec, dict) or "simplices" not in spec:
        raise SSetError("spec needs a 'simplices' mapping")
    levels = {}
    for k, ids in spec["simplices"].items():
        try:
            n = int(k)
        except (TypeError, ValueError):
            raise SSetError(f"bad dimension key {k!r}") from None
        if n < 0:
            raise SSetError(f"negative dimension {n}")
        if not isinstance(ids, list):
            raise SSetError(f"simplices[{k!r}] must be a list")
        levels[n] = [str(x) for x in ids]
    top = max(levels, default=0)
    D = int(spec.get("dim_cap", top))
    if D < top:
        raise SSetError(f"dim_cap {D} below listed dimension {top}")
    nd = [levels.get(n, []) for n in range(D + 1)]
    dims = {}
    for n, lv in enumerate(nd):
        for x in lv:
            if x in dims:
                raise SSetError(f"duplicate simplex id {x!r}", x, "duplicate")
            dims[x] = n
    raw = spec.get("faces", {})
    for x in raw:
        if x not in dims:
            raise SSetError(f"faces given for unknown simplex {x!r}", x, "dangling")
    faces = {}
    for n, lv in enumerate(nd):
        if n == 0:
            for x in lv:
                if raw.get(x):
                    raise SSetError(f"vertex {x!r} has faces", x)
            continue
        for x in lv:
            fl = raw.get(x)
            if fl is None or len(fl) != n + 1:
                raise SSetError(f"{x!r} needs {n + 1} faces", x, "faces")
            faces[x] = tuple(parse_formal(str(t), dims, n - 1, x) for t in fl)
    return SSet(D, nd, faces)


def parse_space(text):
    """Parse the JSON form of an SSet; errors report line and column."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SSetError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}",
                        kind="parse") from None
    return build_sset(doc)


def serialize_space(X):
    return X.to_json()


# ----------------------------------------------------------------------------
# maps


class SMap:
    """Simplicial map given on nondegenerate simplices of the source."""

    def __init__(self, source, target, images, validate=True):
        self.source = source
        self.target = target
        self.images = dict(images)
        if validate:
            self.validate()

    def __call__(self, fs):
        if isinstance(fs, str):
            fs = self.source.simplex(fs)
        img = self.images[fs.base]
        return FormalSimplex(img.base, tuple(img.surj[t] for t in fs.surj))

    def validate(self):
        S, T = self.source, self.target
        D = min(S.dim_cap, T.dim_cap)
        for n in range(D + 1):
            for x in S.nd[n]:
                img = self.images.get(x)
                if img is None:
                    raise SSetError(f"map undefined on {x!r}", x, "map")
                if img.base not in T.dim or img.dim != n or img.surj[-1] != T.dim[img.base]:
                    raise SSetError(f"bad image {img.format()!r} of {x!r}", x, "map")
                if n == 0:
                    continue
                fs = S.simplex(x)
                for i in range(n + 1):
                    if self(S.face(fs, i)) != T.face(img, i):
                        raise SSetError(f"map does not commute with d_{i} on {x!r}", x, "map")

    def compose(self, other):
        """``self o other``."""
        return SMap(other.source, self.target,
                    {x: self(other.images[x]) for x in other.images}, validate=False)

    @classmethod
    def identity(cls, X):
        return cls(X, X, {x: X.simplex(x) for lv in X.nd for x in lv}, validate=False)

    def is_isomorphism(self):
        S, T = self.source, self.target
        if S.counts() != T.counts():
            return False
        seen = set()
        for x, img in self.images.items():
            if img.is_degenerate or img.base in seen:
                return False
            seen.add(img.base)
        return True

    def inverse(self):
        if not self.is_isomorphism():
            raise SSetError("map is not an isomorphism")
        T = self.target
        inv = {img.base: self.source.simplex(x) for x, img in self.images.items()}
        return SMap(T, self.source, inv, validate=False)

    def is_levelwise_surjective(self, n_max=None):
        S, T = self.source, self.target
        n_max = min(S.dim_cap, T.dim_cap) if n_max is None else n_max
        for n in range(n_max + 1):
            hit = {self(fs) for fs in S.all_simplices(n)}
            if any(FormalSimplex.nd(y, n) not in hit for y in T.nd[n]):
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, SMap) and self.images == other.images

    def __hash__(self):
        return hash(tuple(sorted(self.images)))


# ----------------------------------------------------------------------------
# generic assembly from a concrete model


def sset_from_model(D, levels, face, canon, key=str):
    """Assemble an SSet from concrete simplices.

    ``levels[n]`` lists concrete nondegenerate n-simplices, ``face(x, i)``
    returns a concrete simplex and ``canon(z)`` returns ``(surj, base)`` with
    ``base`` concrete nondegenerate.
    """
    nd = [[key(x) for x in levels[n]] for n in range(D + 1)]
    faces = {}
    for n in range(1, D + 1):
        for x in levels[n]:
            out = []
            for i in range(n + 1):
                surj, b = canon(face(x, i))
                out.append(FormalSimplex(key(b), surj))
            faces[key(x)] = tuple(out)
    return SSet(D, nd, faces, validate=False)


def canon_by_operators(face, degen):
    """Canonical form from face/degeneracy operators: ``z = s_j d_j z`` test."""
    def canon(z, n):
        reps = [j for j in range(n) if degen(face(z, j), j) == z]
        b = z
        for j in sorted(reps, reverse=True):
            b = face(b, j)
        return surj_from_repeats(set(reps), n), b
    return canon


# ----------------------------------------------------------------------------
# standard spaces


def _vid(vs):
    return "".join(map(str, vs)) if max(vs, default=0) < 10 else ",".join(map(str, vs))


def _delta(n, D, skip_top=False):
    nd = []
    faces = {}
    for k in range(min(n, D) + 1):
        level = []
        if skip_top and k == n:
            nd.append(level)
            continue
        for vs in combinations(range(n + 1), k + 1):
            x = _vid(vs)
            level.append(x)
            if k:
                faces[x] = tuple(FormalSimplex.nd(_vid(vs[:i] + vs[i + 1:]), k - 1)
                                 for i in range(k + 1))
        nd.append(level)
    nd += [[] for _ in range(D + 1 - len(nd))]
    return SSet(D, nd, faces, validate=False)


def standard_space(kind, n=1, D=None):
    """``delta`` (Delta[n]), ``boundary`` (its boundary), ``sphere`` or ``circle``.

    The sphere is literally the quotient of Delta[n] collapsing the boundary,
    so its vertex is ``"0"`` and its top simplex ``"01...n"``.
    """
    if kind == "circle":
        n = 1
    D = n if D is None else D
    if n < 0:
        raise SSetError("n must be nonnegative")
    if D < n:
        raise SSetError(f"dim_cap {D} below n = {n}")
    if kind == "delta":
        return _delta(n, D)
    if kind == "boundary":
        return _delta(n, D, skip_top=True)
    if kind in ("sphere", "circle"):
        if n == 0:
            return SSet(D, [["0", "*"]], {}, validate=False)
        X = _delta(n, D)
        R = SimplicialRelation.collapse(X, [x for lv in X.nd[:n] for x in lv])
        Q, _ = quotient(X, R)
        return Q
    raise SSetError(f"unknown standard space {kind!r}")


def disjoint_union(X, Y, tags=("a", "b")):
    D = min(X.dim_cap, Y.dim_cap)
    ta, tb = tags
    nd = [[f"{ta}.{x}" for x in X.nd[n]] + [f"{tb}.{y}" for y in Y.nd[n]] for n in range(D + 1)]
    faces = {}
    for t, Z in ((ta, X), (tb, Y)):
        for x, fl in Z.faces.items():
            if Z.dim[x] <= D:
                faces[f"{t}.{x}"] = tuple(FormalSimplex(f"{t}.{f.base}", f.surj) for f in fl)
    return SSet(D, nd, faces, validate=False)


# ----------------------------------------------------------------------------
# products


def _pair_id(a, b):
    return f"({a.format()},{b.format()})"


def product_with_projections(X, Y, D=None):
    """Product ``X x Y`` with its two projections.

    Nondegenerate n-simplices are pairs of formal n-simplices whose repeat sets
    are disjoint (a pair is ``s_j`` of something exactly when both factors are).
    """
    D = min(X.dim_cap, Y.dim_cap) if D is None else min(D, X.dim_cap, Y.dim_cap)
    nd, faces, comp = [], {}, {}
    rev = {}
    for n in range(D + 1):
        level = []
        ys = [(b, set(repeats(b.surj))) for b in Y.all_simplices(n)]
        for a in X.all_simplices(n):
            ra = set(repeats(a.surj))
            for b, rb in ys:
                if ra & rb:
                    continue
                x = _pair_id(a, b)
                if x in comp:
                    raise SSetError(f"ambiguous product id {x!r}")
                comp[x] = (a, b)
                rev[(a, b)] = x
                level.append(x)
        nd.append(level)

    def normalize(a, b):
        J = set(repeats(a.surj)) & set(repeats(b.surj))
        if not J:
            return FormalSimplex(rev[(a, b)], tuple(range(a.dim + 1)))
        n = a.dim
        keep = [t for t in range(n + 1) if t == 0 or (t - 1) not in J]
        a2 = FormalSimplex(a.base, tuple(a.surj[t] for t in keep))
        b2 = FormalSimplex(b.base, tuple(b.surj[t] for t in keep))
        return FormalSimplex(rev[(a2, b2)], surj_from_repeats(J, n))

    for n in range(1, D + 1):
        for x in nd[n]:
            a, b = comp[x]
            faces[x] = tuple(normalize(X.face(a, i), Y.face(b, i)) for i in range(n + 1))
    P = SSet(D, nd, faces, validate=False)
    pr1 = SMap(P, X, {x: comp[x][0] for x in comp}, validate=False)
    pr2 = SMap(P, Y, {x: comp[x][1] for x in comp}, validate=False)
    return P, pr1, pr2


def product(X, Y, D=None):
    """Categorical product truncated at ``min(D, dim caps)``."""
    return product_with_projections(X, Y, D)[0]


def pair_map(P, Z, f, g, D=None):
    """The map ``(f, g): Z -> P`` into a product built by product_with_projections."""
    images = {}
    for n in range(min(Z.dim_cap, P.dim_cap) + 1):
        for z in Z.nd[n]:
            a, b = f(z), g(z)
            J = set(repeats(a.surj)) & set(repeats(b.surj))
            keep = [t for t in range(n + 1) if t == 0 or (t - 1) not in J]
            a2 = FormalSimplex(a.base, tuple(a.surj[t] for t in keep))
            b2 = FormalSimplex(b.base, tuple(b.surj[t] for t in keep))
            images[z] = FormalSimplex(_pair_id(a2, b2), surj_from_repeats(J, n))
    return SMap(Z, P, images, validate=False)


# ----------------------------------------------------------------------------
# quotients


class SimplicialRelation:
    """An equivalence relation generated by pairs of same-dimensional simplices.

    The relation on X/R is the smallest levelwise equivalence containing the
    pairs and closed under degeneracies.  Closure under faces is required of
    the input and checked by :func:`quotient`.
    """

    def __init__(self, pairs=()):
        self.pairs = tuple(pairs)
        for a, b in self.pairs:
            if a.dim != b.dim:
                raise SSetError("related simplices must have equal dimension")

    @classmethod
    def diagonal(cls):
        return cls(())

    @classmethod
    def collapse(cls, X, ids):
        """Identify the subcomplex spanned by ``ids`` to its first vertex."""
        ids = list(ids)
        if not ids:
            return cls(())
        v = min((x for x in ids if X.dim[x] == 0), key=lambda x: X.index[x])
        pairs = []
        for x in ids:
            n = X.dim[x]
            if x != v:
                pairs.append((X.simplex(x), FormalSimplex(v, (0,) * (n + 1))))
        return cls(pairs)


class _UF:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            r = self.find(p)
            self.parent[x] = r
            return r
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def quotient(X, R):
    """Quotient ``X/R`` and the projection map.

    Raises SSetError when faces of related simplices are unrelated.
    """
    D = X.dim_cap
    uf = _UF()
    for a, b in R.pairs:
        uf.union(a, b)
        m = a.dim
        for n in range(m + 1, D + 1):
            for reps in combinations(range(n), n - m):
                th = surj_from_repeats(set(reps), n)
                uf.union(a.pullback(th), b.pullback(th))
    classes = []
    for n in range(D + 1):
        cl = {}
        for fs in X.all_simplices(n):
            cl.setdefault(uf.find(fs), []).append(fs)
        classes.append(cl)
    # compatibility: faces of related simplices are related
    for n in range(1, D + 1):
        for members in classes[n].values():
            if len(members) < 2:
                continue
            for i in range(n + 1):
                r0 = uf.find(X.face(members[0], i))
                for fs in members[1:]:
                    if uf.find(X.face(fs, i)) != r0:
                        raise SSetError(
                            f"incompatible relation: d_{i} of {members[0].format()!r} and "
                            f"{fs.format()!r} are unrelated", fs.base, "relation")
    canon = {}
    nd = []
    for n in range(D + 1):
        level = []
        for root, members in classes[n].items():
            degen = [fs for fs in members if fs.is_degenerate]
            if degen:
                vals = set()
                for fs in degen:
                    k = fs.base_dim
                    c = canon[uf.find(FormalSimplex.nd(fs.base, k))]
                    vals.add(FormalSimplex(c.base, tuple(c.surj[t] for t in fs.surj)))
                if len(vals) != 1:
                    raise SSetError("relation identifies distinct degenerate simplices",
                                    degen[0].base, "relation")
                canon[root] = vals.pop()
            else:
                rep = min(members, key=lambda fs: X.index[fs.base])
                canon[root] = FormalSimplex.nd(rep.base, n)
                level.append(rep.base)
        level.sort(key=lambda x: X.index[x])
        nd.append(level)
    faces = {}
    for n in range(1, D + 1):
        for x in nd[n]:
            fs = X.simplex(x)
            faces[x] = tuple(canon[uf.find(X.face(fs, i))] for i in range(n + 1))
    Q = SSet(D, nd, faces, validate=False)
    proj = SMap(X, Q, {x: canon[uf.find(X.simplex(x))] for lv in X.nd for x in lv}, validate=False)
    return Q, proj


def orbit_quotient(X, actions):
    """Quotient by a group acting through simplicial automorphisms.

    ``actions`` is a list of dicts (one per group generator) sending each
    nondegenerate id to a nondegenerate id of the same dimension.  Orbits of
    nondegenerate simplices stay nondegenerate; representatives are the first
    orbit members in listing order.
    """
    uf = _UF()
    for act in actions:
        for x, y in act.items():
            uf.union(x, y)
    rep = {}
    nd = []
    for n, level in enumerate(X.nd):
        out = []
        for x in level:
            r = uf.find(x)
            if r not in rep:
                rep[r] = x
                out.append(x)
        nd.append(out)
    to_rep = {x: rep[uf.find(x)] for lv in X.nd for x in lv}
    faces = {}
    for n in range(1, X.dim_cap + 1):
        for x in nd[n]:
            faces[x] = tuple(FormalSimplex(to_rep[f.base], f.surj) for f in X.faces[x])
    Q = SSet(X.dim_cap, nd, faces, validate=False)
    proj = SMap(X, Q, {x: FormalSimplex.nd(to_rep[x], X.dim[x]) for x in to_rep}, validate=False)
    return Q, proj
