"""Towers indexed by the naturals: the stand-in for profinite objects.

A :class:`GroupTower` holds finite abelian groups in coordinates with integer
transition matrices ``level k+1 -> level k``.  A :class:`SpaceTower` holds
simplicial sets with SMaps between consecutive levels.  Limits are reported
as descriptors, never as infinite objects.
"""

from dataclasses import dataclass, field

import numpy as np

from .abelian import FinAb, check_homomorphism, cokernel, image
from .simplicial import SSetError


class TowerError(ValueError):
    pass


def _orders(level):
    if isinstance(level, FinAb):
        if level.rank:
            raise TowerError("tower levels must be finite")
        return tuple(level.factors)
    return tuple(int(o) for o in level)


class GroupTower:
    """Inverse system of finite abelian groups.

    Parameters
    ----------
    levels : list
        Each level is a FinAb or a list of cyclic coordinate orders.
    maps : list of int matrices
        ``maps[k]`` represents the transition ``level k+1 -> level k``.
    """

    def __init__(self, levels, maps, validate=True):
        self.levels = [_orders(lv) for lv in levels]
        if not self.levels:
            raise TowerError("tower must be nonempty")
        if len(maps) != len(self.levels) - 1:
            raise TowerError("need one transition per consecutive pair of levels")
        self.maps = [np.asarray(m, dtype=np.int64).reshape(len(self.levels[k]), len(self.levels[k + 1]))
                     for k, m in enumerate(maps)]
        if validate:
            for k, m in enumerate(self.maps):
                if not check_homomorphism(m, self.levels[k + 1], self.levels[k]):
                    raise TowerError(f"transition {k + 1} -> {k} is not a homomorphism")

    def __len__(self):
        return len(self.levels)

    def groups(self):
        return [FinAb.from_orders(lv) for lv in self.levels]

    def composite(self, j, k):
        """Matrix of ``level j -> level k`` for ``j >= k``."""
        M = np.eye(len(self.levels[j]), dtype=object)
        for t in range(j - 1, k - 1, -1):
            M = self.maps[t].astype(object) @ M
        return M

    def is_surjective(self, k):
        """Whether the transition ``k+1 -> k`` is onto."""
        return image(self.maps[k], self.levels[k]).order == FinAb.from_orders(self.levels[k]).order

    def surjective(self):
        return all(self.is_surjective(k) for k in range(len(self.maps)))

    @classmethod
    def constant(cls, M, length):
        o = _orders(M)
        return cls([o] * length, [np.eye(len(o), dtype=np.int64)] * (length - 1))

    @classmethod
    def cyclic_chain(cls, moduli):
        """``Z/m_0 <- Z/m_1 <- ...`` with reduction maps (needs ``m_k | m_{k+1}``)."""
        moduli = [int(m) for m in moduli]
        for a, b in zip(moduli, moduli[1:]):
            if b % a:
                raise TowerError(f"{a} does not divide {b}")
        levels = [[m] if m > 1 else [] for m in moduli]
        maps = []
        for k in range(len(moduli) - 1):
            maps.append(np.ones((len(levels[k]), len(levels[k + 1])), dtype=np.int64))
        return cls(levels, maps)

    def __repr__(self):
        return "GroupTower(" + " <- ".join(str(g) for g in self.groups()) + ")"

    def to_dict(self):
        return {"levels": [list(lv) for lv in self.levels],
                "maps": [m.tolist() for m in self.maps]}

    @classmethod
    def from_dict(cls, d):
        return cls(d["levels"], d["maps"])


@dataclass
class LimDescriptor:
    """Outcome of :func:`tower_lim`.

    ``constant`` is True when the eventual images stabilize with isomorphic
    transitions; then ``value`` is the limit.  Otherwise ``images`` is the
    stabilized image tower itself.
    """

    constant: bool
    value: object
    images: list
    stable_from: object
    image_tower: object = field(repr=False, default=None)

    def __str__(self):
        if self.constant:
            return f"stably constant with value {self.value} from level {self.stable_from}"
        return "image tower " + " <- ".join(str(g) for g in self.images)


def eventual_images(T):
    """``E_k = im(level L-1 -> level k)`` as Subquotients, for every k."""
    L = len(T)
    return [image(T.composite(L - 1, k), T.levels[k]) for k in range(L)]


def tower_lim(T):
    """Limit descriptor of a tower of finite abelian groups.

    The top level has no later level to test against, so only the images
    ``E_0 .. E_{L-2}`` are trusted.  The tower is stably constant when the
    (always surjective) maps between trusted images are bijective on a final
    segment; with two levels this needs the single transition to be bijective.
    """
    L = len(T)
    E = eventual_images(T)
    groups = [S.group for S in E]
    # image tower with induced transitions
    levels = [S.cyclic for S in E]
    maps = []
    for k in range(L - 1):
        W = T.maps[k].astype(object) @ E[k + 1].gens.astype(object)
        maps.append(E[k].classify(W) if E[k].cyclic else np.zeros((0, len(E[k + 1].cyclic)), dtype=np.int64))
    img_tower = GroupTower(levels, maps, validate=False)
    if L == 1:
        return LimDescriptor(True, groups[0], groups, 0, img_tower)
    if L == 2:
        iso = T.is_surjective(0) and groups[0].order == FinAb.from_orders(T.levels[1]).order
        return LimDescriptor(iso, groups[0] if iso else None, groups, 0 if iso else None, img_tower)
    trusted = groups[:L - 1]
    s = len(trusted) - 1
    while s > 0 and trusted[s - 1].order == trusted[s].order:
        s -= 1
    # a single trusted level at the end is not evidence of stabilization
    if s == len(trusted) - 1 and len(trusted) > 1:
        return LimDescriptor(False, None, groups, None, img_tower)
    return LimDescriptor(True, trusted[-1], groups, s, img_tower)


def _lim1_truncated(T, L):
    """Cokernel of ``x -> (x_k - t_k(x_{k+1}))`` from levels ``0..L-1`` to ``0..L-2``."""
    if L <= 1:
        return FinAb()
    src = [o for k in range(L) for o in T.levels[k]]
    dst = [o for k in range(L - 1) for o in T.levels[k]]
    if not dst:
        return FinAb()
    off_s = np.cumsum([0] + [len(T.levels[k]) for k in range(L)])
    off_d = np.cumsum([0] + [len(T.levels[k]) for k in range(L - 1)])
    F = np.zeros((len(dst), len(src)), dtype=np.int64)
    for k in range(L - 1):
        n = len(T.levels[k])
        F[off_d[k]:off_d[k] + n, off_s[k]:off_s[k] + n] += np.eye(n, dtype=np.int64)
        F[off_d[k]:off_d[k] + n, off_s[k + 1]:off_s[k + 1] + len(T.levels[k + 1])] -= T.maps[k]
    return cokernel(F, dst).group


def tower_lim1(T, return_history=False):
    """lim^1 of a tower of finite abelian groups.

    Computed as the cokernel of ``id - shift`` on each truncated product and
    required to be stable in the truncation length.  For finite levels the
    Mittag-Leffler condition holds and the answer is 0, which is asserted.
    """
    hist = [_lim1_truncated(T, L) for L in range(1, len(T) + 1)]
    result = hist[-1]
    if not result.is_trivial():
        raise AssertionError(f"lim^1 of a finite tower came out as {result}")
    if return_history:
        return result, hist
    return result


def mittag_leffler(T):
    """True when every level's images stabilize within the truncation."""
    L = len(T)
    for k in range(L):
        sizes = [image(T.composite(j, k), T.levels[k]).order for j in range(k, L)]
        if any(sizes[i + 1] > sizes[i] for i in range(len(sizes) - 1)):
            return False
    return True


# ----------------------------------------------------------------------------
# space towers


class SpaceTower:
    """Levels of simplicial sets with SMaps ``level k+1 -> level k``."""

    def __init__(self, levels, maps, validate=True):
        self.levels = list(levels)
        self.maps = list(maps)
        if len(self.maps) != len(self.levels) - 1:
            raise TowerError("need one transition per consecutive pair of levels")
        if validate:
            caps = {X.dim_cap for X in self.levels}
            if len(caps) > 1:
                raise TowerError("all levels must share dim_cap")
            for k, f in enumerate(self.maps):
                if f.source is not self.levels[k + 1] and f.source != self.levels[k + 1]:
                    raise TowerError(f"transition {k + 1} -> {k} has the wrong source")
                if f.target is not self.levels[k] and f.target != self.levels[k]:
                    raise TowerError(f"transition {k + 1} -> {k} has the wrong target")
                try:
                    f.validate()
                except SSetError as exc:
                    raise TowerError(f"transition {k + 1} -> {k}: {exc}") from None

    def __len__(self):
        return len(self.levels)

    @classmethod
    def constant(cls, X, length):
        from .simplicial import SMap
        return cls([X] * length, [SMap.identity(X)] * (length - 1))


@dataclass
class TowerMap:
    """Levelwise maps ``f_k: S_k -> T_k`` between space towers (or a constant source)."""

    source: object
    target: SpaceTower
    maps: list

    def source_level(self, k):
        return self.source.levels[k] if isinstance(self.source, SpaceTower) else self.source

    def validate(self):
        """Each map is simplicial and ``t_k o f_{k+1} = f_k o s_k``."""
        T = self.target
        if len(self.maps) != len(T):
            raise TowerError("need one map per level")
        for k, f in enumerate(self.maps):
            try:
                f.validate()
            except SSetError as exc:
                raise TowerError(f"level {k}: {exc}") from None
        for k in range(len(T) - 1):
            S = self.source_level(k + 1)
            for lv in S.nd:
                for x in lv:
                    lhs = T.maps[k](self.maps[k + 1](S.simplex(x)))
                    y = S.simplex(x)
                    if isinstance(self.source, SpaceTower):
                        y = self.source.maps[k](y)
                    if lhs != self.maps[k](y):
                        raise TowerError(f"maps do not commute with transitions at level {k} on {x!r}")
        return True
