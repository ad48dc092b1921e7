from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phk.abelian import FinAb, image
from phk.cohomology import cohomology, pi0
from phk.corpus import bzn_tower, collapse_map, circle_subdivided
from phk.simplicial import SMap, standard_space
from phk.towers import (GroupTower, SpaceTower, TowerError, TowerMap, eventual_images,
                        mittag_leffler, tower_lim, tower_lim1)


def random_tower(rng, length=None, max_coords=2):
    length = length or rng.randint(1, 6)
    levels = [[rng.choice([2, 3, 4, 6, 8, 9]) for _ in range(rng.randint(0, max_coords))]
              for _ in range(length)]
    maps = []
    for k in range(length - 1):
        src, dst = levels[k + 1], levels[k]
        F = np.zeros((len(dst), len(src)), dtype=np.int64)
        for i, d in enumerate(dst):
            for j, o in enumerate(src):
                F[i, j] = (d // gcd(d, o)) * rng.randint(0, d)
        maps.append(F)
    return GroupTower(levels, maps)


def test_constant_tower():
    M = FinAb.from_orders([2, 4])
    lim = tower_lim(GroupTower.constant(M, 4))
    assert lim.constant and lim.value == M
    assert tower_lim1(GroupTower.constant(M, 4)) == FinAb()


def test_two_adic_tower_is_its_own_image_tower():
    T = GroupTower.cyclic_chain([2, 4, 8, 16, 32])
    lim = tower_lim(T)
    assert not lim.constant
    assert lim.images == T.groups()
    assert T.surjective()


def test_zero_map_tower():
    levels = [[2], [], [2], [], [2]]
    maps = [np.zeros((len(levels[k]), len(levels[k + 1])), dtype=np.int64) for k in range(4)]
    lim = tower_lim(GroupTower(levels, maps))
    assert lim.constant and lim.value == FinAb()


def test_single_level_tower():
    T = GroupTower([[3]], [])
    assert tower_lim(T).value == FinAb.cyclic(3)
    assert tower_lim1(T) == FinAb()


def test_non_homomorphism_rejected():
    with pytest.raises(TowerError):
        GroupTower([[2], [3]], [np.array([[1]])])


def test_lim1_vanishes_on_random_towers(rng):
    for _ in range(100):
        T = random_tower(rng)
        value, hist = tower_lim1(T, return_history=True)
        assert value == FinAb()
        assert all(h == FinAb() for h in hist)
        assert mittag_leffler(T)


def test_eventual_images_nested(rng):
    for _ in range(30):
        T = random_tower(rng)
        L = len(T)
        for k in range(L):
            prev = None
            for j in range(k, L):
                size = image(T.composite(j, k), T.levels[k]).order
                assert prev is None or size <= prev
                prev = size


@given(st.integers(0, 10_000))
def test_image_tower_transitions_are_onto(s):
    import random
    T = random_tower(random.Random(s), 4)
    lim = tower_lim(T)
    I = lim.image_tower
    for k in range(len(I) - 1):
        assert image(I.maps[k], I.levels[k]).order == lim.images[k].order


@given(st.integers(0, 10_000), st.integers(0, 7))
def test_levelwise_scalar_map_sends_images_into_images(s, c):
    # multiplication by c commutes with every transition, so it maps E_k into E_k
    import random
    T = random_tower(random.Random(s), 4)
    for S in eventual_images(T):
        if not S.cyclic:
            continue
        W = c * S.gens.astype(object)
        assert image(np.hstack([S.gens.astype(object), W]), S.orders).order == S.order


def test_space_tower_validation():
    T = bzn_tower(3, 2)
    assert len(T) == 3
    assert [X.counts()[1] for X in T.levels] == [0, 1, 5]
    bad = SMap(T.levels[1], T.levels[1], {x: T.levels[1].simplex(x) for lv in T.levels[1].nd
                                          for x in lv}, validate=False)
    with pytest.raises(TowerError):
        SpaceTower([T.levels[0], T.levels[1]], [bad])


def test_constant_space_tower_pi0():
    S1 = standard_space("circle", D=3)
    levels, maps = pi0(SpaceTower.constant(S1, 3))
    assert levels == [["0"]] * 3
    assert maps == [{"0": "0"}] * 2


def test_tower_map_validates_commutation():
    f = collapse_map(3)
    X = circle_subdivided(3)
    S = SpaceTower.constant(X, 3)
    T = SpaceTower.constant(f.target, 3)
    TowerMap(S, T, [f] * 3).validate()


def test_levelwise_equivalence_has_isomorphic_colimits():
    # constant towers joined by the collapse map: cohomology agrees level by level
    f = collapse_map(4)
    S = SpaceTower.constant(f.source, 3)
    T = SpaceTower.constant(f.target, 3)
    TowerMap(S, T, [f] * 3).validate()
    for n in range(3):
        for m in (2, 3):
            assert [cohomology(X, [m], n) for X in S.levels] == \
                [cohomology(Y, [m], n) for Y in T.levels]


def test_group_tower_dict_round_trip(rng):
    T = random_tower(rng, 4)
    U = GroupTower.from_dict(T.to_dict())
    assert U.levels == T.levels
    assert all((a == b).all() for a, b in zip(U.maps, T.maps))


def test_tower_files_round_trip(tmp_path):
    from phk.files import load_tower, write_tower
    T = bzn_tower(3, 2)
    U = load_tower(write_tower(T, tmp_path / "t"))
    assert [X.to_json() for X in U.levels] == [X.to_json() for X in T.levels]
    assert all(f.images == g.images for f, g in zip(U.maps, T.maps))
