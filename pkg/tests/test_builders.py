"""Builders: subspace lattices over F_p, chains, diamonds, file loading."""

import random

import pytest

from satsys.builders import (
    chain,
    diamond,
    enumerate_subspaces,
    load_lattice,
    subspace_lattice,
)
from satsys.lattice import LatticeError, is_isomorphic
from satsys.qstats import a_direct, count_join_irr, qbinom


def test_chain_shapes():
    assert chain(0).size == 1
    lat = chain(3)
    assert lat.size == 4
    assert len(lat.covers) == 3
    for k in range(11):
        assert chain(k).is_modular()


def test_diamond_shapes():
    lat = diamond(3)
    assert lat.size == 5
    assert lat.labels[0] == "bot"
    assert sorted(lat.heights) == [0, 1, 1, 1, 2]


def test_subspace_sizes():
    assert subspace_lattice(2, 2).size == 5
    assert subspace_lattice(5, 3).size == 64
    assert subspace_lattice(7, 1).size == 2
    for p in (2, 3, 5, 7):
        for n in range(5):
            if a_direct(n, p) <= 512:
                assert subspace_lattice(p, n).size == a_direct(n, p)


def test_subspace_cover_counts_match_join_irreducibles():
    for p, n in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (5, 3), (7, 2)]:
        lat = subspace_lattice(p, n)
        assert len(lat.covers) == count_join_irr(n, p)


def test_subspace_dimension_strata():
    subs = enumerate_subspaces(3, 3)
    by_dim = {}
    for s in subs:
        by_dim[s.dim] = by_dim.get(s.dim, 0) + 1
    for i in range(4):
        assert by_dim[i] == qbinom(3, i, 3)


def test_subspace_meet_is_intersection():
    rng = random.Random(7)
    lat = subspace_lattice(3, 3)
    subs = enumerate_subspaces(3, 3)
    for _ in range(50):
        i, j = rng.randrange(lat.size), rng.randrange(lat.size)
        m = lat.meet_table[i][j]
        expected = set(subs[i].vectors) & set(subs[j].vectors)
        assert set(subs[m].vectors) == expected


def test_subspace_join_is_spanned_sum():
    lat = subspace_lattice(2, 3)
    subs = enumerate_subspaces(2, 3)
    for i in range(lat.size):
        for j in range(lat.size):
            join = set(subs[lat.join_table[i][j]].vectors)
            assert set(subs[i].vectors) <= join
            assert set(subs[j].vectors) <= join
            # minimality: every subspace containing both contains the join
            for k in range(lat.size):
                vk = set(subs[k].vectors)
                if set(subs[i].vectors) <= vk and set(subs[j].vectors) <= vk:
                    assert join <= vk


def test_subspace_known_isomorphisms():
    assert is_isomorphic(subspace_lattice(2, 2), diamond(3))
    assert is_isomorphic(subspace_lattice(3, 2), diamond(4))
    assert is_isomorphic(subspace_lattice(5, 2), diamond(6))
    assert is_isomorphic(subspace_lattice(7, 1), chain(1))


def test_subspace_modular():
    assert subspace_lattice(2, 3).is_modular()
    assert subspace_lattice(5, 3).is_modular()


def test_subspace_rejects_bad_input():
    with pytest.raises(ValueError):
        subspace_lattice(4, 2)  # not prime
    with pytest.raises(ValueError):
        subspace_lattice(2, -1)
    with pytest.raises(ValueError):
        subspace_lattice(2, 10)  # over the size cap
    with pytest.raises(ValueError):
        subspace_lattice(2, 12, max_size=100)


def test_subspace_labels_deterministic():
    a = subspace_lattice(3, 2)
    b = subspace_lattice(3, 2)
    assert a.labels == b.labels
    assert a.labels[0] == "0"


def test_load_lattice(tmp_path):
    path = tmp_path / "m3.lat"
    path.write_text("lattice 5\ncover 0 1\ncover 0 2\ncover 0 3\n"
                    "cover 1 4\ncover 2 4\ncover 3 4\n")
    lat = load_lattice(path)
    assert lat.size == 5
    assert is_isomorphic(lat, diamond(3))


def test_load_pentagon_file(tmp_path):
    path = tmp_path / "n5.lat"
    path.write_text("lattice 5\ncover 0 1\ncover 1 4\ncover 0 2\n"
                    "cover 2 3\ncover 3 4\n")
    lat = load_lattice(path)
    assert not lat.is_modular()


def test_load_rejects_non_lattice(tmp_path):
    path = tmp_path / "bad.lat"
    path.write_text("lattice 3\ncover 0 1\ncover 0 2\n")
    with pytest.raises(LatticeError):
        load_lattice(path)
