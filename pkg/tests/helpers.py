"""Shared test utilities: exhaustive small-lattice generation and named families."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from satsys.builders import chain, diamond
from satsys.lattice import FiniteLattice, LatticeError, is_isomorphic

N5_COVERS = [(0, 1), (1, 4), (0, 2), (2, 3), (3, 4)]


def pentagon() -> FiniteLattice:
    return FiniteLattice.from_relation(5, N5_COVERS)


def stacked_pentagon(extra: int) -> FiniteLattice:
    """A chain of ``extra`` elements glued below a pentagon (size 5 + extra)."""
    shift = extra
    covers = [(i, i + 1) for i in range(extra)]
    covers += [(a + shift, b + shift) for a, b in N5_COVERS]
    return FiniteLattice.from_relation(5 + extra, covers)


def boolean_cube() -> FiniteLattice:
    """The lattice of subsets of a 3-element set."""
    up = [sum(1 << t for t in range(8) if (s & t) == s) for s in range(8)]
    return FiniteLattice.from_leq(up)


@lru_cache(maxsize=None)
def all_lattices(n: int) -> tuple[FiniteLattice, ...]:
    """Every lattice order on {0..n-1} whose index order is a linear extension.

    Each isomorphism class of n-element lattices appears at least once, so a
    property checked over this family holds for all lattices of size n.
    """
    if n == 1:
        return (FiniteLattice.from_leq([1]),)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    found = []
    full = (1 << n) - 1
    for mask in range(1 << len(pairs)):
        up = [1 << i for i in range(n)]
        for t, (i, j) in enumerate(pairs):
            if (mask >> t) & 1:
                up[i] |= 1 << j
        # cheap pre-filters: transitive, bottom 0, top n-1
        if up[0] != full:
            continue
        ok = all((u >> (n - 1)) & 1 for u in up)
        if ok:
            for i in range(n):
                m = up[i] & (up[i] - 1)  # drop bit i (lowest set bit is i)
                while m:
                    j = (m & -m).bit_length() - 1
                    if up[j] & ~up[i]:
                        ok = False
                        break
                    m &= m - 1
                if not ok:
                    break
        if not ok:
            continue
        try:
            found.append(FiniteLattice.from_leq(up))
        except LatticeError:
            continue
    return tuple(found)


def lattices_up_to(n: int):
    for k in range(1, n + 1):
        yield from all_lattices(k)


def named_lattices_7_8() -> list[FiniteLattice]:
    """Hand-picked 7- and 8-element lattices, modular and non-modular."""
    return [
        chain(6),
        chain(7),
        diamond(5),
        diamond(6),
        boolean_cube(),
        stacked_pentagon(2),
        stacked_pentagon(3),
    ]


def has_pentagon_sublattice(lat: FiniteLattice) -> bool:
    """Independent modularity test: search for an N_5 sublattice directly.

    A subset closed under the ambient meet and join is a sublattice; by
    Dedekind's criterion the lattice is non-modular iff some such subset is
    order-isomorphic to the pentagon.
    """
    n5 = pentagon()
    mt, jt = lat.meet_table, lat.join_table
    for subset in combinations(range(lat.size), 5):
        closed = True
        members = set(subset)
        for x in subset:
            for y in subset:
                if mt[x][y] not in members or jt[x][y] not in members:
                    closed = False
                    break
            if not closed:
                break
        if not closed:
            continue
        order = sorted(subset)
        up = [
            sum(1 << j for j, b in enumerate(order) if lat.le(a, b))
            for a in order
        ]
        try:
            induced = FiniteLattice.from_leq(up)
        except LatticeError:
            continue
        if is_isomorphic(induced, n5):
            return True
    return False
