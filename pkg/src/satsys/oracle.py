"""Independent brute-force enumerations used to cross-check the fast paths.

Three oracles, deliberately sharing no code with the engines they audit and
none with each other:

  * ``enumerate_saturated_brute``: backtracking over subsets of the covering
    relations, pruning on the restriction and three-out-of-four conditions.
  * ``enumerate_transfer_brute``: backtracking over subsets of the
    non-identity comparable pairs, pruning on transitivity and restriction.
  * ``closure_count_oracle``: the powerset route; derive every attribute
    subset twice and count distinct closures.

All three are exponential by design and refuse inputs above their caps
rather than truncating.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arrows import ArrowSet, SaturatedCover
from .context import FormalContext
from .lattice import FiniteLattice, ModularityError, _bits

SAT_COVER_CAP = 24
TRANSFER_PAIR_CAP = 20
CLOSURE_ATTR_CAP = 20


class OracleCapExceeded(ValueError):
    """The instance is too large for exhaustive search; nothing was computed."""


@dataclass(frozen=True)
class EnumerationReport:
    count: int
    witnesses: tuple | None
    method: str


def enumerate_saturated_brute(
    lat: FiniteLattice,
    cap: int = SAT_COVER_CAP,
    collect_witnesses: bool = False,
    witness_cap: int = 1 << 20,
) -> EnumerationReport:
    """Count saturated transfer systems by searching subsets of cover edges.

    Requires a modular lattice.  With ``collect_witnesses`` the report also
    carries one SaturatedCover per system (all of them, or none if the count
    exceeds ``witness_cap``).
    """
    if not lat.is_modular():
        raise ModularityError(
            "saturated-cover search requires a modular lattice; "
            f"witness {lat.modularity_witness()}"
        )
    edges = list(lat.covers)
    if len(edges) > cap:
        raise OracleCapExceeded(
            f"{len(edges)} covering relations exceed the cap {cap}"
        )
    index = {e: i for i, e in enumerate(edges)}
    mt, jt = lat.meet_table, lat.join_table
    n = lat.size

    # restriction: edge (x, x v y) present forces (x ^ y, y) present
    implications: set[tuple[int, int]] = set()
    for x in range(n):
        for y in range(n):
            j = jt[x][y]
            if j != x and (x, j) in index:
                m = mt[x][y]
                if m != y:
                    implications.add((index[(x, j)], index[(m, y)]))
    # three-out-of-four on each diamond x ^ y < {x, y} < x v y
    quads: set[tuple[int, int, int, int]] = set()
    for x in range(n):
        for y in range(x + 1, n):
            m = mt[x][y]
            if (m, x) in index and (m, y) in index:
                t = jt[x][y]
                quads.add(
                    (index[(m, x)], index[(m, y)], index[(x, t)], index[(y, t)])
                )

    # bucket every constraint at its highest edge index, so each is checked
    # exactly once, as soon as all of its edges are decided
    impl_at: list[list[tuple[int, int]]] = [[] for _ in edges]
    quad_at: list[list[tuple[int, int, int, int]]] = [[] for _ in edges]
    for a, b in implications:
        impl_at[max(a, b)].append((a, b))
    for q in quads:
        quad_at[max(q)].append(q)

    count = 0
    witnesses: list[SaturatedCover] | None = [] if collect_witnesses else None

    def admissible(chosen: int, t: int) -> bool:
        for a, b in impl_at[t]:
            if (chosen >> a) & 1 and not (chosen >> b) & 1:
                return False
        for q in quad_at[t]:
            present = sum((chosen >> e) & 1 for e in q)
            if present == 3:
                return False
        return True

    def search(t: int, chosen: int):
        nonlocal count, witnesses
        if t == len(edges):
            count += 1
            if witnesses is not None:
                if len(witnesses) >= witness_cap:
                    witnesses = None
                else:
                    witnesses.append(
                        SaturatedCover(
                            lat,
                            frozenset(edges[i] for i in _bits(chosen)),
                        )
                    )
            return
        for bit in (0, 1):
            nxt = chosen | (bit << t)
            if admissible(nxt, t):
                search(t + 1, nxt)

    if edges:
        search(0, 0)
    else:
        count = 1
        if witnesses is not None:
            witnesses.append(SaturatedCover(lat, frozenset()))
    return EnumerationReport(
        count,
        tuple(witnesses) if witnesses is not None else None,
        "saturated-cover-backtracking",
    )


def enumerate_transfer_brute(
    lat: FiniteLattice,
    cap: int = TRANSFER_PAIR_CAP,
    collect_witnesses: bool = False,
    witness_cap: int = 1 << 20,
) -> EnumerationReport:
    """Count transfer systems by searching subsets of comparable pairs."""
    pairs = list(lat.comparable_pairs(strict=True))
    if len(pairs) > cap:
        raise OracleCapExceeded(
            f"{len(pairs)} non-identity comparable pairs exceed the cap {cap}"
        )
    index = {e: i for i, e in enumerate(pairs)}
    mt = lat.meet_table

    # transitivity: (x, y) and (y, z) force (x, z)
    triples: set[tuple[int, int, int]] = set()
    for x, y in pairs:
        for y2, z in pairs:
            if y2 == y and z != x:
                triples.add((index[(x, y)], index[(y, z)], index[(x, z)]))
    # restriction: (x, y) forces (x ^ z, z) for every z <= y
    implications: set[tuple[int, int]] = set()
    for x, y in pairs:
        for z in _bits(lat.down[y]):
            m = mt[x][z]
            if m != z:
                implications.add((index[(x, y)], index[(m, z)]))

    impl_at: list[list[tuple[int, int]]] = [[] for _ in pairs]
    trip_at: list[list[tuple[int, int, int]]] = [[] for _ in pairs]
    for a, b in implications:
        impl_at[max(a, b)].append((a, b))
    for a, b, c in triples:
        trip_at[max(a, b, c)].append((a, b, c))

    count = 0
    witnesses: list[ArrowSet] | None = [] if collect_witnesses else None

    def admissible(chosen: int, t: int) -> bool:
        for a, b in impl_at[t]:
            if (chosen >> a) & 1 and not (chosen >> b) & 1:
                return False
        for a, b, c in trip_at[t]:
            if (chosen >> a) & 1 and (chosen >> b) & 1 and not (chosen >> c) & 1:
                return False
        return True

    def search(t: int, chosen: int):
        nonlocal count, witnesses
        if t == len(pairs):
            count += 1
            if witnesses is not None:
                if len(witnesses) >= witness_cap:
                    witnesses = None
                else:
                    witnesses.append(
                        ArrowSet.from_pairs(
                            lat, [pairs[i] for i in _bits(chosen)]
                        )
                    )
            return
        for bit in (0, 1):
            nxt = chosen | (bit << t)
            if admissible(nxt, t):
                search(t + 1, nxt)

    if pairs:
        search(0, 0)
    else:
        count = 1
        if witnesses is not None:
            witnesses.append(ArrowSet.identities(lat))
    return EnumerationReport(
        count,
        tuple(witnesses) if witnesses is not None else None,
        "transfer-pair-backtracking",
    )


def closure_count_oracle(ctx: FormalContext, cap: int = CLOSURE_ATTR_CAP) -> EnumerationReport:
    """Count concepts as distinct double-derivations over all attribute sets."""
    k = ctx.n_attributes
    if k > cap:
        raise OracleCapExceeded(f"{k} attributes exceed the cap {cap}")
    full_extent = (1 << ctx.n_objects) - 1
    full_intent = (1 << k) - 1
    closures: set[int] = set()
    for subset in range(1 << k):
        extent = full_extent
        m = subset
        while m:
            low = m & -m
            extent &= ctx.cols[low.bit_length() - 1]
            m ^= low
        intent = full_intent
        m = extent
        while m:
            low = m & -m
            intent &= ctx.rows[low.bit_length() - 1]
            m ^= low
        closures.add(intent)
    return EnumerationReport(len(closures), None, "powerset-closure")
