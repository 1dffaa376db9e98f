"""Finite bounded lattices as dense integer-indexed order tables.

Elements are the integers 0..size-1.  The order is stored twice as tuples of
Python-int bitmasks: ``up[x]`` has bit y set iff x <= y, and ``down`` is the
transpose.  Meet and join are dense lookup tables built once at construction;
construction fails loudly (with a witness pair) if the input relation is not
a bounded lattice.  Covering pairs are kept in lexicographic order and are
the canonical row order for downstream context construction.

Text format, one directive per line:

    lattice <size>
    cover <x> <y>
    label <x> <text>

The full order is the reflexive-transitive closure of the cover lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# validate() skips the quadratic/cubic law sweeps above these sizes and
# reports a note instead.
EXHAUSTIVE_VALIDATION_CAP = 512
ASSOCIATIVITY_CAP = 64


class LatticeError(ValueError):
    """Input data does not describe a finite bounded lattice."""


class LatticeParseError(LatticeError):
    """Malformed lattice text; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ModularityError(LatticeError):
    """An operation that requires a modular lattice was given a non-modular one."""


def _bits(mask: int):
    """Iterate set bit positions of a Python int, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Diagnostics:
    """Result of validate(): law violations (with witnesses) plus skip notes."""

    failures: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class FiniteLattice:
    size: int
    up: tuple[int, ...]
    down: tuple[int, ...]
    meet_table: tuple[tuple[int, ...], ...]
    join_table: tuple[tuple[int, ...], ...]
    bottom: int
    top: int
    covers: tuple[tuple[int, int], ...]
    labels: tuple[str, ...]
    heights: tuple[int, ...]

    # -- construction ------------------------------------------------------

    @classmethod
    def from_leq(cls, up_masks, labels=None) -> "FiniteLattice":
        """Build from per-element up-set bitmasks, verifying lattice laws."""
        up = tuple(up_masks)
        n = len(up)
        if n == 0:
            raise LatticeError("a lattice needs at least one element")
        full = (1 << n) - 1
        for x in range(n):
            if up[x] & ~full:
                raise LatticeError(f"up-set of {x} mentions elements >= size {n}")
            if not (up[x] >> x) & 1:
                raise LatticeError(f"relation is not reflexive at element {x}")
        down = [0] * n
        for x in range(n):
            for y in _bits(up[x]):
                down[y] |= 1 << x
        for x in range(n):
            both = up[x] & down[x] & ~(1 << x)
            if both:
                y = next(_bits(both))
                raise LatticeError(f"relation is not antisymmetric: {x} <= {y} <= {x}")
        for x in range(n):
            for y in _bits(up[x]):
                if up[y] & ~up[x]:
                    z = next(_bits(up[y] & ~up[x]))
                    raise LatticeError(
                        f"relation is not transitive: {x} <= {y} <= {z} but not {x} <= {z}"
                    )
        bottoms = [x for x in range(n) if up[x] == full]
        tops = [x for x in range(n) if down[x] == full]
        if len(bottoms) != 1:
            raise LatticeError(f"no unique bottom element (found {bottoms})")
        if len(tops) != 1:
            raise LatticeError(f"no unique top element (found {tops})")

        meet_t = [[0] * n for _ in range(n)]
        join_t = [[0] * n for _ in range(n)]
        for x in range(n):
            meet_t[x][x] = x
            join_t[x][x] = x
            for y in range(x + 1, n):
                common = down[x] & down[y]
                m = _extreme(common, down)
                if m is None:
                    raise LatticeError(f"elements {x} and {y} have no meet")
                meet_t[x][y] = meet_t[y][x] = m
                common = up[x] & up[y]
                j = _extreme(common, up)
                if j is None:
                    raise LatticeError(f"elements {x} and {y} have no join")
                join_t[x][y] = join_t[y][x] = j

        covers = []
        for x in range(n):
            strict = up[x] & ~(1 << x)
            for y in _bits(strict):
                if not strict & (down[y] & ~(1 << y)):
                    covers.append((x, y))
        covers.sort()

        heights = [0] * n
        order = sorted(range(n), key=lambda x: down[x].bit_count())
        for x in order:
            below = down[x] & ~(1 << x)
            if below:
                heights[x] = 1 + max(heights[z] for z in _bits(below))

        if labels is None:
            labels = tuple(str(x) for x in range(n))
        else:
            labels = tuple(labels)
            if len(labels) != n:
                raise LatticeError(f"expected {n} labels, got {len(labels)}")

        return cls(
            size=n,
            up=up,
            down=tuple(down),
            meet_table=tuple(tuple(r) for r in meet_t),
            join_table=tuple(tuple(r) for r in join_t),
            bottom=bottoms[0],
            top=tops[0],
            covers=tuple(covers),
            labels=labels,
            heights=tuple(heights),
        )

    @classmethod
    def from_relation(cls, size: int, pairs, labels=None) -> "FiniteLattice":
        """Build from arbitrary order-generating pairs (closure is taken)."""
        up = [1 << x for x in range(size)]
        succ = [0] * size
        for x, y in pairs:
            if not (0 <= x < size and 0 <= y < size):
                raise LatticeError(f"pair ({x}, {y}) out of range for size {size}")
            succ[x] |= 1 << y
        changed = True
        while changed:  # reflexive-transitive closure to a fixed point
            changed = False
            for x in range(size):
                acc = up[x]
                for y in _bits(acc):
                    acc |= succ[y] | up[y]
                if acc != up[x]:
                    up[x] = acc
                    changed = True
        return cls.from_leq(up, labels)

    from_covers = from_relation

    # -- order primitives --------------------------------------------------

    def le(self, x: int, y: int) -> bool:
        return bool((self.up[x] >> y) & 1)

    def meet(self, x: int, y: int) -> int:
        return self.meet_table[x][y]

    def join(self, x: int, y: int) -> int:
        return self.join_table[x][y]

    def covering_relations(self) -> tuple[tuple[int, int], ...]:
        return self.covers

    def comparable_pairs(self, strict: bool = True):
        """Yield comparable pairs (x, y) with x <= y, lexicographically."""
        for x in range(self.size):
            for y in _bits(self.up[x]):
                if strict and y == x:
                    continue
                yield (x, y)

    # -- derived structure -------------------------------------------------

    def opposite(self) -> "FiniteLattice":
        """The order-dual lattice on the same element indices."""
        return FiniteLattice.from_leq(self.down, self.labels)

    def modularity_witness(self):
        """A triple (x, y, z) with x <= z violating the modular law, or None."""
        mt, jt = self.meet_table, self.join_table
        for x in range(self.size):
            for z in _bits(self.up[x]):
                for y in range(self.size):
                    if jt[x][mt[y][z]] != mt[jt[x][y]][z]:
                        return (x, y, z)
        return None

    def is_modular(self) -> bool:
        return self.modularity_witness() is None

    def serialize(self) -> str:
        out = [f"lattice {self.size}"]
        out.extend(f"cover {x} {y}" for x, y in self.covers)
        out.extend(
            f"label {x} {self.labels[x]}"
            for x in range(self.size)
            if self.labels[x] != str(x)
        )
        return "\n".join(out) + "\n"


def _extreme(candidates: int, dirmask) -> int | None:
    """The candidate whose direction-set equals the candidate set, if any.

    For meets: dirmask = down, candidates = common lower bounds; the greatest
    lower bound is the unique candidate m with down[m] == candidates (popcount
    comparison suffices because down[m] is always a subset of the candidates).
    """
    target = candidates.bit_count()
    for z in _bits(candidates):
        if dirmask[z].bit_count() == target:
            return z
    return None


def validate(
    lat: FiniteLattice,
    exhaustive_cap: int = EXHAUSTIVE_VALIDATION_CAP,
    associativity_cap: int = ASSOCIATIVITY_CAP,
) -> Diagnostics:
    """Re-check all stored invariants of a FiniteLattice instance.

    Returns empty failures iff every law holds.  Above ``exhaustive_cap``
    elements the quadratic sweeps are skipped with a note; the cubic
    associativity sweep is skipped above ``associativity_cap``.
    """
    failures: list[str] = []
    notes: list[str] = []
    n = lat.size
    full = (1 << n) - 1

    for x in range(n):
        if not (lat.up[x] >> x) & 1:
            failures.append(f"reflexivity fails at ({x}, {x}, -)")
    for x in range(n):
        for y in _bits(lat.up[x] & ~(1 << x)):
            if (lat.up[y] >> x) & 1:
                failures.append(f"antisymmetry fails at ({x}, {y}, -)")
            if lat.up[y] & ~lat.up[x]:
                z = next(_bits(lat.up[y] & ~lat.up[x]))
                failures.append(f"transitivity fails at ({x}, {y}, {z})")
    for x in range(n):
        mask = 0
        for y in range(n):
            if (lat.up[y] >> x) & 1:
                mask |= 1 << y
        if mask != lat.down[x]:
            failures.append(f"down-set table disagrees with up-set table at ({x}, -, -)")
    if lat.up[lat.bottom] != full:
        failures.append(f"bottom {lat.bottom} is not below every element")
    if lat.down[lat.top] != full:
        failures.append(f"top {lat.top} is not above every element")

    if n <= exhaustive_cap:
        for x in range(n):
            for y in range(n):
                m = lat.meet_table[x][y]
                common = lat.down[x] & lat.down[y]
                if not ((common >> m) & 1 and lat.down[m] == common):
                    failures.append(f"meet law fails at ({x}, {y}, {m})")
                j = lat.join_table[x][y]
                common = lat.up[x] & lat.up[y]
                if not ((common >> j) & 1 and lat.up[j] == common):
                    failures.append(f"join law fails at ({x}, {y}, {j})")
        expected = []
        for x in range(n):
            strict = lat.up[x] & ~(1 << x)
            for y in _bits(strict):
                if not strict & (lat.down[y] & ~(1 << y)):
                    expected.append((x, y))
        if tuple(sorted(expected)) != lat.covers:
            failures.append("covers list disagrees with the order relation (-, -, -)")
    else:
        notes.append(
            f"size {n} exceeds exhaustive validation cap {exhaustive_cap}; "
            "meet/join/cover sweeps skipped"
        )

    if n <= associativity_cap:
        mt, jt = lat.meet_table, lat.join_table
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if mt[mt[x][y]][z] != mt[x][mt[y][z]]:
                        failures.append(f"meet associativity fails at ({x}, {y}, {z})")
                    if jt[jt[x][y]][z] != jt[x][jt[y][z]]:
                        failures.append(f"join associativity fails at ({x}, {y}, {z})")
    elif n <= exhaustive_cap:
        notes.append(
            f"size {n} exceeds associativity cap {associativity_cap}; cubic sweep skipped"
        )

    return Diagnostics(tuple(failures), tuple(notes))


def parse_lattice(text: str) -> FiniteLattice:
    """Parse the lattice text format; errors carry 1-based line numbers."""
    size = None
    pairs: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 2)
        if parts[0] == "lattice":
            if size is not None:
                raise LatticeParseError("duplicate 'lattice' directive", lineno)
            try:
                size = int(parts[1])
            except (IndexError, ValueError):
                raise LatticeParseError("expected 'lattice <size>'", lineno) from None
            if size < 1:
                raise LatticeParseError("size must be positive", lineno)
        elif parts[0] == "cover":
            if size is None:
                raise LatticeParseError("'cover' before 'lattice' directive", lineno)
            try:
                x, y = int(parts[1]), parts[2].split()[0]
                y = int(y)
            except (IndexError, ValueError):
                raise LatticeParseError("expected 'cover <x> <y>'", lineno) from None
            if not (0 <= x < size and 0 <= y < size):
                raise LatticeParseError(f"cover ({x}, {y}) out of range", lineno)
            pairs.append((x, y))
        elif parts[0] == "label":
            if size is None:
                raise LatticeParseError("'label' before 'lattice' directive", lineno)
            try:
                x = int(parts[1])
                text_label = parts[2]
            except (IndexError, ValueError):
                raise LatticeParseError("expected 'label <x> <text>'", lineno) from None
            if not 0 <= x < size:
                raise LatticeParseError(f"label index {x} out of range", lineno)
            labels[x] = text_label
        else:
            raise LatticeParseError(f"unknown directive {parts[0]!r}", lineno)
    if size is None:
        raise LatticeParseError("missing 'lattice <size>' directive", 1)
    label_list = [labels.get(x, str(x)) for x in range(size)]
    return FiniteLattice.from_relation(size, pairs, label_list)


def is_isomorphic(a: FiniteLattice, b: FiniteLattice) -> bool:
    """Order-isomorphism test via the cover digraphs."""
    if a.size != b.size or len(a.covers) != len(b.covers):
        return False
    if sorted(a.heights) != sorted(b.heights):
        return False
    import networkx as nx

    ga, gb = nx.DiGraph(list(a.covers)), nx.DiGraph(list(b.covers))
    ga.add_nodes_from(range(a.size))
    gb.add_nodes_from(range(b.size))
    return nx.is_isomorphic(ga, gb)
