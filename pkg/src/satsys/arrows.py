"""Transfer systems and their relatives on a finite lattice.

An ArrowSet is a relation refining the lattice order, stored as one bitmask
row per source element; identity arrows are always present by convention.
A transfer system is a reflexive-transitive refinement closed under meet
restriction; a cotransfer system is the dual notion; a saturated transfer
system additionally satisfies two-out-of-three on composable chains.

Generation follows the single-step span formula: the system generated by a
set X of arrows is the reflexive-transitive closure of
{ z ^ a -> z : (a -> b) in X, z <= b }.  Saturation closure is the one-pass
rule T' = { b -> c : b <= c and some a <= b has a -> c in T }.

Lifting:  f = (x <= y) lifts against g = (x' <= y') when x <= x' and y <= y'
force y <= x'.  ``right_lift(L, X)`` is the set of arrows every member of X
lifts against, ``left_lift`` the other side; the pair exchanges transfer
systems with cotransfer systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import FiniteLattice, ModularityError, _bits


class ArrowSetError(ValueError):
    """An ArrowSet operation was given data violating its precondition."""


@dataclass(frozen=True)
class ArrowSet:
    """A set of comparable pairs of a fixed lattice, as bitmask rows.

    ``rows[x]`` has bit y set iff the arrow x -> y is present.  Equality and
    hashing use the rows only; callers are responsible for not mixing
    lattices.
    """

    lattice: FiniteLattice = field(compare=False, hash=False)
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.lattice.size:
            raise ArrowSetError(
                f"expected {self.lattice.size} rows, got {len(self.rows)}"
            )
        for x, row in enumerate(self.rows):
            if row & ~self.lattice.up[x]:
                y = next(_bits(row & ~self.lattice.up[x]))
                raise ArrowSetError(f"arrow {x} -> {y} is not a comparable pair")

    @classmethod
    def from_pairs(cls, lattice: FiniteLattice, pairs) -> "ArrowSet":
        """Build from (x, y) pairs; identity arrows are added automatically."""
        rows = [1 << x for x in range(lattice.size)]
        for x, y in pairs:
            rows[x] |= 1 << y
        return cls(lattice, tuple(rows))

    @classmethod
    def identities(cls, lattice: FiniteLattice) -> "ArrowSet":
        return cls(lattice, tuple(1 << x for x in range(lattice.size)))

    @classmethod
    def complete(cls, lattice: FiniteLattice) -> "ArrowSet":
        """Every comparable pair; the largest transfer system."""
        return cls(lattice, lattice.up)

    def contains(self, x: int, y: int) -> bool:
        return bool((self.rows[x] >> y) & 1)

    def pairs(self, strict: bool = True):
        """Arrows in lexicographic order; identities skipped when strict."""
        for x, row in enumerate(self.rows):
            if strict:
                row &= ~(1 << x)
            for y in _bits(row):
                yield (x, y)

    def issubset(self, other: "ArrowSet") -> bool:
        return all(r & ~s == 0 for r, s in zip(self.rows, other.rows))

    def arrow_count(self, strict: bool = False) -> int:
        total = sum(r.bit_count() for r in self.rows)
        return total - self.lattice.size if strict else total

    def serialize(self) -> str:
        return "".join(f"arrow {x} {y}\n" for x, y in self.pairs(strict=False))


@dataclass(frozen=True)
class SaturatedCover:
    """A subset of the covering relations, the compressed form of a saturated
    transfer system on a modular lattice."""

    lattice: FiniteLattice = field(compare=False, hash=False)
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        cover_set = set(self.lattice.covers)
        for e in self.edges:
            if e not in cover_set:
                raise ArrowSetError(f"edge {e} is not a covering relation")


def _as_pairs(x):
    if isinstance(x, ArrowSet):
        return list(x.pairs(strict=True))
    return list(x)


def is_transfer_system(t: ArrowSet) -> bool:
    """Reflexive, transitive, order-refining, closed under meet restriction."""
    lat = t.lattice
    for x in range(lat.size):
        if not t.contains(x, x):
            return False
        for y in _bits(t.rows[x]):
            if t.rows[y] & ~t.rows[x]:  # transitivity
                return False
    mt = lat.meet_table
    for x, y in t.pairs(strict=True):
        for z in _bits(lat.down[y]):
            if not t.contains(mt[x][z], z):
                return False
    return True


def is_cotransfer_system(t: ArrowSet) -> bool:
    """The dual condition: closed under join corestriction."""
    lat = t.lattice
    for x in range(lat.size):
        if not t.contains(x, x):
            return False
        for y in _bits(t.rows[x]):
            if t.rows[y] & ~t.rows[x]:
                return False
    jt = lat.join_table
    for x, y in t.pairs(strict=True):
        for z in _bits(lat.up[x]):
            if not t.contains(z, jt[y][z]):
                return False
    return True


def is_saturated(t: ArrowSet) -> bool:
    """Two-out-of-three: x -> z forces y -> z for every x <= y <= z.

    Raises ArrowSetError when t is not a transfer system at all.
    """
    if not is_transfer_system(t):
        raise ArrowSetError("is_saturated requires a transfer system")
    lat = t.lattice
    for x, z in t.pairs(strict=True):
        between = lat.up[x] & lat.down[z]
        for y in _bits(between):
            if not t.contains(y, z):
                return False
    return True


def generate_transfer(lattice: FiniteLattice, arrows) -> ArrowSet:
    """Least transfer system containing the given arrows."""
    rows = [1 << x for x in range(lattice.size)]
    mt = lattice.meet_table
    for a, b in _as_pairs(arrows):
        if not lattice.le(a, b):
            raise ArrowSetError(f"arrow {a} -> {b} is not a comparable pair")
        for z in _bits(lattice.down[b]):
            rows[mt[z][a]] |= 1 << z
    changed = True
    while changed:  # transitive closure
        changed = False
        for x in range(lattice.size):
            acc = rows[x]
            for y in _bits(acc):
                acc |= rows[y]
            if acc != rows[x]:
                rows[x] = acc
                changed = True
    return ArrowSet(lattice, tuple(rows))


def generate_cotransfer(lattice: FiniteLattice, arrows) -> ArrowSet:
    """Least cotransfer system containing the given arrows.

    Computed on the opposite lattice: reversed arrows generate there, and the
    result reverses back.  Element indices are shared between the two.
    """
    op = lattice.opposite()
    gen = generate_transfer(op, [(b, a) for a, b in _as_pairs(arrows)])
    rows = [0] * lattice.size
    for y, x in gen.pairs(strict=False):
        rows[x] |= 1 << y
    return ArrowSet(lattice, tuple(rows))


def saturate(t: ArrowSet) -> ArrowSet:
    """Least saturated transfer system containing t, in a single pass:
    b -> c whenever b <= c and some a <= b already has a -> c."""
    if not is_transfer_system(t):
        raise ArrowSetError("saturate requires a transfer system")
    lat = t.lattice
    cols = [0] * lat.size
    for a in range(lat.size):
        for c in _bits(t.rows[a]):
            cols[c] |= 1 << a
    rows = []
    for b in range(lat.size):
        row = 0
        for c in _bits(lat.up[b]):
            if lat.down[b] & cols[c]:
                row |= 1 << c
        rows.append(row)
    return ArrowSet(lat, tuple(rows))


def right_lift(lattice: FiniteLattice, arrows) -> ArrowSet:
    """All comparable pairs that every arrow of the input lifts against."""
    rows = list(lattice.up)
    for a, b in _as_pairs(arrows):
        bad_u = lattice.up[a] & ~lattice.up[b]
        for u in _bits(bad_u):
            rows[u] &= ~lattice.up[b]
    return ArrowSet(lattice, tuple(rows))


def left_lift(lattice: FiniteLattice, arrows) -> ArrowSet:
    """All comparable pairs that lift against every arrow of the input."""
    rows = list(lattice.up)
    for a, b in _as_pairs(arrows):
        bad_v = lattice.down[b] & ~lattice.down[a]
        if bad_v:
            for u in _bits(lattice.down[a]):
                rows[u] &= ~bad_v
    return ArrowSet(lattice, tuple(rows))


def principal_meet_irreducible(lattice: FiniteLattice, y: int) -> ArrowSet:
    """Closed form of right_lift on the single arrow bottom -> y:
    all pairs (a, b) with y not below b or y below a."""
    if y == lattice.bottom:
        raise ArrowSetError("principal meet irreducible requires y != bottom")
    rows = []
    for a in range(lattice.size):
        if lattice.le(y, a):
            rows.append(lattice.up[a])
        else:
            rows.append(lattice.up[a] & ~lattice.up[y])
    return ArrowSet(lattice, tuple(rows))


def to_saturated_cover(t: ArrowSet) -> SaturatedCover:
    """Compress a saturated transfer system to its covering relations."""
    if not is_saturated(t):
        raise ArrowSetError("to_saturated_cover requires a saturated transfer system")
    edges = frozenset(e for e in t.lattice.covers if t.contains(*e))
    return SaturatedCover(t.lattice, edges)


def saturated_cover_violations(lattice: FiniteLattice, edges) -> list[str]:
    """Violations of the saturated-cover conditions, with witnesses."""
    out = []
    edge_set = set(edges)
    cover_set = set(lattice.covers)
    for e in edge_set:
        if e not in cover_set:
            out.append(f"edge {e} is not a covering relation")
    mt, jt = lattice.meet_table, lattice.join_table
    n = lattice.size
    for x in range(n):
        for y in range(n):
            j = jt[x][y]
            if j != x and (x, j) in edge_set:
                m = mt[x][y]
                if m != y and (m, y) not in edge_set:
                    out.append(
                        f"restriction fails: ({x}, {j}) present but ({m}, {y}) absent"
                    )
    for x in range(n):
        for y in range(x + 1, n):
            m = mt[x][y]
            if (m, x) in cover_set and (m, y) in cover_set:
                t = jt[x][y]
                quad = [(m, x), (m, y), (x, t), (y, t)]
                present = sum(e in edge_set for e in quad)
                if present == 3:
                    missing = next(e for e in quad if e not in edge_set)
                    out.append(
                        f"three-out-of-four fails on diamond {m},{x},{y},{t}: "
                        f"{missing} absent"
                    )
    return out


def from_saturated_cover(cover: SaturatedCover) -> ArrowSet:
    """Expand a saturated cover to the saturated transfer system it generates.

    Only defined on modular lattices; non-modular input is an error.
    """
    lat = cover.lattice
    if not lat.is_modular():
        raise ModularityError(
            "saturated covers classify saturated transfer systems only on "
            f"modular lattices; witness {lat.modularity_witness()}"
        )
    violations = saturated_cover_violations(lat, cover.edges)
    if violations:
        raise ArrowSetError("; ".join(violations))
    return generate_transfer(lat, sorted(cover.edges))
