"""Formal contexts, and the two reduced contexts attached to a finite lattice.

``sat_context(L)`` is the reduced context of the lattice of saturated
transfer systems on a modular lattice L: objects are the covering relations
H -> K (rows, lexicographic), attributes are the elements X != bottom
(columns, sorted by height then index), and the incidence bit is

    X not <= K   or   X <= H.

``tr_context(L)`` is the reduced context of the lattice of all transfer
systems: objects and attributes are both the non-identity comparable pairs,
and (a -> b, x -> y) is incident iff

    a not >= x   or   b not >= y   or   a >= y.

On columns with x = bottom the second rule collapses to the first, which is
checked by the test suite.

Export formats: Burmeister .cxt, FIMI transaction lists, and PBM P1 bitmaps
(black pixel = zero cell).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import FiniteLattice, ModularityError, _bits


class ContextError(ValueError):
    """Malformed context data or an unsatisfied precondition."""


@dataclass(frozen=True)
class FormalContext:
    """A binary object x attribute relation with labeled axes.

    ``rows[i]`` has bit j set iff object i is incident with attribute j;
    ``cols`` is the transpose, derived at construction.
    """

    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    rows: tuple[int, ...]
    cols: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if len(self.rows) != len(self.objects):
            raise ContextError(
                f"expected {len(self.objects)} rows, got {len(self.rows)}"
            )
        if len(set(self.objects)) != len(self.objects):
            raise ContextError("object labels are not unique")
        if len(set(self.attributes)) != len(self.attributes):
            raise ContextError("attribute labels are not unique")
        width = (1 << len(self.attributes)) - 1
        cols = [0] * len(self.attributes)
        for i, row in enumerate(self.rows):
            if row & ~width:
                raise ContextError(f"row {i} has bits beyond attribute count")
            for j in _bits(row):
                cols[j] |= 1 << i
        object.__setattr__(self, "cols", tuple(cols))

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    def incidence(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)


def sat_context(lat: FiniteLattice) -> FormalContext:
    """Reduced context of the saturated-transfer-system lattice of ``lat``."""
    if lat.size < 2:
        raise ContextError("sat_context needs a lattice with at least 2 elements")
    if not lat.is_modular():
        raise ModularityError(
            "sat_context requires a modular lattice; "
            f"witness {lat.modularity_witness()}"
        )
    elements = sorted(
        (x for x in range(lat.size) if x != lat.bottom),
        key=lambda x: (lat.heights[x], x),
    )
    objects = tuple(
        f"cov:{lat.labels[h]}>{lat.labels[k]}" for h, k in lat.covers
    )
    attributes = tuple(f"el:{lat.labels[x]}" for x in elements)
    rows = []
    for h, k in lat.covers:
        row = 0
        for j, x in enumerate(elements):
            if not lat.le(x, k) or lat.le(x, h):
                row |= 1 << j
        rows.append(row)
    return FormalContext(objects, attributes, tuple(rows))


def tr_context(lat: FiniteLattice) -> FormalContext:
    """Reduced context of the full transfer-system lattice of ``lat``."""
    if lat.size < 2:
        raise ContextError("tr_context needs a lattice with at least 2 elements")
    pairs = list(lat.comparable_pairs(strict=True))
    names = tuple(f"rel:{lat.labels[a]}>{lat.labels[b]}" for a, b in pairs)
    rows = []
    for a, b in pairs:
        row = 0
        for j, (x, y) in enumerate(pairs):
            if not lat.le(x, a) or not lat.le(y, b) or lat.le(y, a):
                row |= 1 << j
        rows.append(row)
    return FormalContext(names, names, tuple(rows))


def density(ctx: FormalContext) -> Fraction:
    """Exact fraction of incident cells."""
    cells = ctx.n_objects * ctx.n_attributes
    if cells == 0:
        raise ContextError("density of an empty context is undefined")
    return Fraction(sum(r.bit_count() for r in ctx.rows), cells)


def _reduced_axis(vectors: list[int], full: int) -> bool:
    """True iff no vector equals the intersection of the others above it.

    The accumulator starts at the empty intersection (all ones), so a full
    vector is always redundant, and a duplicated vector makes both copies
    redundant.
    """
    for i, v in enumerate(vectors):
        acc = full
        for k, w in enumerate(vectors):
            if k != i and v & ~w == 0:  # w lies above v
                acc &= w
        if acc == v:
            return False
    return True


def is_reduced(ctx: FormalContext) -> bool:
    """No row and no column is an intersection of other rows/columns."""
    full_row = (1 << ctx.n_attributes) - 1
    full_col = (1 << ctx.n_objects) - 1
    return _reduced_axis(list(ctx.rows), full_row) and _reduced_axis(
        list(ctx.cols), full_col
    )


def permuted(ctx: FormalContext, obj_order, attr_order) -> FormalContext:
    """Reorder objects and attributes; orders are permutations of indices."""
    obj_order = list(obj_order)
    attr_order = list(attr_order)
    if sorted(obj_order) != list(range(ctx.n_objects)):
        raise ContextError("object order is not a permutation")
    if sorted(attr_order) != list(range(ctx.n_attributes)):
        raise ContextError("attribute order is not a permutation")
    rows = []
    for i in obj_order:
        old = ctx.rows[i]
        row = 0
        for new_j, j in enumerate(attr_order):
            if (old >> j) & 1:
                row |= 1 << new_j
        rows.append(row)
    return FormalContext(
        tuple(ctx.objects[i] for i in obj_order),
        tuple(ctx.attributes[j] for j in attr_order),
        tuple(rows),
    )


# -- serialization ----------------------------------------------------------


def export_cxt(ctx: FormalContext) -> str:
    """Burmeister .cxt text."""
    out = ["B", "", str(ctx.n_objects), str(ctx.n_attributes), ""]
    out.extend(ctx.objects)
    out.extend(ctx.attributes)
    for row in ctx.rows:
        out.append(
            "".join("X" if (row >> j) & 1 else "." for j in range(ctx.n_attributes))
        )
    return "\n".join(out) + "\n"


def import_cxt(text: str) -> FormalContext:
    """Parse Burmeister .cxt text; errors carry 1-based line numbers."""
    lines = text.splitlines()

    def need(idx: int, what: str) -> str:
        if idx >= len(lines):
            raise ContextError(f"line {idx + 1}: unexpected end of file, {what}")
        return lines[idx].rstrip("\r")

    if need(0, "expected header 'B'").strip() != "B":
        raise ContextError("line 1: expected header 'B'")
    if need(1, "expected blank line").strip():
        raise ContextError("line 2: expected blank line after header")
    try:
        n_obj = int(need(2, "expected object count").strip())
        n_attr = int(need(3, "expected attribute count").strip())
    except ValueError as e:
        raise ContextError(f"line 3/4: bad count ({e})") from None
    if n_obj < 0 or n_attr < 0:
        raise ContextError("line 3/4: counts must be nonnegative")
    if need(4, "expected blank line").strip():
        raise ContextError("line 5: expected blank line before names")
    base = 5
    objects = tuple(need(base + i, "expected object name") for i in range(n_obj))
    attributes = tuple(
        need(base + n_obj + i, "expected attribute name") for i in range(n_attr)
    )
    rows = []
    for i in range(n_obj):
        lineno = base + n_obj + n_attr + i
        line = need(lineno, "expected incidence row")
        if len(line) != n_attr:
            raise ContextError(
                f"line {lineno + 1}: row has {len(line)} cells, expected {n_attr}"
            )
        row = 0
        for j, ch in enumerate(line):
            if ch == "X":
                row |= 1 << j
            elif ch != ".":
                raise ContextError(f"line {lineno + 1}: bad cell {ch!r}")
        rows.append(row)
    return FormalContext(objects, attributes, tuple(rows))


def export_fimi(ctx: FormalContext) -> str:
    """FIMI transactions: one line per object listing incident attributes."""
    return (
        "\n".join(
            " ".join(str(j) for j in _bits(row)) for row in ctx.rows
        )
        + "\n"
    )


def export_pbm(ctx: FormalContext) -> str:
    """PBM P1 bitmap; a black pixel (1) marks a zero cell."""
    out = ["P1", f"{ctx.n_attributes} {ctx.n_objects}"]
    for row in ctx.rows:
        line = "".join(
            "0" if (row >> j) & 1 else "1" for j in range(ctx.n_attributes)
        )
        for k in range(0, max(len(line), 1), 70):
            out.append(line[k : k + 70])
    return "\n".join(out) + "\n"
