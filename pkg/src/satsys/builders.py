"""Constructors for the stock lattices: subspace lattices of F_p^n, chains,
diamonds M_k, and lattices loaded from the text format.

Subspaces are enumerated once per (p, n) as reduced-row-echelon bases, pivot
columns in lexicographic order and free entries in lexicographic order, so
element indices are reproducible across runs.  Order tests use membership of
basis vectors, not rank computations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .lattice import FiniteLattice, LatticeError, parse_lattice
from .qstats import a_direct, qbinom

DEFAULT_SIZE_CAP = 512


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Subspace:
    """One subspace of F_p^n: its dimension, RREF basis, and full point set."""

    dim: int
    basis: tuple[tuple[int, ...], ...]
    vectors: frozenset[tuple[int, ...]]
    label: str


def _span(basis, p: int, n: int) -> frozenset[tuple[int, ...]]:
    vecs = set()
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = [0] * n
        for c, row in zip(coeffs, basis):
            if c:
                for k in range(n):
                    v[k] = (v[k] + c * row[k]) % p
        vecs.add(tuple(v))
    return frozenset(vecs)


def _label(dim: int, basis) -> str:
    if dim == 0:
        return "0"
    return f"d{dim}:" + ";".join(",".join(str(c) for c in row) for row in basis)


def enumerate_subspaces(p: int, n: int) -> list[Subspace]:
    """All subspaces of F_p^n, sorted by dimension then RREF enumeration order."""
    if not _is_prime(p):
        raise LatticeError(f"p must be prime, got {p}")
    if n < 0:
        raise LatticeError(f"n must be nonnegative, got {n}")
    out = [Subspace(0, (), _span((), p, n), _label(0, ()))]
    for d in range(1, n + 1):
        count_d = 0
        for pivots in itertools.combinations(range(n), d):
            free = [
                (i, j)
                for i in range(d)
                for j in range(n)
                if j > pivots[i] and j not in pivots
            ]
            for values in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(d)]
                for i in range(d):
                    rows[i][pivots[i]] = 1
                for (i, j), v in zip(free, values):
                    rows[i][j] = v
                basis = tuple(tuple(r) for r in rows)
                out.append(Subspace(d, basis, _span(basis, p, n), _label(d, basis)))
                count_d += 1
        if count_d != qbinom(n, d, p):
            raise ArithmeticError(
                f"RREF enumeration produced {count_d} subspaces of dim {d}, "
                f"expected {qbinom(n, d, p)}"
            )
    return out


def subspace_lattice(p: int, n: int, max_size: int = DEFAULT_SIZE_CAP) -> FiniteLattice:
    """The lattice of subspaces of F_p^n, ordered by inclusion."""
    if not _is_prime(p):
        raise LatticeError(f"p must be prime, got {p}")
    if n < 0:
        raise LatticeError(f"n must be nonnegative, got {n}")
    size = a_direct(n, p)
    if size > max_size:
        raise LatticeError(
            f"subspace lattice for p={p}, n={n} has {size} elements, "
            f"exceeding the cap {max_size}"
        )
    subs = enumerate_subspaces(p, n)
    m = len(subs)
    up = [0] * m
    for i, si in enumerate(subs):
        for j, sj in enumerate(subs):
            # si <= sj iff every basis vector of si lies in sj
            if all(row in sj.vectors for row in si.basis):
                up[i] |= 1 << j
    return FiniteLattice.from_leq(up, [s.label for s in subs])


def chain(k: int) -> FiniteLattice:
    """The chain with k covering steps (k + 1 elements)."""
    if k < 0:
        raise LatticeError(f"chain length must be nonnegative, got {k}")
    return FiniteLattice.from_relation(k + 1, [(i, i + 1) for i in range(k)])


def diamond(m: int) -> FiniteLattice:
    """M_m: bottom, m pairwise-incomparable atoms, top.  Modular for every m."""
    if m < 1:
        raise LatticeError(f"diamond needs at least one atom, got {m}")
    pairs = [(0, a) for a in range(1, m + 1)] + [(a, m + 1) for a in range(1, m + 1)]
    labels = ["bot"] + [f"a{i}" for i in range(1, m + 1)] + ["top"]
    return FiniteLattice.from_relation(m + 2, pairs, labels)


def load_lattice(path: str) -> FiniteLattice:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_lattice(fh.read())
