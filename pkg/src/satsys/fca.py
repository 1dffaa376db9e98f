"""Concept counting and enumeration by Close-by-One.

The reference walker is plain Python over int bitsets and handles contexts
of any shape; counting hands subtrees to the compiled kernel when the
attribute set fits into a machine word (63 attributes or fewer).  Parallel
counting expands the canonical CbO tree to a fixed seed depth (default 2),
distributes the resulting independent subtrees over worker processes, and
sums the per-subtree tallies, so the total is identical for any worker
count.  The same seed decomposition drives checkpointing: a checkpoint
stores per-seed partial counts keyed by a digest of the context, and a
resumed run re-processes only the unfinished seeds.

Counting never materializes concepts; enumeration streams them through a
caller-provided sink in the deterministic single-walker order.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass

from .context import FormalContext
from .lattice import FiniteLattice, _bits

DEFAULT_SEED_DEPTH = 2
KERNEL_MAX_ATTRS = 63
_CHECKPOINT_KIND = "satsys-count-checkpoint"


class FcaError(ValueError):
    pass


class SinkAbort(RuntimeError):
    """The enumeration sink raised; ``delivered`` concepts were already sent."""

    def __init__(self, delivered: int, cause: BaseException):
        super().__init__(
            f"sink failed after {delivered} concepts: {cause!r}"
        )
        self.delivered = delivered
        self.cause = cause


class ConceptLatticeOverflow(FcaError):
    """More concepts than the requested cap; ``seen`` counts the overflow point."""

    def __init__(self, cap: int, seen: int):
        super().__init__(f"concept lattice exceeds max_size={cap} (saw {seen})")
        self.cap = cap
        self.seen = seen


class CheckpointError(FcaError):
    pass


@dataclass(frozen=True)
class Concept:
    """Extent and intent as bitmasks over the context's object/attribute order."""

    extent: int
    intent: int


@dataclass(frozen=True)
class ConceptTally:
    count: int
    elapsed: float
    workers: int
    complete: bool = True


def context_digest(ctx: FormalContext) -> str:
    h = hashlib.sha256()
    h.update(f"{ctx.n_objects}x{ctx.n_attributes};".encode())
    for row in ctx.rows:
        h.update(row.to_bytes((ctx.n_attributes + 7) // 8 or 1, "little"))
        h.update(b",")
    return h.hexdigest()


# -- reference walker --------------------------------------------------------


def _closure(rows, full_intent: int, extent: int) -> int:
    b = full_intent
    m = extent
    while m:
        low = m & -m
        b &= rows[low.bit_length() - 1]
        m ^= low
    return b


def _iter_subtree(rows, cols, n_attr: int, extent: int, intent: int, y: int):
    """Concepts of the canonical subtree at (extent, intent), preorder."""
    full_intent = (1 << n_attr) - 1
    yield extent, intent
    for j in range(y, n_attr):
        if (intent >> j) & 1:
            continue
        ext2 = extent & cols[j]
        int2 = _closure(rows, full_intent, ext2)
        below = (1 << j) - 1
        if (int2 & below) == (intent & below):
            yield from _iter_subtree(rows, cols, n_attr, ext2, int2, j + 1)


def _root(rows, n_obj: int, n_attr: int):
    full_extent = (1 << n_obj) - 1
    return full_extent, _closure(rows, (1 << n_attr) - 1, full_extent)


def iter_concepts(ctx: FormalContext):
    """All concepts of the context, canonical order, as Concept objects."""
    ext, intent = _root(ctx.rows, ctx.n_objects, ctx.n_attributes)
    for e, i in _iter_subtree(ctx.rows, ctx.cols, ctx.n_attributes, ext, intent, 0):
        yield Concept(e, i)


def enumerate_concepts(ctx: FormalContext, sink) -> int:
    """Push every concept through ``sink`` exactly once; returns the count."""
    delivered = 0
    for concept in iter_concepts(ctx):
        try:
            sink(concept)
        except Exception as e:
            raise SinkAbort(delivered, e) from e
        delivered += 1
    return delivered


def _expand_seeds(rows, cols, n_obj: int, n_attr: int, depth: int):
    """Count nodes above ``depth``; return the depth-``depth`` subtree roots."""
    full_intent = (1 << n_attr) - 1
    shallow = 0
    seeds: list[tuple[int, int, int]] = []

    def rec(extent, intent, y, d):
        nonlocal shallow
        if d == depth:
            seeds.append((extent, intent, y))
            return
        shallow += 1
        for j in range(y, n_attr):
            if (intent >> j) & 1:
                continue
            ext2 = extent & cols[j]
            int2 = _closure(rows, full_intent, ext2)
            below = (1 << j) - 1
            if (int2 & below) == (intent & below):
                rec(ext2, int2, j + 1, d + 1)

    ext, intent = _root(rows, n_obj, n_attr)
    rec(ext, intent, 0, 0)
    return shallow, seeds


def _count_py_subtree(rows, cols, n_attr, extent, intent, y, budget=-1):
    count = 0
    for _ in _iter_subtree(rows, cols, n_attr, extent, intent, y):
        count += 1
        if 0 <= budget <= count:
            return count, False
    return count, True


# -- kernel dispatch ---------------------------------------------------------

_kernel_mod = None


def _kernel():
    global _kernel_mod
    if _kernel_mod is None:
        from . import _kernel as mod

        _kernel_mod = mod
    return _kernel_mod


def _count_subtree_kernel(packed_cols, n_obj, n_attr, extent, intent, y, budget=-1):
    mod = _kernel()
    ext_words = mod.pack_extent(extent, n_obj)
    cnt, finished = mod.count_subtree(packed_cols, ext_words, intent, y, budget)
    return int(cnt), bool(finished)


# -- multiprocessing plumbing -------------------------------------------------

_worker_state: dict = {}


def _worker_init(engine, rows, cols, n_obj, n_attr):
    _worker_state["engine"] = engine
    _worker_state["rows"] = rows
    _worker_state["cols"] = cols
    _worker_state["n_obj"] = n_obj
    _worker_state["n_attr"] = n_attr
    if engine == "kernel":
        _worker_state["packed"] = _kernel().pack_columns(cols, n_obj)


def _worker_count(task):
    idx, extent, intent, y = task
    if _worker_state["engine"] == "kernel":
        cnt, _ = _count_subtree_kernel(
            _worker_state["packed"],
            _worker_state["n_obj"],
            _worker_state["n_attr"],
            extent,
            intent,
            y,
        )
    else:
        cnt, _ = _count_py_subtree(
            _worker_state["rows"],
            _worker_state["cols"],
            _worker_state["n_attr"],
            extent,
            intent,
            y,
        )
    return idx, cnt


# -- checkpoint file ----------------------------------------------------------


def _load_checkpoint(path, digest, seed_depth, n_seeds):
    if not path or not os.path.exists(path):
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CheckpointError(f"checkpoint file corrupt: {e}") from e
    for key in ("kind", "context_sha256", "seed_depth", "n_seeds", "done"):
        if key not in data:
            raise CheckpointError(f"checkpoint file corrupt: missing field {key!r}")
    if data["kind"] != _CHECKPOINT_KIND:
        raise CheckpointError("checkpoint file corrupt: wrong kind")
    if data["context_sha256"] != digest:
        raise CheckpointError("checkpoint belongs to a different context")
    if data["seed_depth"] != seed_depth or data["n_seeds"] != n_seeds:
        raise CheckpointError("checkpoint was written with a different seed depth")
    try:
        return {int(k): int(v) for k, v in data["done"].items()}
    except (TypeError, ValueError) as e:
        raise CheckpointError(f"checkpoint file corrupt: {e}") from e


def _write_checkpoint(path, digest, seed_depth, shallow, n_seeds, done, complete):
    data = {
        "kind": _CHECKPOINT_KIND,
        "version": _version(),
        "context_sha256": digest,
        "seed_depth": seed_depth,
        "shallow_count": shallow,
        "n_seeds": n_seeds,
        "done": {str(k): v for k, v in sorted(done.items())},
        "complete": complete,
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


def _version() -> str:
    from . import __version__

    return __version__


# -- public counting interface -------------------------------------------------


def count_concepts(
    ctx: FormalContext,
    workers: int = 1,
    seed_depth: int = DEFAULT_SEED_DEPTH,
    checkpoint_path: str | None = None,
    checkpoint_every: float = 30.0,
    max_concepts: int | None = None,
    engine: str = "auto",
) -> ConceptTally:
    """Number of concepts of ``ctx``.

    ``engine`` is "auto", "kernel", or "python"; auto picks the compiled
    kernel whenever the attribute count fits a machine word.  A
    ``max_concepts`` budget forces a single sequential walker and returns an
    incomplete tally once the budget is consumed.
    """
    if workers < 1:
        raise FcaError(f"workers must be positive, got {workers}")
    if seed_depth < 0:
        raise FcaError(f"seed_depth must be nonnegative, got {seed_depth}")
    if engine not in ("auto", "kernel", "python"):
        raise FcaError(f"unknown engine {engine!r}")
    if max_concepts is not None and max_concepts < 1:
        raise FcaError(f"max_concepts must be positive, got {max_concepts}")
    if engine == "kernel" and ctx.n_attributes > KERNEL_MAX_ATTRS:
        raise FcaError(
            f"kernel engine supports at most {KERNEL_MAX_ATTRS} attributes, "
            f"context has {ctx.n_attributes}"
        )
    if engine == "auto":
        engine = "kernel" if ctx.n_attributes <= KERNEL_MAX_ATTRS else "python"

    t0 = time.perf_counter()
    rows, cols = ctx.rows, ctx.cols
    n_obj, n_attr = ctx.n_objects, ctx.n_attributes
    digest = context_digest(ctx)

    shallow, seeds = _expand_seeds(rows, cols, n_obj, n_attr, seed_depth)
    done = _load_checkpoint(checkpoint_path, digest, seed_depth, len(seeds))
    total = shallow + sum(done.values())
    complete = True

    if max_concepts is not None and shallow >= max_concepts:
        return ConceptTally(max_concepts, time.perf_counter() - t0, 1, False)

    pending = [
        (i, ext, intent, y)
        for i, (ext, intent, y) in enumerate(seeds)
        if i not in done
    ]

    if max_concepts is not None or workers == 1 or not pending:
        packed = (
            _kernel().pack_columns(cols, n_obj)
            if engine == "kernel" and pending
            else None
        )
        last_flush = time.monotonic()
        for i, ext, intent, y in pending:
            if max_concepts is None:
                budget = -1
            else:
                budget = max_concepts - total
                if budget <= 0:
                    complete = False
                    break
            if engine == "kernel":
                cnt, finished = _count_subtree_kernel(
                    packed, n_obj, n_attr, ext, intent, y, budget
                )
            else:
                cnt, finished = _count_py_subtree(
                    rows, cols, n_attr, ext, intent, y, budget
                )
            total += cnt
            if finished:
                done[i] = cnt
            if checkpoint_path and (
                finished and time.monotonic() - last_flush >= checkpoint_every
            ):
                _write_checkpoint(
                    checkpoint_path, digest, seed_depth, shallow, len(seeds), done, False
                )
                last_flush = time.monotonic()
            if not finished:
                complete = False
                break
        effective_workers = 1
    else:
        import multiprocessing as mp

        mp_ctx = mp.get_context("fork" if hasattr(os, "fork") else "spawn")
        with mp_ctx.Pool(
            workers,
            initializer=_worker_init,
            initargs=(engine, rows, cols, n_obj, n_attr),
        ) as pool:
            last_flush = time.monotonic()
            for idx, cnt in pool.imap_unordered(_worker_count, pending, chunksize=8):
                done[idx] = cnt
                total += cnt
                if checkpoint_path and time.monotonic() - last_flush >= checkpoint_every:
                    _write_checkpoint(
                        checkpoint_path, digest, seed_depth, shallow, len(seeds), done, False
                    )
                    last_flush = time.monotonic()
        effective_workers = workers

    if checkpoint_path:
        _write_checkpoint(
            checkpoint_path, digest, seed_depth, shallow, len(seeds), done, complete
        )
    return ConceptTally(total, time.perf_counter() - t0, effective_workers, complete)


def build_concept_lattice(ctx: FormalContext, max_size: int = 100_000) -> FiniteLattice:
    """Realize the concept lattice as a FiniteLattice, ordered by extents.

    Elements are concepts sorted by (extent size, extent bits); labels name
    the extent bitmask in hex.  Raises ConceptLatticeOverflow past max_size.
    """
    concepts: list[Concept] = []
    for c in iter_concepts(ctx):
        concepts.append(c)
        if len(concepts) > max_size:
            raise ConceptLatticeOverflow(max_size, len(concepts))
    concepts.sort(key=lambda c: (c.extent.bit_count(), c.extent))
    up = []
    for c in concepts:
        mask = 0
        for j, d in enumerate(concepts):
            if c.extent & ~d.extent == 0:
                mask |= 1 << j
        up.append(mask)
    labels = [f"x{c.extent:x}" for c in concepts]
    return FiniteLattice.from_leq(up, labels)
