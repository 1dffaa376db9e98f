"""Compiled Close-by-One subtree counter.

Counts the concepts of a canonical CbO subtree without materializing them.
Attributes are branched in ascending order; a candidate closure is accepted
only when it introduces no attribute below the branching attribute.  The
closure and the canonicity test are both done against attribute columns:

  * if extent & col_j == extent, attribute j is absorbed into the intent
    (it belongs to the closure and spawns no child);
  * otherwise the child extent C = extent & col_j is canonical iff there is
    no k < branching attribute, outside the intent, with C <= col_k.

A failed canonicity test is remembered as its witness column k and inherited
by descendants: while k stays outside the intent, the shrunken extents of
the subtree remain inside col_k, so the candidate can be skipped without
re-testing.  Attribute sets live in one int64 (at most 63 attributes);
extents are arrays of 64-bit words.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def count_subtree(cols, ext0, b0, y0, budget):
    """Count concepts of the subtree rooted at (ext0, b0) branching from y0.

    cols: int64[n_attr, W] attribute extents; ext0: int64[W]; b0: intent
    bitmask whose closure is already complete; budget < 0 means unlimited.
    Returns (count, finished); when the budget interrupts the walk, count
    equals the budget exactly and finished is False.
    """
    n_attr, w = cols.shape
    maxd = n_attr + 2
    node_ext = np.empty((maxd, w), np.int64)
    child_ext = np.empty((maxd, n_attr + 1, w), np.int64)
    child_attr = np.empty((maxd, n_attr + 1), np.int64)
    n_child = np.zeros(maxd, np.int64)
    ptr = np.zeros(maxd, np.int64)
    b_in = np.zeros(maxd, np.int64)
    b_fin = np.zeros(maxd, np.int64)
    start_y = np.zeros(maxd, np.int64)
    witness = np.empty((maxd, n_attr), np.int16)

    level = 0
    for t in range(w):
        node_ext[0, t] = ext0[t]
    b_in[0] = b0
    start_y[0] = y0
    for j in range(n_attr):
        witness[0, j] = -1

    count = 0
    scanning = True
    while level >= 0:
        if scanning:
            b = b_in[level]
            nc = 0
            for j in range(start_y[level], n_attr):
                if (b >> j) & 1:
                    continue
                wj = witness[level, j]
                if wj >= 0 and ((b >> wj) & 1) == 0:
                    continue  # inherited failure still valid
                same = True
                for t in range(w):
                    c = node_ext[level, t] & cols[j, t]
                    child_ext[level, nc, t] = c
                    if c != node_ext[level, t]:
                        same = False
                if same:
                    b |= 1 << j
                    continue
                wit = -1
                for k in range(j):
                    if (b >> k) & 1:
                        continue
                    inside = True
                    for t in range(w):
                        if child_ext[level, nc, t] & ~cols[k, t]:
                            inside = False
                            break
                    if inside:
                        wit = k
                        break
                if wit >= 0:
                    witness[level, j] = wit
                else:
                    child_attr[level, nc] = j
                    nc += 1
            b_fin[level] = b
            n_child[level] = nc
            ptr[level] = 0
            count += 1
            if budget >= 0 and count >= budget:
                return count, False
            scanning = False
        if ptr[level] < n_child[level]:
            c = ptr[level]
            ptr[level] += 1
            nl = level + 1
            for t in range(w):
                node_ext[nl, t] = child_ext[level, c, t]
            b_in[nl] = b_fin[level] | (1 << child_attr[level, c])
            start_y[nl] = child_attr[level, c] + 1
            for j in range(n_attr):
                witness[nl, j] = witness[level, j]
            level = nl
            scanning = True
        else:
            level -= 1
    return count, True


def pack_extent(mask: int, n_obj: int) -> np.ndarray:
    """Python-int object set -> int64 word array (two's complement)."""
    w = max(1, (n_obj + 63) // 64)
    out = np.empty(w, np.int64)
    for t in range(w):
        word = (mask >> (64 * t)) & 0xFFFFFFFFFFFFFFFF
        out[t] = word - (1 << 64) if word >= 1 << 63 else word
    return out


def pack_columns(cols, n_obj: int) -> np.ndarray:
    out = np.empty((len(cols), max(1, (n_obj + 63) // 64)), np.int64)
    for j, mask in enumerate(cols):
        out[j] = pack_extent(mask, n_obj)
    return out
