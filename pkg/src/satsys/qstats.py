"""Exact subspace-counting arithmetic over the prime field F_p.

Everything here is integer or rational; no floating point is used anywhere.
``qbinom(n, i, p)`` counts i-dimensional subspaces of F_p^n, ``a(n, p)``
counts all subspaces, and the remaining functions count irreducible rows and
columns and zero cells of the associated reduced context, ending in an exact
rational density.  Bound checks with fractional exponents are decided by
clearing denominators (raising both sides to integer powers), never by
floating-point evaluation.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def qbinom(n: int, i: int, p: int) -> int:
    """Gaussian binomial coefficient: number of i-dim subspaces of F_p^n.

    Computed by the telescoping product qb(j) = qb(j-1) * (p^(n-j+1) - 1)
    // (p^j - 1); every partial value is itself a Gaussian binomial, so each
    division is exact.  ``i > n`` returns 0 by convention.
    """
    if p < 2:
        raise ValueError(f"qbinom requires p >= 2, got p={p}")
    if n < 0 or i < 0:
        raise ValueError(f"qbinom requires n, i >= 0, got n={n}, i={i}")
    if i > n:
        return 0
    i = min(i, n - i)  # symmetry, keeps the product short
    val = 1
    for j in range(1, i + 1):
        num = val * (p ** (n - j + 1) - 1)
        den = p ** j - 1
        q, r = divmod(num, den)
        if r:  # cannot happen; guards against arithmetic regressions
            raise ArithmeticError(f"inexact step in qbinom({n},{i},{p})")
        val = q
    return val


def a_direct(n: int, p: int) -> int:
    """Total number of subspaces of F_p^n, as the sum of Gaussian binomials."""
    if n < 0:
        raise ValueError(f"a_direct requires n >= 0, got {n}")
    return sum(qbinom(n, i, p) for i in range(n + 1))


def a_rec(n: int, p: int) -> int:
    """Same count via the two-term recursion.

    a_0 = 1, a_1 = 2, and a_{k+2} = 2*a_{k+1} + (p^(k+1) - 1)*a_k.
    """
    if n < 0:
        raise ValueError(f"a_rec requires n >= 0, got {n}")
    if p < 2:
        raise ValueError(f"a_rec requires p >= 2, got p={p}")
    prev, cur = 1, 2  # a_0, a_1
    if n == 0:
        return prev
    for k in range(n - 1):
        prev, cur = cur, 2 * cur + (p ** (k + 1) - 1) * prev
    return cur


def count_meet_irr(n: int, p: int) -> int:
    """Number of meet-irreducible elements of the saturation lattice: a(n,p) - 1."""
    if n < 1:
        raise ValueError(f"count_meet_irr requires n >= 1, got {n}")
    return a_direct(n, p) - 1


def count_join_irr(n: int, p: int) -> int:
    """Number of join-irreducible elements: qbinom(n,1,p) * a(n-1,p).

    Also equal to the covering-pair count sum_d qbinom(n,d,p)*qbinom(d,1,p);
    both forms are computed and compared as a self-check.
    """
    if n < 1:
        raise ValueError(f"count_join_irr requires n >= 1, got {n}")
    closed = qbinom(n, 1, p) * a_direct(n - 1, p)
    summed = sum(qbinom(n, d, p) * qbinom(d, 1, p) for d in range(1, n + 1))
    if closed != summed:
        raise ArithmeticError(
            f"join-irreducible count mismatch for n={n}, p={p}: {closed} != {summed}"
        )
    return closed


def count_zeros(n: int, p: int) -> int:
    """Number of zero cells in the n-dimensional reduced context over F_p."""
    if n < 1:
        raise ValueError(f"count_zeros requires n >= 1, got {n}")
    total = 0
    for d in range(1, n + 1):
        total += (
            qbinom(n, d, p)
            * qbinom(d, 1, p)
            * (a_direct(d, p) - a_direct(d - 1, p))
        )
    return total


def density_formula(n: int, p: int) -> Fraction:
    """Exact incidence density of the reduced context for F_p^n.

    1 - zeros / (rows * columns) with rows = count_join_irr and columns =
    count_meet_irr.  Returned as an exact Fraction.
    """
    if n < 1:
        raise ValueError(f"density_formula requires n >= 1, got {n}")
    cells = count_join_irr(n, p) * count_meet_irr(n, p)
    return 1 - Fraction(count_zeros(n, p), cells)


def check_bounds(n: int, p: int) -> bool:
    """Exact check of p^((n^2-1)/4) <= a(n,p) <= p^((n+1.1)^2/4).

    Fractional exponents are cleared by raising to integer powers:
    the lower bound becomes p^(n^2-1) <= a^4 (with the n=0 case moved across),
    the upper becomes a^400 <= p^(100n^2+220n+121).
    """
    a = a_direct(n, p)
    e = n * n - 1
    if e >= 0:
        lower = p ** e <= a ** 4
    else:  # n = 0: p^(-1/4) <= 1
        lower = 1 <= a ** 4 * p ** (-e)
    upper = a ** 400 <= p ** (100 * n * n + 220 * n + 121)
    return lower and upper


def _floor_root4(x: int) -> int:
    """floor(x ** (1/4)) for a nonnegative integer, via two integer sqrts."""
    return isqrt(isqrt(x))


def power_inequality_holds(m: int, n: int) -> bool:
    """Exact decision of m^((n^2-1)/4) - 1 >= m^((n^2-3)/4) for integers m, n.

    Both sides are real fourth roots of integers P = m^(n^2-1) and
    Q = m^(n^2-3).  If both roots are integers the comparison is immediate;
    otherwise the difference is irrational, so binary interval refinement of
    the scaled floor roots terminates with a strict answer.
    """
    if m < 2 or n < 2:
        raise ValueError(f"power inequality check needs m >= 2, n >= 2")
    P = m ** (n * n - 1)
    Q = m ** (n * n - 3)
    rp, rq = _floor_root4(P), _floor_root4(Q)
    if rp ** 4 == P and rq ** 4 == Q:
        return rp - 1 >= rq
    s = 8
    while s <= 1 << 20:
        scale = 1 << s
        lp = _floor_root4(P << (4 * s))  # floor(2^s * P^(1/4))
        lq = _floor_root4(Q << (4 * s))
        # P^(1/4) - 1 - Q^(1/4) lies in the open interval
        #   ((lp - lq - 1)/2^s - 1, (lp - lq + 1)/2^s - 1)
        if lp - lq - 1 - scale >= 0:
            return True
        if lp - lq + 1 - scale <= 0:
            return False
        s *= 2
    raise ArithmeticError(f"undecided power inequality at m={m}, n={n}")
