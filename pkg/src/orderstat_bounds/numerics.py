"""Small numerical primitives: bisection (scalar and vectorized) and
adaptive Simpson quadrature.

Everything here is deterministic and dependency free apart from numpy for
the vectorized bisection used by quantile inversions.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

from .errors import NumericError


def logaddexp(x: float, y: float) -> float:
    """log(exp(x) + exp(y)) without overflow; tolerates -inf inputs."""
    if x == -math.inf:
        return y
    if y == -math.inf:
        return x
    m = x if x >= y else y
    return m + math.log1p(math.exp(min(x, y) - m))


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    iterations: int = 200,
) -> float:
    """Plain bisection for a sign-changing f on [lo, hi].

    Runs a fixed number of halvings (enough to exhaust double precision for
    any reasonable bracket), so the result is reproducible independent of
    the shape of f. Raises NumericError when f does not change sign.
    """
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NumericError(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_root_vec(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    *,
    iterations: int = 100,
) -> np.ndarray:
    """Vectorized bisection for an elementwise nondecreasing f.

    Assumes f(lo) <= 0 <= f(hi) per element; returns the elementwise root.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = f(mid) < 0.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def _composite_simpson(f: Callable[[float], float], a: float, b: float, pieces: int) -> float:
    h = (b - a) / pieces
    total = 0.0
    fa = f(a)
    for i in range(pieces):
        lo = a + i * h
        hi = lo + h
        fm = f(0.5 * (lo + hi))
        fb = f(hi)
        total += (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)
        fa = fb
    return total


def _adapt(f, a, b, fa, fm, fb, whole, tol, floor, depth, budget) -> float:
    budget[0] -= 1
    if budget[0] < 0:
        raise NumericError(
            f"quadrature interval budget exhausted; last local tolerance {tol:.3e}"
        )
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    # repeated halving pushes the local share of the budget below machine
    # precision long before the result matters at the global scale; the
    # floor keeps acceptance tied to what doubles can actually resolve
    if abs(err) <= 15.0 * max(tol, floor):
        return left + right + err / 15.0
    if depth <= 0:
        raise NumericError(
            f"quadrature failed to converge; achieved residual {abs(err):.3e} "
            f"exceeds {15.0 * max(tol, floor):.3e}"
        )
    half = 0.5 * tol
    return _adapt(f, a, m, fa, flm, fm, left, half, floor, depth - 1, budget) + _adapt(
        f, m, b, fm, frm, fb, right, half, floor, depth - 1, budget
    )


def adaptive_quad(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    rel_tol: float = 1e-9,
    abs_tol: float = 0.0,
    breakpoints: Iterable[float] = (),
    max_intervals: int = 10**6,
) -> float:
    """Adaptive Simpson integration of f over [a, b].

    Interior breakpoints are inserted as mandatory subdivision points (used
    for integrands with a known kink). The absolute target is derived from
    rel_tol and a coarse composite-Simpson estimate of the integral.
    """
    if b == a:
        return 0.0
    if b < a:
        return -adaptive_quad(
            f, b, a, rel_tol=rel_tol, abs_tol=abs_tol, breakpoints=breakpoints
        )
    pts = [a] + sorted(p for p in set(breakpoints) if a < p < b) + [b]
    rough = sum(_composite_simpson(f, lo, hi, 32) for lo, hi in zip(pts, pts[1:]))
    target = max(abs_tol, rel_tol * abs(rough))
    if target == 0.0:
        target = 1e-300
    budget = [max_intervals]
    floor = 1e-16 * abs(rough) + 1e-300
    span = b - a
    total = 0.0
    for lo, hi in zip(pts, pts[1:]):
        fa, fb = f(lo), f(hi)
        fm = f(0.5 * (lo + hi))
        whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)
        total += _adapt(
            f, lo, hi, fa, fm, fb, whole, target * (hi - lo) / span, floor, 60, budget
        )
    return total
