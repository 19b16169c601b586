"""Adaptive Simpson quadrature over vectorized integrands.

The engine is breadth-first: each wave evaluates the integrand at every new
midpoint in a single vectorized call, accepts the intervals whose Richardson
error estimate is within their share of the tolerance budget, and splits the
rest.  Accepted contributions are compensated with math.fsum.  min_depth
forces initial refinement so that periodic integrands whose peaks align with
the probe grid cannot alias into a spuriously converged estimate.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import QuadratureNonConvergence

DEFAULT_TOL = 1e-10
MAX_INTERVALS = 2**20
DEFAULT_MIN_DEPTH = 3


def adaptive_simpson(f, a: float, b: float, tol: float = DEFAULT_TOL,
                     max_intervals: int = MAX_INTERVALS,
                     min_depth: int = DEFAULT_MIN_DEPTH) -> float:
    """Integrate f over [a, b] to absolute tolerance tol.

    f must map an ndarray of points to an ndarray of values.
    """
    if b <= a:
        return 0.0
    xs = np.array([a, 0.5 * (a + b), b])
    fa, fm, fb = f(xs)
    lo = np.array([a])
    hi = np.array([b])
    fl = np.array([fa])
    fc = np.array([fm])
    fr = np.array([fb])
    whole = (hi - lo) / 6.0 * (fl + 4.0 * fc + fr)
    budget = np.array([tol])
    depth = np.array([0])
    accepted: list[float] = []
    n_intervals = 1

    while lo.size:
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        fvals = f(np.concatenate([lm, rm]))
        flm = fvals[: lo.size]
        frm = fvals[lo.size:]
        left = (mid - lo) / 6.0 * (fl + 4.0 * flm + fc)
        right = (hi - mid) / 6.0 * (fc + 4.0 * frm + fr)
        delta = left + right - whole
        done = (np.abs(delta) <= 15.0 * budget) & (depth >= min_depth)
        # an interval too narrow to split has converged as far as floats allow
        stuck = (lm <= lo) | (rm >= hi)
        if np.any(stuck & ~done):
            raise QuadratureNonConvergence(
                f"interval at {lo[np.argmax(stuck & ~done)]!r} cannot be refined further"
            )
        if np.any(done):
            accepted.extend((left + right + delta / 15.0)[done].tolist())
        keep = ~done
        n_intervals += 2 * int(np.count_nonzero(keep))
        if n_intervals > max_intervals:
            raise QuadratureNonConvergence(
                f"subdivision budget of {max_intervals} intervals exhausted"
            )
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        fl = np.concatenate([fl[keep], fc[keep]])
        fr = np.concatenate([fc[keep], fr[keep]])
        fc = np.concatenate([flm[keep], frm[keep]])
        whole = np.concatenate([left[keep], right[keep]])
        budget = np.concatenate([budget[keep] / 2.0, budget[keep] / 2.0])
        depth = np.concatenate([depth[keep] + 1, depth[keep] + 1])

    return math.fsum(accepted)


def piecewise_simpson(f, breakpoints, tol: float = DEFAULT_TOL,
                      max_intervals: int = MAX_INTERVALS,
                      min_depth: int = 2) -> float:
    """Integrate f over consecutive [b_i, b_i+1] pieces and fsum the results.

    Useful when kink locations of the integrand are known in advance; the
    pieces then hold no full oscillation, so a shallow forced depth suffices.
    """
    pts = sorted(set(float(x) for x in breakpoints))
    if len(pts) < 2:
        return 0.0
    share = tol / (len(pts) - 1)
    return math.fsum(
        adaptive_simpson(f, lo, hi, tol=share, max_intervals=max_intervals,
                         min_depth=min_depth)
        for lo, hi in zip(pts, pts[1:])
    )


def alias_safe_depth(interval_length: float, max_frequency: float) -> int:
    """Forced depth so the probe grid resolves oscillations of the given
    frequency: base intervals shorter than half the shortest half-period."""
    if max_frequency <= 0:
        return DEFAULT_MIN_DEPTH
    target = interval_length * 4.0 * max_frequency
    return max(DEFAULT_MIN_DEPTH, math.ceil(math.log2(target)) + 1)
