"""Dense-tableau primal simplex for small inequality-form linear programs.

Solves::

    minimize    c @ x
    subject to  A @ x <= b,  x >= 0

with a two-phase method. Rows with negative right-hand side are flipped and
given an artificial variable, so phase one only runs when the origin is
infeasible. The entering column is the most negative reduced cost
(Dantzig); after a run of degenerate pivots the solver switches to Bland's
smallest-index rule, which cannot cycle, until the objective moves again.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"

# consecutive degenerate pivots before falling back to Bland's rule
DEGENERATE_RUN = 20


@dataclass(frozen=True)
class LPResult:
    status: str
    x: np.ndarray
    objective: float
    iterations: int


@njit(cache=True)
def _pivot(T, basis, row, col):
    rows, cols = T.shape
    piv = T[row, col]
    for k in range(cols):
        T[row, k] /= piv
    for i in range(rows):
        if i == row:
            continue
        f = T[i, col]
        if f != 0.0:
            for k in range(cols):
                T[i, k] -= f * T[row, k]
    basis[row] = col


@njit(cache=True)
def _run(T, basis, n_cols, tol, max_iter, iterations):
    """Iterate simplex pivots on tableau ``T`` (objective in the last row).

    Only the first ``n_cols`` columns may enter the basis. Returns a status
    code (0 optimal, 1 unbounded, 2 iteration limit) and the pivot count.
    """
    m = T.shape[0] - 1
    degenerate = 0
    while True:
        col = -1
        if degenerate < DEGENERATE_RUN:
            most = -tol
            for j in range(n_cols):
                if T[m, j] < most:
                    most = T[m, j]
                    col = j
        else:
            for j in range(n_cols):
                if T[m, j] < -tol:
                    col = j
                    break
        if col < 0:
            return 0, iterations
        if iterations >= max_iter:
            return 2, iterations
        best = np.inf
        for i in range(m):
            if T[i, col] > tol:
                ratio = T[i, -1] / T[i, col]
                if ratio < best:
                    best = ratio
        if best == np.inf:
            return 1, iterations
        # among minimum ratios take the largest pivot for stability, then the
        # smallest basic index (Bland)
        slack = tol * max(1.0, abs(best))
        row = -1
        for i in range(m):
            a = T[i, col]
            if a > tol and T[i, -1] / a <= best + slack:
                if row < 0:
                    row = i
                else:
                    b = T[row, col]
                    if a > b * (1 + 1e-9) or (a >= b * (1 - 1e-9) and basis[i] < basis[row]):
                        row = i
        degenerate = degenerate + 1 if best <= tol else 0
        _pivot(T, basis, row, col)
        iterations += 1


_STATUS = {0: OPTIMAL, 1: UNBOUNDED, 2: ITERATION_LIMIT}


def simplex(c, A, b, tol=1e-9, max_iter=None):
    """Minimise ``c @ x`` subject to ``A @ x <= b`` and ``x >= 0``.

    Parameters
    ----------
    c : array_like, shape (n,)
    A : array_like, shape (m, n)
    b : array_like, shape (m,)
    tol : float
        Pivot and optimality tolerance.
    max_iter : int, optional
        Total pivot budget over both phases. Defaults to ``50 * (m + n)``.

    Returns
    -------
    LPResult
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if max_iter is None:
        max_iter = 50 * (m + n)

    flip = b < 0
    art_rows = np.flatnonzero(flip)
    n_art = art_rows.size
    # columns: x (n) | slack (m) | artificial (n_art) | rhs
    width = n + m + n_art
    T = np.zeros((m + 1, width + 1))
    sign = np.where(flip, -1.0, 1.0)
    T[:m, :n] = A * sign[:, None]
    T[np.arange(m), n + np.arange(m)] = sign
    T[art_rows, n + m + np.arange(n_art)] = 1.0
    T[:m, -1] = b * sign
    basis = n + np.arange(m)
    basis[art_rows] = n + m + np.arange(n_art)

    iterations = 0
    if n_art:
        # phase one: minimise the sum of artificials, priced out of the basis
        T[-1, n + m:width] = 1.0
        T[-1] -= T[art_rows].sum(axis=0)
        code, iterations = _run(T, basis, n + m, tol, max_iter, iterations)
        status = _STATUS[code]
        if status == ITERATION_LIMIT:
            return LPResult(status, np.full(n, np.nan), np.nan, iterations)
        scale = max(1.0, np.abs(b).max())
        if -T[-1, -1] > 1e-9 * scale:
            return LPResult(INFEASIBLE, np.full(n, np.nan), np.nan, iterations)
        # drive zero-level artificials out of the basis where possible
        for row in np.flatnonzero(basis >= n + m):
            entries = np.flatnonzero(np.abs(T[row, : n + m]) > tol)
            if entries.size:
                _pivot(T, basis, row, entries[0])
        keep = basis < n + m
        T = np.delete(T, np.flatnonzero(~np.append(keep, True)), axis=0)
        basis = basis[keep]
        T = np.delete(T, np.arange(n + m, width), axis=1)
        T[-1] = 0.0

    T[-1, :n] = c
    T[-1] -= c[basis[basis < n]] @ T[:-1][basis < n] if np.any(basis < n) else 0.0
    code, iterations = _run(T, basis, n + m, tol, max_iter, iterations)
    status = _STATUS[code]
    if status != OPTIMAL:
        return LPResult(status, np.full(n, np.nan), np.nan, iterations)
    x = np.zeros(n + m)
    x[basis] = T[:-1, -1]
    x = np.maximum(x[:n], 0.0)
    return LPResult(OPTIMAL, x, float(c @ x), iterations)
