"""Constrained l1-minimisation (CLIME) precision estimates, per frequency.

Column ``k`` of the estimate solves::

    minimize ||beta||_1  subject to  ||S beta - e_k||_inf <= lam

as a linear program in ``beta = u - v`` with ``u, v >= 0``. The per-frequency
estimator ``sipe`` applies this to the real embedding of the smoothed
periodogram, symmetrises, and maps back to a complex matrix.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import lp
from .core import (
    InputError,
    NumericalError,
    PrecisionEstimate,
    TimeSeriesMatrix,
    center_standardize,
    is_centered,
)
from .embedding import embed_spectrum, reassemble
from .spectral import periodogram, smooth

log = logging.getLogger(__name__)

RESIDUAL_SLACK = 1e-7


class ColumnSolveError(NumericalError):
    def __init__(self, column, status, message=None):
        self.column = column
        self.status = status
        super().__init__(message or f"column {column}: LP status {status}")


class FrequencyFailure(NumericalError):
    pass


@dataclass(frozen=True)
class ColumnSolve:
    column: int
    beta: np.ndarray
    objective: float
    residual: float
    status: str
    iterations: int = 0


def clime_column(S, k, lam, max_iter=None):
    """Solve the CLIME linear program for column ``k`` of ``S``.

    Returns
    -------
    ColumnSolve
        ``status`` is ``"optimal"``, ``"infeasible"`` or ``"iteration-limit"``.
        Non-optimal solves carry a NaN ``beta``.
    """
    S = np.asarray(S, dtype=float)
    m = S.shape[0]
    if S.ndim != 2 or S.shape[1] != m:
        raise InputError(f"expected a square matrix, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise InputError("matrix has non-finite entries")
    if not 0 <= k < m:
        raise InputError(f"column index {k} out of range for size {m}")
    lam = float(lam)
    e = np.zeros(m)
    e[k] = 1.0
    if lam < 0:
        return ColumnSolve(k, np.full(m, np.nan), math.nan, math.nan, lp.INFEASIBLE)
    A = np.block([[S, -S], [-S, S]])
    b = np.concatenate([lam + e, lam - e])
    res = lp.simplex(np.ones(2 * m), A, b, max_iter=max_iter)
    if res.status == lp.UNBOUNDED:
        # cannot happen for a nonnegative objective; treat as a solver fault
        raise NumericalError(f"column {k}: LP reported unbounded")
    if res.status != lp.OPTIMAL:
        return ColumnSolve(k, np.full(m, np.nan), math.nan, math.nan, res.status, res.iterations)
    beta = res.x[:m] - res.x[m:]
    residual = float(np.abs(S @ beta - e).max())
    return ColumnSolve(k, beta, float(np.abs(beta).sum()), residual, lp.OPTIMAL, res.iterations)


def clime_matrix(S, lam, return_solves=False):
    """Column-stacked CLIME estimate, before symmetrisation.

    Raises
    ------
    ColumnSolveError
        On the first column whose LP is not solved to optimality.
    """
    S = np.asarray(S, dtype=float)
    m = S.shape[0]
    theta = np.empty((m, m))
    solves = []
    for k in range(m):
        sol = clime_column(S, k, lam)
        if sol.status != lp.OPTIMAL:
            raise ColumnSolveError(k, sol.status)
        theta[:, k] = sol.beta
        solves.append(sol)
    if return_solves:
        return theta, solves
    return theta


def symmetrize(theta):
    """Symmetrise by keeping, for each pair, the entry of smaller magnitude.

    Ties keep the upper-triangle entry.
    """
    theta = np.asarray(theta)
    upper = np.triu(theta, 1)
    lower = np.triu(theta.T, 1)
    pick = np.where(np.abs(upper) <= np.abs(lower), upper, lower)
    return pick + pick.T + np.diag(np.diag(theta))


def theory_rate_lambda(n, M, c, delta):
    """Tuning value ``c * (M/n + n**delta / M**(1/2 + delta))``."""
    if M <= 0:
        raise InputError("theory-rate lambda needs a positive span")
    return c * (M / n + n**delta / M ** (0.5 + delta))


def _lambda_per_position(lam, n):
    lam = np.asarray(lam, dtype=float)
    if lam.ndim == 0:
        return np.full(n, float(lam))
    if lam.shape != (n,):
        raise InputError(f"lambda must be a scalar or have one value per frequency ({n})")
    return lam


def sipe_from_spectrum(smoothed, lam, positions=None):
    """CLIME precision estimates from an already smoothed periodogram.

    Parameters
    ----------
    smoothed : SpectralEstimate
    lam : float or ndarray, shape (n,)
    positions : sequence of int, optional
        Grid positions to estimate; defaults to all. Others are left NaN.

    Returns
    -------
    PrecisionEstimate
        Frequencies whose LPs fail are recorded in ``failures`` and left NaN.
    """
    grid = smoothed.grid
    n, p = grid.n, smoothed.p
    lam = _lambda_per_position(lam, n)
    if positions is None:
        positions = range(n)
    blocks = embed_spectrum(smoothed).blocks
    out = np.full((n, p, p), np.nan + 0j)
    solved = np.zeros(n, dtype=bool)
    diagnostics, failures = {}, {}
    for pos in positions:
        try:
            raw, solves = clime_matrix(blocks[pos], lam[pos], return_solves=True)
        except ColumnSolveError as err:
            failures[int(pos)] = f"frequency index {grid.indices[pos]}: {err}"
            log.warning("%s", failures[int(pos)])
            continue
        out[pos] = reassemble(symmetrize(raw))
        solved[pos] = True
        diagnostics[int(pos)] = [(s.status, s.residual) for s in solves]
    return PrecisionEstimate(
        grid,
        out,
        lam=lam,
        solved=solved,
        diagnostics=diagnostics,
        failures=failures,
        span=smoothed.span,
    )


def sipe(ts, M, lam, positions=None):
    """Sparse inverse periodogram estimate at each Fourier frequency.

    Pipeline: periodogram, Daniell smoothing with half-width ``M``, real
    embedding, CLIME per frequency, symmetrisation, complex reassembly.
    """
    if not ts.centered and not is_centered(ts):
        raise InputError("sipe requires a centred series")
    return sipe_from_spectrum(smooth(periodogram(ts), M), lam, positions)


class NoValidLambdaError(NumericalError):
    def __init__(self, reasons):
        self.reasons = reasons
        detail = "; ".join(f"lambda={lam:g}: {why}" for lam, why in reasons.items())
        super().__init__(f"no lambda in the grid gives a positive definite estimate ({detail})")


DEFAULT_LAMBDAS = tuple(np.round(np.geomspace(0.02, 0.6, 12), 4))


def _min_eig(theta):
    return np.linalg.eigvalsh(0.5 * (theta + theta.conj().T))[0]


def whittle_loss(theta, f_holdout):
    """``trace(f theta) - log det(theta)`` for Hermitian positive definite theta."""
    sign, logdet = np.linalg.slogdet(theta)
    return float(np.real(np.trace(f_holdout @ theta)) - np.real(logdet))


def _split_halves(ts):
    h = ts.n // 2
    halves = []
    for chunk in (ts.values[:h], ts.values[h: 2 * h]):
        halves.append(center_standardize(TimeSeriesMatrix(chunk, ts.names)))
    return halves


def cv_scores(ts, M, lambdas, stride=1):
    """Two-fold time-block cross-validated Whittle loss for each lambda.

    Each half of the series is smoothed with a half-width scaled to keep the
    bandwidth, the estimate from one half is scored on the smoothed
    periodogram of the other, over frequencies inside (0, 1/2) taken every
    ``stride``-th. A lambda is valid only if its estimate is positive definite
    at every scored frequency in both folds.

    Returns
    -------
    scores : dict
        lambda -> mean loss (``inf`` if invalid).
    reasons : dict
        lambda -> why it was invalid.
    """
    halves = _split_halves(ts)
    if halves[0].n < 4:
        raise InputError("series too short for two-fold cross-validation")
    M_half = max(1, int(round(M / 2)))
    M_half = min(M_half, (halves[0].n - 1) // 2)
    spectra = [smooth(periodogram(h), M_half) for h in halves]
    positions = spectra[0].grid.positive()[::stride]
    scores, reasons = {}, {}
    for lam in lambdas:
        if lam >= 1:
            scores[lam], reasons[lam] = math.inf, "estimate is identically zero"
            continue
        losses = []
        for train, test in ((0, 1), (1, 0)):
            est = sipe_from_spectrum(spectra[train], lam, positions)
            if est.failures:
                reasons[lam] = f"{len(est.failures)} frequencies failed"
                break
            bad = [pos for pos in positions if _min_eig(est.matrices[pos]) <= 0]
            if bad:
                reasons[lam] = f"not positive definite at {len(bad)} frequencies"
                break
            losses.extend(
                whittle_loss(est.matrices[pos], spectra[test].matrices[pos]) for pos in positions
            )
        scores[lam] = math.inf if lam in reasons else float(np.mean(losses))
    return scores, reasons


def select_lambda(ts, M, lambdas=DEFAULT_LAMBDAS, stride=1):
    """Choose lambda by cross-validated Whittle loss.

    Falls back to the smallest lambda whose full-sample estimate is positive
    definite when no lambda is valid under cross-validation. Ties in the loss
    go to the larger lambda.

    Returns
    -------
    lam : float
    scores : dict
    """
    lambdas = sorted(float(v) for v in lambdas)
    if not lambdas:
        raise InputError("empty lambda grid")
    if len(lambdas) == 1 and lambdas[0] < 1:
        return lambdas[0], {}
    scores, reasons = cv_scores(ts, M, lambdas, stride)
    valid = [lam for lam in lambdas if math.isfinite(scores[lam])]
    if valid:
        return min(valid, key=lambda lam: (scores[lam], -lam)), scores
    smoothed = smooth(periodogram(ts), M)
    positions = smoothed.grid.positive()[::stride]
    for lam in lambdas:
        if lam >= 1:
            continue
        est = sipe_from_spectrum(smoothed, lam, positions)
        if not est.failures and all(_min_eig(est.matrices[pos]) > 0 for pos in positions):
            return lam, scores
        reasons[lam] = reasons.get(lam, "") + "; full-sample estimate not positive definite"
    raise NoValidLambdaError(reasons)
