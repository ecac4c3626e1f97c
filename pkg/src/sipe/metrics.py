"""Baseline spectral precision estimators and scoring against ground truth."""

import numpy as np

from .core import RAW, SMOOTHED, InputError, PrecisionEstimate, SpectralEstimate
from .spectral import _check_span, smooth

RCOND_MIN = 1e-12
SUPPORT_TAU = 1e-8


def naive_inverse(est, positions=None):
    """Direct inverse of a spectral estimate at each frequency.

    Numerically singular matrices (reciprocal condition number below 1e-12)
    are recorded in ``failures`` rather than raised.
    """
    grid, p = est.grid, est.p
    if positions is None:
        positions = range(grid.n)
    out = np.full((grid.n, p, p), np.nan + 0j)
    solved = np.zeros(grid.n, dtype=bool)
    failures = {}
    for pos in positions:
        F = est.matrices[pos]
        s = np.linalg.svd(F, compute_uv=False)
        if s[0] == 0 or s[-1] < RCOND_MIN * s[0]:
            failures[int(pos)] = "not-invertible"
            continue
        inv = np.linalg.inv(F)
        out[pos] = 0.5 * (inv + inv.conj().T)
        solved[pos] = True
    return PrecisionEstimate(grid, out, solved=solved, failures=failures, span=est.span)


def shrinkage_weights(per, M):
    """Per-frequency shrinkage intensity and target level.

    Returns ``(W, mu, smoothed)`` where ``W[pos] = min(1, v / d)`` with ``v``
    the window dispersion of the periodogram ordinates about their mean, and
    ``d`` the squared Frobenius distance of the smoothed matrix from
    ``mu * I``, ``mu = trace / p``.
    """
    if per.kind != RAW:
        raise InputError("shrinkage expects a raw periodogram")
    _check_span(per.grid.n, M)
    f = smooth(per, M)
    F, P = f.matrices, per.matrices
    p = per.p
    mu = np.real(np.trace(F, axis1=1, axis2=2)) / p
    spread = np.zeros(per.grid.n)
    for k in range(-M, M + 1):
        diff = np.roll(P, -k, axis=0) - F
        spread += np.sum(np.abs(diff) ** 2, axis=(1, 2))
    v = spread / (2 * M + 1) ** 2
    d = np.sum(np.abs(F - mu[:, None, None] * np.eye(p)) ** 2, axis=(1, 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        W = np.where(d > 0, np.minimum(1.0, v / d), 0.0)
    return W, mu, f


def shrinkage(per, M):
    """Smoothed periodogram shrunk toward a scaled identity.

    ``(1 - W) f + W mu I`` with the weights of :func:`shrinkage_weights`.
    """
    W, mu, f = shrinkage_weights(per, M)
    eye = np.eye(per.p)
    F = (1 - W)[:, None, None] * f.matrices + (W * mu)[:, None, None] * eye
    return SpectralEstimate(per.grid, F, kind=SMOOTHED, span=M)


def offdiag_sq_norm(A):
    """Squared Frobenius norm ignoring the diagonal, over the last two axes."""
    A = np.asarray(A)
    p = A.shape[-1]
    mask = ~np.eye(p, dtype=bool)
    return np.sum(np.abs(A[..., mask]) ** 2, axis=-1)


def _check_pair(est, truth):
    if est.grid.n != truth.grid.n or est.p != truth.p:
        raise InputError(
            f"grid/shape mismatch: n={est.grid.n}, p={est.p} vs n={truth.grid.n}, p={truth.p}"
        )


def mise(est, truth, positions=None):
    """Integrated off-diagonal squared error over frequencies in (0, 1/2).

    ``(2/n) * sum ||est - truth||_*^2`` over the Fourier frequencies inside
    (0, 1/2). When ``positions`` restricts the sum to a subset of those, the
    mean over the subset stands in for the mean over all of them. Missing
    estimates give NaN.
    """
    _check_pair(est, truth)
    J = est.grid.positive()
    if positions is None:
        positions = J
    positions = np.asarray(positions)
    if positions.size == 0:
        raise InputError("no frequencies to integrate over")
    err = offdiag_sq_norm(est.matrices[positions] - truth.matrices[positions])
    return float(2.0 / est.grid.n * J.size * err.mean())


def support_metrics(est, truth, tau=SUPPORT_TAU, positions=None, truth_tol=1e-12):
    """True positive and true negative proportions of off-diagonal support.

    Computed per frequency and averaged over ``positions`` (default: all
    frequencies where ``est`` was solved). A proportion whose denominator is
    empty is returned as ``None``.
    """
    _check_pair(est, truth)
    if positions is None:
        positions = np.flatnonzero(est.solved)
    p = est.p
    mask = ~np.eye(p, dtype=bool)
    tpp, tnp = [], []
    for pos in positions:
        t = np.abs(truth.matrices[pos][mask])
        e = np.abs(est.matrices[pos][mask])
        scale = max(np.abs(truth.matrices[pos]).max(), 1.0)
        nonzero = t > truth_tol * scale
        if nonzero.any():
            tpp.append(np.mean(e[nonzero] > tau))
        if (~nonzero).any():
            tnp.append(np.mean(e[~nonzero] <= tau))
    return (
        float(np.mean(tpp)) if tpp else None,
        float(np.mean(tnp)) if tnp else None,
    )
