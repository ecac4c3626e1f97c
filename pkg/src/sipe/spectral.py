"""Fourier transform, periodogram and Daniell smoothing of multivariate series.

All per-frequency arrays are ordered like ``FrequencyGrid.indices``, i.e.
from ``-floor((n-1)/2)`` up to ``floor(n/2)``. Smoothing windows wrap
circularly over the n Fourier frequencies.
"""

import math

import numpy as np

from .core import (
    RAW,
    SMOOTHED,
    InputError,
    NumericalError,
    SpectralEstimate,
    frequency_grid,
    is_centered,
)


class SpanError(InputError):
    pass


def dft(ts):
    """Discrete Fourier transform with time index starting at 1.

    Returns
    -------
    d : ndarray, shape (n, p), complex
        ``d[pos] = sum_{t=1}^n X_t exp(-2j pi omega t)`` where ``omega`` is the
        grid frequency at position ``pos``.
    """
    grid = frequency_grid(ts.n)
    F = np.fft.fft(ts.values, axis=0)
    idx = grid.indices
    phase = np.exp(-2j * np.pi * idx / ts.n)
    return phase[:, None] * F[idx % ts.n]


def periodogram(ts):
    """Raw periodogram ``d d^* / n`` at every Fourier frequency.

    The series must be centred; the zero-frequency ordinate otherwise picks up
    the squared mean.
    """
    if not ts.centered and not is_centered(ts):
        raise InputError("periodogram requires a centred series (see center_standardize)")
    d = dft(ts)
    P = d[:, :, None] * np.conj(d[:, None, :]) / ts.n
    return SpectralEstimate(frequency_grid(ts.n), P, kind=RAW, span=0)


def _check_span(n, M):
    if M < 0 or int(M) != M:
        raise SpanError(f"span must be a nonnegative integer, got {M}")
    if 2 * M + 1 > n:
        raise SpanError(f"window 2M+1={2 * M + 1} exceeds the {n} Fourier frequencies")


def _circular_mean(values, M):
    """Average of ``values[pos + k]``, ``|k| <= M``, with circular wrap on axis 0."""
    n = values.shape[0]
    pad = np.concatenate([values[n - M:], values, values[:M]]) if M else values
    csum = np.cumsum(pad, axis=0)
    csum = np.concatenate([np.zeros_like(csum[:1]), csum])
    return (csum[2 * M + 1:] - csum[: n]) / (2 * M + 1)


def smooth(per, M):
    """Daniell-smoothed periodogram with half-width ``M``."""
    if per.kind != RAW:
        raise InputError("smooth expects a raw periodogram")
    n = per.grid.n
    _check_span(n, M)
    M = int(M)
    F = per.matrices.copy()
    for k in range(1, M + 1):
        F += np.roll(per.matrices, k, axis=0) + np.roll(per.matrices, -k, axis=0)
    if M:
        F /= 2 * M + 1
    return SpectralEstimate(per.grid, F, kind=SMOOTHED, span=M)


def default_spans(n):
    """Half-widths whose windows 2M+1 run over 3, 5, ... up to ceil(n**0.8)."""
    top = min(math.ceil(n**0.8), n)
    spans = list(range(1, (top - 1) // 2 + 1))
    return spans or [0]


def gcv_score(per, M):
    """Gamma-deviance generalised cross-validation score of span ``M``.

    Uses the diagonal ordinates at frequencies strictly inside (0, 1/2). The
    identity window (``M = 0``) has zero residual degrees of freedom and
    scores ``inf``.
    """
    n = per.grid.n
    _check_span(n, M)
    J = per.grid.positive()
    if J.size == 0:
        raise InputError(f"no Fourier frequencies inside (0, 1/2) for n={n}")
    diag = np.real(np.einsum("jii->ji", per.matrices))
    smoothed = _circular_mean(diag, int(M)) if M else diag
    P, f = diag[J], smoothed[J]
    if np.any(P <= 0):
        j, i = np.argwhere(P <= 0)[0]
        raise NumericalError(
            f"zero periodogram ordinate for series {i} at frequency "
            f"{per.grid.frequencies[J[j]]:.6g}"
        )
    if M == 0:
        return math.inf
    r = P / f
    deviance = np.mean(r - np.log(r) - 1.0)
    return deviance / (1.0 - 1.0 / (2 * M + 1)) ** 2


def gcv_select_span(per, candidates=None):
    """Pick the smoothing half-width minimising the GCV score.

    Ties go to the smaller span.

    Returns
    -------
    span : int
    scores : dict
        Score for every candidate.
    """
    if candidates is None:
        candidates = default_spans(per.grid.n)
    candidates = sorted(set(int(c) for c in candidates))
    if not candidates:
        raise InputError("no candidate spans given")
    for M in candidates:
        _check_span(per.grid.n, M)
    if len(candidates) == 1:
        return candidates[0], {candidates[0]: gcv_score(per, candidates[0])}
    scores = {M: gcv_score(per, M) for M in candidates}
    best = min(candidates, key=lambda M: (scores[M], M))
    return best, scores
