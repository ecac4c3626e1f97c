"""Partial coherence and frequency-band summaries of spectral precision estimates."""

import logging
import math

import numpy as np

from .core import NumericalError, SipeError

log = logging.getLogger(__name__)


class InvalidPrecisionError(NumericalError):
    pass


class EmptyBandError(SipeError, ValueError):
    pass


def partial_coherence(est):
    """Squared partial coherence ``|T_jk|^2 / (T_jj T_kk)`` at each frequency.

    Returns an ``(n, p, p)`` real array. The diagonal is set to 1 by
    convention; frequencies without an estimate are NaN.

    Raises
    ------
    InvalidPrecisionError
        If a diagonal entry is not strictly positive.
    """
    grid = est.grid
    n, p = grid.n, est.p
    rho = np.full((n, p, p), np.nan)
    eye = np.eye(p, dtype=bool)
    for pos in np.flatnonzero(est.solved):
        T = est.matrices[pos]
        d = np.real(np.diag(T))
        bad = np.flatnonzero(d <= 0)
        if bad.size:
            raise InvalidPrecisionError(
                f"nonpositive diagonal entry for series {bad[0]} at frequency "
                f"{grid.frequencies[pos]:.6g} (index {grid.indices[pos]})"
            )
        r = np.abs(T) ** 2 / np.outer(d, d)
        r[eye] = 1.0
        if np.linalg.eigvalsh(0.5 * (T + T.conj().T))[0] > 0:
            # Cauchy-Schwarz on a positive definite matrix
            assert r.max() <= 1 + 1e-9, "partial coherence above 1 for a positive definite matrix"
        elif r.max() > 1:
            log.warning(
                "estimate at frequency %.6g is not positive definite; partial coherence "
                "reaches %.3g", grid.frequencies[pos], r.max()
            )
        rho[pos] = r
    return rho


def band_positions(grid, band, mask=None):
    a, b = band
    if not 0 <= a < b <= 0.5:
        raise EmptyBandError(f"band must satisfy 0 <= a < b <= 0.5, got ({a}, {b})")
    freqs = grid.frequencies
    inside = (freqs > a) & (freqs < b)
    if mask is not None:
        inside &= mask
    positions = np.flatnonzero(inside)
    if positions.size == 0:
        next_freq = (math.floor(a * grid.n) + 1) / grid.n
        raise EmptyBandError(
            f"band ({a}, {b}) contains no Fourier frequency for n={grid.n}; "
            f"b must exceed {next_freq:.6g}"
        )
    return positions


def band_summary(rho, grid, band=(0.0, 0.1), stat="median"):
    """Entrywise summary of per-frequency matrices over Fourier frequencies in ``band``.

    ``band`` is the open interval ``(a, b)``. Frequencies whose matrices are
    missing (NaN) are skipped.
    """
    funcs = {"median": np.median, "mean": np.mean, "max": np.max, "min": np.min}
    if stat not in funcs:
        raise ValueError(f"unknown statistic {stat!r}; choose from {sorted(funcs)}")
    rho = np.asarray(rho)
    available = np.all(np.isfinite(rho), axis=(1, 2))
    positions = band_positions(grid, band, available)
    return funcs[stat](rho[positions], axis=0)


def power_spectra(est, names=None):
    """Long-format rows ``(dimension, frequency, power)`` for frequencies in (0, 1/2)."""
    p = est.p
    names = names or [f"V{i + 1}" for i in range(p)]
    J = est.grid.positive()
    diag = np.real(np.einsum("jii->ji", est.matrices))
    rows = []
    for i in range(p):
        for pos in J:
            rows.append(
                {
                    "dimension": names[i],
                    "frequency": float(est.grid.frequencies[pos]),
                    "power": max(float(diag[pos, i]), 0.0),
                }
            )
    return rows


def sparsity_fraction(summary, tau=1e-12):
    """Fraction of off-diagonal pairs ``j < k`` with ``|entry| <= tau``."""
    summary = np.asarray(summary)
    p = summary.shape[0]
    if p < 2:
        raise ValueError("need at least two dimensions")
    iu = np.triu_indices(p, 1)
    return float(np.mean(np.abs(summary[iu]) <= tau))
