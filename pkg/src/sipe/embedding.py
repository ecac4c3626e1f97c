"""Real block embedding of complex matrices.

A complex matrix ``F = R + iS`` is stored as the real matrix::

    [[ R,  S],
     [-S,  R]]

For Hermitian ``F`` this is symmetric with the eigenvalues of ``F`` each
repeated twice. The inverse of the embedding of ``Z`` is the embedding of
``Z^{-1}``, and :func:`reassemble` maps a block ``[[A1, B1], [B2, A2]]``
back to ``(A1 + A2)/2 + i(B1 - B2)/2``, so that
``reassemble(block_embed(Z)) == Z`` for any complex ``Z``.

The other common layout ``[[A, -B], [B, A]]`` for ``Z = A + iB`` equals
``block_embed(conj(Z))``.
"""

import numpy as np

from .core import InputError, NumericalError, RealEmbedding

RCOND_CAP = 1e-8


def block_embed(Z):
    """Embed a complex ``(..., p, p)`` array as real ``(..., 2p, 2p)`` blocks."""
    Z = np.asarray(Z)
    R, S = Z.real, Z.imag
    top = np.concatenate([R, S], axis=-1)
    bottom = np.concatenate([-S, R], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def embed(f, tol=1e-10):
    """Real symmetric embedding of a Hermitian matrix.

    Raises
    ------
    InputError
        If ``f`` is not square or not Hermitian within ``tol`` (relative).
    """
    f = np.asarray(f, dtype=complex)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise InputError(f"expected a square matrix, got shape {f.shape}")
    scale = max(1.0, np.abs(f).max(initial=0.0))
    if np.abs(f - f.conj().T).max(initial=0.0) > tol * scale:
        raise InputError("matrix is not Hermitian")
    return block_embed(f)


def embed_spectrum(est):
    """Embed every matrix of a :class:`SpectralEstimate`."""
    return RealEmbedding(est.grid, block_embed(est.matrices))


def reassemble(block):
    """Complex ``p x p`` matrix from a real ``2p x 2p`` block matrix."""
    block = np.asarray(block, dtype=float)
    m = block.shape[-1]
    if block.shape[-2] != m or m % 2:
        raise InputError(f"expected an even square block matrix, got shape {block.shape}")
    p = m // 2
    A1, B1 = block[..., :p, :p], block[..., :p, p:]
    B2, A2 = block[..., p:, :p], block[..., p:, p:]
    return (A1 + A2) / 2 + 1j * (B1 - B2) / 2


def lemma_roundtrip_check(Z, rcond_cap=RCOND_CAP):
    """Compare direct complex inversion with inversion via the real embedding.

    Returns the largest absolute elementwise discrepancy.

    Raises
    ------
    NumericalError
        If the reciprocal condition number of ``Z`` is below ``rcond_cap``.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    s = np.linalg.svd(Z, compute_uv=False)
    if s[-1] <= rcond_cap * s[0]:
        raise NumericalError(
            f"matrix is ill-conditioned (rcond={s[-1] / s[0]:.3g} < {rcond_cap:g})"
        )
    direct = np.linalg.inv(Z)
    via_real = reassemble(np.linalg.inv(block_embed(Z)))
    return float(np.abs(direct - via_real).max())
