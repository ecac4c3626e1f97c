"""VAR(1) scenario generators with closed-form spectra.

For ``X_t = Phi X_{t-1} + e_t`` with ``Cov(e_t) = Sigma_e`` the spectral
density is ``f(w) = A(w)^{-1} Sigma_e A(w)^{-*}`` with
``A(w) = I - Phi exp(-2 pi i w)``, the expectation of the periodogram
``d d^* / n`` as n grows. Its inverse is ``A(w)^* Omega A(w)`` with
``Omega = Sigma_e^{-1}``.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .core import (
    SMOOTHED,
    InputError,
    PrecisionEstimate,
    SpectralEstimate,
    TimeSeriesMatrix,
)

BURN_IN = 1000


@dataclass(frozen=True)
class Var1Model:
    """Stationary Gaussian VAR(1) model.

    ``precision`` is the innovation precision ``Sigma_e^{-1}``; it is computed
    when not given, and kept exactly when given so that its zero pattern
    survives into the true spectral precision.
    """

    phi: np.ndarray
    sigma_e: np.ndarray
    seed: int = 0
    precision: np.ndarray = None
    name: str = "var1"
    repair: float = 0.0

    def __post_init__(self):
        phi = np.atleast_2d(np.asarray(self.phi, dtype=float))
        sigma = np.atleast_2d(np.asarray(self.sigma_e, dtype=float))
        p = phi.shape[0]
        if phi.shape != (p, p) or sigma.shape != (p, p):
            raise InputError("Phi and Sigma_e must be square and of equal size")
        radius = np.abs(np.linalg.eigvals(phi)).max()
        if radius >= 1:
            raise InputError(f"VAR(1) is not stationary: spectral radius {radius:.4g} >= 1")
        if not np.allclose(sigma, sigma.T, atol=1e-12):
            raise InputError("innovation covariance is not symmetric")
        if np.linalg.eigvalsh(sigma)[0] <= 0:
            raise InputError("innovation covariance is not positive definite")
        prec = self.precision
        prec = np.linalg.inv(sigma) if prec is None else np.asarray(prec, dtype=float)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "sigma_e", sigma)
        object.__setattr__(self, "precision", prec)

    @property
    def p(self):
        return self.phi.shape[0]

    @property
    def spectral_radius(self):
        return float(np.abs(np.linalg.eigvals(self.phi)).max())


def make_wn(p, seed=0):
    """Standard Gaussian white noise: ``Phi = 0``, ``Sigma_e = I``."""
    return Var1Model(np.zeros((p, p)), np.eye(p), seed=seed, precision=np.eye(p), name="wn")


def banded_phi(p):
    """Upper-banded coefficient matrix: 0.5 on the diagonal, then -0.3 and 0.2.

    The band is truncated at the matrix edge, so row ``p-1`` only gets the
    -0.3 entry and row ``p`` only its diagonal.
    """
    phi = 0.5 * np.eye(p)
    phi += np.diag(np.full(p - 1, -0.3), 1)
    phi += np.diag(np.full(p - 2, 0.2), 2)
    return phi


def make_banded_var1(p, seed=0):
    if p < 3:
        raise InputError(f"banded VAR(1) needs p >= 3, got {p}")
    return Var1Model(banded_phi(p), np.eye(p), seed=seed, precision=np.eye(p), name="var1")


def make_sparse_var1(p, seed=0, min_eig=0.05):
    """Diagonal VAR(1) with a sparse innovation precision.

    The diagonal of ``Phi`` has magnitudes uniform on (0.25, 0.75) with random
    signs. The innovation precision has unit diagonal and off-diagonal entries
    0 or 0.5 with equal probability; ``delta * I`` is added when needed so
    that its smallest eigenvalue is at least ``min_eig``. The shift is stored
    in ``repair``.
    """
    if p < 2:
        raise InputError(f"sparse VAR(1) needs p >= 2, got {p}")
    rng = np.random.default_rng(seed)
    mags = rng.uniform(0.25, 0.75, size=p)
    signs = rng.choice([-1.0, 1.0], size=p)
    phi = np.diag(mags * signs)
    upper = np.triu(np.where(rng.random((p, p)) < 0.5, 0.5, 0.0), 1)
    omega = np.eye(p) + upper + upper.T
    delta = max(0.0, min_eig - np.linalg.eigvalsh(omega)[0])
    omega = omega + delta * np.eye(p)
    return Var1Model(
        phi, np.linalg.inv(omega), seed=seed, precision=omega, name="svar1", repair=delta
    )


SCENARIOS = {
    "wn": make_wn,
    "var1": make_banded_var1,
    "svar1": make_sparse_var1,
}


def make_model(name, p, seed=0):
    try:
        factory = SCENARIOS[name.lower()]
    except KeyError:
        raise InputError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
    return factory(p, seed=seed)


def simulate(model, n, burn_in=BURN_IN, seed=None):
    """Draw ``n`` observations after discarding ``burn_in`` draws.

    The draw is determined by ``seed`` (default ``model.seed``) and uses a
    random stream separate from the one that drew the model's coefficients.
    """
    if n < 2:
        raise InputError(f"need n >= 2, got {n}")
    rng = np.random.default_rng([model.seed if seed is None else seed, 1])
    p = model.p
    chol = np.linalg.cholesky(model.sigma_e)
    e = rng.standard_normal((burn_in + n, p)) @ chol.T
    x = np.zeros((burn_in + n, p))
    prev = np.zeros(p)
    phi = model.phi
    for t in range(burn_in + n):
        prev = phi @ prev + e[t]
        x[t] = prev
    return TimeSeriesMatrix(x[burn_in:])


def transfer(model, freqs):
    """``A(w) = I - Phi exp(-2 pi i w)`` for each frequency, shape (n, p, p)."""
    z = np.exp(-2j * np.pi * np.asarray(freqs))
    return np.eye(model.p)[None] - z[:, None, None] * model.phi[None]


def true_spectrum(model, grid):
    """True spectral density and spectral precision on a Fourier grid.

    Returns
    -------
    f : SpectralEstimate
    theta : PrecisionEstimate
    """
    A = transfer(model, grid.frequencies)
    Ainv = np.linalg.inv(A)
    AH = np.conj(np.swapaxes(A, -1, -2))
    f = Ainv @ model.sigma_e @ np.conj(np.swapaxes(Ainv, -1, -2))
    theta = AH @ model.precision @ A
    theta = 0.5 * (theta + np.conj(np.swapaxes(theta, -1, -2)))
    return (
        SpectralEstimate(grid, f, kind=SMOOTHED, span=0),
        PrecisionEstimate(grid, theta, span=0),
    )


def autocovariances(model, max_lag):
    """``Gamma(h) = E[X_{t+h} X_t^T]`` for ``h = 0 .. max_lag``."""
    gamma0 = linalg.solve_discrete_lyapunov(model.phi, model.sigma_e)
    out = [gamma0]
    for _ in range(max_lag):
        out.append(model.phi @ out[-1])
    return np.array(out)
