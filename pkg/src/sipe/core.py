"""Shared data model: time series, Fourier grid and per-frequency matrix stores."""

from dataclasses import dataclass, field, replace

import numpy as np

RAW = "raw-periodogram"
SMOOTHED = "smoothed"


class SipeError(Exception):
    """Base class for errors raised by this package."""


class InputError(SipeError, ValueError):
    """Invalid user input: shapes, sizes, malformed files."""


class DegenerateColumnError(InputError):
    pass


class NumericalError(SipeError):
    """A numerical procedure failed (singular matrix, no valid tuning value)."""


@dataclass(frozen=True)
class TimeSeriesMatrix:
    """Real ``n x p`` observation matrix, rows are time points."""

    values: np.ndarray
    names: tuple = None
    centered: bool = False
    standardized: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise InputError("time series must be a 2-d array (time x series)")
        n, p = values.shape
        if n < 2 or p < 1:
            raise InputError(f"need n >= 2 and p >= 1, got n={n}, p={p}")
        if not np.all(np.isfinite(values)):
            raise InputError("time series contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        names = self.names
        if names is None:
            names = tuple(f"V{i + 1}" for i in range(p))
        names = tuple(str(s) for s in names)
        if len(names) != p:
            raise InputError(f"{len(names)} names given for {p} columns")
        object.__setattr__(self, "names", names)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]


def center_standardize(ts, standardize=False):
    """Remove column means and optionally scale to unit sample variance.

    The variance divisor is ``n - 1``. Idempotent.
    """
    x = ts.values - ts.values.mean(axis=0)
    if standardize:
        sd = x.std(axis=0, ddof=1)
        scale = np.maximum(np.abs(ts.values).max(axis=0), 1.0)
        for i in np.flatnonzero(sd <= 1e-12 * scale):
            raise DegenerateColumnError(
                f"column {ts.names[i]!r} is constant and cannot be standardized"
            )
        x = x / sd
    return replace(
        ts,
        values=x,
        centered=True,
        standardized=standardize or ts.standardized,
    )


def is_centered(ts, rtol=1e-10):
    x = ts.values
    rms = np.sqrt(np.mean(x**2, axis=0))
    return bool(np.all(np.abs(x.mean(axis=0)) <= rtol * np.maximum(rms, 1e-300)))


@dataclass(frozen=True)
class FrequencyGrid:
    """Fourier frequencies ``j / n`` for ``j = -floor((n-1)/2) .. floor(n/2)``."""

    n: int
    indices: np.ndarray = field(init=False, repr=False)
    frequencies: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.n)
        if n < 2:
            raise InputError(f"frequency grid needs n >= 2, got {n}")
        indices = np.arange(-((n - 1) // 2), n // 2 + 1)
        freqs = indices / n
        indices.setflags(write=False)
        freqs.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "frequencies", freqs)

    def __len__(self):
        return self.n

    def position(self, j):
        """Array position of Fourier index ``j``, wrapping circularly mod n."""
        return (np.asarray(j) + (self.n - 1) // 2) % self.n

    def positive(self):
        """Positions of frequencies strictly inside (0, 1/2)."""
        return np.flatnonzero((self.frequencies > 0) & (self.frequencies < 0.5))


def frequency_grid(n):
    return FrequencyGrid(n)


def hermitian_part(F):
    return 0.5 * (F + np.conj(np.swapaxes(F, -1, -2)))


@dataclass(frozen=True)
class SpectralEstimate:
    """Complex Hermitian ``p x p`` matrix at each grid frequency.

    ``matrices`` has shape ``(n, p, p)`` ordered like ``grid.indices``.
    Matrices are symmetrised to exact Hermitian form on construction.
    """

    grid: FrequencyGrid
    matrices: np.ndarray
    kind: str = RAW
    span: int = 0

    def __post_init__(self):
        F = np.asarray(self.matrices, dtype=complex)
        if F.ndim != 3 or F.shape[1] != F.shape[2] or F.shape[0] != self.grid.n:
            raise InputError(f"expected ({self.grid.n}, p, p) matrices, got {F.shape}")
        if self.kind not in (RAW, SMOOTHED):
            raise InputError(f"unknown spectral estimate kind {self.kind!r}")
        F = hermitian_part(F)
        F.setflags(write=False)
        object.__setattr__(self, "matrices", F)

    @property
    def p(self):
        return self.matrices.shape[1]

    def at(self, j):
        return self.matrices[self.grid.position(j)]


@dataclass(frozen=True)
class RealEmbedding:
    grid: FrequencyGrid
    blocks: np.ndarray


@dataclass
class PrecisionEstimate:
    """Per-frequency complex precision matrices plus per-frequency solve records.

    ``matrices`` has shape ``(n, p, p)``; entries at frequencies that were not
    estimated (or failed) are NaN. ``solved`` marks estimated positions.
    ``diagnostics`` maps grid position to a list of per-column solve records;
    ``failures`` maps grid position to an error message.
    """

    grid: FrequencyGrid
    matrices: np.ndarray
    lam: np.ndarray = None
    solved: np.ndarray = None
    diagnostics: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    span: int = None

    def __post_init__(self):
        self.matrices = np.asarray(self.matrices, dtype=complex)
        n = self.grid.n
        if self.solved is None:
            self.solved = np.all(np.isfinite(self.matrices), axis=(1, 2))
        if self.lam is None:
            self.lam = np.full(n, np.nan)
        self.lam = np.broadcast_to(np.asarray(self.lam, dtype=float), (n,)).copy()

    @property
    def p(self):
        return self.matrices.shape[1]

    def at(self, j):
        return self.matrices[self.grid.position(j)]


@dataclass(frozen=True)
class SparsityClassParams:
    """Row-lq budget ``c_np`` and l1 budget ``M_np`` of a sparse precision class."""

    q: float
    c_np: float
    M_np: float

    def __post_init__(self):
        if not 0 <= self.q < 1:
            raise InputError(f"q must lie in [0, 1), got {self.q}")
        for name in ("c_np", "M_np"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InputError(f"{name} must be finite and positive, got {v}")

    def contains(self, theta, cond_cap=np.inf):
        theta = np.asarray(theta)
        a = np.abs(theta)
        if self.q == 0:
            row = (a > 0).sum(axis=0)
        else:
            row = (a**self.q).sum(axis=0)
        eig = np.linalg.eigvalsh(hermitian_part(theta))
        return bool(
            row.max() <= self.c_np
            and a.sum(axis=0).max() <= self.M_np
            and eig[0] > 0
            and eig[-1] / eig[0] <= cond_cap
        )
