"""Sparse inverse periodogram estimation for multivariate time series."""

from .analysis import band_summary, partial_coherence, power_spectra, sparsity_fraction
from .clime import (
    DEFAULT_LAMBDAS,
    NoValidLambdaError,
    clime_column,
    clime_matrix,
    select_lambda,
    sipe,
    sipe_from_spectrum,
    symmetrize,
)
from .core import (
    DegenerateColumnError,
    FrequencyGrid,
    InputError,
    NumericalError,
    PrecisionEstimate,
    SipeError,
    SpectralEstimate,
    TimeSeriesMatrix,
    center_standardize,
    frequency_grid,
)
from .embedding import block_embed, embed, reassemble
from .metrics import mise, naive_inverse, shrinkage, support_metrics
from .simgen import make_model, simulate, true_spectrum
from .spectral import dft, gcv_select_span, periodogram, smooth

__version__ = "0.1.0"
