"""Heat-diffusion graph retrieval from multichannel signals."""
from .errors import (
    ConfigError,
    HeatGraphError,
    IllConditioned,
    InvalidBand,
    InvalidMatrix,
    LogUndefined,
    NonPositiveSample,
    NotSymmetric,
    SingularMatrix,
    TooFew,
    TooShort,
    ZeroVariance,
)
from .graph import adjacency_from_raw_laplacian, laplacian_from_adjacency, project_to_valid_laplacian
from .matfun import mat_exp, mat_log_principal, ridge_inverse, spectral_norm_sym
from .retrieve import (
    RetrievalConfig,
    RetrievalResult,
    graph_thermal_diffusivity,
    lagged_splits,
    noise_outer_estimate,
    retrieve_laplacian,
)
from .simulate import DataMatrix, SimConfig, exact_deterministic_solution, simulate, step

__version__ = "0.1.0"
