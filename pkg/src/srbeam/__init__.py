"""Sensing-resistant MIMO beamforming: precoders that communicate at high rate
while hiding the transmitter's true direction behind a decoy angular peak."""

from .beamformer import (
    SolutionCase,
    SrSolution,
    adpar_bounds,
    closed_form_extremal,
    null_space_basis,
    optimize,
    projected_adpar,
    sdr_solve,
    solve_power_allocation,
    water_filling,
)
from .bessel import bessel_j0
from .channel import (
    ArrayGeometry,
    ChannelRealization,
    draw_channel,
    los_component,
    steering_matrix,
    steering_vector,
    trial_rng,
)
from .config import SystemConfig
from .errors import (
    ConfigError,
    InfeasibleError,
    InvalidArgumentError,
    NumericalFailureError,
    SrbeamError,
)
from .linalg import GevdResult, cholesky, gevd, hermitian_evd, logdet_pd, svd
from .metrics import (
    Beampattern,
    Precoder,
    SpatialCovariance,
    achievable_rate,
    adpar,
    beampattern,
    build_j_matrix,
    projected_forms,
    spatial_covariance,
)

__version__ = "0.1.0"
