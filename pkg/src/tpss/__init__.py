"""Two-photon spherical states: angular distributions, polarization density
matrices, and analyzer coincidence correlations, with every closed form
backed by an independent computational route and Monte Carlo sampling."""

from .angular import legendre_p, wigner_3j, wigner_3j_exact, wigner_small_d
from .correlations import (
    Analyzer,
    AnalyzerKind,
    CoincidenceProbability,
    circular_analyzer,
    circular_parity_blindness,
    closed_form_W,
    coincidence,
    linear_analyzer,
)
from .distribution import (
    AngularDistributionCurve,
    Method,
    classify,
    tabulate_curve,
    w_direct,
    w_series,
)
from .errors import DomainError, NoIntensityError
from .polarization import (
    PolarizationMatrix,
    PolarizationParams,
    density_matrix,
    polarization_params,
    rho_eo,
    rho_parity,
)
from .sampler import (
    CoincidenceTally,
    RunConfig,
    event_stream,
    run_coincidence,
    sample_direction,
    sample_thetas,
)
from .states import (
    BASIS,
    Direction,
    HelicityComponent,
    StateLabel,
    Variant,
    amplitude,
    amplitude_vector,
    enumerate_states,
    helicity_decomposition,
    iter_states,
    state_counts,
)
from .verify import CheckResult, run_all

__version__ = "0.1.0"

__all__ = [
    "Analyzer",
    "AnalyzerKind",
    "AngularDistributionCurve",
    "BASIS",
    "CheckResult",
    "CoincidenceProbability",
    "CoincidenceTally",
    "Direction",
    "DomainError",
    "HelicityComponent",
    "Method",
    "NoIntensityError",
    "PolarizationMatrix",
    "PolarizationParams",
    "RunConfig",
    "StateLabel",
    "Variant",
    "amplitude",
    "amplitude_vector",
    "circular_analyzer",
    "circular_parity_blindness",
    "classify",
    "closed_form_W",
    "coincidence",
    "density_matrix",
    "enumerate_states",
    "event_stream",
    "helicity_decomposition",
    "iter_states",
    "legendre_p",
    "linear_analyzer",
    "polarization_params",
    "rho_eo",
    "rho_parity",
    "run_all",
    "run_coincidence",
    "sample_direction",
    "sample_thetas",
    "state_counts",
    "tabulate_curve",
    "w_direct",
    "w_series",
    "wigner_3j",
    "wigner_3j_exact",
    "wigner_small_d",
]
