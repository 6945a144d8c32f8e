"""Quantum correlations of two-flavor neutrino oscillations under phase damping."""

from .channel import (
    GAMMA_90_GEV,
    KM_TO_INV_GEV,
    LindbladSpec,
    XState,
    apply_dephasing,
    benchmark_gamma,
    build_state,
    gamma_from_lindblad,
    km_to_inverse_gev,
)
from .correlations import (
    CorrelationSet,
    binary_entropy,
    concurrence_closed,
    correlation_set,
    discord_closed,
    eof_closed,
    lqu_closed,
)
from .errors import DomainError, SingularityError
from .oscillation import (
    FlavorAmplitudes,
    MixingSector,
    OscillationPoint,
    TransitionProbabilities,
    amplitudes,
    coherence,
    phase,
    probabilities,
)

__version__ = "0.1.0"
