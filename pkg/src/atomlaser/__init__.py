"""Two-mode bosonic output-coupler dynamics.

Closed-form coherent-state evolution for a constant drive, ODE integrators
for swept drives, a truncated Fock-space oracle with coherence and
entanglement diagnostics, and a scenario-driven CLI emitting CSV/JSON.
"""

from .closed_form import (
    FieldSample,
    TransferMatrix,
    amplitude_propagator,
    evolve_product_state,
    fho_amplitude,
    field_expectation,
    field_profile_samples,
    lz_asymptotic_amplitude,
    transfer_matrix,
    untrapped_population_bogoliubov,
    untrapped_population_exact,
)
from .dynamics import (
    IntegrationConfig,
    Trajectory,
    bogoliubov_convergence_scan,
    integrate_fho_amplitude,
    integrate_transfer_matrix,
    lz_transfer,
)
from .errors import (
    ConfigError,
    CutoffTooSmallError,
    NumericalFailureError,
    OutOfDomainError,
    PreconditionError,
    UndefinedStatisticError,
    UnsupportedProfileError,
)
from .fock import (
    FockBasis,
    OracleConfig,
    TwoModeFockVector,
    best_product_fidelity,
    coherent_product_vector,
    fidelity_to_product,
    fock_state_vector,
    kerr_breakdown_scan,
    mandel_q,
    mean_amplitude,
    propagate,
    quadrature_variance,
    reduced_purity,
    suggested_cutoff,
)
from .params import (
    ConstantSweep,
    LinearChirp,
    ModelParams,
    ProductCoherentState,
    SpectralData,
    SweepProfile,
    TabulatedSweep,
    ThermoLimitSpec,
    detuning,
    phase_integral,
    spectral_data,
    sweep_frequency,
)

__version__ = "0.1.0"
