"""Statistics of the Loschmidt echo after a quench of the transverse-field Ising chain."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .distribution import (
    BatmanParams,
    EmpiricalDistribution,
    Regime,
    RegimeThresholds,
    batman_density,
    batman_params,
    classify_regime,
    distribution_distance,
    exponential_density,
    gaussian_density,
    histogram,
    sample_echo,
)
from .dynamics import (
    TimeSeries,
    collapse_series,
    energy_variance,
    log_loschmidt,
    loschmidt,
    magnetization,
    relaxation_time,
    short_time_gaussian,
)
from .errors import (
    EchoStatsError,
    InsufficientStructureError,
    MeasureTooCoarseError,
    NoDynamicsError,
    QuadratureError,
    ResourceGuardError,
)
from .ising import ModeData, QuenchSpec, band_edges, bogoliubov_angle, dispersion, mode_data, mode_grid
from .moments import (
    MomentReport,
    derangement_count,
    exact_moment_log,
    exact_variance,
    g0_coefficient,
    mean_echo_log,
    moment_bound_check,
    nonresonant_moments,
)
from .oracle import StateEnsemble, brute_echo, enumerate_states, power_sum, time_average_estimate
from .spectral import (
    SpectralMeasure,
    first_order_echo,
    gap_scales,
    one_particle_amplitude,
    revival_time,
    spectral_measure,
)
from .thermo import (
    ThermoAsymptotics,
    alpha_of_omega,
    asymptotic_s,
    density_of_states,
    g_rate,
    limit_order_compare,
    s_infinity,
    s_of_t,
    series_identity_check,
    thermo_asymptotics,
)
