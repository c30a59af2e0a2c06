"""Distribution and tail asymptotics of the minimum workload of Levy-driven queues."""

from .closedform import log_survival_brownian, normal_tail, survival_brownian
from .errors import (
    AssumptionError,
    ClassificationError,
    DomainError,
    LqlabError,
    ModelSpecError,
    NumericalError,
    UnsupportedModelError,
)
from .fluctuation import (
    InverseEval,
    TransformValue,
    k_transform,
    phi_hat_inverse,
    phi_inverse,
    qe_tail,
    qe_transform,
    survival_expclock,
    survival_expclock_sn,
    survival_expclock_sp,
    transform,
    transform_sn,
    transform_sp,
    ymax_transform,
)
from .inversion import InversionConfig, SurvivalEstimate, invert_q, mgf_of_M, survival, survival_sn, survival_sp
from .mcsim import McConfig, McEstimate, estimate_mgf, estimate_survival, sample_stationary_q0, simulate_min
from .models import (
    BrownianDrift,
    CompoundPoissonNegative,
    CompoundPoissonPositive,
    ExponentEval,
    LevyModel,
    Stable,
    cumulant,
    model_spec,
    parse_model,
    psi,
    psi_hat,
    tail_x1,
)
from .tail_heavy import (
    AsymptoticResult,
    RegimeSpec,
    asymp_heavy,
    asymp_heavy_regime,
    levy_big_jump_tail,
    qe_tail_heavy,
    stable_tail_constant,
)
from .tail_light import (
    CramerSolution,
    cramer_solution,
    decay_rate_light,
    decay_rate_regime,
    qe_tail_light_bound,
    rate_function,
    theta_star,
)

__version__ = "0.1.0"
