"""poisson-lebesgue: Lebesgue-type inequalities for Fourier sums on
generalized Poisson integrals.

Evaluates the truncated generalized Poisson kernel in underflow-safe scaled
form, computes two-sided bounds on best L_p approximations, and checks the
Lebesgue-type inequality ‖f − S_{n−1}f‖_C ≤ rhs on sampled classes.
"""

from .bestapprox import ApproxResult, best_approx, best_approx_l2, best_approx_lp
from .errors import (
    AccuracyError,
    AliasingError,
    ContractError,
    DivergenceError,
    DomainError,
    LebesgueError,
)
from .harness import ExperimentConfig, ProgressEvent, run_experiment, sample_unit_ball
from .kernel import KernelSpec, kernel_norm, kernel_norm_asymptotic, make_kernel_spec
from .lebesgue import (
    GAMMA_BOUND,
    THETA_BOUND,
    check_is_estimate,
    check_norm_asymptotics,
    class_bound,
    rhs,
    sharpness_probe,
    verify_inequality,
)
from .params import INF, ClassParams, conjugate, n0
from .results import BoundReport, ExperimentSummary, ISReport, KernelNormReport
from .scaled import ScaledValue
from .trig import GridFunction, ScaledPoly, TrigPoly

__version__ = "0.1.0"
__all__ = [
    "INF",
    "ClassParams",
    "conjugate",
    "n0",
    "ScaledValue",
    "TrigPoly",
    "ScaledPoly",
    "GridFunction",
    "KernelSpec",
    "make_kernel_spec",
    "kernel_norm",
    "kernel_norm_asymptotic",
    "ApproxResult",
    "best_approx",
    "best_approx_l2",
    "best_approx_lp",
    "GAMMA_BOUND",
    "THETA_BOUND",
    "rhs",
    "class_bound",
    "verify_inequality",
    "sharpness_probe",
    "check_norm_asymptotics",
    "check_is_estimate",
    "BoundReport",
    "ISReport",
    "KernelNormReport",
    "ExperimentSummary",
    "ExperimentConfig",
    "ProgressEvent",
    "run_experiment",
    "sample_unit_ball",
    "LebesgueError",
    "DomainError",
    "DivergenceError",
    "AliasingError",
    "ContractError",
    "AccuracyError",
]
