"""Numerical verification of Gruss-type inequalities in Hilbert C*-modules over M_k."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    GenerationError,
    GrussError,
    NumericalFailure,
    PreconditionError,
    RangeError,
    SingularKernelError,
    UsageError,
)
from .linalg import DEFAULT_TOL, Tolerance, abs_element, loewner_leq, loewner_slack, operator_norm  # noqa: E402
from .module import gruss_e, gruss_p, inner_product, right_action, weighted_mean  # noqa: E402
from .inequalities import (  # noqa: E402
    Verdict,
    check_gruss,
    check_identities,
    check_schwarz,
    sharpness_demo,
)
from .transforms import (  # noqa: E402
    BoundReport,
    TransformParams,
    alpha_bound_check,
    fourier_bound_check,
    fourier_kernel_sum,
    mellin_bound_check,
    mellin_coefficient,
    power_sum,
)
from .campaign import CAMPAIGNS, SUITES, FuzzReport, fuzz_campaign, replay  # noqa: E402

__all__ = [
    "__version__",
    "GrussError", "DomainError", "PreconditionError", "NumericalFailure", "SingularKernelError",
    "GenerationError", "UsageError", "RangeError",
    "Tolerance", "DEFAULT_TOL", "abs_element", "loewner_leq", "loewner_slack", "operator_norm",
    "inner_product", "right_action", "gruss_e", "gruss_p", "weighted_mean",
    "Verdict", "check_schwarz", "check_identities", "check_gruss", "sharpness_demo",
    "TransformParams", "BoundReport", "fourier_bound_check", "mellin_bound_check", "alpha_bound_check",
    "fourier_kernel_sum", "mellin_coefficient", "power_sum",
    "CAMPAIGNS", "SUITES", "FuzzReport", "fuzz_campaign", "replay",
]
