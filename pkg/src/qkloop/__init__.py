"""Exact loop-space computations for genus-0 permutation-equivariant quantum K-theory."""

from .coeff_ring import LambdaElem, RingConfig, RingError, adams, exp_filtered, log_filtered
from .config import SuiteConfig, load_config
from .cyclotomic import (
    AdelicProfile,
    CycloNumber,
    adelic_localize,
    classify_poles,
    cyclotomic_polynomial,
    expand_at_root,
    psi_localization_check,
)
from .loop_algebra import (
    KVector,
    LaurentPoly,
    LoopError,
    PairingData,
    RationalLoop,
    expand,
    format_loop,
    omega,
    project_split,
)
from .parser import ExprError, parse_element, parse_lambda, parse_loop
from .point_theory import (
    ConeCertificate,
    ConeError,
    TheoryParams,
    cone_membership,
    cone_point,
    f0_reconstruct,
    j_function,
    metric_scalar,
    s_operators,
    string_flow,
    sym_trace_oracle,
    tangent_parameter,
    tangent_parameter_inverse,
)
from .report import IdentityReport, emit_report
from .verify import (
    check_ancestor_shift,
    check_hamiltonian_identity,
    check_sstar_s,
    run_suite,
    w_form,
    wdvv_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "AdelicProfile",
    "ConeCertificate",
    "ConeError",
    "CycloNumber",
    "ExprError",
    "IdentityReport",
    "KVector",
    "LambdaElem",
    "LaurentPoly",
    "LoopError",
    "PairingData",
    "RationalLoop",
    "RingConfig",
    "RingError",
    "SuiteConfig",
    "TheoryParams",
    "adams",
    "adelic_localize",
    "check_ancestor_shift",
    "check_hamiltonian_identity",
    "check_sstar_s",
    "classify_poles",
    "cone_membership",
    "cone_point",
    "cyclotomic_polynomial",
    "emit_report",
    "exp_filtered",
    "expand",
    "expand_at_root",
    "f0_reconstruct",
    "format_loop",
    "j_function",
    "load_config",
    "log_filtered",
    "metric_scalar",
    "omega",
    "parse_element",
    "parse_lambda",
    "parse_loop",
    "project_split",
    "psi_localization_check",
    "run_suite",
    "s_operators",
    "string_flow",
    "sym_trace_oracle",
    "tangent_parameter",
    "tangent_parameter_inverse",
    "w_form",
    "wdvv_kernel",
]
