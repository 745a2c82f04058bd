"""
kerneldyn: linear dynamics of the adjoint multiplication operator on analytic
reproducing kernel Hilbert spaces of the unit disc, computed on truncated
coefficient matrices.
"""

from .constructions import (
    BlockCoefficientKernel,
    PolynomialSpec,
    TridiagonalSpec,
    block_polynomial_conjugate,
    conjugate_by_series,
    expand_znf_in_basis,
    quasi_scalar,
    tridiagonal_boundedness,
    tridiagonal_coefficients,
    znf_norm_bound,
)
from .criteria import (
    INCONCLUSIVE,
    SATISFIED_ANALYTIC,
    SATISFIED_ON_WINDOW,
    VIOLATED_ON_WINDOW,
    Classification,
    CriteriaConfig,
    Verdict,
)
from .errors import *  # noqa: F401,F403
from .kernel import CoefficientMatrix, diagonal_coefficients, gram, normalized_diagonal, psd_check
from .model import (
    apply_adjoint,
    build_model,
    compression_norm,
    criterion_witness,
    eigenvector_check,
    orbit,
    periodic_point,
    unit,
)
from .report import __version__, analyze, demo_counterexample, load_spec, simulate, verify
from .seqdsl import NamedSequence, parse_sequence_arg, parse_sequence_expr, sequence_from_json
