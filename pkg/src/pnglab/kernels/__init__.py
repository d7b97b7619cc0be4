"""Kernel evaluators: limiting edge kernels, finite-N contour kernels,
multiple Hermite functions, and the source descriptors they share."""

from .airy_family import (
    DivergentKernelError,
    airy_exp_moment,
    airy_laplace_product,
    k2,
    k2_ext,
    k2_ext_matrix,
    k2_matrix,
    k12,
    k12_matrix,
    k_gauss_limit,
    k_transition,
    k_transition_matrix,
    phi_ou,
    phi_ou_conjugated,
)
from .finite_n import (
    ContourError,
    k_finite_dyn,
    k_finite_dyn_matrix,
    k_finite_static,
    k_finite_static_matrix,
    phi_half_gauge,
)
from .hermite import mh_first, mh_second
from .source import SourceSpec, SpaceTimePoint
from .variants import (
    AiryKernel,
    FiniteDynamicalKernel,
    FiniteStaticKernel,
    FixedTimeKernel,
    GaussLimitKernel,
    Goe2Kernel,
    TransitionKernel,
)

__all__ = [
    "DivergentKernelError",
    "ContourError",
    "SourceSpec",
    "SpaceTimePoint",
    "airy_exp_moment",
    "airy_laplace_product",
    "k2",
    "k2_matrix",
    "k12",
    "k12_matrix",
    "k2_ext",
    "k2_ext_matrix",
    "k_transition",
    "k_transition_matrix",
    "k_gauss_limit",
    "phi_ou",
    "phi_ou_conjugated",
    "k_finite_static",
    "k_finite_static_matrix",
    "k_finite_dyn",
    "k_finite_dyn_matrix",
    "phi_half_gauge",
    "mh_first",
    "mh_second",
    "AiryKernel",
    "Goe2Kernel",
    "TransitionKernel",
    "GaussLimitKernel",
    "FiniteStaticKernel",
    "FiniteDynamicalKernel",
    "FixedTimeKernel",
]
