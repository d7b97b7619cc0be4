"""Kernel variant objects consumed by the Fredholm determinant engine.

Each variant exposes the same small surface:

* ``matrix(xs, ys)`` for single-time kernels, or
* ``block(t1, xs, t2, ys)`` plus ``multitime = True`` for two-time families,
* ``certificate_tol``, the self-consistency tolerance the determinant
  engine enforces between successive quadrature refinements.

Variants are immutable and safe to share between workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..special import DomainError
from . import airy_family, finite_n
from .source import SourceSpec

__all__ = [
    "AiryKernel",
    "Goe2Kernel",
    "TransitionKernel",
    "GaussLimitKernel",
    "FiniteStaticKernel",
    "FiniteDynamicalKernel",
    "FixedTimeKernel",
]


@dataclass(frozen=True)
class AiryKernel:
    """Airy kernel; its Fredholm determinant over (s, inf) is the GUE edge law."""

    multitime = False
    certificate_tol = 1e-8

    def matrix(self, xs, ys) -> np.ndarray:
        return airy_family.k2_matrix(xs, ys)


@dataclass(frozen=True)
class Goe2Kernel:
    """Airy kernel plus rank-one source term; determinant gives the GOE^2 law."""

    multitime = False
    certificate_tol = 1e-8

    def matrix(self, xs, ys) -> np.ndarray:
        return airy_family.k12_matrix(xs, ys)


@dataclass(frozen=True)
class TransitionKernel:
    """Two-time transition family indexed by the source parameter omega."""

    omega: float
    multitime = True
    certificate_tol = 1e-8

    def block(self, t1: float, xs, t2: float, ys) -> np.ndarray:
        return airy_family.k_transition_matrix(t1, xs, t2, ys, self.omega)


@dataclass(frozen=True)
class GaussLimitKernel:
    """Rank-one Gaussian edge kernel of a supercritical source.

    ``matrix`` folds in the dx/dX Jacobian of the Gaussian edge scaling, so
    the induced Fredholm determinant over (s, inf) is exactly the standard
    normal CDF; the raw kernel value is ``k_gauss_limit``.
    """

    lam: float
    n: int | None = None
    multitime = False
    certificate_tol = 1e-8

    def __post_init__(self):
        if self.lam <= 1.0:
            raise DomainError(f"Gaussian edge regime needs Lambda > 1, got {self.lam}")

    def matrix(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        pdf = np.exp(-0.5 * xs**2) / np.sqrt(2.0 * np.pi)
        return np.repeat(pdf[:, None], ys.size, axis=1)


@dataclass(frozen=True)
class FiniteStaticKernel:
    """Exact finite-N kernel of the ensemble H + diag(eps) with GUE weight e^{-tr H^2}."""

    src: SourceSpec
    circle_points: int | None = None
    line_points: int | None = None
    refine: int = 1
    multitime = False
    certificate_tol = 1e-6

    def matrix(self, xs, ys) -> np.ndarray:
        return finite_n.k_finite_static_matrix(
            xs,
            ys,
            self.src,
            circle_points=self.circle_points,
            line_points=self.line_points,
            refine=self.refine,
        )


@dataclass(frozen=True)
class FiniteDynamicalKernel:
    """Exact finite-N two-time kernel of the source-seeded stationary matrix chain."""

    src: SourceSpec
    times: tuple = field(default=(0.0,))
    circle_points: int | None = None
    line_points: int | None = None
    refine: int = 1
    multitime = True
    certificate_tol = 1e-6

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if len(times) < 1 or times[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)

    def block(self, t1: float, xs, t2: float, ys) -> np.ndarray:
        if t1 not in self.times or t2 not in self.times:
            raise ValueError(f"time not on grid {self.times}: {t1}, {t2}")
        return finite_n.k_finite_dyn_matrix(
            t1,
            xs,
            t2,
            ys,
            self.src,
            circle_points=self.circle_points,
            line_points=self.line_points,
            refine=self.refine,
        )


@dataclass(frozen=True)
class FixedTimeKernel:
    """Single-time restriction of a two-time kernel at a fixed scaled time."""

    base: object
    tau: float
    multitime = False

    @property
    def certificate_tol(self) -> float:
        return self.base.certificate_tol

    def matrix(self, xs, ys) -> np.ndarray:
        return self.base.block(self.tau, xs, self.tau, ys)
