"""Deterministic-source descriptors shared by the kernel and sampler code."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SourceSpec", "SpaceTimePoint"]


@dataclass(frozen=True)
class SourceSpec:
    """A deterministic source: matrix size ``n`` and shift vector ``epsilons``.

    Two scaling conventions for a rank-one source are provided as
    constructors.  ``from_lambda`` produces the shift used with the
    static (one-matrix) ensemble H + V, where the critical strength is
    eps = Lambda * sqrt(N/2) with Lambda = 1 critical.  ``from_omega``
    produces the shift used with the dynamical (chain) ensemble whose
    weight is exp(-tr H1^2 + tr V H1); there the critical strength is
    eps = sqrt(2N), approached at rate omega * N^{-1/3}.  The factor-two
    difference between the two conventions reflects the two ways the
    source enters the respective matrix weights.
    """

    n: int
    epsilons: np.ndarray = field(repr=False)

    def __post_init__(self):
        eps = np.asarray(self.epsilons, dtype=float)
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if eps.shape != (self.n,):
            raise ValueError(f"epsilons must have shape ({self.n},), got {eps.shape}")
        if not np.all(np.isfinite(eps)):
            raise ValueError("epsilons must be finite")
        object.__setattr__(self, "epsilons", eps)

    @classmethod
    def zero(cls, n: int) -> "SourceSpec":
        return cls(n, np.zeros(n))

    @classmethod
    def from_lambda(cls, n: int, lam: float) -> "SourceSpec":
        """Rank-one source eps_1 = Lambda * sqrt(n/2), rest zero (static convention)."""
        eps = np.zeros(n)
        eps[0] = lam * np.sqrt(n / 2.0)
        return cls(n, eps)

    @classmethod
    def from_omega(cls, n: int, omega: float) -> "SourceSpec":
        """Rank-one source eps_1 = sqrt(2n) * (1 - omega * n^{-1/3}), rest zero (chain convention)."""
        eps = np.zeros(n)
        eps[0] = np.sqrt(2.0 * n) * (1.0 - omega * n ** (-1.0 / 3.0))
        return cls(n, eps)


@dataclass(frozen=True)
class SpaceTimePoint:
    """A scaled space-time point (tau, xi) at which an extended kernel is evaluated."""

    tau: float
    xi: float

    def __post_init__(self):
        if not (np.isfinite(self.tau) and np.isfinite(self.xi)):
            raise ValueError(f"non-finite point ({self.tau}, {self.xi})")
