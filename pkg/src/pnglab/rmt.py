"""Random-matrix samplers and edge scalings.

Conventions (these fix every entrywise variance; an off-by-sqrt(2) here
silently shifts edge constants, so they are spelled out):

* GUE weight e^{-tr H^2}: diagonal variance 1/2, off-diagonal real and
  imaginary parts variance 1/4 each.  Semicircle edge at sqrt(2N).
* GOE weight e^{-tr M^2 / 2}: diagonal variance 1, off-diagonal variance 1/2.
  Same sqrt(2N) edge.
* Static source ensemble: H0 = H + diag(eps) with H the GUE above; the mean
  of H0 is diag(eps).
* Chain ensemble: weight e^{-tr H1^2 + tr V H1}, so H1 = V/2 + GUE; later
  slices follow the stationary Ornstein-Uhlenbeck update
  H_{j+1} = e^{-dt} H_j + noise(1 - e^{-2 dt}).

``largest_eigenvalue_*`` are exact-in-law fast samplers obtained by the
measure-preserving Householder reduction that fixes the first basis vector;
they exist because the Monte Carlo acceptance experiments need ~1e5 draws at
N = 400..500 within minutes on one core.  The dense samplers remain the
reference surface and the two routes are tested against each other.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .kernels import SourceSpec

__all__ = [
    "TimeGrid",
    "sample_gue",
    "sample_goe",
    "sample_source_matrix",
    "eigs_hermitian",
    "edge_scale",
    "edge_scale_gaussian",
    "sample_dyson_chain",
    "largest_eigenvalue_gue_source",
    "largest_eigenvalue_goe",
]


class EigenError(RuntimeError):
    """Eigenvalue computation failed to converge."""


class TimeGrid:
    """Strictly increasing chain times starting at 0."""

    def __init__(self, times):
        t = tuple(float(v) for v in times)
        if len(t) < 1 or t[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("times must be strictly increasing")
        self.times = t

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        return iter(self.times)


def sample_gue(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian draw from the weight e^{-tr H^2}."""
    diag = rng.standard_normal(n) / np.sqrt(2.0)
    off = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / 2.0
    h = np.triu(off, 1)
    h = h + h.conj().T
    h[np.diag_indices(n)] = diag
    return h


def sample_goe(n: int, rng: np.random.Generator) -> np.ndarray:
    """Real symmetric draw from the weight e^{-tr M^2 / 2}."""
    diag = rng.standard_normal(n)
    off = rng.standard_normal((n, n)) / np.sqrt(2.0)
    m = np.triu(off, 1)
    m = m + m.T
    m[np.diag_indices(n)] = diag
    return m


def sample_source_matrix(n: int, src: SourceSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw H0 = H + diag(eps) with H from the GUE weight e^{-tr H^2}."""
    if src.n != n:
        raise ValueError(f"source size {src.n} != matrix size {n}")
    h = sample_gue(n, rng)
    h[np.diag_indices(n)] += src.epsilons
    return h


def eigs_hermitian(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending.

    Thin wrapper over the LAPACK symmetric solver (Householder reduction
    plus implicitly shifted tridiagonal iteration); failure to converge is
    raised rather than papered over.
    """
    try:
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigenError(str(exc)) from exc


def edge_scale(lambda1: float, n: int) -> float:
    """Edge fluctuation coordinate X = (lambda1 - sqrt(2N)) * sqrt(2) * N^{1/6}."""
    return (lambda1 - np.sqrt(2.0 * n)) * np.sqrt(2.0) * n ** (1.0 / 6.0)


def edge_scale_gaussian(lambda1: float, n: int, lam: float) -> float:
    """Supercritical-source scaling (lambda1 - A sqrt(N)) / B, valid for Lambda > 1."""
    if lam <= 1.0:
        raise ValueError(f"Gaussian edge scaling needs Lambda > 1, got {lam}")
    a_g = (lam + 1.0 / lam) / np.sqrt(2.0)
    b_g = np.sqrt((lam**2 - 1.0) / (2.0 * lam**2))
    return (lambda1 - a_g * np.sqrt(n)) / b_g


def sample_dyson_chain(
    n: int, src: SourceSpec, grid: TimeGrid, rng: np.random.Generator
) -> list[np.ndarray]:
    """Eigenvalue spectra of the source-seeded stationary chain at each grid time.

    H1 = V/2 + GUE realizes the weight e^{-tr H1^2 + tr V H1}; subsequent
    slices apply the Ornstein-Uhlenbeck update, whose stationary law is the
    same GUE weight.
    """
    if src.n != n:
        raise ValueError(f"source size {src.n} != matrix size {n}")
    h = sample_gue(n, rng)
    h[np.diag_indices(n)] += 0.5 * src.epsilons
    spectra = [eigs_hermitian(h)]
    times = list(grid)
    for t_prev, t_next in zip(times, times[1:]):
        decay = np.exp(t_prev - t_next)
        fresh = sample_gue(n, rng) * np.sqrt(1.0 - decay**2)
        h = decay * h + fresh
        spectra.append(eigs_hermitian(h))
    return spectra


def largest_eigenvalue_gue_source(n: int, eps1: float, rng: np.random.Generator) -> float:
    """Largest eigenvalue of H + diag(eps1, 0, ..., 0), H from e^{-tr H^2}; exact in law.

    The Householder chain that tridiagonalizes H fixes e_1, so it commutes
    with the rank-one shift: the working matrix is the classical chi-chain
    tridiagonal with eps1 added to the first diagonal entry.
    """
    diag = rng.standard_normal(n) / np.sqrt(2.0)
    diag[0] += eps1
    if n == 1:
        return float(diag[0])
    dof = 2.0 * np.arange(n - 1, 0, -1)
    off = np.sqrt(rng.chisquare(dof)) / 2.0
    w = eigvalsh_tridiagonal(diag, off, select="i", select_range=(n - 1, n - 1))
    return float(w[0])


def largest_eigenvalue_goe(n: int, rng: np.random.Generator) -> float:
    """Largest eigenvalue of the GOE weight e^{-tr M^2 / 2}; exact in law."""
    diag = rng.standard_normal(n)
    if n == 1:
        return float(diag[0])
    dof = np.arange(n - 1, 0, -1, dtype=float)
    off = np.sqrt(rng.chisquare(dof) / 2.0)
    w = eigvalsh_tridiagonal(diag, off, select="i", select_range=(n - 1, n - 1))
    return float(w[0])
