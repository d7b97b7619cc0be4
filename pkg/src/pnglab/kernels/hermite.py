"""Multiple Hermite functions for the deterministic-source ensembles.

``mh_first`` (F_k) and ``mh_second`` (G_k) are the biorthogonal pair that
diagonalizes the source-model correlation structure:

    int F_j(x) G_k(x) e^{-x^2} dx = sqrt(pi) 2^j j! delta_{jk}.

F_k is a linear combination of exponentials e^{eps_l x}; G_k is a degree-k
polynomial.  Both collapse to the classical Hermite polynomial H_k when all
shifts vanish.
"""

from __future__ import annotations

import math

import numpy as np

from .source import SourceSpec

__all__ = ["mh_first", "mh_second"]

# Gauss-Hermite rule; exact for the polynomial integrands of mh_second up to
# degree 63, far beyond the k <= N-1 range used anywhere.
_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(32)

_CIRCLE_POINTS = 512


def _scaled_shifts(src: SourceSpec) -> np.ndarray:
    return src.epsilons / np.sqrt(2.0)


def _min_gap(vals: np.ndarray) -> float:
    if vals.size < 2:
        return np.inf
    s = np.sort(vals)
    return float(np.min(np.diff(s)))


def mh_first(k: int, src: SourceSpec, x: float) -> float:
    """First-kind multiple Hermite function F_k at x.

    Contour form: k! 2^{k/2} times the integral of
    e^{-z^2/2 + sqrt(2) z x} / prod_{l<=k+1} (z - eps_l') around the shifted
    poles eps_l' = eps_l / sqrt(2).  Distinct poles are summed by residues;
    clustered (confluent) poles fall back to trapezoid quadrature on a circle
    enclosing the cluster, which needs no derivative bookkeeping.
    """
    if not 0 <= k <= src.n - 1:
        raise ValueError(f"need 0 <= k <= n-1 = {src.n - 1}, got k={k}")
    ep = _scaled_shifts(src)[: k + 1]
    pref = math.factorial(k) * 2.0 ** (k / 2.0)
    if _min_gap(ep) > 1e-8:
        total = 0.0
        for l in range(k + 1):
            denom = np.prod(ep[l] - np.delete(ep, l)) if k > 0 else 1.0
            total += np.exp(-0.5 * ep[l] ** 2 + np.sqrt(2.0) * ep[l] * x) / denom
        return float(pref * total)
    center = 0.5 * (ep.min() + ep.max())
    radius = 0.5 * (ep.max() - ep.min()) + 1.0
    theta = 2.0 * np.pi * np.arange(_CIRCLE_POINTS) / _CIRCLE_POINTS
    z = center + radius * np.exp(1j * theta)
    vals = np.exp(-0.5 * z**2 + np.sqrt(2.0) * z * x)
    vals /= np.prod(z[:, None] - ep[None, :], axis=1)
    # (1/2*pi*i) contour integral by the trapezoid rule on the circle
    integral = np.mean(vals * (z - center))
    return float(pref * integral.real)


def mh_second(k: int, src: SourceSpec, x: float) -> float:
    """Second-kind multiple Hermite function G_k at x (a degree-k polynomial).

    The defining vertical-line integral is taken through the stationary point
    w = sqrt(2) x, where the weight collapses to exp(-t^2/2) and the rest of
    the integrand is a polynomial; Gauss-Hermite quadrature is then exact.
    """
    if not 0 <= k <= src.n - 1:
        raise ValueError(f"need 0 <= k <= n-1 = {src.n - 1}, got k={k}")
    ep = _scaled_shifts(src)[:k]
    w = np.sqrt(2.0) * x + 1j * np.sqrt(2.0) * _GH_NODES
    prod = np.ones_like(w)
    for e in ep:
        prod = prod * (w - e)
    val = np.dot(_GH_WEIGHTS, prod) / np.sqrt(np.pi)
    return float(2.0 ** (k / 2.0) * val.real)
