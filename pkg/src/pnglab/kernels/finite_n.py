"""Finite-N correlation kernels of the deterministic-source ensembles.

Both kernels are double contour integrals: a closed contour around the
(rescaled) source shifts times a vertical line.  Written in variables scaled
by sqrt(N/2) the integrand carries exp(N * ...) factors whose real part peaks
near the spectral-edge saddle, so all assembly subtracts the running maximum
in log space and matrix sizes up to N ~ 1000 stay inside double precision.

Gauge convention: the returned kernels carry the balanced conjugation
u(x) K(x, y) / u(y) with u(x) = exp(-x^2 / 2) applied to the natural
(unbalanced) integral.  Fredholm determinants and all determinantal minors
are invariant under this choice; it exists so Nystrom matrices stay well
scaled.  The static kernel reduces to the symmetric Hermite kernel in this
gauge when the source vanishes.
"""

from __future__ import annotations

import numpy as np

from ..special import composite_gauss_legendre
from .source import SourceSpec

__all__ = [
    "ContourError",
    "k_finite_static",
    "k_finite_static_matrix",
    "k_finite_dyn",
    "k_finite_dyn_matrix",
    "phi_half_gauge",
]


class ContourError(RuntimeError):
    """Raised when a requested contour geometry would sit on or cross a pole."""


def _grouped_logsum(points: np.ndarray, shifts: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """sum_l log(scale * p - shift_l), grouping repeated shifts by multiplicity."""
    vals, counts = np.unique(shifts, return_counts=True)
    out = np.zeros_like(points, dtype=complex)
    for v, c in zip(vals, counts):
        term = scale * points - v
        if np.any(term == 0):
            raise ContourError("contour passes through a source pole")
        out += c * np.log(term)
    return out


def _circle(n_points: int, radius: float):
    """Trapezoid rule on |z| = radius; weights absorb dz/(2 pi i)."""
    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    z = radius * np.exp(1j * theta)
    return z, z / n_points


def _vline(abscissa: float, half_height: float, n_points: int):
    """Composite Gauss-Legendre on a vertical segment; weights absorb dw/(2 pi i)."""
    order = 24
    panels = max(4, int(np.ceil(n_points / order)))
    rule = composite_gauss_legendre(order, np.linspace(-half_height, half_height, panels + 1))
    return abscissa + 1j * rule.nodes, rule.weights / (2.0 * np.pi)


def _auto_points(n: int, radius: float, abscissa: float, xmax: float, refine: int):
    """Node counts and line half-height from phase-swing bounds."""
    sqrt2n = np.sqrt(2.0 * n)
    swing_circle = 0.5 * n * radius**2 + sqrt2n * xmax * radius + n + 64
    m_circle = max(512, 64 * int(np.ceil(1.3 * swing_circle / 64.0))) * refine
    half_height = np.sqrt(84.0 / n)
    rate_line = n * abscissa + sqrt2n * xmax + n / abscissa + 32
    m_line = max(192, 24 * int(np.ceil(2.0 * rate_line * half_height / 24.0))) * refine
    return m_circle, m_line, half_height


def _contour_sum(xs, ys, sqrt2n, z, wz, w, ww, psi_z, psi_w, denom, base_log):
    """Normalized double-contour sum with joint per-row/per-column rescaling.

    The x- and y-dependent exponential factors are folded into the contour
    exponents before normalization, so every elementary factor has modulus
    at most one and the peak (the saddle region) sits exactly at one.
    Returns exp(L_ij) * Re(S_ij) with L collecting all large logarithms.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ew_log = psi_w[None, :] - sqrt2n * np.outer(xs, w)  # (nx, B)
    e0w = np.max(ew_log.real, axis=1)
    ew = np.exp(ew_log - e0w[:, None])
    ez_log = psi_z[:, None] + sqrt2n * np.outer(z, ys)  # (A, ny)
    e0z = np.max(ez_log.real, axis=0)
    ez = np.exp(ez_log - e0z[None, :])
    # prune contour nodes that are dead for every row/column
    keep_w = np.max(np.abs(ew), axis=0) > 1e-22
    keep_z = np.max(np.abs(ez), axis=1) > 1e-22
    ew = ew[:, keep_w]
    ez = ez[keep_z, :]
    core = (wz[keep_z, None] * ww[None, keep_w]) / denom[np.ix_(keep_z, keep_w)]
    s = ew @ core.T @ ez
    logscale = base_log + e0w[:, None] + e0z[None, :] + 0.5 * (xs[:, None] ** 2 - ys[None, :] ** 2)
    return np.exp(logscale) * s.real


def _saddle_abscissae(n: int, xs: np.ndarray, floor: float) -> np.ndarray:
    """Per-row line positions tracking the saddle of N w^2/2 - sqrt(2N) x w + N log w.

    For sigma = x sqrt(2/N) >= 2 the relevant real saddle is
    (sigma + sqrt(sigma^2 - 4)) / 2; below that the edge saddle merges at one
    and the line is clamped just right of the closed contour.  Positions are
    bucketed so nearby rows share a contour; a half-bucket of detuning costs a
    negligible amount of conditioning.
    """
    sigma = xs * np.sqrt(2.0 / n)
    disc = np.sqrt(np.maximum(sigma**2 - 4.0, 0.0))
    target = np.maximum((sigma + disc) / 2.0, floor)
    step = max(0.25, 1.0 / np.sqrt(n))
    return floor + step * np.round((target - floor) / step)


def k_finite_static_matrix(
    xs,
    ys,
    src: SourceSpec,
    *,
    circle_points: int | None = None,
    line_points: int | None = None,
    radius: float | None = None,
    abscissa: float | None = None,
    refine: int = 1,
) -> np.ndarray:
    """Static source kernel on a grid, balanced gauge (see module docstring).

    The closed contour surrounds all rescaled shifts eps_j * sqrt(2/N); the
    vertical line sits strictly to its right and follows the row saddle, which
    keeps the coupling pole away from both paths and the quadrature well
    conditioned out to x of a few tens.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    n = src.n
    et = src.epsilons * np.sqrt(2.0 / n)
    r = radius if radius is not None else max(1.0, float(np.max(np.abs(et))) + 0.1) + 0.1
    if np.max(np.abs(et)) >= r:
        raise ContourError("circle must strictly enclose every source shift")
    floor = r + 0.1
    row_a = (
        np.full(xs.shape, float(abscissa))
        if abscissa is not None
        else _saddle_abscissae(n, xs, floor)
    )
    if np.min(row_a) <= r:
        raise ContourError(f"line abscissa {np.min(row_a)} must exceed circle radius {r}")

    sqrt2n = np.sqrt(2.0 * n)
    m_c, _, hh = _auto_points(n, r, float(np.max(row_a)), float(np.max(np.abs(ys))), refine)
    z, wz = _circle(circle_points * refine if circle_points else m_c, r)
    psi_z = -0.5 * n * z**2 - _grouped_logsum(z, et)
    base_log = np.log(2.0 * np.sqrt(n / 2.0))

    out = np.empty((xs.size, ys.size))
    for a in np.unique(row_a):
        rows = np.flatnonzero(row_a == a)
        _, m_l, _ = _auto_points(n, r, a, float(np.max(np.abs(xs[rows]))), refine)
        w, ww = _vline(a, hh, line_points * refine if line_points else m_l)
        psi_w = +0.5 * n * w**2 + _grouped_logsum(w, et)
        denom = z[:, None] - w[None, :]
        # minus sign: the (2 pi i)^2 of the two measures gives -(2 pi)^2, and
        # the kernel definition carries an overall minus
        out[rows] = -_contour_sum(
            xs[rows], ys, sqrt2n, z, wz, w, ww, psi_z, psi_w, denom, base_log
        )
    return out


def k_finite_static(x: float, y: float, src: SourceSpec, **opts) -> float:
    """Static deterministic-source kernel at a point (balanced gauge)."""
    return float(k_finite_static_matrix(np.array([x]), np.array([y]), src, **opts)[0, 0])


def phi_half_gauge(t_i: float, xs, t_j: float, ys) -> np.ndarray:
    """Grid of e^{(y^2 - x^2)/2} phi(t_i, x; t_j, y) for t_i < t_j.

    The half-gauge keeps the quadratic form in the exponent negative
    definite, so values stay bounded by the prefactor.
    """
    if not t_i < t_j:
        raise ContourError("propagator term applies to strictly increasing times")
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    d = t_i - t_j
    var = 1.0 - np.exp(2.0 * d)
    pref = np.sqrt(np.exp(d) / (np.pi * var))
    expo = 0.5 * (ys[None, :] ** 2 - xs[:, None] ** 2) - (
        (ys[None, :] - np.exp(d) * xs[:, None]) ** 2
    ) / var
    return pref * np.exp(expo)


def k_finite_dyn_matrix(
    t_r: float,
    xs,
    t_s: float,
    ys,
    src: SourceSpec,
    *,
    circle_points: int | None = None,
    line_points: int | None = None,
    refine: int = 1,
) -> np.ndarray:
    """Dynamical (matrix-chain) kernel block on a grid, balanced gauge.

    Implements the two-time double-integral kernel minus the propagator
    counterterm for increasing times.  The chain convention ties the source
    to the weight exp(-tr H1^2 + tr V H1): shifts are rescaled by
    1/sqrt(2N) and the closed contour encloses e^{-t_s} times them.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    n = src.n
    delta = t_r - t_s
    ec = src.epsilons / np.sqrt(2.0 * n)
    r = max(1.0, float(np.max(np.abs(ec))) * np.exp(-t_s) + 0.1) + 0.1
    # the coupling pole set in the w-plane is the circle of radius r*e^{-delta}
    floor = (r + 0.1) * max(np.exp(-delta), 1.0)
    row_a = _saddle_abscissae(n, xs, floor)

    sqrt2n = np.sqrt(2.0 * n)
    m_c, _, hh = _auto_points(n, r, float(np.max(row_a)), float(np.max(np.abs(ys))), refine)
    z, wz = _circle(circle_points * refine if circle_points else m_c, r)
    psi_z = -0.5 * n * z**2 - _grouped_logsum(z, ec, scale=np.exp(t_s))
    base_log = np.log(sqrt2n) + 0.5 * delta

    out = np.empty((xs.size, ys.size))
    for a in np.unique(row_a):
        rows = np.flatnonzero(row_a == a)
        _, m_l, _ = _auto_points(n, r, a, float(np.max(np.abs(xs[rows]))), refine)
        w, ww = _vline(a, hh, line_points * refine if line_points else m_l)
        psi_w = +0.5 * n * w**2 + _grouped_logsum(w, ec, scale=np.exp(t_r))
        denom = w[None, :] * np.exp(delta) - z[:, None]
        out[rows] = _contour_sum(
            xs[rows], ys, sqrt2n, z, wz, w, ww, psi_z, psi_w, denom, base_log
        )
    if t_r < t_s:
        out = out - phi_half_gauge(t_r, xs, t_s, ys)
    return out


def k_finite_dyn(t_r: float, x: float, t_s: float, y: float, src: SourceSpec, **opts) -> float:
    """Dynamical source kernel at one space-time pair (balanced gauge)."""
    return float(
        k_finite_dyn_matrix(t_r, np.array([x]), t_s, np.array([y]), src, **opts)[0, 0]
    )
