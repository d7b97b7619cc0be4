"""Limiting edge kernels: Airy, GOE^2, extended Airy, transition family.

Every kernel comes in two forms: a scalar evaluator (the public operation)
and a grid evaluator returning the full matrix over node vectors, which is
what the Nystrom determinant engine consumes.  The lambda-integrals all run
over truncated panels; beyond the truncation the integrands are below 1e-16
for every argument in the working range.
"""

from __future__ import annotations

import numpy as np

from ..special import (
    DomainError,
    airy_ai,
    airy_tail,
    composite_gauss_legendre,
    std_normal_cdf,
)

__all__ = [
    "DivergentKernelError",
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
    "airy_exp_moment",
    "airy_laplace_product",
]


class DivergentKernelError(ValueError):
    """Raised when kernel parameters put a lambda-integral outside convergence."""


def _osc_edges(a: float, b: float, max_step: float = 10.0) -> np.ndarray:
    """Panel edges from a to b, shrinking where the Airy factors oscillate."""
    edges = [a]
    x = a
    while x < b:
        step = max(0.25, 2.0 / np.sqrt(abs(x) + 1.0)) if x < 0 else max_step
        x = min(x + step, b)
        edges.append(x)
    return np.asarray(edges)


# lambda in [0, 40]: integrand oscillates only while xi + lambda < 0, so the
# leading panels are short; Airy decay kills everything past ~30.
_POS_RULE = composite_gauss_legendre(40, [0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 20.0, 30.0, 40.0])
# lambda in [-40, 0] for the reversed-time branch (always paired with
# exponential damping exp(dt*lambda), dt >= 1).
_NEG_RULE = composite_gauss_legendre(24, _osc_edges(-40.0, 0.0))

_AI_POS = airy_ai(_POS_RULE.nodes)
_AI_NEG = airy_ai(_NEG_RULE.nodes)


def k2(x: float, y: float) -> float:
    """Airy kernel, ``int_0^inf Ai(x+s) Ai(y+s) ds``."""
    return float(k2_matrix(np.array([x]), np.array([y]))[0, 0])


def k2_matrix(xs, ys) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ax = airy_ai(xs[:, None] + _POS_RULE.nodes[None, :])
    ay = airy_ai(ys[:, None] + _POS_RULE.nodes[None, :])
    return (ax * _POS_RULE.weights) @ ay.T


def k12(x: float, y: float) -> float:
    """GOE^2 kernel: Airy kernel plus the rank-one term Ai(x) * int_{-inf}^y Ai."""
    return k2(x, y) + airy_ai(x) * (1.0 - airy_tail(y))


def k12_matrix(xs, ys) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    rank1 = airy_ai(xs)[:, None] * (1.0 - airy_tail(ys))[None, :]
    return k2_matrix(xs, ys) + rank1


def airy_laplace_product(t: float, x, y):
    """Closed form of ``int_R e^{t*l} Ai(x+l) Ai(y+l) dl`` for t > 0.

    Equals the heat kernel ``exp(t^3/12 - t(x+y)/2 - (x-y)^2/(4t)) / sqrt(4 pi t)``;
    this is the Gaussian part split off the reversed-time extended-Airy branch.
    """
    if t <= 0:
        raise DomainError(f"need t > 0, got {t}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.exp(t**3 / 12.0 - t * (x + y) / 2.0 - (x - y) ** 2 / (4.0 * t)) / np.sqrt(4.0 * np.pi * t)
    return float(out) if out.ndim == 0 else out


def k2_ext_matrix(tau1: float, xs, tau2: float, ys) -> np.ndarray:
    """Extended Airy kernel on a grid: rows at (tau1, xs), columns at (tau2, ys)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    dt = tau2 - tau1
    if dt <= 0.0:
        # forward branch: int_0^inf e^{-l*(tau1-tau2)} Ai Ai dl, damping e^{dt*l}
        damp = np.exp(dt * _POS_RULE.nodes) * _POS_RULE.weights
        ax = airy_ai(xs[:, None] + _POS_RULE.nodes[None, :])
        ay = airy_ai(ys[:, None] + _POS_RULE.nodes[None, :])
        return (ax * damp) @ ay.T
    if dt >= 1.0:
        # reversed branch, well damped: -int_{-40}^0 e^{dt*l} Ai Ai dl
        damp = np.exp(dt * _NEG_RULE.nodes) * _NEG_RULE.weights
        ax = airy_ai(xs[:, None] + _NEG_RULE.nodes[None, :])
        ay = airy_ai(ys[:, None] + _NEG_RULE.nodes[None, :])
        return -(ax * damp) @ ay.T
    # small separation: subtract the closed-form whole-line integral from the
    # (mildly growing, superexponentially cut) positive half
    damp = np.exp(dt * _POS_RULE.nodes) * _POS_RULE.weights
    ax = airy_ai(xs[:, None] + _POS_RULE.nodes[None, :])
    ay = airy_ai(ys[:, None] + _POS_RULE.nodes[None, :])
    pos = (ax * damp) @ ay.T
    return pos - airy_laplace_product(dt, xs[:, None], ys[None, :])


def k2_ext(p1, p2) -> float:
    """Extended Airy kernel at two space-time points (tau, xi)."""
    t1, x1 = p1.tau, p1.xi
    t2, x2 = p2.tau, p2.xi
    return float(k2_ext_matrix(t1, np.array([x1]), t2, np.array([x2]))[0, 0])


def airy_exp_moment(c: float, y) -> np.ndarray | float:
    """Damped one-sided Airy moment ``R(c, y) = int_0^inf e^{-c*l} Ai(y-l) dl``.

    For c = 0 this is the (conditionally convergent) lower Airy integral
    1 - airy_tail(y); c < 0 diverges.  Three evaluation routes keep the
    result stable across the whole c >= 0 range:

    * c = 0: exact via airy_tail;
    * 0 < c < 1: Laplace identity R = e^{-c y} (e^{c^3/3} - int_y^inf e^{c u} Ai(u) du),
      where the remaining integral is well conditioned;
    * c >= 1: direct quadrature, the damping makes the integrand negligible
      past l ~ 45/c.
    """
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    if c < 0.0:
        raise DivergentKernelError(f"airy_exp_moment diverges for c < 0 (got c={c})")
    if c == 0.0:
        out = 1.0 - airy_tail(y_arr)
    elif c < 1.0:
        out = np.empty_like(y_arr)
        for i, yi in enumerate(y_arr):
            hi = max(yi, 0.0) + 40.0
            rule = composite_gauss_legendre(24, _osc_edges(yi, hi, max_step=5.0))
            integral = np.dot(rule.weights, np.exp(c * rule.nodes) * airy_ai(rule.nodes))
            out[i] = np.exp(-c * yi) * (np.exp(c**3 / 3.0) - integral)
    else:
        hi = 45.0 / c + 5.0
        rule = composite_gauss_legendre(24, _osc_edges(0.0, hi, max_step=2.0))
        av = airy_ai(y_arr[:, None] - rule.nodes[None, :])
        out = av @ (np.exp(-c * rule.nodes) * rule.weights)
    return float(out[0]) if np.ndim(y) == 0 else out


def k_transition_matrix(tau1: float, xs, tau2: float, ys, omega: float) -> np.ndarray:
    """Transition kernel grid: extended Airy plus the source rank-one term."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    c = omega + tau2
    if c < 0.0:
        raise DivergentKernelError(
            f"transition kernel needs omega + tau2 >= 0, got {omega} + {tau2}"
        )
    rank1 = airy_ai(xs)[:, None] * airy_exp_moment(c, ys)[None, :]
    return k2_ext_matrix(tau1, xs, tau2, ys) + rank1


def k_transition(p1, p2, omega: float) -> float:
    """Transition kernel between the GOE^2 (omega = tau = 0) and Airy regimes."""
    return float(
        k_transition_matrix(p1.tau, np.array([p1.xi]), p2.tau, np.array([p2.xi]), omega)[0, 0]
    )


def k_gauss_limit(x: float, lam: float) -> float:
    """Limiting Gaussian edge kernel for a supercritical source, ``Lambda > 1``.

    The raw kernel is exp(-X^2/2) / (sqrt(2 pi) B) with B^2 = (Lambda^2-1)/(2 Lambda^2);
    the pure-gauge factor exp(sqrt(2N) Lambda (y-x)) is dropped since it cannot
    change any Fredholm determinant.
    """
    if not np.isfinite(x) or not np.isfinite(lam):
        raise DomainError("non-finite argument")
    if lam <= 1.0:
        raise DomainError(f"Gaussian edge regime needs Lambda > 1, got {lam}")
    b = np.sqrt((lam**2 - 1.0) / (2.0 * lam**2))
    return float(np.exp(-0.5 * x**2) / (np.sqrt(2.0 * np.pi) * b))


def phi_ou(t_i: float, x: float, t_j: float, y: float) -> float:
    """Ornstein-Uhlenbeck transition density between matrix-chain time slices.

    Normalized so that ``int phi(t_i, x; t_j, y) dy = exp((t_i - t_j)/2)``.
    Zero for t_i > t_j; the coincident-time delta limit is rejected.
    """
    for v in (t_i, x, t_j, y):
        if not np.isfinite(v):
            raise DomainError("non-finite argument")
    if t_i > t_j:
        return 0.0
    if t_i == t_j:
        raise DomainError("phi_ou is a delta function at coincident times")
    d = t_i - t_j
    var = 1.0 - np.exp(2.0 * d)
    pref = np.sqrt(np.exp(d) / (np.pi * var))
    return float(pref * np.exp(-((y - np.exp(d) * x) ** 2) / var))


def phi_ou_conjugated(t_i: float, xs, t_j: float, ys) -> np.ndarray:
    """Grid of ``e^{y^2 - x^2} phi_ou(t_i, x; t_j, y)`` for t_i < t_j.

    Completing the square turns the conjugated propagator into the same
    Gaussian with x and y exchanged, which is bounded and safe to tabulate.
    """
    if t_i >= t_j:
        raise DomainError("conjugated propagator defined for t_i < t_j only")
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    d = t_i - t_j
    var = 1.0 - np.exp(2.0 * d)
    pref = np.sqrt(np.exp(d) / (np.pi * var))
    return pref * np.exp(-((xs[:, None] - np.exp(d) * ys[None, :]) ** 2) / var)


def gaussian_edge_cdf(s: float) -> float:
    """CDF companion of k_gauss_limit; kept as the exact erf route."""
    return std_normal_cdf(s)
