"""Discrete polynuclear growth (PNG) droplet with a boundary source.

The surface h(r, t) grows on the integer lattice from a flat zero profile:
each step takes the lateral maximum of the previous profile and adds a
geometric nucleation on the active sublattice r = -t+1, -t+3, ..., t-1.
Bulk nucleations use parameter q; the leftmost active site r = -t+1 is the
boundary source and uses alpha * sqrt(q).  Heights at the final time 2N are
recentred by a*N and scaled by d*N^{1/3} (cube-root regime) or by the
Gaussian constants when the source is supercritical (alpha > 1).

Geometric draws go through the inverse CDF floor(log(1-U) / log(p)), which
couples trajectories monotonically across source strengths when they share
the underlying uniforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PngParams",
    "HeightField",
    "MultiLayerField",
    "ScalingConstants",
    "sample_noise",
    "evolve",
    "run",
    "new_multilayer",
    "evolve_multilayer",
    "run_multilayer",
    "scale_height",
    "scale_height_gaussian",
    "scale_height_at",
]


@dataclass(frozen=True)
class PngParams:
    """Growth parameters: bulk q in (0,1), source strength alpha, droplet half-time n."""

    q: float
    alpha: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"need 0 < q < 1, got q={self.q}")
        sq = np.sqrt(self.q)
        if not sq <= self.alpha < 1.0 / sq:
            raise ValueError(
                f"need sqrt(q) <= alpha < 1/sqrt(q), got alpha={self.alpha} at q={self.q}"
            )
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")

    @property
    def edge_p(self) -> float:
        return self.alpha * np.sqrt(self.q)


@dataclass(frozen=True)
class HeightField:
    """Droplet profile at one time: heights over r in [-t, t]."""

    t: int
    h: np.ndarray = field(repr=False)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=np.int64)
        if h.shape != (2 * self.t + 1,):
            raise ValueError(f"height array must cover [-t, t], got {h.shape}")
        object.__setattr__(self, "h", h)

    @classmethod
    def flat(cls) -> "HeightField":
        return cls(0, np.zeros(1, dtype=np.int64))

    def height(self, r: int) -> int:
        if abs(r) > self.t:
            return 0
        return int(self.h[r + self.t])

    @property
    def origin(self) -> int:
        return int(self.h[self.t])


@dataclass(frozen=True)
class MultiLayerField:
    """Stack of ordered profiles; layer 0 is the droplet, lower layers record history."""

    t: int
    layers: np.ndarray = field(repr=False)  # shape (n_layers, 2t+1)

    def __post_init__(self):
        lay = np.asarray(self.layers, dtype=np.int64)
        if lay.ndim != 2 or lay.shape[1] != 2 * self.t + 1:
            raise ValueError("layers must have shape (L, 2t+1)")
        object.__setattr__(self, "layers", lay)

    def layer(self, ell: int) -> HeightField:
        return HeightField(self.t, self.layers[ell])


class LayerOrderingError(RuntimeError):
    """Internal consistency failure: a lower layer exceeded the one above it."""


@dataclass(frozen=True)
class ScalingConstants:
    """Centering and scaling constants derived from (q, alpha).

    Cube-root regime: a = 2 sqrt(q)/(1-sqrt(q)), d = (1+sqrt(q))^{1/3} q^{1/6}/(1-sqrt(q)),
    c = (1+sqrt(q))^{2/3}/q^{1/6}.  Gaussian regime (alpha > 1): a_g and d_g from the
    biased-edge law of large numbers and its variance.
    """

    q: float
    alpha: float

    @property
    def a(self) -> float:
        sq = np.sqrt(self.q)
        return 2.0 * sq / (1.0 - sq)

    @property
    def d(self) -> float:
        sq = np.sqrt(self.q)
        return (1.0 + sq) ** (1.0 / 3.0) * self.q ** (1.0 / 6.0) / (1.0 - sq)

    @property
    def c(self) -> float:
        sq = np.sqrt(self.q)
        return (1.0 + sq) ** (2.0 / 3.0) / self.q ** (1.0 / 6.0)

    @property
    def a_gauss(self) -> float:
        sq = np.sqrt(self.q)
        al = self.alpha
        return sq * (1.0 - 2.0 * al * sq + al**2) / ((al - sq) * (1.0 - al * sq))

    @property
    def d_gauss(self) -> float:
        al = self.alpha
        if al <= 1.0:
            raise ValueError("Gaussian scaling needs alpha > 1")
        sq = np.sqrt(self.q)
        num = np.sqrt(al) * self.q**0.25 * np.sqrt(1.0 - self.q) * np.sqrt(al**2 - 1.0)
        return num / ((1.0 - al * sq) * (al - sq))


def _geometric_from_uniform(u, log_p):
    """Inverse-CDF geometric draw floor(log(1-u)/log(p)); monotone in p."""
    return np.floor(np.log1p(-u) / log_p).astype(np.int64)


def sample_noise(r: int, t: int, params: PngParams, rng: np.random.Generator) -> int:
    """One nucleation draw at site r, time t: zero off the active sublattice."""
    if t - abs(r) <= 0 or (t - r) % 2 == 0:
        return 0
    p = params.edge_p if r == -t + 1 else params.q
    return int(_geometric_from_uniform(rng.random(), np.log(p)))


def _step(h: np.ndarray, center: int, t_new: int, params: PngParams, rng) -> None:
    """Advance the profile array in place to time t_new (uses t_new uniforms)."""
    lo, hi = center - t_new, center + t_new
    w = h[lo : hi + 1]
    m = w.copy()
    np.maximum(m[1:], w[:-1], out=m[1:])
    np.maximum(m[:-1], w[1:], out=m[:-1])
    u = rng.random(t_new)
    k = _geometric_from_uniform(u, np.log(params.q))
    k[0] = _geometric_from_uniform(u[0], np.log(params.edge_p))
    m[1::2] += k
    h[lo : hi + 1] = m


def evolve(field: HeightField, params: PngParams, rng: np.random.Generator) -> HeightField:
    """One growth step: lateral max plus fresh nucleations on the new sublattice."""
    t_new = field.t + 1
    h = np.zeros(2 * t_new + 1, dtype=np.int64)
    h[1:-1] = field.h
    _step(h, t_new, t_new, params, rng)
    return HeightField(t_new, h)


def run(params: PngParams, seed) -> HeightField:
    """Grow the droplet from flat to t = 2n; deterministic in the seed."""
    rng = np.random.default_rng(seed)
    t_final = 2 * params.n
    h = np.zeros(2 * t_final + 1, dtype=np.int64)
    for t in range(1, t_final + 1):
        _step(h, t_final, t, params, rng)
    return HeightField(t_final, h)


def new_multilayer(n_layers: int) -> MultiLayerField:
    if n_layers < 1:
        raise ValueError("need at least one layer")
    return MultiLayerField(0, np.zeros((n_layers, 1), dtype=np.int64))


def _absorbed(prev: np.ndarray) -> np.ndarray:
    """Height lost to collisions: overlap of the two lateral fronts above each site."""
    left = np.zeros_like(prev)
    right = np.zeros_like(prev)
    left[1:] = prev[:-1]
    right[:-1] = prev[1:]
    return np.maximum(np.minimum(left, right) - prev, 0)


def evolve_multilayer(
    field: MultiLayerField, params: PngParams, rng: np.random.Generator
) -> MultiLayerField:
    """Advance all layers: fresh noise on top, absorbed collision overlap below.

    Layer ell >= 1 nucleates exactly the height that layer ell-1 lost where two
    of its steps collided.  Raises LayerOrderingError if the stack ever stops
    being pointwise decreasing (which would indicate a rule violation).
    """
    t_new = field.t + 1
    n_layers = field.layers.shape[0]
    old = np.zeros((n_layers, 2 * t_new + 1), dtype=np.int64)
    old[:, 1:-1] = field.layers
    new = old.copy()
    # top layer: standard growth
    w = old[0]
    m = w.copy()
    np.maximum(m[1:], w[:-1], out=m[1:])
    np.maximum(m[:-1], w[1:], out=m[:-1])
    u = rng.random(t_new)
    k = _geometric_from_uniform(u, np.log(params.q))
    k[0] = _geometric_from_uniform(u[0], np.log(params.edge_p))
    nuc = np.zeros(2 * t_new + 1, dtype=np.int64)
    nuc[1 : 2 * t_new : 2] = k
    new[0] = m + nuc
    # lower layers: lateral max plus the overlap the layer above absorbed
    for ell in range(1, n_layers):
        w = old[ell]
        m = w.copy()
        np.maximum(m[1:], w[:-1], out=m[1:])
        np.maximum(m[:-1], w[1:], out=m[:-1])
        new[ell] = m + _absorbed(old[ell - 1])
    if np.any(new[1:] > new[:-1]):
        raise LayerOrderingError(f"layer ordering violated at t={t_new}")
    return MultiLayerField(t_new, new)


def run_multilayer(params: PngParams, n_layers: int, t_final: int, seed) -> MultiLayerField:
    """Grow a multilayer stack to time t_final; deterministic in the seed."""
    rng = np.random.default_rng(seed)
    field = new_multilayer(n_layers)
    for _ in range(t_final):
        field = evolve_multilayer(field, params, rng)
    return field


def scale_height(h0: int, params: PngParams) -> float:
    """Cube-root-scaled height at the origin, (h0 - a n) / (d n^{1/3})."""
    sc = ScalingConstants(params.q, params.alpha)
    return (h0 - sc.a * params.n) / (sc.d * params.n ** (1.0 / 3.0))


def scale_height_gaussian(h0: int, params: PngParams) -> float:
    """Gaussian-regime scaled height, (h0 - a_g n) / (d_g sqrt(n)); alpha > 1 only."""
    sc = ScalingConstants(params.q, params.alpha)
    return (h0 - sc.a_gauss * params.n) / (sc.d_gauss * np.sqrt(params.n))


def snap_position(tau: float, params: PngParams) -> int:
    """Lattice position for scaled coordinate tau, snapped to the parity of t = 2n.

    The profile at even final time is naturally indexed on the even
    sublattice; positions round to the nearest even integer.
    """
    sc = ScalingConstants(params.q, params.alpha)
    r = 2.0 * sc.c * params.n ** (2.0 / 3.0) * tau
    return 2 * int(np.rint(r / 2.0))


def scale_height_at(field: HeightField, tau: float, params: PngParams) -> float:
    """Scaled height at scaled position tau with the parabolic background removed."""
    r = snap_position(tau, params)
    if abs(r) > field.t:
        raise ValueError(f"position {r} outside the droplet cone [-{field.t}, {field.t}]")
    sc = ScalingConstants(params.q, params.alpha)
    return (field.height(r) - sc.a * params.n) / (sc.d * params.n ** (1.0 / 3.0)) + tau**2
