"""Experiment orchestration: sampling runs, determinant tables, comparisons.

Reproducibility contract: sample index i always draws from the dedicated
stream SeedSequence(entropy=seed, spawn_key=(i,)).  Workers split the index
range, so output bytes are identical for any worker count.  Output files are
CSV with a single '#'-prefixed JSON metadata line (or a JSON mirror).
"""

from __future__ import annotations

import json
import multiprocessing as mp
from dataclasses import dataclass, field

import numpy as np

from .. import png as png_mod
from .. import rmt
from ..fredholm import (
    DeterminantProblem,
    det_multi,
    dist_f2,
    dist_goe2,
    dist_transition,
    dist_finite_n,
)
from ..kernels import FiniteDynamicalKernel, FiniteStaticKernel, SourceSpec, TransitionKernel
from ..special import std_normal_cdf
from .stats import EmpiricalCdf, ReferenceCdf, ks_distance

__all__ = ["ExperimentConfig", "ConfigError", "run_experiment", "read_table"]

EXPERIMENTS = (
    "png-height",
    "png-layers",
    "rmt-edge",
    "rmt-dyson",
    "dist-eval",
    "dist-joint",
    "compare",
)


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")

    def get(self, key, default=None, required=False, cast=None):
        if key not in self.params or self.params[key] is None:
            if required:
                raise ConfigError(f"{self.experiment}: missing required parameter {key!r}")
            return default
        val = self.params[key]
        if cast is not None:
            try:
                val = cast(val)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{self.experiment}: bad value for {key!r}: {val!r}") from exc
        return val


def stream_rng(seed: int, index: int) -> np.random.Generator:
    """The dedicated generator for sample ``index`` under the master seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def parse_grid(text: str) -> np.ndarray:
    """Parse 'lo:hi:step' into an inclusive grid."""
    try:
        lo, hi, step = (float(p) for p in str(text).split(":"))
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}, want lo:hi:step") from exc
    if step <= 0 or hi < lo:
        raise ConfigError(f"bad grid spec {text!r}")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def parse_floats(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(p) for p in str(text).split(","))


# ---------------------------------------------------------------------------
# per-sample kernels of the Monte Carlo experiments (top level for pickling)


def _png_chunk(params, seed, lo, hi):
    p = png_mod.PngParams(params["q"], params["alpha"], params["n"])
    gaussian = params["scaling"] == "gaussian"
    rows = []
    for i in range(lo, hi):
        field = png_mod.run(p, stream_rng(seed, i))
        h0 = field.origin
        scaled = (
            png_mod.scale_height_gaussian(h0, p) if gaussian else png_mod.scale_height(h0, p)
        )
        rows.append((i, h0, scaled))
    return rows


def _rmt_edge_chunk(params, seed, lo, hi):
    ensemble = params["ensemble"]
    n = params["n"]
    lam = params.get("lambda")
    method = params["method"]
    rows = []
    for i in range(lo, hi):
        rng = stream_rng(seed, i)
        if ensemble == "gue":
            lam1 = (
                rmt.largest_eigenvalue_gue_source(n, 0.0, rng)
                if method == "tridiagonal"
                else float(rmt.eigs_hermitian(rmt.sample_gue(n, rng))[-1])
            )
            scaled = rmt.edge_scale(lam1, n)
        elif ensemble == "goe":
            lam1 = (
                rmt.largest_eigenvalue_goe(n, rng)
                if method == "tridiagonal"
                else float(rmt.eigs_hermitian(rmt.sample_goe(n, rng))[-1])
            )
            scaled = rmt.edge_scale(lam1, n)
        elif ensemble == "goe2max":
            if method == "tridiagonal":
                a = rmt.largest_eigenvalue_goe(n, rng)
                b = rmt.largest_eigenvalue_goe(n, rng)
            else:
                a = float(rmt.eigs_hermitian(rmt.sample_goe(n, rng))[-1])
                b = float(rmt.eigs_hermitian(rmt.sample_goe(n, rng))[-1])
            lam1 = max(a, b)
            scaled = rmt.edge_scale(lam1, n)
        elif ensemble == "gue-source":
            eps1 = lam * np.sqrt(n / 2.0)
            if method == "tridiagonal":
                lam1 = rmt.largest_eigenvalue_gue_source(n, eps1, rng)
            else:
                src = SourceSpec.from_lambda(n, lam)
                lam1 = float(rmt.eigs_hermitian(rmt.sample_source_matrix(n, src, rng))[-1])
            scaled = (
                rmt.edge_scale_gaussian(lam1, n, lam) if lam > 1.0 else rmt.edge_scale(lam1, n)
            )
        else:  # pragma: no cover - validated upstream
            raise ConfigError(f"unknown ensemble {ensemble!r}")
        rows.append((i, lam1, scaled))
    return rows


def _dyson_chunk(params, seed, lo, hi):
    n = params["n"]
    src = SourceSpec(n, np.asarray(params["eps"]))
    grid = rmt.TimeGrid(params["times"])
    rows = []
    for i in range(lo, hi):
        spectra = rmt.sample_dyson_chain(n, src, grid, stream_rng(seed, i))
        rows.append((i, *(float(s[-1]) for s in spectra)))
    return rows


_CHUNKS = {
    "png-height": _png_chunk,
    "rmt-edge": _rmt_edge_chunk,
    "rmt-dyson": _dyson_chunk,
}


def _run_chunks(kind, params, seed, samples, workers):
    spans = []
    step = max(1, samples // (workers * 8) if workers > 1 else samples)
    at = 0
    while at < samples:
        spans.append((at, min(at + step, samples)))
        at = spans[-1][1]
    fn = _CHUNKS[kind]
    if workers > 1:
        with mp.Pool(processes=workers) as pool:
            parts = pool.starmap(fn, [(params, seed, lo, hi) for lo, hi in spans])
    else:
        parts = [fn(params, seed, lo, hi) for lo, hi in spans]
    rows = [r for part in parts for r in part]
    rows.sort(key=lambda r: r[0])
    return rows


# ---------------------------------------------------------------------------
# output helpers


def _format_cell(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_table(path, header, rows, meta, fmt="csv"):
    if path is None:
        return
    if fmt == "json":
        payload = {
            "meta": meta,
            "columns": list(header),
            "rows": [[(int(v) if isinstance(v, (int, np.integer)) else v) for v in r] for r in rows],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh)
            fh.write("\n")
        return
    lines = ["# " + json.dumps(meta, sort_keys=True)]
    lines.append(",".join(header))
    for r in rows:
        lines.append(",".join(_format_cell(v) for v in r))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_table(path):
    """Read a table written by write_table (either format); returns (meta, header, rows)."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        return payload["meta"], payload["columns"], [list(r) for r in payload["rows"]]
    lines = [ln for ln in text.splitlines() if ln.strip()]
    meta = {}
    if lines and lines[0].startswith("#"):
        meta = json.loads(lines[0][1:].strip())
        lines = lines[1:]
    header = lines[0].split(",")
    rows = [[_maybe_num(v) for v in ln.split(",")] for ln in lines[1:]]
    return meta, header, rows


def _maybe_num(text):
    try:
        f = float(text)
    except ValueError:
        return text
    return int(f) if f.is_integer() and "." not in text and "e" not in text.lower() else f


# ---------------------------------------------------------------------------
# experiment drivers


def _exp_png_height(cfg: ExperimentConfig):
    q = cfg.get("q", required=True, cast=float)
    alpha = cfg.get("alpha", required=True, cast=float)
    n = cfg.get("N", required=True, cast=int)
    samples = cfg.get("samples", 1000, cast=int)
    seed = cfg.get("seed", 0, cast=int)
    workers = cfg.get("workers", 1, cast=int)
    scaling = cfg.get("scaling", "auto")
    if scaling == "auto":
        scaling = "gaussian" if alpha > 1.0 else "cube-root"
    if scaling not in ("cube-root", "gaussian"):
        raise ConfigError(f"bad scaling {scaling!r}")
    if scaling == "gaussian" and alpha <= 1.0:
        raise ConfigError("gaussian scaling needs alpha > 1")
    png_mod.PngParams(q, alpha, n)  # validate ranges early
    params = {"q": q, "alpha": alpha, "n": n, "scaling": scaling}
    rows = _run_chunks("png-height", params, seed, samples, workers)
    header = ("index", "h0", "scaled")
    summary = {
        "experiment": "png-height",
        "q": q,
        "alpha": alpha,
        "N": n,
        "samples": samples,
        "seed": seed,
        "scaling": scaling,
        "mean_scaled": float(np.mean([r[2] for r in rows])),
    }
    return header, rows, summary


def _exp_png_layers(cfg: ExperimentConfig):
    q = cfg.get("q", required=True, cast=float)
    alpha = cfg.get("alpha", required=True, cast=float)
    t_final = cfg.get("t", required=True, cast=int)
    n_layers = cfg.get("layers", 10, cast=int)
    seed = cfg.get("seed", 0, cast=int)
    params = png_mod.PngParams(q, alpha, max(1, (t_final + 1) // 2))
    field = png_mod.run_multilayer(params, n_layers, t_final, seed)
    rr = np.arange(-field.t, field.t + 1)
    rows = [(int(r), *(int(v) for v in field.layers[:, idx])) for idx, r in enumerate(rr)]
    header = ("r", *(f"layer{k}" for k in range(n_layers)))
    summary = {
        "experiment": "png-layers",
        "q": q,
        "alpha": alpha,
        "t": t_final,
        "layers": n_layers,
        "seed": seed,
        "nonempty_layers": int(np.sum(field.layers.max(axis=1) > 0)),
        "ordering_ok": bool(np.all(field.layers[1:] <= field.layers[:-1])),
    }
    return header, rows, summary


def _exp_rmt_edge(cfg: ExperimentConfig):
    ensemble = cfg.get("ensemble", required=True)
    if ensemble not in ("gue", "goe", "goe2max", "gue-source"):
        raise ConfigError(f"unknown ensemble {ensemble!r}")
    n = cfg.get("N", required=True, cast=int)
    lam = cfg.get("Lambda", cast=float)
    if ensemble == "gue-source" and lam is None:
        raise ConfigError("gue-source needs Lambda")
    samples = cfg.get("samples", 1000, cast=int)
    seed = cfg.get("seed", 0, cast=int)
    workers = cfg.get("workers", 1, cast=int)
    method = cfg.get("method", "auto")
    if method == "auto":
        method = "tridiagonal" if n >= 100 else "dense"
    if method not in ("dense", "tridiagonal"):
        raise ConfigError(f"bad method {method!r}")
    params = {"ensemble": ensemble, "n": n, "lambda": lam, "method": method}
    rows = _run_chunks("rmt-edge", params, seed, samples, workers)
    header = ("index", "lambda1", "scaled")
    summary = {
        "experiment": "rmt-edge",
        "ensemble": ensemble,
        "N": n,
        "Lambda": lam,
        "samples": samples,
        "seed": seed,
        "method": method,
        "mean_scaled": float(np.mean([r[2] for r in rows])),
    }
    return header, rows, summary


def _exp_rmt_dyson(cfg: ExperimentConfig):
    n = cfg.get("N", required=True, cast=int)
    times = parse_floats(cfg.get("times", required=True))
    eps = parse_floats(cfg.get("eps", ",".join(["0"] * n)))
    if len(eps) != n:
        raise ConfigError(f"eps must have {n} entries")
    samples = cfg.get("samples", 1000, cast=int)
    seed = cfg.get("seed", 0, cast=int)
    workers = cfg.get("workers", 1, cast=int)
    rmt.TimeGrid(times)  # validate
    params = {"n": n, "times": times, "eps": eps}
    rows = _run_chunks("rmt-dyson", params, seed, samples, workers)
    header = ("index", *(f"lmax_t{j}" for j in range(len(times))))
    summary = {
        "experiment": "rmt-dyson",
        "N": n,
        "times": list(times),
        "eps": list(eps),
        "samples": samples,
        "seed": seed,
    }
    return header, rows, summary


def _exp_dist_eval(cfg: ExperimentConfig):
    which = cfg.get("which", required=True).upper()
    grid = parse_grid(cfg.get("s", "-6:3:0.05"))
    quad_order = cfg.get("quad-order", 48, cast=int)
    rows = []
    if which == "F2":
        fn = lambda s: dist_f2(s, quad_order, certificate=True)
    elif which == "GOE2":
        fn = lambda s: dist_goe2(s, quad_order, certificate=True)
    elif which == "TRANSITION":
        omega = cfg.get("omega", 0.0, cast=float)
        tau = cfg.get("tau", 0.0, cast=float)
        fn = lambda s: dist_transition(s, omega, tau, quad_order, certificate=True)
    elif which == "GAUSSIAN":
        fn = lambda s: (std_normal_cdf(s), None)
    elif which == "FINITE-N":
        src = _source_from_cfg(cfg)
        fn = lambda s: dist_finite_n(s, src, quad_order, certificate=True)
    else:
        raise ConfigError(f"unknown distribution {which!r}")
    for s in grid:
        val, cert = fn(float(s))
        rows.append((float(s), val, 0.0 if cert is None else cert.delta))
    header = ("s", "F", "cert_delta")
    summary = {
        "experiment": "dist-eval",
        "which": which,
        "points": len(rows),
        "quad_order": quad_order,
        "max_cert_delta": max(r[2] for r in rows),
        "monotone": bool(np.all(np.diff([r[1] for r in rows]) >= -1e-9)),
    }
    return header, rows, summary


def _source_from_cfg(cfg: ExperimentConfig) -> SourceSpec:
    n = cfg.get("N", required=True, cast=int)
    eps = cfg.get("eps")
    lam = cfg.get("Lambda", cast=float)
    if eps is not None:
        vals = parse_floats(eps)
        if len(vals) != n:
            raise ConfigError(f"eps must have {n} entries")
        return SourceSpec(n, np.asarray(vals))
    if lam is not None:
        return SourceSpec.from_lambda(n, lam)
    raise ConfigError("finite-N distribution needs eps or Lambda")


def _exp_dist_joint(cfg: ExperimentConfig):
    kind = cfg.get("kernel", required=True)
    times = parse_floats(cfg.get("times", required=True))
    s1 = parse_grid(cfg.get("s1", required=True))
    s2 = parse_grid(cfg.get("s2", required=True))
    quad_order = cfg.get("quad-order", 48, cast=int)
    if len(times) != 2:
        raise ConfigError("dist-joint expects exactly two times")
    if kind == "transition":
        omega = cfg.get("omega", 0.0, cast=float)
        kernel = TransitionKernel(omega)
    elif kind == "finite-n":
        src = _source_from_cfg(cfg)
        kernel = FiniteDynamicalKernel(src, times=times)
    else:
        raise ConfigError(f"unknown joint kernel {kind!r}")
    rows = []
    for a in s1:
        for b in s2:
            prob, cert = det_multi(
                DeterminantProblem(kernel, times, (float(a), float(b)), quad_order),
                certificate=True,
            )
            rows.append((float(a), float(b), prob, cert.delta))
    header = ("s1", "s2", "P", "cert_delta")
    summary = {
        "experiment": "dist-joint",
        "kernel": kind,
        "times": list(times),
        "grid": [len(s1), len(s2)],
        "max_cert_delta": max(r[3] for r in rows),
    }
    return header, rows, summary


def _exp_compare(cfg: ExperimentConfig):
    data_path = cfg.get("data", required=True)
    against = cfg.get("against", required=True)
    column = cfg.get("col", "scaled")
    meta, header, rows = read_table(data_path)
    if against.startswith("file:"):
        return _compare_joint(cfg, meta, header, rows, against[5:])
    if column not in header:
        raise ConfigError(f"column {column!r} not in {data_path}")
    idx = header.index(column)
    samples = np.array([r[idx] for r in rows], dtype=float)
    ecdf = EmpiricalCdf(samples)
    ref = ReferenceCdf(
        against,
        lo=float(samples.min()) - 0.5,
        hi=float(samples.max()) + 0.5,
        omega=cfg.get("omega", 0.0, cast=float),
        tau=cfg.get("tau", 0.0, cast=float),
    )
    ks = ks_distance(ecdf, ref)
    out_rows = [(against.upper(), ks, ecdf.n)]
    summary = {
        "experiment": "compare",
        "data": data_path,
        "against": against.upper(),
        "column": column,
        "n": ecdf.n,
        "ks_distance": ks,
        "source_meta": meta,
    }
    return ("against", "ks_distance", "n"), out_rows, summary


def _compare_joint(cfg, meta, header, rows, grid_path):
    """Sup-distance between a joint empirical CDF of chain maxima and a P-grid."""
    _, ghead, grows = read_table(grid_path)
    for col in ("s1", "s2", "P"):
        if col not in ghead:
            raise ConfigError(f"{grid_path} lacks column {col!r}")
    i1, i2, ip = (ghead.index(c) for c in ("s1", "s2", "P"))
    cols = [c for c in header if c.startswith("lmax_t")]
    if len(cols) != 2:
        raise ConfigError("joint compare expects a two-time chain table")
    a = np.array([r[header.index(cols[0])] for r in rows], dtype=float)
    b = np.array([r[header.index(cols[1])] for r in rows], dtype=float)
    sup = 0.0
    out_rows = []
    for g in grows:
        s1, s2, p = float(g[i1]), float(g[i2]), float(g[ip])
        emp = float(np.mean((a <= s1) & (b <= s2)))
        sup = max(sup, abs(emp - p))
        out_rows.append((s1, s2, p, emp, abs(emp - p)))
    summary = {
        "experiment": "compare",
        "mode": "joint",
        "n": len(a),
        "sup_difference": sup,
        "source_meta": meta,
    }
    return ("s1", "s2", "P", "empirical", "abs_diff"), out_rows, summary


_DRIVERS = {
    "png-height": _exp_png_height,
    "png-layers": _exp_png_layers,
    "rmt-edge": _exp_rmt_edge,
    "rmt-dyson": _exp_rmt_dyson,
    "dist-eval": _exp_dist_eval,
    "dist-joint": _exp_dist_joint,
    "compare": _exp_compare,
}


def run_experiment(config: ExperimentConfig):
    """Execute an experiment; returns its machine-readable summary dict.

    Writes the data table to ``out`` (CSV by default, JSON with
    format=json) when an output path is configured.
    """
    header, rows, summary = _DRIVERS[config.experiment](config)
    out = config.get("out")
    fmt = config.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}")
    meta = {k: v for k, v in summary.items() if k != "source_meta"}
    write_table(out, header, rows, meta, fmt)
    summary["out"] = out
    return summary
