"""Named acceptance suites, shared by ``tggfdr verify`` and the test-suite.

Each suite returns a :class:`SuiteResult`; a suite passes only if its
numerical criterion holds and it finishes inside its time budget.
"""

from dataclasses import dataclass
import filecmp
import itertools
import math
import os
import tempfile
import time

import numpy as np

from . import instance, metrics, procedures, tgg, theory
from ._validation import derive_seed


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    passed: bool
    measured: str
    band: str
    seconds: float
    budget: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.suite} measured={self.measured} band={self.band} "
                f"seconds={self.seconds:.2f} budget={self.budget:g}")


def _timed(name, budget, body):
    start = time.perf_counter()
    ok, measured, band = body()
    seconds = time.perf_counter() - start
    return SuiteResult(name, bool(ok) and seconds < budget, measured, band, seconds, budget)


# -- 1, 2, 10: fixed-point exponent ------------------------------------------

def kappa_closed_form():
    def body():
        grid = np.round(np.linspace(0.04, 0.94, 11), 12)
        pairs = [(b, r) for b, r in itertools.combinations(grid, 2)][:50]
        err = max(abs(theory.solve_kappa_star(b, r, 1.0) - (r - b) / 2) for b, r in pairs)
        return err <= 1e-10, f"max_err={err:.3e} points={len(pairs)}", "<=1e-10"
    return _timed("kappa-closed-form", 1.0, body)


def kappa_fixed_point(seed=20240601):
    def body():
        rng = np.random.default_rng(seed)
        worst, inside = 0.0, True
        for _ in range(200):
            gamma = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
            beta = rng.uniform(0.01, 0.95)
            r = rng.uniform(beta + 1e-3, 1.0)
            k = theory.solve_kappa_star(beta, r, gamma)
            worst = max(worst, abs(k - theory.d_gamma(beta + k, r, gamma)))
            inside &= 0.0 <= k < r - beta
        return worst <= 1e-10 and inside, f"max_residual={worst:.3e} in_bracket={inside}", "<=1e-10"
    return _timed("kappa-fixed-point", 1.0, body)


def linear_sparsity():
    def body():
        ks = []
        for n in (10**3, 10**4, 10**5):
            cfg = instance.from_pi1(n, 0.1, 0.5, 2.0)
            ks.append(theory.solve_kappa_star(cfg.beta, 0.5, 2.0))
        gaps = [abs(k - 0.125) for k in ks]
        ok = all(b < a for a, b in zip(gaps, gaps[1:]))
        return ok, "kappa=" + ",".join(f"{k:.6f}" for k in ks), "gap to 0.125 strictly shrinking"
    return _timed("linear-sparsity", 1.0, body)


# -- 3, 5, 6, 7: Monte Carlo -------------------------------------------------

def fdr_control(seed=3, n_jobs=1):
    def body():
        cfg = instance.make_config(10_000, 0.5, 0.9, 2.0)
        est = metrics.estimate_risk(cfg, tgg.DistributionSpec(2.0), "bh", 0.1, 1000, seed,
                                    n_jobs=n_jobs)
        limit = 0.1 + 3 * est.fdr_se
        return est.fdr <= limit, f"fdr={est.fdr:.5f} se={est.fdr_se:.5f}", f"<={limit:.5f}"
    return _timed("fdr-control", 60.0, body)


def risk_slope(seed=5, trials=2000, n_jobs=1):
    def body():
        beta, r, gamma, c_star = 0.3, 0.7, 1.0, 1.0 / 24.0
        spec = tgg.DistributionSpec(gamma)
        ns = (10**3, 10**4, 10**5)
        risks = []
        for i, n in enumerate(ns):
            q = theory.optimal_q_star(beta, r, gamma, n, c_star)
            est = metrics.estimate_risk(instance.make_config(n, beta, r, gamma), spec, "bh", q,
                                        trials, derive_seed(seed, i), n_jobs=n_jobs)
            risks.append(est.risk)
        slope = float(np.polyfit(np.log(ns), np.log(risks), 1)[0])
        decreasing = all(b < a for a, b in zip(risks, risks[1:]))
        ok = abs(slope + 0.2) <= 0.15 and decreasing
        measured = f"slope={slope:.4f} risks=" + ",".join(f"{v:.5f}" for v in risks)
        return ok, measured, "slope in [-0.35,-0.05] and strictly decreasing"
    return _timed("risk-slope", 600.0, body)


def fnr_sandwich(seed=6, trials=10_000, n_jobs=1):
    def body():
        n, beta, r, gamma, z = 10**5, 0.4, 0.75, 2.0, tgg.EXACT_Z
        kappa = theory.solve_kappa_star(beta, r, gamma)
        t = theory.tau_min(beta, n, gamma, z, kappa=kappa)
        lower, upper = theory.fnr_bounds_at_tau(beta, kappa, r, gamma, z, z, n)
        est = metrics.estimate_risk(instance.make_config(n, beta, r, gamma),
                                    tgg.DistributionSpec(gamma), "fixed", t, trials, seed,
                                    n_jobs=n_jobs)
        slack = 4 * est.fnr_se
        ok = lower - slack <= est.fnr <= upper + slack
        return (ok, f"fnr={est.fnr:.5f} se={est.fnr_se:.2e} tau={t:.4f}",
                f"[{lower:.4e},{upper:.4e}]+-4se")
    return _timed("fnr-sandwich", 120.0, body)


def bh_threshold_bound(seed=7, trials=2000, n_jobs=1):
    def body():
        n, beta, r, gamma, z = 10**4, 0.3, 0.8, 2.0, tgg.EXACT_Z
        c_bh = theory.algorithm_constants(z, z)[0]
        q = theory.optimal_q_star(beta, r, gamma, n, theory.q_cap(z), z_lower=z)
        tau = theory.tau_min(beta, n, gamma, z, q=c_bh * q)
        res = metrics.simulate_trials(instance.make_config(n, beta, r, gamma),
                                      tgg.DistributionSpec(gamma), "bh", q, trials, seed,
                                      n_jobs=n_jobs)
        freq = float(np.mean(res[:, 2] > tau))
        return freq <= 0.01, f"freq={freq:.4f} tau={tau:.4f} q={q:.3e}", "<=0.01"
    return _timed("bh-threshold", 120.0, body)


# -- 4: oracle equivalence -----------------------------------------------------

def brute_force_bh(x, q, gamma):
    """Smallest observed ``t`` with ``n Psi(t) / #{x_i >= t} <= q``, by direct recount."""
    n = len(x)
    best = math.inf
    for t in x:
        n_plus = sum(1 for v in x if v >= t)
        psi = 0.5 * math.exp(-abs(t) ** gamma / gamma)
        psi = psi if t >= 0 else 1.0 - psi
        if n * psi / n_plus <= q and t < best:
            best = t
    return best


def brute_force_bc(x, q):
    """Smallest positive observed ``t`` with ``(#{x_i <= -t} + 1) / max(#{x_i >= t}, 1) <= q``."""
    best = math.inf
    for t in x:
        if t <= 0:
            continue
        n_plus = sum(1 for v in x if v >= t)
        n_minus = sum(1 for v in x if v <= -t)
        if (n_minus + 1) / max(n_plus, 1) <= q and t < best:
            best = t
    return best


def oracle_equivalence(seed=4, instances=1000):
    def body():
        rng = np.random.default_rng(seed)
        mismatches = 0
        for _ in range(instances):
            n = int(rng.integers(1, 65))
            gamma = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
            mu = rng.uniform(0.0, 6.0)
            x = tgg.sample(gamma, rng, n) + mu * (rng.random(n) < rng.uniform(0.1, 0.9))
            if rng.random() < 0.2:
                x = np.round(x, 1)  # exercise ties
            q = float(rng.uniform(0.02, 0.98))
            xs = [float(v) for v in x]
            if procedures.bh_threshold_value(x, q, gamma) != brute_force_bh(xs, q, gamma):
                mismatches += 1
            if procedures.bc_threshold_value(x, q) != brute_force_bc(xs, q):
                mismatches += 1
        return mismatches == 0, f"mismatches={mismatches} instances={instances}", "==0"
    return _timed("oracle-equivalence", 10.0, body)


# -- 8, 9 ----------------------------------------------------------------------

def sampler_fidelity(seed=8):
    def body():
        rng = np.random.default_rng(seed)
        dists = [tgg.ks_distance(g, tgg.sample(g, rng, 10**6)) for g in (1.0, 2.0)]
        return (max(dists) <= 1.95e-3, "ks=" + ",".join(f"{d:.2e}" for d in dists), "<=1.95e-3")
    return _timed("sampler-fidelity", 5.0, body)


def determinism(seed=9):
    from .cli import SweepSpec, run_sweep

    def body():
        sweep = SweepSpec(n=[500, 2000], beta=[0.4], pi1=None, r=[0.8], gamma=[1.0, 2.0],
                          procedure="bh", q=None, c_star=1.0 / 24.0, threshold=None,
                          trials=40, seed=seed)
        with tempfile.TemporaryDirectory() as tmp:
            serial = os.path.join(tmp, "serial.csv")
            parallel = os.path.join(tmp, "parallel.csv")
            run_sweep(sweep, serial, n_jobs=1)
            run_sweep(sweep, parallel, n_jobs=2)
            same = filecmp.cmp(serial, parallel, shallow=False)
        return same, f"identical={same}", "byte-identical"
    return _timed("determinism", 60.0, body)


SUITES = {
    "kappa-closed-form": kappa_closed_form,
    "kappa-fixed-point": kappa_fixed_point,
    "fdr-control": fdr_control,
    "oracle-equivalence": oracle_equivalence,
    "risk-slope": risk_slope,
    "fnr-sandwich": fnr_sandwich,
    "bh-threshold": bh_threshold_bound,
    "sampler-fidelity": sampler_fidelity,
    "determinism": determinism,
    "linear-sparsity": linear_sparsity,
}
