"""Acceptance gate.

Each test records one ``ACCEPTANCE`` line (criterion, PASS/FAIL, measured
value, threshold) that is echoed in the pytest terminal summary, then asserts.
"""

import math
from functools import lru_cache

import numpy as np
import pytest

from cgranger import cgc_infer
from cgranger.cgc import InferenceConfig
from cgranger.cli import main
from cgranger.evaluate import confusion
from cgranger.gc_tests import bvgc_matrix, mvgc_matrix, residual_ci_test
from cgranger.regress import f_cdf, ols_fit
from cgranger.series import from_matrix
from cgranger.simulate import (
    GroundTruth, NoiseConfig, mask_latent, motif, random_ground_truth, simulate_ar,
)

from conftest import f_cdf_quadrature

RESULTS = []

MOTIF_SEEDS = range(100)
MOTIF_T = 5000
MOTIF_COEF = 0.6
MOTIF_ALPHA = 0.01
MOTIF_TAU = 2

EXP_SEEDS = range(10)
EXP_N, EXP_T, EXP_LAG, EXP_DENSITY, EXP_ALPHA = 30, 5000, 3, 0.07, 0.01
EXP_TAU = 3

X1, X2, X3 = 0, 1, 2


def record(criterion, ok, measured, threshold):
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {measured} (need {threshold})")
    return ok


@lru_cache(maxsize=None)
def motif_data(kind, seed):
    return motif(kind, MOTIF_COEF, MOTIF_T, NoiseConfig(seed=seed))


@lru_cache(maxsize=None)
def motif_report(kind, seed):
    return cgc_infer(motif_data(kind, seed)[0], MOTIF_TAU, MOTIF_ALPHA)


@lru_cache(maxsize=None)
def experiment(seed):
    truth = random_ground_truth(EXP_N, EXP_DENSITY, EXP_LAG, seed)
    series = simulate_ar(truth, EXP_T, NoiseConfig(seed=seed))
    return series, truth, cgc_infer(series, EXP_TAU, EXP_ALPHA)


# -- 1. motif recovery ---------------------------------------------------------

@pytest.mark.parametrize("kind", ["chain", "fork", "collider"])
def test_motif_combined_exact(kind):
    hits = sum(
        np.array_equal(motif_report(kind, s).a_combined.decisions, motif_data(kind, s)[1].aggregate)
        for s in MOTIF_SEEDS
    )
    rate = hits / len(MOTIF_SEEDS)
    assert record(f"1 motif {kind} combined exact", rate >= 0.90, f"{rate:.2f}", ">= 0.90")


@pytest.mark.parametrize("kind", ["chain", "fork"])
def test_motif_bvgc_false_positive(kind):
    def spurious(d):
        return d[X1, X2] if kind == "chain" else (d[X1, X2] or d[X2, X1])

    rate = np.mean([bool(spurious(motif_report(kind, s).a_bvgc.decisions)) for s in MOTIF_SEEDS])
    assert record(f"1 motif {kind} bvgc spurious X1-X2", rate >= 0.80, f"{rate:.2f}", ">= 0.80")


def test_motif_collider_lag0_false_positive():
    hits = 0
    for s in MOTIF_SEEDS:
        d = mvgc_matrix(motif_data("collider", s)[0], MOTIF_TAU, MOTIF_ALPHA,
                        condition_lag0=True).decisions
        hits += bool(d[X1, X2] or d[X2, X1])
    rate = hits / len(MOTIF_SEEDS)
    assert record("1 motif collider mvgc(lag0) spurious X1-X2", rate >= 0.60,
                  f"{rate:.2f}", ">= 0.60")


# -- 2. subset law -----------------------------------------------------------------

def test_and_subset_law():
    reports = [motif_report(k, s) for k in ("chain", "fork", "collider") for s in MOTIF_SEEDS]
    reports += [experiment(s)[2] for s in EXP_SEEDS]
    violations = sum(
        int((r.a_combined.decisions & ~r.a_bvgc.decisions).sum()
            + (r.a_combined.decisions & ~r.a_mvgc.decisions).sum())
        for r in reports
    )
    assert record("2 AND-subset violations", violations == 0,
                  f"{violations} over {len(reports)} datasets", "0")


# -- 3. scaled 30-variable experiment -----------------------------------------------

@pytest.mark.slow
def test_thirty_variable_experiment():
    f1s, wins = [], 0
    for s in EXP_SEEDS:
        _, truth, rep = experiment(s)
        comb = confusion(truth.adjacency(), rep.a_combined)
        bv = confusion(truth.adjacency(), rep.a_bvgc)
        f1s.append(comb.f1)
        wins += comb.precision >= bv.precision
    mean_f1 = float(np.mean(f1s))
    ok_f1 = record("3 experiment mean combined F1", mean_f1 >= 0.80, f"{mean_f1:.3f}", ">= 0.80")
    ok_p = record("3 experiment precision(combined) >= precision(bvgc)", wins >= 9,
                  f"{wins}/10 seeds", ">= 9/10")
    assert ok_f1 and ok_p


# -- 4. null calibration ----------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.01, 0.05])
def test_null_calibration(alpha):
    n, T = 30, 5000
    empty = GroundTruth(np.zeros((1, n, n)))
    series = simulate_ar(empty, T, NoiseConfig(ar_coefficient=0.0, seed=1234))
    pairs = n * (n - 1)
    half = 3 * math.sqrt(alpha * (1 - alpha) / pairs)
    oks = []
    for name, fn in (("bvgc", bvgc_matrix), ("mvgc", mvgc_matrix)):
        rate = fn(series, 1, alpha).decisions.sum() / pairs
        oks.append(record(f"4 null FP rate {name} alpha={alpha}", abs(rate - alpha) <= half,
                          f"{rate:.4f}", f"{alpha} +/- {half:.4f}"))
    assert all(oks)


# -- 5. numerical oracles ------------------------------------------------------------

def test_oracle_ols_normal_equations():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        rows, k = int(rng.integers(20, 400)), int(rng.integers(1, 10))
        X = rng.normal(size=(rows, k)) * rng.uniform(0.1, 10, size=k)
        y = X @ rng.normal(size=k) + rng.normal(size=rows)
        A = np.column_stack([np.ones(rows), X])
        oracle = np.linalg.solve(A.T @ A, A.T @ y)
        worst = max(worst, float(np.max(np.abs(ols_fit(X, y).coefficients - oracle))))
    assert record("5 OLS vs normal equations max |error|", worst <= 1e-8, f"{worst:.2e}", "<= 1e-8")


def test_oracle_f_cdf_quadrature():
    grid = [(x, d1, d2) for x in np.linspace(0.05, 10.0, 20)
            for d1, d2 in ((1, 5), (2, 10), (3, 30), (5, 100), (10, 4993))]
    grid += [(x, 4, 4) for x in np.linspace(0.1, 5.0, 100)]
    assert len(grid) == 200
    worst = max(abs(f_cdf(x, d1, d2) - f_cdf_quadrature(x, d1, d2)) for x, d1, d2 in grid)
    assert record("5 f_cdf vs quadrature max |error|", worst <= 1e-6, f"{worst:.2e}", "<= 1e-6")


def _naive_f(v, source, target, tau, multivariate):
    T = v.shape[1]

    def lags(var):
        return [v[var, tau - lag:T - lag] for lag in range(1, tau + 1)]

    y = v[target, tau:]
    reduced = lags(target)
    if multivariate:
        for w in range(v.shape[0]):
            if w not in (source, target):
                reduced += lags(w)
    full = reduced + lags(source)

    def rss(cols):
        A = np.column_stack([np.ones(len(y))] + cols)
        coef = np.linalg.lstsq(A, y, rcond=None)[0]
        return float(np.sum((y - A @ coef) ** 2))

    rr, rf = rss(reduced), rss(full)
    return ((rr - rf) / tau) / (rf / (len(y) - len(full) - 1))


def test_oracle_f_statistic_naive():
    series, _, rep = experiment(0)
    rng = np.random.default_rng(11)
    picks = rng.choice(EXP_N * EXP_N, size=80, replace=False)
    edges = [(int(p) // EXP_N, int(p) % EXP_N) for p in picks if p // EXP_N != p % EXP_N][:50]
    assert len(edges) == 50
    lookup = {}
    for kind, m in (("b", rep.a_bvgc), ("m", rep.a_mvgc)):
        for r in m.records:
            lookup[kind, r.source, r.target] = r.f_statistic
    worst = 0.0
    for i, j in edges:
        for kind in ("b", "m"):
            naive = _naive_f(series.values, i, j, EXP_TAU, kind == "m")
            worst = max(worst, abs(lookup[kind, i, j] - naive) / abs(naive))
    assert record("5 F statistic vs naive recomputation max rel error", worst <= 1e-10,
                  f"{worst:.2e}", "<= 1e-10")


# -- 6. partial correlation ------------------------------------------------------

def test_gaussian_triple_partial_correlation():
    cov = np.full((3, 3), 0.5) + 0.5 * np.eye(3)
    x = np.random.default_rng(3).multivariate_normal(np.zeros(3), cov, size=5000).T
    r = residual_ci_test(from_matrix(x), 0, 1, 0, [(2, 0)]).partial_correlation
    err = abs(r - 1 / 3)
    assert record("6 Gaussian triple partial correlation", err <= 0.05,
                  f"{r:.4f} (|err| {err:.4f})", "1/3 +/- 0.05")


# -- 7. scale invariance ----------------------------------------------------------

def test_scale_invariance_across_corpus():
    changed = 0
    for kind in ("chain", "fork", "collider"):
        for s in MOTIF_SEEDS:
            series = motif_data(kind, s)[0]
            base = motif_report(kind, s)
            for var in range(3):
                v = series.values.copy()
                v[var] *= 1000.0
                rep = cgc_infer(from_matrix(v, series.names), MOTIF_TAU, MOTIF_ALPHA)
                for a, b in ((base.a_bvgc, rep.a_bvgc), (base.a_mvgc, rep.a_mvgc),
                             (base.a_combined, rep.a_combined)):
                    changed += int((a.decisions != b.decisions).sum())
    assert record("7 decisions changed by x1000 rescaling", changed == 0, str(changed), "0")


# -- 8. latent confounder negative control ------------------------------------------

def test_masked_fork_confounder_edge():
    hits = 0
    for s in MOTIF_SEEDS:
        series, truth = motif_data("fork", s)
        observed, _ = mask_latent(series, truth, [X3])
        d = cgc_infer(observed, MOTIF_TAU, MOTIF_ALPHA).a_combined.decisions
        hits += bool(d[0, 1] or d[1, 0])
    rate = hits / len(MOTIF_SEEDS)
    assert record("8 fork with hub hidden shows X1-X2 edge", rate >= 0.50, f"{rate:.2f}", ">= 0.50")


# -- 9. determinism ------------------------------------------------------------------

def test_cli_determinism(tmp_path):
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        assert main(["simulate", "--n", "8", "--timesteps", "1500", "--density", "0.15",
                     "--seed", "42", "--out-dir", str(d)]) == 0
        assert main(["infer", "--input", str(d / "series.csv"), "--tau", "2",
                     "--alpha", "0.01", "--out-dir", str(d)]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    same = outputs[0] == outputs[1]
    assert record("9 simulate+infer byte-identical", same,
                  f"{len(outputs[0])} files {'identical' if same else 'differ'}", "identical")
