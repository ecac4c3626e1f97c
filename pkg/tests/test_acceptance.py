"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary. Run on its own with ``pytest tests/test_acceptance.py -v`` or as a
script with ``python tests/test_acceptance.py``.
"""

import json
import math
import sys
import time

import numpy as np
import pytest
from scipy.optimize import linprog

from sipe import cli, io
from sipe.analysis import partial_coherence
from sipe.benchmark import Scenario, run_benchmark
from sipe.clime import clime_column, sipe, symmetrize
from sipe.core import PrecisionEstimate, center_standardize, frequency_grid
from sipe.embedding import block_embed, reassemble
from sipe.simgen import make_model, simulate, true_spectrum
from sipe.spectral import periodogram, smooth

RESULTS = []


def report(label, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} [{label}] {detail}"
    RESULTS.append(line)
    print(line)
    return passed


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def well_conditioned(rng, p, max_cond=1e3):
    while True:
        Z = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        if np.linalg.cond(Z) < max_cond:
            return Z


def test_1_embedding_inverse_roundtrip():
    rng = np.random.default_rng(1)
    with Timer() as t:
        worst = 0.0
        for i in range(200):
            Z = well_conditioned(rng, 1 + i % 8)
            via_real = reassemble(np.linalg.inv(block_embed(Z)))
            worst = max(worst, np.abs(np.linalg.inv(Z) - via_real).max())
    ok = worst <= 1e-9 and t.elapsed < 5
    report("1 round trip", ok, f"max discrepancy {worst:.2e} (<= 1e-9), {t.elapsed:.2f}s (< 5s)")
    assert ok


def test_2_clime_matches_reference_lp():
    rng = np.random.default_rng(2)
    gap, excess = 0.0, -math.inf
    with Timer() as t:
        for _ in range(50):
            X = rng.standard_normal((12, 6))
            S = X.T @ X / 12 + 0.1 * np.eye(6)
            for lam in (0.05, 0.1, 0.3):
                for k in range(6):
                    e = np.eye(6)[k]
                    ref = linprog(
                        np.ones(12),
                        A_ub=np.block([[S, -S], [-S, S]]),
                        b_ub=np.r_[lam + e, lam - e],
                        bounds=(0, None),
                        method="highs",
                    )
                    sol = clime_column(S, k, lam)
                    assert sol.status == "optimal" and ref.status == 0
                    gap = max(gap, abs(sol.objective - ref.fun))
                    excess = max(excess, np.abs(S @ sol.beta - e).max() - lam)
    ok = gap <= 1e-6 and excess <= 1e-7 and t.elapsed < 30
    report(
        "2 CLIME oracle",
        ok,
        f"objective gap {gap:.2e} (<= 1e-6), residual - lambda {excess:.2e} (<= 1e-7), "
        f"{t.elapsed:.1f}s (< 30s)",
    )
    assert ok


def test_3_smoothed_periodogram_error_decays():
    meds = []
    for n in (256, 1024, 4096):
        M = math.ceil(n**0.6)
        errs = []
        for seed in range(1, 11):
            model = make_model("var1", 3, seed=seed)
            f = smooth(periodogram(center_standardize(simulate(model, n))), M)
            truth, _ = true_spectrum(model, f.grid)
            errs.append(np.abs(f.matrices - truth.matrices).max())
        meds.append(float(np.median(errs)))
    decreasing = all(a > b for a, b in zip(meds, meds[1:]))
    ok = decreasing and meds[-1] <= 0.5 * meds[0]
    report(
        "3 error decay",
        ok,
        "median sup error at n=256/1024/4096: " + " / ".join(f"{m:.3f}" for m in meds)
        + f" (strictly decreasing; last <= {0.5 * meds[0]:.3f})",
    )
    assert ok


@pytest.fixture(scope="module")
def wn_table():
    with Timer() as t:
        res = run_benchmark(Scenario("wn", 10, 200, reps=20, seed=1))
    return res, t.elapsed


def test_4a_white_noise_sipe_mise(wn_table):
    res, _ = wn_table
    sipe_row, naive_row = res.row("sipe"), res.row("naive")
    m = sipe_row["mise_mean"]
    ok = 0.02 <= m <= 1.0 and m < naive_row["mise_mean"]
    lams = sorted({r.lam for r in res.replicates})
    report(
        "4a WN SIPE MISE",
        ok,
        f"SIPE mean MISE x1e3 {m:.3f} (in [0.02, 1.0]), naive {naive_row['mise_mean']:.2f}; "
        f"cross-validated lambdas {lams}",
    )
    assert ok


def test_4b_sparse_var_support_recovery():
    with Timer() as t:
        res = run_benchmark(Scenario("svar1", 10, 400, reps=20, seed=1), ("sipe",))
    row = res.row("sipe")
    ok = row["tpp_mean"] >= 0.8 and row["tnp_mean"] >= 0.8
    report(
        "4b sVAR TPP/TNP",
        ok,
        f"TPP {row['tpp_mean']:.3f}, TNP {row['tnp_mean']:.3f} (both >= 0.80), "
        f"{row['failures']} failed reps, {t.elapsed:.0f}s",
    )
    assert ok


@pytest.mark.parametrize("n", [200, 400])
def test_4c_var_p50_naive_not_invertible(n):
    res = run_benchmark(Scenario("var1", 50, n, reps=20, seed=1), ("naive",))
    row = res.row("naive")
    ok = row["failures"] == row["reps"] == 20
    spans = sorted({r.span for r in res.replicates})
    report(
        f"4c VAR p=50 n={n} naive",
        ok,
        f"not invertible in {row['failures']}/20 reps (GCV spans {spans}, window < p)",
    )
    assert ok


def test_4d_shrinkage_beats_naive(wn_table):
    res, elapsed = wn_table
    s, nv = res.row("shrinkage")["mise_mean"], res.row("naive")["mise_mean"]
    ok = s < nv
    report("4d WN shrinkage vs naive", ok,
           f"shrinkage {s:.3f} < naive {nv:.3f} (MISE x1e3); WN table took {elapsed:.0f}s")
    assert ok


def test_5_invariant_suite():
    rng = np.random.default_rng(5)
    checks = dict.fromkeys(
        ["hermitian", "conjugate frequency", "parseval", "symmetrize idempotent",
         "l1 monotone", "coherence in [0,1]"], True)
    with Timer() as t:
        for _ in range(25):
            n, p = int(rng.integers(8, 80)), int(rng.integers(1, 5))
            ts = center_standardize(simulate(make_model("wn", p, int(rng.integers(1e6))), n))
            per = periodogram(ts)
            P = per.matrices
            total = np.sum(ts.values**2)
            checks["parseval"] &= abs(np.real(np.trace(P, axis1=1, axis2=2)).sum() - total) <= 1e-8 * total
            M = int(rng.integers(0, (n - 1) // 2 + 1))
            F = smooth(per, M).matrices
            checks["hermitian"] &= np.array_equal(F, np.conj(np.swapaxes(F, 1, 2)))
            grid = per.grid
            for j in grid.indices:
                if -j in grid.indices:
                    checks["conjugate frequency"] &= np.allclose(
                        F[grid.position(-j)], np.conj(F[grid.position(j)]), atol=1e-12)
            A = rng.standard_normal((2 * p, 2 * p))
            checks["symmetrize idempotent"] &= np.array_equal(symmetrize(symmetrize(A)), symmetrize(A))
            X = rng.standard_normal((3 * p, 2 * p))
            S = X.T @ X / (3 * p) + 0.1 * np.eye(2 * p)
            k = int(rng.integers(2 * p))
            objs = [clime_column(S, k, lam).objective for lam in (0.0, 0.05, 0.2, 0.5, 1.0)]
            checks["l1 monotone"] &= all(a >= b - 1e-9 for a, b in zip(objs, objs[1:]))
        for _ in range(10):
            p = int(rng.integers(2, 5))
            ts = center_standardize(simulate(make_model("svar1", p, int(rng.integers(1e6))), 64))
            est = sipe(ts, 4, float(rng.uniform(0.05, 0.4)))
            rho = partial_coherence(est)
            for pos in range(64):
                if np.linalg.eigvalsh(est.matrices[pos])[0] > 0:
                    checks["coherence in [0,1]"] &= bool(np.all((rho[pos] >= 0) & (rho[pos] <= 1 + 1e-9)))
    ok = all(checks.values()) and t.elapsed < 120
    failed = [k for k, v in checks.items() if not v]
    report("5 invariants", ok,
           f"{len(checks) - len(failed)}/{len(checks)} hold{'; failed ' + ', '.join(failed) if failed else ''}, "
           f"{t.elapsed:.1f}s (< 120s)")
    assert ok


def test_6_partial_coherence_hand_case():
    T = np.array([[2, 1 + 1j], [1 - 1j, 2]])
    est = PrecisionEstimate(frequency_grid(2), np.array([T, T]))
    rho = partial_coherence(est)[0, 0, 1]
    ok = abs(rho - 0.5) <= 1e-12
    report("6 partial coherence", ok, f"rho_12 = {float(rho)!r} (0.5 within 1e-12)")
    assert ok


def test_7_coherence_workflow(tmp_path, capsys):
    cfg = tmp_path / "flu_like.cfg"
    cfg.write_text("scenario = svar1\np = 50\nn = 406\nseed = 2013\n")
    with Timer() as t:
        codes = [
            cli.main(["simulate", str(cfg), "--out-dir", str(tmp_path)]),
            cli.main(["estimate", str(tmp_path / "series.csv"), "--out", str(tmp_path / "est.json"),
                      "--standardize", "--gcv", "--lambda", "0.2", "--band", "0,0.1",
                      "--power-csv", str(tmp_path / "power.csv")]),
            cli.main(["coherence", str(tmp_path / "est.json"), "--out", str(tmp_path / "coh.csv"),
                      "--band", "0,0.1", "--stat", "median"]),
        ]
    capsys.readouterr()
    summary, names = io.read_matrix_csv(tmp_path / "coh.csv")
    iu = np.triu_indices(50, 1)
    frac = float(np.mean(np.abs(summary[iu]) <= 1e-12))
    doc = json.loads((tmp_path / "est.json").read_text())
    ok = codes == [0, 0, 0] and summary.shape == (50, 50) and frac > 0
    report(
        "7 coherence workflow",
        ok,
        f"exit codes {codes}, span {doc['span']}, {len(doc['frequencies'])} band frequencies, "
        f"sparsity fraction {frac:.4f} (> 0), {t.elapsed:.0f}s",
    )
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
