"""Oracle self-tests for the real-embedding inverse and the CLIME LP solver."""

import numpy as np
from scipy.optimize import linprog

from .clime import clime_column
from .embedding import lemma_roundtrip_check


def random_complex(rng, p, max_cond=1e3):
    while True:
        Z = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
        if np.linalg.cond(Z) < max_cond:
            return Z


def random_spd(rng, m, samples=None):
    samples = samples or 2 * m
    X = rng.standard_normal((samples, m))
    return X.T @ X / samples + 0.1 * np.eye(m)


def reference_clime_objective(S, k, lam):
    """Optimal CLIME column objective from HiGHS, for cross-checking."""
    m = S.shape[0]
    e = np.eye(m)[k]
    A = np.block([[S, -S], [-S, S]])
    b = np.concatenate([lam + e, lam - e])
    res = linprog(np.ones(2 * m), A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"reference LP failed: {res.message}")
    return res.fun


def roundtrip_check(cases=200, seed=0, max_p=8):
    """Largest discrepancy between two routes to ``Z^{-1}`` over random ``Z``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(cases):
        p = 1 + i % max_p
        worst = max(worst, lemma_roundtrip_check(random_complex(rng, p)))
    return worst


def lp_oracle_check(cases=50, lambdas=(0.05, 0.1, 0.3), seed=0, m=6):
    """Largest objective gap to the reference solver and largest residual excess."""
    rng = np.random.default_rng(seed)
    gap, excess = 0.0, -np.inf
    for _ in range(cases):
        S = random_spd(rng, m)
        for lam in lambdas:
            for k in range(m):
                sol = clime_column(S, k, lam)
                if sol.status != "optimal":
                    return np.inf, np.inf
                gap = max(gap, abs(sol.objective - reference_clime_objective(S, k, lam)))
                excess = max(excess, sol.residual - lam)
    return gap, excess
