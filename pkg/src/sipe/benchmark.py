"""Monte Carlo comparison of naive, shrinkage and sparse spectral precision estimates."""

import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .clime import DEFAULT_LAMBDAS, select_lambda, sipe_from_spectrum, theory_rate_lambda
from .core import InputError, center_standardize
from .metrics import mise, naive_inverse, shrinkage, support_metrics
from .simgen import BURN_IN, make_model, simulate, true_spectrum
from .spectral import gcv_select_span, periodogram, smooth

log = logging.getLogger(__name__)

ESTIMATORS = ("naive", "shrinkage", "sipe")
MISE_SCALE = 1e3

RESULT_COLUMNS = (
    "scenario",
    "p",
    "n",
    "estimator",
    "mise_mean",
    "mise_sd",
    "tpp_mean",
    "tpp_sd",
    "tnp_mean",
    "tnp_sd",
    "failures",
    "reps",
)


@dataclass
class Scenario:
    scenario: str
    p: int
    n: int
    reps: int = 20
    seed: int = 1
    span_rule: str = "gcv"
    lambda_rule: str = "cv"
    freq_stride: int = 1
    burn_in: int = BURN_IN

    def __post_init__(self):
        self.scenario = self.scenario.lower()
        for name in ("p", "n", "reps", "seed", "freq_stride", "burn_in"):
            setattr(self, name, int(getattr(self, name)))
        if self.reps < 1:
            raise InputError("reps must be at least 1")
        parse_span_rule(self.span_rule)
        parse_lambda_rule(self.lambda_rule)

    @property
    def seeds(self):
        return list(range(self.seed, self.seed + self.reps))

    def to_config(self):
        lines = [f"{f.name.replace('_', '-')} = {getattr(self, f.name)}" for f in fields(self)]
        return "\n".join(lines) + "\n"


def parse_config(text):
    """Parse ``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^([A-Za-z_][\w-]*)\s*[=:]\s*(.*)$", line)
        if not m:
            raise InputError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        out[m.group(1).replace("-", "_").lower()] = m.group(2).strip()
    return out


def load_scenario(path):
    with open(path) as fh:
        cfg = parse_config(fh.read())
    known = {f.name for f in fields(Scenario)}
    unknown = set(cfg) - known
    if unknown:
        raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        return Scenario(**cfg)
    except TypeError as err:
        raise InputError(f"incomplete scenario config: {err}") from None
    except ValueError as err:
        raise InputError(f"bad scenario config: {err}") from None


def parse_span_rule(rule):
    """``"gcv"`` or a nonnegative integer half-width."""
    rule = str(rule).strip().lower()
    if rule == "gcv":
        return "gcv"
    try:
        M = int(rule)
    except ValueError:
        raise InputError(f"span rule must be 'gcv' or an integer, got {rule!r}") from None
    if M < 0:
        raise InputError("span must be nonnegative")
    return M


def parse_lambda_rule(rule):
    """Lambda rules: ``cv``, ``cv:a:b:steps``, a number, or ``theory:c,delta``.

    Returns a tuple ``(kind, params)``.
    """
    rule = str(rule).strip().lower()
    if rule == "cv":
        return "cv", tuple(DEFAULT_LAMBDAS)
    if rule.startswith("cv:"):
        return "cv", parse_lambda_grid(rule[3:])
    if rule.startswith("theory:"):
        try:
            c, delta = (float(v) for v in rule[7:].split(","))
        except ValueError:
            raise InputError(f"theory rule must read 'theory:c,delta', got {rule!r}") from None
        return "theory", (c, delta)
    try:
        lam = float(rule.removeprefix("fixed:"))
    except ValueError:
        raise InputError(f"unrecognised lambda rule {rule!r}") from None
    if lam < 0:
        raise InputError("lambda must be nonnegative")
    return "fixed", lam


def parse_lambda_grid(text):
    """``a:b:steps`` -> ``steps`` evenly spaced values from a to b."""
    try:
        a, b, steps = text.split(":")
        a, b, steps = float(a), float(b), int(steps)
    except ValueError:
        raise InputError(f"lambda grid must read 'a:b:steps', got {text!r}") from None
    if steps < 1 or a < 0 or b < a:
        raise InputError(f"invalid lambda grid {text!r}")
    return tuple(float(v) for v in np.linspace(a, b, steps))


def resolve_span(per, rule):
    rule = parse_span_rule(rule)
    if rule == "gcv":
        return gcv_select_span(per)[0]
    return rule


def resolve_lambda(ts, M, rule, stride=1):
    kind, params = parse_lambda_rule(rule) if isinstance(rule, str) else rule
    if kind == "fixed":
        return params
    if kind == "theory":
        return theory_rate_lambda(ts.n, M, *params)
    return select_lambda(ts, M, params, stride=stride)[0]


@dataclass
class ReplicateResult:
    seed: int
    span: int
    lam: float = math.nan
    mise: dict = field(default_factory=dict)
    failed: dict = field(default_factory=dict)
    tpp: float = None
    tnp: float = None


def run_replicate(scenario, seed, estimators=ESTIMATORS):
    """Simulate one series and score every requested estimator on it."""
    model = make_model(scenario.scenario, scenario.p, seed=seed)
    ts = center_standardize(simulate(model, scenario.n, burn_in=scenario.burn_in))
    per = periodogram(ts)
    M = resolve_span(per, scenario.span_rule)
    smoothed = smooth(per, M)
    _, truth = true_spectrum(model, per.grid)
    J = per.grid.positive()
    out = ReplicateResult(seed=seed, span=M)

    def record(name, est, positions):
        bad = [pos for pos in positions if not est.solved[pos]]
        if bad:
            out.failed[name] = f"{len(bad)} frequencies failed"
            out.mise[name] = math.nan
        else:
            out.mise[name] = mise(est, truth, positions) * MISE_SCALE

    if "naive" in estimators:
        record("naive", naive_inverse(smoothed, J), J)
    if "shrinkage" in estimators:
        record("shrinkage", naive_inverse(shrinkage(per, M), J), J)
    if "sipe" in estimators:
        positions = J[:: scenario.freq_stride]
        try:
            lam = resolve_lambda(ts, M, scenario.lambda_rule, stride=scenario.freq_stride)
        except Exception as err:  # recorded per replicate, never aborts the run
            out.failed["sipe"] = f"lambda selection failed: {err}"
            out.mise["sipe"] = math.nan
        else:
            out.lam = float(lam)
            est = sipe_from_spectrum(smoothed, lam, positions)
            record("sipe", est, positions)
            if "sipe" not in out.failed:
                out.tpp, out.tnp = support_metrics(est, truth, positions=positions)
    return out


def _mean_sd(values):
    values = [v for v in values if v is not None and not math.isnan(v)]
    if not values:
        return math.nan, math.nan
    sd = float(np.std(values, ddof=1)) if len(values) > 1 else math.nan
    return float(np.mean(values)), sd


def summarize(scenario, replicates, estimators=ESTIMATORS):
    rows = []
    for name in estimators:
        ok = [r for r in replicates if name not in r.failed]
        m_mean, m_sd = _mean_sd([r.mise[name] for r in ok])
        row = dict(
            scenario=scenario.scenario,
            p=scenario.p,
            n=scenario.n,
            estimator=name,
            mise_mean=m_mean,
            mise_sd=m_sd,
            tpp_mean=math.nan,
            tpp_sd=math.nan,
            tnp_mean=math.nan,
            tnp_sd=math.nan,
            failures=len(replicates) - len(ok),
            reps=len(replicates),
        )
        if name == "sipe":
            row["tpp_mean"], row["tpp_sd"] = _mean_sd([r.tpp for r in ok])
            row["tnp_mean"], row["tnp_sd"] = _mean_sd([r.tnp for r in ok])
        rows.append(row)
    return rows


@dataclass
class BenchmarkResult:
    scenario: Scenario
    rows: list
    replicates: list

    def row(self, estimator):
        return next(r for r in self.rows if r["estimator"] == estimator)

    def to_dict(self):
        return {
            "scenario": asdict(self.scenario),
            "rows": self.rows,
            "replicates": [asdict(r) for r in self.replicates],
        }


def run_benchmark(scenario, estimators=ESTIMATORS, seeds=None, workers=1):
    """Run replicates over ``seeds`` (default: the scenario's) and summarise.

    MISE is reported multiplied by 1e3. Replicates whose estimate could not be
    formed at some frequency are counted in ``failures`` and excluded from
    the means.
    """
    estimators = tuple(estimators)
    for name in estimators:
        if name not in ESTIMATORS:
            raise InputError(f"unknown estimator {name!r}")
    seeds = scenario.seeds if seeds is None else list(seeds)
    if not seeds:
        raise InputError("need at least one replicate")
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            reps = list(pool.map(run_replicate, [scenario] * len(seeds), seeds,
                                 [estimators] * len(seeds)))
    else:
        reps = []
        for seed in seeds:
            reps.append(run_replicate(scenario, seed, estimators))
            log.info("replicate seed=%d done (span=%d, lambda=%s)", seed, reps[-1].span,
                     reps[-1].lam)
    return BenchmarkResult(scenario, summarize(scenario, reps, estimators), reps)
