import math

import numpy as np
import pytest

from sipe.benchmark import (
    RESULT_COLUMNS,
    Scenario,
    load_scenario,
    parse_config,
    parse_lambda_grid,
    parse_lambda_rule,
    parse_span_rule,
    run_benchmark,
)
from sipe.core import InputError


def test_parse_config():
    cfg = parse_config("# comment\nscenario = wn\np: 10\nspan-rule = gcv  # trailing\n\n")
    assert cfg == {"scenario": "wn", "p": "10", "span_rule": "gcv"}
    with pytest.raises(InputError):
        parse_config("not a pair")


def test_load_scenario(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text(Scenario("svar1", 10, 400, reps=3, lambda_rule="0.2").to_config())
    sc = load_scenario(path)
    assert (sc.scenario, sc.p, sc.n, sc.reps, sc.lambda_rule) == ("svar1", 10, 400, 3, "0.2")
    path.write_text("scenario = wn\np = 3\nn = 50\ncolour = red\n")
    with pytest.raises(InputError, match="colour"):
        load_scenario(path)
    path.write_text("scenario = wn\np = 3\n")
    with pytest.raises(InputError):
        load_scenario(path)


def test_rules():
    assert parse_span_rule("GCV") == "gcv"
    assert parse_span_rule("7") == 7
    with pytest.raises(InputError):
        parse_span_rule("-1")
    assert parse_lambda_rule("0.2") == ("fixed", 0.2)
    assert parse_lambda_rule("fixed:0.3") == ("fixed", 0.3)
    assert parse_lambda_rule("theory:1.5,0.1") == ("theory", (1.5, 0.1))
    kind, grid = parse_lambda_rule("cv:0.1:0.3:3")
    assert kind == "cv" and grid == pytest.approx((0.1, 0.2, 0.3))
    assert parse_lambda_grid("0:1:5") == pytest.approx((0, 0.25, 0.5, 0.75, 1))
    with pytest.raises(InputError):
        parse_lambda_grid("1:0:3")


def test_single_rep_sd_is_nan():
    sc = Scenario("wn", 3, 64, reps=1, lambda_rule="0.3")
    res = run_benchmark(sc)
    for row in res.rows:
        assert set(row) == set(RESULT_COLUMNS)
        assert math.isnan(row["mise_sd"])
        assert row["reps"] == 1


def test_deterministic_and_parallel_agree():
    sc = Scenario("svar1", 4, 80, reps=3, lambda_rule="0.2", freq_stride=3)
    a = run_benchmark(sc)
    b = run_benchmark(sc)
    c = run_benchmark(sc, workers=2)
    assert a.to_dict() == b.to_dict()
    assert a.rows == c.rows


def test_naive_fails_for_high_dimension():
    sc = Scenario("svar1", 50, 200, reps=2)
    res = run_benchmark(sc, ("naive",))
    assert res.row("naive")["failures"] == 2
    assert math.isnan(res.row("naive")["mise_mean"])


def test_sipe_support_reported_only_for_sipe():
    sc = Scenario("svar1", 4, 80, reps=2, lambda_rule="0.2", freq_stride=4)
    res = run_benchmark(sc)
    assert 0 <= res.row("sipe")["tpp_mean"] <= 1
    assert math.isnan(res.row("naive")["tpp_mean"])


def test_unknown_estimator():
    with pytest.raises(InputError):
        run_benchmark(Scenario("wn", 3, 32, reps=1), ("lasso",))
