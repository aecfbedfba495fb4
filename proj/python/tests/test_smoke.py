import math
import os
from pathlib import Path

import numpy as np
import pytest

import gbsc

CONFIGS = Path(os.environ.get("GBSC_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def test_sparse_rule_basics():
    space = gbsc.RandomSpace([(-1.0, 1.0), (-1.0, 1.0)])
    rule = gbsc.sparse_rule(space, level=1)
    assert len(rule) == 5
    assert rule.points.shape == (5, 2)
    assert abs(rule.weight_sum() - 1.0) < 1e-14
    assert "1:1.1:1" in rule.keys


def test_cc_weights():
    w = gbsc.univariate_weights("clenshaw-curtis", 3)
    assert w == pytest.approx([1 / 6, 2 / 3, 1 / 6], abs=1e-15)


def test_integrate_python_callable():
    space = gbsc.RandomSpace([(0.0, 1.0)] * 3)
    rule = gbsc.sparse_rule(space, level=5)
    got = gbsc.integrate(rule, lambda y: math.exp(y.sum()))
    assert got == pytest.approx((math.e - 1) ** 3, rel=1e-10)


def test_monte_carlo_and_rate():
    space = gbsc.RandomSpace([(0.8, 1.0)])
    est = gbsc.mc_estimate(lambda y: y[0], space, 4000, 3)
    assert abs(est - 0.9) < 0.01
    pts = [(n, n ** -0.5) for n in (4, 16, 64)]
    assert gbsc.regression_rate(pts) == pytest.approx(0.5)
    samples = gbsc.draw_samples(space, 10, 3)
    assert samples.shape == (10, 1)
    assert np.all((samples >= 0.8) & (samples <= 1.0))


def test_errors_map_to_exceptions():
    with pytest.raises(gbsc.ConfigError):
        gbsc.combination_coeffs("smolyak", 1, 2)
    with pytest.raises(gbsc.ConfigError):
        gbsc.parse_problem("{}")
    with pytest.raises(gbsc.GbscError):
        gbsc.regression_rate([(4.0, 0.1)])


def test_problem_qoi_and_cli_output(tmp_path):
    p = gbsc.load_problem(str(CONFIGS / "example1_smooth.json"))
    assert p.dimension == 1
    q = p.qoi(p.nominal, 1 / 40)
    assert q > 0
    files = p.run("qoi", out_dir=str(tmp_path), epsilon=1 / 40)
    assert len(files) == 1
    text = Path(files[0]).read_text().splitlines()
    assert text[0].startswith("y1,Q,epsilon")
    assert len(text) == 2
