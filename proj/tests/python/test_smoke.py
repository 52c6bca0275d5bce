import math

import numpy as np
import pytest

import vigf


def f2d(x):
    return math.sin(6 * x[0]) + x[1] ** 2


@pytest.fixture(scope="module")
def model():
    x = vigf.lhs_maximin(8, 2, seed=3, sweeps=500)
    y = np.array([f2d(row) for row in x])
    return vigf.fit(x, y, seed=1), x, y


def test_catalogue_and_evaluate():
    keys = {f["key"] for f in vigf.list_functions()}
    assert {"f1", "f2", "f10", "f10l", "gauss2"} <= keys
    f1 = next(f for f in vigf.list_functions() if f["key"] == "f1")
    value = vigf.evaluate("f1", np.full(f1["dim"], 0.5))
    assert math.isfinite(value)


def test_fit_interpolates(model):
    gp, x, y = model
    for row, target in zip(x, y):
        assert gp.mean(row) == pytest.approx(target, abs=1e-5 * (1 + abs(target)))
        assert gp.var(row) < 1e-6 * gp.process_variance
    assert len(gp.lengthscales) == 2


def test_criteria_and_selection(model):
    gp, x, _ = model
    assert vigf.criterion(gp, x[0], "vigf") == pytest.approx(0.0, abs=1e-8)
    point, value = vigf.select_next(gp, "vigf", seed=5, generations=60)
    assert point.shape == (2,)
    assert np.all((point >= 0) & (point <= 1))
    assert value >= vigf.criterion(gp, np.array([0.5, 0.5]), "vigf") - 1e-12
    batch = vigf.select_batch(gp, 3, seed=5, generations=40)
    assert len(batch) == 3


def test_update_extends_design(model):
    gp, _, _ = model
    x_new = np.array([0.123, 0.456])
    grown = gp.update(x_new, f2d(x_new), refit=False)
    assert grown.points.shape == (9, 2)
    assert grown.var(x_new) < gp.var(x_new)


def test_hierarchical_kriging():
    x_low = vigf.lhs_maximin(20, 2, seed=4, sweeps=200)
    y_low = np.array([0.8 * f2d(r) + 0.1 for r in x_low])
    low = vigf.fit(x_low, y_low, seed=2)
    x_high = vigf.lhs_maximin(6, 2, seed=9, sweeps=200)
    y_high = np.array([f2d(r) for r in x_high])
    hk = vigf.fit_hk(low, x_high, y_high, seed=2)
    assert hk.beta_hat == pytest.approx(1.25, rel=0.05)
    point, level, value = vigf.select_next_hk(hk, "vigf_hk", seed=1, generations=40)
    assert level in ("low", "high")
    assert value >= 0.0


def test_design_metrics():
    pts = vigf.lhs_random(10, 3, seed=1)
    assert pts.shape == (10, 3)
    assert vigf.discrepancy_l2(np.array([[0.3]])) == pytest.approx(math.sqrt(1 / 3 - 0.91 + 0.7), rel=1e-12)
    assert vigf.nrmse(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0, 5.0])) == pytest.approx(
        math.sqrt(4 / 3) / 4
    )


def test_run_returns_document():
    doc = vigf.run(
        "sequential",
        {"function": "f1", "criterion": "eigf", "reps": 1, "budget": 8, "test_size": 100, "lhs_sweeps": 100},
        de_generations=30,
    )
    record = doc["records"][0]
    assert record["evaluations"] == 8
    assert doc["aggregate"]["n_evals"][-1] == 8


def test_errors_carry_codes():
    with pytest.raises(vigf.VigfError) as info:
        vigf.evaluate("nope", np.zeros(2))
    assert info.value.code == "usage_error"
    with pytest.raises(vigf.VigfError):
        vigf.run("sequential", {"function": "f1", "budget": 1, "n_init": 6})
