import numpy as np
import pytest
from sklearn.base import clone

from dalpha_ergodic.growth import GrowthFit, GrowthSeq, growth_fit, growth_verdict


def _n(k=10):
    return np.array([2**j for j in range(k)])


def test_exact_power_law():
    n = _n()
    rep = growth_fit(n, 3.0 * n**0.25)
    assert rep.exponent == pytest.approx(0.25, abs=1e-12)
    assert rep.r_squared == pytest.approx(1.0)
    assert not rep.plateau
    assert growth_verdict(rep) == "growing"


def test_plateau_and_decay_count_as_bounded():
    n = _n()
    assert growth_verdict(growth_fit(n, 2.0 - 1.0 / n)) == "bounded"
    assert growth_verdict(growth_fit(n, 0.5**n + 1e-300)) == "bounded"


def test_slow_drift_is_inconclusive():
    n = _n()
    v = 1.0 + 0.02 * np.sin(np.arange(n.size))
    rep = growth_fit(n, v)
    assert growth_verdict(rep) in ("inconclusive", "bounded")
    assert rep.r_squared < 0.9


def test_window_and_validation():
    n = _n()
    rep = growth_fit(n, n**0.5, window=(8, 512))
    assert rep.window == (8, 512)
    with pytest.raises(ValueError):
        growth_fit(n[:3], n[:3] ** 0.5)
    with pytest.raises(ValueError):
        growth_fit(n, np.zeros(n.size))
    with pytest.raises(ValueError):
        growth_fit([4, 2, 8, 16], [1, 2, 3, 4])


def test_growth_seq_checks_and_flags():
    s = GrowthSeq(np.array([1, 2, 4, 8]), np.array([1.0, 1.0, 1.0, 1.0]), flags=[False, True, False, False])
    assert s.flagged
    assert s.as_dict()["flag"] == [False, True, False, False]
    with pytest.raises(ValueError):
        GrowthSeq(np.array([1, 2]), np.array([1.0]))
    with pytest.raises(ValueError):
        GrowthSeq(np.array([1, 2]), np.array([1.0, np.inf]))


def test_estimator_api():
    n = _n()
    est = GrowthFit(plateau_tol=0.02)
    assert est.get_params() == {"plateau_tol": 0.02, "window": None}
    est.fit(n, 2 * n**0.5)
    assert est.exponent_ == pytest.approx(0.5)
    np.testing.assert_allclose(est.predict([4096]), [2 * 64.0])
    assert clone(est).get_params()["plateau_tol"] == 0.02
