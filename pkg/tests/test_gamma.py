import math

import numpy as np
import pytest

from pinfin import ConfigError, compute_gamma


def test_zero_tip_coefficient_reduces_to_tanh():
    a0, ell, beta = 1e-3, 0.1, 2.0
    lam = math.sqrt(beta / a0)
    assert compute_gamma(a0, ell, beta, 0.0) == pytest.approx(
        math.tanh(lam * ell), rel=1e-15)


def test_saturates_to_one_for_deep_fins():
    # sqrt(beta/a0) * L = 40: tanh is 1 to double precision
    a0 = 1e-3
    beta = 2.0
    ell = 40.0 / math.sqrt(beta / a0)
    assert abs(compute_gamma(a0, ell, beta, 0.5) - 1.0) <= 1e-15
    # and no overflow even for absurd depths
    assert np.isfinite(compute_gamma(a0, 1e6, beta, 3.0))


def test_matches_extended_precision_evaluation():
    # frozen from a 50-digit mpmath evaluation of
    # (lam sinh(lam L) + beta_r cosh(lam L)) / (lam cosh(lam L) + beta_r sinh(lam L))
    # at a0=1e-3, L=0.1, beta=2, beta_r=1:
    #   0.99975048170323086384559...
    assert compute_gamma(1e-3, 0.1, 2.0, 1.0) == pytest.approx(
        0.9997504817032309, rel=5e-15)


def test_extended_precision_cross_check_live():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 50
    a0, ell, beta, beta_r = map(mp.mpf, ("0.007", "0.8", "0.31", "0.12"))
    lam = mp.sqrt(beta / a0)
    z = lam * ell
    ref = (lam * mp.sinh(z) + beta_r * mp.cosh(z)) / \
        (lam * mp.cosh(z) + beta_r * mp.sinh(z))
    got = compute_gamma(0.007, 0.8, 0.31, 0.12)
    assert got == pytest.approx(float(ref), rel=1e-14)


def test_bounds():
    # 0 < gamma < max(1, beta_r sqrt(a0/beta))
    rng = np.random.default_rng(7)
    for _ in range(200):
        a0 = 10.0 ** rng.uniform(-4, 0)
        ell = 10.0 ** rng.uniform(-2, 1)
        beta = 10.0 ** rng.uniform(-3, 1)
        beta_r = rng.uniform(0.0, 50.0)
        g = compute_gamma(a0, ell, beta, beta_r)
        assert 0.0 < g < max(1.0, beta_r * math.sqrt(a0 / beta)) + 1e-12


def test_rejects_bad_arguments():
    with pytest.raises(ConfigError):
        compute_gamma(-1.0, 0.1, 2.0, 1.0)
    with pytest.raises(ConfigError):
        compute_gamma(1e-3, 0.1, 2.0, -1.0)
