import numpy as np
import pytest

from anecelab.capacity import (
    LOG2_E_PI,
    CapacityCurve,
    cij_curve,
    cij_phase2_mc,
    ckey0_curve,
    ckey0_modified_mc,
    entropy_cond_gaussian_mc,
    entropy_curve,
    phase1_curve,
    phase1_skc_exact,
)
from anecelab.model import NetworkConfig, SnrGrid, TwoUserModifiedConfig
from anecelab.pilots import PilotSet, build_pilots
from anecelab.verify.fit import fit_slope

SCALAR_PILOTS = PilotSet((np.array([[1.0]]), np.array([[1.0]])))
TWO_SCALAR_USERS = NetworkConfig((1, 1), n_eve=1, k2=1)


def test_phase1_scalar_pilots_by_hand():
    value = phase1_skc_exact(TWO_SCALAR_USERS, SCALAR_PILOTS, 0, 1, sigma2=1.0)
    assert value == pytest.approx(2.0 - np.log2(3.0))
    assert value == pytest.approx(0.415, abs=1e-3)


def test_phase1_vanishes_without_power():
    assert phase1_skc_exact(TWO_SCALAR_USERS, SCALAR_PILOTS, 0, 1, 0.0) == pytest.approx(0.0)


def test_phase1_is_symmetric():
    cfg = NetworkConfig((1, 2, 3), n_eve=2, k2=1)
    ps = build_pilots(cfg, seed=4)
    for i, j in cfg.pairs:
        assert phase1_skc_exact(cfg, ps, i, j, 2.0**8) == pytest.approx(
            phase1_skc_exact(cfg, ps, j, i, 2.0**8), abs=1e-9
        )


def test_phase1_scalar_slope_is_one():
    grid = SnrGrid.from_range(12, 24, 2)
    fit = fit_slope(phase1_curve(TWO_SCALAR_USERS, SCALAR_PILOTS, 0, 1, grid))
    assert fit.slope == pytest.approx(1.0, abs=0.02)


def test_phase1_slope_is_product_of_antennas():
    cfg = NetworkConfig((2, 3), n_eve=4, k2=4)
    curve = phase1_curve(cfg, build_pilots(cfg, seed=7), 0, 1, SnrGrid())
    assert fit_slope(curve).slope == pytest.approx(6.0, abs=0.15)


def test_cij_is_zero_without_power():
    estimate = cij_phase2_mc(TWO_SCALAR_USERS, 0, 1, 0.0, n_samples=10, seed=0)
    assert estimate.mean == pytest.approx(0.0)
    assert estimate.stderr == pytest.approx(0.0)


def test_cij_is_deterministic():
    cfg = NetworkConfig((2, 2, 2), n_eve=4, k2=2)
    a = cij_phase2_mc(cfg, 0, 1, 2.0**10, n_samples=20, seed=3)
    b = cij_phase2_mc(cfg, 0, 1, 2.0**10, n_samples=20, seed=3)
    assert a == b
    assert a.stderr > 0


def test_cij_slope_three_users():
    cfg = NetworkConfig((2, 2, 2), n_eve=4, k2=2)
    curve = cij_curve(cfg, 0, 1, SnrGrid(), n_samples=200, seed=7)
    assert curve.mc_samples == 200
    assert fit_slope(curve).slope == pytest.approx(4.0, abs=0.15)


@pytest.mark.slow
@pytest.mark.parametrize("k2, dof", [(1, 2.0), (3, 6.0)])
def test_cij_slope_scales_with_phase2_slots(k2, dof):
    cfg = NetworkConfig.symmetric(3, 2, n_eve=4, k2=k2)
    curve = cij_curve(cfg, 0, 1, SnrGrid(), n_samples=2000, seed=7)
    assert fit_slope(curve).slope == pytest.approx(dof, abs=0.15)


def test_capacities_grow_with_power():
    grid = SnrGrid.from_range(-6, 24, 2)
    cfg = NetworkConfig.symmetric(3, 2, n_eve=4, k2=2)
    exact = phase1_curve(cfg, build_pilots(cfg, seed=7), 0, 1, grid).values
    sampled = cij_curve(cfg, 0, 1, grid, n_samples=100, seed=7).values
    for values in (exact, sampled):
        assert min(values) >= -1e-9
        assert np.all(np.diff(values) >= -1e-9)


def test_mc_stderr_shrinks_as_root_samples():
    scaled = []
    for n in (100, 1000, 10_000):
        estimate = cij_phase2_mc(TWO_SCALAR_USERS, 0, 1, 2.0**4, n_samples=n, seed=3)
        scaled.append(estimate.stderr * np.sqrt(n))
    assert max(scaled) < 2 * min(scaled)


def test_ckey0_is_zero_without_power():
    cfg2u = TwoUserModifiedConfig(2, 3, 7, 6)
    assert ckey0_modified_mc(cfg2u, 0.0, n_samples=5, seed=0).mean == pytest.approx(0.0)


def test_ckey0_slope():
    curve = ckey0_curve(TwoUserModifiedConfig(2, 3, 7, 6), SnrGrid(), n_samples=200, seed=7)
    assert fit_slope(curve).slope == pytest.approx(18.0, abs=0.54)


def test_entropy_without_power_is_noise_entropy():
    assert entropy_cond_gaussian_mc(2, 3, 4, 0.0, n_samples=5, seed=0) == pytest.approx(
        2 * 4 * LOG2_E_PI
    )


@pytest.mark.parametrize("m, n, k, dof", [(2, 3, 4, 8), (3, 1, 2, 2), (1, 1, 1, 1)])
def test_entropy_slope(m, n, k, dof):
    curve = entropy_curve(m, n, k, SnrGrid(), n_samples=200, seed=7)
    assert fit_slope(curve).slope == pytest.approx(dof, abs=0.15)


def test_entropy_rejects_empty_dimensions():
    with pytest.raises(ValueError):
        entropy_cond_gaussian_mc(0, 1, 1, 1.0, n_samples=1, seed=0)


def test_curve_shape_is_checked():
    with pytest.raises(ValueError):
        CapacityCurve(grid=SnrGrid(), values=(1.0, 2.0))
