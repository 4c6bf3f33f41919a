import pytest

from anecelab.dofcalc import (
    DofScenario,
    Scheme,
    UnknownSchemeError,
    UnknownTermError,
    all_user_report,
    closed_form_term,
    dof_cij,
    dof_entropy_terms,
    dof_gap,
    dof_gap_symmetric,
    dof_leakage,
    dof_modified_terms,
    dof_modified_two_user,
    dof_pairwise,
    dof_phase1,
    dof_phase2_lower,
    dof_phase2_lower_plus,
    dof_phase2_upper,
    dof_total,
    dof_two_user_original,
    freedom_count_oracle,
    large_m_threshold,
    modified_report,
    pairwise_report,
    two_user_region,
)
from anecelab.model import InvalidConfigError, NetworkConfig, TwoUserModifiedConfig


def scenario(antennas, n_eve, k2, i=0, j=1):
    return DofScenario(NetworkConfig(tuple(antennas), n_eve=n_eve, k2=k2), i, j)


def symmetric(m, n, n_eve, k2):
    return DofScenario(NetworkConfig.symmetric(m, n, n_eve=n_eve, k2=k2), 0, 1)


@pytest.mark.parametrize("n_i, n_j, dof", [(1, 1, 1), (2, 3, 6), (4, 4, 16)])
def test_phase1(n_i, n_j, dof):
    assert dof_phase1(n_i, n_j) == dof


def test_phase1_rejects_empty_user():
    with pytest.raises(ValueError):
        dof_phase1(0, 2)


def test_scenario_rejects_bad_pair():
    with pytest.raises(ValueError):
        scenario((2, 2), 1, 1, 0, 0)
    with pytest.raises(InvalidConfigError):
        DofScenario(NetworkConfig((2,), n_eve=1, k2=1), 0, 1)


def test_cij():
    assert dof_cij(scenario((2, 2), 5, 3)) == 12
    assert dof_cij(symmetric(3, 2, 4, 2)) == 4
    assert dof_cij(scenario((2, 2), 5, 0)) == 0


def test_entropy_terms():
    terms = dof_entropy_terms(scenario((2, 2), 5, 3))
    assert terms.h_yi_given_hi == 6
    assert terms.h_ye_given_hep == 14
    assert terms.h_joint_i_e == 16
    assert dof_entropy_terms(symmetric(3, 2, 4, 3)).h_joint_i_j_e == 14


def test_short_phase2_collapses_eve_term():
    s = scenario((2, 3), 4, 2)
    assert s.delta_k2 == 0
    assert dof_entropy_terms(s).h_ye_given_hep == 4 * 2


def test_leakage():
    assert dof_leakage(scenario((2, 2), 5, 3)) == 4
    assert dof_leakage(scenario((2, 2), 5, 0)) == 0
    assert dof_leakage(scenario((2, 3), 0, 4)) == 0


def test_phase2_lower():
    for n_eve in range(10):
        assert dof_phase2_lower(symmetric(3, 2, n_eve, 2)) == 4
    assert dof_phase2_lower(symmetric(3, 2, 4, 3)) == 4
    assert dof_phase2_lower(scenario((2, 2), 5, 3)) == 8


def test_lower_plus_clamps():
    s = symmetric(4, 2, 12, 4)
    assert dof_phase2_lower(s) < 0
    assert dof_phase2_lower_plus(s) == 0


def test_phase2_upper_and_gap():
    assert dof_phase2_upper(symmetric(3, 2, 4, 3)) == 6
    assert dof_phase2_upper(symmetric(3, 2, 4, 2)) == 4
    assert dof_gap(symmetric(3, 2, 4, 3)) == 2
    assert dof_gap(symmetric(4, 2, 6, 2)) == 0
    s = scenario((2, 3), 4, 4)
    assert dof_phase2_upper(s) == dof_phase2_lower(s)


def test_gap_vanishes_for_many_users():
    n, n_eve = 2, 5
    m = large_m_threshold(n, n_eve)
    assert m == 7
    s = symmetric(m, n, n_eve, 6)
    assert dof_gap(s) == 0
    assert dof_gap_symmetric(m, n, n_eve, 6) == 0


def test_gap_table():
    assert dof_gap_symmetric(2, 2, 4, 5) == 0
    assert dof_gap_symmetric(3, 2, 4, 3) == 2


def test_two_user_regions():
    assert two_user_region(2, 3, 1) == "C1"
    assert two_user_region(2, 3, 4) == "C2"
    assert two_user_region(2, 3, 6) == "C3"


@pytest.mark.parametrize("n_eve, dof", [(6, 8), (1, 16), (4, 10)])
def test_two_user_original(n_eve, dof):
    assert dof_two_user_original(2, 3, n_eve, 4) == dof


def test_two_user_original_needs_ordered_antennas():
    with pytest.raises(ValueError):
        dof_two_user_original(3, 2, 1, 1)


def test_two_user_original_sweep_over_eve():
    values = [dof_two_user_original(2, 3, n_eve, 4) for n_eve in range(9)]
    assert values == [16, 16, 14, 12, 10, 8, 8, 8, 8]


def test_pairwise():
    assert dof_pairwise(2, 2, 1, 2) == (6, 6, 0)
    assert dof_pairwise(2, 2, 4, 2).upper == 0
    assert dof_pairwise(2, 2, 9, 2).lower == 0
    assert dof_pairwise(3, 2, 2, 1) == (2, 3, 1)


def test_modified_two_user():
    bounds = dof_modified_two_user(TwoUserModifiedConfig(2, 3, 7, 6))
    assert bounds.lower_12 == 10
    assert bounds.upper == bounds.lower_12
    assert bounds.lower_12 - bounds.lower_21 == min(6, 1) * (7 - 5)
    assert dof_modified_two_user(TwoUserModifiedConfig(2, 3, 7, 1)).lower_12 == 18


def test_modified_sweep_over_k():
    values = [
        dof_modified_two_user(TwoUserModifiedConfig(2, 3, k, 6)).lower_12
        for k in range(3, 9)
    ]
    assert values == [2, 6, 10, 10, 10, 10]


def test_modified_key0_term():
    assert dof_modified_terms(TwoUserModifiedConfig(2, 3, 7, 6)).term1 == 18
    # equal antennas reduce to the original C_key,0 DoF 2 N K_2
    assert dof_modified_terms(TwoUserModifiedConfig(2, 2, 5, 3)).term1 == 2 * 2 * 3


def test_dof_total():
    cfg2u = TwoUserModifiedConfig(2, 3, 7, 6)
    assert dof_total(Scheme.MODIFIED_TWO_USER, {"cfg2u": cfg2u}) == 16
    cfg = NetworkConfig.symmetric(3, 2, n_eve=4, k2=2)
    assert dof_total("all_user", {"cfg": cfg}) == 8
    params = {"n_ip": 2, "n_jp": 2, "n_eve": 4, "k2_session": 1}
    assert dof_total("pairwise", params) == 4


def test_unknown_scheme():
    with pytest.raises(UnknownSchemeError):
        dof_total("relay", {})


def test_freedom_oracle_examples():
    assert freedom_count_oracle("ye_given_hep", scenario((2, 2), 5, 3)) == 14
    assert freedom_count_oracle("joint_i_j_e", symmetric(3, 2, 4, 3)) == 14
    assert freedom_count_oracle("modified_term3", TwoUserModifiedConfig(2, 3, 7, 6)) == 28


def test_freedom_oracle_matches_closed_forms():
    for n_eve in range(8):
        for k2 in range(6):
            s = scenario((1, 2, 3), n_eve, k2, 1, 2)
            for term in ("ye_given_hep", "joint_i_e", "joint_i_j_e"):
                assert freedom_count_oracle(term, s) == closed_form_term(term, s)


def test_freedom_oracle_rejects_unknown_term():
    with pytest.raises(UnknownTermError):
        freedom_count_oracle("joint_everything", scenario((1, 1), 1, 1))
    with pytest.raises(TypeError):
        freedom_count_oracle("modified_term2", scenario((1, 1), 1, 1))


def test_all_user_report_keys():
    report = all_user_report(symmetric(3, 2, 4, 2))
    assert report["dof_phase1"] == 4
    assert report["dof_phase2_lower"] == 4
    assert report["dof_phase2_upper"] == 4
    assert report["dof_gap"] == 0
    assert report["dof_total"] == 8
    assert "dof_two_user_original" not in report
    assert all_user_report(scenario((2, 3), 4, 4))["dof_two_user_original"] == 10


def test_pairwise_report():
    cfg = NetworkConfig.symmetric(3, 2, n_eve=4, k2=3)
    report = pairwise_report(cfg, (0, 1))
    assert report["k2_session"] == 1
    assert report["dof_phase2_upper"] == 0
    assert report["dof_total"] == 4
    with pytest.raises(ValueError):
        pairwise_report(cfg.with_updates(k2=2), (0, 1))


def test_modified_report():
    report = modified_report(TwoUserModifiedConfig(2, 3, 7, 6))
    assert report["dof_phase1"] == 6
    assert report["dof_phase2"] == 10
    assert report["dof_total"] == 16
    assert report["dof_original_phase2"] == 8
    assert report["dof_gain_vs_original"] == 2


def test_all_user_report_orders_two_user_antennas():
    forward = all_user_report(scenario((2, 3), 4, 4))
    backward = all_user_report(scenario((3, 2), 4, 4))
    assert backward["dof_two_user_original"] == forward["dof_two_user_original"] == 10
