import pytest

from anecelab.model import NetworkConfig, SnrGrid, TwoUserModifiedConfig
from anecelab.schemes import (
    AllUserScheme,
    ModifiedTwoUserScheme,
    PairwiseScheme,
    PilotAudit,
    SweepAxisError,
)
from anecelab.schemes.abc import audit_line
from anecelab.verify.compare import SessionBudgetError


def column(rows, key):
    return [row[key] for row in rows]


def test_audit_lines():
    assert audit_line("P", 2, 2) == "rank(P)=2 OK"
    assert audit_line("P_3", 0, 1) == "rank(P_3)=0 FAIL (need 1)"
    assert not PilotAudit(matrices={}, lines=["rank(P)=2 OK", "rank(P_3)=0 FAIL (need 1)"]).ok


def test_all_user_formula():
    report = AllUserScheme(NetworkConfig.symmetric(3, 2, n_eve=4, k2=2)).formula()
    assert report["dof_total"] == 8
    assert report["dof_gap"] == 0


def test_all_user_sweeps():
    scheme = AllUserScheme(NetworkConfig((2, 3), n_eve=4, k2=4))
    rows = scheme.sweep("n_eve", range(9))
    assert column(rows, "n_eve") == list(range(9))
    assert column(rows, "dof_two_user_original") == [16, 16, 14, 12, 10, 8, 8, 8, 8]

    scheme = AllUserScheme(NetworkConfig.symmetric(2, 2, n_eve=12, k2=2))
    rows = scheme.sweep("m", range(2, 7))
    assert column(rows, "dof_phase2_lower_plus") == [8, 4, 0, 0, 0]


def test_all_user_rejects_unknown_axis():
    scheme = AllUserScheme(NetworkConfig((2, 3), n_eve=4, k2=4))
    with pytest.raises(SweepAxisError):
        scheme.sweep("k", [1, 2])
    with pytest.raises(SweepAxisError):
        scheme.sweep("m", [3])


def test_all_user_pilots():
    audit = AllUserScheme(NetworkConfig((1, 1, 1), n_eve=1, k2=1)).pilots(seed=7)
    assert audit.matrices["P"].shape == (3, 2)
    assert audit.lines[0] == "rank(P)=2 OK"
    assert audit.ok


def test_all_user_tasks_skip_phase2_slopes_without_slots():
    grid = SnrGrid()
    with_slots = AllUserScheme(NetworkConfig((1, 1), n_eve=1, k2=1))
    without = AllUserScheme(NetworkConfig((1, 1), n_eve=1, k2=0))
    n_with = len(with_slots.check_tasks(grid, 100, 7, 2))
    assert n_with == len(without.check_tasks(grid, 100, 7, 2)) + 2


def test_pairwise_scheme():
    scheme = PairwiseScheme(NetworkConfig.symmetric(3, 2, n_eve=4, k2=3))
    assert scheme.k2_session == 1
    assert scheme.formula()["dof_phase2_upper"] == 0
    assert scheme.session_network().antennas == (2, 2)

    audit = scheme.pilots(seed=7)
    assert audit.matrices["P_pair"].shape == (6, 6)
    assert audit.lines[-1] == "rank(P_pair)=6 OK"


def test_pairwise_sweep_over_users_keeps_session_budget():
    scheme = PairwiseScheme(NetworkConfig.symmetric(3, 2, n_eve=4, k2=3))
    rows = scheme.sweep("m", [3, 4])
    assert column(rows, "k2_session") == [1, 1]
    assert column(rows, "sessions") == [3, 6]


def test_pairwise_needs_divisible_budget():
    with pytest.raises(SessionBudgetError):
        PairwiseScheme(NetworkConfig.symmetric(3, 2, n_eve=4, k2=2))


def test_modified_scheme():
    scheme = ModifiedTwoUserScheme(TwoUserModifiedConfig(2, 3, 7, 6))
    report = scheme.formula()
    assert (report["dof_phase1"], report["dof_phase2"], report["dof_total"]) == (6, 10, 16)

    rows = scheme.sweep("k", range(3, 9))
    assert column(rows, "dof_phase2") == [2, 6, 10, 10, 10, 10]
    assert column(scheme.sweep("k2", [4]), "dof_phase2") == [10]


def test_modified_pilots_and_compare():
    scheme = ModifiedTwoUserScheme(TwoUserModifiedConfig(2, 3, 7, 6))
    audit = scheme.pilots(seed=7)
    assert list(audit.matrices) == ["P1", "P2"]
    assert audit.matrices["P2"].shape == (3, 3)
    assert audit.ok

    table = scheme.compare()
    assert table.row("modified_two_user").total_dof - table.row("all_user").total_dof == 2
