import csv
import io
import json

import pytest

from anecelab.cli.commands import parse_values, pilot_paths
from anecelab.cli.router import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, CommandRouter
from anecelab.pilots import read_matrix
from anecelab.schemes import SweepAxisError

THREE_USERS = """
    version: 1
    scheme: all_user
    seed: 7
    network:
      antennas: [2, 2, 2]
      n_eve: 4
      k2: 2
"""

TWO_USERS = """
    version: 1
    scheme: all_user
    seed: 7
    network:
      antennas: [2, 3]
      n_eve: 4
      k2: 4
"""

MODIFIED = """
    version: 1
    scheme: modified_two_user
    seed: 7
    network:
      n1: 2
      n2: 3
      k_total: 7
      n_eve: 6
"""

PAIRWISE = """
    version: 1
    scheme: pairwise
    seed: 7
    network:
      antennas: [2, 2, 2]
      n_eve: 4
      k2: 3
"""

SMALL_VERIFY = """
    version: 1
    scheme: all_user
    seed: 7
    mc_samples: 100
    rank_draws: 3
    network:
      antennas: [1, 1]
      n_eve: 1
      k2: 1
"""


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


# -----------------------------------
# formula
# -----------------------------------
def test_formula_all_user(cli, write_scenario):
    code, out = cli("formula", "--scenario", write_scenario(THREE_USERS))
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["dof_phase1"] == 4
    assert report["dof_phase2_lower"] == 4
    assert report["dof_phase2_upper"] == 4
    assert report["dof_gap"] == 0
    assert report["dof_total"] == 8


def test_formula_modified(cli, write_scenario):
    code, out = cli("formula", "--scenario", write_scenario(MODIFIED))
    assert code == EXIT_OK
    report = json.loads(out)
    assert (report["dof_phase1"], report["dof_phase2"], report["dof_total"]) == (6, 10, 16)


def test_formula_pairwise_large_eve(cli, write_scenario):
    code, out = cli("formula", "--scenario", write_scenario(PAIRWISE))
    assert code == EXIT_OK
    assert json.loads(out)["dof_phase2_upper"] == 0


def test_formula_is_deterministic(cli, write_scenario):
    path = write_scenario(MODIFIED)
    assert cli("formula", "--scenario", path) == cli("formula", "--scenario", path)


def test_formula_to_file(cli, write_scenario, tmp_path):
    out_path = tmp_path / "formula.json"
    code, out = cli("formula", "--scenario", write_scenario(THREE_USERS), "--out", str(out_path))
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(out_path.read_text())["dof_total"] == 8


# -----------------------------------
# sweep
# -----------------------------------
def test_sweep_two_user_over_eve(cli, write_scenario):
    code, out = cli(
        "sweep", "--scenario", write_scenario(TWO_USERS), "--axis", "n_eve", "--values", "0..8"
    )
    assert code == EXIT_OK
    rows = read_csv(out)
    assert [int(r["n_eve"]) for r in rows] == list(range(9))
    assert [int(r["dof_two_user_original"]) for r in rows] == [16, 16, 14, 12, 10, 8, 8, 8, 8]


def test_sweep_modified_over_k(cli, write_scenario):
    code, out = cli(
        "sweep", "--scenario", write_scenario(MODIFIED), "--axis", "k", "--values", "3..8"
    )
    assert code == EXIT_OK
    assert [int(r["dof_phase2"]) for r in read_csv(out)] == [2, 6, 10, 10, 10, 10]


def test_sweep_users(cli, write_scenario):
    scenario = """
        version: 1
        network:
          antennas: [2, 2]
          n_eve: 12
          k2: 2
    """
    code, out = cli(
        "sweep", "--scenario", write_scenario(scenario), "--axis", "m", "--values", "2,3,4,5,6"
    )
    assert code == EXIT_OK
    assert [int(r["dof_phase2_lower_plus"]) for r in read_csv(out)] == [8, 4, 0, 0, 0]


def test_sweep_bad_axis_or_values(cli, write_scenario):
    path = write_scenario(THREE_USERS)
    assert cli("sweep", "--scenario", path, "--axis", "k", "--values", "1..2")[0] == EXIT_USAGE
    assert cli("sweep", "--scenario", path, "--axis", "k2", "--values", "a..b")[0] == EXIT_USAGE


def test_parse_values():
    assert parse_values("3..6") == [3, 4, 5, 6]
    assert parse_values("1, 4,9") == [1, 4, 9]
    with pytest.raises(SweepAxisError):
        parse_values("5..2")


# -----------------------------------
# pilots
# -----------------------------------
def test_pilots_single_matrix(cli, write_scenario, tmp_path):
    scenario = """
        version: 1
        seed: 3
        network:
          antennas: [1, 1, 1]
          n_eve: 1
          k2: 1
    """
    out_path = tmp_path / "pilots.txt"
    code, out = cli("pilots", "--scenario", write_scenario(scenario), "--out", str(out_path))
    assert code == EXIT_OK
    assert out.splitlines()[0] == "rank(P)=2 OK"
    assert read_matrix(out_path).shape == (3, 2)


def test_pilots_modified_writes_two_files(cli, write_scenario, tmp_path):
    out_path = tmp_path / "pilots.txt"
    code, out = cli("pilots", "--scenario", write_scenario(MODIFIED), "--out", str(out_path))
    assert code == EXIT_OK
    assert read_matrix(tmp_path / "pilots.P1.txt").shape == (2, 2)
    assert read_matrix(tmp_path / "pilots.P2.txt").shape == (3, 3)
    assert out.splitlines() == ["rank(P1)=2 OK", "rank(P2)=3 OK"]


def test_pilots_needs_out(cli, write_scenario):
    assert cli("pilots", "--scenario", write_scenario(THREE_USERS))[0] == EXIT_USAGE


def test_invalid_config_is_usage_error(cli, write_scenario, tmp_path):
    path = write_scenario(THREE_USERS + "      k1: 3\n")
    code, _ = cli("pilots", "--scenario", path, "--out", str(tmp_path / "p.txt"))
    assert code == EXIT_USAGE


def test_pilot_paths():
    assert [p.name for p in pilot_paths("out/p.txt", ["P"])] == ["p.txt"]
    assert [p.name for p in pilot_paths("out/p.txt", ["P1", "P2"])] == ["p.P1.txt", "p.P2.txt"]


# -----------------------------------
# compare
# -----------------------------------
def test_compare_pairwise_slots(cli, write_scenario):
    code, out = cli("compare", "--scenario", write_scenario(PAIRWISE))
    assert code == EXIT_OK
    rows = {r["scheme"]: r for r in read_csv(out)}
    assert rows["all_user"]["phase1_slots"] == "4"
    assert rows["pairwise"]["phase1_slots"] == "6"


def test_compare_modified_beats_original(cli, write_scenario):
    code, out = cli("compare", "--scenario", write_scenario(MODIFIED))
    assert code == EXIT_OK
    assert out.splitlines()[0] == "scheme,phase1_dof,phase2_dof,total_dof,phase1_slots,phase2_slots"
    rows = {r["scheme"]: r for r in read_csv(out)}
    assert int(rows["modified_two_user"]["total_dof"]) == 16
    assert int(rows["all_user"]["total_dof"]) == 14


# -----------------------------------
# verify
# -----------------------------------
def test_verify_small_scenario(cli, write_scenario):
    code, out = cli("verify", "--scenario", write_scenario(SMALL_VERIFY))
    rows = read_csv(out)
    failed = [r["name"] for r in rows if (r["passed"] == "true") == (r["control"] == "true")]
    assert failed == []
    assert code == EXIT_OK
    assert len(rows) >= 10
    names = [r["name"] for r in rows]
    assert names == sorted(names)
    assert "negctl.slope.phase1[1,2]" in names
    assert "identity.manifest" in names


@pytest.fixture
def fast_identities(mocker):
    mocker.patch("anecelab.schemes.all_user.identity_suite", return_value=[])
    mocker.patch("anecelab.schemes.all_user.identity_control", return_value=[])


def test_verify_tampered_target_fails(cli, env, write_scenario, fast_identities):
    env.setenv("ANECE_VERIFY_TAMPER", "slope.phase1")
    code, out = cli("verify", "--scenario", write_scenario(SMALL_VERIFY))
    assert code == EXIT_CHECK_FAILED
    rows = {r["name"]: r for r in read_csv(out)}
    assert rows["slope.phase1[1,2]"]["passed"] == "false"
    assert rows["slope.phase1[1,2]"]["target"] == "2"


def test_verify_refuses_low_samples(cli, write_scenario):
    path = write_scenario(SMALL_VERIFY)
    assert cli("verify", "--scenario", path, "--mc-samples", "10")[0] == EXIT_USAGE


def test_verify_allows_low_samples_on_request(cli, write_scenario, fast_identities):
    path = write_scenario(SMALL_VERIFY)
    code, out = cli("verify", "--scenario", path, "--mc-samples", "10", "--allow-low-samples")
    assert code in (EXIT_OK, EXIT_CHECK_FAILED)
    assert out.startswith("name,measured,target,tolerance,passed,control\n")


# -----------------------------------
# process
# -----------------------------------
def test_missing_scenario_is_usage_error(cli, tmp_path):
    assert cli("formula", "--scenario", str(tmp_path / "none.yaml"))[0] == EXIT_USAGE


def test_bad_logging_config_is_usage_error(cli, env, write_scenario, tmp_path):
    bad = tmp_path / "logging.json"
    bad.write_text("{not json")
    env.setenv("ANECE_LOGGING_CONFIG_PATH", str(bad))
    assert cli("formula", "--scenario", write_scenario(THREE_USERS))[0] == EXIT_USAGE


def test_unknown_command_exits(cli):
    with pytest.raises(SystemExit) as exc:
        cli("simulate", "--scenario", "x.yaml")
    assert exc.value.code == 2


def test_router_rejects_duplicates():
    router = CommandRouter()
    router.register("formula")(lambda ctx: 0)
    with pytest.raises(ValueError):
        router.register("formula")(lambda ctx: 0)
    assert router.dispatch("missing", None) == EXIT_USAGE
