import io
import textwrap

import numpy as np
import pytest

from anecelab.cli import run
from anecelab.model import NetworkConfig
from anecelab.verify.suites import IdentityGrid

SMALL_IDENTITY_GRID = IdentityGrid(
    users=(2, 3),
    antennas=(1, 2),
    n_eve=tuple(range(5)),
    k2=tuple(range(4)),
    two_user_antennas=(1, 2, 3),
    two_user_n_eve=tuple(range(6)),
    two_user_k_max=6,
)


@pytest.fixture
def small_identity_grid():
    return SMALL_IDENTITY_GRID


@pytest.fixture
def env(monkeypatch, tmp_path):
    """A clean process environment without a logging config file."""
    for key in ("ANECE_WORKERS", "ANECE_VERIFY_TAMPER"):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("ANECE_LOGGING_CONFIG_PATH", str(tmp_path / "no-logging.json"))
    return monkeypatch


@pytest.fixture
def write_scenario(tmp_path):
    def write(text: str, name: str = "scenario.yaml") -> str:
        path = tmp_path / name
        path.write_text(textwrap.dedent(text))
        return str(path)

    return write


@pytest.fixture
def cli(env):
    def invoke(*argv: str):
        stdout = io.StringIO()
        code = run(list(argv), stdout=stdout)
        return code, stdout.getvalue()

    return invoke


@pytest.fixture
def three_users():
    return NetworkConfig.symmetric(3, 2, n_eve=4, k2=2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
