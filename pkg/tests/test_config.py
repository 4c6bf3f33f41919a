import pytest

from anecelab.config import Config, ConfigError, env_get, env_get_int


def test_defaults(env):
    env.delenv("ANECE_LOGGING_CONFIG_PATH")
    conf = Config()
    assert conf.logging_config_path == "logging_config.json"
    assert conf.workers == 4
    assert conf.tamper_prefixes == ()


def test_tamper_prefixes_are_split(env):
    env.setenv("ANECE_VERIFY_TAMPER", "slope.phase1, rank.,")
    assert Config().tamper_prefixes == ("slope.phase1", "rank.")


def test_workers_must_be_positive_integer(env):
    env.setenv("ANECE_WORKERS", "zero")
    with pytest.raises(ConfigError):
        Config()
    env.setenv("ANECE_WORKERS", "0")
    with pytest.raises(ConfigError):
        Config()


def test_env_get_required(monkeypatch):
    monkeypatch.delenv("ANECE_MISSING", raising=False)
    with pytest.raises(ConfigError, match="ANECE_MISSING"):
        env_get("ANECE_MISSING")
    assert env_get("ANECE_MISSING", required=False) == ""


def test_env_get_int(monkeypatch):
    monkeypatch.setenv("ANECE_COUNT", "8")
    assert env_get_int("ANECE_COUNT") == 8
