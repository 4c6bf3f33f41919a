import os
from typing import Optional, Tuple


class ConfigError(Exception):
    pass


class Config:
    def __init__(self):
        self.logging_config_path = env_get(
            "ANECE_LOGGING_CONFIG_PATH", default="logging_config.json"
        )
        self.workers = env_get_int("ANECE_WORKERS", default="4")

        # check-name prefixes whose targets get shifted before evaluation,
        # used to exercise the failure path end to end
        tamper = env_get("ANECE_VERIFY_TAMPER", default="", required=False)
        self.tamper_prefixes: Tuple[str, ...] = tuple(
            p.strip() for p in tamper.split(",") if p.strip()
        )


def env_get(key: str, default: Optional[str] = None, required: bool = True) -> str:
    value = os.environ.get(key) or default
    if not value:
        if required:
            raise ConfigError(f"Required environment variable not found: {key}")
        return ""

    return value


def env_get_int(key: str, default: Optional[str] = None) -> int:
    value = env_get(key, default=default)
    try:
        parsed = int(value)
    except ValueError:
        raise ConfigError(f"Environment variable is not an integer: {key}={value}")

    if parsed < 1:
        raise ConfigError(f"Environment variable must be positive: {key}={value}")

    return parsed
