import logging
from typing import Any, Callable, Dict, Tuple

from anecelab.config import ConfigError
from anecelab.pilots import PilotConstructionError

from .scenario import ScenarioError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

Command = Callable[[Any], int]

# configuration, input and I/O problems; everything else is a bug and propagates
USAGE_ERRORS: Tuple[type, ...] = (
    ScenarioError,
    ConfigError,
    PilotConstructionError,
    ValueError,
    OSError,
)


class CommandRouter:
    """
    Registry of subcommands. Handlers take a command context and return an
    exit code.
    """

    def __init__(self):
        self._commands: Dict[str, Command] = {}
        self._help: Dict[str, str] = {}

    def register(self, name: str, help: str = "") -> Callable[[Command], Command]:
        def decorator(func: Command) -> Command:
            if name in self._commands:
                raise ValueError(f"command {name!r} is already registered")
            self._commands[name] = func
            self._help[name] = help
            return func

        return decorator

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self._commands)

    def help(self, name: str) -> str:
        return self._help[name]

    def fetch(self, name: str) -> Command:
        try:
            return self._commands[name]
        except KeyError:
            raise ValueError(f"unknown command {name!r}")

    def dispatch(self, name: str, ctx: Any) -> int:
        """Run a command and map input errors to the usage exit code."""
        try:
            return self.fetch(name)(ctx)
        except USAGE_ERRORS as exc:
            log.error(
                "Command failed",
                extra={"command": name, "error": str(exc), "error_type": type(exc).__name__},
            )
            return EXIT_USAGE
