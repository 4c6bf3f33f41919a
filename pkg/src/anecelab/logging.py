import datetime as dt
import json
import logging
from typing import Any, Dict

import numpy as np

# attributes every LogRecord carries; anything else arrived through extra={...}
_RECORD_ATTRS = frozenset(
    vars(logging.LogRecord("", logging.INFO, "", 0, "", (), None))
) | {"message", "asctime", "taskName"}


def render_extra(value):
    """
    Render an extra field for log output. Matrices are summarized by shape
    and dtype instead of being dumped entry by entry.
    """
    if isinstance(value, np.ndarray):
        return f"<ndarray shape={value.shape} dtype={value.dtype}>"
    if isinstance(value, np.generic):
        return value.item()
    return value


def record_extras(record: logging.LogRecord) -> Dict[str, Any]:
    return {
        key: render_extra(value)
        for key, value in vars(record).items()
        if key not in _RECORD_ATTRS
    }


class AneceJSONFormatter(logging.Formatter):
    """
    One JSON object per record. ``fmt_keys`` maps output keys to record
    attributes for fields beyond the fixed ones.
    """

    def __init__(self, *, fmt_keys=None):
        super().__init__()
        self.fmt_keys = fmt_keys or {}

    def format(self, record: logging.LogRecord) -> str:
        created = dt.datetime.fromtimestamp(record.created, tz=dt.timezone.utc)
        payload = {
            "timestamp": created.isoformat(timespec="microseconds"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)
        if record.stack_info:
            payload["stack_info"] = self.formatStack(record.stack_info)

        for out_key, attr in self.fmt_keys.items():
            if out_key not in payload and hasattr(record, attr):
                payload[out_key] = getattr(record, attr)

        for key, value in record_extras(record).items():
            payload.setdefault(key, value)

        return json.dumps(payload, default=str)


class AneceConsoleFormatter(logging.Formatter):
    """Plain log line followed by ``key=value`` extras."""

    def format(self, record: logging.LogRecord) -> str:
        # tracebacks only at DEBUG
        exc_info = record.exc_info
        if not logging.getLogger(record.name).isEnabledFor(logging.DEBUG):
            record.exc_info = None
        try:
            line = super().format(record)
        finally:
            record.exc_info = exc_info

        extras = record_extras(record)
        if not extras:
            return line
        return line + " " + " ".join(f"{k}={v}" for k, v in extras.items())
