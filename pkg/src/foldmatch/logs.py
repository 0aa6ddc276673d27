import json
import logging
import time

from foldmatch.config import LoggingSettings

_RESERVED = set(vars(logging.makeLogRecord({})))


class JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": time.time(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        # fields passed through extra=
        for key, value in vars(record).items():
            if key not in _RESERVED and key not in log_data:
                log_data[key] = value
        return json.dumps(log_data, default=str, ensure_ascii=False)


def configure_logging(config: LoggingSettings) -> None:
    handler = logging.StreamHandler()
    if config.format == "json":
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))

    root = logging.getLogger("foldmatch")
    root.handlers[:] = [handler]
    root.setLevel(config.level.upper())
    root.propagate = False
