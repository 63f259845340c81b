"""
Structured logging for lorval.

Services log through :class:`StructuredLogger`, passing context as keyword
arguments (``logger.info("Sweep point", n=3, eps=1e-3)``). The context rides
on the record as ``extra`` and :class:`ContextFormatter` renders it after the
message as ``key=value`` pairs.
"""

import logging
import logging.config
from typing import Any, Dict, Mapping, Optional

APP_LOGGERS = (
    'core', 'minkowski', 'grassmann', 'bodies', 'zonal',
    'valuations', 'mero', 'experiments', 'cli',
)

# Attributes every LogRecord has; anything else came in through ``extra``.
_RECORD_FIELDS = frozenset(vars(logging.LogRecord('', 0, '', 0, '', None, None))) | {'message', 'asctime'}


class ContextFormatter(logging.Formatter):
    """Formatter that appends the structured context of a record."""

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        context = {k: v for k, v in vars(record).items() if k not in _RECORD_FIELDS}
        if not context:
            return text
        pairs = ' '.join(f"{key}={context[key]!r}" for key in sorted(context))
        return f"{text} [{pairs}]"


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    logger = logging.getLogger(name)
    if level:
        logger.setLevel(level.upper())
    return logger


def default_logging_config(level: str = 'INFO') -> Dict[str, Any]:
    """
    dictConfig for the app loggers.

    Both formatters render structured context; ``simple`` is the default and
    ``verbose`` adds time, module and process ids.
    """
    formatter = 'core.utils.logger.ContextFormatter'
    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'verbose': {
                '()': formatter,
                'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
                'style': '{',
            },
            'simple': {'()': formatter, 'format': '{levelname} {name}: {message}', 'style': '{'},
        },
        'handlers': {
            'console': {
                'class': 'logging.StreamHandler',
                'formatter': 'simple',
                'stream': 'ext://sys.stderr',
            },
        },
        'root': {'handlers': ['console'], 'level': 'WARNING'},
        'loggers': {
            name: {'handlers': ['console'], 'level': level, 'propagate': False}
            for name in APP_LOGGERS
        },
    }


def setup_logging(config: Optional[Dict[str, Any]] = None) -> None:
    logging.config.dictConfig(config if config is not None else default_logging_config())


class StructuredLogger:
    """
    Wrapper over :mod:`logging` that takes context as keyword arguments.

    ``None`` values are dropped. :meth:`bind` returns a logger that adds a
    fixed context to every call, e.g. the subcommand of a CLI run.
    """

    def __init__(self, name: str, context: Optional[Mapping[str, Any]] = None):
        self.logger = get_logger(name)
        self.context = dict(context or {})

    def bind(self, **context: Any) -> 'StructuredLogger':
        return StructuredLogger(self.logger.name, {**self.context, **context})

    def log(self, level: int, message: str, **kwargs: Any) -> None:
        if not self.logger.isEnabledFor(level):
            return
        extra = {k: v for k, v in {**self.context, **kwargs}.items() if v is not None}
        self.logger.log(level, message, extra=extra)

    def debug(self, message: str, **kwargs: Any) -> None:
        self.log(logging.DEBUG, message, **kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self.log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self.log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        self.log(logging.ERROR, message, **kwargs)

    def critical(self, message: str, **kwargs: Any) -> None:
        self.log(logging.CRITICAL, message, **kwargs)
