"""Logging module for hiddenflows."""
import logging
import os
import re
from logging import LogRecord
from typing import Iterable

import click
from colorama import Fore, Style

from hiddenflows.config import Config, Singleton

CFG = Config()

ANSI_ESCAPE = re.compile(r"\x1B(?:[@-Z\\-_]|\[[0-?]*[ -/]*[@-~])")
ACTIVITY_FORMAT = "%(asctime)s %(levelname)s [%(threadName)s] %(title)s %(message_no_color)s"
ERROR_FORMAT = (
    "%(asctime)s %(levelname)s [%(threadName)s] %(module)s:%(funcName)s:%(lineno)d"
    " %(title)s %(message_no_color)s"
)


def _file_handler(log_dir: str, name: str, level: int, fmt: str) -> logging.FileHandler:
    handler = logging.FileHandler(os.path.join(log_dir, name), "a", "utf-8")
    handler.setLevel(level)
    handler.setFormatter(HiddenFlowsFormatter(fmt))
    return handler


class Logger(metaclass=Singleton):
    """
    Logger that handles titles in different colors.
    Outputs logs in console, activity.log (everything) and error.log (errors);
    the files name the worker thread so corpus runs can be untangled.
    """

    def __init__(self):
        log_dir = str(CFG.log_dir)
        os.makedirs(log_dir, exist_ok=True)

        self.console_handler = ConsoleHandler()
        self.console_handler.setLevel(logging.INFO)
        self.console_handler.setFormatter(HiddenFlowsFormatter("%(title_color)s %(message)s"))

        self.file_handler = _file_handler(log_dir, "activity.log", logging.DEBUG, ACTIVITY_FORMAT)
        error_handler = _file_handler(log_dir, "error.log", logging.ERROR, ERROR_FORMAT)

        self.logger = logging.getLogger("HIDDENFLOWS")
        for handler in (self.console_handler, self.file_handler, error_handler):
            self.logger.addHandler(handler)
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False

    def typewriter_log(self, title="", title_color="", content="", level=logging.INFO):
        self._log(title, title_color, content, level)

    def debug(self, message, title="", title_color=""):
        self._log(title, title_color, message, logging.DEBUG)

    def info(self, message, title="", title_color=""):
        self._log(title, title_color, message, logging.INFO)

    def warn(self, message, title="", title_color=Fore.YELLOW):
        self._log(title, title_color, message, logging.WARN)

    def error(self, title, message=""):
        self._log(title, Fore.RED, message, logging.ERROR)

    def package_diagnostics(self, package, diagnostics: Iterable[str]) -> None:
        """Record the diagnostics of one package in activity.log."""
        for line in diagnostics:
            self._log(f"{package}:", "", line, logging.DEBUG)

    def _log(self, title="", title_color="", message="", level=logging.INFO):
        if isinstance(message, list):
            message = " ".join(message)
        self.logger.log(level, message or "", extra={"title": title, "color": title_color})

    def set_level(self, level):
        self.console_handler.setLevel(level)


class ConsoleHandler(logging.StreamHandler):
    def emit(self, record) -> None:
        try:
            click.echo(self.format(record))
        except Exception:
            self.handleError(record)


class HiddenFlowsFormatter(logging.Formatter):
    """
    Allows to handle custom placeholders 'title_color' and 'message_no_color'.
    To use this formatter, make sure to pass 'color', 'title' as log extras.
    """

    def format(self, record: LogRecord) -> str:
        title = getattr(record, "title", "")
        color = getattr(record, "color", "")
        record.title_color = f"{color}{title} {Style.RESET_ALL}" if color else title
        record.title = title
        record.message_no_color = remove_color_codes(str(getattr(record, "msg", "")))
        return super().format(record)


def remove_color_codes(s: str) -> str:
    return ANSI_ESCAPE.sub("", s)


logger = Logger()
