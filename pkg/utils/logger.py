"""
Centralized Logging System
One file log under LOG/, per-run logs under LOG/<command>/, and a console
handler on standard error (standard output carries only result documents).
"""

import logging
import os
from datetime import datetime
from pathlib import Path

from core.config import LOG_FOLDER

MAIN_LOGGER_NAME = 'cv2design_main'
PACKAGE_LOGGER_NAME = 'cv2design'

FILE_FORMAT = logging.Formatter('%(asctime)s | %(levelname)-8s | %(name)s | %(message)s',
                                datefmt='%Y-%m-%d %H:%M:%S')
CONSOLE_FORMAT = logging.Formatter('%(levelname)s: %(message)s')


class DesignLogger:
    """
    Singleton owning the toolkit's loggers.

    Module loggers ('cv2design.<module>') share the handlers of the main
    logger; run loggers get their own file plus a console handler.
    """

    _instance = None
    _loggers = {}

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._initialized = True

        self.log_dir = Path(os.getcwd()) / LOG_FOLDER
        self.log_dir.mkdir(exist_ok=True)
        self.main_logger = self._create_logger(MAIN_LOGGER_NAME, self.log_dir / 'application.log')

        package_logger = logging.getLogger(PACKAGE_LOGGER_NAME)
        package_logger.setLevel(logging.DEBUG)
        package_logger.propagate = False
        if not package_logger.handlers:
            for handler in self.main_logger.handlers:
                package_logger.addHandler(handler)

    @staticmethod
    def _create_logger(name, log_file, level=logging.INFO):
        """File handler at DEBUG, console handler (stderr) at WARNING."""
        logger = logging.getLogger(name)
        logger.setLevel(level)
        logger.propagate = False
        for handler in logger.handlers[:]:
            handler.close()
            logger.removeHandler(handler)

        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(FILE_FORMAT)

        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.WARNING)
        console_handler.setFormatter(CONSOLE_FORMAT)

        logger.addHandler(file_handler)
        logger.addHandler(console_handler)
        return logger

    def get_run_logger(self, run_name, timestamp=None):
        """
        Logger writing LOG/<run_name>/run_<timestamp>.log.

        Args:
            run_name: Usually the subcommand
            timestamp: Optional timestamp string

        Returns:
            logging.Logger: Run-specific logger
        """
        name = f"{PACKAGE_LOGGER_NAME}_run_{run_name}"
        if name not in self._loggers:
            timestamp = timestamp or datetime.now().strftime("%Y%m%d_%H%M%S")
            run_dir = self.log_dir / run_name
            run_dir.mkdir(exist_ok=True)
            self._loggers[name] = self._create_logger(name, run_dir / f"run_{timestamp}.log",
                                                      level=logging.DEBUG)
        return self._loggers[name]

    @staticmethod
    def get_module_logger(module_name):
        return logging.getLogger(f"{PACKAGE_LOGGER_NAME}.{module_name}")

    def log_separator(self, logger=None, char="=", length=80):
        (logger or self.main_logger).info(char * length)

    def log_header(self, title, logger=None, char="=", length=80):
        """Title framed by separator lines."""
        logger = logger or self.main_logger
        self.log_separator(logger, char, length)
        logger.info(title)
        self.log_separator(logger, char, length)

    def close_run_logger(self, run_name):
        """Close the run log so the next run of the same command opens a new file."""
        logger = self._loggers.pop(f"{PACKAGE_LOGGER_NAME}_run_{run_name}", None)
        if logger is None:
            return
        for handler in logger.handlers[:]:
            handler.close()
            logger.removeHandler(handler)


def get_logger(module_name=None, run_name=None):
    """
    Run logger when run_name is given, else a module logger, else the main logger.
    """
    dl = DesignLogger()
    if run_name:
        return dl.get_run_logger(run_name)
    if module_name:
        return dl.get_module_logger(module_name)
    return dl.main_logger


def debug(message):
    DesignLogger().main_logger.debug(message)


def info(message):
    DesignLogger().main_logger.info(message)


def warning(message):
    DesignLogger().main_logger.warning(message)


def error(message):
    DesignLogger().main_logger.error(message)


def critical(message):
    DesignLogger().main_logger.critical(message)


def log_header(title):
    DesignLogger().log_header(title)


def log_separator(char="-"):
    DesignLogger().log_separator(char=char)
