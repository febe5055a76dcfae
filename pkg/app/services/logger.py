"""
Centralized logging module for the Yang-Baxter toolkit
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler

from app.config import Config

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Configure root logger (once, module import may happen from tasks and CLI)
root_logger = logging.getLogger()
if not getattr(root_logger, '_ybe_configured', False):
    root_logger.setLevel(getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO))

    # Console handler on stderr; stdout carries JSON reports
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root_logger.addHandler(console_handler)

    if Config.LOG_TO_FILE:
        logs_dir = os.path.join(os.getcwd(), Config.LOG_DIR)
        os.makedirs(logs_dir, exist_ok=True)

        # All logs
        file_handler = RotatingFileHandler(os.path.join(logs_dir, 'ybe.log'), maxBytes=10485760, backupCount=10)
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root_logger.addHandler(file_handler)

        # Errors only
        error_file_handler = RotatingFileHandler(os.path.join(logs_dir, 'errors.log'), maxBytes=10485760, backupCount=10)
        error_file_handler.setLevel(logging.ERROR)
        error_file_handler.setFormatter(logging.Formatter(LOG_FORMAT + ' - %(pathname)s:%(lineno)d'))
        root_logger.addHandler(error_file_handler)

    root_logger._ybe_configured = True


def get_logger(name):
    """Get a logger instance with the given name"""
    return logging.getLogger(name)


class ServiceLogger:
    """Logger for service-specific logs with context enrichment"""

    def __init__(self, service_name):
        self.logger = logging.getLogger(f"service.{service_name}")
        self.service_name = service_name

    @staticmethod
    def _format(message, error=None, context=None):
        if error is not None:
            message = f"{message}: {error}"
        if context:
            message = f"{message} - context: {context}"
        return message

    def info(self, message, context=None):
        """Log info message with optional context"""
        self.logger.info(self._format(message, context=context))

    def warning(self, message, context=None):
        """Log warning message with optional context"""
        self.logger.warning(self._format(message, context=context))

    def debug(self, message, context=None):
        """Log debug message with optional context"""
        self.logger.debug(self._format(message, context=context))

    def error(self, message, error=None, context=None):
        """Log error message with exception details and optional context"""
        self.logger.error(self._format(message, error, context), exc_info=error is not None)

    def critical(self, message, error=None, context=None):
        """Log critical message with exception details and optional context"""
        self.logger.critical(self._format(message, error, context), exc_info=error is not None)


# Common service loggers
solution_logger = ServiceLogger('solution')
word_logger = ServiceLogger('words')
cocycle_logger = ServiceLogger('cocycle')
spectrum_logger = ServiceLogger('spectrum')
algebra_logger = ServiceLogger('algebra')
corpus_logger = ServiceLogger('corpus')
