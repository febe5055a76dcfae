import os
from dotenv import load_dotenv

load_dotenv()


def _flag(value):
    return str(value).strip().lower() in ('1', 'true', 'yes', 'on')


class Config:
    # Word engine
    YBE_BUDGET_WORDS = int(os.environ.get('YBE_BUDGET_WORDS') or 5_000_000)
    YBE_CENTRAL_MAX_DEGREE = int(os.environ.get('YBE_CENTRAL_MAX_DEGREE') or 40)

    # Analysis defaults (CLI flags override these)
    YBE_MAX_DEGREE = int(os.environ.get('YBE_MAX_DEGREE') or 6)
    YBE_IMAX = int(os.environ.get('YBE_IMAX') or 4)
    YBE_KMAX = int(os.environ.get('YBE_KMAX') or 8)
    YBE_CHARACTERISTICS = os.environ.get('YBE_CHARACTERISTICS') or '0,2,3'
    YBE_SUBSET_LIMIT = int(os.environ.get('YBE_SUBSET_LIMIT') or 20)

    # Logging
    LOG_LEVEL = os.environ.get('LOG_LEVEL') or 'INFO'
    LOG_DIR = os.environ.get('LOG_DIR') or 'logs'
    LOG_TO_FILE = _flag(os.environ.get('LOG_TO_FILE') or 'false')

    # Task queue
    CELERY_BROKER_URL = os.environ.get('CELERY_BROKER_URL') or 'redis://localhost:6379/0'
    CELERY_RESULT_BACKEND = os.environ.get('CELERY_RESULT_BACKEND') or 'redis://localhost:6379/0'
    CELERY_TASK_ALWAYS_EAGER = _flag(os.environ.get('CELERY_TASK_ALWAYS_EAGER') or 'true')

    @classmethod
    def word_budget(cls):
        """Word/state budget per degree, re-read so late environment overrides apply"""
        value = os.environ.get('YBE_BUDGET_WORDS')
        return int(value) if value else cls.YBE_BUDGET_WORDS

    @classmethod
    def characteristics(cls, raw=None):
        """Parse a comma separated characteristic list such as '0,2,3'"""
        text = raw if raw is not None else cls.YBE_CHARACTERISTICS
        return [int(part) for part in text.split(',') if part.strip()]
