import logging
import unittest
from privex.loghelper import LogHelper
from privex.helpers import env_bool
from tests.test_basis import *
from tests.test_ordinal import *
from tests.test_estimators import *
from tests.test_evaluation import *
from tests.test_persist import *
from tests.test_cli import *


if env_bool('DEBUG', False) is True:
    LogHelper('privex.folr', level=logging.DEBUG).add_console_handler(logging.DEBUG)
else:
    LogHelper('privex.folr', level=logging.CRITICAL)  # Silence non-critical log messages

if __name__ == '__main__':
    unittest.main()
