from .test_repair import *
from .test_search import *
from .test_cli import *
