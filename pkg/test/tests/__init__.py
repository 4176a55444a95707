from .test_assembly import *
from .test_cp import *
from .test_repair import *
from .test_chisquare import *
from .test_eda import *
from .test_fitness import *
from .test_harness import *
