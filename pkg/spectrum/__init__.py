from .states import *
from .analytic import *
from .numeric import *
