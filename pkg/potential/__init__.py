from .params import *
from .profile import *
from .knot import *
from .fields import *
