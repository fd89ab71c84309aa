from .curves import *
from .segments import *
