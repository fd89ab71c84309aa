from .transfer import *
from .resonances import *
