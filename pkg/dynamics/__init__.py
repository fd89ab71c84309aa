from .propagator import *
from .population import *
from .twolevel import *
from .wavepacket import *
