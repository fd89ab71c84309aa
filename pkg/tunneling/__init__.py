from .split import *
