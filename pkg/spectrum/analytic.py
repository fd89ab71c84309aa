import logging

import numpy as np
from scipy.optimize import brentq

from .states import BoundState, EVEN, ODD

logger = logging.getLogger(__name__)

SCAN_POINTS = 10_000
ROOT_TOL = 1e-14
THRESHOLD_Q2 = 1e-14


### TRANSCENDENTAL CONDITIONS ###

def even_residual(x, C):
    """ tan(x) - sqrt(C^2 - x^2) / x, zero at even levels (x = kD/2) """
    return np.tan(x) - np.sqrt(C ** 2 - x ** 2) / x


def odd_residual(x, C):
    """ tan(x) + x / sqrt(C^2 - x^2), zero at odd levels """
    return np.tan(x) + x / np.sqrt(C ** 2 - x ** 2)


def _even_smooth(x, C):
    # even_residual multiplied by x cos(x): same roots, no poles
    return x * np.sin(x) - np.sqrt(np.maximum(C ** 2 - x ** 2, 0.0)) * np.cos(x)


def _odd_smooth(x, C):
    return np.sqrt(np.maximum(C ** 2 - x ** 2, 0.0)) * np.sin(x) + x * np.cos(x)


def _scan_roots(f, a, b, n=SCAN_POINTS):
    """ Roots of f on (a, b]: sign-change bracketing on n points, then Brent refinement """
    x = np.linspace(a, b, n + 1)[1:]
    y = f(x)
    roots = list(x[y == 0])
    for i in np.nonzero(y[:-1] * y[1:] < 0)[0]:
        roots.append(brentq(f, x[i], x[i + 1], xtol=ROOT_TOL, rtol=4 * np.finfo(float).eps))
    return sorted(roots)


def level_energy(model, k):
    """ E_n = -U0 [1 - (k D / 2C)^2] """
    return -model.U0 * (1.0 - (k * model.D / (2.0 * model.C)) ** 2)


def _state(model, k, parity):
    q2 = max(model.k0 ** 2 - k ** 2, 0.0)
    return BoundState(k=float(k), q=float(np.sqrt(q2)), energy=float(level_energy(model, k)),
                      parity=parity, threshold=bool(q2 < THRESHOLD_Q2))


def solve_single_well(model):
    """ Bound levels of one well of width D and parameter C

    Even levels solve tan(x) = sqrt(C^2 - x^2)/x and odd levels tan(x) = -x/sqrt(C^2 - x^2)
    with x = kD/2 in (0, C]. At least one even level always exists.

    Args:
        model (DoubleWellModel): Supplies D, C, k0 and U0

    Returns:
        list: BoundState levels sorted by energy
    """
    C = model.C
    states = []
    for parity, residual in ((EVEN, _even_smooth), (ODD, _odd_smooth)):
        for x in _scan_roots(lambda x: residual(x, C), 0.0, C):
            states.append(_state(model, 2.0 * x / model.D, parity))
    states.sort(key=lambda state: state.energy)
    logger.debug("Single well C=%.6g: %d levels", C, len(states))
    return states


def hard_wall_residual(k, model, n):
    """ kD - n pi + sum over both outer lengths of arctan[(k/q) tanh(q L)]

    Equivalent to the hard-wall condition kD = sum arctan{+-[(q/k) coth(q L)]^(+-1)} with
    L = l + D/2 and l - D/2; odd n is the even (+) branch with index (n - 1)/2, even n the
    odd (-) branch with index n/2.
    """
    k = np.asarray(k, dtype=float)
    q = np.sqrt(np.maximum(model.k0 ** 2 - k ** 2, 0.0))
    total = k * model.D - n * np.pi
    for length in (model.l + model.D / 2.0, model.l - model.D / 2.0):
        x = q * length
        safe = np.where(x > 1e-8, x, 1.0)
        ratio = np.where(x > 1e-8, np.tanh(safe) / safe, 1.0 - x ** 2 / 3.0)
        total = total + np.arctan(k * length * ratio)
    return total


def solve_hard_wall(model):
    """ Negative-energy levels of one well of width D between hard walls

    The walls lie l + D/2 and l - D/2 beyond the two well edges. Branches without a root
    below the continuum edge are omitted.

    Returns:
        list: BoundState levels sorted by energy; parity labels follow the branch
    """
    if model.l is None:
        raise ValueError("Invalid model: hard-wall distance l is not set")
    states = []
    n = 1
    while hard_wall_residual(model.k0, model, n) >= 0:
        parity = EVEN if n % 2 == 1 else ODD
        for k in _scan_roots(lambda k: hard_wall_residual(k, model, n), 0.0, model.k0):
            states.append(_state(model, k, parity))
        n += 1
    states.sort(key=lambda state: state.energy)
    return states
