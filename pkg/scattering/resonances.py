import logging

import numpy as np
from scipy.optimize import minimize_scalar

from .transfer import TransmissionSweep, transmission

logger = logging.getLogger(__name__)

WINDOW = 5
PROMINENCE = 1e-12
REFINE_TOL = 1e-4


def _strict_maxima(T, window=WINDOW, prominence=PROMINENCE):
    """ Indices that exceed every other sample of their centred window by the prominence """
    half = window // 2
    maxima = []
    for i in range(half, len(T) - half):
        neighbours = np.concatenate([T[i - half:i], T[i + 1:i + half + 1]])
        if T[i] > np.max(neighbours) + prominence:
            maxima.append(i)
    return maxima


def find_resonances(sweep, threshold=0.999, tol=REFINE_TOL):
    """ Wave numbers of complete transparency

    Strict local maxima of T over a 5-sample window are refined by golden-section
    maximization when the sweep carries its potential, and kept when the refined
    transmission reaches the threshold. A flat T = 1 plateau holds no strict maxima.

    Args:
        sweep (TransmissionSweep | list): Points sorted by q
        threshold (float): Minimum transmission of a resonance
        tol (float): Target width of the refined bracket in q

    Returns:
        list: Resonance wave numbers in increasing order
    """
    if len(sweep) == 0:
        raise ValueError("Invalid sweep: no points")
    q = np.array([point.q for point in sweep])
    T = np.array([point.T for point in sweep])
    if np.any(np.diff(q) <= 0):
        raise ValueError("Invalid sweep: wave numbers must be sorted")
    potential = sweep.potential if isinstance(sweep, TransmissionSweep) else None
    if potential is None:
        logger.warning("Sweep carries no potential; resonances are not refined")

    resonances = []
    for i in _strict_maxima(T):
        position, peak = q[i], T[i]
        if potential is not None:
            a, b, c = q[i - 1], q[i], q[i + 1]
            result = minimize_scalar(lambda x: -transmission(x, potential, sweep.params).T,
                                     bracket=(a, b, c), method="golden",
                                     options={"xtol": tol / (2.0 * abs(b))})
            if a < result.x < c and -result.fun >= peak:
                position, peak = float(result.x), float(-result.fun)
        if peak >= threshold:
            resonances.append(float(position))
    return resonances


def ramsauer_resonances(width, depth, count, params=None):
    """ Transparency of a single square well: sqrt(q^2 + depth / (hbar^2/2m)) * width = n pi

    Args:
        width (float): Well width
        depth (float): Well depth U0 (> 0)
        count (int): Number of resonances n = 1..count
        params (PhysParams): Physical constants

    Returns:
        list: Wave numbers with a real solution, increasing
    """
    kinetic = 1.0 if params is None else params.kinetic
    inside = (np.pi * np.arange(1, count + 1) / width) ** 2 - depth / kinetic
    return [float(np.sqrt(value)) for value in inside if value > 0]
