import numpy as np
from scipy.integrate import trapezoid


def well_population(psi, split_point=0.0):
    """ Probabilities (P_L, P_R) on either side of split_point

    The density |psi|^2 is integrated with the trapezoidal rule; the split point is inserted
    as a node with the linearly interpolated density.

    Args:
        psi (Wavefunction): Normalized state
        split_point (float): Position separating the wells

    Returns:
        float: P_L
        float: P_R
    """
    s = psi.s
    density = np.abs(psi.psi) ** 2
    if split_point <= s[0]:
        return 0.0, float(trapezoid(density, s))
    if split_point >= s[-1]:
        return float(trapezoid(density, s)), 0.0
    cut = np.searchsorted(s, split_point)
    at_split = np.interp(split_point, s, density)
    left_s = np.append(s[:cut], split_point)
    left_density = np.append(density[:cut], at_split)
    right_s = np.insert(s[cut:], 0, split_point)
    right_density = np.insert(density[cut:], 0, at_split)
    return float(trapezoid(left_density, left_s)), float(trapezoid(right_density, right_s))
