import logging

import numpy as np

from .profile import PotentialProfile, LINEAR, HARD_WALL

logger = logging.getLogger(__name__)


def _params(model, params):
    return model.params if params is None else params


def tilt_potential(profile, field, params):
    """ Add the longitudinal field ramp charge * field * s, zero at the symmetry point

    The ramp acts over the profile's domain and is held constant beyond it, so a well of
    width D sees the end-to-end difference charge * field * D.

    Args:
        profile (PotentialProfile): Profile to tilt (converted to piecewise-linear)
        field (float): Field strength
        params (PhysParams): Physical constants (the charge is used)

    Returns:
        PotentialProfile: Piecewise-linear tilted profile
    """
    if field == 0:
        return profile
    linear = profile.to_linear()
    ramp = params.charge * field * linear.breakpoints
    return PotentialProfile(linear.breakpoints, linear.values + ramp, LINEAR,
                            linear.boundary, linear.domain)


def critical_field(model, params=None):
    """ Largest field that keeps the level in the tilted well

    E_max = hbar^2 kappa^2 (1 + cos(D kappa / 2)) / (4 m |e| D)
    """
    params = _params(model, params)
    if params.charge == 0:
        return np.inf
    field = (params.hbar ** 2 * model.kappa ** 2 * (1.0 + np.cos(model.D * model.kappa / 2.0))
             / (4.0 * params.mass * abs(params.charge) * model.D))
    bound = critical_field_bound(model, params)
    if field > bound:
        logger.warning("Critical field %.6g exceeds the quoted bound %.6g", field, bound)
    return float(field)


def critical_field_bound(model, params=None):
    """ Upper estimate hbar^2 / (20 m |e| rho0^2) of the non-destructive field """
    params = _params(model, params)
    if params.charge == 0:
        return np.inf
    return float(params.hbar ** 2 / (20.0 * params.mass * abs(params.charge) * model.rho0 ** 2))


def dipole_moment(model, params=None):
    """ mu = e (d + D) of a particle sitting in one well """
    return float(_params(model, params).charge * (model.d + model.D))


def max_temperature(model, params=None):
    """ Temperature below which only the two lowest states are populated, T < U0 / k_B """
    return float(model.U0 / _params(model, params).boltzmann)


def field_device_potential(model, field, params=None):
    """ Merged bent bars between insulating ends, biased from the centre

    The bars are merged at s = 0 (d = 0) and closed by hard walls at s = +-D. The electrodes
    raise the energy at the merger point, so the field carves a triangular well against each
    wall: V(s) = -U0 - |e| field |s|.
    """
    params = _params(model, params)
    if field < 0:
        raise ValueError(f"Invalid field strength: {field}")
    drop = abs(params.charge) * field * model.D
    nodes = np.array([-model.D, 0.0, model.D])
    values = np.array([-model.U0 - drop, -model.U0, -model.U0 - drop])
    return PotentialProfile(nodes, values, LINEAR, HARD_WALL, (-model.D, model.D))
