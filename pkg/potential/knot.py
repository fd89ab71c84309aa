from dataclasses import dataclass, replace, asdict
from typing import Optional

import numpy as np

from .params import PhysParams
from .profile import PotentialProfile, CONSTANT, LINEAR, HARD_WALL, OPEN


@dataclass(frozen=True)
class DoubleWellModel:
    """ Idealized curvature double well of a tight knot or of bent nano-bars

    Two wells of depth U0 = hbar^2 kappa^2 / 8m and width D are separated by a barrier of
    width d; optional hard walls sit a distance l beyond the centre of each well.

    Args:
        rho0 (float): Thread radius, the unit of length of the knot
        D (float): Well width
        d (float): Barrier width
        kappa (float): Plateau curvature of each well
        l (float): Optional hard-wall distance (l > D/2)
        params (PhysParams): Physical constants
    """
    rho0: float
    D: float
    d: float
    kappa: float
    l: Optional[float] = None
    params: PhysParams = PhysParams()

    def __post_init__(self):
        if not self.rho0 > 0:
            raise ValueError(f"Invalid thread radius: {self.rho0}")
        if not self.D > 0:
            raise ValueError(f"Invalid well width: {self.D}")
        if not self.d >= 0:
            raise ValueError(f"Invalid barrier width: {self.d}")
        if not self.kappa > 0:
            raise ValueError(f"Invalid curvature: {self.kappa}")
        if self.l is not None and not self.l > self.D / 2.0:
            raise ValueError(f"Invalid hard-wall distance: {self.l} (needs l > D/2)")

    @classmethod
    def knot(cls, rho0=1.0, d=None, l=None, params=PhysParams()):
        """ Tight-knot defaults D = 5 rho0, kappa = 1/(2 rho0), barrier d = 5 rho0 """
        if d is None:
            d = 5.0 * rho0
        return cls(rho0=rho0, D=5.0 * rho0, d=d, kappa=1.0 / (2.0 * rho0), l=l, params=params)

    @classmethod
    def nanobar(cls, radius, d, l=None, rho0=None, params=PhysParams()):
        """ Quarter-circle bars of radius R: D = pi R / 2, kappa = 1/R """
        if rho0 is None:
            rho0 = radius / 2.0
        return cls(rho0=rho0, D=np.pi * radius / 2.0, d=d, kappa=1.0 / radius, l=l, params=params)

    def with_(self, **changes):
        return replace(self, **changes)

    @property
    def k0(self):
        """ Wave number of the well depth, k0^2 = kappa^2 / 4 """
        return self.kappa / 2.0

    @property
    def U0(self):
        return self.params.hbar ** 2 * self.kappa ** 2 / (8.0 * self.params.mass)

    @property
    def C(self):
        """ Well parameter C = kappa D / 4 = k0 D / 2 """
        return self.kappa * self.D / 4.0

    @property
    def wall(self):
        """ Position of the right hard wall, None when the wire is open """
        if self.l is None:
            return None
        return self.d / 2.0 + self.D / 2.0 + self.l

    def to_dict(self):
        data = asdict(self)
        data.update(U0=self.U0, C=self.C, k0=self.k0)
        return data


def effective_potential(profile, params=PhysParams()):
    """ Curvature-induced potential V(s) = -(hbar^2/2m) kappa(s)^2 / 4

    Args:
        profile (CurvatureProfile): Sampled curvature
        params (PhysParams): Physical constants

    Returns:
        PotentialProfile: Piecewise-linear nodes on the profile's s grid, open boundaries
    """
    values = -params.kinetic * profile.kappa ** 2 / 4.0
    return PotentialProfile(profile.s.copy(), values, LINEAR, OPEN,
                            (float(profile.s[0]), float(profile.s[-1])))


def double_well_potential(model):
    """ Piecewise-constant double well, even about s = 0

    Wells occupy [-d/2 - D, -d/2] and [d/2, d/2 + D]. d = 0 merges them into one well of
    width 2D. With a hard-wall distance l the domain is closed by walls at
    +-(d/2 + D/2 + l).
    """
    if model.d < 0:
        raise ValueError(f"Invalid barrier width: {model.d}")
    half, outer = model.d / 2.0, model.d / 2.0 + model.D
    if model.d == 0:
        breakpoints = np.array([-outer, outer])
        values = np.array([0.0, -model.U0, 0.0])
    else:
        breakpoints = np.array([-outer, -half, half, outer])
        values = np.array([0.0, -model.U0, 0.0, -model.U0, 0.0])
    if model.l is None:
        return PotentialProfile(breakpoints, values, CONSTANT, OPEN, (-outer, outer))
    return PotentialProfile(breakpoints, values, CONSTANT, HARD_WALL, (-model.wall, model.wall))


def single_well_potential(model):
    """ One well of width D centred at s = 0, open boundaries """
    half = model.D / 2.0
    return PotentialProfile(np.array([-half, half]), np.array([0.0, -model.U0, 0.0]),
                            CONSTANT, OPEN, (-half, half))


def hard_wall_potential(model):
    """ One well on [0, D] between hard walls at +-(l + D/2)

    The walls lie l + D/2 and l - D/2 away from the two well edges, the distances that
    enter the hard-wall quantization condition.
    """
    if model.l is None:
        raise ValueError("Invalid model: hard-wall distance l is not set")
    wall = model.l + model.D / 2.0
    return PotentialProfile(np.array([0.0, model.D]), np.array([0.0, -model.U0, 0.0]),
                            CONSTANT, HARD_WALL, (-wall, wall))
