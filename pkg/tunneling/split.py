import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from potential.params import PhysParams
from spectrum.analytic import solve_single_well
from spectrum.numeric import numeric_spectrum
from spectrum.states import Wavefunction

logger = logging.getLogger(__name__)

WKB = "wkb"
NUMERIC = "numeric"
LANDAU = "landau"


class NoDoubletError(RuntimeError):
    """ Raised when a potential does not hold the two lowest levels as a bound doublet """


class DegenerateCombinationError(ValueError):
    """ Raised when one of the combinations psi(s) +- psi(-s) vanishes """


@dataclass
class SplitResult:
    """ Tunnel splitting of the ground doublet

    Args:
        deltaE (float): Gap E_odd - E_even between the two lowest levels
        omega_cl (float): Frequency of the classical motion inside one well
        omega_res (float): Resonance frequency deltaE / hbar
        method (str): "wkb", "numeric" or "landau"
        p1 (float): Momentum scale hbar k1 of the ground level
        bound_doublet (bool): Whether both levels of the doublet are bound
        diagnostics (dict): Method-specific extras
    """
    deltaE: float
    omega_cl: Optional[float]
    omega_res: float
    method: str
    p1: float
    bound_doublet: bool = True
    diagnostics: dict = field(default_factory=dict)

    @property
    def period(self):
        """ Classical period 2 pi / omega_cl """
        if not self.omega_cl:
            return None
        return 2.0 * np.pi / self.omega_cl

    def to_dict(self):
        return {"deltaE": self.deltaE, "omega_cl": self.omega_cl, "omega_res": self.omega_res,
                "method": self.method, "p1": self.p1, "bound_doublet": self.bound_doublet,
                "diagnostics": dict(self.diagnostics)}


def _params(model, params):
    if params is not None:
        return params
    return model.params if model is not None else PhysParams()


def _ground_k(model):
    return solve_single_well(model)[0].k


def classical_frequency(model, k1, params=None):
    """ Omega = pi hbar |k1| / (m D) """
    params = _params(model, params)
    return float(np.pi * params.hbar * abs(k1) / (params.mass * model.D))


def wkb_split(model, k1=None, params=None):
    """ Quasi-classical splitting deltaE = (hbar^2 |k1| / m D) exp(-|k1| d)

    The action through the barrier reduces to p1 d with the turning points on the inner well
    edges. The exponent with the decay constant q1, the usual barrier-penetration form, is
    kept in the diagnostics next to the one used here.

    Args:
        model (DoubleWellModel): Well width D and barrier width d
        k1 (float): Ground even root; solved from the single well when omitted
        params (PhysParams): Physical constants, the model's own by default

    Returns:
        SplitResult: method "wkb"
    """
    params = _params(model, params)
    if k1 is None:
        k1 = _ground_k(model)
    k1 = abs(float(k1))
    deltaE = params.hbar ** 2 * k1 / (params.mass * model.D) * np.exp(-k1 * model.d)
    q1 = np.sqrt(max(model.k0 ** 2 - k1 ** 2, 0.0))
    return SplitResult(deltaE=float(deltaE),
                       omega_cl=classical_frequency(model, k1, params),
                       omega_res=float(deltaE / params.hbar),
                       method=WKB,
                       p1=float(params.hbar * k1),
                       diagnostics={"k1": k1, "q1": float(q1), "exponent_k": k1 * model.d,
                                    "exponent_q": float(q1 * model.d)})


def landau_split(model, params=None):
    """ Splitting from the overlap formula deltaE = (2 hbar^2 / m) psi0(0) psi0'(0)

    psi0 is the normalized analytic ground state of one isolated well, evaluated at the
    barrier centre, where it decays as B exp(-q1 |s - s_edge|).
    """
    params = _params(model, params)
    ground = solve_single_well(model)[0]
    k, q, D = ground.k, ground.q, model.D
    if q <= 0:
        raise NoDoubletError("Ground level sits at the continuum edge, no tail to overlap")
    edge = np.cos(k * D / 2.0) ** 2
    tail = edge / (D / 2.0 + np.sin(k * D) / (2.0 * k) + edge / q)
    deltaE = 2.0 * params.hbar ** 2 / params.mass * q * tail * np.exp(-q * model.d)
    return SplitResult(deltaE=float(deltaE),
                       omega_cl=classical_frequency(model, k, params),
                       omega_res=float(deltaE / params.hbar),
                       method=LANDAU,
                       p1=float(params.hbar * k),
                       diagnostics={"k1": float(k), "q1": float(q), "tail_amplitude2": float(tail)})


def numeric_split(potential, grid, params=None, model=None, strict=False, check_resolution=True):
    """ Splitting from the two lowest finite-difference levels

    Args:
        potential (PotentialProfile): Symmetric double well
        grid (Grid): Symmetric grid
        params (PhysParams): Physical constants
        model (DoubleWellModel): Optional; supplies the classical frequency for reference
        strict (bool): Raise NoDoubletError when the upper level is not bound
        check_resolution (bool): Passed to the eigensolver

    Returns:
        SplitResult: method "numeric", deltaE = E_odd - E_even
    """
    params = _params(model, params)
    if not potential.is_even():
        raise ValueError("Invalid potential: the double well must be even about s = 0")
    lower, upper = numeric_spectrum(potential, grid, 2, params, check_resolution=check_resolution)
    if lower.energy >= 0:
        raise NoDoubletError(f"No bound level: lowest energy {lower.energy:.6g}")
    bound = upper.energy < 0
    if not bound:
        if strict:
            raise NoDoubletError(f"Upper doublet level is not bound: E = {upper.energy:.6g}")
        logger.warning("Upper doublet level is not bound (E = %.6g); the gap is to the lowest "
                       "continuum state of the grid", upper.energy)
    deltaE = upper.energy - lower.energy
    omega_cl = classical_frequency(model, lower.k, params) if model is not None else None
    return SplitResult(deltaE=float(deltaE),
                       omega_cl=omega_cl,
                       omega_res=float(deltaE / params.hbar),
                       method=NUMERIC,
                       p1=float(params.hbar * lower.k),
                       bound_doublet=bool(bound),
                       diagnostics={"E_even": lower.energy, "E_odd": upper.energy,
                                    "parity_lower": lower.parity, "parity_upper": upper.parity,
                                    "nodes": grid.n})


def symmetrize(psi_left):
    """ Symmetric and antisymmetric combinations [psi(s) +- psi(-s)] / sqrt(2), renormalized

    Args:
        psi_left (Wavefunction): State sampled on a symmetric grid

    Returns:
        Wavefunction: psi+
        Wavefunction: psi-
    """
    if not psi_left.is_symmetric():
        raise ValueError("Invalid grid: symmetrize needs nodes symmetric about s = 0")
    mirrored = psi_left.mirrored().psi
    scale = psi_left.norm()
    combinations = []
    for sign, label in ((1.0, "symmetric"), (-1.0, "antisymmetric")):
        combination = Wavefunction(psi_left.s, (psi_left.psi + sign * mirrored) / np.sqrt(2.0))
        if combination.norm() <= 1e-12 * scale:
            raise DegenerateCombinationError(f"The {label} combination vanishes")
        combinations.append(combination.normalized())
    return tuple(combinations)
