import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from potential.params import PhysParams
from spectrum.numeric import hamiltonian_diagonals
from spectrum.states import Wavefunction
from .population import well_population
from .propagator import Propagator, StepSizeError

logger = logging.getLogger(__name__)

NORM_TOL = 1e-6
POTENTIAL_STEP = 0.1


@dataclass
class WavepacketTrajectory:
    """ Well populations and norm along a wavepacket evolution """
    t: np.ndarray
    P_L: np.ndarray
    P_R: np.ndarray
    norm: np.ndarray

    def __len__(self):
        return len(self.t)

    def rows(self):
        return np.column_stack([self.t, self.P_L, self.P_R, self.norm])


class CrankNicolsonPropagator(Propagator):
    """ Crank-Nicolson stepping of i hbar psi_t = H psi on a uniform grid

    (1 + i dt H / 2 hbar) psi(t + dt) = (1 - i dt H / 2 hbar) psi(t), with the finite-difference
    Hamiltonian of the eigensolver and zero boundary values. The left-hand matrix is
    factorized once.

    Args:
        potential (PotentialProfile): Static potential
        grid (Grid): Uniform grid
        dt (float): Time step, dt * max|V| <= 0.1 hbar
        params (PhysParams): Physical constants
        split_point (float): Boundary between the wells for P_L and P_R
    """

    def __init__(self, potential, grid, dt, params=PhysParams(), split_point=0.0, logging=False,
                 *args, **kwargs):
        super().__init__(dt, params, logging, *args, **kwargs)
        if dt * potential.maximum_magnitude() > POTENTIAL_STEP * params.hbar:
            raise StepSizeError(
                f"Invalid dt: {dt} * max|V| = {dt * potential.maximum_magnitude():.3g} exceeds "
                f"{POTENTIAL_STEP} hbar")
        self.nodes = grid.nodes
        self.split_point = split_point
        diagonal, off_diagonal = hamiltonian_diagonals(potential, grid, params)
        H = sparse.diags([off_diagonal, diagonal, off_diagonal], [-1, 0, 1], format="csc",
                         dtype=complex)
        identity = sparse.identity(len(diagonal), dtype=complex, format="csc")
        tau = 0.5j * dt / params.hbar
        self.explicit = (identity - tau * H).tocsr()
        self.implicit = splu((identity + tau * H).tocsc())

    def step(self, state, t):
        interior = self.implicit.solve(self.explicit @ state[1:-1])
        return np.concatenate([[0j], interior, [0j]])

    def observe(self, state, t):
        P_L, P_R = well_population(Wavefunction(self.nodes, state), self.split_point)
        return {"P_L": P_L, "P_R": P_R, "norm": P_L + P_R}

    def record(self, state, t):
        # populations only, grid states are not kept
        self.times.append(t)
        self.observables.append(self.observe(state, t))
        if self.logging:
            self.log()

    def trajectory(self):
        return WavepacketTrajectory(np.array(self.times),
                                    np.array([o["P_L"] for o in self.observables]),
                                    np.array([o["P_R"] for o in self.observables]),
                                    np.array([o["norm"] for o in self.observables]))


def cn_evolve(potential, psi0, grid, dt, steps, params=PhysParams(), split_point=0.0,
              record_every=1, verbose=False, logging=False):
    """ Wavepacket evolution with well populations

    Args:
        potential (PotentialProfile): Static potential
        psi0 (Wavefunction): Normalized initial state on the grid nodes
        grid (Grid): Uniform grid
        dt (float): Time step
        steps (int): Number of steps
        params (PhysParams): Physical constants

    Returns:
        WavepacketTrajectory: Rows (t, P_L, P_R, norm)
    """
    if len(psi0.s) != grid.n or not np.allclose(psi0.s, grid.nodes):
        raise ValueError("Invalid initial state: not sampled on the grid nodes")
    norm = psi0.norm()
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"Invalid initial state: norm {norm:.8g} is not 1")
    propagator = CrankNicolsonPropagator(potential, grid, dt, params, split_point, logging)
    psi = np.asarray(psi0.psi, dtype=complex).copy()
    psi[0] = psi[-1] = 0.0
    propagator.evolve(psi, steps, record_every, verbose)
    trajectory = propagator.trajectory()
    drift = float(np.max(np.abs(trajectory.norm - trajectory.norm[0])))
    if drift > 1e-9:
        logger.warning("Wavepacket norm drift %.3g over %d steps", drift, steps)
    return trajectory


def doublet_wavepacket(states, sign=1):
    """ (psi_even + sign psi_odd) / sqrt(2) from the two lowest levels

    With both lowest lobes positive, sign = +1 localizes in the left well.

    Args:
        states (list): The two lowest BoundState levels, with wavefunctions

    Returns:
        Wavefunction: Normalized combination
    """
    if len(states) < 2 or states[0].psi is None or states[1].psi is None:
        raise ValueError("Invalid doublet: two levels with wavefunctions are required")
    even, odd = states[0].psi, states[1].psi
    return Wavefunction(even.s, (even.psi + sign * odd.psi) / np.sqrt(2.0)).normalized()


def oscillation_period(t, signal):
    """ Period from the upward crossings of the signal through its mean

    Crossing times are located by linear interpolation; at least two are needed.
    """
    t = np.asarray(t, dtype=float)
    centred = np.asarray(signal, dtype=float) - np.mean(signal)
    upward = np.nonzero((centred[:-1] < 0) & (centred[1:] >= 0))[0]
    if len(upward) < 2:
        raise ValueError(f"Invalid signal: {len(upward)} upward crossings, at least 2 are needed")
    fraction = -centred[upward] / (centred[upward + 1] - centred[upward])
    crossings = t[upward] + fraction * (t[upward + 1] - t[upward])
    return float(np.mean(np.diff(crossings)))
