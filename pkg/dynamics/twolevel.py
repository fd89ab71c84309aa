import logging
from dataclasses import dataclass
from typing import List

import numpy as np
import torch

from potential.params import PhysParams
from potential.fields import critical_field
from .propagator import Propagator, StepSizeError

logger = logging.getLogger(__name__)

STEP_FRACTION = 0.01
NORM_WARNING = 1e-9


class CriticalFieldError(ValueError):
    """ Raised when a preparation field would push the level out of the well """


@dataclass(frozen=True)
class TwoLevelState:
    """ Amplitudes on the localized states |L> = (1, 0) and |R> = (0, 1) """
    aL: complex
    aR: complex

    @classmethod
    def left(cls):
        return cls(1.0 + 0j, 0j)

    @classmethod
    def right(cls):
        return cls(0j, 1.0 + 0j)

    @classmethod
    def superposition(cls, sign=1):
        """ (|L> + sign |R>) / sqrt(2); sign = +1 is the ground state of the unbiased doublet """
        return cls(complex(1 / np.sqrt(2.0)), complex(sign / np.sqrt(2.0)))

    @property
    def P_L(self):
        return abs(self.aL) ** 2

    @property
    def P_R(self):
        return abs(self.aR) ** 2

    def norm(self):
        return self.P_L + self.P_R

    def to_tensor(self):
        return torch.tensor([self.aL, self.aR], dtype=torch.complex128)


def excited_population(aL, aR):
    """ Population of the antisymmetric (upper) doublet state, |aL - aR|^2 / 2 """
    return np.abs(np.asarray(aL) - np.asarray(aR)) ** 2 / 2.0


@dataclass(frozen=True)
class DriveSpec:
    """ Bias epsilon(t) = bias0 + amp sin(freq t + phase) between the two wells

    Args:
        bias0 (float): Static bias energy, > 0 raises |L>
        amp (float): Drive amplitude in energy units (dipole moment times field amplitude)
        freq (float): Angular frequency
        phase (float): Phase in radians
    """
    bias0: float = 0.0
    amp: float = 0.0
    freq: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.amp < 0:
            raise ValueError(f"Invalid drive amplitude: {self.amp}")
        if self.freq < 0:
            raise ValueError(f"Invalid drive frequency: {self.freq}")

    @classmethod
    def resonant(cls, deltaE, amp, params=PhysParams(), bias0=0.0):
        return cls(bias0=bias0, amp=amp, freq=deltaE / params.hbar)

    def bias(self, t):
        return self.bias0 + self.amp * np.sin(self.freq * t + self.phase)


@dataclass
class TlsTrajectory:
    """ Amplitudes of one or several two-level trajectories on a common time axis

    aL and aR have shape (times, batch).
    """
    t: np.ndarray
    aL: np.ndarray
    aR: np.ndarray

    def __len__(self):
        return len(self.t)

    def __getitem__(self, index):
        """ (t, TwoLevelState) of the first trajectory of the batch """
        return float(self.t[index]), TwoLevelState(complex(self.aL[index, 0]), complex(self.aR[index, 0]))

    @property
    def P_L(self):
        return np.abs(self.aL) ** 2

    @property
    def P_R(self):
        return np.abs(self.aR) ** 2

    @property
    def norm(self):
        return self.P_L + self.P_R

    @property
    def excited(self):
        return excited_population(self.aL, self.aR)

    def final(self, index=0):
        return TwoLevelState(complex(self.aL[-1, index]), complex(self.aR[-1, index]))


class TwoLevelPropagator(Propagator):
    """ Classical fourth-order Runge-Kutta for i hbar d/dt (aL, aR) = H(t) (aL, aR)

    H(t) = [[eps(t)/2, -deltaE/2], [-deltaE/2, -eps(t)/2]]. Several drives are integrated
    at once as a batch; the state is a complex tensor of shape (batch, 2). The norm is not
    renormalized. Without drive the Runge-Kutta step is a fixed matrix and is applied as such.

    Args:
        deltaE (float): Tunnel splitting
        drives (list): DriveSpec per batch entry
        dt (float): Time step
        params (PhysParams): Physical constants
    """

    def __init__(self, deltaE, drives, dt, params=PhysParams(), logging=False, *args, **kwargs):
        super().__init__(dt, params, logging, *args, **kwargs)
        if not deltaE > 0:
            raise ValueError(f"Invalid splitting: {deltaE}")
        self.deltaE = deltaE
        self.drives = list(drives)
        limit = 2.0 * np.pi * params.hbar / deltaE
        for drive in self.drives:
            if drive.freq > 0:
                limit = min(limit, 2.0 * np.pi / drive.freq)
        if dt > STEP_FRACTION * limit:
            raise StepSizeError(f"Invalid dt: {dt} exceeds {STEP_FRACTION} of the shortest period {limit:.6g}")
        self.bias0 = torch.tensor([drive.bias0 for drive in self.drives], dtype=torch.float64)
        self.amp = torch.tensor([drive.amp for drive in self.drives], dtype=torch.float64)
        self.freq = torch.tensor([drive.freq for drive in self.drives], dtype=torch.float64)
        self.phase = torch.tensor([drive.phase for drive in self.drives], dtype=torch.float64)
        self.static = bool(torch.all(self.amp == 0))
        if self.static:
            self.transfer = self._rk4_matrix()

    def hamiltonian(self, t):
        eps = self.bias0 + self.amp * torch.sin(self.freq * t + self.phase)
        H = torch.empty(len(self.drives), 2, 2, dtype=torch.complex128)
        H[:, 0, 0] = eps / 2.0
        H[:, 1, 1] = -eps / 2.0
        H[:, 0, 1] = -self.deltaE / 2.0
        H[:, 1, 0] = -self.deltaE / 2.0
        return H

    def _derivative(self, a, t):
        return -1j / self.params.hbar * (self.hamiltonian(t) @ a.unsqueeze(-1)).squeeze(-1)

    def _rk4_matrix(self):
        A = -1j * self.dt / self.params.hbar * self.hamiltonian(0.0)
        identity = torch.eye(2, dtype=torch.complex128).expand_as(A)
        transfer, term = identity.clone(), identity.clone()
        for order in range(1, 5):
            term = term @ A / order
            transfer = transfer + term
        return transfer

    def step(self, state, t):
        if self.static:
            return (self.transfer @ state.unsqueeze(-1)).squeeze(-1)
        dt = self.dt
        k1 = self._derivative(state, t)
        k2 = self._derivative(state + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = self._derivative(state + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = self._derivative(state + dt * k3, t + dt)
        return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def record(self, state, t):
        # observables are derived from the stacked amplitudes afterwards
        self.times.append(t)
        self.states.append(state)
        if self.logging:
            # batch means
            aL, aR = state[:, 0], state[:, 1]
            self.observables.append({"P_L": (aL.abs() ** 2).mean().item(),
                                     "P_R": (aR.abs() ** 2).mean().item(),
                                     "excited": ((aL - aR).abs() ** 2 / 2.0).mean().item()})
            self.log()

    def trajectory(self):
        amplitudes = torch.stack(self.states).numpy()
        return TlsTrajectory(np.array(self.times), amplitudes[:, :, 0], amplitudes[:, :, 1])


def _steps(t_end, dt):
    if not t_end > 0:
        raise ValueError(f"Invalid end time: {t_end}")
    return max(1, int(round(t_end / dt)))


def tls_evolve(deltaE, drive, initial, t_end, dt, params=PhysParams(), record_every=1, verbose=False,
               logging=False):
    """ Two-level dynamics of the doublet in the localized basis

    Args:
        deltaE (float): Tunnel splitting
        drive (DriveSpec): Static and sinusoidal bias
        initial (TwoLevelState): State at t = 0
        t_end (float): End time (rounded to a whole number of steps)
        dt (float): Time step, at most 0.01 of the tunnelling and drive periods
        params (PhysParams): Physical constants
        logging (bool): Send populations to wandb at every recorded step

    Returns:
        TlsTrajectory: Amplitudes along the trajectory (batch of one)
    """
    propagator = TwoLevelPropagator(deltaE, [drive], dt, params, logging)
    propagator.evolve(initial.to_tensor().unsqueeze(0), _steps(t_end, dt), record_every, verbose)
    trajectory = propagator.trajectory()
    drift = float(np.max(np.abs(trajectory.norm - initial.norm())))
    if drift > NORM_WARNING:
        logger.warning("Two-level norm drift %.3g over %d steps", drift, len(trajectory) - 1)
    return trajectory


def drive_scan(deltaE, freqs, amp, t_end, dt, bias0=0.0, initial=None, params=PhysParams(), verbose=False,
               logging=False):
    """ Peak population of the upper doublet state for several drive frequencies

    All frequencies are integrated together as one batch on a common time step, starting
    from the ground state (|L> + |R>)/sqrt(2) by default.

    Returns:
        np.ndarray: Maximum of |aL - aR|^2 / 2 along each trajectory
    """
    if initial is None:
        initial = TwoLevelState.superposition(+1)
    drives = [DriveSpec(bias0=bias0, amp=amp, freq=freq) for freq in freqs]
    propagator = TwoLevelPropagator(deltaE, drives, dt, params, logging)
    batch = initial.to_tensor().unsqueeze(0).repeat(len(drives), 1)
    propagator.evolve(batch, _steps(t_end, dt), verbose=verbose)
    return propagator.trajectory().excited.max(axis=0)


def prepare_and_release(model, field, params=None):
    """ Initial state after a preparation field is switched off suddenly

    The carrier settles in the well where charge * field * s is lowest: charge * field < 0
    prepares |R>, charge * field > 0 prepares |L>, and no field leaves the ground state
    (|L> + |R>)/sqrt(2).
    """
    params = model.params if params is None else params
    limit = critical_field(model, params)
    if abs(field) > limit:
        raise CriticalFieldError(f"Field {field} exceeds the critical field {limit:.6g}")
    if field == 0 or params.charge == 0:
        return TwoLevelState.superposition(+1)
    if params.charge * field < 0:
        return TwoLevelState.right()
    return TwoLevelState.left()
