import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
import torch
from tqdm import trange

from potential.params import PhysParams
from potential.profile import CONSTANT, OPEN

logger = logging.getLogger(__name__)

BRANCH_TOL = 1e-14
BRANCH_NUDGE = 1e-12
BATCH_SIZE = 1024


@dataclass(frozen=True)
class TransmissionPoint:
    """ Transmitted over incident probability current at wave number q (E = hbar^2 q^2 / 2m) """
    q: float
    T: float
    R: float = 0.0


@dataclass
class TransmissionSweep:
    """ Transmission on a sorted set of wave numbers, with the potential it was computed for """
    points: List[TransmissionPoint]
    potential: object = None
    params: PhysParams = field(default_factory=PhysParams)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, index):
        return self.points[index]

    @property
    def q(self):
        return np.array([point.q for point in self.points])

    @property
    def T(self):
        return np.array([point.T for point in self.points])

    @property
    def R(self):
        return np.array([point.R for point in self.points])


def _check_potential(potential):
    if potential.representation != CONSTANT:
        raise ValueError(f"Invalid representation: {potential.representation} (needs piecewise-constant)")
    if potential.boundary != OPEN:
        raise ValueError(f"Invalid boundary: {potential.boundary} (needs open leads)")


def _nudge(q, potential, params):
    """ Move wave numbers off the branch points q^2 = V_j / (hbar^2/2m) """
    thresholds = potential.values / params.kinetic
    gap = np.abs(q[:, None] ** 2 - thresholds[None, :])
    close = np.any(gap < BRANCH_TOL * np.maximum(1.0, q[:, None] ** 2), axis=1)
    if np.any(close):
        logger.warning("Nudged %d wave numbers off a region threshold by %.0e", int(close.sum()), BRANCH_NUDGE)
        q = np.where(close, q + BRANCH_NUDGE, q)
    return q


def transfer_amplitudes(q, potential, params=PhysParams()):
    """ Transmission and reflection amplitudes for a batch of wave numbers

    In region j the wave is A_j exp(i K_j (s - s_j)) + B_j exp(-i K_j (s - s_j)), with
    K_j = sqrt(q^2 - V_j / (hbar^2/2m)) (imaginary in classically forbidden regions) and s_j
    the left end of the region. Value and derivative are matched at each breakpoint; the
    product is renormalized by its largest entry after each interface, the log of the
    scale being tracked.

    Args:
        q (np.ndarray): Incident wave numbers (> 0)
        potential (PotentialProfile): Piecewise-constant profile with open leads
        params (PhysParams): Physical constants

    Returns:
        torch.Tensor: t, transmission amplitudes (complex128)
        torch.Tensor: r, reflection amplitudes (complex128)
        torch.Tensor: K, wave numbers of every region, shape (len(q), regions)
    """
    _check_potential(potential)
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if np.any(q <= 0):
        raise ValueError(f"Invalid wave number: {q[q <= 0][0]}")
    q = _nudge(q, potential, params)

    ### WAVE NUMBERS PER REGION ###
    squared = torch.as_tensor(q[:, None] ** 2 - potential.values[None, :] / params.kinetic,
                              dtype=torch.complex128)
    K = torch.sqrt(squared)
    widths = np.concatenate([[0.0], np.diff(potential.breakpoints)])
    widths = torch.as_tensor(widths, dtype=torch.complex128)

    ### PRODUCT OVER INTERFACES ###
    batch = len(q)
    M = torch.eye(2, dtype=torch.complex128).repeat(batch, 1, 1)
    log_scale = torch.zeros(batch, dtype=torch.float64)
    for j in range(len(potential.breakpoints)):
        ratio = K[:, j] / K[:, j + 1]
        phase = torch.exp(1j * K[:, j] * widths[j])
        step = torch.empty(batch, 2, 2, dtype=torch.complex128)
        step[:, 0, 0] = 0.5 * (1 + ratio) * phase
        step[:, 0, 1] = 0.5 * (1 - ratio) / phase
        step[:, 1, 0] = 0.5 * (1 - ratio) * phase
        step[:, 1, 1] = 0.5 * (1 + ratio) / phase
        M = step @ M
        scale = M.abs().flatten(1).max(dim=1).values
        M = M / scale[:, None, None]
        log_scale = log_scale + torch.log(scale)

    ### AMPLITUDES ###
    # det M = K_0 / K_N before renormalization
    t = (K[:, 0] / K[:, -1]) / M[:, 1, 1] * torch.exp(-log_scale)
    r = -M[:, 1, 0] / M[:, 1, 1]
    return t, r, K


def _currents(q, potential, params):
    t, r, K = transfer_amplitudes(q, potential, params)
    incoming, outgoing = K[:, 0].real, K[:, -1].real
    T = t.abs() ** 2 * outgoing / incoming
    R = r.abs() ** 2
    return T.numpy(), R.numpy()


def transmission(q, potential, params=PhysParams()):
    """ Ratio of transmitted to incident probability current at one wave number

    Returns:
        TransmissionPoint: T and R = |r|^2, with T + R = 1 for open real leads
    """
    if not q > 0:
        raise ValueError(f"Invalid wave number: {q}")
    T, R = _currents(np.array([q], dtype=float), potential, params)
    return TransmissionPoint(q=float(q), T=float(T[0]), R=float(R[0]))


def transmission_sweep(q_min, q_max, n, potential, params=PhysParams(), verbose=False,
                       batch_size=BATCH_SIZE):
    """ Transmission on n uniformly spaced wave numbers in [q_min, q_max]

    The wave numbers are processed in batches of batch_size transfer-matrix products.

    Returns:
        TransmissionSweep: Points sorted by q, carrying the potential for resonance refinement
    """
    if not 0 < q_min < q_max:
        raise ValueError(f"Invalid sweep range: [{q_min}, {q_max}]")
    if n < 2:
        raise ValueError(f"Invalid sweep size: {n}")
    _check_potential(potential)
    q = np.linspace(q_min, q_max, n)
    n_batches = int(np.ceil(n / batch_size))
    pbar = trange(n_batches, desc="Transmission") if verbose else range(n_batches)
    T, R = [], []
    for i in pbar:
        T_batch, R_batch = _currents(q[i * batch_size:(i + 1) * batch_size], potential, params)
        T.append(T_batch)
        R.append(R_batch)
    T, R = np.concatenate(T), np.concatenate(R)
    points = [TransmissionPoint(q=float(a), T=float(b), R=float(c)) for a, b, c in zip(q, T, R)]
    return TransmissionSweep(points, potential, params)
