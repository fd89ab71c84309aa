import logging

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import eigh_tridiagonal

from potential.params import PhysParams
from potential.profile import CONSTANT, HARD_WALL
from .analytic import solve_single_well
from .states import Grid, Wavefunction, BoundState, EVEN, ODD, NO_PARITY

logger = logging.getLogger(__name__)

NODES_PER_FEATURE = 8
PARITY_THRESHOLD = 0.9


class GridResolutionError(ValueError):
    """ Raised when the grid cannot resolve the shortest feature of the potential """


def check_grid(potential, grid, nodes_per_feature=NODES_PER_FEATURE):
    """ Validate a grid against a potential

    Hard-wall profiles must have their walls on the grid ends, and every interval of a
    piecewise-constant profile must hold at least nodes_per_feature grid spacings.
    """
    if potential.boundary == HARD_WALL:
        scale = max(1.0, abs(grid.s_min), abs(grid.s_max))
        if (abs(grid.s_min - potential.domain[0]) > 1e-9 * scale
                or abs(grid.s_max - potential.domain[1]) > 1e-9 * scale):
            raise ValueError(
                f"Invalid grid: [{grid.s_min}, {grid.s_max}] does not end on the walls {potential.domain}")
    if potential.representation == CONSTANT:
        feature = potential.shortest_feature()
        if feature / grid.spacing < nodes_per_feature:
            raise GridResolutionError(
                f"Grid too coarse: spacing {grid.spacing:.3g} gives {feature / grid.spacing:.2f} "
                f"nodes over the shortest feature {feature:.3g} (needs {nodes_per_feature})")


def hamiltonian_diagonals(potential, grid, params=PhysParams()):
    """ Three-point finite-difference Hamiltonian on the interior nodes

    The wavefunction vanishes on both grid ends. The potential enters through its cell
    averages, so steps need not sit on nodes.

    Returns:
        np.ndarray: Diagonal (n - 2 entries)
        np.ndarray: Off-diagonal (n - 3 entries)
    """
    h = grid.spacing
    interior = grid.nodes[1:-1]
    hop = params.kinetic / h ** 2
    diagonal = 2.0 * hop + potential.cell_average(interior)
    off_diagonal = np.full(len(interior) - 1, -hop)
    return diagonal, off_diagonal


def classify_parity(psi, grid, threshold=PARITY_THRESHOLD):
    """ Parity from the overlap <psi(s)|psi(-s)> of a normalized state on a symmetric grid """
    overlap = trapezoid(psi * psi[::-1], grid.nodes)
    if overlap > threshold:
        return EVEN
    if overlap < -threshold:
        return ODD
    return NO_PARITY


def _orient(psi, rel=1e-3):
    # leftmost lobe positive
    first = np.argmax(np.abs(psi) > rel * np.max(np.abs(psi)))
    return -psi if psi[first] < 0 else psi


def numeric_spectrum(potential, grid, n_states=2, params=PhysParams(), check_resolution=True):
    """ Lowest eigenpairs of -(hbar^2/2m) psi'' + V psi = E psi on a uniform grid

    Args:
        potential (PotentialProfile): Potential to solve
        grid (Grid): Uniform grid, zero boundary values on both ends
        n_states (int): Number of levels to return
        params (PhysParams): Physical constants
        check_resolution (bool): Reject grids with fewer than 8 nodes per shortest feature

    Returns:
        list: BoundState levels with normalized wavefunctions, lowest first
    """
    if n_states < 1 or n_states > grid.n - 2:
        raise ValueError(f"Invalid state count: {n_states}")
    if check_resolution:
        check_grid(potential, grid)
    diagonal, off_diagonal = hamiltonian_diagonals(potential, grid, params)
    energies, vectors = eigh_tridiagonal(diagonal, off_diagonal, select="i",
                                         select_range=(0, n_states - 1))
    nodes = grid.nodes
    symmetric = potential.is_even() and grid.is_symmetric()
    depth = potential.minimum()
    states = []
    for energy, vector in zip(energies, vectors.T):
        psi = np.zeros(grid.n)
        psi[1:-1] = vector
        psi = _orient(psi / np.sqrt(trapezoid(psi ** 2, nodes)))
        parity = classify_parity(psi, grid) if symmetric else NO_PARITY
        q = np.sqrt(max(-energy, 0.0) / params.kinetic)
        k = np.sqrt(max(energy - depth, 0.0) / params.kinetic)
        states.append(BoundState(k=float(k), q=float(q), energy=float(energy), parity=parity,
                                 psi=Wavefunction(nodes, psi)))
    logger.debug("Numeric spectrum on %d nodes: %s", grid.n, [s.energy for s in states])
    return states


def default_grid(model, margin=30.0, min_nodes=4000,
                 nodes_per_feature=NODES_PER_FEATURE):
    """ Grid for the double well of a model

    Open wires use [-(d/2 + D + margin/q1), +same] with q1 the decay constant of the
    analytic single-well ground level; walled wires end on the walls. The node count
    meets the resolution rule with a factor two to spare.
    """
    if model.l is not None:
        half = model.wall
    else:
        ground = solve_single_well(model)[0]
        half = model.d / 2.0 + model.D + margin / ground.q
    feature = min(model.D, model.d) if model.d > 0 else model.D
    spacing = feature / (2.0 * nodes_per_feature)
    n = max(min_nodes, int(np.ceil(2.0 * half / spacing)) + 1)
    return Grid.symmetric(half, n)
