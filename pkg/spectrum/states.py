from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid


EVEN = "even"
ODD = "odd"
NO_PARITY = "none"


@dataclass(frozen=True)
class Grid:
    """ Uniform grid on [s_min, s_max] with n nodes, both ends included

    Args:
        s_min (float): Left end
        s_max (float): Right end
        n (int): Node count (>= 16)
    """
    s_min: float
    s_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise ValueError(f"Invalid node count: {self.n}")
        if not self.s_max > self.s_min:
            raise ValueError(f"Invalid grid ends: [{self.s_min}, {self.s_max}]")

    @property
    def spacing(self):
        return (self.s_max - self.s_min) / (self.n - 1)

    @property
    def nodes(self):
        return np.linspace(self.s_min, self.s_max, self.n)

    def is_symmetric(self, tol=1e-12):
        return abs(self.s_min + self.s_max) <= tol * max(abs(self.s_min), abs(self.s_max))

    @classmethod
    def symmetric(cls, half_width, n):
        return cls(-half_width, half_width, n)


@dataclass(frozen=True)
class Wavefunction:
    """ Wavefunction sampled on a set of nodes """
    s: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        psi = np.asarray(self.psi)
        if s.shape != psi.shape or s.ndim != 1:
            raise ValueError(f"Invalid wavefunction: s {s.shape} and psi {psi.shape} differ")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "psi", psi)

    def norm(self):
        return float(trapezoid(np.abs(self.psi) ** 2, self.s))

    def normalized(self):
        return Wavefunction(self.s, self.psi / np.sqrt(self.norm()))

    def is_symmetric(self, tol=1e-12):
        scale = max(1.0, float(np.max(np.abs(self.s))))
        return bool(np.allclose(self.s, -self.s[::-1], rtol=0, atol=tol * scale))

    def mirrored(self):
        """ psi(-s) on the same nodes (requires a symmetric grid) """
        return Wavefunction(self.s, self.psi[::-1].copy())


@dataclass(frozen=True)
class BoundState:
    """ One bound level

    Args:
        k (float): Wave number inside the well
        q (float): Decay constant outside, E = -(hbar^2/2m) q^2
        energy (float): Energy of the level
        parity (str): "even", "odd" or "none"
        psi (Wavefunction): Optional sampled wavefunction
        threshold (bool): Whether the level sits at the continuum edge (q^2 < 1e-14)
    """
    k: float
    q: float
    energy: float
    parity: str = NO_PARITY
    psi: Optional[Wavefunction] = None
    threshold: bool = False

    def to_dict(self):
        return {"k": float(self.k), "q": float(self.q), "energy": float(self.energy),
                "parity": self.parity, "threshold": bool(self.threshold)}
