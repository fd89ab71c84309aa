from dataclasses import dataclass, asdict


# CODATA 2018, SI
HBAR_SI = 1.054571817e-34  # J.s
ELECTRON_MASS_SI = 9.1093837015e-31  # kg
ELEMENTARY_CHARGE_SI = 1.602176634e-19  # C
BOLTZMANN_SI = 1.380649e-23  # J/K


@dataclass(frozen=True)
class PhysParams:
    """ Physical constants of the particle moving along the wire

    The defaults are the natural unit system hbar = 1, mass = 1/2, so that hbar^2/2m = 1
    and an energy E corresponds to the wave number q = sqrt(E).

    Args:
        hbar (float): Reduced Planck constant
        mass (float): Effective mass of the particle
        charge (float): Charge of the particle (signed)
        boltzmann (float): Boltzmann constant
        units (str): Label of the unit system, "natural" or "physical"
    """
    hbar: float = 1.0
    mass: float = 0.5
    charge: float = 1.0
    boltzmann: float = 1.0
    units: str = "natural"

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"Invalid hbar: {self.hbar}")
        if not self.mass > 0:
            raise ValueError(f"Invalid mass: {self.mass}")
        if not self.boltzmann > 0:
            raise ValueError(f"Invalid boltzmann constant: {self.boltzmann}")
        if self.units not in ("natural", "physical"):
            raise ValueError(f"Invalid unit system: {self.units}")

    @classmethod
    def natural(cls, charge=1.0):
        return cls(charge=charge)

    @classmethod
    def physical(cls, charge_sign=-1):
        """ SI constants for an electron (charge_sign=-1) or a hole (charge_sign=+1) """
        return cls(hbar=HBAR_SI, mass=ELECTRON_MASS_SI,
                   charge=charge_sign * ELEMENTARY_CHARGE_SI,
                   boltzmann=BOLTZMANN_SI, units="physical")

    @classmethod
    def from_units(cls, units):
        if units == "natural":
            return cls.natural()
        if units == "physical":
            return cls.physical()
        raise ValueError(f"Invalid unit system: {units}")

    @property
    def kinetic(self):
        """ hbar^2 / 2m, the prefactor of the kinetic energy """
        return self.hbar ** 2 / (2.0 * self.mass)

    def energy(self, q):
        """ Free-particle energy of wave number q """
        return self.kinetic * q ** 2

    def to_dict(self):
        return asdict(self)
