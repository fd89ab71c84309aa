import pytest

from potential import DoubleWellModel, PhysParams, double_well_potential
from scattering import transmission_sweep
from spectrum import default_grid, numeric_spectrum


@pytest.fixture
def params():
    return PhysParams.natural()


@pytest.fixture
def knot():
    """ Knot defaults at rho0 = 1: D = d = 5, kappa = 1/2, U0 = 1/16, C = 5/8 """
    return DoubleWellModel.knot(1.0)


@pytest.fixture
def small_knot():
    """ rho0 = 1/2: D = 2.5, kappa = 1, U0 = 1/4 """
    return DoubleWellModel.knot(0.5)


@pytest.fixture(scope="session")
def table_model():
    """ Nearly merged wells of the transmission table """
    return DoubleWellModel(rho0=0.5, D=2.5, d=0.01, kappa=1.0)


@pytest.fixture(scope="session")
def table_sweep(table_model):
    return transmission_sweep(0.01, 4.0, 4000, double_well_potential(table_model))


@pytest.fixture(scope="session")
def knot_doublet():
    """ Potential, grid and two lowest numeric levels of the knot double well at d = 5 rho0 """
    model = DoubleWellModel.knot(1.0)
    potential = double_well_potential(model)
    grid = default_grid(model)
    return model, potential, grid, numeric_spectrum(potential, grid, 2)
