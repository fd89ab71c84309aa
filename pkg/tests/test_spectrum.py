import numpy as np
import pytest

from potential import (CONSTANT, HARD_WALL, DoubleWellModel, PotentialProfile, double_well_potential,
                       field_device_potential, hard_wall_potential, single_well_potential)
from spectrum import (EVEN, NO_PARITY, ODD, Grid, GridResolutionError, default_grid, even_residual,
                      numeric_spectrum, odd_residual, solve_hard_wall, solve_single_well)


def well_with_parameter(C, kappa=0.5):
    """ Single-well model of parameter C = kappa D / 4 """
    return DoubleWellModel(rho0=1.0, D=4.0 * C / kappa, d=1.0, kappa=kappa)


class TestSingleWell:
    def test_knot_has_one_even_level(self, knot):
        states = solve_single_well(knot)
        assert len(states) == 1
        assert states[0].parity == EVEN
        assert states[0].energy / knot.U0 == pytest.approx(-0.26, abs=0.01)

    def test_root_satisfies_condition(self, knot):
        ground = solve_single_well(knot)[0]
        x = ground.k * knot.D / 2.0
        assert abs(even_residual(x, knot.C)) < 1e-9

    def test_energy_identities(self, knot):
        ground = solve_single_well(knot)[0]
        assert ground.k ** 2 + ground.q ** 2 == pytest.approx(knot.k0 ** 2, rel=1e-12)
        assert ground.energy == pytest.approx(-ground.q ** 2, rel=1e-10)
        assert ground.q == pytest.approx(0.1279, abs=5e-4)
        assert not ground.threshold

    def test_wide_well_counts(self):
        model = well_with_parameter(4.0, kappa=2.0)
        states = solve_single_well(model)
        parities = [state.parity for state in states]
        assert parities.count(EVEN) == 2
        assert parities.count(ODD) == 1
        for state in states:
            x = state.k * model.D / 2.0
            residual = even_residual if state.parity == EVEN else odd_residual
            assert abs(residual(x, 4.0)) < 1e-8

    def test_parity_alternates(self):
        model = well_with_parameter(6.0)
        analytic = solve_single_well(model)
        assert [state.parity for state in analytic] == [EVEN, ODD, EVEN, ODD]
        numeric = numeric_spectrum(single_well_potential(model), Grid.symmetric(200.0, 6001), 4)
        assert [state.parity for state in numeric] == [EVEN, ODD, EVEN, ODD]
        for a, b in zip(analytic, numeric):
            assert b.energy == pytest.approx(a.energy, abs=1e-4)

    def test_numeric_matches_at_half_radius(self, small_knot):
        analytic = solve_single_well(small_knot)[0]
        numeric = numeric_spectrum(single_well_potential(small_knot), Grid.symmetric(40.0, 4000), 1)[0]
        assert numeric.energy == pytest.approx(analytic.energy, rel=1e-3)
        assert numeric.parity == EVEN


class TestHardWall:
    def test_requires_wall(self, knot):
        with pytest.raises(ValueError):
            solve_hard_wall(knot)

    def test_distant_walls_recover_open_well(self):
        model = DoubleWellModel.knot(1.0, l=250.0)
        walled = solve_hard_wall(model)
        open_well = solve_single_well(model)
        assert len(walled) == len(open_well) == 1
        assert walled[0].energy == pytest.approx(open_well[0].energy, rel=1e-6)

    def test_matches_numeric(self):
        model = DoubleWellModel.knot(1.0, l=25.0)
        analytic = solve_hard_wall(model)[0]
        numeric = numeric_spectrum(hard_wall_potential(model), Grid(-27.5, 27.5, 4000), 1)[0]
        assert numeric.energy == pytest.approx(analytic.energy, rel=2e-3)
        assert numeric.parity == NO_PARITY

    def test_walls_raise_the_level(self):
        near = solve_hard_wall(DoubleWellModel.knot(1.0, l=8.0))[0]
        far = solve_hard_wall(DoubleWellModel.knot(1.0, l=40.0))[0]
        assert near.energy > far.energy


class TestNumeric:
    @staticmethod
    def box(length):
        return PotentialProfile(np.array([]), np.array([0.0]), CONSTANT, HARD_WALL, (0.0, length))

    def test_infinite_well(self):
        length = 10.0
        states = numeric_spectrum(self.box(length), Grid(0.0, length, 2000), 3)
        for n, state in enumerate(states, start=1):
            assert state.energy == pytest.approx((n * np.pi / length) ** 2, rel=1e-3)

    def test_refinement_raises_the_level(self):
        energies = [numeric_spectrum(self.box(1.0), Grid(0.0, 1.0, n), 1)[0].energy
                    for n in (100, 200, 400)]
        assert energies[0] < energies[1] < energies[2] < np.pi ** 2

    def test_coarse_grid_rejected(self, knot):
        with pytest.raises(GridResolutionError):
            numeric_spectrum(double_well_potential(knot), Grid.symmetric(20.0, 40))

    def test_coarse_grid_allowed_when_unchecked(self, knot):
        states = numeric_spectrum(double_well_potential(knot), Grid.symmetric(20.0, 40),
                                  check_resolution=False)
        assert len(states) == 2

    def test_grid_must_end_on_walls(self):
        model = DoubleWellModel.knot(1.0, l=10.0)
        with pytest.raises(ValueError, match="walls"):
            numeric_spectrum(double_well_potential(model), Grid.symmetric(16.0, 2000))

    def test_invalid_state_count(self, knot):
        with pytest.raises(ValueError):
            numeric_spectrum(double_well_potential(knot), default_grid(knot), 0)

    def test_default_grid(self, knot):
        grid = default_grid(knot)
        assert grid.is_symmetric()
        assert grid.s_max > knot.d / 2 + knot.D + 200.0
        assert knot.D / grid.spacing >= 16

    def test_default_grid_ends_on_walls(self):
        model = DoubleWellModel.knot(1.0, l=10.0)
        grid = default_grid(model)
        assert grid.s_max == model.wall

    def test_doublet_normalized_and_oriented(self, knot_doublet):
        _, _, grid, (ground, excited) = knot_doublet
        assert ground.psi.norm() == pytest.approx(1.0, abs=1e-12)
        assert excited.psi.norm() == pytest.approx(1.0, abs=1e-12)
        assert ground.parity == EVEN
        assert excited.parity == ODD
        left = np.searchsorted(grid.nodes, -5.0)
        right = np.searchsorted(grid.nodes, 5.0)
        assert ground.psi.psi[left] > 0 and ground.psi.psi[right] > 0
        assert excited.psi.psi[left] > 0 and excited.psi.psi[right] < 0

    def test_doublet_straddles_single_level(self, knot, knot_doublet):
        _, _, _, (ground, excited) = knot_doublet
        single = solve_single_well(knot)[0].energy
        assert ground.energy < single < excited.energy < 0.0

    def test_field_device_split_shrinks_with_field(self, knot):
        grid = Grid(-knot.D, knot.D, 2001)
        splits = []
        for field in (0.0, 0.01, 0.02, 0.04, 0.08):
            lower, upper = numeric_spectrum(field_device_potential(knot, field), grid, 2)
            assert lower.parity == EVEN and upper.parity == ODD
            splits.append(upper.energy - lower.energy)
        assert splits[0] == pytest.approx(3 * np.pi ** 2 / (2 * knot.D) ** 2, rel=1e-3)
        assert all(a > b > 0 for a, b in zip(splits, splits[1:]))
