import logging

import numpy as np
import pytest

from geometry import (CurvatureProfile, circle_curve, curvature_profile, reparametrize_arclength,
                      trefoil_curve)
from potential import (CONSTANT, HARD_WALL, LINEAR, OPEN, DoubleWellModel, PhysParams,
                       PotentialProfile, critical_field, critical_field_bound, dipole_moment,
                       double_well_potential, effective_potential, field_device_potential,
                       hard_wall_potential, max_temperature, single_well_potential, tilt_potential)
from spectrum import default_grid, numeric_spectrum
from dynamics import well_population


class TestParams:
    def test_natural_units(self):
        params = PhysParams.natural()
        assert params.kinetic == 1.0
        assert params.energy(3.0) == 9.0

    def test_physical_electron(self):
        params = PhysParams.physical()
        assert params.charge < 0
        assert params.units == "physical"

    @pytest.mark.parametrize("field, value", [("mass", 0.0), ("hbar", -1.0), ("units", "cgs")])
    def test_invalid(self, field, value):
        with pytest.raises(ValueError):
            PhysParams(**{field: value})

    def test_from_units(self):
        assert PhysParams.from_units("physical") == PhysParams.physical()
        with pytest.raises(ValueError):
            PhysParams.from_units("atomic")


class TestModel:
    def test_knot_defaults(self, knot):
        assert knot.D == 5.0 and knot.d == 5.0
        assert knot.U0 == pytest.approx(1 / 16)
        assert knot.C == pytest.approx(5 / 8)
        assert knot.k0 == pytest.approx(0.25)

    def test_nanobar(self):
        model = DoubleWellModel.nanobar(2.0, d=1.0)
        assert model.D == pytest.approx(np.pi)
        assert model.kappa == 0.5

    def test_invalid_wall_distance(self):
        with pytest.raises(ValueError):
            DoubleWellModel.knot(1.0, l=2.0)

    def test_invalid_barrier(self, knot):
        with pytest.raises(ValueError):
            knot.with_(d=-1.0)

    def test_wall_position(self):
        model = DoubleWellModel.knot(1.0, d=4.0, l=10.0)
        assert model.wall == pytest.approx(2.0 + 2.5 + 10.0)

    def test_to_dict(self, knot):
        data = knot.to_dict()
        assert data["U0"] == knot.U0
        assert data["params"]["units"] == "natural"


class TestProfile:
    def test_double_well_shape(self, knot):
        potential = double_well_potential(knot)
        assert potential.is_even()
        assert potential.evaluate(0.0) == 0.0
        assert potential.evaluate(-5.0) == -knot.U0
        assert potential.evaluate(5.0) == -knot.U0
        assert potential.evaluate(20.0) == 0.0
        assert potential.boundary == OPEN

    def test_merged_wells(self, knot):
        potential = double_well_potential(knot.with_(d=0.0))
        assert len(potential.breakpoints) == 2
        assert potential.evaluate(0.0) == -knot.U0
        assert potential.shortest_feature() == pytest.approx(2 * knot.D)

    def test_walled_double_well(self):
        model = DoubleWellModel.knot(1.0, l=10.0)
        potential = double_well_potential(model)
        assert potential.boundary == HARD_WALL
        assert potential.domain == (-model.wall, model.wall)

    def test_single_and_hard_wall(self):
        model = DoubleWellModel.knot(1.0, l=10.0)
        assert single_well_potential(model).is_even()
        walled = hard_wall_potential(model)
        assert not walled.is_even()
        assert walled.domain == (-12.5, 12.5)

    def test_value_count_checked(self):
        with pytest.raises(ValueError):
            PotentialProfile(np.array([0.0, 1.0]), np.array([0.0, 1.0]), CONSTANT)
        with pytest.raises(ValueError):
            PotentialProfile(np.array([1.0, 0.0]), np.array([0.0, 1.0, 0.0]), CONSTANT)

    def test_cell_average(self, knot):
        potential = double_well_potential(knot)
        nodes = np.array([-2.5, -2.45, -2.4])
        np.testing.assert_allclose(potential.cell_average(nodes), [-knot.U0 / 2, 0.0, 0.0], atol=1e-15)
        inside = np.array([4.0, 4.1, 4.2])
        np.testing.assert_allclose(potential.cell_average(inside), -knot.U0, rtol=1e-10)

    def test_linear_antiderivative(self):
        potential = PotentialProfile(np.array([0.0, 2.0]), np.array([0.0, 4.0]), LINEAR)
        assert potential.antiderivative(2.0) == pytest.approx(4.0)
        assert potential.antiderivative(3.0) == pytest.approx(8.0)
        assert potential.antiderivative(-1.0) == pytest.approx(0.0)

    def test_to_linear_matches(self, knot):
        potential = double_well_potential(knot)
        linear = potential.to_linear()
        s = np.linspace(-12.0, 12.0, 97) + 0.013
        s = s[(s > potential.domain[0]) & (s < potential.domain[1])]
        np.testing.assert_allclose(linear.evaluate(s), potential.evaluate(s))
        assert linear.representation == LINEAR

    def test_mirror(self):
        potential = PotentialProfile(np.array([0.0, 1.0, 3.0]), np.array([0.0, -1.0, 0.5, 0.0]))
        mirrored = potential.mirror()
        s = np.array([-2.5, -0.5, 0.5, 2.0])
        np.testing.assert_array_equal(mirrored.evaluate(-s), potential.evaluate(s))
        assert not potential.is_even()

    def test_round_trip(self, knot):
        potential = double_well_potential(knot)
        again = PotentialProfile.from_dict(potential.to_dict())
        np.testing.assert_array_equal(again.breakpoints, potential.breakpoints)
        assert again.domain == potential.domain

    def test_effective_potential_of_circle(self):
        profile = curvature_profile(circle_curve(2.0, 4096))
        potential = effective_potential(profile)
        np.testing.assert_allclose(potential.values, -0.25 / 4, rtol=1e-4)

    def test_effective_potential_is_attractive(self):
        s = np.linspace(0.0, 10.0, 201)
        kappa = np.where((s > 3.0) & (s < 6.0), np.abs(np.sin(s)), 0.0)
        values = effective_potential(CurvatureProfile(s, kappa)).values
        assert np.all(values <= 0.0)
        assert np.all(values[kappa == 0.0] == 0.0)
        assert np.all(values[kappa > 0.0] < 0.0)

    def test_trefoil_potential_depth(self):
        profile = curvature_profile(reparametrize_arclength(trefoil_curve(4000), 1024))
        potential = effective_potential(profile)
        assert potential.minimum() == pytest.approx(-np.max(profile.kappa) ** 2 / 4, abs=1e-9)


class TestFields:
    def test_zero_field_is_identity(self, small_knot):
        potential = double_well_potential(small_knot)
        assert tilt_potential(potential, 0.0, small_knot.params) is potential

    def test_tilt_ramp(self, small_knot):
        potential = double_well_potential(small_knot)
        tilted = tilt_potential(potential, 0.05, small_knot.params)
        s = np.array([-3.0, -0.4, 0.7, 2.0])
        np.testing.assert_allclose(tilted.evaluate(s) - potential.evaluate(s), 0.05 * s, atol=1e-12)

    def test_tilt_localizes_ground_state(self, small_knot):
        tilted = tilt_potential(double_well_potential(small_knot), 0.05, small_knot.params)
        ground = numeric_spectrum(tilted, default_grid(small_knot), 1)[0]
        P_L, P_R = well_population(ground.psi)
        assert P_L > 0.9

    def test_opposite_tilts_cancel(self, small_knot):
        potential = double_well_potential(small_knot)
        there = tilt_potential(potential, 0.07, small_knot.params)
        back = tilt_potential(there, -0.07, small_knot.params)
        s = np.linspace(-6.0, 6.0, 1201)
        np.testing.assert_allclose(back.evaluate(s), potential.to_linear().evaluate(s), atol=1e-12)

    def test_critical_field_vanishes_at_full_period(self, knot):
        model = knot.with_(D=2 * np.pi, kappa=1.0)
        assert critical_field(model) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("D", [0.5, 2.0, np.pi, 5.0, 9.0, 12.566])
    def test_critical_field_non_negative(self, knot, D):
        for kappa in (0.2, 0.5, 1.0, 1.7):
            assert critical_field(knot.with_(D=D, kappa=kappa)) >= 0.0

    def test_critical_field(self, small_knot):
        assert critical_field(small_knot) == pytest.approx(0.26306, rel=1e-4)
        assert critical_field_bound(small_knot) == pytest.approx(0.4)

    def test_critical_field_above_bound_warns(self, caplog):
        model = DoubleWellModel.knot(0.25)
        with caplog.at_level(logging.WARNING):
            field = critical_field(model)
        assert field > critical_field_bound(model)
        assert "exceeds" in caplog.text

    def test_neutral_carrier(self, small_knot):
        assert critical_field(small_knot, PhysParams.natural(charge=0.0)) == np.inf

    def test_dipole_moment(self, knot):
        assert dipole_moment(knot) == pytest.approx(10.0)
        assert dipole_moment(knot, PhysParams.natural(charge=-1.0)) == pytest.approx(-10.0)

    def test_max_temperature_of_a_nanometre_knot(self):
        model = DoubleWellModel.knot(1e-9, params=PhysParams.physical())
        assert 1.0 < max_temperature(model) < 100.0

    def test_field_device(self, knot):
        potential = field_device_potential(knot, 0.02)
        assert potential.boundary == HARD_WALL
        assert potential.domain == (-knot.D, knot.D)
        assert potential.evaluate(0.0) == -knot.U0
        assert potential.evaluate(knot.D) == pytest.approx(-knot.U0 - 0.02 * knot.D)
        with pytest.raises(ValueError):
            field_device_potential(knot, -0.1)
