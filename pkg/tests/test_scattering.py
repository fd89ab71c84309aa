import logging

import numpy as np
import pytest

from potential import HARD_WALL, PotentialProfile, double_well_potential
from scattering import (TransmissionSweep, find_resonances, ramsauer_resonances, transfer_amplitudes,
                        transmission, transmission_sweep)

TABLE = [0.38, 1.15, 1.81, 2.46, 3.06, 3.74]
RAMSAUER = [0.378, 1.150, 1.813, 2.458, 3.095, 3.728]


@pytest.fixture
def lopsided():
    return PotentialProfile(np.array([0.0, 1.0, 3.0]), np.array([0.0, -1.0, 0.5, 0.0]))


class TestTransmission:
    def test_free_wire_is_transparent(self):
        flat = PotentialProfile(np.array([-1.0, 1.0]), np.array([0.0, 0.0, 0.0]))
        for q in (0.1, 1.0, 7.0):
            point = transmission(q, flat)
            assert point.T == pytest.approx(1.0, abs=1e-12)
            assert point.R == pytest.approx(0.0, abs=1e-12)

    def test_first_resonance_and_dip(self, table_model):
        potential = double_well_potential(table_model)
        assert transmission(0.38, potential).T >= 0.999
        assert transmission(0.7, potential).T < 0.999

    def test_current_conservation(self, table_sweep):
        np.testing.assert_allclose(table_sweep.T + table_sweep.R, 1.0, atol=1e-9)
        assert np.all(table_sweep.T <= 1.0 + 1e-9)

    def test_mirror_symmetry(self, lopsided):
        forward = transmission_sweep(0.3, 1.7, 3, lopsided).T
        backward = transmission_sweep(0.3, 1.7, 3, lopsided.mirror()).T
        np.testing.assert_allclose(forward, backward, atol=1e-12)
        assert len(forward) == 3

    def test_high_energy_limit(self, table_model):
        assert transmission(50.0, double_well_potential(table_model)).T > 0.9999

    def test_amplitudes_batch(self, lopsided):
        t, r, K = transfer_amplitudes(np.array([0.5, 1.0]), lopsided)
        assert t.shape == r.shape == (2,)
        assert K.shape == (2, 4)

    def test_branch_point_nudged(self, caplog):
        barrier = PotentialProfile(np.array([0.0, 1.0]), np.array([0.0, 0.25, 0.0]))
        with caplog.at_level(logging.WARNING):
            point = transmission(0.5, barrier)
        assert "Nudged" in caplog.text
        assert np.isfinite(point.T)
        assert 0.0 < point.T < 1.0

    def test_invalid_inputs(self, table_model):
        potential = double_well_potential(table_model)
        with pytest.raises(ValueError):
            transmission(0.0, potential)
        with pytest.raises(ValueError):
            transmission(1.0, potential.to_linear())
        with pytest.raises(ValueError):
            transmission(1.0, PotentialProfile(np.array([0.0, 1.0]), np.array([0.0, -1.0, 0.0]),
                                               boundary=HARD_WALL, domain=(-2.0, 2.0)))
        with pytest.raises(ValueError):
            transmission_sweep(2.0, 1.0, 10, potential)
        with pytest.raises(ValueError):
            transmission_sweep(0.1, 1.0, 1, potential)

    def test_batches_agree(self, table_model):
        potential = double_well_potential(table_model)
        whole = transmission_sweep(0.1, 2.0, 50, potential)
        batched = transmission_sweep(0.1, 2.0, 50, potential, batch_size=7)
        np.testing.assert_allclose(whole.T, batched.T, rtol=0, atol=1e-12)


class TestResonances:
    def test_table(self, table_sweep):
        found = find_resonances(table_sweep)
        assert len(found) == 6
        for q, expected in zip(found, TABLE):
            assert q == pytest.approx(expected, abs=0.04 if expected == 3.06 else 0.03)

    def test_ramsauer_oracle(self, table_sweep):
        found = find_resonances(table_sweep)
        oracle = ramsauer_resonances(5.01, 0.25, 6)
        np.testing.assert_allclose(oracle, RAMSAUER, atol=2e-3)
        np.testing.assert_allclose(found, oracle, atol=0.02)

    def test_count_matches_oracle(self, table_sweep):
        oracle = [q for q in ramsauer_resonances(5.01, 0.25, 10) if q <= 4.0]
        assert len(find_resonances(table_sweep)) == len(oracle)

    def test_deeper_wells_shift_upward(self, table_model):
        deeper = double_well_potential(table_model.with_(kappa=2.0))
        found = find_resonances(transmission_sweep(0.01, 4.0, 4000, deeper))
        assert found[0] > TABLE[0]
        assert found[0] == pytest.approx(ramsauer_resonances(5.01, 1.0, 6)[0], abs=0.02)

    def test_flat_sweep_has_no_resonances(self):
        flat = PotentialProfile(np.array([-1.0, 1.0]), np.array([0.0, 0.0, 0.0]))
        assert find_resonances(transmission_sweep(0.05, 3.0, 200, flat)) == []

    def test_unrefined_points(self, table_sweep, caplog):
        with caplog.at_level(logging.WARNING):
            found = find_resonances(list(table_sweep.points))
        assert "not refined" in caplog.text
        np.testing.assert_allclose(found, RAMSAUER, atol=0.02)

    def test_invalid_sweeps(self, table_sweep):
        with pytest.raises(ValueError):
            find_resonances([])
        with pytest.raises(ValueError):
            find_resonances(TransmissionSweep(list(table_sweep.points)[::-1]))

    def test_shallow_well_has_no_low_resonance(self):
        assert ramsauer_resonances(5.01, 1.0, 1) == []
