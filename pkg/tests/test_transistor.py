import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from wqed.errors import ConfigError, GridPointError, QuadratureError
from wqed.raman import dress
from wqed.schemes import DrivenV
from wqed.transistor import (
    GaussianPulse,
    pulse_norm,
    resonant_frequency,
    switch_map,
    switching_probability,
)

BASE = DrivenV(1.0, 0.0, 0.1, 0.0, 0.1)


def test_pulse_validation():
    with pytest.raises(ConfigError):
        GaussianPulse(1.0, 0.0)
    with pytest.raises(ConfigError):
        GaussianPulse(float("nan"), 0.1)


@pytest.mark.parametrize("sigma", [1e-7, 1e-3, 0.1, 10.0])
def test_pulse_norm(sigma):
    assert pulse_norm(GaussianPulse(1.0, sigma)) == pytest.approx(1.0, abs=1e-9)


def test_density_integrates_to_one():
    pulse = GaussianPulse(0.9, 0.02)
    k = np.linspace(0.9 - 0.3, 0.9 + 0.3, 200001)
    assert np.trapezoid(pulse.density(k), k) == pytest.approx(1.0, abs=1e-9)


def test_lossless_narrow_pulse_switches():
    r = switching_probability(BASE, GaussianPulse(resonant_frequency(BASE), 1e-8))
    assert r.p_switch == pytest.approx(1.0, abs=1e-9)
    assert r.p_loss_assisted == 0.0


@pytest.mark.parametrize("ratio", [0.0, 0.1, 1.0, 10.0])
def test_monochromatic_limit(ratio):
    v = DrivenV(1.0, 0.0, 0.1, ratio * 0.1, 0.1)
    r = switching_probability(v, GaussianPulse(resonant_frequency(v), 1e-6 * v.Gamma))
    assert r.p_switch == pytest.approx(1 / (1 + ratio), abs=1e-6)


@given(st.floats(0.0, 0.5), st.floats(1e-4, 0.3), st.floats(-0.1, 0.1))
def test_matches_voigt_oracle(gamma, sigma, offset):
    v = DrivenV(1.0, 0.0, 0.1, gamma, 0.1)
    r = switching_probability(v, GaussianPulse(resonant_frequency(v) + offset, sigma))
    ref = oracles.voigt_switch(v.Gamma, gamma, offset, sigma)
    assert r.p_switch == pytest.approx(ref[0], abs=1e-8)
    assert r.p_coherent == pytest.approx(ref[1], abs=1e-8)
    assert r.p_loss_assisted == pytest.approx(ref[2], abs=1e-8)


@given(st.floats(0.0, 1.0), st.floats(1e-5, 0.5))
def test_bounds_and_decomposition(gamma, sigma):
    v = DrivenV(1.0, 0.0, 0.1, gamma, 0.1)
    r = switching_probability(v, GaussianPulse(resonant_frequency(v), sigma))
    assert 0 <= r.p_switch <= 1
    assert 0 <= r.p_coherent <= 1 and 0 <= r.p_loss_assisted <= 1
    assert r.p_switch == r.p_coherent + r.p_loss_assisted


def test_refuses_detuned_drive():
    v = DrivenV(1.0, 0.05, 0.1, 0.0, 0.1)
    with pytest.raises(ConfigError):
        switching_probability(v, GaussianPulse(1.0, 0.01))
    with pytest.raises(ConfigError):
        switch_map(v, [0.0], [0.01])


def test_resonance_is_dressed_plus_line():
    assert resonant_frequency(BASE) == pytest.approx(BASE.E2 - dress(BASE).E_plus)


GAMMAS = np.linspace(0.0, 0.2, 9)
SIGMAS = np.linspace(0.001, 0.1, 7)


@pytest.fixture(scope="module")
def grid():
    return switch_map(BASE, GAMMAS, SIGMAS)


class TestSwitchMap:
    def test_shape(self, grid):
        assert grid.p_switch.shape == (9, 7)
        assert len(list(grid.rows())) == 63

    def test_single_cell(self):
        assert switch_map(BASE, [0.0], [0.01]).p_switch.shape == (1, 1)

    def test_empty_grid(self):
        with pytest.raises(ConfigError, match="grid must be nonempty"):
            switch_map(BASE, [], [0.01])

    def test_lossless_column(self, grid):
        col = grid.p_switch[0]
        assert np.all(col >= col[-1] - 1e-12)
        assert col[0] > 0.99

    def test_narrow_limit_approaches_one(self):
        ps = switch_map(BASE, [0.0], [1e-2, 1e-3, 1e-4, 1e-5]).p_switch[0]
        assert np.all(np.diff(ps) > 0) and ps[-1] > 1 - 1e-3

    def test_decreasing_in_loss(self):
        gammas = np.linspace(0.0, 0.2, 81)
        for s in (0.001, 0.03, 0.1):
            ps = switch_map(BASE, gammas, [s]).p_switch[:, 0]
            assert np.all(np.diff(ps) < 0)

    def test_threads_identical(self, grid):
        again = switch_map(BASE, GAMMAS, SIGMAS, threads=4)
        assert np.array_equal(again.p_switch, grid.p_switch)

    def test_errors_carry_coordinates(self, monkeypatch):
        import wqed.transistor as tr

        def fail(v, pulse):
            raise QuadratureError("forced")

        monkeypatch.setattr(tr, "switching_probability", fail)
        with pytest.raises(GridPointError) as info:
            switch_map(BASE, [0.05], [0.01])
        assert info.value.coordinate == {"gamma": 0.05, "sigma": 0.01}
