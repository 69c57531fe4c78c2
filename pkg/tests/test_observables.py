import math

import pytest

from strainhole import observables as obs
from strainhole.coupling import CouplingResult, Method
from strainhole.model import CantileverSpec, Environment, ProbeSpec, derive_mechanics

CANT = CantileverSpec(100e-6, 10e-6, 10e-6, 135e9, 1.1e-11, 890e3)
PROBE = ProbeSpec(580e-9, 1e-3)
GAMMA = 2 * math.pi * 122


def mech(T=3.0):
    return derive_mechanics(CANT, Environment(T))


def test_photon_rate():
    assert obs.photon_rate(PROBE) == pytest.approx(2.92e15, rel=2e-3)
    assert obs.photon_rate(ProbeSpec(580e-9, 0.0)) == 0.0
    assert obs.photon_rate(ProbeSpec(580e-9, 2e-3)) == pytest.approx(2 * obs.photon_rate(PROBE), rel=1e-15)


def test_overburn_time():
    assert obs.overburn_time(GAMMA) == pytest.approx(16.39e-3, rel=1e-3)
    assert obs.overburn_time(2 * GAMMA) == pytest.approx(obs.overburn_time(GAMMA) / 2, rel=1e-15)
    assert obs.overburn_time(2 * math.pi) == pytest.approx(2.0, rel=1e-15)
    assert obs.overburn_time(GAMMA) * GAMMA == pytest.approx(4 * math.pi, rel=1e-15)
    with pytest.raises(ValueError):
        obs.overburn_time(0.0)


def test_shot_noise():
    assert obs.shot_noise_phase(PROBE, 16.4e-3) == pytest.approx(0.1445e-6, rel=2e-3)
    assert obs.shot_noise_phase(PROBE, 25e-6) == pytest.approx(3.70e-6, rel=2e-3)
    assert obs.shot_noise_phase(PROBE, 4e-3) == pytest.approx(obs.shot_noise_phase(PROBE, 1e-3) / 2, rel=1e-14)
    with pytest.raises(ValueError):
        obs.shot_noise_phase(PROBE, 0.0)


def test_detection_budget_defaults_to_overburn_time():
    b = obs.detection_budget(PROBE, GAMMA)
    assert b.integration_time == b.overburn_time
    assert b.shot_noise_phase == obs.shot_noise_phase(PROBE, b.overburn_time)
    assert obs.detection_budget(PROBE, GAMMA, 1e-3).integration_time == 1e-3


SLOPE = -343.98 * 0.4e-12   # slope implying a 0.4 pm static displacement


def test_zero_point_sideband():
    s = obs.sideband_phases(SLOPE, PROBE, mech(0.0))
    assert s.zeropoint_phase == pytest.approx(0.4e-6, rel=0.1)
    assert s.total_phase == pytest.approx(s.zeropoint_phase, rel=1e-12)
    assert s.thermal_phase == s.zeropoint_phase
    assert s.classical_phase == 0.0
    assert math.isinf(s.relative_excess)
    assert s.as_dict()["relative_excess"] is None


def test_thermal_sideband_band():
    for conv in ("quantum", "classical"):
        s = obs.sideband_phases(SLOPE, PROBE, mech(3.0), conv)
        assert 0.08e-3 <= s.thermal_phase <= 0.16e-3


def test_total_phase_monotone_in_temperature():
    temps = [0, 1e-3, 1e-2, 0.03, 0.3, 3]
    totals = [obs.sideband_phases(SLOPE, PROBE, mech(T)).total_phase for T in temps]
    assert all(a <= b for a, b in zip(totals, totals[1:]))
    assert all(t >= totals[0] for t in totals)


def test_relative_excess_at_30mK():
    m = mech(0.03)
    s = obs.sideband_phases(SLOPE, PROBE, m)
    assert s.relative_excess == pytest.approx(1 / (4 * m.mean_occupancy), rel=0.01)
    assert s.relative_excess == pytest.approx(3.6e-4, rel=0.02)


def test_sidebands_need_power():
    with pytest.raises(ValueError):
        obs.sideband_phases(SLOPE, ProbeSpec(580e-9, 0.0), mech())


def test_radiation_pressure():
    m = mech()
    assert obs.radiation_pressure_displacement(PROBE, m) == pytest.approx(19.39e-15, rel=1e-3)
    assert obs.radiation_pressure_displacement(ProbeSpec(580e-9, 0.0), m) == 0.0
    assert obs.radiation_pressure_displacement(ProbeSpec(580e-9, 3e-3), m) == pytest.approx(
        3 * obs.radiation_pressure_displacement(PROBE, m), rel=1e-15)


def _coupling(x_disp):
    return CouplingResult(V=0.0, dVdX0=0.0, X_disp=x_disp, carrier_phase=0.0, method=Method.LOWT, X=x_disp)


def test_stability_requirements(example):
    m = example.mechanics
    r = obs.stability_requirements(_coupling(0.392e-12), example.burn, m)
    assert r["edge_zpf_shift_Hz"] == pytest.approx(39.63, rel=1e-3)
    assert r["laser_linewidth_bound_Hz"] == pytest.approx(r["edge_zpf_shift_Hz"] / 10)
    assert r["power_stability"] == pytest.approx(m.x_zpf / 0.392e-12)
    assert r["power_stability"] == pytest.approx(2.36e-3, rel=0.01)
    assert obs.stability_requirements(_coupling(0.0), example.burn, m)["power_stability"] is None


def test_rabi_frequency_scales_with_field():
    r1 = obs.rabi_frequency(PROBE, GAMMA)
    assert obs.rabi_frequency(ProbeSpec(580e-9, 4e-3), GAMMA) == pytest.approx(2 * r1, rel=1e-14)
    assert obs.rabi_frequency(ProbeSpec(580e-9, 0.0), GAMMA) == 0.0
