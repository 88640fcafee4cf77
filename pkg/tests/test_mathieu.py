"""Cosine-modulated oscillator: standard-form reduction and both pipelines."""

import math

import numpy as np
import pytest

from cssdyn import (AlgebraicCoefficients, DomainError, DrivenOscillatorConfig,
                    InitialConditions, IntegratorSettings, closed_form, evolve,
                    frames, fundamental_solutions, mathieu_parameters,
                    phase_trajectory, transition_snapshot)

PRESET = DrivenOscillatorConfig()
SETTINGS = IntegratorSettings()


def test_standard_form_parameters():
    p = mathieu_parameters(PRESET)
    assert p.a == pytest.approx(0.04, abs=1e-16)
    assert p.q == pytest.approx(1.0, abs=1e-16)
    assert mathieu_parameters(DrivenOscillatorConfig(eta0=0.0)).q == 0.0
    assert mathieu_parameters(DrivenOscillatorConfig(epsilon0=0.0)).a == 0.0


def test_config_validation_and_derived_length():
    with pytest.raises(DomainError):
        DrivenOscillatorConfig(m0=0.0)
    with pytest.raises(DomainError):
        DrivenOscillatorConfig(omega0=-1.0)
    assert PRESET.length == pytest.approx(math.sqrt(0.1), abs=1e-16)
    assert PRESET.units.l == PRESET.length


def test_unmodulated_basis_is_trigonometric():
    p = mathieu_parameters(DrivenOscillatorConfig(eta0=0.0))
    taus = np.linspace(0.0, 12.0, 49)
    basis = fundamental_solutions(p, taus, SETTINGS)
    w = math.sqrt(p.a)  # 0.2
    assert np.max(np.abs(basis.yc - np.cos(w * taus))) < 1e-9
    assert np.max(np.abs(basis.ys - np.sin(w * taus) / w)) < 1e-9


def test_free_basis_is_affine():
    p = mathieu_parameters(DrivenOscillatorConfig(epsilon0=0.0, eta0=0.0))
    taus = np.linspace(0.0, 5.0, 11)
    basis = fundamental_solutions(p, taus, SETTINGS)
    assert np.max(np.abs(basis.yc - 1.0)) < 1e-10
    assert np.max(np.abs(basis.ys - taus)) < 1e-10


def test_wronskian_stays_pinned():
    taus = np.linspace(0.0, 20.0, 201)
    basis = fundamental_solutions(mathieu_parameters(PRESET), taus, SETTINGS)
    assert np.max(np.abs(basis.wronskian() - 1.0)) < 1e-9


def test_frames_start_from_initial_data():
    fr = frames(PRESET, np.array([0.0]), SETTINGS)[0]
    assert fr.t == 0.0
    assert fr.f == PRESET.init.f0
    assert fr.g == PRESET.init.g0
    assert fr.varphi == PRESET.init.varphi0


def test_unmodulated_frames_match_constant_coefficients():
    cfg = DrivenOscillatorConfig(eta0=0.0)
    taus = np.linspace(0.0, 8.0, 33)
    got = frames(cfg, taus, SETTINGS)
    alg = cfg.schedule().algebraic_at(0.0)
    const = AlgebraicCoefficients(alpha=alg.alpha, beta=alg.beta,
                                  gamma=alg.gamma, delta=alg.delta)
    for fr in got:
        ref = closed_form(const, cfg.init, fr.t)
        assert abs(fr.f - ref.f) < 1e-8
        assert abs(fr.g - ref.g) < 1e-8
        assert fr.unitarity_defect < 1e-8


def test_both_pipelines_agree():
    taus = np.linspace(0.0, 6.0, 61)
    osc = frames(PRESET, taus, SETTINGS)
    generic = evolve(PRESET.schedule(), PRESET.init, 2.0 * taus / PRESET.omega0,
                     SETTINGS)
    worst = max(max(abs(a.f - b.f), abs(a.g - b.g), abs(a.varphi - b.varphi))
                for a, b in zip(osc, generic))
    assert worst < 1e-7


def test_trajectory_anchors():
    taus = np.linspace(0.0, 2.0, 21)
    pts = phase_trajectory(PRESET, taus, SETTINGS)
    t0, x0, p0 = pts[0]
    assert t0 == 0.0
    assert x0 == 0.0
    assert p0 == pytest.approx(math.sqrt(20.0), abs=1e-12)

    quiet = DrivenOscillatorConfig(init=InitialConditions(varphi0=0.0))
    for _, x, p in phase_trajectory(quiet, taus, SETTINGS):
        assert x == 0.0 and p == 0.0


def test_unmodulated_orbit_closes():
    cfg = DrivenOscillatorConfig(eta0=0.0)
    # classical angular frequency sqrt(epsilon0/m0) = 1, period 2 pi,
    # tau = omega0 t / 2
    taus = np.linspace(0.0, 10.0 * math.pi, 401)
    pts = phase_trajectory(cfg, taus, SETTINGS)
    _, x0, p0 = pts[0]
    t1, x1, p1 = pts[-1]
    assert t1 == pytest.approx(2.0 * math.pi, abs=1e-12)
    assert math.hypot(x1 - x0, p1 - p0) < 1e-6


def test_snapshot_distribution():
    p0 = transition_snapshot(PRESET, 0.0)
    assert p0[0] == pytest.approx(math.exp(-1.0), abs=1e-12)
    assert np.argmax(p0) == 0
    for tau in (0.0, 2.0):
        p = transition_snapshot(PRESET, tau, tail_tolerance=1e-10, n_max=65536)
        assert abs(np.sum(p) - 1.0) < 2e-10
    with pytest.raises(DomainError):
        transition_snapshot(PRESET, -1.0)


def test_drift_and_wronskian_defects_track_each_other():
    taus = np.linspace(0.0, 20.0, 201)
    basis = fundamental_solutions(mathieu_parameters(PRESET), taus, SETTINGS)
    w_defect = float(np.max(np.abs(basis.wronskian() - 1.0)))
    f_defect = max(fr.unitarity_defect for fr in frames(PRESET, taus, SETTINGS))
    assert w_defect < 1e-8
    assert f_defect < 1e-8
    # same invariant seen through two runs; keep them the same order
    ratio = max(w_defect, f_defect) / max(min(w_defect, f_defect), 1e-16)
    assert ratio < 100.0
