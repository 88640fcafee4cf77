"""Evolution of the invariant-operator coefficients (f, g, varphi)."""

import math

import numpy as np
import pytest

from cssdyn import (AlgebraicCoefficients, CoefficientSchedule, Constant,
                    DomainError, Harmonic, InitialConditions,
                    IntegratorSettings, NumericalError, Polynomial, Table,
                    UnitContext, closed_form, deviations, evolve,
                    from_initial_width, u_of)

UNITS = UnitContext()
TIGHT = IntegratorSettings(rtol=1e-12, atol=1e-14)


def constant_schedule(alpha=0.0, beta=0.0, gamma=0.0, delta=0.0):
    return CoefficientSchedule.algebraic(UNITS, alpha=alpha, beta=beta,
                                         gamma=gamma, delta=delta)


def frame_distance(a, b):
    return max(abs(a.f - b.f), abs(a.g - b.g), abs(a.varphi - b.varphi))


# ---------------------------------------------------------------------------
# evolve


def test_pure_rotation_quarter_turn():
    # alpha = 0 decouples f: f(t) = f0 exp(i beta t)
    frames = evolve(constant_schedule(beta=1.0), InitialConditions(),
                    [0.0, math.pi / 2.0], TIGHT)
    assert frames[-1].f == pytest.approx(1j, abs=1e-10)
    assert frames[-1].g == pytest.approx(0.0, abs=1e-12)
    assert frames[-1].varphi == 0.0


def test_initial_frame_is_returned_unchanged():
    init = InitialConditions(f0=math.cosh(0.3), g0=math.sinh(0.3) * 1j,
                             varphi0=0.2 - 0.1j)
    sched = CoefficientSchedule.physical(UNITS, m=1.0, k=Harmonic(1.0, 0.5, 3.0))
    frame = evolve(sched, init, [0.0])[0]
    assert frame.t == 0.0
    assert frame.f == init.f0
    assert frame.g == init.g0
    assert frame.varphi == init.varphi0
    assert frame.phase_phi == 0.0
    assert frame.phase_vartheta == 0.0


def test_hyperbolic_stretch():
    frames = evolve(constant_schedule(alpha=1j), InitialConditions(),
                    [0.0, 1.0], TIGHT)
    assert frames[-1].f == pytest.approx(math.cosh(1.0), abs=1e-10)
    assert frames[-1].g == pytest.approx(-math.sinh(1.0), abs=1e-10)


def test_grid_must_start_at_zero_and_increase():
    sched = constant_schedule(beta=1.0)
    with pytest.raises(DomainError):
        evolve(sched, InitialConditions(), [0.5, 1.0])
    with pytest.raises(DomainError):
        evolve(sched, InitialConditions(), [0.0, 1.0, 1.0])


def test_drift_breach_raises_with_time():
    # crude tolerances on a stiff-ish stretch, threshold far below reach
    sched = constant_schedule(alpha=2.0)
    settings = IntegratorSettings(rtol=1e-3, atol=1e-3, drift_threshold=1e-15)
    with pytest.raises(NumericalError) as err:
        evolve(sched, InitialConditions(), np.linspace(0.0, 6.0, 11), settings)
    assert err.value.t is not None
    assert 0.0 <= err.value.t <= 6.0


def test_unitarity_on_randomized_schedules():
    rng = np.random.default_rng(5)
    profiles = [
        lambda: Constant(rng.uniform(-2.0, 2.0)),
        lambda: Harmonic(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                         rng.uniform(0.5, 4.0)),
        lambda: Polynomial(tuple(rng.uniform(-0.5, 0.5, size=3))),
        lambda: Table(times=(0.0, 1.5, 3.0),
                      values=tuple(rng.uniform(-2.0, 2.0, size=3))),
    ]
    grid = np.linspace(0.0, 3.0, 61)
    for _ in range(6):
        sched = CoefficientSchedule.algebraic(
            UNITS,
            alpha=rng.choice(profiles)(),
            beta=rng.choice(profiles)(),
            gamma=rng.choice(profiles)(),
            delta=rng.choice(profiles)())
        for fr in evolve(sched, InitialConditions(), grid):
            assert fr.unitarity_defect < 1e-8


def test_superposition_of_the_linear_flow():
    """(f, g) evolves by one linear map, so two probe runs predict a third."""
    sched = constant_schedule(alpha=0.4 + 0.3j, beta=1.1, gamma=0.2j)
    grid = np.linspace(0.0, 2.0, 21)
    s = 0.5
    probe_a = evolve(sched, InitialConditions(1.0, 0.0), grid, TIGHT)
    probe_b = evolve(sched, InitialConditions(math.cosh(s), math.sinh(s)),
                     grid, TIGHT)
    target_init = InitialConditions(math.cosh(0.7) * np.exp(0.4j),
                                    math.sinh(0.7) * np.exp(-0.2j))
    target = evolve(sched, target_init, grid, TIGHT)
    b = target_init.g0 / math.sinh(s)
    a = target_init.f0 - b * math.cosh(s)
    for fa, fb, ft in zip(probe_a, probe_b, target):
        assert a * fa.f + b * fb.f == pytest.approx(ft.f, abs=1e-8)
        assert a * fa.g + b * fb.g == pytest.approx(ft.g, abs=1e-8)


# ---------------------------------------------------------------------------
# closed form


def test_degenerate_frequency_limit():
    # beta^2 = |alpha|^2 makes sin(Theta t)/Theta -> t
    alg = AlgebraicCoefficients(alpha=1.0, beta=1.0)
    frame = closed_form(alg, InitialConditions(), 2.0)
    assert frame.f == pytest.approx(1.0 + 2.0j, abs=1e-14)
    assert frame.g == pytest.approx(2.0j, abs=1e-14)
    sched = constant_schedule(alpha=1.0, beta=1.0)
    evolved = evolve(sched, InitialConditions(), [0.0, 2.0], TIGHT)[-1]
    assert frame_distance(frame, evolved) < 1e-9


def test_closed_form_reduces_to_exponential():
    alg = AlgebraicCoefficients(beta=1.0)
    init = InitialConditions(f0=math.cosh(0.4) * np.exp(0.3j),
                             g0=math.sinh(0.4))
    for t in (0.3, 1.0, 4.7, 11.0):
        frame = closed_form(alg, init, t)
        assert frame.f == pytest.approx(init.f0 * np.exp(1j * t), abs=1e-13)
        assert frame.g == pytest.approx(init.g0 * np.exp(-1j * t), abs=1e-13)


def test_closed_form_at_zero_time():
    alg = AlgebraicCoefficients(alpha=0.3 + 1j, beta=0.2, gamma=1.0 - 0.5j,
                                delta=0.9)
    init = InitialConditions(varphi0=2.0 - 1.0j)
    frame = closed_form(alg, init, 0.0)
    assert frame.f == init.f0
    assert frame.g == init.g0
    assert frame.varphi == init.varphi0
    assert frame.phase_phi == 0.0
    assert frame.phase_vartheta == 0.0


def test_closed_form_matches_integration_across_regimes():
    rng = np.random.default_rng(17)
    grid = np.array([0.0, 0.5, 1.0, 3.0])
    for _ in range(8):
        alg = AlgebraicCoefficients(
            alpha=complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)),
            beta=rng.uniform(-2.0, 2.0),
            gamma=complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
            delta=rng.uniform(-1.0, 1.0))
        sched = constant_schedule(alg.alpha, alg.beta, alg.gamma, alg.delta)
        frames = evolve(sched, InitialConditions(), grid, TIGHT,
                        enforce_drift=False)
        for fr in frames[1:]:
            ref = closed_form(alg, InitialConditions(), fr.t)
            assert frame_distance(ref, fr) < 1e-8
            assert fr.phase_phi == pytest.approx(ref.phase_phi, abs=1e-10)
            assert fr.phase_vartheta == pytest.approx(ref.phase_vartheta,
                                                      abs=1e-8)


def test_quadrature_slope_identity():
    # g = (i/conj(alpha)) df/dt + (beta/conj(alpha)) f for constant coefficients
    alg = AlgebraicCoefficients(alpha=0.8 - 0.6j, beta=1.3, gamma=0.4)
    init = InitialConditions(f0=math.cosh(0.5), g0=math.sinh(0.5) * 1j)
    h = 1e-4
    for t in (0.7, 2.1):
        fm = closed_form(alg, init, t - h).f
        fp = closed_form(alg, init, t + h).f
        df = (fp - fm) / (2.0 * h)
        frame = closed_form(alg, init, t)
        predicted = (1j * df + alg.beta * frame.f) / alg.alpha.conjugate()
        assert abs(predicted - frame.g) < 1e-6


# ---------------------------------------------------------------------------
# initial data


def test_width_ratio_one_gives_vacuum():
    init = from_initial_width(1.0 / math.sqrt(2.0), 0.0, UNITS)
    assert init.f0 == pytest.approx(1.0, abs=1e-15)
    assert init.g0 == pytest.approx(0.0, abs=1e-15)


def test_half_width_squeeze():
    init = from_initial_width(0.5, 0.0, UNITS)
    assert init.f0 == pytest.approx(3.0 / (2.0 * math.sqrt(2.0)), abs=1e-14)
    assert init.g0 == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), abs=1e-14)


def test_width_data_sits_on_hyperboloid_and_minimizes():
    rng = np.random.default_rng(23)
    for _ in range(25):
        units = UnitContext(hbar=rng.uniform(0.5, 2.0), l=rng.uniform(0.5, 2.0))
        sigma = units.l / math.sqrt(2.0) * rng.uniform(0.05, 1.0)
        init = from_initial_width(sigma, rng.uniform(0.0, 2.0 * math.pi), units)
        assert abs(init.f0) ** 2 - abs(init.g0) ** 2 == pytest.approx(1.0, abs=1e-13)
        frame = evolve(constant_schedule(), init, [0.0])[0]
        sx, sp, _ = deviations(frame, units)
        assert sx == pytest.approx(sigma, rel=1e-12)
        assert sx * sp == pytest.approx(units.hbar / 2.0, rel=1e-12)


def test_width_out_of_range_rejected():
    with pytest.raises(DomainError):
        from_initial_width(0.8, 0.0, UNITS)  # needs sigma <= l / sqrt(2)
    with pytest.raises(DomainError):
        from_initial_width(0.0, 0.0, UNITS)


def test_off_hyperboloid_initial_data_rejected():
    with pytest.raises(DomainError):
        InitialConditions(f0=1.0, g0=0.5)


# ---------------------------------------------------------------------------
# small algebra


def test_shift_functional():
    assert u_of(evolve(constant_schedule(), InitialConditions(), [0.0])[0]) == 0.0
    frame = evolve(constant_schedule(),
                   InitialConditions(varphi0=0.3 - 0.2j), [0.0])[0]
    assert u_of(frame) == -(0.3 - 0.2j)
    frame = evolve(constant_schedule(), InitialConditions(varphi0=-1j), [0.0])[0]
    assert u_of(frame) == 1j


def test_phase_integrals_on_constant_schedule():
    alg = AlgebraicCoefficients(beta=1.4, delta=0.3)
    frame = closed_form(alg, InitialConditions(), 2.0)
    assert frame.phase_phi == pytest.approx(0.5 * (1.4 - 0.6) * 2.0, abs=1e-14)
    # with gamma = 0 the action phase is locked to -hbar * phase_phi
    assert frame.phase_vartheta == pytest.approx(-frame.phase_phi, abs=1e-14)
    sched = constant_schedule(beta=1.4, delta=0.3)
    evolved = evolve(sched, InitialConditions(), [0.0, 2.0], TIGHT)[-1]
    assert evolved.phase_phi == pytest.approx(frame.phase_phi, abs=1e-10)
    assert evolved.phase_vartheta == pytest.approx(frame.phase_vartheta, abs=1e-10)
