"""Run configuration: sectioned key-value files mapped to library objects.

Sections and keys (INI syntax, keys are case-sensitive, # starts a comment):

    [hamiltonian]
      preset = mathieu            modulated-stiffness oscillator; keys m0,
                                  epsilon0, eta0, omega0, varphi0_re,
                                  varphi0_im, hbar (all optional, defaults
                                  are the a = 0.04, q = 1 configuration)
    or
      parameterization = algebraic | physical
      hbar = 1.0                  units
      l = 1.0
      <coefficient> = <profile>   real coefficients directly (beta, delta,
                                  m, k, Omega, F, V, E); complex ones as
                                  <name>_re / <name>_im profile pairs
                                  (alpha_re, alpha_im, gamma_re, gamma_im)

    [initial]                     either explicit f0/g0 components or a
      f0_re, f0_im, g0_re, g0_im  width pair sigma_x0 / theta; varphi0_re,
      sigma_x0, theta             varphi0_im are accepted in both styles
      varphi0_re, varphi0_im

    [integration]
      t_max, num_points           evolution grid linspace(0, t_max, num_points)
      rtol, atol, max_step, drift_threshold

    [output]
      out                         default output path (CLI --out overrides)
      tail_tolerance, n_max       number-basis truncation control
      x_points, x_span_sigmas     density grid: points across xbar +/- span*sigma_x

A profile value is one of

    <number>                              constant
    harmonic <offset> <amplitude> <omega> offset + amplitude cos(omega t)
    poly <c0> <c1> ...                    polynomial, ascending powers
    table <t0>:<v0> <t1>:<v1> ...         piecewise linear, no extrapolation

Every parse problem raises ConfigError.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, CssdynError, DomainError
from .hamiltonian import (CoefficientSchedule, ComplexParts, Constant, Harmonic,
                          Polynomial, Table, UnitContext, validate)
from .mathieu import DrivenOscillatorConfig
from .motion import InitialConditions, IntegratorSettings, from_initial_width

_HAMILTONIAN_PRESET_KEYS = {"preset", "m0", "epsilon0", "eta0", "omega0",
                            "varphi0_re", "varphi0_im", "hbar"}
_HAMILTONIAN_ALGEBRAIC_KEYS = {"parameterization", "hbar", "l", "alpha_re",
                               "alpha_im", "beta", "gamma_re", "gamma_im", "delta"}
_HAMILTONIAN_PHYSICAL_KEYS = {"parameterization", "hbar", "l",
                              "m", "k", "Omega", "F", "V", "E"}
_INITIAL_KEYS = {"f0_re", "f0_im", "g0_re", "g0_im", "sigma_x0", "theta",
                 "varphi0_re", "varphi0_im"}
_INTEGRATION_KEYS = {"t_max", "num_points", "rtol", "atol", "max_step",
                     "drift_threshold"}
_OUTPUT_KEYS = {"out", "tail_tolerance", "n_max", "x_points", "x_span_sigmas"}


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI command needs, already validated."""

    schedule: CoefficientSchedule
    init: InitialConditions
    settings: IntegratorSettings
    preset: Optional[DrivenOscillatorConfig]
    t_max: Optional[float]
    num_points: int
    out: Optional[str]
    tail_tolerance: float
    n_max: int
    x_points: int
    x_span_sigmas: float

    def time_grid(self) -> np.ndarray:
        if self.t_max is None:
            raise ConfigError("this command needs t_max in [integration]")
        return np.linspace(0.0, self.t_max, self.num_points)


def _unquote(raw: str) -> str:
    s = raw.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "\"'":
        return s[1:-1]
    return s


def _number(raw: str, where: str) -> float:
    try:
        v = float(_unquote(raw))
    except ValueError:
        raise ConfigError(f"{where}: expected a number, got {raw!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{where}: value must be finite, got {raw!r}")
    return v


def _integer(raw: str, where: str) -> int:
    v = _number(raw, where)
    if v != int(v):
        raise ConfigError(f"{where}: expected an integer, got {raw!r}")
    return int(v)


def _profile(raw: str, where: str):
    tokens = _unquote(raw).split()
    if not tokens:
        raise ConfigError(f"{where}: empty profile")
    head = tokens[0].lower()
    if head == "harmonic":
        if len(tokens) != 4:
            raise ConfigError(f"{where}: harmonic needs offset, amplitude, omega")
        return Harmonic(offset=_number(tokens[1], where),
                        amplitude=_number(tokens[2], where),
                        omega=_number(tokens[3], where))
    if head == "poly":
        if len(tokens) < 2:
            raise ConfigError(f"{where}: poly needs at least one coefficient")
        return Polynomial(coeffs=tuple(_number(tok, where) for tok in tokens[1:]))
    if head == "table":
        if len(tokens) < 3:
            raise ConfigError(f"{where}: table needs at least two t:v samples")
        times, values = [], []
        for tok in tokens[1:]:
            if ":" not in tok:
                raise ConfigError(f"{where}: table sample {tok!r} is not t:v")
            tpart, vpart = tok.split(":", 1)
            times.append(_number(tpart, where))
            values.append(_number(vpart, where))
        try:
            return Table(times=tuple(times), values=tuple(values))
        except DomainError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    if len(tokens) != 1:
        raise ConfigError(f"{where}: unknown profile kind {tokens[0]!r}")
    return Constant(_number(tokens[0], where))


def _check_keys(section: str, present, allowed) -> None:
    unknown = set(present) - set(allowed)
    if unknown:
        raise ConfigError(f"[{section}]: unknown keys {sorted(unknown)}")


def load_config(path: str) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    cp.optionxform = str  # keys are case-sensitive (Omega vs omega0)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path!r}: {exc}") from None

    known_sections = {"hamiltonian", "initial", "integration", "output"}
    unknown = set(cp.sections()) - known_sections
    if unknown:
        raise ConfigError(f"unknown sections {sorted(unknown)}")
    if "hamiltonian" not in cp:
        raise ConfigError("missing required section [hamiltonian]")

    ham = cp["hamiltonian"]
    ini = cp["initial"] if "initial" in cp else {}
    intg = cp["integration"] if "integration" in cp else {}
    outp = cp["output"] if "output" in cp else {}
    _check_keys("initial", ini.keys(), _INITIAL_KEYS)
    _check_keys("integration", intg.keys(), _INTEGRATION_KEYS)
    _check_keys("output", outp.keys(), _OUTPUT_KEYS)

    try:
        if "preset" in ham:
            preset, schedule, init = _load_preset(ham, ini)
        else:
            preset = None
            schedule, init = _load_explicit(ham, ini)
    except CssdynError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None

    settings_kwargs = {}
    for key in ("rtol", "atol", "max_step", "drift_threshold"):
        if key in intg:
            settings_kwargs[key] = _number(intg[key], f"[integration] {key}")
    try:
        settings = IntegratorSettings(**settings_kwargs)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None

    t_max = _number(intg["t_max"], "[integration] t_max") if "t_max" in intg else None
    if t_max is not None and t_max <= 0:
        raise ConfigError(f"[integration] t_max must be positive, got {t_max}")
    num_points = _integer(intg["num_points"], "[integration] num_points") \
        if "num_points" in intg else 1001
    if num_points < 2:
        raise ConfigError("[integration] num_points must be at least 2")

    tail_tolerance = _number(outp["tail_tolerance"], "[output] tail_tolerance") \
        if "tail_tolerance" in outp else 1e-10
    if not 0.0 < tail_tolerance < 1.0:
        raise ConfigError("[output] tail_tolerance must lie in (0, 1)")
    n_max = _integer(outp["n_max"], "[output] n_max") if "n_max" in outp else 4096
    if n_max < 2:
        raise ConfigError("[output] n_max must be at least 2")
    x_points = _integer(outp["x_points"], "[output] x_points") if "x_points" in outp else 1025
    if x_points < 2:
        raise ConfigError("[output] x_points must be at least 2")
    x_span = _number(outp["x_span_sigmas"], "[output] x_span_sigmas") \
        if "x_span_sigmas" in outp else 8.0
    if x_span <= 0:
        raise ConfigError("[output] x_span_sigmas must be positive")
    out = _unquote(outp["out"]) if "out" in outp else None

    if t_max is not None:
        problems = validate(schedule, t_max)
        if problems:
            raise ConfigError("schedule invalid over [0, t_max]: " + "; ".join(problems))

    return RunConfig(schedule=schedule, init=init, settings=settings, preset=preset,
                     t_max=t_max, num_points=num_points, out=out,
                     tail_tolerance=tail_tolerance, n_max=n_max,
                     x_points=x_points, x_span_sigmas=x_span)


def _load_preset(ham, ini):
    _check_keys("hamiltonian", ham.keys(), _HAMILTONIAN_PRESET_KEYS)
    name = _unquote(ham["preset"])
    if name != "mathieu":
        raise ConfigError(f"unknown preset {name!r} (available: mathieu)")
    varphi0 = complex(
        _number(ham["varphi0_re"], "varphi0_re") if "varphi0_re" in ham else 0.0,
        _number(ham["varphi0_im"], "varphi0_im") if "varphi0_im" in ham else -1.0)
    defaults = {"m0": 1.0, "epsilon0": 1.0, "eta0": 50.0, "omega0": 10.0, "hbar": 1.0}
    values = {key: _number(ham[key], f"[hamiltonian] {key}") if key in ham else default
              for key, default in defaults.items()}
    base = DrivenOscillatorConfig(**values)  # validates positivity
    init = _load_initial(ini, base.units, default=InitialConditions(1.0, 0.0, varphi0),
                         default_varphi=varphi0)
    preset = DrivenOscillatorConfig(**values, init=init)
    return preset, preset.schedule(), init


def _load_explicit(ham, ini):
    if "parameterization" not in ham:
        raise ConfigError("[hamiltonian] needs either preset or parameterization")
    kind = _unquote(ham["parameterization"])
    hbar = _number(ham["hbar"], "[hamiltonian] hbar") if "hbar" in ham else 1.0
    l = _number(ham["l"], "[hamiltonian] l") if "l" in ham else 1.0
    units = UnitContext(hbar=hbar, l=l)

    def real_profile(key):
        return _profile(ham[key], f"[hamiltonian] {key}") if key in ham else Constant(0.0)

    def complex_profile(key):
        return ComplexParts(real=real_profile(key + "_re"), imag=real_profile(key + "_im"))

    if kind == "algebraic":
        _check_keys("hamiltonian", ham.keys(), _HAMILTONIAN_ALGEBRAIC_KEYS)
        schedule = CoefficientSchedule.algebraic(
            units, alpha=complex_profile("alpha"), beta=real_profile("beta"),
            gamma=complex_profile("gamma"), delta=real_profile("delta"))
    elif kind == "physical":
        _check_keys("hamiltonian", ham.keys(), _HAMILTONIAN_PHYSICAL_KEYS)
        if "m" not in ham:
            raise ConfigError("[hamiltonian] physical parameterization needs m")
        schedule = CoefficientSchedule.physical(
            units, m=_profile(ham["m"], "[hamiltonian] m"),
            k=real_profile("k"), Omega=real_profile("Omega"), F=real_profile("F"),
            V=real_profile("V"), E=real_profile("E"))
    else:
        raise ConfigError(f"parameterization must be algebraic or physical, got {kind!r}")
    return schedule, _load_initial(ini, units, default=None, default_varphi=0j)


def _load_initial(ini, units, default, default_varphi):
    explicit = {"f0_re", "f0_im", "g0_re", "g0_im"} & set(ini.keys())
    width = {"sigma_x0", "theta"} & set(ini.keys())
    if explicit and width:
        raise ConfigError("[initial]: give either f0/g0 components or sigma_x0/theta, not both")

    varphi0 = default_varphi
    if "varphi0_re" in ini or "varphi0_im" in ini:
        varphi0 = complex(
            _number(ini["varphi0_re"], "varphi0_re") if "varphi0_re" in ini else 0.0,
            _number(ini["varphi0_im"], "varphi0_im") if "varphi0_im" in ini else 0.0)

    if width:
        if "sigma_x0" not in ini:
            raise ConfigError("[initial]: width style needs sigma_x0")
        theta = _number(ini["theta"], "theta") if "theta" in ini else 0.0
        base = from_initial_width(_number(ini["sigma_x0"], "sigma_x0"), theta, units)
        return InitialConditions(base.f0, base.g0, varphi0)
    if explicit:
        f0 = complex(_number(ini["f0_re"], "f0_re") if "f0_re" in ini else 0.0,
                     _number(ini["f0_im"], "f0_im") if "f0_im" in ini else 0.0)
        g0 = complex(_number(ini["g0_re"], "g0_re") if "g0_re" in ini else 0.0,
                     _number(ini["g0_im"], "g0_im") if "g0_im" in ini else 0.0)
        return InitialConditions(f0, g0, varphi0)
    if default is not None:
        return InitialConditions(default.f0, default.g0, varphi0)
    # no [initial] at all: start from the coherent vacuum frame
    return InitialConditions(1.0, 0.0, varphi0)
