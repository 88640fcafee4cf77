"""Time-dependent quadratic Hamiltonians in two equivalent parameterizations.

The most general Hermitian Hamiltonian quadratic in (a, a†) is

    H / hbar = (1/2) (conj(alpha) a^2 + alpha a†^2) + beta a†a
               + conj(gamma) a + gamma a† + delta

with alpha, gamma complex and beta, delta real.  The same operator written
in canonical variables reads

    H = p^2/(2m) + k x^2/2 + (Omega/2)(xp + px) + F x + V p + E

with six real coefficients.  Fixing hbar and the oscillator length l of the
mode basis, a = (x/l + i l p/hbar)/sqrt(2), the two sets map onto each other
exactly:

    1/m = (l^2/hbar) Re(beta - alpha)        k = (hbar/l^2) Re(beta + alpha)
    Omega = Im(alpha)                        F = (sqrt(2) hbar / l) Re(gamma)
    V = sqrt(2) l Im(gamma)                  E = hbar (delta - beta/2)

and inversely

    beta  = (l^2/2hbar)(k + hbar^2/(l^4 m))
    alpha = (l^2/2hbar)(k - hbar^2/(l^4 m)) + i Omega
    gamma = (l/(hbar sqrt(2)))(F + i hbar V / l^2)
    delta = E/hbar + (l^2/4hbar)(k + hbar^2/(l^4 m))

This module holds both coefficient records, the conversion maps, the time
profiles a coefficient may follow (constant, harmonic, polynomial, sampled
table), and a schedule bundling one profile per coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import DomainError

Number = Union[int, float, complex]


# ---------------------------------------------------------------------------
# units


@dataclass(frozen=True)
class UnitContext:
    """hbar and the oscillator length l fixing the mode basis.

    Both are positive finite numbers; everything downstream (coefficient
    maps, means, widths, wavefunctions) is evaluated relative to this pair.
    """

    hbar: float = 1.0
    l: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "l"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite real, got {v!r}")


# ---------------------------------------------------------------------------
# coefficient records


@dataclass(frozen=True)
class AlgebraicCoefficients:
    """Coefficients of H/hbar in the (a, a†) form at one instant.

    beta and delta are stored as floats: hermiticity makes them real, and
    keeping them real-typed means Im(beta) = Im(delta) = 0 holds bit-exactly.
    """

    alpha: complex = 0j
    beta: float = 0.0
    gamma: complex = 0j
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "beta", _strict_real(self.beta, "beta"))
        object.__setattr__(self, "delta", _strict_real(self.delta, "delta"))


@dataclass(frozen=True)
class PhysicalCoefficients:
    """Coefficients of H in the (x, p) form at one instant.

    m may be negative (the algebraic side puts no sign constraint on it)
    but must be finite and nonzero.
    """

    m: float = 1.0
    k: float = 0.0
    Omega: float = 0.0
    F: float = 0.0
    V: float = 0.0
    E: float = 0.0

    def __post_init__(self):
        for name in ("m", "k", "Omega", "F", "V", "E"):
            object.__setattr__(self, name, _strict_real(getattr(self, name), name))
        if self.m == 0.0 or not math.isfinite(self.m):
            raise DomainError(f"mass must be finite and nonzero, got {self.m!r}")


def _strict_real(value: Number, name: str) -> float:
    z = complex(value)
    if z.imag != 0.0:
        raise DomainError(f"{name} must be real (hermiticity), got {value!r}")
    return float(z.real)


def to_algebraic(phys: PhysicalCoefficients, units: UnitContext) -> AlgebraicCoefficients:
    """Map (m, k, Omega, F, V, E) to (alpha, beta, gamma, delta) at fixed units."""
    hbar, l = units.hbar, units.l
    recip = hbar * hbar / (l ** 4 * phys.m)  # hbar^2 / (l^4 m)
    half = l * l / (2.0 * hbar)
    beta = half * (phys.k + recip)
    alpha = half * (phys.k - recip) + 1j * phys.Omega
    gamma = (l / (hbar * math.sqrt(2.0))) * (phys.F + 1j * hbar * phys.V / (l * l))
    delta = phys.E / hbar + 0.5 * half * (phys.k + recip)
    return AlgebraicCoefficients(alpha=alpha, beta=beta, gamma=gamma, delta=delta)


def to_physical(alg: AlgebraicCoefficients, units: UnitContext) -> PhysicalCoefficients:
    """Map (alpha, beta, gamma, delta) to (m, k, Omega, F, V, E) at fixed units.

    Raises DomainError when Re(beta - alpha) = 0, which corresponds to an
    infinite mass: the (x, p) form does not exist there.
    """
    hbar, l = units.hbar, units.l
    inv_m = (l * l / hbar) * (alg.beta - alg.alpha.real)
    if inv_m == 0.0:
        raise DomainError("Re(beta - alpha) = 0: no finite-mass (x, p) form exists")
    return PhysicalCoefficients(
        m=1.0 / inv_m,
        k=(hbar / (l * l)) * (alg.beta + alg.alpha.real),
        Omega=alg.alpha.imag,
        F=(math.sqrt(2.0) * hbar / l) * alg.gamma.real,
        V=math.sqrt(2.0) * l * alg.gamma.imag,
        E=hbar * (alg.delta - 0.5 * alg.beta),
    )


# ---------------------------------------------------------------------------
# time profiles
#
# A profile is a callable t -> value.  Values may be complex; coefficients
# that must stay real (beta, delta, every physical one) are checked at
# evaluation time by the schedule.


@dataclass(frozen=True)
class Constant:
    value: complex = 0j

    def __call__(self, t: float) -> complex:
        return self.value


@dataclass(frozen=True)
class Harmonic:
    """offset + amplitude * cos(omega * t)"""

    offset: complex = 0j
    amplitude: complex = 0j
    omega: float = 0.0

    def __call__(self, t: float) -> complex:
        return self.offset + self.amplitude * math.cos(self.omega * t)


@dataclass(frozen=True)
class Polynomial:
    """sum_k coeffs[k] * t^k (ascending order)."""

    coeffs: tuple = (0j,)

    def __call__(self, t: float) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


@dataclass(frozen=True)
class Table:
    """Piecewise-linear interpolation through (times, values) samples.

    times must be strictly increasing.  Evaluation outside
    [times[0], times[-1]] raises DomainError: no extrapolation.
    """

    times: tuple = (0.0,)
    values: tuple = (0j,)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 1 or len(self.values) != t.size:
            raise DomainError("table needs equally many times and values")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise DomainError("table times must be strictly increasing")

    def __call__(self, t: float) -> complex:
        ts = self.times
        if t < ts[0] or t > ts[-1]:
            raise DomainError(
                f"table evaluated at t={t!r} outside its horizon [{ts[0]}, {ts[-1]}]"
            )
        re = float(np.interp(t, ts, [complex(v).real for v in self.values]))
        im = float(np.interp(t, ts, [complex(v).imag for v in self.values]))
        return complex(re, im)


@dataclass(frozen=True)
class ComplexParts:
    """Complex profile assembled from independent real and imaginary profiles."""

    real: object = Constant(0.0)
    imag: object = Constant(0.0)

    def __call__(self, t: float) -> complex:
        return complex(self.real(t)) + 1j * complex(self.imag(t))


def as_profile(value) -> object:
    """Coerce a bare number to a Constant profile; pass callables through."""
    if callable(value):
        return value
    return Constant(complex(value))


# ---------------------------------------------------------------------------
# schedule

_ALGEBRAIC_KEYS = ("alpha", "beta", "gamma", "delta")
_PHYSICAL_KEYS = ("m", "k", "Omega", "F", "V", "E")
_REAL_KEYS = frozenset(("beta", "delta") + _PHYSICAL_KEYS)


@dataclass(frozen=True)
class CoefficientSchedule:
    """One profile per coefficient, plus the units the profiles live in.

    Exactly one parameterization ("algebraic" or "physical") is authoritative;
    the other is obtained through the exact maps on demand.  Construct via
    the algebraic()/physical() classmethods rather than directly.
    """

    units: UnitContext
    parameterization: str
    profiles: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.parameterization not in ("algebraic", "physical"):
            raise DomainError(
                f"parameterization must be 'algebraic' or 'physical', got {self.parameterization!r}"
            )
        keys = _ALGEBRAIC_KEYS if self.parameterization == "algebraic" else _PHYSICAL_KEYS
        unknown = set(self.profiles) - set(keys)
        if unknown:
            raise DomainError(f"unknown coefficient keys {sorted(unknown)} for {self.parameterization}")

    @classmethod
    def algebraic(cls, units: UnitContext = UnitContext(), *, alpha=0.0, beta=0.0,
                  gamma=0.0, delta=0.0) -> "CoefficientSchedule":
        profiles = {"alpha": as_profile(alpha), "beta": as_profile(beta),
                    "gamma": as_profile(gamma), "delta": as_profile(delta)}
        return cls(units=units, parameterization="algebraic", profiles=profiles)

    @classmethod
    def physical(cls, units: UnitContext = UnitContext(), *, m=1.0, k=0.0,
                 Omega=0.0, F=0.0, V=0.0, E=0.0) -> "CoefficientSchedule":
        profiles = {"m": as_profile(m), "k": as_profile(k), "Omega": as_profile(Omega),
                    "F": as_profile(F), "V": as_profile(V), "E": as_profile(E)}
        return cls(units=units, parameterization="physical", profiles=profiles)

    def _raw(self, key: str, t: float) -> complex:
        return complex(self.profiles[key](t))

    def algebraic_at(self, t: float) -> AlgebraicCoefficients:
        if self.parameterization == "algebraic":
            return AlgebraicCoefficients(
                alpha=self._raw("alpha", t),
                beta=_strict_real(self._raw("beta", t), "beta"),
                gamma=self._raw("gamma", t),
                delta=_strict_real(self._raw("delta", t), "delta"),
            )
        return to_algebraic(self.physical_at(t), self.units)

    def physical_at(self, t: float) -> PhysicalCoefficients:
        if self.parameterization == "physical":
            return PhysicalCoefficients(
                **{k: _strict_real(self._raw(k, t), k) for k in _PHYSICAL_KEYS}
            )
        return to_physical(self.algebraic_at(t), self.units)


def validate(schedule: CoefficientSchedule, horizon: float, samples: int = 257) -> list:
    """Sample the schedule over [0, horizon] and collect diagnostics.

    Returns a list of strings, empty when the schedule is usable: every
    coefficient evaluates, is finite, respects hermiticity (realness where
    required), and the mass never vanishes.  No exception escapes; problems
    become diagnostics.
    """
    if not (math.isfinite(horizon) and horizon >= 0):
        return [f"horizon must be finite and nonnegative, got {horizon!r}"]
    diagnostics = []
    keys = _ALGEBRAIC_KEYS if schedule.parameterization == "algebraic" else _PHYSICAL_KEYS
    grid = np.linspace(0.0, horizon, max(2, samples))
    for key in keys:
        for t in grid:
            try:
                v = schedule._raw(key, float(t))
            except DomainError as exc:
                diagnostics.append(f"{key}: evaluation failed at t={t:.6g}: {exc}")
                break  # one diagnostic per coefficient/failure mode is enough
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                diagnostics.append(f"{key}: non-finite value {v!r} at t={t:.6g}")
                break
            if key in _REAL_KEYS and v.imag != 0.0:
                diagnostics.append(f"{key}: must be real, got {v!r} at t={t:.6g}")
                break
            if key == "m" and v.real == 0.0:
                diagnostics.append(f"m: vanishes at t={t:.6g}")
                break
    return diagnostics
