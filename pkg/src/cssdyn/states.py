"""Coherent squeezed states built on a linear integral of motion.

A frame (f, g, varphi) fixes the normalized state annihilated by the
integral of motion, written without any unitary squeeze/displacement
factorization as

    |xi, zeta> = Phi exp(-xi a† - (zeta/2) a†^2) |0>,
    xi = varphi / f,   zeta = g / f,   |zeta| < 1,

with normalization

    Phi = f^(-1/2) exp( (conj(g)/f) varphi^2 / 2 - |varphi|^2 / 2 + i phase_phi ).

The number-basis coefficients come from a branch-free three-term recurrence
equivalent to the Hermite-polynomial form

    c_n = Phi (-1)^n (g/2f)^(n/2) H_n(varphi / sqrt(2 g f)) / sqrt(n!),

and overlaps close through the Mehler kernel.  The only square root with a
branch choice is f^(-1/2); its sheet is selected by an integer winding
count of arg f, recoverable along a trajectory with branch_windings().
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .motion import MotionFrame

# Geometric tail certification window: this many consecutive pair-sum ratios
# must sit below 1 before a truncation is accepted.
_WINDOW = 16


@dataclass(frozen=True)
class SqueezeDisplace:
    """Squeeze/displacement pair (zeta, xi) of a frame; |zeta| < 1 always."""

    xi: complex
    zeta: complex

    @property
    def squeeze_magnitude(self) -> float:
        return abs(self.zeta)


@dataclass(frozen=True)
class FockDistribution:
    """Truncated number-basis expansion with a certified tail.

    coefficients[n] = c_n for n <= truncation; probabilities are |c_n|^2;
    tail_bound bounds the total probability beyond the stored range.
    """

    coefficients: np.ndarray
    probabilities: np.ndarray
    truncation: int
    tail_bound: float


def parameters(frame: MotionFrame) -> SqueezeDisplace:
    """(xi, zeta) of a frame; |f| >= 1 makes the divisions safe."""
    return SqueezeDisplace(xi=frame.varphi / frame.f, zeta=frame.g / frame.f)


def branch_windings(frames) -> list:
    """Winding count of arg f along a trajectory, anchored at the first frame.

    The n-th entry counts signed crossings of the branch cut up to frame n;
    feed it to normalization()/overlap() to keep f^(-1/2) continuous in time.
    The first entry is always 0 (principal branch at the anchor).
    """
    args = np.array([np.angle(fr.f) for fr in frames], dtype=float)
    if args.size == 0:
        return []
    unwrapped = np.unwrap(args)
    unwrapped += args[0] - unwrapped[0]  # anchor at the principal sheet
    return [int(round(w)) for w in (unwrapped - args) / (2.0 * np.pi)]


def normalization(frame: MotionFrame, winding: int = 0) -> complex:
    """Normalization factor Phi of the state attached to a frame.

    winding selects the sheet of f^(-1/2): each crossing of the branch cut
    of arg f flips the sign, so the factor is (-1)^winding times the
    principal value.  For a frame without trajectory context the principal
    branch (winding 0) is the documented, phase-ambiguous default; every
    modulus derived from Phi is branch-independent.
    """
    f, g, varphi = frame.f, frame.g, frame.varphi
    root = 1.0 / np.sqrt(complex(f))
    if winding % 2:
        root = -root
    exponent = (g.conjugate() / f) * varphi * varphi / 2.0 \
        - (varphi * varphi.conjugate()).real / 2.0 + 1j * frame.phase_phi
    return complex(root * np.exp(exponent))


def fock_coefficients(frame: MotionFrame, tail_tolerance: float = 1e-10,
                      n_max: int = 4096, winding: int = 0) -> FockDistribution:
    """Number-basis coefficients c_0..c_N with a certified geometric tail.

    The reduced coefficients d_n = (-1)^n (g/2f)^(n/2) H_n(varphi/sqrt(2gf)) / sqrt(n!)
    follow the branch-free recurrence

        d_0 = 1,   d_1 = -xi,
        d_{n+1} = -xi d_n / sqrt(n+1) - zeta sqrt(n/(n+1)) d_{n-1},

    which also folds the factorial in as a running ratio, so nothing
    overflows.  Truncation: probabilities are grouped into pairs
    E_k = P_2k + P_{2k+1} (pairing smooths the even/odd oscillation of
    squeezed states); a truncation is accepted once _WINDOW consecutive
    pair ratios E_k/E_{k-1} sit below 1 and the geometric bound
    E_K rho/(1-rho), rho = max(window, |zeta|^2), is <= tail_tolerance.
    Underflow of two consecutive d_n to exact zero ends the expansion
    exactly.  Near-unit |zeta| needs n_max of order 25/(1-|zeta|^2).

    Raises ConvergenceError when no truncation up to n_max certifies.
    """
    phi, d, p, top, bound = _expand(frame, tail_tolerance, n_max, winding, True)
    return FockDistribution(coefficients=phi * d[:top + 1],
                            probabilities=(abs(phi) ** 2) * p[:top + 1],
                            truncation=top, tail_bound=bound)


def transition_probabilities(frame: MotionFrame, tail_tolerance: float = 1e-10,
                             n_max: int = 4096) -> np.ndarray:
    """P_n = |c_n|^2 for n up to the certified truncation; branch-independent.

    Skips storing the coefficient array, which matters for strongly
    squeezed frames where the certified truncation runs into millions.
    """
    phi, _, p, top, bound = _expand(frame, tail_tolerance, n_max, 0, False)
    return (abs(phi) ** 2) * p[:top + 1]


def _expand(frame, tail_tolerance, n_max, winding, keep_coefficients):
    """Shared recurrence engine; returns (phi, d or None, p_raw, top, bound).

    p_raw holds |d_n|^2 without the |phi|^2 weight.  The inner loop stays
    in scalar Python floats/complex on purpose: the recurrence is strictly
    sequential, and per-step numpy scalars would cost ~5x more.
    """
    if not (0.0 < tail_tolerance < 1.0):
        raise DomainError(f"tail_tolerance must lie in (0, 1), got {tail_tolerance!r}")
    if n_max < 2:
        raise DomainError(f"n_max must be at least 2, got {n_max!r}")
    par = parameters(frame)
    xi, zeta = complex(par.xi), complex(par.zeta)
    phi = normalization(frame, winding)
    weight = abs(phi) ** 2
    zeta2 = zeta.real * zeta.real + zeta.imag * zeta.imag

    cap = min(n_max + 1, 4096)
    d = np.zeros(cap, dtype=complex) if keep_coefficients else None
    p = np.zeros(cap, dtype=float)
    d_prev = 1.0 + 0.0j
    d_cur = -xi
    p[0] = 1.0
    p[1] = d_cur.real * d_cur.real + d_cur.imag * d_cur.imag
    if keep_coefficients:
        d[0] = d_prev
        d[1] = d_cur
    even_e = 0.0          # |d|^2 at the even index of the pair in progress
    prev_pair = p[0] + p[1]
    ratios = deque(maxlen=_WINDOW)
    streak = 0
    sqrt = math.sqrt

    for n in range(1, n_max):
        if n + 1 >= cap:
            cap = min(cap * 2, n_max + 1)
            p = np.concatenate([p, np.zeros(cap - p.size)])
            if keep_coefficients:
                d = np.concatenate([d, np.zeros(cap - d.size, dtype=complex)])
        root = sqrt(n + 1.0)
        d_next = -(xi * d_cur) / root - (sqrt(n) / root) * (zeta * d_prev)
        d_prev = d_cur
        d_cur = d_next
        q = d_cur.real * d_cur.real + d_cur.imag * d_cur.imag
        p[n + 1] = q
        if keep_coefficients:
            d[n + 1] = d_cur

        if q == 0.0 and d_prev == 0:
            # exactly zero from here on: finite expansion (vacuum, underflow)
            nz = np.nonzero(p[:n + 2])[0]
            top = int(nz[-1]) if nz.size else 0
            return phi, d, p, top, 0.0

        if (n + 1) & 1 == 0:  # even index opens the pair (2k, 2k+1)
            even_e = q
            continue
        pair = even_e + q
        if prev_pair > 0.0:
            ratio = pair / prev_pair
        else:
            ratio = math.inf
        prev_pair = pair
        ratios.append(ratio)
        streak = streak + 1 if ratio < 1.0 else 0
        if streak >= _WINDOW and weight * pair <= tail_tolerance:
            rho = max(max(ratios), zeta2)  # window hedges the preasymptotic range
            if rho < 1.0:
                bound = weight * pair * rho / (1.0 - rho)
                if bound <= tail_tolerance:
                    return phi, d, p, n + 1, float(bound)

    raise ConvergenceError(
        f"tail not certified below {tail_tolerance:g} within n_max={n_max} "
        f"(|zeta| = {abs(zeta):.8f}, last pair mass {weight * prev_pair:.3e})")


def overlap(frame1: MotionFrame, frame2: MotionFrame,
            winding1: int = 0, winding2: int = 0) -> complex:
    """Inner product <state(frame1) | state(frame2)>.

    Evaluated as conj(Phi_1) Phi_2 times the closed Mehler kernel

        (1 - z^2)^(-1/2) exp( conj(varphi_1) varphi_2 / den
                              - conj(varphi_1)^2 g_2 / (2 conj(f_1) den)
                              - varphi_2^2 conj(g_1) / (2 f_2 den) ),
        z^2 = conj(g_1) g_2 / (conj(f_1) f_2),
        den = conj(f_1) f_2 - conj(g_1) g_2.

    Since |z|^2 = |zeta_1 zeta_2| < 1 forces Re(1 - z^2) > 0, the principal
    square root of (1 - z^2) is the analytic continuation from z = 0, and
    the result equals the number-basis sum conj(c_n(1)) c_n(2) exactly for
    the same winding inputs.  Same-frame overlap is identically 1.
    """
    f1c = frame1.f.conjugate()
    g1c = frame1.g.conjugate()
    f2, g2 = frame2.f, frame2.g
    p1c = frame1.varphi.conjugate()
    p2 = frame2.varphi
    den = f1c * f2 - g1c * g2
    z2 = (g1c * g2) / (f1c * f2)
    kernel = np.exp(p1c * p2 / den
                    - p1c * p1c * g2 / (2.0 * f1c * den)
                    - p2 * p2 * g1c / (2.0 * f2 * den)) / np.sqrt(1.0 - z2)
    return complex(normalization(frame1, winding1).conjugate()
                   * normalization(frame2, winding2) * kernel)
