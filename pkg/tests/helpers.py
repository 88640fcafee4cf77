"""Shared builders for the test suite."""

import math

import numpy as np

from cssdyn import MotionFrame


def hyperboloid_frame(rng, zeta_max=0.9, displacement=1.0, t=0.0):
    """Random frame satisfying |f|^2 - |g|^2 = 1 exactly (up to rounding).

    |g/f| is uniform on [0, zeta_max], all phases uniform, varphi complex
    normal scaled by `displacement`.
    """
    r = zeta_max * rng.uniform()
    mod_f = 1.0 / math.sqrt(1.0 - r * r)
    f = mod_f * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
    g = r * f * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
    varphi = displacement * (rng.normal() + 1j * rng.normal()) / math.sqrt(2.0)
    return MotionFrame(t=t, f=complex(f), g=complex(g), varphi=complex(varphi))


def poisson_reference(xi_abs, n_levels):
    """P_n = e^{-|xi|^2} |xi|^{2n} / n! without factorial overflow."""
    lam = xi_abs * xi_abs
    out = np.empty(n_levels)
    out[0] = math.exp(-lam)
    for n in range(1, n_levels):
        out[n] = out[n - 1] * lam / n
    return out
