"""Closed-form dephasing factor and evolution of the polarization state.

The environment imprints ``kappa_t = integral f(w) exp(+i w dn t) dw`` on the
polarization coherence. For the two-peak mixture this is

    kappa_t = exp(-sigma^2 dn^2 t^2 / 2) * (cos^2 xi e^{i w1 dn t} + sin^2 xi e^{i w2 dn t}).

Internally the fast common phase ``e^{i w1 dn t}`` is factored out so the
modulus and its derivative only involve the slow beat phase
``phi = (w2 - w1) dn t``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import CuspError, ParameterError

__all__ = [
    "DensityMatrix2",
    "CUSP_THRESHOLD",
    "kappa",
    "kappa_dot",
    "kappa_abs",
    "abs_kappa_dt",
    "modulus_and_slope",
    "evolve",
    "pure_state",
]

#: Below this modulus ``|kappa_t|`` is treated as an exact interference zero.
CUSP_THRESHOLD = 1e-13
_STATE_TOL = 1e-12


def _scalar_or_array(z):
    return complex(z) if np.ndim(z) == 0 else z


def _envelope(p, t):
    a = (p.sigma * p.delta_n) ** 2
    return np.exp(-0.5 * a * t * t), a


def _beat(p, t):
    c2, s2 = p.weights
    phi = p.delta_omega * p.delta_n * t
    return c2 + s2 * np.exp(1j * phi), phi


def kappa(p, t):
    """Dephasing factor ``kappa_t`` (complex); ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    env, _ = _envelope(p, t)
    beat, _ = _beat(p, t)
    return _scalar_or_array(env * np.exp(1j * p.omega1 * p.delta_n * t) * beat)


def kappa_dot(p, t):
    """Analytic time derivative of ``kappa_t``."""
    t = np.asarray(t, dtype=float)
    env, a = _envelope(p, t)
    c2, s2 = p.weights
    phi = p.delta_omega * p.delta_n * t
    bracket = ((-a * t + 1j * p.omega1 * p.delta_n) * c2
               + (-a * t + 1j * p.omega2 * p.delta_n) * s2 * np.exp(1j * phi))
    return _scalar_or_array(env * np.exp(1j * p.omega1 * p.delta_n * t) * bracket)


def kappa_abs(p, t):
    """``|kappa_t|``, accurate down to the interference zeros."""
    t = np.asarray(t, dtype=float)
    env, _ = _envelope(p, t)
    beat, _ = _beat(p, t)
    out = env * np.abs(beat)
    return float(out) if out.ndim == 0 else out


def modulus_and_slope(p, t):
    """Vectorized ``(|kappa_t|, d|kappa_t|/dt)``.

    The slope equals ``Re(conj(kappa) kappa_dot) / |kappa|``, which after
    removing the common phase reduces to
    ``env * (-a t |B|^2 - dw dn c^2 s^2 sin(phi)) / |B|`` with ``B`` the beat
    factor. Where ``|kappa_t| < CUSP_THRESHOLD`` the slope is NaN.
    """
    t = np.asarray(t, dtype=float)
    env, a = _envelope(p, t)
    beat, phi = _beat(p, t)
    c2, s2 = p.weights
    mod_b = np.abs(beat)
    modulus = env * mod_b
    cusp = modulus < CUSP_THRESHOLD
    safe_b = np.where(cusp, 1.0, mod_b)
    numer = -a * t * mod_b ** 2 - p.delta_omega * p.delta_n * c2 * s2 * np.sin(phi)
    slope = np.where(cusp, np.nan, env * numer / safe_b)
    if modulus.ndim == 0:
        return float(modulus), float(slope)
    return modulus, slope


def abs_kappa_dt(p, t):
    """Derivative of ``|kappa_t|`` at a single time.

    Raises
    ------
    CuspError
        If ``|kappa_t|`` vanishes, where the modulus has a corner.
    """
    modulus, slope = modulus_and_slope(p, float(t))
    if modulus < CUSP_THRESHOLD:
        raise CuspError(float(t))
    return slope


@dataclass(frozen=True)
class DensityMatrix2:
    """Qubit state in the (V, H) basis, stored as its upper triangle."""

    rho_vv: float
    rho_hh: float
    rho_vh: complex

    def __post_init__(self):
        if abs(self.rho_vv + self.rho_hh - 1.0) > _STATE_TOL:
            raise ParameterError(f"trace must be 1, got {self.rho_vv + self.rho_hh!r}")
        if self.rho_vv < -_STATE_TOL or self.rho_hh < -_STATE_TOL:
            raise ParameterError("populations must be non-negative")
        if self.determinant < -_STATE_TOL:
            raise ParameterError(f"state is not positive: det = {self.determinant!r}")

    @property
    def determinant(self):
        return self.rho_vv * self.rho_hh - abs(self.rho_vh) ** 2

    @property
    def trace(self):
        return self.rho_vv + self.rho_hh

    def matrix(self):
        return np.array([[self.rho_vv, self.rho_vh],
                         [np.conj(self.rho_vh), self.rho_hh]], dtype=complex)

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.matrix())


def evolve(rho0, p, t):
    """State after dephasing for time ``t``; populations are untouched."""
    return DensityMatrix2(rho0.rho_vv, rho0.rho_hh, complex(rho0.rho_vh) * kappa(p, t))


def pure_state(alpha):
    """``|psi> = sin(alpha)|H> + cos(alpha)|V>`` as a density matrix."""
    c, s = math.cos(alpha), math.sin(alpha)
    return DensityMatrix2(c * c, s * s, complex(s * c, 0.0))
