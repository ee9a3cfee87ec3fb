"""Quantum speed limit bounds for the dephasing photon.

For an initial pure state the unified bound is the largest of

    tau_p = sin^2(L) / Gamma_p,    Gamma_p = (1/tau) int_0^tau ||L_t rho_t||_p dt,

with ``L`` the Bures angle between the initial and final state and
``||.||_p`` the Schatten p-norm of the generator applied to the state.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import dephasing, spectral
from .errors import NumericalDomainError, ParameterError

__all__ = [
    "QslBounds",
    "NORM_ORDERS",
    "bures_angle",
    "bures_angle_direct",
    "generator_norm",
    "generator_matrix",
    "norm_constant",
    "integral_abs_kappa_dot",
    "gamma_p",
    "qsl_time",
    "tau_qsl_formula",
]

NORM_ORDERS = (1, 2, math.inf)
_DOMAIN_TOL = 1e-9
_HERMITIAN_TOL = 1e-12
# |sin 2 alpha| at or below this is a population eigenstate
_DEGENERATE_SIN2A = 1e-14
# 20 samples per period of the fast carrier phase
_NODES_PER_CARRIER_CYCLE = 20


@dataclass(frozen=True)
class QslBounds:
    tau1: float
    tau2: float
    tau_inf: float
    tau_qsl: float
    bures_angle: float
    drive_time: float
    degenerate: bool = False


def _norm_order(p):
    if p in ("inf", "infinity"):
        return math.inf
    if p not in NORM_ORDERS:
        raise ParameterError(f"norm order must be one of 1, 2, inf; got {p!r}")
    return p


def _angle_from_overlaps(overlap, complement):
    # atan2 keeps the angle accurate near both 0 and pi/2
    return math.atan2(math.sqrt(complement), math.sqrt(overlap))


def bures_angle(alpha, kappa_tau):
    """Bures angle between ``pure_state(alpha)`` and its dephased image.

    Evaluates ``arccos sqrt(1 - (1 - Re kappa_tau) sin^2(2 alpha) / 2)``.
    """
    kappa_tau = complex(kappa_tau)
    if abs(kappa_tau) > 1.0 + _DOMAIN_TOL:
        raise NumericalDomainError(f"|kappa_tau| = {abs(kappa_tau)!r} exceeds 1")
    loss = 0.5 * (1.0 - kappa_tau.real) * math.sin(2.0 * alpha) ** 2
    if not -_DOMAIN_TOL <= loss <= 1.0 + _DOMAIN_TOL:
        raise NumericalDomainError(f"infidelity {loss!r} outside [0, 1]")
    loss = min(max(loss, 0.0), 1.0)
    return _angle_from_overlaps(1.0 - loss, loss)


def bures_angle_direct(alpha, rho_tau):
    """Bures angle from the matrix sandwich ``<psi0| rho_tau |psi0>``.

    The complementary overlap with the orthogonal state is computed the same
    way rather than as ``1 - F``.
    """
    rho = rho_tau.matrix()
    psi = np.array([math.cos(alpha), math.sin(alpha)])
    perp = np.array([-math.sin(alpha), math.cos(alpha)])
    fidelity = float(np.real(psi @ rho @ psi))
    infidelity = float(np.real(perp @ rho @ perp))
    for name, value in (("fidelity", fidelity), ("infidelity", infidelity)):
        if not -_DOMAIN_TOL <= value <= 1.0 + _DOMAIN_TOL:
            raise NumericalDomainError(f"{name} {value!r} outside [0, 1]")
    return _angle_from_overlaps(max(fidelity, 0.0), max(infidelity, 0.0))


def generator_norm(rho_dot, p):
    """Schatten p-norm of a 2x2 Hermitian matrix via its singular values."""
    p = _norm_order(p)
    m = np.asarray(rho_dot, dtype=complex)
    if m.shape != (2, 2):
        raise ParameterError(f"expected a 2x2 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > _HERMITIAN_TOL:
        raise ParameterError("matrix is not Hermitian")
    sv = np.linalg.svd(m, compute_uv=False)
    if p == math.inf:
        return float(sv.max())
    return float(np.sum(sv ** p) ** (1.0 / p))


def generator_matrix(rho0, p_spec, t):
    """``d rho_t / dt``: zero diagonal, coherence ``rho_VH * kappa_dot_t``."""
    off = complex(rho0.rho_vh) * dephasing.kappa_dot(p_spec, t)
    return np.array([[0.0, off], [off.conjugate(), 0.0]], dtype=complex)


def norm_constant(p):
    """Norm of the unit off-diagonal generator; ``||L_t rho_t||_p = c_p |rho_VH kappa_dot_t|``."""
    return generator_norm(np.array([[0.0, 1.0], [1.0, 0.0]]), p)


def _abs_kappa_dot_scalar(p, t):
    # scalar fast path for quad; the common carrier phase has unit modulus
    a = (p.sigma * p.delta_n) ** 2
    c2, s2 = p.weights
    phi = p.delta_omega * p.delta_n * t
    re = -a * t * (c2 + s2 * math.cos(phi)) - p.omega2 * p.delta_n * s2 * math.sin(phi)
    im = p.omega1 * p.delta_n * c2 - a * t * s2 * math.sin(phi) + p.omega2 * p.delta_n * s2 * math.cos(phi)
    return math.exp(-0.5 * a * t * t) * math.hypot(re, im)


def integral_abs_kappa_dot(p, tau, rtol=1e-10):
    """``int_0^tau |kappa_dot_t| dt`` by panelled adaptive quadrature."""
    if not tau > 0:
        raise ParameterError(f"tau must be positive, got {tau!r}")
    carrier = 0.5 * (p.omega1 + p.omega2) * abs(p.delta_n)
    cycles = tau * carrier / (2.0 * math.pi)
    panels = spectral.min_panels(cycles, _NODES_PER_CARRIER_CYCLE)
    return spectral.integrate(lambda t: _abs_kappa_dot_scalar(p, t), 0.0, tau,
                              rtol=rtol, panels=panels)


def gamma_p(p_spec, alpha, tau, p, rtol=1e-10, *, kappa_dot_integral=None):
    """Time-averaged generator norm ``(1/tau) int_0^tau ||L_t rho_t||_p dt``."""
    c_p = norm_constant(p)
    if kappa_dot_integral is None:
        kappa_dot_integral = integral_abs_kappa_dot(p_spec, tau, rtol)
    coherence = abs(math.sin(alpha) * math.cos(alpha))
    return c_p * coherence * kappa_dot_integral / tau


def qsl_time(p_spec, alpha, tau, rtol=1e-10):
    """All three speed-limit bounds, their maximum and the Bures angle.

    A population eigenstate (``sin 2 alpha = 0``) does not evolve; every
    bound is then exactly zero and ``degenerate`` is set.
    """
    if not tau > 0:
        raise ParameterError(f"tau must be positive, got {tau!r}")
    theta = bures_angle(alpha, dephasing.kappa(p_spec, tau))
    if abs(math.sin(2.0 * alpha)) <= _DEGENERATE_SIN2A:
        return QslBounds(0.0, 0.0, 0.0, 0.0, theta, tau, degenerate=True)
    integral = integral_abs_kappa_dot(p_spec, tau, rtol)
    sin2 = math.sin(theta) ** 2
    tau1, tau2, tau_inf = (
        sin2 / gamma_p(p_spec, alpha, tau, order, kappa_dot_integral=integral)
        for order in NORM_ORDERS)
    return QslBounds(tau1, tau2, tau_inf, max(tau1, tau2, tau_inf), theta, tau)


def tau_qsl_formula(p_spec, alpha, tau, rtol=1e-10):
    """Compact expression ``2 tau sin^2(theta) / (|sin 2 alpha| int |kappa_dot|)``."""
    theta = bures_angle(alpha, dephasing.kappa(p_spec, tau))
    return (2.0 * tau * math.sin(theta) ** 2
            / (abs(math.sin(2.0 * alpha)) * integral_abs_kappa_dot(p_spec, tau, rtol)))
