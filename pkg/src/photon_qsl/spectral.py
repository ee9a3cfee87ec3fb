"""Two-peaked Gaussian frequency environment and the quadrature oracle.

Units throughout the package: angular frequencies in rad/ps and times in
ps, so the experimental parameters read ``omega1 = 2676``, ``sigma = 1.8``
and the drive time is of order 40 ps.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate

from .errors import ParameterError, QuadratureError

__all__ = [
    "SpectralParams",
    "EXPERIMENTAL",
    "two_peak_pdf",
    "pdf",
    "integration_domain",
    "integrate",
    "integrate_pdf",
    "characteristic",
    "characteristic_numeric",
]

#: Half-width of the truncated integration domain around each peak, in sigmas.
TAIL_SIGMAS = 12.0
#: Gauss-Kronrod rule used by QUADPACK's qags; nodes per panel on first pass.
_NODES_PER_PANEL = 21
_XI_SLACK = 1e-12


@dataclass(frozen=True)
class SpectralParams:
    """Environment of the polarization qubit.

    Parameters
    ----------
    omega1, omega2 : float
        Peak centres in rad/ps, ``omega2 > omega1``.
    sigma : float
        Common peak width in rad/ps.
    xi : float
        Peak-weight angle in ``[0, pi/2]``; weights are ``cos^2 xi`` and
        ``sin^2 xi``.
    delta_n : float
        Birefringence ``n_V - n_H`` of the quartz plate (non-zero).
    """

    omega1: float
    omega2: float
    sigma: float
    xi: float
    delta_n: float

    def __post_init__(self):
        for name in ("omega1", "omega2", "sigma", "xi", "delta_n"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma!r}")
        if not self.omega2 > self.omega1:
            raise ParameterError(
                f"omega2 must exceed omega1, got omega1={self.omega1!r}, omega2={self.omega2!r}")
        if self.delta_n == 0:
            raise ParameterError("delta_n must be non-zero")
        if not -_XI_SLACK <= self.xi <= math.pi / 2 + _XI_SLACK:
            raise ParameterError(f"xi must lie in [0, pi/2], got {self.xi!r}")

    @property
    def delta_omega(self):
        """Peak separation ``omega2 - omega1`` (rad/ps)."""
        return self.omega2 - self.omega1

    @property
    def beat_period(self):
        """Half period ``pi / (delta_omega |delta_n|)`` of the two-peak beat, in ps.

        ``|kappa_t|`` reaches its interference minimum at odd multiples of
        this time.
        """
        return math.pi / (self.delta_omega * abs(self.delta_n))

    @property
    def window(self):
        """Drive-time window ``[pi, 2 pi] / (delta_omega |delta_n|)`` in ps."""
        return self.beat_period, 2.0 * self.beat_period

    @property
    def weights(self):
        return math.cos(self.xi) ** 2, math.sin(self.xi) ** 2

    def with_xi(self, xi):
        return SpectralParams(self.omega1, self.omega2, self.sigma, xi, self.delta_n)


#: Experimental parameters: 2.676 and 2.692 PHz peaks, 1.8 THz width,
#: birefringence 0.01, equal peak weights.
EXPERIMENTAL = SpectralParams(omega1=2676.0, omega2=2692.0, sigma=1.8, xi=math.pi / 4, delta_n=0.01)


def _gaussian(omega, centre, sigma):
    z = (omega - centre) / sigma
    return np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * sigma)


def two_peak_pdf(omega, omega1, omega2, sigma, xi):
    """Unvalidated two-peak mixture density; accepts scalars or arrays.

    Peak order is not enforced here, which lets symmetry checks swap the
    peaks freely.
    """
    if isinstance(omega, (float, int)):
        norm = math.sqrt(2.0 * math.pi) * sigma
        z1 = (omega - omega1) / sigma
        z2 = (omega - omega2) / sigma
        return (math.cos(xi) ** 2 * math.exp(-0.5 * z1 * z1)
                + math.sin(xi) ** 2 * math.exp(-0.5 * z2 * z2)) / norm
    omega = np.asarray(omega, dtype=float)
    out = (math.cos(xi) ** 2 * _gaussian(omega, omega1, sigma)
           + math.sin(xi) ** 2 * _gaussian(omega, omega2, sigma))
    return out if out.ndim else float(out)


def pdf(omega, p):
    """Probability density of finding the photon at angular frequency ``omega``."""
    return two_peak_pdf(omega, p.omega1, p.omega2, p.sigma, p.xi)


def integration_domain(p):
    """Truncated support ``[omega1 - 12 sigma, omega2 + 12 sigma]``."""
    return p.omega1 - TAIL_SIGMAS * p.sigma, p.omega2 + TAIL_SIGMAS * p.sigma


def min_panels(cycles, nodes_per_cycle):
    """Panels needed so a 21-node rule samples each cycle ``nodes_per_cycle`` times."""
    return max(1, math.ceil(abs(cycles) * nodes_per_cycle / _NODES_PER_PANEL))


def integrate(func, a, b, *, rtol=1e-10, atol=0.0, panels=1, limit=200):
    """Adaptive Gauss-Kronrod quadrature of a real scalar function.

    ``[a, b]`` is split into ``panels`` equal pieces before adaptive
    refinement starts, which enforces a minimum node density for
    oscillatory integrands.

    Raises
    ------
    QuadratureError
        If any panel fails to converge; carries the accumulated error
        estimate.
    """
    if panels < 1:
        raise ParameterError(f"panels must be >= 1, got {panels!r}")
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    err_total = 0.0
    panel_atol = atol / panels
    for lo, hi in zip(edges[:-1], edges[1:]):
        res = _integrate.quad(func, lo, hi, epsabs=panel_atol, epsrel=rtol,
                              limit=limit, full_output=1)
        value, err = res[0], res[1]
        total += value
        err_total += err
        if len(res) > 3:
            raise QuadratureError(
                f"quadrature on [{lo!r}, {hi!r}] did not converge: {res[3].strip()}",
                error_estimate=err_total)
    return total


def integrate_pdf(p, rtol=1e-10):
    """Total probability mass of the density over its truncated domain."""
    lo, hi = integration_domain(p)
    return integrate(lambda w: pdf(w, p), lo, hi, rtol=rtol, atol=rtol)


def characteristic(density, x, lo, hi, rtol=1e-10):
    """``integral density(w) exp(i w x) dw`` over ``[lo, hi]`` for any density.

    Real and imaginary parts are integrated separately. The phase is
    referenced to the domain centre so the oscillating factor stays small
    in argument; ``x`` plays the role of ``delta_n * t``.
    """
    centre = 0.5 * (lo + hi)
    cycles = x * (hi - lo) / (2.0 * math.pi)
    panels = min_panels(cycles, 10)
    re = integrate(lambda w: density(w) * math.cos((w - centre) * x), lo, hi,
                   rtol=rtol, atol=rtol, panels=panels)
    im = integrate(lambda w: density(w) * math.sin((w - centre) * x), lo, hi,
                   rtol=rtol, atol=rtol, panels=panels)
    return complex(re, im) * complex(math.cos(centre * x), math.sin(centre * x))


def characteristic_numeric(p, t, rtol=1e-10):
    """Dephasing factor at time ``t`` by direct quadrature over frequencies."""
    if t < 0:
        raise ParameterError(f"t must be non-negative, got {t!r}")
    lo, hi = integration_domain(p)
    return characteristic(lambda w: pdf(w, p), p.delta_n * t, lo, hi, rtol=rtol)
