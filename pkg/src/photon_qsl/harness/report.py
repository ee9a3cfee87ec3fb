"""Critical-angle report and the built-in oracle self-checks."""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import dephasing, nonmarkov, qsl, spectral
from ..errors import NoTransitionError

__all__ = ["CriticalReport", "solve_critical", "format_critical", "CheckResult", "self_check"]


@dataclass(frozen=True)
class CriticalReport:
    closed_form: Optional[tuple]
    bisection: Optional[tuple]
    numeric: Optional[tuple]
    message: str = ""

    @property
    def transition(self):
        return self.closed_form is not None


def solve_critical(cfg, numeric=True, xtol=1e-9):
    """Transition angles three ways.

    ``closed_form`` evaluates the arccos expression, ``bisection`` finds the
    zeros of the closed-form margin independently, and ``numeric`` bisects
    on the existence of increasing intervals of ``|kappa_t|`` (the measure
    actually reported in sweeps).
    """
    p, tau = cfg.spectral, cfg.tau
    try:
        closed = nonmarkov.critical_xi(p, tau)
    except NoTransitionError as exc:
        return CriticalReport(None, None, None, f"no transition: {exc}")
    bis = nonmarkov.critical_xi_bisection(p, tau)
    num = None
    if numeric:
        try:
            num = nonmarkov.critical_xi_numeric(p, tau, xtol=xtol,
                                                root_tol=cfg.tolerances.root_abs)
        except NoTransitionError:
            num = None
    return CriticalReport(closed, bis, num)


def format_critical(report):
    if not report.transition:
        return report.message + "\n"
    lo, hi = report.closed_form
    lines = [
        f"closed_form        xi_low = {lo:.12f}  xi_high = {hi:.12f}  sum - pi/2 = {lo + hi - math.pi / 2:.3e}",
    ]
    blo, bhi = report.bisection
    lines.append(f"bisection          xi_low = {blo:.12f}  xi_high = {bhi:.12f}  "
                 f"max |diff| = {max(abs(blo - lo), abs(bhi - hi)):.3e}")
    if report.numeric is not None:
        nlo, nhi = report.numeric
        lines.append(f"numeric_blp        xi_low = {nlo:.12f}  xi_high = {nhi:.12f}  "
                     f"max |diff| = {max(abs(nlo - lo), abs(nhi - hi)):.3e}")
    else:
        lines.append("numeric_blp        no increasing interval at xi = pi/4")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name, error, tol):
    return CheckResult(name, bool(error <= tol), f"error {error:.3e} (tol {tol:.0e})")


def self_check(cfg):
    """Quick oracle comparisons at the configured parameters."""
    p, tau, alpha = cfg.spectral, cfg.tau, cfg.alpha
    rng = np.random.default_rng(2024)
    results = []

    ts = np.linspace(0.0, 2.0 * tau, 25)
    err = max(abs(dephasing.kappa(p, t) - spectral.characteristic_numeric(p, t)) for t in ts)
    results.append(_check("kappa vs frequency quadrature", err, 1e-8))

    results.append(_check("density normalization", abs(spectral.integrate_pdf(p) - 1.0), 1e-10))

    h = 1e-6
    err = 0.0
    for t in rng.uniform(0.0, tau, 10):
        fd = (dephasing.kappa(p, t + h) - dephasing.kappa(p, t - h)) / (2 * h)
        exact = dephasing.kappa_dot(p, t)
        err = max(err, abs(fd - exact) / abs(exact))
    results.append(_check("kappa_dot vs central difference", err, 1e-6))

    err = 0.0
    for a in rng.uniform(0.0, math.pi / 2, 10):
        rho = dephasing.evolve(dephasing.pure_state(a), p, tau)
        err = max(err, abs(qsl.bures_angle(a, dephasing.kappa(p, tau))
                           - qsl.bures_angle_direct(a, rho)))
    results.append(_check("Bures angle formula vs overlap", err, 1e-12))

    b = qsl.qsl_time(p, alpha, tau, rtol=cfg.tolerances.quadrature_rel)
    if b.degenerate:
        results.append(CheckResult("norm ratios tau_inf = 2 tau1 = sqrt2 tau2", True,
                                   "degenerate state, all bounds 0"))
    else:
        err = max(abs(b.tau_inf - 2 * b.tau1), abs(b.tau_inf - math.sqrt(2) * b.tau2)) / b.tau_inf
        results.append(_check("norm ratios tau_inf = 2 tau1 = sqrt2 tau2", err, 1e-12))

    err = 0.0
    checked = 0
    for t in rng.uniform(0.0, tau, 40):
        if dephasing.kappa_abs(p, t) <= 0.1:
            continue
        err = max(err, abs(nonmarkov.h_t(p, t) - max(0.0, nonmarkov.h_t_trace_norm(p, t))))
        checked += 1
    results.append(_check(f"h_t vs trace-norm oracle ({checked} pts)", err, 1e-5))

    lo, hi = p.window
    if lo <= tau <= hi * (1 + 1e-12):
        try:
            closed = nonmarkov.critical_xi(p, tau)
            bis = nonmarkov.critical_xi_bisection(p, tau)
            err = max(abs(closed[0] - bis[0]), abs(closed[1] - bis[1]))
            results.append(_check("critical xi closed form vs bisection", err, 1e-6))
        except NoTransitionError:
            results.append(CheckResult("critical xi closed form vs bisection", True, "no transition"))
    return results
