"""Non-Markovianity of the dephasing map.

Both measures reduce to the behaviour of ``|kappa_t|``: information flows
back (BLP) and divisibility breaks (RHP) exactly on the time intervals where
``|kappa_t|`` grows. Those intervals are located numerically, and the
measures follow from the modulus at the interval endpoints:

    N_BLP = sum |kappa(t_end)| - |kappa(t_start)|
    N_RHP = sum ln|kappa(t_end)| - ln|kappa(t_start)|

An interval that opens at an exact interference zero makes ``N_RHP``
diverge; it is then reported clamped at ``epsilon_floor`` and flagged.
"""
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import optimize

from . import dephasing
from .dephasing import CUSP_THRESHOLD, modulus_and_slope
from .errors import CuspError, NoTransitionError, ParameterError

__all__ = [
    "Interval",
    "MonotoneIntervals",
    "RhpValue",
    "NonMarkovReport",
    "find_increasing_intervals",
    "blp",
    "blp_closed_form",
    "h_t",
    "intermediate_eigenvalues",
    "h_t_trace_norm",
    "rhp",
    "critical_xi",
    "critical_xi_bisection",
    "critical_xi_numeric",
    "analyze",
]

POINTS_PER_BEAT = 40
_MAX_DOUBLINGS = 8
_WINDOW_RTOL = 1e-12


class Interval(NamedTuple):
    start: float
    end: float
    cusp_start: bool = False
    cusp_end: bool = False


@dataclass(frozen=True)
class MonotoneIntervals:
    """Disjoint, ordered sub-intervals of ``[0, tau]`` on which ``|kappa_t|`` increases."""

    intervals: tuple = ()
    tau: float = 0.0

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, i):
        return self.intervals[i]

    @property
    def starts_at_cusp(self):
        return any(iv.cusp_start for iv in self.intervals)


class RhpValue(NamedTuple):
    value: float
    saturated: bool


@dataclass(frozen=True)
class NonMarkovReport:
    n_blp: float
    n_rhp: float
    rhp_saturated: bool
    intervals: MonotoneIntervals = field(default_factory=MonotoneIntervals)
    xi_low: Optional[float] = None
    xi_high: Optional[float] = None


def _slope(p, t):
    _, s = modulus_and_slope(p, t)
    return s


def _increasing(p, t):
    s = _slope(p, t)
    return s > 0  # NaN at a cusp compares False


def _bisect_boundary(p, a, b, tol):
    """Shrink ``[a, b]`` around the switch of the increasing predicate."""
    inc_a = _increasing(p, a)
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if _increasing(p, mid) == inc_a:
            a = mid
        else:
            b = mid
    return a, b


def _is_cusp(p, a, b):
    mid = 0.5 * (a + b)
    modulus = dephasing.kappa_abs(p, mid)
    if modulus < CUSP_THRESHOLD:
        return True
    slopes = [abs(s) if math.isfinite(s) else math.inf for s in (_slope(p, a), _slope(p, b))]
    # at a smooth extremum the slope vanishes across the bracket; at a corner
    # the modulus is no larger than slope * distance to the zero
    return modulus <= 4.0 * max(slopes) * (b - a)


def _refine_local_maxima(p, t, slope, tol):
    """Extra samples at interior slope maxima that the grid saw as non-positive."""
    extra = []
    s = np.where(np.isfinite(slope), slope, -np.inf)
    idx = np.nonzero((s[1:-1] >= s[:-2]) & (s[1:-1] >= s[2:]) & (s[1:-1] <= 0)
                     & np.isfinite(s[1:-1]))[0] + 1
    for i in idx:
        res = optimize.minimize_scalar(lambda x: -_slope(p, x), bounds=(t[i - 1], t[i + 1]),
                                       method="bounded", options={"xatol": tol})
        if res.success and -res.fun > 0:
            extra.append(float(res.x))
    return extra


def _scan(p, tau, n, tol):
    t = np.linspace(0.0, tau, n)
    _, slope = modulus_and_slope(p, t)
    extra = _refine_local_maxima(p, t, slope, tol)
    if extra:
        t = np.unique(np.concatenate([t, extra]))
        _, slope = modulus_and_slope(p, t)
    inc = slope > 0
    intervals = []
    start = None
    cusp_start = False
    if inc[0]:
        start = 0.0
    for i in range(1, len(t)):
        if inc[i] == inc[i - 1]:
            continue
        a, b = _bisect_boundary(p, float(t[i - 1]), float(t[i]), tol)
        boundary = 0.5 * (a + b)
        cusp = _is_cusp(p, a, b)
        if inc[i]:
            start, cusp_start = boundary, cusp
        else:
            intervals.append(Interval(start, boundary, cusp_start, cusp))
            start = None
    if start is not None:
        intervals.append(Interval(start, float(tau), cusp_start, False))
    return tuple(intervals)


def find_increasing_intervals(p, tau, root_tol=1e-12, points_per_beat=POINTS_PER_BEAT):
    """Intervals of ``[0, tau]`` on which ``|kappa_t|`` strictly increases.

    A grid with ``points_per_beat`` samples per beat half-period is scanned
    for sign changes of ``d|kappa|/dt`` (plus refined interior maxima of the
    slope); each switch is bisected to ``root_tol`` ps. The grid is doubled
    until two successive densities agree on the interval count.
    """
    if not tau > 0:
        raise ParameterError(f"tau must be positive, got {tau!r}")
    n = max(points_per_beat + 1, math.ceil(tau / p.beat_period * points_per_beat) + 1)
    found = _scan(p, tau, n, root_tol)
    for _ in range(_MAX_DOUBLINGS):
        n = 2 * n - 1
        finer = _scan(p, tau, n, root_tol)
        if len(finer) == len(found):
            found = finer
            break
        found = finer
    return MonotoneIntervals(found, float(tau))


def blp(p, tau, intervals=None, root_tol=1e-12):
    """Information-backflow measure from the increasing-interval endpoints."""
    if intervals is None:
        intervals = find_increasing_intervals(p, tau, root_tol)
    total = 0.0
    for iv in intervals:
        rise = dephasing.kappa_abs(p, iv.end) - (0.0 if iv.cusp_start else dephasing.kappa_abs(p, iv.start))
        total += max(rise, 0.0)
    return total


def _check_window(p, tau):
    lo, hi = p.window
    slack = _WINDOW_RTOL * hi
    if not lo - slack <= tau <= hi + slack:
        raise ParameterError(
            f"tau = {tau!r} ps outside the closed-form window [{lo!r}, {hi!r}] ps")


def _closed_form_margin(p, tau):
    floor = abs(math.cos(2.0 * p.xi)) * math.exp(-0.5 * (math.pi * p.sigma / p.delta_omega) ** 2)
    return dephasing.kappa_abs(p, tau) - floor


def blp_closed_form(p, tau):
    """``max(0, |kappa_tau| - |cos 2 xi| exp(-(pi sigma / dw)^2 / 2))``.

    Only defined for ``tau`` in ``p.window``. It assumes ``|kappa|`` bottoms
    out at ``pi/(dw dn)`` and is still rising at ``tau``; the envelope shifts
    both extrema, so it departs from :func:`blp` by about 1% at the
    experimental parameters.
    """
    _check_window(p, tau)
    return max(0.0, _closed_form_margin(p, tau))


def h_t(p, t):
    """Divisibility-breaking rate ``max(0, d ln|kappa_t| / dt)``.

    Follows from the leading-order eigenvalues of the intermediate map acting
    on half of a maximally entangled pair, ``1/2 +- 1/2 sqrt(1 + 2 Re(kappa_dot/kappa) eps)``.
    """
    k = dephasing.kappa(p, t)
    if abs(k) < CUSP_THRESHOLD:
        raise CuspError(float(t))
    return max(0.0, (dephasing.kappa_dot(p, t) / k).real)


def intermediate_eigenvalues(p, t, eps):
    """First-order non-zero eigenvalues of ``(Lambda_{t+eps,t} x 1) |Psi><Psi|``."""
    k = dephasing.kappa(p, t)
    if abs(k) < CUSP_THRESHOLD:
        raise CuspError(float(t))
    rate = dephasing.kappa_dot(p, t) / k
    root = math.sqrt(1.0 + (rate + rate.conjugate()).real * eps)
    return 0.5 + 0.5 * root, 0.5 - 0.5 * root


def choi_state(ratio):
    """``(Lambda x 1)|Psi><Psi|`` for a coherence multiplier ``ratio``.

    Basis order (V, H) on both factors; ``|Psi> = (|VV> + |HH>)/sqrt(2)``.
    """
    def channel(unit):
        out = unit.astype(complex)
        out[0, 1] *= ratio
        out[1, 0] *= np.conj(ratio)
        return out

    state = np.zeros((4, 4), dtype=complex)
    for j in range(2):
        for k in range(2):
            unit = np.zeros((2, 2))
            unit[j, k] = 1.0
            state += 0.5 * np.kron(channel(unit), unit)
    return state


def h_t_trace_norm(p, t, eps=1e-7):
    """Finite-``eps`` estimate ``(||(Lambda_{t+eps,t} x 1) rho||_1 - 1) / eps``."""
    k0 = dephasing.kappa(p, t)
    if abs(k0) < CUSP_THRESHOLD:
        raise CuspError(float(t))
    ratio = dephasing.kappa(p, t + eps) / k0
    trace_norm = np.linalg.svd(choi_state(ratio), compute_uv=False).sum()
    return (trace_norm - 1.0) / eps


def rhp(p, tau, intervals=None, epsilon_floor=CUSP_THRESHOLD, root_tol=1e-12):
    """Divisibility measure; saturates when an interval opens at a zero of ``|kappa|``."""
    if intervals is None:
        intervals = find_increasing_intervals(p, tau, root_tol)
    total = 0.0
    saturated = False
    for iv in intervals:
        start = dephasing.kappa_abs(p, iv.start)
        if iv.cusp_start or start < epsilon_floor:
            start = epsilon_floor
            saturated = True
        total += max(math.log(dephasing.kappa_abs(p, iv.end)) - math.log(start), 0.0)
    return RhpValue(total, saturated)


def _critical_q(p, tau):
    _check_window(p, tau)
    u = math.exp((p.sigma * p.delta_n * tau) ** 2)
    v = math.exp((math.pi * p.sigma / p.delta_omega) ** 2)
    delta = 0.5 * p.delta_omega * abs(p.delta_n) * tau
    denom = u - v * math.sin(delta) ** 2
    if denom <= 1e-15 * u:
        raise NoTransitionError(f"no transition at tau = {tau!r} ps (degenerate window edge)")
    q = math.sqrt(v) * abs(math.cos(delta)) / math.sqrt(denom)
    if q > 1.0:
        raise NoTransitionError(f"q = {q!r} > 1: the map is Markovian for every xi")
    return q


def critical_xi(p, tau):
    """Closed-form transition angles ``(xi_low, xi_high)``, ascending.

    These solve ``blp_closed_form = 0``; the non-Markovian region is the
    open interval between them.

    Raises
    ------
    NoTransitionError
        If ``q > 1``, i.e. the whole ``xi`` range is Markovian.
    """
    q = _critical_q(p, tau)
    a, b = 0.5 * math.acos(q), 0.5 * math.acos(-q)
    return min(a, b), max(a, b)


def critical_xi_bisection(p, tau, xtol=1e-12):
    """Roots of the unclamped closed-form margin found by bisection in ``xi``."""
    _check_window(p, tau)

    def margin(xi):
        return _closed_form_margin(p.with_xi(xi), tau)

    quarter = math.pi / 4
    if margin(quarter) <= 0:
        raise NoTransitionError("closed-form margin is non-positive at xi = pi/4")
    lo = optimize.bisect(margin, 0.0, quarter, xtol=xtol)
    hi = optimize.bisect(margin, quarter, math.pi / 2, xtol=xtol)
    return lo, hi


def critical_xi_numeric(p, tau, xtol=1e-9, root_tol=1e-12):
    """Transition angles of the numerically evaluated BLP measure.

    Bisects the predicate "some increasing interval exists" on
    ``[0, pi/4]`` and ``[pi/4, pi/2]`` independently.
    """
    def nonmarkovian(xi):
        return len(find_increasing_intervals(p.with_xi(xi), tau, root_tol)) > 0

    quarter = math.pi / 4
    if not nonmarkovian(quarter):
        raise NoTransitionError("no increasing interval at xi = pi/4")

    def switch(a, b):
        state_a = nonmarkovian(a)
        while b - a > xtol:
            mid = 0.5 * (a + b)
            if nonmarkovian(mid) == state_a:
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)

    return switch(0.0, quarter), switch(quarter, math.pi / 2)


def analyze(p, tau, *, epsilon_floor=CUSP_THRESHOLD, root_tol=1e-12, with_critical=False):
    """Both measures, the intervals and optionally the closed-form critical pair."""
    intervals = find_increasing_intervals(p, tau, root_tol)
    n_blp = blp(p, tau, intervals)
    n_rhp = rhp(p, tau, intervals, epsilon_floor)
    xi_low = xi_high = None
    if with_critical:
        try:
            xi_low, xi_high = critical_xi(p, tau)
        except NoTransitionError:
            pass
    return NonMarkovReport(n_blp, n_rhp.value, n_rhp.saturated, intervals, xi_low, xi_high)
