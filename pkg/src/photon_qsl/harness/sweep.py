"""Single-point evaluation and linear parameter sweeps."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial

from .. import dephasing, nonmarkov, qsl
from ..errors import PhotonQslError
from .config import ConfigError

__all__ = ["SweepRow", "EvaluationError", "run_point", "run_sweep", "point_at"]


@dataclass(frozen=True)
class SweepRow:
    value: float
    tau1: float
    tau2: float
    tau_inf: float
    tau_qsl: float
    n_blp: float
    n_rhp: float
    rhp_saturated: bool
    kappa_tau_abs: float
    bures_angle: float
    degenerate: bool = False


class EvaluationError(PhotonQslError):
    """A quantity failed at one grid point; the cause is chained."""

    def __init__(self, quantity, value, cause):
        super().__init__(f"{quantity} failed at {value!r}: {cause}")
        self.quantity = quantity
        self.value = value
        self.cause = cause


def _evaluate(cfg, value):
    p, tol = cfg.spectral, cfg.tolerances
    try:
        bounds = qsl.qsl_time(p, cfg.alpha, cfg.tau, rtol=tol.quadrature_rel)
    except PhotonQslError as exc:
        raise EvaluationError("qsl_time", value, exc) from exc
    try:
        report = nonmarkov.analyze(p, cfg.tau, epsilon_floor=tol.epsilon_floor,
                                   root_tol=tol.root_abs)
    except PhotonQslError as exc:
        raise EvaluationError("non-Markovianity", value, exc) from exc
    return SweepRow(
        value=value,
        tau1=bounds.tau1,
        tau2=bounds.tau2,
        tau_inf=bounds.tau_inf,
        tau_qsl=bounds.tau_qsl,
        n_blp=report.n_blp,
        n_rhp=report.n_rhp,
        rhp_saturated=report.rhp_saturated,
        kappa_tau_abs=dephasing.kappa_abs(p, cfg.tau),
        bures_angle=bounds.bures_angle,
        degenerate=bounds.degenerate,
    )


def run_point(cfg):
    """Every reported quantity at the configured point.

    The row's ``value`` column carries ``xi``.
    """
    if cfg.sweep is not None:
        raise ConfigError("run_point takes a configuration without a sweep section")
    return _evaluate(cfg, cfg.spectral.xi)


def point_at(cfg, value):
    """The configuration of one sweep grid point, sweep section removed."""
    variable = cfg.sweep.variable
    base = cfg.without_sweep()
    if variable == "xi":
        return replace(base, spectral=base.spectral.with_xi(value))
    if variable == "alpha":
        return replace(base, alpha=value)
    return replace(base, tau=value)


def _row(cfg, value):
    return _evaluate(point_at(cfg, value), value)


def run_sweep(cfg, workers=1):
    """Rows over the inclusive linear grid, in grid order.

    ``workers > 1`` evaluates points in separate processes; results are
    identical to the sequential run because each point is a pure function
    of its configuration.
    """
    if cfg.sweep is None:
        raise ConfigError("run_sweep needs a sweep section")
    grid = cfg.sweep.grid()
    task = partial(_row, cfg)
    if workers <= 1:
        return [task(v) for v in grid]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, grid))
