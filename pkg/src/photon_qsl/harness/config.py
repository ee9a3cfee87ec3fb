"""Flat ``key = value`` run configuration.

One assignment per line, ``#`` starts a comment, keys are namespaced
(``spectral.xi_rad``). Numeric values accept simple arithmetic with ``pi``
(``pi/4``, ``0.5*pi``); ``drive.tau_ps`` and the bounds of a ``tau`` sweep
also accept ``window-end``, which resolves to ``2 pi / (dw |dn|)``.
"""
import ast
import math
import operator
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Optional

from ..errors import ParameterError, PhotonQslError
from ..spectral import SpectralParams

__all__ = [
    "ConfigError",
    "SweepSpec",
    "Tolerances",
    "OutputSpec",
    "RunConfig",
    "KEYS",
    "DEFAULT_SWEEP",
    "parse_config",
    "load_config",
    "default_config",
    "evaluate_expression",
    "config_to_text",
    "config_to_dict",
]

SWEEP_VARIABLES = ("xi", "alpha", "tau")
FORMATS = ("csv", "json")
WINDOW_END = "window-end"

KEYS = (
    "spectral.omega1_rad_per_ps",
    "spectral.omega2_rad_per_ps",
    "spectral.sigma_rad_per_ps",
    "spectral.xi_rad",
    "spectral.delta_n",
    "state.alpha_rad",
    "drive.tau_ps",
    "sweep.variable",
    "sweep.start",
    "sweep.stop",
    "sweep.points",
    "tolerances.quadrature_rel",
    "tolerances.root_abs",
    "tolerances.epsilon_floor",
    "output.format",
    "output.path",
)


class ConfigError(PhotonQslError, ValueError):
    """Malformed configuration text or out-of-domain setting."""


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int

    def grid(self):
        step = (self.stop - self.start) / (self.points - 1)
        values = [self.start + i * step for i in range(self.points)]
        values[-1] = self.stop
        return values


@dataclass(frozen=True)
class Tolerances:
    quadrature_rel: float = 1e-10
    root_abs: float = 1e-12
    epsilon_floor: float = 1e-13


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: Optional[str] = None


@dataclass(frozen=True)
class RunConfig:
    spectral: SpectralParams
    alpha: float
    tau: float
    sweep: Optional[SweepSpec] = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: OutputSpec = field(default_factory=OutputSpec)

    def without_sweep(self):
        return replace(self, sweep=None)


DEFAULT_SWEEP = {"sweep.variable": "xi", "sweep.start": "0", "sweep.stop": "pi/2",
                 "sweep.points": "201"}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def evaluate_expression(text):
    """Evaluate a numeric literal or arithmetic over numbers and ``pi``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse value {text!r}") from exc

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](walk(node.operand))
        raise ConfigError(f"unsupported expression {text!r}")

    try:
        value = walk(tree)
    except ZeroDivisionError as exc:
        raise ConfigError(f"division by zero in {text!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"value {text!r} is not finite")
    return value


def _default_text():
    return resources.files(__package__).joinpath("default.cfg").read_text()


def _parse_pairs(text, source="<config>"):
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        pairs[key] = value
    return pairs


def _number(pairs, key, tau_window=None):
    text = pairs.get(key, "")
    if not text:
        raise ConfigError(f"missing value for {key}")
    if tau_window is not None and text == WINDOW_END:
        return tau_window
    return evaluate_expression(text)


def _resolve(pairs):
    try:
        spectral = SpectralParams(
            omega1=_number(pairs, "spectral.omega1_rad_per_ps"),
            omega2=_number(pairs, "spectral.omega2_rad_per_ps"),
            sigma=_number(pairs, "spectral.sigma_rad_per_ps"),
            xi=_number(pairs, "spectral.xi_rad"),
            delta_n=_number(pairs, "spectral.delta_n"),
        )
    except ParameterError as exc:
        raise ConfigError(f"invalid spectral parameters: {exc}") from exc
    window_end = spectral.window[1]
    alpha = _number(pairs, "state.alpha_rad")
    tau = _number(pairs, "drive.tau_ps", window_end)
    if not tau > 0:
        raise ConfigError(f"drive.tau_ps must be positive, got {tau!r}")

    sweep = None
    variable = pairs.get("sweep.variable", "").strip().lower()
    if variable not in ("", "none"):
        if variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep.variable must be one of {SWEEP_VARIABLES}, got {variable!r}")
        window = window_end if variable == "tau" else None
        start = _number(pairs, "sweep.start", window)
        stop = _number(pairs, "sweep.stop", window)
        points_text = pairs.get("sweep.points", "")
        try:
            points = int(points_text)
        except ValueError as exc:
            raise ConfigError(f"sweep.points must be an integer, got {points_text!r}") from exc
        if points < 2:
            raise ConfigError(f"sweep.points must be >= 2, got {points}")
        lo, hi = min(start, stop), max(start, stop)
        if variable == "xi" and not (0.0 <= lo and hi <= math.pi / 2):
            raise ConfigError(f"xi sweep [{start!r}, {stop!r}] leaves [0, pi/2]")
        if variable == "tau" and not lo > 0:
            raise ConfigError(f"tau sweep [{start!r}, {stop!r}] must stay positive")
        sweep = SweepSpec(variable, start, stop, points)

    tolerances = Tolerances(
        quadrature_rel=_number(pairs, "tolerances.quadrature_rel"),
        root_abs=_number(pairs, "tolerances.root_abs"),
        epsilon_floor=_number(pairs, "tolerances.epsilon_floor"),
    )
    for name in ("quadrature_rel", "root_abs", "epsilon_floor"):
        if not getattr(tolerances, name) > 0:
            raise ConfigError(f"tolerances.{name} must be positive")

    fmt = pairs.get("output.format", "csv").strip().lower() or "csv"
    if fmt not in FORMATS:
        raise ConfigError(f"output.format must be one of {FORMATS}, got {fmt!r}")
    path = pairs.get("output.path", "").strip() or None
    return RunConfig(spectral, alpha, tau, sweep, tolerances, OutputSpec(fmt, path))


def _no_sweep(pairs):
    return pairs.get("sweep.variable", "").strip().lower() in ("", "none")


def parse_config(text=None, overrides=(), source="<config>"):
    """Build a :class:`RunConfig` from defaults, ``text`` and ``key=value`` overrides.

    Keys missing from ``text`` keep their packaged defaults. A sweep section is
    only present when ``sweep.variable`` is set.
    """
    pairs = _parse_pairs(_default_text(), "default.cfg")
    if text is not None:
        pairs.update(_parse_pairs(text, source))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r} in override")
        if key.startswith("sweep.") and _no_sweep(pairs):
            pairs.update(DEFAULT_SWEEP)
        pairs[key] = value
    return _resolve(pairs)


def load_config(path, overrides=()):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, overrides, source=str(path))


def default_config():
    """Experimental parameters at a single point (xi = alpha = pi/4, tau = window end)."""
    return parse_config()


def config_to_dict(cfg):
    """Resolved configuration keyed like the config file."""
    s = cfg.spectral
    out = {
        "spectral.omega1_rad_per_ps": s.omega1,
        "spectral.omega2_rad_per_ps": s.omega2,
        "spectral.sigma_rad_per_ps": s.sigma,
        "spectral.xi_rad": s.xi,
        "spectral.delta_n": s.delta_n,
        "state.alpha_rad": cfg.alpha,
        "drive.tau_ps": cfg.tau,
    }
    if cfg.sweep is not None:
        out.update({
            "sweep.variable": cfg.sweep.variable,
            "sweep.start": cfg.sweep.start,
            "sweep.stop": cfg.sweep.stop,
            "sweep.points": cfg.sweep.points,
        })
    out.update({
        "tolerances.quadrature_rel": cfg.tolerances.quadrature_rel,
        "tolerances.root_abs": cfg.tolerances.root_abs,
        "tolerances.epsilon_floor": cfg.tolerances.epsilon_floor,
        "output.format": cfg.output.format,
    })
    return out


def config_to_text(cfg):
    """Config-file text that re-parses to ``cfg`` exactly (floats via ``repr``)."""
    lines = ["# resolved photon-qsl configuration"]
    for key, value in config_to_dict(cfg).items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"
