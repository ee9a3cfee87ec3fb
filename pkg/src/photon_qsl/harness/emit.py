"""CSV and JSON serialization of sweep rows."""
import csv
import io
import json
import os

from .. import __version__
from ..errors import PhotonQslError
from .config import config_to_dict, config_to_text

__all__ = ["OutputError", "COLUMNS", "header", "render_csv", "render_json", "emit",
           "read_csv", "read_json"]

#: Columns after the leading sweep-variable column.
COLUMNS = ("tau1_ps", "tau2_ps", "tau_inf_ps", "tau_qsl_ps", "n_blp", "n_rhp",
           "rhp_saturated", "kappa_tau_abs", "bures_angle_rad")
_FIELDS = ("tau1", "tau2", "tau_inf", "tau_qsl", "n_blp", "n_rhp", "rhp_saturated",
           "kappa_tau_abs", "bures_angle")
_UNITS = {"xi": "rad", "alpha": "rad", "tau": "ps"}


class OutputError(PhotonQslError, OSError):
    """Writing an artifact failed."""


def _variable(cfg):
    return cfg.sweep.variable if cfg.sweep is not None else "xi"


def header(cfg):
    variable = _variable(cfg)
    return (f"{variable}_{_UNITS[variable]}",) + COLUMNS


def _fmt(x):
    if isinstance(x, bool):
        return "1" if x else "0"
    return format(x, ".17g")


def render_csv(rows, cfg):
    if not rows:
        raise ValueError("no rows to emit")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header(cfg))
    for row in rows:
        writer.writerow([_fmt(row.value)] + [_fmt(getattr(row, f)) for f in _FIELDS])
    return buf.getvalue()


def render_json(rows, cfg):
    if not rows:
        raise ValueError("no rows to emit")
    names = header(cfg)
    columns = {names[0]: [row.value for row in rows]}
    for name, f in zip(COLUMNS, _FIELDS):
        columns[name] = [getattr(row, f) for row in rows]
    doc = {
        "metadata": {"tool": "photon-qsl", "version": __version__,
                     "config": config_to_dict(cfg)},
        "columns": columns,
    }
    return json.dumps(doc, indent=1) + "\n"


def emit(rows, cfg, path=None, fmt=None):
    """Write rows as CSV or JSON and return the text.

    With a path, CSV output gets a ``<path>.cfg`` sidecar holding the
    resolved configuration; JSON embeds it under ``metadata``.
    """
    fmt = fmt or cfg.output.format
    path = path if path is not None else cfg.output.path
    text = render_csv(rows, cfg) if fmt == "csv" else render_json(rows, cfg)
    if path:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            if fmt == "csv":
                with open(os.fspath(path) + ".cfg", "w", encoding="utf-8") as fh:
                    fh.write(config_to_text(cfg))
        except OSError as exc:
            raise OutputError(f"cannot write {path}: {exc.strerror}") from exc
    return text


def read_csv(source):
    """Columns of an emitted CSV as lists of floats (``rhp_saturated`` as bool)."""
    if hasattr(source, "read"):
        text = source.read()
    elif "\n" in str(source):
        text = source
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    reader = csv.reader(io.StringIO(text))
    names = next(reader)
    columns = {name: [] for name in names}
    for record in reader:
        for name, cell in zip(names, record):
            columns[name].append(cell == "1" if name == "rhp_saturated" else float(cell))
    return columns


def read_json(text):
    return json.loads(text)
