"""Command line interface: ``photon-qsl {point,sweep,critical,check}``."""
import argparse
import sys

from ..errors import ParameterError, PhotonQslError
from .config import DEFAULT_SWEEP, ConfigError, load_config, parse_config
from .emit import OutputError, emit
from .report import format_critical, self_check, solve_critical
from .sweep import EvaluationError, run_point, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value config file")
    common.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                        dest="overrides", help="override one config key (repeatable)")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    out.add_argument("--format", choices=("csv", "json"), help="output format")

    parser = argparse.ArgumentParser(
        prog="photon-qsl",
        description="Speed limit and non-Markovianity of a dephasing photon polarization qubit.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("point", parents=[common, out], help="evaluate one configuration")
    sweep = sub.add_parser("sweep", parents=[common, out],
                           help="linear sweep over xi, alpha or tau (default xi in [0, pi/2])")
    sweep.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    sub.add_parser("critical", parents=[common], help="transition angles of the peak weight")
    sub.add_parser("check", parents=[common], help="run built-in oracle self-checks")
    return parser


def _config(args, with_sweep=False):
    overrides = list(args.overrides)
    if args.config:
        cfg = load_config(args.config, overrides)
        source = args.config
    else:
        cfg = parse_config(None, overrides)
        source = None
    if with_sweep and cfg.sweep is None:
        defaults = [f"{k}={v}" for k, v in DEFAULT_SWEEP.items()]
        cfg = (load_config(source, defaults + overrides) if source
               else parse_config(None, defaults + overrides))
    return cfg


def _write(rows, cfg, args):
    fmt = args.format or cfg.output.format
    path = args.output or cfg.output.path
    text = emit(rows, cfg, path=path, fmt=fmt)
    if not path:
        sys.stdout.write(text)


def _exit_code(exc):
    cause = exc.cause if isinstance(exc, EvaluationError) else exc
    if isinstance(cause, (ConfigError, ParameterError)):
        return EXIT_CONFIG
    if isinstance(cause, OutputError):
        return EXIT_IO
    # quadrature, domain and cusp failures
    return EXIT_NUMERICAL


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "point":
            cfg = _config(args).without_sweep()
            _write([run_point(cfg)], cfg, args)
        elif args.command == "sweep":
            cfg = _config(args, with_sweep=True)
            _write(run_sweep(cfg, workers=args.workers), cfg, args)
        elif args.command == "critical":
            cfg = _config(args)
            sys.stdout.write(format_critical(solve_critical(cfg)))
        else:
            cfg = _config(args)
            results = self_check(cfg)
            for r in results:
                sys.stdout.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}\n")
            if not all(r.passed for r in results):
                return EXIT_NUMERICAL
    except PhotonQslError as exc:
        sys.stderr.write(f"photon-qsl: error: {exc}\n")
        return _exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
