"""Command-line entry point: ``fiducial {verify,convert,emit-figure-data,simulate}``.

Exit status: 0 success, 1 failed check or rejected object, 2 usage or
parse error.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import ConfigError, FiducialError
from .figures import emit_figure_data
from .measurement import box_instrument, lueders_instrument, make_instrument, simulate_frequencies
from .quantum import (
    channel_to_Z,
    density_validity,
    effect_validity,
    fiducial_frame,
    operator_to_effect,
    p_to_rho,
    rho_to_p,
)
from .report import REGISTRY, RunConfig, load_config, parse_config, run_verify
from .serialize import (
    channel_from_json,
    complex_from_json,
    complex_to_json,
    model_from_descriptor,
    transform_to_json,
    vector_from_json,
    vector_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DIRECTIONS = ("rho-to-p", "p-to-rho", "op-to-effect", "channel-to-z")


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno})", path) from None


# --- convert ----------------------------------------------------------------


def convert(obj, direction):
    """Convert one JSON object; returns the output object."""
    if direction == "rho-to-p":
        rho = complex_from_json(_field(obj, "rho"), "rho")
        frame = fiducial_frame(rho.shape[0])
        check = density_validity(rho)
        out = vector_to_json(_qmodel(frame.n), rho_to_p(frame, rho), "state")
    elif direction == "p-to-rho":
        model, p = vector_from_json(obj, "state")
        if model.kind != "quantum":
            raise ConfigError("p-to-rho needs a quantum state", "input.kind")
        rho = p_to_rho(model.frame, p)
        check = density_validity(rho)
        out = {"kind": "quantum", "n": model.n, "rho": complex_to_json(rho)}
    elif direction == "op-to-effect":
        a = complex_from_json(_field(obj, "operator"), "operator")
        frame = fiducial_frame(a.shape[0])
        check = effect_validity(a)
        out = vector_to_json(_qmodel(frame.n), operator_to_effect(frame, a), "effect")
    elif direction == "channel-to-z":
        ch = channel_from_json(obj, "input")
        frame = fiducial_frame(ch.n)
        z = channel_to_Z(frame, ch)
        check = ch.validity()
        out = transform_to_json(_qmodel(frame.n), z)
    else:
        raise ConfigError(f"unknown direction {direction!r}", "direction")
    out["valid"] = check.valid
    out["reason"] = check.reason
    return out


def _field(obj, key):
    if not isinstance(obj, dict) or key not in obj:
        raise ConfigError(f"missing field {key!r}", "input")
    return obj[key]


def _qmodel(n):
    return model_from_descriptor({"kind": "quantum", "n": n})


# --- simulate ---------------------------------------------------------------


def _instrument_from_json(model, desc):
    if desc == "basis":
        if model.kind == "classical":
            return box_instrument(model)
        projs = [np.diag(np.eye(model.n)[i]) for i in range(model.n)]
        return lueders_instrument(model, projs, labels=[str(x) for x in model.labels])
    if not isinstance(desc, dict):
        raise ConfigError("expected 'basis' or an object", "instrument")
    labels = desc.get("labels")
    if "lueders" in desc:
        projs = [complex_from_json(p, f"instrument.lueders[{i}]") for i, p in enumerate(desc["lueders"])]
        return lueders_instrument(model, projs, labels)
    if "transforms" in desc:
        return make_instrument(model, [np.asarray(z, dtype=float) for z in desc["transforms"]], labels)
    raise ConfigError("instrument needs 'lueders' or 'transforms'", "instrument")


def simulate_from_json(obj, seed=None, trials=None):
    allowed = {"model", "state", "instrument", "n", "seed"}
    if not isinstance(obj, dict) or set(obj) - allowed:
        raise ConfigError(f"simulation config takes keys {sorted(allowed)}", "$")
    model = model_from_descriptor(_field(obj, "model"), "model")
    state = np.asarray(_field(obj, "state"), dtype=float)
    instrument = _instrument_from_json(model, obj.get("instrument", "basis"))
    n = trials if trials is not None else obj.get("n", 1000)
    s = seed if seed is not None else obj.get("seed", 0)
    return simulate_frequencies(model, state, instrument, int(n), int(s))


# --- main -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="fiducial", description="Fiducial-probability models of classical and quantum theory.")
    parser.add_argument("--version", action="version", version=f"fiducial {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--config", help="JSON run configuration")
    v.add_argument("--seed", type=int)
    v.add_argument("--checks", help=f"comma-separated subset of: {', '.join(sorted(REGISTRY))}")
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--format", choices=("json", "text"), default="text")
    v.add_argument("--jobs", type=int)
    v.add_argument("--timing", help="also write per-check runtimes to this JSON file")

    c = sub.add_parser("convert", help="convert between operator and fiducial-vector forms")
    c.add_argument("direction", choices=DIRECTIONS)
    c.add_argument("input", help="input JSON file")
    c.add_argument("--out")

    f = sub.add_parser("emit-figure-data", help="CSV points for the triangle or ball figure")
    f.add_argument("which", choices=("triangle", "ball"))
    f.add_argument("--resolution", type=int, default=20)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", required=True)

    s = sub.add_parser("simulate", help="sample outcome frequencies")
    s.add_argument("--config", required=True, help="JSON with model, state, instrument, n, seed")
    s.add_argument("--seed", type=int)
    s.add_argument("--n", type=int, dest="trials")
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _cmd_verify(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.checks is not None:
        names = [x for x in args.checks.split(",") if x]
        cfg = parse_config({**_as_obj(cfg), "checks": names})
    if args.jobs:
        cfg.jobs = args.jobs
    report = run_verify(cfg)
    out = args.out or cfg.output.get("report")
    _write(report.dumps() if args.format == "json" else report.text(), out)
    timing = args.timing or cfg.output.get("timing")
    if timing:
        _write(_dump({r.name: r.runtime for r in report.records}), timing)
    return report.exit_code


def _as_obj(cfg):
    return {
        "theories": cfg.theories,
        "checks": cfg.checks,
        "seed": cfg.seed,
        "tolerances": cfg.tolerances,
        "output": cfg.output,
        "jobs": cfg.jobs,
    }


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "convert":
            _write(_dump(convert(_read_json(args.input), args.direction)), args.out)
            return EXIT_OK
        if args.command == "emit-figure-data":
            emit_figure_data(args.which, args.resolution, args.out, seed=args.seed)
            return EXIT_OK
        if args.command == "simulate":
            rep = simulate_from_json(_read_json(args.config), args.seed, args.trials)
            _write(rep.to_csv() if args.format == "csv" else rep.dumps() + "\n", args.out)
            return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FiducialError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
