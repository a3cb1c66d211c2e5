"""Command-line interface.

Subcommands: canon, mintime, synth, simulate, profile.  Exit codes:
0 success, 2 input validation, 3 numerical failure (quadrature, horizon,
unreachable target), 4 verification failure in simulate.
"""
import argparse
import json
import os
import sys

import numpy as np

from . import plotting, profiles, reachability, serialize, simulator, su4
from . import synthesis
from .canonical import canon_hamiltonian, canon_unitary, in_gate_cell
from .errors import (GateReachError, HorizonExceeded, NoMatchingFound,
                     NotMajorized, NotReachable, QuadratureFailure,
                     StepTooLarge, ValidationError)
from .serialize import dump_json, load_json

_NUMERICAL_ERRORS = (QuadratureFailure, HorizonExceeded, NoMatchingFound,
                     StepTooLarge, NotReachable, NotMajorized)


def _fmt(x):
    return "%.12g" % x


def _fmt_vec(v):
    return "[" + ", ".join(_fmt(x) for x in v) + "]"


def _read_file(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError("cannot read %s: %s" % (path, exc))


def _load_config(path):
    text = _read_file(path)
    if path.endswith(".toml"):
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib
        try:
            return tomllib.loads(text)
        except Exception as exc:
            raise ValidationError("invalid TOML config: %s" % exc)
    return load_json(text)


def _load_profile(args):
    if getattr(args, "profile_json", None):
        return profiles.profile_from_json(load_json(args.profile_json))
    if getattr(args, "profile", None):
        return profiles.profile_from_json(load_json(_read_file(args.profile)))
    raise ValidationError("a profile is required (--profile or --profile-json)")


def _load_target_theta(args):
    """Target gate as a canonical 3-vector, from --theta or a matrix file."""
    if getattr(args, "theta", None):
        theta = np.asarray(load_json(args.theta), dtype=float)
        if theta.shape != (3,):
            raise ValidationError("--theta must be a JSON 3-array")
        if not in_gate_cell(theta, tol=1e-9):
            raise ValidationError("--theta must lie in the gate cell "
                                  "(pi/4 >= t1 >= t2 >= |t3|)")
        return theta
    if getattr(args, "target", None):
        U = su4.matrix_from_json(load_json(_read_file(args.target)))
        return canon_unitary(U).theta
    raise ValidationError("a target is required (--target or --theta)")


def _emit(args, payload, summary_lines):
    text = dump_json(payload)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        for line in summary_lines:
            print(line)
    else:
        sys.stdout.write(text)


def cmd_canon(args):
    U = su4.matrix_from_json(load_json(_read_file(args.input)))
    if args.kind == "hamiltonian":
        form = canon_hamiltonian(su4.pauli_compose(
            su4.nonlocal_part(su4.pauli_decompose(U))))
        payload = serialize.hamiltonian_form_to_json(form)
    else:
        form = canon_unitary(U)
        payload = serialize.unitary_form_to_json(form)
    _emit(args, payload, ["theta = %s" % _fmt_vec(form.theta)])
    return 0


def cmd_mintime(args):
    theta_U = _load_target_theta(args)
    profile = _load_profile(args)
    result = reachability.min_time(theta_U, profile, tol=args.tol)
    payload = serialize.mintime_result_to_json(result)
    lines = ["T_min = %s" % _fmt(result.T_min),
             "shift = %r  binding inequality = %d"
             % (result.activeShift, result.bindingInequality),
             "Theta(T_min) = %s" % _fmt_vec(result.Theta_at_Tmin)]
    if result.wholePeriodCount is not None:
        lines.append("whole periods = %d (T_min/period = %s)"
                     % (result.wholePeriodCount, _fmt(result.periods)))
    _emit(args, payload, lines)
    if args.plot:
        plotting.plot_mintime(profile, theta_U, result, args.plot)
        print("figure written to %s" % args.plot)
    return 0


def cmd_synth(args):
    theta_U = _load_target_theta(args)
    profile = _load_profile(args)
    if args.time is not None:
        T = args.time
    else:
        T = reachability.min_time(theta_U, profile, tol=args.tol).T_min
    schedule = synthesis.synthesize(theta_U, profile, T, eps=args.tol)
    payload = serialize.schedule_to_json(schedule)
    _emit(args, payload, ["T = %s, %d segments, shift = %r"
                          % (_fmt(T), len(schedule.segments), schedule.shift)])
    return 0


def cmd_simulate(args):
    schedule = serialize.schedule_from_json(load_json(_read_file(args.schedule)))
    profile = _load_profile(args)
    settings = simulator.PropagationSettings(
        max_step=args.max_step, tolerance=args.step_tolerance)
    result = simulator.propagate(schedule, profile, settings)
    distance = None
    if getattr(args, "target", None):
        U = su4.matrix_from_json(load_json(_read_file(args.target)))
        distance = simulator.local_equiv_distance(result.unitary, U)
    elif schedule.targetTheta is not None:
        target = su4.expm_hermitian(su4.coupling_hamiltonian(schedule.targetTheta))
        distance = simulator.local_equiv_distance(result.unitary, target)
    payload = {"unitary": su4.matrix_to_json(result.unitary),
               "report": {"distance": distance,
                          "unitarityDefect": result.unitarity_defect,
                          "steps": result.steps}}
    lines = ["unitarity defect = %s, steps = %d"
             % (_fmt(result.unitarity_defect), result.steps)]
    if distance is not None:
        lines.append("local-equivalence distance = %s" % _fmt(distance))
    _emit(args, payload, lines)
    if distance is not None and distance > args.max_distance:
        print("verification FAILED: distance %s > %s"
              % (_fmt(distance), _fmt(args.max_distance)), file=sys.stderr)
        return 4
    return 0


def cmd_profile(args):
    profile = _load_profile(args)
    t1 = args.t1
    if t1 is None:
        if profile.period is not None:
            t1 = args.t0 + profile.period
        elif profile.duration_limit is not None:
            t1 = profile.duration_limit
        else:
            raise ValidationError("--t1 is required for aperiodic profiles")
    csv_text = profiles.emit_profile_csv(profile, args.t0, t1, args.samples)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(csv_text)
        print("CSV written to %s (%d samples)" % (args.output, args.samples))
    else:
        sys.stdout.write(csv_text)
    if args.plot:
        plotting.plot_profile(profile, args.t0, t1, args.samples, args.plot)
        print("figure written to %s" % args.plot)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="gatereach",
        description="Minimum-time reachability and schedule synthesis for "
                    "two-qubit gates under time-varying couplings.")
    parser.add_argument("--config", help="TOML/JSON file supplying flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance (default: GATEREACH_TOL or 1e-9)")
        p.add_argument("--output", help="write JSON/CSV here instead of stdout")

    p = sub.add_parser("canon", help="canonical decomposition of a matrix")
    p.add_argument("--input", required=True, help="matrix JSON file")
    p.add_argument("--kind", choices=("hamiltonian", "unitary"), required=True)
    add_common(p)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("mintime", help="minimum time to reach a gate")
    p.add_argument("--target", help="gate matrix JSON file")
    p.add_argument("--theta", help="canonical 3-vector as inline JSON")
    p.add_argument("--profile", help="profile JSON file")
    p.add_argument("--profile-json", help="inline profile JSON")
    p.add_argument("--plot", help="write a margins-vs-time figure here")
    add_common(p)
    p.set_defaults(func=cmd_mintime)

    p = sub.add_parser("synth", help="synthesize a pulse schedule")
    p.add_argument("--target", help="gate matrix JSON file")
    p.add_argument("--theta", help="canonical 3-vector as inline JSON")
    p.add_argument("--profile", help="profile JSON file")
    p.add_argument("--profile-json", help="inline profile JSON")
    p.add_argument("--time", type=float, default=None,
                   help="schedule duration (default: the minimum time)")
    add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="propagate and verify a schedule")
    p.add_argument("--schedule", required=True, help="schedule JSON file")
    p.add_argument("--profile", help="profile JSON file")
    p.add_argument("--profile-json", help="inline profile JSON")
    p.add_argument("--target", help="override target gate matrix JSON file")
    p.add_argument("--max-distance", type=float, default=1e-6,
                   help="verification threshold (exit 4 beyond it)")
    p.add_argument("--max-step", type=float, default=None)
    p.add_argument("--step-tolerance", type=float, default=1e-8)
    add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("profile", help="tabulate (and plot) a coupling profile")
    p.add_argument("--profile", help="profile JSON file")
    p.add_argument("--profile-json", help="inline profile JSON")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=None,
                   help="default: one period (periodic) or the domain end")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--plot", help="write a PNG figure next to the CSV")
    add_common(p)
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            config = _load_config(args.config)
            if not isinstance(config, dict):
                raise ValidationError("config must be a table of flag values")
            for key, value in config.items():
                dest = key.replace("-", "_")
                if hasattr(args, dest) and getattr(args, dest) is None:
                    setattr(args, dest, value)
        if getattr(args, "tol", None) is None:
            args.tol = float(os.environ.get("GATEREACH_TOL", "1e-9"))
        return args.func(args)
    except ValidationError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3
    except GateReachError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
