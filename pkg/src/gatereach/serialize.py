"""JSON encoding/decoding for matrices, canonical forms, solver results
and pulse schedules.  All encoders produce plain dicts; `dump_json` turns
them into deterministic text (sorted keys), so identical inputs yield
bit-identical files.
"""
import json

import numpy as np

from .errors import ValidationError
from .su4 import matrix_from_json, matrix_to_json
from .synthesis import PulseSchedule, Segment


def dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("invalid JSON: %s" % exc)


def _vec(x):
    return [float(v) for v in np.asarray(x).ravel()]


def _mat2_to_json(m):
    m = np.asarray(m, dtype=complex)
    return {"re": [[float(x) for x in row] for row in m.real],
            "im": [[float(x) for x in row] for row in m.imag]}


def _mat2_from_json(obj):
    return matrix_from_json(obj, size=2)


def hamiltonian_form_to_json(form):
    return {"theta": _vec(form.theta),
            "localA": _mat2_to_json(form.localA),
            "localB": _mat2_to_json(form.localB)}


def unitary_form_to_json(form):
    return {"theta": _vec(form.theta),
            "localA1": _mat2_to_json(form.localA1),
            "localB1": _mat2_to_json(form.localB1),
            "localA2": _mat2_to_json(form.localA2),
            "localB2": _mat2_to_json(form.localB2),
            "globalPhase": {"re": float(form.globalPhase.real),
                            "im": float(form.globalPhase.imag)}}


def mintime_result_to_json(result):
    out = {"T_min": result.T_min,
           "shift": list(result.activeShift),
           "binding": result.bindingInequality,
           "Theta": _vec(result.Theta_at_Tmin),
           "margins": _vec(result.margins),
           "flatFeasibility": result.flatFeasibility}
    if result.periods is not None:
        out["periods"] = float(result.periods)
        out["wholePeriodCount"] = int(result.wholePeriodCount)
    return out


def condition_report_to_json(report):
    out = {"T": report["T"], "Theta": _vec(report["Theta"]), "shifts": []}
    for entry in report["shifts"]:
        out["shifts"].append({"n": list(entry["n"]),
                              "beta": _vec(entry["beta"]),
                              "margins": _vec(entry["margins"]),
                              "feasible": entry["feasible"]})
    for key in ("accumulated_drive", "drive_threshold", "drive_margin"):
        if key in report:
            out[key] = report[key]
    return out


def schedule_to_json(schedule):
    segs = []
    for seg in schedule.segments:
        segs.append({"t0": seg.t0, "t1": seg.t1,
                     "permutation": [int(i) for i in seg.permutation],
                     "localA": _mat2_to_json(seg.localA),
                     "localB": _mat2_to_json(seg.localB),
                     "effectiveTheta": _vec(seg.effectiveTheta)})
    out = {"T": schedule.T,
           "segments": segs,
           "prefixA": _mat2_to_json(schedule.prefixA),
           "prefixB": _mat2_to_json(schedule.prefixB),
           "suffixA": _mat2_to_json(schedule.suffixA),
           "suffixB": _mat2_to_json(schedule.suffixB),
           "shift": list(schedule.shift),
           "shiftCorrection": (None if schedule.shiftCorrection is None
                               else matrix_to_json(schedule.shiftCorrection))}
    if schedule.targetTheta is not None:
        out["targetTheta"] = _vec(schedule.targetTheta)
    if schedule.beta is not None:
        out["beta"] = _vec(schedule.beta)
    return out


def schedule_from_json(obj):
    try:
        segs = []
        for seg in obj["segments"]:
            segs.append(Segment(
                t0=float(seg["t0"]), t1=float(seg["t1"]),
                permutation=tuple(int(i) for i in seg["permutation"]),
                localA=_mat2_from_json(seg["localA"]),
                localB=_mat2_from_json(seg["localB"]),
                effectiveTheta=np.asarray(seg.get("effectiveTheta",
                                                  [0.0, 0.0, 0.0]))))
        corr = obj.get("shiftCorrection")
        return PulseSchedule(
            T=float(obj["T"]), segments=tuple(segs),
            prefixA=_mat2_from_json(obj["prefixA"]),
            prefixB=_mat2_from_json(obj["prefixB"]),
            suffixA=_mat2_from_json(obj["suffixA"]),
            suffixB=_mat2_from_json(obj["suffixB"]),
            shift=tuple(int(i) for i in obj.get("shift", (0, 0, 0))),
            shiftCorrection=None if corr is None else matrix_from_json(corr),
            targetTheta=(np.asarray(obj["targetTheta"], dtype=float)
                         if "targetTheta" in obj else None),
            beta=(np.asarray(obj["beta"], dtype=float)
                  if "beta" in obj else None))
    except (KeyError, TypeError) as exc:
        raise ValidationError("malformed schedule JSON: %r" % (exc,))
