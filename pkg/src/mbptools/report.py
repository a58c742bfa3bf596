"""Serializable reports for grid scans and mesh certifications."""

import json
from dataclasses import dataclass, field

import numpy as np


def jsonify(obj):
    """Recursively convert report payloads into plain JSON values."""
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.complexfloating):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [jsonify(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return jsonify(obj.to_dict())
    return obj


def dump_json(payload, path):
    """Write canonical JSON: sorted keys, two-space indent, trailing newline.

    Deterministic for identical payloads, which is what makes seeded runs
    byte-identical.
    """
    text = json.dumps(jsonify(payload), sort_keys=True, indent=2)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text + "\n")


@dataclass
class ScanReport:
    """Per-point margins with pass flags over a set of probe points."""

    kind: str
    points: np.ndarray
    margins: np.ndarray
    passed: np.ndarray
    tolerance: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).ravel()
        self.margins = np.asarray(self.margins, dtype=float).ravel()
        self.passed = np.asarray(self.passed, dtype=bool).ravel()

    @property
    def n_points(self):
        return int(self.points.size)

    @property
    def n_fail(self):
        return int(np.count_nonzero(~self.passed))

    @property
    def all_passed(self):
        return bool(self.passed.all())

    @property
    def min_margin(self):
        return float(np.min(self.margins)) if self.margins.size else float("nan")

    @property
    def argmin_point(self):
        if not self.margins.size:
            return None
        return complex(self.points[int(np.argmin(self.margins))])

    def summary(self):
        out = {
            "kind": self.kind,
            "tolerance": self.tolerance,
            "n_points": self.n_points,
            "n_fail": self.n_fail,
            "min_margin": self.min_margin,
            "argmin_point": self.argmin_point,
            "all_passed": self.all_passed,
        }
        out.update(self.meta)
        return out

    def to_dict(self):
        return jsonify(self.summary())

    def write_csv(self, path):
        with open(path, "w", encoding="ascii") as fh:
            fh.write("re,im,margin,pass\n")
            for p, m, ok in zip(self.points, self.margins, self.passed):
                fh.write(f"{p.real!r},{p.imag!r},{m!r},{int(ok)}\n")

    def write_json(self, path):
        dump_json(self.summary(), path)
