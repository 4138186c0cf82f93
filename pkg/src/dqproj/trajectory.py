"""Pose trajectory ingestion (plain-text TUM-style logs).

A trajectory file holds one pose per line as eight whitespace-separated
decimal fields::

    timestamp tx ty tz qx qy qz qw

Lines starting with '#' are comments; blank lines are ignored.
Malformed lines are counted and skipped, never fatal. The on-disk
quaternion order is x, y, z, w; it is repacked into the scalar-first
convention used everywhere else in this package (a flag overrides the
order for files that already store w first).
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .dq import Quaternion, TrajectoryPose, pose_to_dual_quaternion

__all__ = ["TrajectoryFile", "EmptyFile", "parse_trajectory",
           "write_trajectory", "trajectory_to_inputs"]


class EmptyFile(ValueError):
    """No valid pose line was found."""


@dataclass(frozen=True)
class TrajectoryFile:
    poses: list[TrajectoryPose]
    source_path: str
    skipped_lines: int


def parse_trajectory(stream, source_path: str = "<stream>",
                     quat_order: str = "xyzw") -> TrajectoryFile:
    """Parse a trajectory from a text stream or string.

    Raises EmptyFile when no line parses to a valid pose. skipped_lines
    counts comment lines and malformed rows.
    """
    if quat_order not in ("xyzw", "wxyz"):
        raise ValueError(f"unsupported quaternion field order {quat_order!r}")
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    poses: list[TrajectoryPose] = []
    skipped = 0
    for line in stream:
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            skipped += 1
            continue
        fields = text.split()
        if len(fields) != 8:
            skipped += 1
            continue
        try:
            vals = [float(f) for f in fields]
        except ValueError:
            skipped += 1
            continue
        if not all(np.isfinite(vals)):
            skipped += 1
            continue
        stamp, tx, ty, tz = vals[:4]
        if quat_order == "xyzw":
            qx, qy, qz, qw = vals[4:]
        else:
            qw, qx, qy, qz = vals[4:]
        poses.append(TrajectoryPose(stamp, np.array([tx, ty, tz]),
                                    Quaternion(qw, qx, qy, qz)))
    if not poses:
        raise EmptyFile(f"no valid poses in {source_path}")
    return TrajectoryFile(poses, source_path, skipped)


def write_trajectory(tf: TrajectoryFile, stream, quat_order: str = "xyzw") -> None:
    """Serialize poses back to the on-disk layout (inverse of parsing)."""
    if quat_order not in ("xyzw", "wxyz"):
        raise ValueError(f"unsupported quaternion field order {quat_order!r}")
    for p in tf.poses:
        r = p.rotation
        quad = (r.x, r.y, r.z, r.w) if quat_order == "xyzw" else (r.w, r.x, r.y, r.z)
        fields = (p.t_stamp, *p.translation, *quad)
        stream.write(" ".join(repr(float(v)) for v in fields) + "\n")


def trajectory_to_inputs(tf: TrajectoryFile, perturb_sigma: float = 0.0,
                         seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Encode each pose as a dual quaternion and split into (std, dual)
    vector pairs.

    With perturb_sigma > 0, adds iid Gaussian noise to all 8 components
    (deterministic for a given seed); zero sigma passes the encoded
    poses through untouched.
    """
    rng = np.random.default_rng(seed)
    out = []
    for pose in tf.poses:
        v = pose_to_dual_quaternion(pose).to_vec8()
        if perturb_sigma > 0.0:
            v = v + rng.normal(0.0, perturb_sigma, size=8)
        out.append((v[:4], v[4:]))
    return out
