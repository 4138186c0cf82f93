"""Quaternion, dual number, and dual quaternion algebra.

Conventions used throughout the package:

* Quaternions are scalar-first: ``q = w + x*i + y*j + z*k``.
* A dual quaternion is ``std + dual * eps`` with ``eps**2 = 0``; its
  8-vector view stacks the standard part before the dual part, in basis
  order (1, i, j, k, eps, eps*i, eps*j, eps*k).
* A rigid motion with rotation ``r`` (unit quaternion) and translation
  ``t`` is encoded as ``std = r``, ``dual = 0.5 * (0, t) * r``; the
  translation is recovered from ``2 * dual * conj(std)``.

All operations are pure value transformations; instances are immutable
and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Quaternion",
    "DualNumber",
    "DualQuaternion",
    "TrajectoryPose",
    "DivisionUndefined",
    "NotUnit",
    "NotRotation",
    "CorruptPose",
    "canonicalize_sign",
    "quat_to_rotation_matrix",
    "rotation_matrix_to_quat",
    "pose_to_dual_quaternion",
    "dual_quaternion_to_pose",
]

# Relative noise floor below which a component counts as zero when a
# formula branches on exact zero (unreachable in floating point).
ZERO_EPS = 1e-13


class DivisionUndefined(ZeroDivisionError):
    """Dual-number division with an infinitesimal divisor and appreciable dividend."""


class NotUnit(ValueError):
    """Input quaternion or dual quaternion is not unit within tolerance."""


class NotRotation(ValueError):
    """Matrix is not a proper rotation (orthogonal, determinant +1)."""


class CorruptPose(ValueError):
    """Pose record fails basic sanity checks (e.g. wildly non-unit rotation)."""


@dataclass(frozen=True)
class Quaternion:
    """Quaternion ``w + x*i + y*j + z*k`` with real components."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @staticmethod
    def from_array(a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        return Quaternion(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @staticmethod
    def pure(vec3) -> "Quaternion":
        """Embed a 3-vector as a pure quaternion (zero scalar part)."""
        v = np.asarray(vec3, dtype=float)
        return Quaternion(0.0, float(v[0]), float(v[1]), float(v[2]))

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    @property
    def scalar_part(self) -> float:
        """Sc(q) = (q + conj(q)) / 2, i.e. the w component."""
        return self.w

    @property
    def vector_part(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        """Hamilton product; scalars multiply componentwise."""
        if isinstance(other, Quaternion):
            w1, x1, y1, z1 = self.w, self.x, self.y, self.z
            w2, x2, y2, z2 = other.w, other.x, other.y, other.z
            return Quaternion(
                w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
                w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
                w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
            )
        if isinstance(other, (int, float)):
            c = float(other)
            return Quaternion(self.w * c, self.x * c, self.y * c, self.z * c)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2)

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize the zero quaternion")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def is_pure(self) -> bool:
        return self.w == 0.0


def canonicalize_sign(q: Quaternion) -> Quaternion:
    """Fix the q / -q ambiguity: w >= 0, ties broken by the first nonzero
    component being positive."""
    for c in (q.w, q.x, q.y, q.z):
        if c > 0.0:
            return q
        if c < 0.0:
            return -q
    return q


@dataclass(frozen=True)
class DualNumber:
    """Dual number ``std + dual * eps`` with ``eps**2 = 0``."""

    std: float = 0.0
    dual: float = 0.0

    def is_appreciable(self, scale: float = 1.0) -> bool:
        """Standard part distinguishable from zero at the noise floor."""
        return abs(self.std) > ZERO_EPS * max(1.0, scale)

    def __add__(self, other: "DualNumber") -> "DualNumber":
        return DualNumber(self.std + other.std, self.dual + other.dual)

    def __sub__(self, other: "DualNumber") -> "DualNumber":
        return DualNumber(self.std - other.std, self.dual - other.dual)

    def __mul__(self, other: "DualNumber") -> "DualNumber":
        return DualNumber(self.std * other.std,
                          self.std * other.dual + other.std * self.dual)

    def __truediv__(self, other: "DualNumber") -> "DualNumber":
        """Dual-number quotient self / other.

        When both operands are infinitesimal the quotient is only
        determined up to an arbitrary dual part; it is fixed to 0 here
        for determinism.
        """
        scale = max(abs(self.std), abs(self.dual),
                    abs(other.std), abs(other.dual))
        tol = ZERO_EPS * max(1.0, scale)
        if abs(other.std) > tol:
            q = self.std / other.std
            return DualNumber(q, self.dual / other.std - q * other.dual / other.std)
        if abs(self.std) <= tol:
            if abs(other.dual) <= tol:
                raise DivisionUndefined("division by the zero dual number")
            return DualNumber(self.dual / other.dual, 0.0)
        raise DivisionUndefined(
            "appreciable dual number divided by an infinitesimal one")


@dataclass(frozen=True)
class DualQuaternion:
    """Dual quaternion ``std + dual * eps`` with quaternion parts."""

    std: Quaternion = field(default_factory=Quaternion)
    dual: Quaternion = field(default_factory=Quaternion)

    @staticmethod
    def identity() -> "DualQuaternion":
        return DualQuaternion(Quaternion(1.0), Quaternion())

    @staticmethod
    def from_vectors(qs, qd) -> "DualQuaternion":
        """Build from the paired 4-vectors (standard, dual)."""
        return DualQuaternion(Quaternion.from_array(qs), Quaternion.from_array(qd))

    @staticmethod
    def from_vec8(v) -> "DualQuaternion":
        v = np.asarray(v, dtype=float)
        return DualQuaternion.from_vectors(v[:4], v[4:])

    def to_vectors(self) -> tuple[np.ndarray, np.ndarray]:
        return self.std.to_array(), self.dual.to_array()

    def to_vec8(self) -> np.ndarray:
        return np.concatenate(self.to_vectors())

    def __add__(self, other: "DualQuaternion") -> "DualQuaternion":
        return DualQuaternion(self.std + other.std, self.dual + other.dual)

    def __sub__(self, other: "DualQuaternion") -> "DualQuaternion":
        return DualQuaternion(self.std - other.std, self.dual - other.dual)

    def __mul__(self, other: "DualQuaternion") -> "DualQuaternion":
        if not isinstance(other, DualQuaternion):
            return NotImplemented
        return DualQuaternion(
            self.std * other.std,
            self.std * other.dual + self.dual * other.std,
        )

    def conjugate(self) -> "DualQuaternion":
        return DualQuaternion(self.std.conjugate(), self.dual.conjugate())

    def magnitude(self) -> DualNumber:
        """Dual-number magnitude.

        The branch at a vanishing standard part returns ``|dual| * eps``,
        which makes the magnitude discontinuous there; callers that care
        should test the standard part explicitly.
        """
        scale = max(abs(c) for c in (*self.std.to_array(), *self.dual.to_array()))
        ns = self.std.norm()
        if ns > ZERO_EPS * max(1.0, scale):
            cross = (self.std.conjugate() * self.dual).scalar_part
            return DualNumber(ns, cross / ns)
        return DualNumber(0.0, self.dual.norm())

    def norm_2r(self) -> float:
        """Root of summed squared part norms (all 8 components)."""
        return math.sqrt(self.std.norm() ** 2 + self.dual.norm() ** 2)

    def is_unit(self, tol: float = 1e-12) -> bool:
        """Unit test in vector form: | ||std||^2 - 1 | <= tol and
        |dual . std| <= tol."""
        qs, qd = self.to_vectors()
        return (abs(float(qs @ qs) - 1.0) <= tol
                and abs(float(qd @ qs)) <= tol)


@dataclass(frozen=True)
class TrajectoryPose:
    """One timestamped pose record: translation plus rotation quaternion."""

    t_stamp: float
    translation: np.ndarray
    rotation: Quaternion

    def __post_init__(self):
        object.__setattr__(self, "translation",
                           np.asarray(self.translation, dtype=float))


def quat_to_rotation_matrix(q: Quaternion) -> np.ndarray:
    """Rotation matrix of a unit quaternion.

    Raises NotUnit unless the norm is within 1e-9 of 1.
    """
    if abs(q.norm() - 1.0) > 1e-9:
        raise NotUnit(f"quaternion norm {q.norm()!r} is not 1")
    w, x, y, z = q.w, q.x, q.y, q.z
    return np.array([
        [w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z],
    ])


def rotation_matrix_to_quat(r: np.ndarray) -> Quaternion:
    """Unit quaternion of a rotation matrix, sign-canonicalized to w >= 0.

    Uses the largest-diagonal (four-branch) extraction, which stays
    stable near 180 degree rotations where the trace-based formula
    divides by a vanishing w.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise NotRotation(f"expected a 3x3 matrix, got shape {r.shape}")
    if np.max(np.abs(r.T @ r - np.eye(3))) > 1e-8 or abs(np.linalg.det(r) - 1.0) > 1e-8:
        raise NotRotation("matrix is not orthogonal with determinant +1")

    trace = r[0, 0] + r[1, 1] + r[2, 2]
    d0 = 1.0 + trace
    d1 = 1.0 + 2.0 * r[0, 0] - trace
    d2 = 1.0 + 2.0 * r[1, 1] - trace
    d3 = 1.0 + 2.0 * r[2, 2] - trace
    branch = int(np.argmax([d0, d1, d2, d3]))
    if branch == 0:
        w = 0.5 * math.sqrt(d0)
        s = 0.25 / w
        q = Quaternion(w, (r[2, 1] - r[1, 2]) * s,
                       (r[0, 2] - r[2, 0]) * s, (r[1, 0] - r[0, 1]) * s)
    elif branch == 1:
        x = 0.5 * math.sqrt(d1)
        s = 0.25 / x
        q = Quaternion((r[2, 1] - r[1, 2]) * s, x,
                       (r[0, 1] + r[1, 0]) * s, (r[0, 2] + r[2, 0]) * s)
    elif branch == 2:
        y = 0.5 * math.sqrt(d2)
        s = 0.25 / y
        q = Quaternion((r[0, 2] - r[2, 0]) * s, (r[0, 1] + r[1, 0]) * s,
                       y, (r[1, 2] + r[2, 1]) * s)
    else:
        z = 0.5 * math.sqrt(d3)
        s = 0.25 / z
        q = Quaternion((r[1, 0] - r[0, 1]) * s, (r[0, 2] + r[2, 0]) * s,
                       (r[1, 2] + r[2, 1]) * s, z)
    return canonicalize_sign(q.normalized())


def pose_to_dual_quaternion(pose: TrajectoryPose) -> DualQuaternion:
    """Encode a pose as a unit dual quaternion.

    The rotation is normalized to unit length; the dual part is
    ``0.5 * (0, t) * std``. Raises CorruptPose when the stored rotation
    norm is outside [0.5, 2], which flags corrupted records rather than
    silently normalizing garbage.
    """
    n = pose.rotation.norm()
    if not (0.5 <= n <= 2.0):
        raise CorruptPose(f"rotation quaternion norm {n!r} outside [0.5, 2]")
    std = pose.rotation.normalized()
    t = Quaternion.pure(pose.translation)
    dual = 0.5 * (t * std)
    return DualQuaternion(std, dual)


def dual_quaternion_to_pose(dq: DualQuaternion) -> TrajectoryPose:
    """Decode rotation and translation from a unit dual quaternion.

    The timestamp of the returned pose is 0. Raises NotUnit when the
    input fails the unit test at tolerance 1e-9.
    """
    if not dq.is_unit(1e-9):
        raise NotUnit("dual quaternion is not unit within 1e-9")
    t = 2.0 * (dq.dual * dq.std.conjugate())
    # Scalar part vanishes for unit inputs up to the admission tolerance.
    if abs(t.scalar_part) > 1e-9:
        raise NotUnit(f"translation recovery left scalar residue {t.scalar_part!r}")
    return TrajectoryPose(0.0, t.vector_part, dq.std)
