"""Quaternion and imaginary-quaternion algebra.

Two layers live here.  The value types :class:`Quaternion` and
:class:`ImaginaryQuaternion` are small immutable records used at API
boundaries.  The ``q*`` array helpers operate on ``(..., 4)`` / ``(..., 3)``
numpy arrays and are what the chart and frame code uses in inner loops.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EPS_UNIT = 1e-12


class DegenerateQuaternion(ValueError):
    """Raised when normalizing a quaternion whose norm is at most ``EPS_UNIT``."""


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        w, x, y, z = (float(c) for c in arr)
        return cls(w, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return NotImplemented

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)

    def dot(self, other: "Quaternion") -> float:
        return self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z

    def real(self) -> float:
        return self.w

    def imag(self) -> "ImaginaryQuaternion":
        """Drop the real part.  This is the only way to go from H to Im H."""
        return ImaginaryQuaternion(self.x, self.y, self.z)

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol


@dataclass(frozen=True)
class ImaginaryQuaternion:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "ImaginaryQuaternion":
        x, y, z = (float(c) for c in arr)
        return cls(x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def to_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def __add__(self, other):
        if not isinstance(other, ImaginaryQuaternion):
            return NotImplemented
        return ImaginaryQuaternion(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        if not isinstance(other, ImaginaryQuaternion):
            return NotImplemented
        return ImaginaryQuaternion(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return ImaginaryQuaternion(-self.x, -self.y, -self.z)

    def __mul__(self, other):
        # scalar scaling only; the quaternion product needs explicit promotion
        if isinstance(other, (int, float)):
            return ImaginaryQuaternion(self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return NotImplemented

    def norm(self) -> float:
        return math.sqrt(im_dot(self, self))

    def isclose(self, other: "ImaginaryQuaternion", tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol


I = ImaginaryQuaternion(1.0, 0.0, 0.0)
J = ImaginaryQuaternion(0.0, 1.0, 0.0)
K = ImaginaryQuaternion(0.0, 0.0, 1.0)
ONE = Quaternion(1.0, 0.0, 0.0, 0.0)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a*b``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def im_cross(a: ImaginaryQuaternion, b: ImaginaryQuaternion) -> ImaginaryQuaternion:
    """Vector cross product; equals ``(ab - ba)/2`` for imaginary quaternions."""
    return ImaginaryQuaternion(
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.x * b.y - a.y * b.x,
    )


def im_dot(a: ImaginaryQuaternion, b: ImaginaryQuaternion) -> float:
    return a.x * b.x + a.y * b.y + a.z * b.z


def normalize(a: Quaternion) -> Quaternion:
    n = a.norm()
    if not n > EPS_UNIT:
        raise DegenerateQuaternion(f"cannot normalize quaternion of norm {n:.3e}")
    return a / n


def exp_im(v: ImaginaryQuaternion) -> Quaternion:
    """Exponential of an imaginary quaternion, a unit quaternion."""
    return Quaternion.from_array(qexp(v.to_array()))


# --- array layer -----------------------------------------------------------

_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product over the last axis, broadcasting the leading ones."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w1, x1, y1, z1 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    w2, x2, y2, z2 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float) * _CONJ


def qpure(v: np.ndarray) -> np.ndarray:
    """Promote ``(..., 3)`` imaginary parts to ``(..., 4)`` quaternions."""
    v = np.asarray(v, dtype=float)
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def qexp(v: np.ndarray) -> np.ndarray:
    """exp of imaginary quaternions given as ``(..., 3)`` arrays."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    # sin(n)/n, continued to 1 at n = 0
    sinc = np.sinc(n / np.pi)
    return np.concatenate([np.cos(n), sinc * v], axis=-1)


def qunit(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    n = np.linalg.norm(a, axis=-1, keepdims=True)
    if np.any(n <= EPS_UNIT):
        raise DegenerateQuaternion("cannot normalize a quaternion of (near) zero norm")
    return a / n


def random_unit(rng: np.random.Generator, size=None) -> np.ndarray:
    """Uniform samples on S^3 as ``(..., 4)`` arrays."""
    shape = (4,) if size is None else tuple(np.atleast_1d(size)) + (4,)
    return qunit(rng.normal(size=shape))
