"""Nearly Kähler structure of the homogeneous S^3 x S^3.

A tangent vector at ``(p, q)`` is stored as the pair of imaginary quaternions
``(alpha, beta)`` with ``Z = (p alpha, q beta)``.  In these left-trivialized
coordinates J, P, Q, the metric g and the tensor G are constant, so each is
implemented once on ``(..., 6)`` coordinate arrays (the ``*6`` functions and
the ``*_MATRIX`` constants) and wrapped for :class:`TangentVector`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quat import (
    ImaginaryQuaternion,
    Quaternion,
    qconj,
    qexp,
    qmul,
    qpure,
)

SQRT3 = np.sqrt(3.0)
POINT_TOL = 1e-10

_I3 = np.eye(3)
_Z3 = np.zeros((3, 3))

J_MATRIX = np.block([[-_I3, 2 * _I3], [-2 * _I3, _I3]]) / SQRT3
P_MATRIX = np.block([[_Z3, _I3], [_I3, _Z3]])
Q_MATRIX = np.block([[-_I3, _Z3], [_Z3, _I3]])
# g(Z, W) = Z @ METRIC @ W
METRIC = np.block([[4 * _I3, -2 * _I3], [-2 * _I3, 4 * _I3]]) / 3.0


class NotOnManifold(ValueError):
    pass


class BasePointMismatch(ValueError):
    pass


class NonUnitParameter(ValueError):
    pass


# --- coordinate layer ------------------------------------------------------

def J6(z):
    return np.asarray(z) @ J_MATRIX.T


def P6(z):
    return np.asarray(z) @ P_MATRIX.T


def Q6(z):
    return np.asarray(z) @ Q_MATRIX.T


def g6(z, w):
    return np.einsum("...i,ij,...j->...", z, METRIC, w)


def G6(x, y):
    """G(X, Y) in (alpha, beta) coordinates."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, b = x[..., :3], x[..., 3:]
    c, d = y[..., :3], y[..., 3:]
    bc = np.cross(b, c)
    ad = np.cross(a, d)
    ac = np.cross(a, c)
    bd = np.cross(b, d)
    first = bc + ad + ac - 2 * bd
    second = -ad - bc + 2 * ac - bd
    return 2.0 / (3.0 * SQRT3) * np.concatenate([first, second], axis=-1)


def _scale(s, v):
    return np.asarray(s)[..., None] * v


def R6(x, y, z):
    """Curvature tensor R(X, Y)Z of the nearly Kähler connection."""
    jx, jy, jz = J6(x), J6(y), J6(z)
    px, py = P6(x), P6(y)
    jpx, jpy = J6(px), J6(py)
    out = 5.0 / 12.0 * (_scale(g6(y, z), x) - _scale(g6(x, z), y))
    out = out + 1.0 / 12.0 * (
        _scale(g6(jy, z), jx) - _scale(g6(jx, z), jy) - 2 * _scale(g6(jx, y), jz)
    )
    out = out + 1.0 / 3.0 * (
        _scale(g6(py, z), px)
        - _scale(g6(px, z), py)
        + _scale(g6(jpy, z), jpx)
        - _scale(g6(jpx, z), jpy)
    )
    return out


def nk_correction6(x, y):
    """The term 1/2 (JG(X, PY) + JG(Y, PX)) separating the two connections."""
    return 0.5 * (J6(G6(x, P6(y))) + J6(G6(y, P6(x))))


def quartic_rhs6(x, y, z, w):
    """Right side of the quartic identity for g(G(X, Y), G(Z, W)).

    The pattern is g(X,Z)g(Y,W) - g(X,W)g(Y,Z) + g(JX,Z)g(Y,JW) - g(JX,W)g(JZ,Y),
    scaled by 1/3.
    """
    jx, jz, jw = J6(x), J6(z), J6(w)
    return (
        g6(x, z) * g6(y, w)
        - g6(x, w) * g6(y, z)
        + g6(jx, z) * g6(y, jw)
        - g6(jx, w) * g6(jz, y)
    ) / 3.0


def trivialize(pq, uv):
    """Ambient R^8 vectors at ``pq`` to (alpha, beta) coordinates.

    The real parts of ``p^-1 u`` and ``q^-1 v`` are the normal components and
    are dropped, so this is the tangential projection as well.
    """
    pq = np.asarray(pq, dtype=float)
    uv = np.asarray(uv, dtype=float)
    a = qmul(qconj(pq[..., :4]), uv[..., :4])[..., 1:]
    b = qmul(qconj(pq[..., 4:]), uv[..., 4:])[..., 1:]
    return np.concatenate([a, b], axis=-1)


def normal_components(pq, uv):
    """Real parts of ``p^-1 u`` and ``q^-1 v``: the two position-normal components."""
    pq = np.asarray(pq, dtype=float)
    uv = np.asarray(uv, dtype=float)
    a = qmul(qconj(pq[..., :4]), uv[..., :4])[..., 0]
    b = qmul(qconj(pq[..., 4:]), uv[..., 4:])[..., 0]
    return np.stack([a, b], axis=-1)


def ambient6(pq, z):
    """(alpha, beta) coordinates at ``pq`` to the ambient R^8 vector (p alpha, q beta)."""
    pq = np.asarray(pq, dtype=float)
    z = np.asarray(z, dtype=float)
    u = qmul(pq[..., :4], qpure(z[..., :3]))
    v = qmul(pq[..., 4:], qpure(z[..., 3:]))
    return np.concatenate([u, v], axis=-1)


# --- value types -----------------------------------------------------------

@dataclass(frozen=True)
class SurfacePoint:
    p: Quaternion
    q: Quaternion

    def __post_init__(self):
        for name, v in (("p", self.p), ("q", self.q)):
            if abs(v.norm() - 1.0) > POINT_TOL:
                raise NotOnManifold(f"{name} has norm {v.norm():.15g}, expected 1")

    @classmethod
    def from_array(cls, pq) -> "SurfacePoint":
        pq = np.asarray(pq, dtype=float)
        return cls(Quaternion.from_array(pq[:4]), Quaternion.from_array(pq[4:]))

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.p.to_array(), self.q.to_array()])

    def distance(self, other: "SurfacePoint") -> float:
        return float(np.linalg.norm(self.to_array() - other.to_array()))


ORIGIN = SurfacePoint(Quaternion(1.0), Quaternion(1.0))


@dataclass(frozen=True)
class AmbientVector:
    u: Quaternion
    v: Quaternion

    @classmethod
    def from_array(cls, uv) -> "AmbientVector":
        uv = np.asarray(uv, dtype=float)
        return cls(Quaternion.from_array(uv[:4]), Quaternion.from_array(uv[4:]))

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.u.to_array(), self.v.to_array()])


@dataclass(frozen=True)
class TangentVector:
    base: SurfacePoint
    alpha: ImaginaryQuaternion
    beta: ImaginaryQuaternion

    @classmethod
    def from_coords(cls, base: SurfacePoint, z) -> "TangentVector":
        z = np.asarray(z, dtype=float)
        return cls(base, ImaginaryQuaternion.from_array(z[:3]), ImaginaryQuaternion.from_array(z[3:]))

    @property
    def coords(self) -> np.ndarray:
        return np.concatenate([self.alpha.to_array(), self.beta.to_array()])

    def ambient(self) -> AmbientVector:
        return AmbientVector.from_array(ambient6(self.base.to_array(), self.coords))

    def tangency_residual(self) -> float:
        """Largest inner product of (p alpha, q beta) with the normals (p,0), (0,q)."""
        pq = self.base.to_array()
        return float(np.max(np.abs(normal_components(pq, self.ambient().to_array()))))

    def _like(self, z) -> "TangentVector":
        return TangentVector.from_coords(self.base, z)

    def __add__(self, other):
        if not isinstance(other, TangentVector):
            return NotImplemented
        _check_base(self, other)
        return self._like(self.coords + other.coords)

    def __sub__(self, other):
        if not isinstance(other, TangentVector):
            return NotImplemented
        _check_base(self, other)
        return self._like(self.coords - other.coords)

    def __neg__(self):
        return self._like(-self.coords)

    def __mul__(self, s):
        if isinstance(s, (int, float)):
            return self._like(s * self.coords)
        return NotImplemented

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.sqrt(metric_g(self, self)))


def _check_base(*vecs: TangentVector) -> None:
    b0 = vecs[0].base
    for v in vecs[1:]:
        if v.base is not b0 and b0.distance(v.base) > POINT_TOL:
            raise BasePointMismatch(
                f"tangent vectors live at different points (distance {b0.distance(v.base):.3e})"
            )


# --- operations on tangent vectors -----------------------------------------

def apply_J(Z: TangentVector) -> TangentVector:
    return Z._like(J6(Z.coords))


def apply_P(Z: TangentVector) -> TangentVector:
    return TangentVector(Z.base, Z.beta, Z.alpha)


def apply_Q(Z: TangentVector) -> TangentVector:
    return TangentVector(Z.base, -Z.alpha, Z.beta)


def metric_g(Z: TangentVector, W: TangentVector) -> float:
    _check_base(Z, W)
    return float(g6(Z.coords, W.coords))


def metric_g_from_definition(Z: TangentVector, W: TangentVector) -> float:
    """g as the average of the ambient inner products of (Z, W) and (JZ, JW)."""
    _check_base(Z, W)
    zz = Z.ambient().to_array() @ W.ambient().to_array()
    jj = apply_J(Z).ambient().to_array() @ apply_J(W).ambient().to_array()
    return float(0.5 * (zz + jj))


def euclid_inner(Z: TangentVector, W: TangentVector) -> float:
    """Standard R^8 inner product of the ambient representatives."""
    _check_base(Z, W)
    return float(Z.ambient().to_array() @ W.ambient().to_array())


def tensor_G(X: TangentVector, Y: TangentVector) -> TangentVector:
    _check_base(X, Y)
    return X._like(G6(X.coords, Y.coords))


def curvature_R(X: TangentVector, Y: TangentVector, Z: TangentVector) -> TangentVector:
    _check_base(X, Y, Z)
    return X._like(R6(X.coords, Y.coords, Z.coords))


def euclid_to_nk(valueE: TangentVector, X: TangentVector, Y: TangentVector) -> TangentVector:
    """Convert a Euclidean covariant derivative of Y along X to the nearly Kähler one."""
    _check_base(valueE, X, Y)
    return valueE._like(valueE.coords - nk_correction6(X.coords, Y.coords))


def product_projections(Z: TangentVector) -> tuple[AmbientVector, AmbientVector]:
    """Split Z into its (U, 0) and (0, V) parts via (Z - QZ)/2 and (Z + QZ)/2."""
    z = Z.ambient().to_array()
    qz = apply_Q(Z).ambient().to_array()
    return AmbientVector.from_array(0.5 * (z - qz)), AmbientVector.from_array(0.5 * (z + qz))


# --- isometries ------------------------------------------------------------

def _rotate(c, v):
    """Imaginary part of c v c^-1 for unit c, on (..., 3) arrays."""
    return qmul(qmul(c, qpure(v)), qconj(c))[..., 1:]


@dataclass(frozen=True)
class Isometry:
    """One of F_abc, F1, F2 acting on points and tangent vectors.

    ``holomorphic`` records whether dF commutes with J (F_abc) or
    anticommutes with it (F1, F2).
    """

    name: str
    kind: str
    abc: tuple = ()

    @property
    def holomorphic(self) -> bool:
        return self.kind == "abc"

    def apply_array(self, pq) -> np.ndarray:
        pq = np.asarray(pq, dtype=float)
        p, q = pq[..., :4], pq[..., 4:]
        if self.kind == "abc":
            a, b, c = self.abc
            cb = qconj(c)
            return np.concatenate([qmul(qmul(a, p), cb), qmul(qmul(b, q), cb)], axis=-1)
        if self.kind == "F1":
            return np.concatenate([q, p], axis=-1)
        if self.kind == "F2":
            pb = qconj(p)
            return np.concatenate([pb, qmul(q, pb)], axis=-1)
        raise ValueError(self.kind)

    def push_array(self, pq, z) -> np.ndarray:
        """Pushforward of coordinates ``z`` at source point ``pq``."""
        pq = np.asarray(pq, dtype=float)
        z = np.asarray(z, dtype=float)
        a, b = z[..., :3], z[..., 3:]
        if self.kind == "abc":
            c = self.abc[2]
            return np.concatenate([_rotate(c, a), _rotate(c, b)], axis=-1)
        if self.kind == "F1":
            return np.concatenate([b, a], axis=-1)
        if self.kind == "F2":
            # (p, q) -> (p^-1, q p^-1): alpha' = -p alpha p^-1, beta' = p (beta - alpha) p^-1
            p = pq[..., :4]
            return np.concatenate([-_rotate(p, a), _rotate(p, b - a)], axis=-1)
        raise ValueError(self.kind)

    def point(self, pt: SurfacePoint) -> SurfacePoint:
        return SurfacePoint.from_array(self.apply_array(pt.to_array()))

    def push(self, Z: TangentVector) -> TangentVector:
        pq = Z.base.to_array()
        return TangentVector.from_coords(self.point(Z.base), self.push_array(pq, Z.coords))


def isometry_Fabc(a: Quaternion, b: Quaternion, c: Quaternion) -> Isometry:
    for name, v in (("a", a), ("b", b), ("c", c)):
        if abs(v.norm() - 1.0) > POINT_TOL:
            raise NonUnitParameter(f"{name} must be a unit quaternion, got norm {v.norm():.15g}")
    return Isometry("Fabc", "abc", (a.to_array(), b.to_array(), c.to_array()))


F1 = Isometry("F1", "F1")
F2 = Isometry("F2", "F2")


def isometry_F1(pt: SurfacePoint) -> SurfacePoint:
    return F1.point(pt)


def isometry_F2(pt: SurfacePoint) -> SurfacePoint:
    return F2.point(pt)


# --- finite-difference connections -----------------------------------------

Field = Callable[[np.ndarray], np.ndarray]


def great_circle(pq, z, s) -> np.ndarray:
    """Points (p exp(s alpha), q exp(s beta)) for an array of parameters ``s``."""
    pq = np.asarray(pq, dtype=float)
    s = np.asarray(s, dtype=float)[..., None]
    z = np.asarray(z, dtype=float)
    p = qmul(pq[:4], qexp(s * z[:3]))
    q = qmul(pq[4:], qexp(s * z[3:]))
    return np.concatenate([p, q], axis=-1)


def euclid_derivative_fd(field: Field, X: TangentVector, h: float = 1e-5) -> TangentVector:
    """Euclidean covariant derivative of a vector field along X.

    ``field`` maps an R^8 point to (alpha, beta) coordinates.  The ambient
    field (p alpha, q beta) is differenced along the great circle through the
    base point with velocity X (central, one Richardson step), then projected
    to the tangent space.
    """
    pq = X.base.to_array()
    s = np.array([-h, h, -h / 2, h / 2])
    pts = great_circle(pq, X.coords, s)
    vals = np.array([ambient6(pt, field(pt)) for pt in pts])
    d_h = (vals[1] - vals[0]) / (2 * h)
    d_h2 = (vals[3] - vals[2]) / h
    deriv = (4 * d_h2 - d_h) / 3
    return TangentVector.from_coords(X.base, trivialize(pq, deriv))


def nk_derivative_fd(field: Field, X: TangentVector, h: float = 1e-5) -> TangentVector:
    Y = TangentVector.from_coords(X.base, field(X.base.to_array()))
    return euclid_to_nk(euclid_derivative_fd(field, X, h), X, Y)


def nabla_J_fd(field: Field, X: TangentVector, h: float = 1e-5) -> TangentVector:
    """(nabla_X J) Y computed numerically for the field Y."""
    JY = lambda pt: J6(field(pt))
    return nk_derivative_fd(JY, X, h) - apply_J(nk_derivative_fd(field, X, h))


def nabla_P_fd(field: Field, X: TangentVector, h: float = 1e-5) -> TangentVector:
    PY = lambda pt: P6(field(pt))
    return nk_derivative_fd(PY, X, h) - apply_P(nk_derivative_fd(field, X, h))


def random_point(rng: np.random.Generator) -> SurfacePoint:
    pq = rng.normal(size=(2, 4))
    pq /= np.linalg.norm(pq, axis=1, keepdims=True)
    return SurfacePoint.from_array(pq.ravel())


def random_coords(rng: np.random.Generator, min_norm: float = 1e-3) -> np.ndarray:
    """Uniform [-1, 1]^6 coordinates, rejecting near-zero vectors."""
    while True:
        z = rng.uniform(-1.0, 1.0, size=6)
        if np.linalg.norm(z) >= min_norm:
            return z


def random_tangent(rng: np.random.Generator, base: SurfacePoint) -> TangentVector:
    return TangentVector.from_coords(base, random_coords(rng))


def random_linear_field(rng: np.random.Generator) -> Field:
    """A smooth, non-invariant vector field: coordinates affine in the ambient point."""
    c0 = rng.uniform(-1, 1, size=6)
    M = rng.uniform(-1, 1, size=(6, 8))
    return lambda pt: c0 + M @ pt
