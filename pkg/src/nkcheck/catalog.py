"""Explicit CR immersions into S^3 x S^3 and the profile ODE behind one family.

Every chart is a vectorized map ``func(x) -> pq`` from ``(..., 3)`` parameter
arrays to ``(..., 8)`` points, together with its parameter box, an orientation
sign for the tangent 3-planes and the invariants it is expected to exhibit.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .frame import PKind
from .nkcore import SQRT3, F1, F2, Isometry, SurfacePoint
from .quat import Quaternion, qconj, qexp, qmul, random_unit

_S = SQRT3 / 2


class InvalidInitialNorm(ValueError):
    pass


class ProfileDomainMismatch(ValueError):
    pass


class WrongCoefficientNorm(ValueError):
    pass


class UnknownChart(KeyError):
    pass


# --- profile ODE -----------------------------------------------------------

Profile = Callable[[np.ndarray], np.ndarray]


def make_profile(name: str, scale: float = 1.0) -> Profile:
    """Profile functions f(t) by id: ``zero``, ``lin`` (scale*t), ``sin`` (scale*sin t)."""
    if name == "zero":
        return lambda t: np.zeros_like(np.asarray(t, dtype=float))
    if name == "lin":
        return lambda t: scale * np.asarray(t, dtype=float)
    if name == "sin":
        return lambda t: scale * np.sin(t)
    raise ValueError(f"unknown profile {name!r}")


def _rhs(f: Profile, t, y):
    """(a1, a2)' for the profile ODE; y has shape (..., 2) complex."""
    e = np.exp(1j * f(t))
    return np.stack([-_S * y[..., 1] / e, _S * y[..., 0] * e], axis=-1)


def _rk4_step(f, t, y, h):
    h_ = np.asarray(h)[..., None]
    k1 = _rhs(f, t, y)
    k2 = _rhs(f, t + h / 2, y + h_ / 2 * k1)
    k3 = _rhs(f, t + h / 2, y + h_ / 2 * k2)
    k4 = _rhs(f, t + h, y + h_ * k3)
    return y + h_ / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass(frozen=True)
class ProfilePath:
    t: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    f: Profile = field(repr=False)
    max_drift: float = 0.0

    @property
    def step(self) -> float:
        return float(self.t[1] - self.t[0])

    def covers(self, lo: float, hi: float) -> bool:
        return self.t[0] <= lo and hi <= self.t[-1]

    def evaluate(self, t) -> tuple[np.ndarray, np.ndarray]:
        """(a1, a2) at arbitrary t by one RK4 substep from the nearest lower node."""
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.floor((t - self.t[0]) / self.step).astype(int), 0, len(self.t) - 2)
        t0 = self.t[idx]
        y0 = np.stack([self.a1[idx], self.a2[idx]], axis=-1)
        y = _rk4_step(self.f, t0, y0, t - t0)
        y = y / np.linalg.norm(y, axis=-1, keepdims=True)
        return y[..., 0], y[..., 1]

    def quaternion(self, t) -> np.ndarray:
        """A(t) = a1 + a2 j as a (..., 4) array."""
        a1, a2 = self.evaluate(t)
        return np.stack([a1.real, a1.imag, a2.real, a2.imag], axis=-1)


def integrate_A(f_profile: Profile, a0=(1.0, 0.0), t_range=(0.0, 2 * np.pi), step=1e-3) -> ProfilePath:
    """Classical RK4 for the profile ODE with per-step renormalization.

    ``max_drift`` is the largest |norm - 1| seen before each renormalization.
    """
    y = np.array(a0, dtype=complex)
    norm0 = np.sum(np.abs(y) ** 2)
    if abs(norm0 - 1) > 1e-12:
        raise InvalidInitialNorm(f"|a1|^2 + |a2|^2 = {norm0:.15g}, expected 1")
    if not step > 0:
        raise ValueError("step must be positive")
    t0, t1 = t_range
    n = max(1, int(round((t1 - t0) / step)))
    ts = np.linspace(t0, t1, n + 1)
    h = (t1 - t0) / n
    out = np.empty((n + 1, 2), dtype=complex)
    out[0] = y
    drift = 0.0
    for k in range(n):
        y = _rk4_step(f_profile, ts[k], y, h)
        nrm = np.linalg.norm(y)
        drift = max(drift, abs(nrm - 1))
        y = y / nrm
        out[k + 1] = y
    return ProfilePath(ts, out[:, 0], out[:, 1], f_profile, float(drift))


def _right_matrix(b):
    """4x4 matrix of x -> x b."""
    w, x, y, z = b
    return np.array([[w, -x, -y, -z], [x, w, z, -y], [y, -z, w, x], [z, y, -x, w]])


def integrate_AB(f_profile: Profile, A0=(1.0, 0.0, 0.0, 0.0), t_range=(0.0, 2 * np.pi), step=1e-3):
    """Integrate A and B jointly without imposing B = A i.

    A' = (sqrt3/4)(A j - B k) e^{-if},  B' = -(sqrt3/4)(A k + B j) e^{-if}.
    Both reduce to the profile ODE when B = A i, so the returned residual
    max |B - A i| measures how well the joint flow keeps that first integral.
    """
    c = SQRT3 / 4
    Ri, Rj, Rk = (_right_matrix(e) for e in np.eye(4)[1:])
    mix = c * np.block([[Rj, -Rk], [-Rk, -Rj]])

    def rhs(t, y):
        f = float(f_profile(t))
        Re = _right_matrix((np.cos(f), -np.sin(f), 0.0, 0.0))
        m = mix @ y
        return np.concatenate([Re @ m[:4], Re @ m[4:]])

    A0 = np.asarray(A0, dtype=float)
    y = np.concatenate([A0, Ri @ A0])
    t0, t1 = t_range
    n = max(1, int(round((t1 - t0) / step)))
    h = (t1 - t0) / n
    resid = 0.0
    for k in range(n):
        t = t0 + k * h
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        resid = max(resid, float(np.abs(y[4:] - Ri @ y[:4]).max()))
    return y, resid


# --- charts ----------------------------------------------------------------

@dataclass(frozen=True)
class Expectation:
    """Invariants a chart is known to carry.

    ``a`` is the full angle vector when it is gauge-fixed, ``a34`` the pair
    (a3, a4) when only that is meaningful, ``omega`` the theta = 0 data and
    ``defect_abs`` the magnitude of g([E1, E2], E3).
    """

    kind: PKind
    theta: float
    a: Optional[tuple] = None
    a34: Optional[tuple] = None
    omega: Optional[tuple] = None
    defect_abs: float = 0.0
    branch_t: Optional[float] = None


@dataclass(frozen=True)
class ImmersionChart:
    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    domain: tuple
    expected: Optional[Expectation] = None
    orientation: int = 1

    def __call__(self, x) -> np.ndarray:
        return self.func(np.asarray(x, dtype=float))

    def eval(self, params) -> SurfacePoint:
        return SurfacePoint.from_array(self.func(np.asarray(params, dtype=float)))

    def grid(self, n: int = 5) -> np.ndarray:
        """n^3 interior points, equally spaced and away from the box faces."""
        axes = [lo + (hi - lo) * (np.arange(n) + 1) / (n + 1) for lo, hi in self.domain]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)

    def sample(self, rng: np.random.Generator, n: int, margin: float = 0.1) -> np.ndarray:
        """Uniform points in the box shrunk by ``margin`` of its width on each side."""
        lo = np.array([d[0] for d in self.domain])
        hi = np.array([d[1] for d in self.domain])
        w = hi - lo
        return rng.uniform(lo + margin * w, hi - margin * w, size=(n, 3))

    @property
    def center(self) -> np.ndarray:
        return np.array([(lo + hi) / 2 for lo, hi in self.domain])


def _eiphase(a):
    """cos(a) + i sin(a) as a (..., 4) array."""
    a = np.asarray(a, dtype=float)
    z = np.zeros_like(a)
    return np.stack([np.cos(a), np.sin(a), z, z], axis=-1)


_THM42_OMEGA = {
    "f1": (-0.5, _S, 0.0),
    "f2": (-0.5, -_S, 0.0),
    "f3": (1.0, 0.0, 0.0),
}


def chart_theorem42(which: str = "f1", profile: str | Profile = "zero", a0=(1.0, 0.0),
                    t_domain=(0.0, 2.0), path: ProfilePath | None = None,
                    step: float = 1e-3, name: str | None = None) -> ImmersionChart:
    """The P D1 = D1 family built from the profile path A(t).

    ``f1`` = (e^{i(sqrt3 u/2 + v/2)}, A(t) e^{i(sqrt3 u/2 - v/2)}), ``f2`` swaps
    the factors and ``f3`` = ((cos v + i sin v) conj(A), e^{-i(sqrt3 u/2 - v/2)} conj(A)).
    """
    if which not in _THM42_OMEGA:
        raise ValueError(f"unknown family {which!r}")
    f = make_profile(profile) if isinstance(profile, str) else profile
    if path is None:
        # a0 is the value of A at the start of the t-domain
        path = integrate_A(f, a0, tuple(t_domain), step)
    elif not path.covers(*t_domain):
        raise ProfileDomainMismatch(
            f"path covers [{path.t[0]}, {path.t[-1]}] but the chart needs {list(t_domain)}"
        )

    def func(x):
        x = np.asarray(x, dtype=float)
        u, v, t = x[..., 0], x[..., 1], x[..., 2]
        A = path.quaternion(t)
        plus = _eiphase(_S * u + 0.5 * v)
        minus = _eiphase(_S * u - 0.5 * v)
        if which == "f1":
            return np.concatenate([plus, qmul(A, minus)], axis=-1)
        if which == "f2":
            return np.concatenate([qmul(A, minus), plus], axis=-1)
        Ab = qconj(A)
        return np.concatenate([qmul(_eiphase(v), Ab), qmul(qconj(minus), Ab)], axis=-1)

    label = profile if isinstance(profile, str) else "custom"
    exp = Expectation(PKind.D1_EQUALS_D1, 0.0, omega=_THM42_OMEGA[which])
    return ImmersionChart(name or f"thm42.{which}.{label}", func,
                          ((-1.0, 1.0), (-1.0, 1.0), tuple(t_domain)), exp)


def chart_theorem52(A: Quaternion = Quaternion(0.5), E: Quaternion = Quaternion(0.5),
                    name: str = "thm52") -> ImmersionChart:
    """The P D1 = D2 immersion with coefficients A, E of norm 1/2."""
    for label, c in (("A", A), ("E", E)):
        if abs(c.norm() - 0.5) > 1e-12:
            raise WrongCoefficientNorm(f"{label} must have norm 1/2, got {c.norm():.15g}")
    Aa, Ea = A.to_array(), E.to_array()
    r32, r12, r23, r16 = np.sqrt(1.5), np.sqrt(0.5), np.sqrt(2 / 3), np.sqrt(1 / 6)

    def func(x):
        x = np.asarray(x, dtype=float)
        u, v, t = x[..., 0], x[..., 1], x[..., 2]
        a = r32 * u - r12 * v
        b = r23 * t + r16 * u + r12 * v
        c = r32 * u + r12 * v
        d = r23 * t + r16 * u - r12 * v
        pp = np.stack([np.cos(a), np.sin(a), SQRT3 * np.sin(b), SQRT3 * np.cos(b)], axis=-1)
        qq = np.stack([np.cos(c), np.sin(c), -SQRT3 * np.sin(d), -SQRT3 * np.cos(d)], axis=-1)
        return np.concatenate([qmul(Aa, pp), qmul(Ea, qq)], axis=-1)

    exp = Expectation(PKind.D1_PERP_SUBCASE_D2, np.pi / 2, a=(1.0, 0.0, 0.0, 0.0))
    return ImmersionChart(name, func, ((-1.0, 1.0),) * 3, exp)


C_UNIT = np.array([_S, 0.5, 0.0, 0.0])  # (sqrt3 + i)/2

# branch value t and the orientation that realizes it with (a3, a4) = (cos t, sin t)
_COR_BRANCH = {"f1": (np.pi / 3, 1), "f2": (2 * np.pi / 3, -1), "f3": (0.0, -1)}


def chart_corollary(which: str = "f1", half_width: float = 0.6) -> ImmersionChart:
    """The P D1 = D3 immersions in exponential coordinates u = exp(x1 i + x2 j + x3 k).

    f1 = (u C u^-1, u^-1), f2 = (u^-1, u C u^-1), f3 = (u, u C) with C = (sqrt3 + i)/2.
    """
    if which not in _COR_BRANCH:
        raise ValueError(f"unknown family {which!r}")

    def func(x):
        u = qexp(np.asarray(x, dtype=float))
        ub = qconj(u)
        uc = qmul(u, C_UNIT)
        if which == "f1":
            return np.concatenate([qmul(uc, ub), ub], axis=-1)
        if which == "f2":
            return np.concatenate([ub, qmul(uc, ub)], axis=-1)
        return np.concatenate([u, uc], axis=-1)

    t, orient = _COR_BRANCH[which]
    exp = Expectation(PKind.D1_PERP_SUBCASE_D3, np.pi / 2, a34=(np.cos(t), np.sin(t)),
                      defect_abs=2 / SQRT3, branch_t=t)
    w = half_width
    return ImmersionChart(f"cor.{which}", func, ((-w, w),) * 3, exp, orient)


def transform_chart(chart: ImmersionChart, iso: Isometry, name: str | None = None) -> ImmersionChart:
    """Compose a chart with an isometry.

    The orientation of the image is the one transported by the map, so it
    flips for the anti-holomorphic F1 and F2.  Expected angle data is carried
    over with the transformation laws (theta and the class are preserved).
    """
    def func(x):
        return iso.apply_array(chart.func(x))

    exp = chart.expected
    if exp is not None:
        exp = _transform_expectation(exp, iso)
    orient = chart.orientation if iso.holomorphic else -chart.orientation
    return ImmersionChart(name or f"{iso.name}({chart.name})", func, chart.domain, exp, orient)


def _transform_expectation(exp: Expectation, iso: Isometry) -> Expectation:
    if iso.kind == "abc":
        return exp
    from .frame import AngleData, lemma4_transform

    a = exp.a if exp.a is not None else (0.0, 0.0) + tuple(exp.a34 or (0.0, 0.0))
    ang = AngleData(exp.theta, a, exp.omega or (0.0, 0.0, 0.0))
    new = lemma4_transform(ang, iso.kind, law="corrected")
    return replace(
        exp,
        a=new.a if exp.a is not None else None,
        a34=new.a[2:] if exp.a34 is not None else None,
        omega=new.omega if exp.omega is not None else None,
        branch_t=None,
    )


# --- probe charts ----------------------------------------------------------

def probe_chart(rng: np.random.Generator, name: str = "probe") -> ImmersionChart:
    """A chart whose tangent plane at the center is a random CR 3-plane.

    x -> (p exp(w_alpha), q exp(w_beta)) with w = x V, where the rows of V span
    (e1, J e1, e3) for a random g-unit e1 and a random e3 g-orthogonal to both.
    Only the center is meant to be analyzed.
    """
    from .nkcore import J6, g6

    pq = np.concatenate([random_unit(rng), random_unit(rng)])
    e1 = rng.uniform(-1, 1, 6)
    e1 /= np.sqrt(g6(e1, e1))
    e2 = J6(e1)
    e3 = rng.uniform(-1, 1, 6)
    e3 = e3 - g6(e3, e1) * e1 - g6(e3, e2) * e2
    e3 /= np.sqrt(g6(e3, e3))
    mix = rng.uniform(-0.5, 0.5, size=(3, 3)) + 2 * np.eye(3)
    mix[:2, 2] = 0.0  # keep the first two rows inside D1
    V = mix @ np.array([e1, e2, e3])

    def func(x):
        w = np.asarray(x, dtype=float) @ V
        return np.concatenate([qmul(pq[:4], qexp(w[..., :3])), qmul(pq[4:], qexp(w[..., 3:]))], axis=-1)

    return ImmersionChart(name, func, ((-0.1, 0.1),) * 3)


def probe_charts(seed: int, count: int = 10) -> list[ImmersionChart]:
    rng = np.random.default_rng(seed)
    return [probe_chart(rng, f"probe.{k}") for k in range(count)]


# --- registry --------------------------------------------------------------

def _thm52_variants(seed: int = 52, count: int = 5):
    rng = np.random.default_rng(seed)
    out = {}
    for k in range(count):
        A = Quaternion.from_array(0.5 * random_unit(rng))
        E = Quaternion.from_array(0.5 * random_unit(rng))
        out[f"thm52.r{k + 1}"] = lambda A=A, E=E, k=k: chart_theorem52(A, E, f"thm52.r{k + 1}")
    return out


def _build_registry():
    reg = {}
    for fam in ("f1", "f2", "f3"):
        reg[f"thm42.{fam}"] = lambda fam=fam: chart_theorem42(fam, "zero", name=f"thm42.{fam}")
        for prof in ("lin", "sin"):
            reg[f"thm42.{fam}.{prof}"] = lambda fam=fam, prof=prof: chart_theorem42(fam, prof)
    reg["thm52"] = lambda: chart_theorem52()
    reg.update(_thm52_variants())
    for fam in ("f1", "f2", "f3"):
        reg[f"cor.{fam}"] = lambda fam=fam: chart_corollary(fam)
    return reg


_REGISTRY = _build_registry()
_CACHE: dict[str, ImmersionChart] = {}


def chart_ids() -> list[str]:
    return list(_REGISTRY)


def get_chart(chart_id: str) -> ImmersionChart:
    if chart_id not in _REGISTRY:
        raise UnknownChart(chart_id)
    if chart_id not in _CACHE:
        _CACHE[chart_id] = _REGISTRY[chart_id]()
    return _CACHE[chart_id]


__all__ = [
    "C_UNIT", "Expectation", "ImmersionChart", "InvalidInitialNorm", "ProfileDomainMismatch",
    "ProfilePath", "UnknownChart", "WrongCoefficientNorm", "chart_corollary", "chart_ids",
    "chart_theorem42", "chart_theorem52", "get_chart", "integrate_A", "integrate_AB",
    "make_profile", "probe_chart", "probe_charts", "transform_chart", "F1", "F2",
]
