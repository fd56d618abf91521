"""Adapted frames, angle functions and connection coefficients along CR charts.

The heavy lifting is done on batches of parameter points: every ``_``-prefixed
helper takes arrays with a leading batch axis ``N`` and works purely in
(alpha, beta) coordinates.  The public single-point API (``numeric_pushforward``,
``cr_split``, ``build_frame``, ``extract_angles`` ...) wraps those helpers.

Frame convention
----------------
E3 spans the kernel of the projected J on the tangent space and is oriented so
that (E1, E2, E3) agrees with the chart orientation.  E1 is fixed in D1 by
maximizing g(PE1, E1); when that functional is flat (cos(theta) = 0) the
fallback maximizes g(PE1, E3); when both are flat the reference gauge (the
projection onto D1 of the first chart direction that is well represented in
D1) is kept and the sample is flagged.  The sign of E1 is chosen so that the first significant entry of
(a1 sin(theta), a2 sin(theta), E1 coordinates) is positive.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .nkcore import (
    METRIC,
    SQRT3,
    G6,
    J6,
    P6,
    SurfacePoint,
    TangentVector,
    ambient6,
    g6,
    nk_correction6,
    trivialize,
)

H_FIRST = 1e-5
H_SECOND = 1e-3
EPS_GAUGE = 1e-6
CR_TOL = 1e-6
ORTHO_TOL = 1e-8


class DomainBoundary(ValueError):
    pass


class DegenerateDirection(ValueError):
    pass


class NotProperCR(ValueError):
    pass


class GaugeDegenerate(RuntimeError):
    pass


class FrameNotOrthonormal(ValueError):
    pass


class GaugeDiscontinuity(RuntimeError):
    pass


# --- batch helpers ---------------------------------------------------------

def _gmat(A, B):
    """Matrix of g(A_a, B_b) for stacks of coordinate vectors (..., m, 6), (..., n, 6)."""
    return np.einsum("...ai,ij,...bj->...ab", A, METRIC, B)


def _gvec(A, v):
    """g(A_a, v) for a stack (..., m, 6) and a vector (..., 6)."""
    return np.einsum("...ai,ij,...j->...a", A, METRIC, v)


def _gnormalize(v):
    return v / np.sqrt(g6(v, v))[..., None]


def _check_inside(chart, X, margin):
    lo = np.array([d[0] for d in chart.domain])
    hi = np.array([d[1] for d in chart.domain])
    inside = (X - margin >= lo) & (X + margin <= hi)
    if not np.all(inside):
        bad = np.asarray(X)[~np.all(inside, axis=-1)][0]
        raise DomainBoundary(f"parameters {bad.tolist()} too close to the domain boundary")


def _pushforwards(func, X, h=H_FIRST):
    """Coordinates of the three parameter derivatives at each point of ``X``.

    Central differences with one Richardson step.  Returns ``(pq, B)`` with
    shapes (N, 8) and (N, 3, 6).
    """
    X = np.asarray(X, dtype=float)
    eye = np.eye(3)
    offsets = np.array([-h, h, -h / 2, h / 2])
    pts = X[:, None, None, :] + offsets[None, None, :, None] * eye[None, :, None, :]
    vals = func(pts)  # (N, 3, 4, 8)
    pq = func(X)
    d_h = (vals[:, :, 1] - vals[:, :, 0]) / (2 * h)
    d_h2 = (vals[:, :, 3] - vals[:, :, 2]) / h
    deriv = (4 * d_h2 - d_h) / 3
    return pq, trivialize(pq[:, None, :], deriv)


@dataclass
class _FrameBatch:
    pq: np.ndarray  # (N, 8)
    B: np.ndarray  # (N, 3, 6) chart basis
    E: np.ndarray  # (N, 6, 6)
    sv: np.ndarray  # (N, 3) singular values of the projected J
    phi: np.ndarray
    e3_flipped: np.ndarray
    e1_flipped: np.ndarray
    degenerate: np.ndarray
    policy: np.ndarray  # 0 main, 1 fallback, 2 reference


def _cr_split_arrays(B, orientation, tol=CR_TOL, ref=None):
    """D1 reference vector e1 and oriented e3 from a tangent basis B (N, 3, 6)."""
    Gm = _gmat(B, B)
    L = np.linalg.cholesky(Gm)
    O = np.linalg.solve(L, B)  # rows g-orthonormal
    M = _gmat(O, J6(O))
    _, S, Vt = np.linalg.svd(M)
    bad = np.abs(S[:, 0] - 1) > tol * S[:, 0] + tol
    bad |= np.abs(S[:, 1] - 1) > tol * S[:, 0] + tol
    if np.any(bad):
        raise NotProperCR(
            f"projected J has singular values {S[bad][0].tolist()}; expected (1, 1, 0) for a proper CR 3-plane"
        )
    e3 = np.einsum("na,nai->ni", Vt[:, -1, :], O)
    # reference gauge: the chart direction best represented in D1
    proj = B - _gvec(B, e3)[..., None] * e3[:, None, :]
    ratio = g6(proj, proj) / g6(B, B)
    best = np.argmax(ratio > 0.5 * ratio.max(axis=-1, keepdims=True), axis=-1)
    e1 = _gnormalize(proj[np.arange(len(B)), best])
    if ref is not None:
        je1 = J6(e1)
        e1 = _gnormalize(g6(ref, e1)[:, None] * e1 + g6(ref, je1)[:, None] * je1)
    # orientation: coefficients of (e1, Je1, e3) in the basis B
    rhs = np.stack([_gvec(B, e1), _gvec(B, J6(e1)), _gvec(B, e3)], axis=-1)
    coef = np.linalg.solve(Gm, rhs)
    sign = np.sign(np.linalg.det(coef)) * orientation
    flipped = sign < 0
    e3 = np.where(flipped[:, None], -e3, e3)
    return e1, e3, S, flipped


def _gauge_arrays(e1, e3, policy="max_cos"):
    """Rotation angle phi fixing E1 in D1, plus the policy used per sample."""
    n = e1.shape[0]
    if policy == "none":
        return np.zeros(n), np.full(n, 2), np.zeros(n, dtype=bool)
    je1 = J6(e1)
    pe1 = P6(e1)
    A = g6(pe1, e1)
    Bv = g6(pe1, je1)
    a1 = g6(pe1, e3)
    a2 = g6(P6(je1), e3)
    main = np.hypot(A, Bv) >= EPS_GAUGE
    fallback = ~main & (np.hypot(a1, a2) >= EPS_GAUGE)
    phi = np.where(main, 0.5 * np.arctan2(Bv, A), np.where(fallback, np.arctan2(a2, a1), 0.0))
    used = np.where(main, 0, np.where(fallback, 1, 2))
    return phi, used, ~main & ~fallback


def _complete(E1, E3):
    E2 = J6(E1)
    return np.stack([E1, E2, E3, J6(E3), SQRT3 * G6(E1, E3), SQRT3 * G6(E2, E3)], axis=1)


def _sign_rule(E):
    """True where E1 must be negated under the sign rule."""
    pe1 = P6(E[:, 0])
    keys = np.concatenate([
        np.stack([g6(pe1, E[:, 2]), g6(pe1, E[:, 3])], axis=-1),
        E[:, 0],
    ], axis=-1)
    sig = np.abs(keys) > EPS_GAUGE
    first = np.argmax(sig, axis=-1)
    val = np.take_along_axis(keys, first[:, None], axis=-1)[:, 0]
    return val < 0


_E1_FLIP = np.array([-1.0, -1.0, 1.0, 1.0, -1.0, -1.0])


def _frame_from_parts(e1, e3, policy="max_cos"):
    phi, used, degenerate = _gauge_arrays(e1, e3, policy)
    E1 = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * J6(e1)
    E = _complete(E1, e3)
    flip = _sign_rule(E) if policy != "none" else np.zeros(len(E), dtype=bool)
    E = np.where(flip[:, None, None], E * _E1_FLIP[None, :, None], E)
    return E, phi, used, degenerate, flip


def _frames(func, X, orientation=1, policy="max_cos", h=H_FIRST, ref=None):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    pq, B = _pushforwards(func, X, h)
    e1, e3, S, e3_flipped = _cr_split_arrays(B, orientation, ref=ref)
    E, phi, used, degenerate, e1_flipped = _frame_from_parts(e1, e3, policy)
    return _FrameBatch(pq, B, E, S, phi, e3_flipped, e1_flipped, degenerate, used)


def _angles_arrays(E):
    """theta, a (N, 4) and omega (N, 3) from frames E (N, 6, 6)."""
    pe1 = P6(E[:, 0])
    c = g6(pe1, E[:, 0])
    comp = _gvec(E[:, 2:], pe1)  # (N, 4)
    s = np.linalg.norm(comp, axis=-1)
    theta = np.arctan2(s, c)
    with np.errstate(invalid="ignore", divide="ignore"):
        a = comp / s[:, None]
    # theta = 0 regime: read P off E3 and pick the Hopf section with a2 = 0
    pe3 = P6(E[:, 2])
    w1 = g6(pe3, E[:, 2])
    w2 = g6(pe3, E[:, 3])
    w3 = -g6(pe3, E[:, 4])
    a3 = np.sqrt(np.clip((1 + w1) / 2, 0.0, None))
    ok = a3 > 1e-8
    safe = np.where(ok, a3, 1.0)
    hopf = np.stack([
        np.where(ok, w3 / (2 * safe), 0.0),
        np.zeros_like(w1),
        np.where(ok, a3, 0.0),
        np.where(ok, w2 / (2 * safe), 1.0),
    ], axis=-1)
    small = s < EPS_GAUGE
    a = np.where(small[:, None], hopf, a)
    omega = _omega_from_a(a)
    return theta, a, omega


def _omega_from_a(a):
    a1, a2, a3, a4 = np.moveaxis(np.asarray(a), -1, 0)
    return np.stack([
        a3**2 - a4**2 + a2**2 - a1**2,
        2 * (a3 * a4 - a1 * a2),
        2 * (a1 * a3 + a2 * a4),
    ], axis=-1)


def p_matrix_form(theta, a) -> np.ndarray:
    """Matrix of g(PE_i, E_k) predicted by the angle functions."""
    a1, a2, a3, a4 = a
    c, s = np.cos(theta), np.sin(theta)
    m33 = a3**2 - a4**2 + (a2**2 - a1**2) * c
    m34 = 2 * (a3 * a4 - a1 * a2 * c)
    m35 = -(a1 * a3 + a2 * a4) * (1 + c)
    m36 = (a2 * a3 - a1 * a4) * (-1 + c)
    m55 = a1**2 - a2**2 + (a4**2 - a3**2) * c
    m56 = 2 * (a1 * a2 - a3 * a4 * c)
    return np.array([
        [c, 0, a1 * s, a2 * s, a3 * s, a4 * s],
        [0, -c, a2 * s, -a1 * s, -a4 * s, a3 * s],
        [a1 * s, a2 * s, m33, m34, m35, m36],
        [a2 * s, -a1 * s, m34, -m33, -m36, m35],
        [a3 * s, -a4 * s, m35, -m36, m55, m56],
        [a4 * s, a3 * s, m36, m35, m56, -m55],
    ])


# --- public single-point API -----------------------------------------------

@dataclass(frozen=True)
class GaugeInfo:
    policy: str
    phi: float
    e3_flipped: bool
    e1_flipped: bool
    degenerate: bool


@dataclass(frozen=True)
class FrameSample:
    base: SurfacePoint
    E: tuple
    gauge: GaugeInfo
    singular_values: tuple = ()

    @property
    def coords(self) -> np.ndarray:
        return np.array([e.coords for e in self.E])

    def gram(self) -> np.ndarray:
        C = self.coords
        return _gmat(C, C)


@dataclass(frozen=True)
class AngleData:
    theta: float
    a: tuple
    omega: tuple
    p_matrix_residual: float = 0.0


_POLICY_NAMES = {0: "max_cos", 1: "max_e3", 2: "reference"}


def _tv(base, z):
    return TangentVector.from_coords(base, z)


def numeric_pushforward(chart, params, direction, h=H_FIRST) -> TangentVector:
    """Derivative of the chart at ``params`` along ``direction`` as a tangent vector."""
    x = np.asarray(params, dtype=float)
    d = np.asarray(direction, dtype=float)
    if not np.linalg.norm(d) > 0:
        raise DegenerateDirection("direction must be nonzero")
    _check_inside(chart, x[None], h * np.abs(d))
    offs = np.array([-h, h, -h / 2, h / 2])
    vals = chart.func(x[None, :] + offs[:, None] * d[None, :])
    pq = chart.func(x)
    deriv = (4 * (vals[3] - vals[2]) / h - (vals[1] - vals[0]) / (2 * h)) / 3
    return _tv(SurfacePoint.from_array(pq), trivialize(pq, deriv))


def cr_split(basis, tol=CR_TOL, orientation=1):
    """Split a tangent 3-plane into D1 (orthonormal pair) and the unit E3.

    E3 is oriented so that (E1, E2, E3) has the orientation of ``basis`` times
    ``orientation``.
    """
    base = basis[0].base
    B = np.array([v.coords for v in basis])[None]
    e1, e3, _, _ = _cr_split_arrays(B, orientation, tol)
    return (_tv(base, e1[0]), _tv(base, J6(e1[0]))), _tv(base, e3[0])


def build_frame(d1, e3, gauge_policy="max_cos", strict=False) -> FrameSample:
    """Complete (D1 pair, E3) to the adapted frame E1..E6.

    ``gauge_policy="none"`` keeps the given E1.  With ``strict`` a degenerate
    gauge raises :class:`GaugeDegenerate` instead of being flagged.
    """
    base = d1[0].base
    e1 = d1[0].coords[None]
    E, phi, used, degenerate, flip = _frame_from_parts(e1, e3.coords[None], gauge_policy)
    if strict and degenerate[0]:
        raise GaugeDegenerate("both gauge functionals are flat at this point")
    name = "none" if gauge_policy == "none" else _POLICY_NAMES[int(used[0])]
    info = GaugeInfo(name, float(phi[0]), False, bool(flip[0]), bool(degenerate[0]))
    return FrameSample(base, tuple(_tv(base, z) for z in E[0]), info)


def frame_at(chart, params, gauge_policy="max_cos", strict=False) -> FrameSample:
    """Adapted frame of a chart at one parameter point."""
    x = np.asarray(params, dtype=float)[None]
    _check_inside(chart, x, H_FIRST)
    fb = _frames(chart.func, x, chart.orientation, gauge_policy)
    if strict and fb.degenerate[0]:
        raise GaugeDegenerate(f"both gauge functionals are flat at {x[0].tolist()}")
    base = SurfacePoint.from_array(fb.pq[0])
    name = "none" if gauge_policy == "none" else _POLICY_NAMES[int(fb.policy[0])]
    info = GaugeInfo(name, float(fb.phi[0]), bool(fb.e3_flipped[0]), bool(fb.e1_flipped[0]),
                     bool(fb.degenerate[0]))
    return FrameSample(base, tuple(_tv(base, z) for z in fb.E[0]), info, tuple(fb.sv[0]))


def extract_angles(fr: FrameSample) -> AngleData:
    gram = fr.gram()
    err = np.abs(gram - np.eye(6)).max()
    if err > ORTHO_TOL:
        raise FrameNotOrthonormal(f"frame Gram matrix deviates from identity by {err:.3e}")
    E = fr.coords[None]
    theta, a, omega = _angles_arrays(E)
    actual = _gmat(P6(E[0]), E[0])
    resid = float(np.abs(actual - p_matrix_form(theta[0], a[0])).max())
    return AngleData(float(theta[0]), tuple(a[0]), tuple(omega[0]), resid)


# --- classification --------------------------------------------------------

class PKind(enum.Enum):
    D1_EQUALS_D1 = "D1_EQUALS_D1"
    D1_PERP_SUBCASE_D2 = "D1_PERP_SUBCASE_D2"
    D1_PERP_SUBCASE_D3 = "D1_PERP_SUBCASE_D3"
    D1_PERP_MIXED = "D1_PERP_MIXED"
    GENERIC = "GENERIC"


@dataclass(frozen=True)
class PClass:
    kind: PKind
    theta: float
    a12_sq: float
    a34_sq: float
    tol: float


def classify(ang: AngleData, tol: float = 1e-5) -> PClass:
    a1, a2, a3, a4 = ang.a
    a12 = a1 * a1 + a2 * a2
    a34 = a3 * a3 + a4 * a4
    if ang.theta < tol:
        kind = PKind.D1_EQUALS_D1
    elif abs(ang.theta - np.pi / 2) < tol:
        if a34 < tol * tol:
            kind = PKind.D1_PERP_SUBCASE_D2
        elif a12 < tol * tol:
            kind = PKind.D1_PERP_SUBCASE_D3
        else:
            kind = PKind.D1_PERP_MIXED
    else:
        kind = PKind.GENERIC
    return PClass(kind, ang.theta, a12, a34, tol)


# --- coefficients ----------------------------------------------------------

@dataclass
class FrameJet:
    """Frames at a batch of points with their parameter derivatives.

    ``dA[n, l, j]`` is the derivative along parameter ``l`` of the ambient
    R^8 vector of E_j, ``c[n, i, l]`` are the coefficients of E_i (i < 3) in
    the chart basis and ``dc[n, m, i, l]`` their derivatives along ``m``.
    """

    frames: _FrameBatch
    dA: np.ndarray
    c: np.ndarray
    dc: np.ndarray


def _coefficients_in_basis(fb: _FrameBatch, E=None):
    E = fb.E if E is None else E
    Gm = _gmat(fb.B, fb.B)
    rhs = _gmat(fb.B, E[:, :3])  # (N, l, i)
    return np.swapaxes(np.linalg.solve(Gm, rhs), -1, -2)  # (N, i, l)


def _rotate_gauge(E, phi):
    """Rotate E1 by a constant angle inside D1, carrying E2, E5, E6 along."""
    c, s = np.cos(phi), np.sin(phi)
    E = E.copy()
    E1 = c * E[:, 0] + s * E[:, 1]
    E5 = c * E[:, 4] + s * E[:, 5]
    E[:, 0], E[:, 1] = E1, J6(E1)
    E[:, 4], E[:, 5] = E5, -J6(E5)
    return E


def frame_jet(chart, X, H=H_SECOND, gauge_offset=0.0, gauge_policy="max_cos") -> FrameJet:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    _check_inside(chart, X, H + H_FIRST)
    n = X.shape[0]
    eye = np.eye(3)
    offs = np.array([-H, H, -H / 2, H / 2])
    st = X[:, None, None, :] + offs[None, None, :, None] * eye[None, :, None, :]
    fc = _frames(chart.func, X, chart.orientation, gauge_policy)
    # stencil frames use the center E1 as reference, so a flat gauge stays continuous
    ref = np.broadcast_to(fc.E[:, None, None, 0], (n, 3, 4, 6)).reshape(-1, 6)
    fs = _frames(chart.func, st.reshape(-1, 3), chart.orientation, gauge_policy, ref=ref)
    fb = _FrameBatch(*(np.concatenate([getattr(fc, k), getattr(fs, k)])
                       for k in _FrameBatch.__dataclass_fields__))
    E = fb.E
    if gauge_offset:
        E = _rotate_gauge(E, gauge_offset)
    Ec = E[:n]
    Es = E[n:].reshape(n, 3, 4, 6, 6)
    # re-align the E1 sign of every stencil frame with the center
    dots = g6(Es[..., 0, :], Ec[:, None, None, 0, :])
    Es = np.where((dots < 0)[..., None, None], Es * _E1_FLIP[:, None], Es)
    drift = np.abs(np.abs(dots) - 1).max()
    if drift > 0.05:
        raise GaugeDiscontinuity(f"gauge jumps across the stencil (E1 overlap defect {drift:.3e})")
    pq_s = fb.pq[n:].reshape(n, 3, 4, 8)
    amb = ambient6(pq_s[..., None, :], Es)  # (n, 3, 4, 6, 8)
    dA = (4 * (amb[:, :, 3] - amb[:, :, 2]) / H - (amb[:, :, 1] - amb[:, :, 0]) / (2 * H)) / 3
    c_all = _coefficients_in_basis(fb, np.concatenate([Ec, Es.reshape(-1, 6, 6)]))
    c = c_all[:n]
    cs = c_all[n:].reshape(n, 3, 4, 3, 3)
    dc = (4 * (cs[:, :, 3] - cs[:, :, 2]) / H - (cs[:, :, 1] - cs[:, :, 0]) / (2 * H)) / 3
    centre = _FrameBatch(fb.pq[:n], fb.B[:n], Ec, fb.sv[:n], fb.phi[:n], fb.e3_flipped[:n],
                         fb.e1_flipped[:n], fb.degenerate[:n], fb.policy[:n])
    return FrameJet(centre, dA, c, dc)


@dataclass(frozen=True)
class CoefficientTable:
    """Gamma, h, b with zero-based indices: ``Gamma[i, j, k]`` is Gamma_{i+1 j+1}^{k+1}."""

    Gamma: np.ndarray
    h: np.ndarray
    b: np.ndarray

    def symmetry_residual(self) -> float:
        return float(max(
            np.abs(self.Gamma + np.swapaxes(self.Gamma, 1, 2)).max(),
            np.abs(self.b + np.swapaxes(self.b, 1, 2)).max(),
            np.abs(self.h - np.swapaxes(self.h, 0, 1)).max(),
        ))

    def structure(self) -> dict:
        return structure_relations(self.Gamma, self.h, self.b)

    def normal(self) -> dict:
        return normal_relations(self.Gamma, self.h, self.b)


def _coefficient_arrays(jet: FrameJet):
    fb = jet.frames
    # directional derivative of E_j along E_i (i < 3) in R^8
    dE = np.einsum("nil,nljx->nijx", jet.c, jet.dA)
    nabE = trivialize(fb.pq[:, None, None, :], dE)  # (n, 3, 6, 6)
    E = fb.E
    corr = nk_correction6(E[:, :3, None, :], E[:, None, :, :])
    nab = nabE - corr
    T = np.einsum("nijx,xy,nky->nijk", nab, METRIC, E)
    return T[:, :, :3, :3], T[:, :, :3, 3:], T[:, :, 3:, 3:]


def coefficient_tables(chart, X, **kw) -> list[CoefficientTable]:
    jet = frame_jet(chart, X, **kw)
    Gam, h, b = _coefficient_arrays(jet)
    return [CoefficientTable(Gam[k], h[k], b[k]) for k in range(len(Gam))]


def coefficients(chart, params, **kw) -> CoefficientTable:
    return coefficient_tables(chart, np.asarray(params, dtype=float)[None], **kw)[0]


_R3 = 1 / SQRT3


def structure_relations(Gam, h, b) -> dict:
    """The eighteen relations between Gamma, h and b, as named residuals."""
    G = lambda i, j, k: Gam[..., i - 1, j - 1, k - 1]
    H = lambda i, j, k: h[..., i - 1, j - 1, k - 1]
    B = lambda i, j, k: b[..., i - 1, j - 1, k - 1]
    return {
        "G11^3=h12^1": G(1, 1, 3) - H(1, 2, 1),
        "G12^3=-h11^1": G(1, 2, 3) + H(1, 1, 1),
        "G21^3=h22^1": G(2, 1, 3) - H(2, 2, 1),
        "G22^3=-h12^1": G(2, 2, 3) + H(1, 2, 1),
        "G31^3=h23^1": G(3, 1, 3) - H(2, 3, 1),
        "G32^3=-h13^1": G(3, 2, 3) + H(1, 3, 1),
        "h11^2=-h12^3": H(1, 1, 2) + H(1, 2, 3),
        "h12^2=h11^3": H(1, 2, 2) - H(1, 1, 3),
        "h13^3=h23^2+1/sqrt3": H(1, 3, 3) - H(2, 3, 2) - _R3,
        "h22^2=h12^3": H(2, 2, 2) - H(1, 2, 3),
        "h22^3=-h11^3": H(2, 2, 3) + H(1, 1, 3),
        "h23^3=-h13^2": H(2, 3, 3) + H(1, 3, 2),
        "b11^2=h13^3+1/sqrt3": B(1, 1, 2) - H(1, 3, 3) - _R3,
        "b11^3=-h13^2": B(1, 1, 3) + H(1, 3, 2),
        "b21^2=-h13^2": B(2, 1, 2) + H(1, 3, 2),
        "b21^3=-h13^3+2/sqrt3": B(2, 1, 3) + H(1, 3, 3) - 2 * _R3,
        "b31^2=h33^3": B(3, 1, 2) - H(3, 3, 3),
        "b31^3=-h33^2": B(3, 1, 3) + H(3, 3, 2),
    }


def normal_relations(Gam, h, b) -> dict:
    G = lambda i, j, k: Gam[..., i - 1, j - 1, k - 1]
    H = lambda i, j, k: h[..., i - 1, j - 1, k - 1]
    B = lambda i, j, k: b[..., i - 1, j - 1, k - 1]
    return {
        "b12^3=G11^2-G32^3": B(1, 2, 3) - G(1, 1, 2) + G(3, 2, 3),
        "b22^3=G21^2+G31^3": B(2, 2, 3) - G(2, 1, 2) - G(3, 1, 3),
        "b32^3=h33^1+G31^2": B(3, 2, 3) - H(3, 3, 1) - G(3, 1, 2),
    }


# --- integrability ---------------------------------------------------------

def _defect_arrays(jet: FrameJet):
    """g([E1, E2], E3) from the Lie bracket of the coefficient fields."""
    c, dc = jet.c, jet.dc
    c1, c2 = c[:, 0], c[:, 1]
    d1 = np.einsum("nm,nml->nl", c1, dc[:, :, 1])  # E1(c2)
    d2 = np.einsum("nm,nml->nl", c2, dc[:, :, 0])  # E2(c1)
    br = d1 - d2
    vec = np.einsum("nl,nli->ni", br, jet.frames.B)
    return g6(vec, jet.frames.E[:, 2])


def integrability_defects(chart, X, gauge_offset=0.0) -> np.ndarray:
    return _defect_arrays(frame_jet(chart, X, gauge_offset=gauge_offset))


def d1_integrability_defect(chart, params, gauge_offset=0.0) -> float:
    """g([E1, E2], E3): zero exactly where D1 is involutive.

    ``gauge_offset`` rotates the D1 pair by a constant angle before the
    bracket is taken; the result does not depend on it.
    """
    x = np.asarray(params, dtype=float)[None]
    return float(integrability_defects(chart, x, gauge_offset)[0])


# --- isometry laws ---------------------------------------------------------

_S = SQRT3 / 2


def lemma4_transform(ang: AngleData, which: str, law: str = "printed") -> AngleData:
    """Angle data of the image under F1 or F2 predicted by the transformation laws.

    ``law="printed"`` uses the F2 rule as usually stated; ``law="corrected"``
    uses the rule recovered by direct recomputation on transformed charts
    (a reflection in both the (a1, a2) and (a3, a4) planes).
    """
    a1, a2, a3, a4 = ang.a
    w1, w2, w3 = ang.omega
    if which == "F1":
        a = (a1, -a2, -a3, a4)
        w = (w1, -w2, -w3)
    elif which == "F2":
        if law == "printed":
            a = (0.5 * a1 - _S * a2, _S * a1 - 0.5 * a2, 0.5 * a3 - _S * a4, _S * a3 + 0.5 * a4)
        elif law == "corrected":
            a = (0.5 * a1 - _S * a2, -_S * a1 - 0.5 * a2, 0.5 * a3 - _S * a4, -_S * a3 - 0.5 * a4)
        else:
            raise ValueError(f"unknown law {law!r}")
        w = (-0.5 * w1 - _S * w2, -_S * w1 + 0.5 * w2, w3)
    else:
        raise ValueError(f"unknown isometry {which!r}")
    return AngleData(ang.theta, tuple(float(v) for v in a), tuple(float(v) for v in w))
