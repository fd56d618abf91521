import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcheck.catalog import (
    InvalidInitialNorm,
    ProfileDomainMismatch,
    UnknownChart,
    WrongCoefficientNorm,
    chart_ids,
    chart_theorem42,
    chart_theorem52,
    get_chart,
    integrate_A,
    integrate_AB,
    make_profile,
    transform_chart,
)
from nkcheck.frame import extract_angles, frame_at
from nkcheck.nkcore import F1, F2, SQRT3
from nkcheck.quat import Quaternion, qconj, qmul

S = SQRT3 / 2


def pointwise_equal(c1, c2, n=4, tol=1e-12):
    X = c1.grid(n)
    return np.abs(c1(X) - c2(X)).max() < tol


def test_registry():
    ids = chart_ids()
    assert {"thm42.f1", "thm42.f2.sin", "thm52", "thm52.r5", "cor.f3"} <= set(ids)
    with pytest.raises(UnknownChart):
        get_chart("unknown")


def test_zero_profile_closed_form():
    path = integrate_A(make_profile("zero"), (1.0, 0.0), (0.0, 2 * np.pi), 1e-3)
    assert np.abs(path.a1 - np.cos(S * path.t)).max() < 1e-9
    assert np.abs(path.a2 - np.sin(S * path.t)).max() < 1e-9
    assert path.max_drift < 1e-10


@pytest.mark.parametrize("name", ["zero", "lin", "sin"])
def test_initial_derivative(name):
    f = make_profile(name)
    h = 1e-6
    path = integrate_A(f, (0.0, 1.0), (0.0, 2 * h), h)
    slope = (path.a1[1] - path.a1[0]) / h
    assert abs(slope - (-S * np.exp(-1j * f(0.0)))) < 1e-5


def test_invalid_initial_norm():
    with pytest.raises(InvalidInitialNorm):
        integrate_A(make_profile("zero"), (1.0, 0.5))


@pytest.mark.parametrize("name", ["zero", "lin", "sin"])
def test_joint_system_matches_single_profile(name):
    f = make_profile(name)
    y, resid = integrate_AB(f, (1.0, 0.0, 0.0, 0.0), (0.0, 1.0), 1e-3)
    assert resid < 1e-8
    path = integrate_A(f, (1.0, 0.0), (0.0, 1.0), 1e-3)
    assert np.abs(y[:4] - path.quaternion(1.0)).max() < 1e-9


def test_thm42_points():
    chart = get_chart("thm42.f1")
    pt = chart.eval((0, 0, 0))
    assert pt.p.isclose(Quaternion(1)) and pt.q.isclose(Quaternion(1))
    # p = e^{i(sqrt3 u/2 + v/2)} has period 4 pi in v
    p = lambda v: chart_theorem42("f1", t_domain=(0, 1))((0.0, v, 0.5))[:4]
    assert np.allclose(p(0.3), p(0.3 + 4 * np.pi), atol=1e-12)
    assert not np.allclose(p(0.3), p(0.3 + 2 * np.pi))


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_thm42_unit_factors(seed):
    rng = np.random.default_rng(seed)
    X = get_chart("thm42.f1.sin").sample(rng, 20)
    pq = get_chart("thm42.f1.sin")(X)
    assert np.allclose(np.linalg.norm(pq[:, 4:], axis=-1), 1, atol=1e-12)


def test_profile_domain_mismatch():
    path = integrate_A(make_profile("zero"), (1.0, 0.0), (0.0, 1.0))
    with pytest.raises(ProfileDomainMismatch):
        chart_theorem42("f1", path=path, t_domain=(0.0, 2.0))


def test_thm52_points_and_norms():
    pt = get_chart("thm52").eval((0, 0, 0))
    assert pt.p.isclose(Quaternion(0.5, 0, 0, S))
    assert pt.q.isclose(Quaternion(0.5, 0, 0, -S))
    X = get_chart("thm52.r3").sample(np.random.default_rng(0), 50)
    pq = get_chart("thm52.r3")(X)
    assert np.allclose(np.linalg.norm(pq.reshape(-1, 2, 4), axis=-1), 1, atol=1e-12)
    with pytest.raises(WrongCoefficientNorm):
        chart_theorem52(A=Quaternion(1.0))


def test_cor_points():
    C = Quaternion(S, 0.5, 0, 0)
    f1 = get_chart("cor.f1").eval((0, 0, 0))
    assert f1.p.isclose(C) and f1.q.isclose(Quaternion(1))
    f3 = get_chart("cor.f3").eval((0, 0, 0))
    assert f3.p.isclose(Quaternion(1)) and f3.q.isclose(C)


def test_F1_twice_is_identity():
    chart = get_chart("thm52")
    assert pointwise_equal(transform_chart(transform_chart(chart, F1), F1), chart)


def test_F1_maps_f1_to_f2():
    assert pointwise_equal(transform_chart(get_chart("thm42.f1"), F1), get_chart("thm42.f2"))
    assert pointwise_equal(transform_chart(get_chart("thm42.f1.sin"), F1), get_chart("thm42.f2.sin"))


def test_third_families_by_composition():
    f3 = transform_chart(transform_chart(transform_chart(get_chart("thm42.f1"), F1), F2), F1)
    assert pointwise_equal(f3, get_chart("thm42.f3"))
    # F1 first, then F2: (p, q) -> (q, p) -> (q bar, p q bar)
    cor = transform_chart(transform_chart(get_chart("cor.f1"), F1), F2)
    assert pointwise_equal(cor, get_chart("cor.f3"))
    X = get_chart("cor.f1").grid(3)
    pq = get_chart("cor.f1")(X)
    p, q = pq[:, :4], pq[:, 4:]
    assert np.abs(cor(X) - np.concatenate([qconj(q), qmul(p, qconj(q))], axis=-1)).max() < 1e-12


def test_transported_orientation_gives_branch_mod_pi():
    # the image carries the orientation transported from cor.f1; that picks t = pi,
    # the same line as t = 0 recorded for cor.f3
    cor = transform_chart(transform_chart(get_chart("cor.f1"), F1), F2)
    ang = extract_angles(frame_at(cor, (0.1, -0.2, 0.3)))
    assert np.allclose(ang.a[2:], (-1, 0), atol=1e-5)
    ang3 = extract_angles(frame_at(get_chart("cor.f3"), (0.1, -0.2, 0.3)))
    assert np.allclose(ang3.a[2:], (1, 0), atol=1e-5)


@pytest.mark.parametrize("cid", ["cor.f1", "cor.f2", "cor.f3"])
@pytest.mark.parametrize("iso", [F1, F2], ids=["F1", "F2"])
def test_transformed_expectation_matches_recomputation(cid, iso):
    chart = transform_chart(get_chart(cid), iso)
    ang = extract_angles(frame_at(chart, (0.1, -0.2, 0.3)))
    assert np.allclose(ang.a[2:], chart.expected.a34, atol=1e-5)


@pytest.mark.parametrize("iso", [F1, F2], ids=["F1", "F2"])
def test_transformed_omega_matches_recomputation(iso):
    chart = transform_chart(get_chart("thm42.f1"), iso)
    ang = extract_angles(frame_at(chart, (0.1, -0.2, 0.7)))
    assert np.allclose(ang.omega, chart.expected.omega, atol=1e-5)
