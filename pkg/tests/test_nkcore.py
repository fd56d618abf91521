import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcheck.nkcore import (
    F1, F2, ORIGIN, SQRT3,
    BasePointMismatch,
    NonUnitParameter,
    NotOnManifold,
    SurfacePoint,
    TangentVector,
    apply_J,
    apply_P,
    apply_Q,
    curvature_R,
    euclid_inner,
    euclid_to_nk,
    isometry_F1,
    isometry_F2,
    isometry_Fabc,
    metric_g,
    metric_g_from_definition,
    nabla_J_fd,
    product_projections,
    random_linear_field,
    random_point,
    random_tangent,
    tensor_G,
)
from nkcheck.quat import Quaternion

seeds = st.integers(0, 2**32 - 1)


def tv(alpha, beta, base=ORIGIN):
    return TangentVector.from_coords(base, np.r_[alpha, beta])


i, j, k, o = np.eye(3)[0], np.eye(3)[1], np.eye(3)[2], np.zeros(3)


def close(Z, alpha, beta, tol=1e-12):
    return np.allclose(Z.coords, np.r_[alpha, beta], atol=tol)


def test_J_examples():
    assert close(apply_J(tv(i, o)), -i / SQRT3, -2 * i / SQRT3)
    assert close(apply_J(tv(i, i)), i / SQRT3, -i / SQRT3)
    Z = tv(j, k, random_point(np.random.default_rng(1)))
    assert close(apply_J(apply_J(Z)), -j, -k)


def test_P_examples():
    assert close(apply_P(tv(i, j)), j, i)
    Z = tv(i, o)
    assert close(apply_P(apply_J(Z)), -2 * i / SQRT3, -i / SQRT3)
    assert close(apply_J(apply_P(Z)), 2 * i / SQRT3, i / SQRT3)


def test_Q_examples():
    assert close(apply_Q(tv(i, j)), -i, j)
    Z = tv(i, o)
    # both sides of QJ Z = (Z - 2PZ)/sqrt3 equal (i/sqrt3, -2i/sqrt3)
    assert close(apply_Q(apply_J(Z)), i / SQRT3, -2 * i / SQRT3)
    assert close((Z - apply_P(Z) * 2) * (1 / SQRT3), i / SQRT3, -2 * i / SQRT3)


def test_metric_examples():
    assert np.isclose(metric_g(tv(i, o), tv(i, o)), 4 / 3, atol=1e-15)
    assert np.isclose(metric_g(tv(i, -i), tv(i, -i)), 4.0, atol=1e-15)
    Z = tv(i, o)
    assert np.isclose(metric_g(Z, apply_P(Z)), -2 / 3)
    assert np.isclose(euclid_inner(Z, Z), 1.0)
    assert np.isclose(euclid_inner(Z, apply_P(Z)), 0.0)
    assert np.isclose(metric_g(Z, Z) + 0.5 * metric_g(Z, apply_P(Z)), 1.0)
    assert euclid_inner(tv(j, k), tv(k, j)) == 0.0


def test_metric_base_mismatch():
    other = random_point(np.random.default_rng(3))
    with pytest.raises(BasePointMismatch):
        metric_g(tv(i, o), tv(i, o, other))


def test_not_on_manifold():
    with pytest.raises(NotOnManifold):
        SurfacePoint(Quaternion(1, 1, 0, 0), Quaternion(1))


def test_G_examples():
    X, Y = tv(i, o), tv(o, j)
    assert close(tensor_G(X, Y), 2 / (3 * SQRT3) * k, -2 / (3 * SQRT3) * k)
    Z = random_tangent(np.random.default_rng(4), ORIGIN)
    assert np.abs(tensor_G(Z, Z).coords).max() < 1e-15
    assert np.abs(tensor_G(Z, apply_J(Z)).coords).max() < 1e-14


def test_curvature_spot_value():
    X, Y = tv(i, o), tv(j, o)
    assert close(curvature_R(X, Y, Y), i, o, tol=1e-12)
    assert np.abs(curvature_R(X, X, Y).coords).max() < 1e-15


def test_euclid_to_nk_examples():
    rng = np.random.default_rng(5)
    val = random_tangent(rng, ORIGIN)
    X = tv(i, i)  # PX = X
    assert close(euclid_to_nk(val, X, X), val.alpha.to_array(), val.beta.to_array(), tol=1e-15)
    assert close(euclid_to_nk(val, tv(i, o), tv(o, i)), val.alpha.to_array(), val.beta.to_array(), tol=1e-15)


def test_projections():
    U, V = product_projections(tv(i, j))
    assert np.allclose(U.to_array(), [0, 1, 0, 0, 0, 0, 0, 0])
    assert np.allclose(V.to_array(), [0, 0, 0, 0, 0, 0, 1, 0])
    U, V = product_projections(tv(o, k))
    assert np.allclose(U.to_array(), 0)
    assert np.allclose(V.to_array(), [0, 0, 0, 0, 0, 0, 0, 1])


def test_isometry_examples():
    ident = isometry_Fabc(Quaternion(1), Quaternion(1), Quaternion(1))
    pt = random_point(np.random.default_rng(6))
    assert ident.point(pt).distance(pt) < 1e-15
    with pytest.raises(NonUnitParameter):
        isometry_Fabc(Quaternion(2), Quaternion(1), Quaternion(1))
    out = isometry_F2(SurfacePoint(Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0)))
    assert out.distance(SurfacePoint(Quaternion(0, -1, 0, 0), Quaternion(0, 0, 0, 1))) < 1e-15
    assert isometry_F1(isometry_F1(pt)).distance(pt) < 1e-15


@settings(max_examples=50)
@given(seeds)
def test_structure_identities(seed):
    rng = np.random.default_rng(seed)
    base = random_point(rng)
    X, Y, Z, W = (random_tangent(rng, base) for _ in range(4))
    assert abs(metric_g(X, Y) - metric_g_from_definition(X, Y)) < 1e-12
    assert abs(metric_g(apply_J(X), apply_J(Y)) - metric_g(X, Y)) < 1e-12
    assert np.abs((tensor_G(X, Y) + tensor_G(Y, X)).coords).max() < 1e-12
    assert np.abs((tensor_G(X, apply_J(Y)) + apply_J(tensor_G(X, Y))).coords).max() < 1e-12
    assert abs(metric_g(tensor_G(X, Y), Z) + metric_g(Y, tensor_G(X, Z))) < 1e-12
    PG = apply_P(tensor_G(X, Y)) + tensor_G(apply_P(X), apply_P(Y))
    assert np.abs(PG.coords).max() < 1e-12
    assert np.abs((apply_P(apply_J(X)) + apply_J(apply_P(X))).coords).max() < 1e-12
    R = curvature_R
    bianchi = R(X, Y, Z) + R(Y, Z, X) + R(Z, X, Y)
    assert np.abs(bianchi.coords).max() < 1e-12
    assert abs(metric_g(R(X, Y, Z), W) + metric_g(R(X, Y, W), Z)) < 1e-12
    assert X.tangency_residual() < 1e-12


@settings(max_examples=30)
@given(seeds)
def test_isometries_preserve_structure(seed):
    rng = np.random.default_rng(seed)
    base = random_point(rng)
    X, Y = random_tangent(rng, base), random_tangent(rng, base)
    a, b, c = (Quaternion.from_array(v / np.linalg.norm(v)) for v in rng.normal(size=(3, 4)))
    for iso in (isometry_Fabc(a, b, c), F1, F2):
        dX, dY = iso.push(X), iso.push(Y)
        assert abs(metric_g(dX, dY) - metric_g(X, Y)) < 1e-12
        sign = 1 if iso.holomorphic else -1
        assert np.abs((apply_J(dX) - sign * iso.push(apply_J(X))).coords).max() < 1e-12
    # P o dF2 = dF2 o (-P/2 + sqrt3/2 JP)
    lhs = apply_P(F2.push(X))
    rhs = F2.push(apply_P(X) * -0.5 + apply_J(apply_P(X)) * (SQRT3 / 2))
    assert np.abs((lhs - rhs).coords).max() < 1e-12


def test_nearly_kaehler_by_finite_differences():
    rng = np.random.default_rng(11)
    for _ in range(5):
        base = random_point(rng)
        X = random_tangent(rng, base)
        field = random_linear_field(rng)
        Y = TangentVector.from_coords(base, field(base.to_array()))
        assert np.abs((nabla_J_fd(field, X) - tensor_G(X, Y)).coords).max() < 1e-6
        # extension of X with constant coordinates gives (nabla_X J) X = 0
        const = X.coords
        assert np.abs(nabla_J_fd(lambda pt: const, X).coords).max() < 1e-6


def test_quartic_identity_sign_of_third_term():
    from nkcheck.nkcore import G6, J6, g6, quartic_rhs6

    rng = np.random.default_rng(21)
    x, y, z, w = rng.normal(size=(4, 200, 6))
    lhs = g6(G6(x, y), G6(z, w))
    assert np.abs(lhs - quartic_rhs6(x, y, z, w)).max() < 1e-12
    # with g(JX,Z)g(JY,W) as the third term the identity fails on random inputs
    alt = (g6(x, z) * g6(y, w) - g6(x, w) * g6(y, z)
           + g6(J6(x), z) * g6(J6(y), w) - g6(J6(x), w) * g6(J6(z), y)) / 3
    assert np.abs(lhs - alt).max() > 1e-2
