import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcheck.catalog import get_chart, probe_chart
from nkcheck.frame import (
    AngleData,
    DegenerateDirection,
    DomainBoundary,
    FrameNotOrthonormal,
    FrameSample,
    GaugeDegenerate,
    NotProperCR,
    PKind,
    build_frame,
    classify,
    coefficients,
    cr_split,
    d1_integrability_defect,
    extract_angles,
    frame_at,
    lemma4_transform,
    numeric_pushforward,
)
from nkcheck.nkcore import ORIGIN, SQRT3, TangentVector, apply_J, metric_g, tensor_G

PT = (0.1, -0.2, 0.3)
PT42 = (0.1, -0.2, 0.7)


def test_pushforward_example():
    Z = numeric_pushforward(get_chart("thm42.f1"), (0, 0, 0), (0, 1, 0))
    assert np.allclose(Z.alpha.to_array(), [0.5, 0, 0], atol=1e-10)


def test_pushforward_rejects_zero_direction():
    with pytest.raises(DegenerateDirection):
        numeric_pushforward(get_chart("thm52"), PT, (0, 0, 0))


def test_pushforward_domain_boundary():
    with pytest.raises(DomainBoundary):
        numeric_pushforward(get_chart("thm52"), (1.0, 0, 0), (1, 0, 0))


def test_pushforward_fourth_order():
    # f1 with the zero profile: d/du has coordinates (sqrt3/2 i, sqrt3/2 i) everywhere
    chart = get_chart("thm42.f1")
    exact = np.r_[SQRT3 / 2, 0, 0, SQRT3 / 2, 0, 0]
    errs = [np.abs(numeric_pushforward(chart, PT42, (1, 0, 0), h).coords - exact).max()
            for h in (4e-2, 2e-2)]
    assert errs[1] < 1e-7
    assert errs[0] / errs[1] > 10  # fourth order gives a ratio near 16


def test_totally_real_plane():
    basis = [TangentVector.from_coords(ORIGIN, np.r_[e, 0, 0, 0]) for e in np.eye(3)]
    with pytest.raises(NotProperCR):
        cr_split(basis)


def test_cr_split_on_chart():
    chart = get_chart("cor.f2")
    basis = [numeric_pushforward(chart, PT, d) for d in np.eye(3)]
    (e1, e2), e3 = cr_split(basis)
    assert np.abs((apply_J(e1) - e2).coords).max() < 1e-12
    assert abs(metric_g(e1, e3)) < 1e-10 and abs(metric_g(e2, e3)) < 1e-10
    assert abs(metric_g(apply_J(e3), e3)) < 1e-12


@pytest.mark.parametrize("cid", ["thm42.f1", "thm42.f3.sin", "thm52", "cor.f1", "cor.f3"])
def test_frame_is_adapted(cid):
    x = PT42 if cid.startswith("thm42") else PT
    fr = frame_at(get_chart(cid), x)
    assert np.abs(fr.gram() - np.eye(6)).max() < 1e-10
    E = fr.E
    assert np.abs((E[5] + apply_J(E[4])).coords).max() < 1e-12
    assert np.abs((tensor_G(E[0], E[2]) - E[4] * (1 / SQRT3)).coords).max() < 1e-10
    assert np.abs(tensor_G(E[0], E[1]).coords).max() < 1e-10
    assert np.abs(tensor_G(E[2], E[3]).coords).max() < 1e-10


def test_angles_thm52():
    ang = extract_angles(frame_at(get_chart("thm52"), PT))
    assert abs(ang.theta - np.pi / 2) < 1e-6
    assert np.allclose(ang.a, (1, 0, 0, 0), atol=1e-5)
    assert ang.p_matrix_residual < 1e-6
    assert classify(ang).kind is PKind.D1_PERP_SUBCASE_D2


def test_angles_cor_f1():
    ang = extract_angles(frame_at(get_chart("cor.f1"), PT))
    assert abs(ang.theta - np.pi / 2) < 1e-6
    assert np.allclose(ang.a, (0, 0, 0.5, SQRT3 / 2), atol=1e-5)
    assert classify(ang).kind is PKind.D1_PERP_SUBCASE_D3


def test_angles_thm42_f1():
    ang = extract_angles(frame_at(get_chart("thm42.f1"), PT42))
    assert ang.theta < 1e-6
    assert np.allclose(ang.omega, (-0.5, SQRT3 / 2, 0), atol=1e-5)
    assert classify(ang).kind is PKind.D1_EQUALS_D1


def test_extract_angles_needs_orthonormal_frame():
    fr = frame_at(get_chart("thm52"), PT)
    bad = FrameSample(fr.base, (fr.E[0] * 1.01,) + fr.E[1:], fr.gauge)
    with pytest.raises(FrameNotOrthonormal):
        extract_angles(bad)


def test_gauge_degenerate_flag_and_strict():
    chart = get_chart("cor.f1")
    assert frame_at(chart, PT).gauge.degenerate
    with pytest.raises(GaugeDegenerate):
        frame_at(chart, PT, strict=True)


def test_classify_cases():
    mk = lambda th, a: classify(AngleData(th, a, (0, 0, 0)))
    assert mk(0.0, (0, 0, 0, 0)).kind is PKind.D1_EQUALS_D1
    assert mk(np.pi / 2, (1, 0, 0, 0)).kind is PKind.D1_PERP_SUBCASE_D2
    assert mk(np.pi / 2, (0, 0, 0, 1)).kind is PKind.D1_PERP_SUBCASE_D3
    assert mk(np.pi / 2, (0.6, 0, 0.8, 0)).kind is PKind.D1_PERP_MIXED
    assert mk(0.7, (1, 0, 0, 0)).kind is PKind.GENERIC


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 2 * np.pi))
def test_gauge_fixed_frame_is_rotation_invariant(seed, phi):
    chart = probe_chart(np.random.default_rng(seed))
    basis = [numeric_pushforward(chart, (0, 0, 0), d) for d in np.eye(3)]
    (e1, e2), e3 = cr_split(basis)
    ref = build_frame((e1, e2), e3)
    rot = e1 * np.cos(phi) + e2 * np.sin(phi)
    out = build_frame((rot, apply_J(rot)), e3)
    assert not ref.gauge.degenerate
    assert np.abs(out.coords - ref.coords).max() < 1e-8


def test_thm52_coefficients():
    t = coefficients(get_chart("thm52"), PT)
    assert abs(t.h[0, 0, 2] + 1 / SQRT3) < 1e-5
    assert abs(t.h[1, 2, 1] + 1 / (2 * SQRT3)) < 1e-5
    assert abs(t.structure()["h13^3=h23^2+1/sqrt3"]) < 1e-5


def test_cor_f1_trace_and_relations():
    t = coefficients(get_chart("cor.f1"), PT)
    assert abs(abs(t.h[0, 0, 0] + t.h[1, 1, 0]) - 2 / SQRT3) < 1e-5
    assert t.symmetry_residual() < 1e-5
    for name, r in {**t.structure(), **t.normal()}.items():
        assert abs(r) < 1e-5, name


def test_integrability_defects():
    assert abs(d1_integrability_defect(get_chart("thm42.f1"), PT42)) < 1e-5
    assert abs(d1_integrability_defect(get_chart("thm52"), PT)) < 1e-5
    d = d1_integrability_defect(get_chart("cor.f1"), PT)
    assert abs(abs(d) - 2 / SQRT3) < 1e-5
    # gauge invariance
    assert abs(d1_integrability_defect(get_chart("cor.f1"), PT, gauge_offset=1.1) - d) < 1e-7


def test_transformation_law_examples():
    base = AngleData(np.pi / 2, (1.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0))
    assert np.allclose(lemma4_transform(base, "F1").a, (1, 0, 0, 0))
    assert np.allclose(lemma4_transform(AngleData(np.pi / 2, (0, 1, 0, 0), (0, 0, 0)), "F1").a, (0, -1, 0, 0))
    assert np.allclose(lemma4_transform(base, "F2").a, (0.5, SQRT3 / 2, 0, 0))
    assert np.allclose(lemma4_transform(base, "F2", law="corrected").a, (0.5, -SQRT3 / 2, 0, 0))


@given(st.floats(-np.pi, np.pi), st.floats(-np.pi, np.pi))
def test_corrected_F2_law_is_isometric(s, t):
    a = (np.cos(s) * 0.6, np.sin(s) * 0.6, np.cos(t) * 0.8, np.sin(t) * 0.8)
    out = lemma4_transform(AngleData(1.0, a, (0, 0, 0)), "F2", law="corrected").a
    assert abs(out[0] ** 2 + out[1] ** 2 - 0.36) < 1e-12
    assert abs(out[2] ** 2 + out[3] ** 2 - 0.64) < 1e-12
    twice = lemma4_transform(AngleData(1.0, out, (0, 0, 0)), "F2", law="corrected").a
    assert np.allclose(twice, a, atol=1e-12)
