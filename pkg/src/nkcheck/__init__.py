"""Numerical verification toolkit for the homogeneous nearly Kaehler S^3 x S^3
and its three-dimensional CR submanifolds."""

from .catalog import (
    ImmersionChart,
    ProfilePath,
    chart_corollary,
    chart_ids,
    chart_theorem42,
    chart_theorem52,
    get_chart,
    integrate_A,
    transform_chart,
)
from .frame import (
    AngleData,
    CoefficientTable,
    FrameSample,
    PClass,
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
from .nkcore import (
    F1,
    F2,
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
    product_projections,
    tensor_G,
)
from .quat import ImaginaryQuaternion, Quaternion
from .report import CheckReport, RunConfig, emit_report
from .suites import run_all, run_chart_suite, run_identity_suite, run_laws_suite, run_ode_suite

__version__ = "0.1.0"
