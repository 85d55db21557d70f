"""Shared fixtures.

The expensive objects (uniqueness pipeline, 256-point scheme, parameter-only
triple report) are built once per session; everything downstream reads them.
"""

import time
from types import SimpleNamespace

import pytest

from rouxschemes import (
    build_roux_matrix,
    bundled_examples,
    eigen_compute,
    find_labelings,
    group_from_spec,
    group_scheme,
    krein_params,
    lift_scheme,
    roux_eigen_closed,
    run_pipeline,
    tensor_from_eigen,
    triple_report,
    valencies,
    validate_scheme,
)


@pytest.fixture(scope="session")
def corpus():
    return bundled_examples()


@pytest.fixture(scope="session")
def sl23(corpus):
    return corpus["sl23_8"]


@pytest.fixture(scope="session")
def f9(corpus):
    return corpus["f9_cyc4"]


@pytest.fixture(scope="session")
def hex63(corpus):
    return corpus["hex_fission_63"]


@pytest.fixture(scope="session")
def z3_scheme():
    return group_scheme(group_from_spec("Z3"))


@pytest.fixture(scope="session")
def pipeline():
    """Full uniqueness pipeline with its wall-clock time attached."""
    t0 = time.monotonic()
    report = run_pipeline()
    return SimpleNamespace(report=report, seconds=time.monotonic() - t0)


def hoggar_labeling(y, group):
    """The Z4 labeling whose roux parameters are (24, 16, 6, 16)."""
    kvec = valencies(validate_scheme(y).tensor)
    for lab in find_labelings(y, group):
        if [kvec[lab[g]] for g in group.elements] == [24, 16, 6, 16]:
            return lab
    raise AssertionError("target labeling not found")


@pytest.fixture(scope="session")
def hoggar_roux(hex63):
    z4 = group_from_spec("Z4")
    return build_roux_matrix(hex63, z4, hoggar_labeling(hex63, z4))


@pytest.fixture(scope="session")
def x256(hoggar_roux):
    return lift_scheme(hoggar_roux)


@pytest.fixture(scope="session")
def eigen256(x256):
    return eigen_compute(x256)


@pytest.fixture(scope="session")
def params256():
    """Parameter-only data for the 256-point scheme: no vertex set involved."""
    z4 = group_from_spec("Z4")
    spectrum = roux_eigen_closed(
        z4, {g: c for g, c in zip(z4.elements, (24, 16, 6, 16))}, 63
    )
    eigen = spectrum.eigen
    tensor = tensor_from_eigen(eigen)
    return SimpleNamespace(eigen=eigen, tensor=tensor, krein=krein_params(eigen))


@pytest.fixture(scope="session")
def triple256(params256):
    return triple_report(
        params256.eigen, params256.tensor, params256.krein, threads=4
    )


@pytest.fixture(scope="session")
def l40(f9):
    g = group_from_spec("Z2xZ2")
    return lift_scheme(build_roux_matrix(f9, g, find_labelings(f9, g)[0]))
