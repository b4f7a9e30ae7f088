"""Singlet bases, Gram matrices, difference-equation matrices, reduction."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from su3chain.basis import (
    GRAM_2,
    GRAM_3,
    SingularParameterError,
    _solve_exact_rational,
    a2_closed_form,
    a3_closed_form,
    a3_printed_zero_pattern,
    a_matrix,
    build_basis,
    reduce_to_physical,
)
from su3chain.tensors import levi_civita

EPS = levi_civita(3)


def _random_points(rng, count, forbidden_radius=0.2):
    pts = []
    while len(pts) < count:
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if min(abs(z), abs(z + 3)) > forbidden_radius:
            pts.append(z)
    return pts


def test_gram_matrices_exact():
    # build_basis recomputes each Gram entry by brute-force contraction and
    # raises on any deviation from the integer matrices; assert equality too
    assert np.array_equal(build_basis(2).gram, GRAM_2)
    assert np.array_equal(build_basis(3).gram, GRAM_3)


def test_gram_matrices_symmetric_integer():
    for gram in (GRAM_2, GRAM_3):
        assert gram.dtype.kind == "i"
        assert np.array_equal(gram, gram.T)
        assert (np.linalg.eigvalsh(gram.astype(float)) > 0).all()


def test_basis_sizes():
    assert len(build_basis(2).elements) == 3
    assert len(build_basis(3).elements) == 11
    with pytest.raises(ValueError):
        build_basis(4)


def test_a2_matches_closed_form_at_random_points():
    rng = np.random.default_rng(21)
    for lam in _random_points(rng, 20):
        computed = a_matrix(2, lam, 0.0)
        assert np.abs(computed - a2_closed_form(lam)).max() < 1e-10


def test_a2_gauge_factor():
    lam = 0.8 - 0.55j
    _, gauge = a_matrix(2, lam, 0.0, return_gauge=True)
    assert abs(gauge - lam * (lam + 3)) < 1e-8


def test_a3_matches_closed_form_at_random_points():
    rng = np.random.default_rng(22)
    xs = _random_points(rng, 20)
    for x in xs:
        y = _random_points(rng, 1)[0]
        while abs(x - y) < 0.2:
            y = _random_points(rng, 1)[0]
        computed = a_matrix(3, x, x - y, 0.0)
        closed = a3_closed_form(x, y)
        assert np.abs(computed - closed).max() < 1e-10


def test_a3_zero_pattern():
    pattern = a3_printed_zero_pattern()
    assert pattern.shape == (11, 11)
    rng = np.random.default_rng(23)
    for _ in range(20):
        x = _random_points(rng, 1)[0]
        y = _random_points(rng, 1)[0]
        while abs(x - y) < 0.2:
            y = _random_points(rng, 1)[0]
        computed = a_matrix(3, x, x - y, 0.0)
        assert np.abs(computed[pattern]).max() < 1e-10
        assert np.abs(a3_closed_form(x, y)[pattern]).max() == 0


def test_a3_gauge_factor():
    x, y = 1.1 + 0.4j, -0.6 + 0.9j
    _, gauge = a_matrix(3, x, x - y, 0.0, return_gauge=True)
    assert abs(gauge - x * (3 + x) * y * (3 + y)) < 1e-6 * abs(gauge)


def test_normalization_row_left_eigenvector():
    row2 = GRAM_2[0].astype(float)
    row3 = GRAM_3[0].astype(float)
    assert np.abs(row2 @ a2_closed_form(0.9 - 0.3j) - row2).max() < 1e-12
    assert np.abs(row3 @ a3_closed_form(1.3 + 0.2j, -0.8 + 0.6j) - row3).max() < 1e-11


def test_singular_parameters_rejected():
    with pytest.raises(SingularParameterError):
        a_matrix(2, 0.0, 0.0)
    with pytest.raises(SingularParameterError):
        a_matrix(3, 0.7, 0.0, 0.0)  # x = y


def test_reduction_matches_wing_contraction():
    """The physical-space images follow from closing the auxiliary wings.

    Site 1 of the reduced operator is produced by contracting the two wing
    legs of each basis element against the Levi-Civita tensor:
    D[(a, r...), (b, s...)] = eps(b, c, d) v[c, d, a, r..., s...].  This
    pins every coefficient of reduce_to_physical independently.
    """
    basis2 = build_basis(2)
    for j, element in enumerate(basis2.elements):
        wing = np.einsum("bcd,cdars->arbs", EPS, element.entries).reshape(9, 9)
        unit = np.zeros(3)
        unit[j] = 1
        assert np.abs(wing - reduce_to_physical(2, unit)).max() < 1e-13
    basis3 = build_basis(3)
    for j, element in enumerate(basis3.elements):
        wing = np.einsum(
            "bcd,cdarxsy->arxbsy", EPS, element.entries
        ).reshape(27, 27)
        unit = np.zeros(11)
        unit[j] = 1
        assert np.abs(wing - reduce_to_physical(3, unit)).max() < 1e-13


def test_reduction_traces_equal_normalization_row():
    # trace of each reduced basis image equals the first Gram row, so any
    # amplitude vector with f_1 = 1 automatically yields a trace-one operator
    for m, gram, dim in ((2, GRAM_2, 3), (3, GRAM_3, 11)):
        for j in range(dim):
            unit = np.zeros(dim)
            unit[j] = 1
            trace = np.trace(reduce_to_physical(m, unit)).real
            assert trace == pytest.approx(float(gram[0, j]), abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**16 - 1))
def test_exact_rational_solver(bits):
    rng = np.random.default_rng(bits)
    w = rng.standard_normal(11) + 1j * rng.standard_normal(11)
    x = _solve_exact_rational(GRAM_3, w)
    assert np.abs(GRAM_3 @ x - w).max() < 1e-12
