"""Semiring carriers, rational parsing and the complex-matrix helpers."""

from fractions import Fraction

import numpy as np
import pytest

from opcheck.errors import SemiringLawError
from opcheck.kernel import (
    BOOLEANS,
    BUILTIN_SEMIRINGS,
    INTEGERS,
    NATURALS,
    RATIONALS01,
    FiniteSemiring,
    choi_positivity,
    is_hermitian,
    matrix_approx_eq,
    min_eigenvalue,
    parse_rational,
    rational_str,
    semiring_complements,
)


def test_parse_rational_roundtrip():
    for text, value in [("1/2", Fraction(1, 2)), ("0", Fraction(0)),
                        ("3", Fraction(3)), ("7/3", Fraction(7, 3))]:
        assert parse_rational(text) == value
        assert parse_rational(rational_str(value)) == value


def test_parse_rational_rejects_floats():
    with pytest.raises(ValueError):
        parse_rational("0.5")


def test_builtin_semiring_registry():
    assert set(BUILTIN_SEMIRINGS) == {"integers", "naturals", "booleans",
                                      "rationals01"}


def test_integer_complements_are_unique():
    for a in range(-3, 4):
        assert semiring_complements(INTEGERS, a) == (1 - a,)


def test_naturals_sub_unit_subset():
    assert semiring_complements(NATURALS, 0) == (1,)
    assert semiring_complements(NATURALS, 1) == (0,)
    assert semiring_complements(NATURALS, 2) == ()


def test_boolean_one_has_two_complements():
    assert set(semiring_complements(BOOLEANS, 1)) == {0, 1}
    assert semiring_complements(BOOLEANS, 0) == (1,)


def test_rationals_grid():
    grid = RATIONALS01.grid_elements(4)
    assert grid == tuple(Fraction(k, 4) for k in range(5))
    assert all(RATIONALS01.in_unit_interval(x) for x in grid)
    assert not RATIONALS01.in_unit_interval(Fraction(5, 4))


def test_finite_semiring_law_validation():
    # a two-element structure where addition is not associative
    with pytest.raises(SemiringLawError):
        FiniteSemiring.from_tables(
            "broken", (0, 1),
            [[0, 1], [1, 0]],  # xor-like, fails distributive/absorption checks
            [[0, 0], [0, 0]],  # multiplication without a unit
            0, 1)


def test_monotone_flags():
    assert RATIONALS01.monotone and NATURALS.monotone
    assert not INTEGERS.monotone


def test_matrix_helpers():
    eye = np.eye(2, dtype=complex)
    assert matrix_approx_eq(eye, eye + 1e-12)
    assert not matrix_approx_eq(eye, 2 * eye)
    assert is_hermitian(eye)
    assert min_eigenvalue(eye) == pytest.approx(1.0)
    assert choi_positivity(eye)
    assert not choi_positivity(-eye)
