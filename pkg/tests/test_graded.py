from math import comb

import numpy as np
import pytest

from truncsmt.exceptions import ArityError, GeneralPositionError
from truncsmt.services.graded import (
    general_position_witness,
    hilbert_quotient,
    ideal_graded_dim,
    is_general_position,
    is_zero_dimensional,
    macaulay_degree,
    nss_certificate,
    nss_constant,
    require_general_position,
)
from truncsmt.services.linalg import independent_columns, rank, solve
from truncsmt.services.polynomials import HomogeneousPoly, gaussian, gaussian_to_complex

from .helpers import coordinate_powers, form


# --- exact linear algebra ---
def test_independent_columns_is_greedy():
    one, two = gaussian(1), gaussian(2)
    columns = [{0: one}, {0: two}, {1: one}, {0: one, 1: one}, {2: gaussian(0, 1)}]
    assert independent_columns(columns, 3) == [0, 2, 4]
    assert rank(columns, 3) == 3


def test_solve_and_inconsistent_system():
    half = gaussian(1) / gaussian(2)
    columns = [{0: gaussian(1), 1: gaussian(1)}, {0: gaussian(1), 1: gaussian(-1)}]
    assert solve(columns, {0: gaussian(1)}, 2) == [half, half]
    assert solve([{0: gaussian(1)}], {1: gaussian(1)}, 2) is None


# --- Hilbert functions ---
def test_ideal_graded_dim_of_two_squares():
    gammas = coordinate_powers(2, 2)
    assert ideal_graded_dim(gammas, 4) == 11


def test_ideal_graded_dim_of_a_line():
    assert ideal_graded_dim([form("x1", 2)], 2) == 2


def test_ideal_graded_dim_below_all_degrees():
    assert ideal_graded_dim([form("x1^3", 3), form("x2^3", 3)], 2) == 0


@pytest.mark.parametrize("alpha, expected", [(4, 4), (5, 4), (6, 4)])
def test_hilbert_quotient_stabilises_at_product_of_degrees(alpha, expected):
    assert hilbert_quotient(coordinate_powers(2, 2), alpha) == expected


def test_hilbert_quotient_single_point_on_p1():
    assert hilbert_quotient([form("x1", 2)], 3) == 1


@pytest.mark.parametrize("alpha", range(0, 8))
def test_hilbert_quotient_and_ideal_dim_add_up(alpha):
    gammas = [form("x1^2 - x0*x2", 3), form("x2^2 + x0*x1", 3)]
    assert hilbert_quotient(gammas, alpha) + ideal_graded_dim(gammas, alpha) == comb(alpha + 2, 2)


def test_zero_dimensional_examples():
    assert is_zero_dimensional([form("x1", 3), form("x2", 3)])
    assert is_zero_dimensional(coordinate_powers(2, 2))
    assert not is_zero_dimensional([form("x1", 3), form("x1^2 + x1*x2", 3)])


def test_zero_dimensional_needs_n_forms():
    with pytest.raises(ArityError):
        is_zero_dimensional([form("x1", 3)])


# --- general position ---
def test_general_position_examples():
    assert is_general_position([form("x0", 3), form("x1", 3), form("x2", 3)], 2)
    assert not is_general_position([form("x0", 3), form("x1", 3), form("x0 + x1", 3)], 2)
    assert is_general_position([form(t, 3) for t in ("x0", "x1", "x2", "x0 + x1 + x2")], 2)


def test_general_position_witness_point():
    subset, point = general_position_witness([form("x0", 3), form("x1", 3), form("x0 + x1", 3)], 2)
    assert subset == (0, 1, 2)
    assert point == ("0", "0", "1")


def test_general_position_is_permutation_and_scaling_invariant():
    texts = ["x0^2 + x1^2", "x1^2 - x2^2", "x0*x1 + x2^2", "x0^2 - 2*x1*x2"]
    forms = [form(t, 3) for t in texts]
    expected = is_general_position(forms, 2)
    assert is_general_position(list(reversed(forms)), 2) == expected
    assert is_general_position([forms[0] * 3, forms[1] * gaussian(0, 1), forms[2], forms[3]], 2) == expected


def test_general_position_needs_more_than_n_forms():
    with pytest.raises(ArityError):
        is_general_position([form("x0", 3), form("x1", 3)], 2)


def test_require_general_position_raises_with_subset():
    forms = [form(t, 3) for t in ("x0", "x1", "x0 + x1", "x2")]
    with pytest.raises(GeneralPositionError) as info:
        require_general_position(forms, 2)
    assert info.value.subset == (0, 1, 2)


def test_general_position_is_independent_of_threads():
    forms = [form(t, 3) for t in ("x0", "x1", "x2", "x0 + x1 + x2", "x0 - x2")]
    assert general_position_witness(forms, 2, threads=1) == general_position_witness(forms, 2, threads=4)


def test_macaulay_degree():
    assert macaulay_degree([form("x1^2", 3), form("x2^2", 3), form("x0^2", 3)]) == 4


# --- Nullstellensatz certificates ---
def test_nss_certificate_for_two_lines():
    certificate = nss_certificate([form("x0 + x1", 2), form("x0 - x1", 2)], 0)
    half = gaussian(1) / gaussian(2)
    assert certificate.exponent == 1
    assert [b.coefficient((0, 0)) for b in certificate.cofactors] == [half, half]
    assert certificate.verify()


def test_nss_certificate_for_coordinates():
    certificate = nss_certificate([form("x0", 3), form("x1", 3), form("x2", 3)], 2)
    assert certificate.exponent == 1
    assert [b.coefficient((0, 0, 0)) for b in certificate.cofactors] == [gaussian(0), gaussian(0), gaussian(1)]


def test_nss_certificate_needs_degree_four():
    Qs = [form("x1^2", 3), form("x2^2", 3), form("x0^2 + x1*x2", 3)]
    certificate = nss_certificate(Qs, 0)
    assert certificate.exponent == 4
    assert all(b.degree == 2 for b in certificate.cofactors)
    assert certificate.expand() == HomogeneousPoly.monomial((4, 0, 0))


def test_hand_certificate_expands():
    Qs = [form("x1^2", 3), form("x2^2", 3), form("x0^2 + x1*x2", 3)]
    b = [form("x2^2", 3), HomogeneousPoly.zero(3, 2), form("x0^2 - x1*x2", 3)]
    total = b[0] * Qs[0] + b[1] * Qs[1] + b[2] * Qs[2]
    assert total == HomogeneousPoly.monomial((4, 0, 0))


def test_nss_certificate_fails_without_general_position():
    with pytest.raises(GeneralPositionError):
        nss_certificate([form("x0", 3), form("x1", 3), form("x0 + x1", 3)], 2)


def test_nss_constant_for_two_lines():
    assert nss_constant([form("x0 + x1", 2), form("x0 - x1", 2)]) == pytest.approx(1.0)
    # x0 = 5 (x0 - 4 x1) - 4 (x0 - 5 x1)
    assert nss_constant([form("x0 - 4*x1", 2), form("x0 - 5*x1", 2)]) == pytest.approx(9.0)


@pytest.mark.parametrize(
    "texts",
    [
        ["x0 - 4*x1", "x0 - 5*x1"],
        ["x0", "x1", "x2 + i*x0"],
        ["x1^2", "x2^2", "x0^2 + x1*x2"],
    ],
)
def test_nss_constant_bounds_the_norm(texts):
    nvars = len(texts)
    Qs = [form(t, nvars) for t in texts]
    c = nss_constant(Qs)
    d = Qs[0].degree
    rng = np.random.default_rng(3)
    points = rng.normal(size=(200, nvars)) + 1j * rng.normal(size=(200, nvars))
    for x in points:
        values = [abs(sum(gaussian_to_complex(coeff) * np.prod(x ** np.array(m)) for m, coeff in Q.terms.items())) for Q in Qs]
        assert np.max(np.abs(x)) ** d <= c * max(values) * (1 + 1e-9)
