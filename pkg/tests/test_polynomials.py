from math import comb

import numpy as np
import pytest
from sympy import QQ

from truncsmt.exceptions import ArityError, DegreeMismatchError
from truncsmt.services.polynomials import (
    HomogeneousPoly,
    common_degree,
    gaussian,
    monomial_basis,
    poly_arith,
    product,
)

from .helpers import form


# --- monomial basis ---
def test_monomial_basis_two_variables_degree_one():
    assert monomial_basis(2, 1) == ((1, 0), (0, 1))


def test_monomial_basis_three_variables_degree_four():
    basis = monomial_basis(3, 4)
    assert len(basis) == 15
    assert basis[0] == (4, 0, 0)
    assert basis[-1] == (0, 0, 4)


@pytest.mark.parametrize("nvars", range(1, 7))
@pytest.mark.parametrize("deg", [0, 1, 2, 5, 12])
def test_monomial_basis_counts_and_degrees(nvars, deg):
    basis = monomial_basis(nvars, deg)
    assert len(basis) == comb(deg + nvars - 1, nvars - 1)
    assert len(set(basis)) == len(basis)
    assert all(sum(m) == deg and len(m) == nvars for m in basis)


def test_monomial_basis_rejects_bad_arguments():
    with pytest.raises(ArityError):
        monomial_basis(0, 2)
    with pytest.raises(ArityError):
        monomial_basis(2, -1)


# --- arithmetic ---
def test_mul_of_variables():
    x0 = HomogeneousPoly.variable(2, 0)
    x1 = HomogeneousPoly.variable(2, 1)
    result = poly_arith(x0, x1, "mul")
    assert result == HomogeneousPoly.monomial((1, 1))
    assert result.degree == 2


def test_mul_of_squares():
    P = form("x1^2", 3)
    Q = form("x2^2", 3)
    result = poly_arith(P, Q, "mul")
    assert result == HomogeneousPoly.monomial((0, 2, 2))
    assert result.degree == 4


def test_add_cancels():
    result = poly_arith(form("x0 + x1", 2), form("x0 - x1", 2), "add")
    assert result == HomogeneousPoly.monomial((1, 0), 2)


def test_add_rejects_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        poly_arith(form("x0", 2), form("x0^2", 2), "add")


def test_mixing_variable_counts_fails():
    with pytest.raises(ArityError):
        form("x0", 2) * form("x0", 3)


def random_form(rng, nvars: int, degree: int) -> HomogeneousPoly:
    terms = {
        m: gaussian(QQ(int(rng.integers(-9, 10)), int(rng.integers(1, 4))), int(rng.integers(-9, 10)))
        for m in monomial_basis(nvars, degree)
    }
    return HomogeneousPoly.from_terms(nvars, terms, degree=degree)


@pytest.mark.parametrize("seed", range(8))
def test_mul_is_commutative_associative_and_degree_additive(seed):
    rng = np.random.default_rng(seed)
    nvars = int(rng.integers(1, 5))
    P, Q, R = (random_form(rng, nvars, int(rng.integers(0, 4))) for _ in range(3))
    assert P * Q == Q * P
    assert (P * Q) * R == P * (Q * R)
    assert (P * Q * R).degree == P.degree + Q.degree + R.degree


def test_zero_coefficients_are_not_stored():
    P = form("x0*x1 - x0*x1 + x1^2", 2)
    assert P.terms == {(0, 2): gaussian(1)}


def test_evaluate_exact():
    P = form("x0^2 + i*x0*x1", 2)
    assert P.evaluate([1, 2]) == gaussian(1, 2)


def test_coefficient_vector_follows_monomial_basis():
    P = form("2*x0 - x1", 2)
    assert P.coefficient_vector() == (gaussian(2), gaussian(-1))


def test_product_and_common_degree():
    forms = [form("x0", 2), form("x1", 2), form("x0 - x1", 2)]
    assert product(forms, 2) == form("x0^2*x1 - x0*x1^2", 2)
    assert common_degree(forms) == 1
    with pytest.raises(DegreeMismatchError):
        common_degree([form("x0", 2), form("x0^2", 2)])


def test_zero_form_keeps_its_degree():
    zero = HomogeneousPoly.zero(3, 4)
    assert zero.is_zero()
    assert zero.degree == 4
    assert zero.to_text() == "0"
