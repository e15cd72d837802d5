from math import comb

import pytest
from sympy import Rational

from truncsmt.exceptions import DomainError
from truncsmt.models import AlphaMode
from truncsmt.services.filtration import (
    MultiIndex,
    big_delta,
    build_filtration,
    choose_alpha,
    closed_form_truncation,
    coordinate_deltas,
    cz_basis,
    delta_lower_bound,
    delta_map,
    enumerate_tuples,
    epsilon_growth_bound,
    filtration_dim,
    growth_factor,
    ratio_bound_check,
    truncation_report,
)
from truncsmt.services.graded import hilbert_quotient
from truncsmt.services.polynomials import HomogeneousPoly

from .helpers import coordinate_powers, form

# (n, d, alpha) with n <= 2, d <= 3, alpha <= 12 and d | alpha
SUITE = [(n, d, alpha) for n in (1, 2) for d in (1, 2, 3) for alpha in range(d, 13, d)]


# --- tuples ---
def test_enumerate_tuples_examples():
    assert [m.entries for m in enumerate_tuples(2, 1)] == [(0, 0), (0, 1), (1, 0)]
    assert [m.entries for m in enumerate_tuples(1, 3)] == [(0,), (1,), (2,), (3,)]
    six = enumerate_tuples(2, 2)
    assert len(six) == 6
    assert six[-1] == MultiIndex((2, 0))


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("bound", range(0, 7))
def test_enumerate_tuples_ascending_and_complete(n, bound):
    tuples = enumerate_tuples(n, bound)
    assert len(tuples) == comb(bound + n, n)
    assert all(a < b for a, b in zip(tuples, tuples[1:]))
    assert all(t.weight <= bound for t in tuples)


def test_lexicographic_comparison():
    assert MultiIndex((1, 0)) > MultiIndex((0, 5))
    assert MultiIndex((0, 2)) > MultiIndex((0, 1))
    assert str(MultiIndex((1, 2))) == "(1,2)"


# --- filtration levels ---
def test_filtration_dim_first_level_is_whole_space():
    assert filtration_dim(coordinate_powers(2, 2), 6, (0, 0)) == comb(8, 2)


def test_filtration_dims_for_a_point_on_p1():
    gammas = [form("x1", 2)]
    assert [filtration_dim(gammas, 3, (k,)) for k in range(4)] == [4, 3, 2, 1]


def test_filtration_dim_second_level_equals_ideal_piece():
    assert filtration_dim(coordinate_powers(2, 2), 4, (0, 1)) == 11


def test_filtration_dim_out_of_range():
    with pytest.raises(DomainError):
        filtration_dim([form("x1", 2)], 3, (4,))


def test_delta_map_stable_range():
    deltas = delta_map(coordinate_powers(2, 2), 8)
    assert all(deltas[i] == 4 for i in deltas if i.weight <= 2)
    assert sum(deltas.values()) == comb(10, 2)


def test_delta_map_for_a_point_on_p1():
    deltas = delta_map([form("x1", 2)], 3)
    assert list(deltas.values()) == [1, 1, 1, 1]


def test_filtration_rejects_positive_dimensional_forms():
    with pytest.raises(DomainError):
        build_filtration([form("x1^2", 3), form("x1*x2", 3)], 4)


@pytest.mark.parametrize("n, d, alpha", SUITE)
def test_filtration_properties_on_coordinate_powers(n, d, alpha):
    gammas = coordinate_powers(n, d)
    filtration = build_filtration(gammas, alpha)
    dims = [level.dim for level in filtration.levels]
    assert all(a >= b for a, b in zip(dims, dims[1:]))
    assert sum(level.delta for level in filtration.levels) == comb(alpha + n, n)
    for level in filtration.levels:
        assert level.delta >= 0
        assert level.delta == hilbert_quotient(gammas, alpha - d * level.index.weight)
        if level.index.weight <= alpha // d - n:
            assert level.delta == d**n


# --- adapted basis ---
def test_cz_basis_for_a_point_on_p1():
    basis = cz_basis([form("x1", 2)], 2)
    assert [(e.index.entries, e.psi) for e in basis] == [
        ((2,), form("x1^2", 2)),
        ((1,), form("x0*x1", 2)),
        ((0,), form("x0^2", 2)),
    ]


def test_cz_basis_two_squares():
    basis = cz_basis(coordinate_powers(2, 2), 4)
    assert len(basis) == 15
    assert sum(1 for e in basis if e.index.entries == (0, 0)) == 4


def test_cz_basis_elements_are_the_stated_products():
    gammas = [form("x1^2 - x0*x2", 3), form("x2^2 + x0*x1", 3)]
    for element in cz_basis(gammas, 6):
        assert 2 * element.index.weight + sum(element.eta) == 6
        power = HomogeneousPoly.monomial((0, 0, 0))
        for gamma, e in zip(gammas, element.index):
            power = power * gamma**e
        assert element.psi == power * HomogeneousPoly.monomial(element.eta)


def test_cz_basis_needs_alpha_at_least_nd():
    with pytest.raises(DomainError):
        cz_basis(coordinate_powers(2, 2), 3)


# --- Delta ---
def test_big_delta_point_on_p1():
    gammas = [form("x1", 2)]
    assert big_delta(gammas, 3) == 6
    assert delta_lower_bound(1, 1, 3) == 3
    report = ratio_bound_check(1, 1, 3, 6, 4, 3, "1/2")
    assert report.ratio == 2
    assert report.chain_bound == 4
    assert report.ratio_holds


@pytest.mark.parametrize("n, d, alpha", [s for s in SUITE if s[2] > s[0] * s[1]])
def test_big_delta_symmetry_lower_bound_and_ratio_chain(n, d, alpha):
    filtration = build_filtration(coordinate_powers(n, d), alpha)
    sums = coordinate_deltas(filtration)
    assert len(set(sums)) == 1
    assert sums[0] >= delta_lower_bound(n, d, alpha)
    M = comb(alpha + n, n)
    assert ratio_bound_check(n, d, alpha, sums[0], M, n + 2, "1/2").ratio_holds


# --- bound arithmetic ---
@pytest.mark.parametrize("n, d, epsilon, alpha", [(1, 1, "1/2", 19), (2, 2, "1/2", 444), (1, 2, "1/2", 54)])
def test_choose_alpha(n, d, epsilon, alpha):
    assert choose_alpha(n, d, epsilon) == alpha
    assert alpha % d == 0 and alpha > n * d


@pytest.mark.parametrize("epsilon", ["0", "1", "3/2", "-1/4"])
def test_choose_alpha_rejects_epsilon(epsilon):
    with pytest.raises(DomainError):
        choose_alpha(1, 1, epsilon)


@pytest.mark.parametrize(
    "n, d, alpha, m_exact, m_closed, exceeded",
    [(1, 1, 19, 20, 32, False), (1, 2, 54, 55, 96, False), (2, 2, 444, 99235, 82944, True)],
)
def test_truncation_report(n, d, alpha, m_exact, m_closed, exceeded):
    report = truncation_report(n, d, "1/2")
    assert report.alpha == alpha
    assert report.alpha_mode is AlphaMode.EPSILON
    assert report.m_exact == m_exact
    assert report.m_closed_form == m_closed
    assert report.closed_form_exceeded is exceeded
    assert closed_form_truncation(n, d, "1/2") == m_closed


def test_truncation_report_with_forms_and_override():
    report = truncation_report(1, 1, "1/2", [form("x1", 2)], alpha=3)
    assert report.alpha_mode is AlphaMode.OVERRIDE
    assert report.m_exact == 4
    assert report.delta == 6
    assert report.ratio == 2
    assert report.delta_lower == 3


def test_truncation_report_override_must_exceed_nd():
    with pytest.raises(DomainError):
        truncation_report(2, 2, "1/2", alpha=4)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("epsilon", ["1/2", "1/4"])
def test_growth_factor_at_epsilon_alpha(n, d, epsilon):
    alpha = choose_alpha(n, d, epsilon)
    assert growth_factor(n, d, alpha) <= epsilon_growth_bound(n, d, epsilon)


def test_growth_factor_example():
    assert growth_factor(1, 1, 19) == Rational(20, 18)
    assert epsilon_growth_bound(1, 1, "1/2") == Rational(9, 8)


def test_ratio_check_at_epsilon_alpha_gives_coefficient_bound():
    n, d, epsilon = 1, 1, "1/2"
    alpha = choose_alpha(n, d, epsilon)
    M = comb(alpha + n, n)
    Delta = big_delta([form("x1", 2)], alpha)
    report = ratio_bound_check(n, d, alpha, Delta, M, 5, epsilon)
    assert report.epsilon_alpha
    assert report.growth_holds
    assert report.coefficient_holds
    assert report.lhs_coefficient >= report.rhs_coefficient


@pytest.mark.parametrize("alpha", [2, 3])
def test_ratio_check_rejects_bad_alpha(alpha):
    # alpha = nd and alpha not divisible by d
    with pytest.raises(DomainError):
        ratio_bound_check(1, 2, alpha, 1, 1, 3, "1/2")
