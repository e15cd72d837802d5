from math import acos, e, log, pi, sin

import pytest

from truncsmt.exceptions import CircleSingularityError, DegenerateCurveError, DomainError
from truncsmt.services.nevanlinna import (
    characteristic,
    counting,
    fmt_residual,
    nevanlinna_table,
    proximity,
    zero_set,
)

from .helpers import curve, form


# --- characteristic ---
def test_characteristic_of_identity_map(line_curve):
    assert characteristic(line_curve, e) == pytest.approx(1.0, abs=1e-4)
    assert characteristic(line_curve, 0.5) == pytest.approx(0.0, abs=1e-4)


def test_characteristic_of_exp_curve(exp_curve):
    # T(r) = (1/2pi) * integral of max(log r, r cos theta)
    r = 50.0
    theta0 = acos(log(r) / r)
    expected = (r / pi) * sin(theta0) + log(r) * (1 - theta0 / pi)
    assert characteristic(exp_curve, r) == pytest.approx(expected, abs=1e-3)


def test_characteristic_rejects_bad_radius(line_curve):
    with pytest.raises(DomainError):
        characteristic(line_curve, 0.0)


# --- proximity ---
@pytest.mark.parametrize("r", [1.0, 2.0, 10.0])
def test_proximity_to_coordinate_hyperplanes(line_curve, r):
    assert proximity(line_curve, form("x0", 2), r) == pytest.approx(0.0, abs=1e-4)
    assert proximity(line_curve, form("x1", 2), r) == pytest.approx(log(r), abs=1e-4)


def test_proximity_to_vanishing_composition():
    with pytest.raises(DegenerateCurveError):
        proximity(curve("1", "z", "z^2"), form("x0*x2 - x1^2", 3), 2.0)


def test_proximity_on_a_zero_suggests_radius(line_curve):
    with pytest.raises(CircleSingularityError) as info:
        proximity(line_curve, form("x0 - x1", 2), 1.0)
    assert info.value.suggested_radius == pytest.approx(1.0 + 1e-6)


# --- counting ---
def test_counting_zero_at_origin(line_curve):
    assert counting(line_curve, form("x0", 2), e) == pytest.approx(1.0)


def test_truncated_counting():
    f = curve("(z - 1)^5", "1")
    assert counting(f, form("x0", 2), e**2, truncation=2) == pytest.approx(4.0)
    assert counting(f, form("x0", 2), e**2) == pytest.approx(10.0)


def test_counting_rejects_bad_arguments(line_curve):
    with pytest.raises(DomainError):
        counting(line_curve, form("x0", 2), -1.0)
    with pytest.raises(DomainError):
        counting(line_curve, form("x0", 2), 2.0, truncation=0)


def test_counting_monotone_in_truncation_and_radius():
    f = curve("z^3*(z - 1)^2*(z + 2i)", "1")
    zeros = zero_set(f, form("x0", 2), 4.0)
    for r in (1.5, 2.5, 4.0):
        values = [zeros.counting(r, M) for M in (1, 2, 3, None)]
        assert values == sorted(values)
        assert values[-1] == pytest.approx(zeros.counting(r))
    by_radius = [zeros.counting(r, 2) for r in (1.5, 2.5, 4.0)]
    assert by_radius == sorted(by_radius)


def test_counting_without_truncation_equals_large_truncation():
    f = curve("z^3*(z - 1)^2", "1")
    zeros = zero_set(f, form("x0", 2), 3.0)
    assert zeros.counting(3.0, 3) == pytest.approx(zeros.counting(3.0))


def test_origin_is_kept_with_exact_order():
    f = curve("z^4*(z - 2)", "1")
    zeros = zero_set(f, form("x0", 2), 3.0)
    assert zeros.origin_order == 4
    assert [z.multiplicity for z in zeros.zeros] == [1]
    profile = zeros.profile(3.0, truncation=2)
    assert (profile.n, profile.n_truncated) == (5, 3)
    assert profile.N == pytest.approx(4 * log(3.0) + log(1.5))
    assert profile.N_truncated == pytest.approx(2 * log(3.0) + log(1.5))


def test_power_rule_on_zero_sets():
    f = curve("(z - 1)^3*(z + 1/2)", "1")
    base = zero_set(f, form("x0", 2), 3.0)
    power = zero_set(f, form("x0^2", 2), 3.0)
    assert sorted(z.multiplicity for z in power.zeros) == sorted(2 * z.multiplicity for z in base.zeros)
    assert sorted(z.multiplicity for z in base.power(2).zeros) == sorted(z.multiplicity for z in power.zeros)
    for M in (1, 2, 4):
        assert power.counting(2.5, M) <= 2 * base.counting(2.5, M) + 1e-12


# --- first main theorem ---
@pytest.mark.parametrize("text", ["x0", "x1", "x0 - x1"])
def test_fmt_residual_is_constant_for_identity_map(line_curve, text):
    residual = fmt_residual(line_curve, form(text, 2), [2.0, 4.0, 8.0, 16.0])
    assert residual.spread <= 1e-3


def test_fmt_residual_for_exp_curve(exp_curve):
    residual = fmt_residual(exp_curve, form("x0 + x1 + x2", 3), [4.0, 8.0, 12.0])
    assert residual.spread <= 0.05


def test_fmt_residual_needs_ascending_grid(line_curve):
    with pytest.raises(DomainError):
        fmt_residual(line_curve, form("x0", 2), [4.0])
    with pytest.raises(DomainError):
        fmt_residual(line_curve, form("x0", 2), [4.0, 2.0])


# --- table ---
def test_nevanlinna_table_rows(line_curve):
    targets = [form("x0", 2), form("x0 - x1", 2), form("x0 - 3*x1", 2)]
    rows = nevanlinna_table(line_curve, targets, [2.0, 4.0], truncation=1)
    assert [row.r for row in rows] == [2.0, 4.0]
    first = rows[0]
    assert first.T == pytest.approx(log(2.0), abs=1e-4)
    origin, one, three = first.targets
    assert origin.n == 1 and origin.N == pytest.approx(log(2.0))
    assert one.N_truncated == pytest.approx(log(2.0))
    assert three.n == 0 and three.N == 0.0
    assert rows[1].targets[2].n == 1
    for row in rows:
        for values in row.targets:
            assert values.N_truncated <= values.N + 1e-12
            assert abs(values.residual - row.targets[0].residual) < 1.5


def test_nevanlinna_table_is_thread_independent(line_curve):
    targets = [form("x0 - x1", 2), form("x1", 2)]
    one = nevanlinna_table(line_curve, targets, [2.0, 4.0, 8.0], threads=1)
    many = nevanlinna_table(line_curve, targets, [2.0, 4.0, 8.0], threads=3)
    assert one == many


def test_table_perturbs_a_radius_through_a_zero(line_curve):
    rows = nevanlinna_table(line_curve, [form("x0 - 2*x1", 2)], [2.0, 4.0, 8.0, 16.0])
    assert [row.r for row in rows] == [2.0, 4.0, 8.0, 16.0]
    first = rows[0]
    assert first.r_used == pytest.approx(2.0 * (1 + 1e-6))
    assert first.r_used > first.r
    assert [row.r_used for row in rows[1:]] == [4.0, 8.0, 16.0]
    assert first.targets[0].n == 1
    assert first.targets[0].N == pytest.approx(log(1 + 1e-6), abs=1e-9)
    # m + N - T = -log 2 for z - 2 against (z : 1) once r >= 2
    for row in rows:
        assert row.targets[0].residual == pytest.approx(-log(2.0), abs=1e-3)


def test_fmt_residual_reports_the_radii_used(line_curve):
    residual = fmt_residual(line_curve, form("x0 - 4*x1", 2), [2.0, 4.0, 8.0])
    assert residual.radii[0] == 2.0
    assert residual.radii[1] > 4.0
    assert residual.radii[2] == 8.0
    assert residual.spread <= 1e-3
