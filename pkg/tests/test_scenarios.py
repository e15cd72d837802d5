import json
from math import log

import pytest

from truncsmt import schemas
from truncsmt.exceptions import DegenerateCurveError, DomainError, GeneralPositionError, PreconditionError
from truncsmt.models import AlphaMode, RowFlag
from truncsmt.services.scenarios import (
    load_scenario,
    require_nondegenerate,
    proximity_sum_check,
    run_smt_scenario,
    scenario_from_spec,
)

from .helpers import curve


def spec(**overrides) -> schemas.ScenarioSpec:
    data = {
        "n": 1,
        "curve": ["z", "1"],
        "targets": [{"form": f"x0 - {a}*x1", "degree": 1} for a in (1, 2, 3)],
        "r_grid": [4, 8],
    }
    data.update(overrides)
    return schemas.ScenarioSpec.model_validate(data)


# --- loading ---
def test_load_shipped_scenarios(scenario_path):
    scenario = load_scenario(scenario_path("points_p1.json"))
    assert scenario.n == 1
    assert scenario.q == 5
    assert scenario.degrees == (1, 1, 1, 1, 1)
    assert scenario.M_override == 1
    assert scenario.r_grid == (20.0, 40.0, 80.0)
    assert load_scenario(scenario_path("exp_p2.json")).q == 4


def test_load_rejects_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "curve": ["1", "z"], "targets": [], "r_grid": [1]}))
    with pytest.raises(PreconditionError):
        load_scenario(path)


@pytest.mark.parametrize("grid", [[], [2, 1], [0, 1]])
def test_grid_must_be_positive_and_ascending(grid):
    with pytest.raises(ValueError):
        spec(r_grid=grid)


@pytest.mark.parametrize("epsilon", ["0", "1", "5/4"])
def test_epsilon_must_lie_in_unit_interval(epsilon):
    with pytest.raises(DomainError):
        scenario_from_spec(spec(epsilon=epsilon))


def test_polynomial_curves_in_higher_dimension_are_rejected():
    with pytest.raises(DegenerateCurveError):
        require_nondegenerate(curve("1", "z", "z^3"))


def test_linearly_dependent_transcendental_curve_is_rejected():
    with pytest.raises(DegenerateCurveError):
        require_nondegenerate(curve("exp(z)", "2*exp(z)", "1"))


# --- second main theorem ---
def test_points_on_p1_margin_positive_and_increasing(scenario_path):
    report = run_smt_scenario(load_scenario(scenario_path("points_p1.json")))
    assert report.meta.truncation == 1
    assert report.meta.truncation_source == "override"
    margins = [row.margin for row in report.rows]
    assert all(m > 0 for m in margins)
    assert margins == sorted(margins)
    for row in report.rows:
        # each N^1(r) is log(r / a) exactly
        assert row.N_truncated == pytest.approx([log(row.r / a) for a in range(1, 6)], abs=1e-9)
        assert row.T == pytest.approx(log(row.r), abs=1e-4)
        assert row.margin == pytest.approx(2.5 * log(row.r) - log(120), abs=1e-3)
        assert RowFlag.NEGATIVE_MARGIN not in row.flags


def test_meta_reports_both_truncation_levels(scenario_path):
    report = run_smt_scenario(load_scenario(scenario_path("line_p1.json")))
    meta = report.meta
    assert meta.alpha == 19
    assert meta.alpha_mode is AlphaMode.EPSILON
    assert meta.truncation == meta.m_exact == 20
    assert meta.m_closed_form == 32
    assert not meta.closed_form_exceeded
    assert meta.truncation_source == "exact"


def test_exp_curve_rows(scenario_path):
    report = run_smt_scenario(load_scenario(scenario_path("exp_p2.json")))
    assert [row.r for row in report.rows] == [5.0, 10.0, 15.0, 20.0]
    for row in report.rows:
        N0, N1, N2, _ = row.N_truncated
        assert N0 == 0.0
        assert N1 == pytest.approx(log(row.r))
        assert N2 == 0.0
        assert row.lhs == pytest.approx(0.5 * row.T)


def test_general_position_failure_names_subset(scenario_path):
    with pytest.raises(GeneralPositionError) as info:
        run_smt_scenario(load_scenario(scenario_path("not_general_position.json")))
    assert info.value.subset == (0, 1, 2)
    assert info.value.point == ("0", "0", "1")


def test_too_few_targets():
    scenario = scenario_from_spec(spec(targets=[{"form": "x0", "degree": 1}]))
    with pytest.raises(PreconditionError):
        run_smt_scenario(scenario)


def test_mixed_degrees_use_lcm():
    scenario = scenario_from_spec(
        spec(
            targets=[
                {"form": "x0 - x1", "degree": 1},
                {"form": "x0^2 + x1^2", "degree": 2},
                {"form": "x1", "degree": 1},
            ],
            M_override=3,
        )
    )
    report = run_smt_scenario(scenario)
    assert report.meta.d == 2
    for row in report.rows:
        assert row.equalized_rhs <= row.rhs + 1e-9
        assert RowFlag.EQUALIZED_EXCEEDS not in row.flags


def test_smt_is_independent_of_threads(scenario_path):
    scenario = load_scenario(scenario_path("points_p1.json"))
    assert run_smt_scenario(scenario, threads=1) == run_smt_scenario(scenario, threads=4)


# --- summed proximity bound ---
def test_proximity_sum_on_points_of_p1(scenario_path):
    report = proximity_sum_check(load_scenario(scenario_path("points_p1.json")))
    assert report.c1 == pytest.approx(9.0)
    assert len(report.constants) == 10
    for row in report.rows:
        # |a| < r, so every m_f(r, x0 - a x1) vanishes
        assert row.proximity_sum == pytest.approx(0.0, abs=1e-3)
        assert row.constant == pytest.approx(4 * log(9))
        assert row.subset_integral >= -1e-3
        assert row.pointwise_slack >= 0
        assert row.holds


def test_proximity_sum_on_exp_curve(scenario_path):
    report = proximity_sum_check(load_scenario(scenario_path("exp_p2.json")))
    assert report.d == 1
    assert report.c1 == pytest.approx(3.0)
    assert all(row.holds for row in report.rows)
    assert all(row.margin >= -1e-3 for row in report.rows)


def test_proximity_sum_with_mixed_degrees():
    scenario = scenario_from_spec(
        spec(
            targets=[
                {"form": "x0 - x1", "degree": 1},
                {"form": "x0^2 + x1^2", "degree": 2},
                {"form": "x1", "degree": 1},
            ],
        )
    )
    report = proximity_sum_check(scenario)
    assert report.d == 2
    assert len(report.constants) == 3
    assert all(row.holds for row in report.rows)


def test_proximity_sum_needs_n_plus_one_targets():
    with pytest.raises(DomainError):
        proximity_sum_check(scenario_from_spec(spec(targets=[{"form": "x0", "degree": 1}])))
