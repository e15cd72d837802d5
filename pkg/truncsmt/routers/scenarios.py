from typing import Optional

from fastapi import APIRouter

from .. import schemas
from ..exceptions import TruncSmtError
from ..services.nevanlinna import nevanlinna_table
from ..services.scenarios import proximity_sum_check, run_smt_scenario, scenario_from_spec
from ..services.theorem_r import theorem_r_check
from . import to_http_error

router = APIRouter()


@router.post("/smt", response_model=schemas.SmtReport)
def run_smt(spec: schemas.ScenarioSpec):
    """
    Run the second main theorem check on a scenario.
    Rows with a negative margin are flagged, not rejected.
    """
    try:
        return run_smt_scenario(scenario_from_spec(spec))
    except TruncSmtError as exc:
        raise to_http_error(exc)


@router.post("/nevanlinna", response_model=schemas.NevanlinnaReport)
def run_nevanlinna(spec: schemas.ScenarioSpec, truncation: Optional[int] = None):
    """
    Nevanlinna table of a scenario. ``truncation`` falls back to the
    scenario's M_override; absent both, counting is untruncated.
    """
    try:
        scenario = scenario_from_spec(spec)
        level = truncation if truncation is not None else scenario.M_override
        rows = nevanlinna_table(scenario.curve, scenario.targets, scenario.r_grid, level, scenario.tol)
    except TruncSmtError as exc:
        raise to_http_error(exc)
    return schemas.NevanlinnaReport(
        targets=[Q.to_text() for Q in scenario.targets],
        truncation=level,
        rows=[schemas.NevanlinnaRowOut.model_validate(row) for row in rows],
    )


@router.post("/theorem-r", response_model=schemas.TheoremRReport)
def run_theorem_r(spec: schemas.ScenarioSpec):
    try:
        scenario = scenario_from_spec(spec)
        return theorem_r_check(scenario.curve, scenario.targets, scenario.r_grid, scenario.tol)
    except TruncSmtError as exc:
        raise to_http_error(exc)


@router.post("/proximity-sum", response_model=schemas.ProximitySumReport)
def run_proximity_sum(spec: schemas.ScenarioSpec):
    """
    Summed proximity against the best n-subset integral plus (q - n) log c1.
    """
    try:
        return proximity_sum_check(scenario_from_spec(spec))
    except TruncSmtError as exc:
        raise to_http_error(exc)
