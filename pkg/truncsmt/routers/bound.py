from fastapi import APIRouter

from .. import schemas
from ..exceptions import TruncSmtError
from ..services.filtration import truncation_report
from ..services.parser import parse_form
from . import to_http_error

router = APIRouter()


@router.post("/", response_model=schemas.BoundResponse)
def compute_bound(request: schemas.BoundRequest):
    """
    Truncation levels for (n, d, epsilon): the exact C(alpha+n, n) next to the
    closed-form level, plus the exact Delta when forms are supplied.
    """
    try:
        gammas = None
        if request.gammas is not None:
            gammas = [parse_form(text, nvars=request.n + 1, degree=request.d) for text in request.gammas]
        report = truncation_report(request.n, request.d, request.epsilon, gammas, request.alpha)
    except TruncSmtError as exc:
        raise to_http_error(exc)
    return schemas.BoundResponse(
        n=report.n,
        d=report.d,
        epsilon=str(report.epsilon),
        alpha=report.alpha,
        alpha_mode=report.alpha_mode,
        m_exact=report.m_exact,
        m_closed_form=report.m_closed_form,
        closed_form_exceeded=report.closed_form_exceeded,
        delta_lower=str(report.delta_lower),
        delta=report.delta,
        ratio=None if report.ratio is None else str(report.ratio),
    )
