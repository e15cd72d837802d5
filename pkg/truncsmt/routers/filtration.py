from fastapi import APIRouter

from .. import schemas
from ..exceptions import TruncSmtError
from ..services.filtration import build_filtration, filtration_big_delta, delta_lower_bound
from ..services.parser import parse_form
from ..services.polynomials import HomogeneousPoly
from . import to_http_error

router = APIRouter()


@router.post("/", response_model=schemas.FiltrationResponse)
def compute_filtration(request: schemas.FiltrationRequest):
    """
    Dimensions and quotient dimensions of every filtration level, the adapted
    basis and Delta. Without explicit forms the coordinate powers x_j^d are used.
    """
    n, d = request.n, request.d
    try:
        if request.gammas is None:
            gammas = [
                HomogeneousPoly.monomial(tuple(d if v == j else 0 for v in range(n + 1)))
                for j in range(1, n + 1)
            ]
        else:
            gammas = [parse_form(text, nvars=n + 1, degree=d) for text in request.gammas]
        result = build_filtration(gammas, request.alpha)
        big_delta = filtration_big_delta(result)
    except TruncSmtError as exc:
        raise to_http_error(exc)
    return schemas.FiltrationResponse(
        gammas=[g.to_text() for g in result.gammas],
        alpha=result.alpha,
        dimension=result.dimension,
        big_delta=big_delta,
        delta_lower=str(delta_lower_bound(n, d, request.alpha)),
        levels=[
            schemas.FiltrationLevelOut(index=list(level.index), dim=level.dim, delta=level.delta)
            for level in result.levels
        ],
        basis=[element.psi.to_text() for element in result.basis],
    )
