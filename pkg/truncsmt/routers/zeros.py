from fastapi import APIRouter

from .. import schemas
from ..exceptions import TruncSmtError
from ..services.parser import parse_expr
from ..services.zeros import zero_scan
from . import to_http_error

router = APIRouter()


@router.post("/", response_model=schemas.ZerosResponse)
def locate(request: schemas.ZerosRequest):
    """Zeros of an exp-polynomial in |z| <= radius, with multiplicities."""
    try:
        scan = zero_scan(parse_expr(request.expr), request.radius, request.tol)
    except TruncSmtError as exc:
        raise to_http_error(exc)
    return schemas.ZerosResponse(
        expr=request.expr,
        radius=scan.radius,
        method=scan.method,
        winding=scan.winding,
        zeros=[
            schemas.ZeroOut(
                re=float(r.location.real),
                im=float(r.location.imag),
                multiplicity=r.multiplicity,
                certified_radius=float(r.certified_radius),
            )
            for r in scan.records
        ],
    )
