# Makes 'routers' a package
from fastapi import HTTPException, status

from ..exceptions import NonConvergenceError, PreconditionError, TruncSmtError


def to_http_error(exc: TruncSmtError) -> HTTPException:
    """Map library errors to HTTP status codes (422 precondition, 503 non-convergence)."""
    if isinstance(exc, PreconditionError):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc))
    if isinstance(exc, NonConvergenceError):
        return HTTPException(status_code=status.HTTP_503_SERVICE_UNAVAILABLE, detail=str(exc))
    return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(exc))
