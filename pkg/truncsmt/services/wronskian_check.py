import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from sympy import binomial

from ..exceptions import DomainError, InternalInvariantError
from .expressions import Curve, curve_compose, wronskian
from .filtration import build_filtration, filtration_big_delta, verified_basis
from .polynomials import HomogeneousPoly, Scalar, common_degree, format_gaussian, to_gaussian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WronskianOrderResult:
    point: str
    observed: Optional[int]  # None when the Wronskian vanishes identically
    claimed: int
    delta: int
    M: int
    orders: Tuple[int, ...]

    @property
    def degenerate(self) -> bool:
        return self.observed is None

    @property
    def holds(self) -> bool:
        return self.degenerate or self.observed >= self.claimed


def wronskian_order_check(
    gammas: Sequence[HomogeneousPoly], alpha: int, f: Curve, z: Scalar = 0
) -> WronskianOrderResult:
    """Exact ord_z W(psi_1 o f, ..., psi_M o f) against Delta * sum_{k_j >= M} (k_j - M)."""
    if not f.is_polynomial():
        raise DomainError("the vanishing-order check needs polynomial components")
    n = len(gammas)
    if f.n != n:
        raise DomainError(f"{n} forms need a curve into P^{n}, got P^{f.n}")
    d = common_degree(gammas)
    if alpha < n * d:
        raise DomainError(f"alpha = {alpha} must be at least n*d = {n * d}")
    z = to_gaussian(z)
    filtration = build_filtration(gammas, alpha)
    basis = verified_basis(filtration)
    delta = filtration_big_delta(filtration)
    M = int(binomial(alpha + n, n))

    orders = []
    for gamma in gammas:
        g = curve_compose(gamma, f)
        if g.is_zero():
            raise DomainError(f"{gamma.to_text()} vanishes identically along the curve")
        orders.append(g.order_at(z))
    claimed = delta * sum(k - M for k in orders if k >= M)

    W = wronskian([curve_compose(element.psi, f) for element in basis])
    point = format_gaussian(z)
    if W.is_zero():
        logger.warning(f"Wronskian of the basis images vanishes identically (alpha={alpha})")
        return WronskianOrderResult(point, None, claimed, delta, M, tuple(orders))
    observed = W.order_at(z)
    result = WronskianOrderResult(point, observed, claimed, delta, M, tuple(orders))
    if not result.holds:
        raise InternalInvariantError(
            f"ord_{point} W = {observed} is below the claimed bound {claimed}"
        )
    logger.info(f"ord_{point} W = {observed} >= {claimed} (Delta={delta}, M={M}, k={orders})")
    return result
