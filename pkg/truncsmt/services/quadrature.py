"""Composite trapezoid rule on circles with node doubling.

For a smooth periodic integrand the trapezoid rule converges geometrically, so
doubling the node count (reusing the old nodes) until two successive estimates
agree to ``tol`` is both cheap and reliable.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..config import settings
from ..exceptions import DomainError, NonConvergenceError

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    nodes: int
    error_estimate: float


def circle_points(radius: float, nodes: int, center: complex = 0.0, offset: int = 0, step: int = 1) -> np.ndarray:
    k = np.arange(offset, nodes, step)
    return center + radius * np.exp(2j * np.pi * k / nodes)


def circle_mean(
    integrand: Integrand,
    radius: float,
    tol: Optional[float] = None,
    center: complex = 0.0,
    min_nodes: Optional[int] = None,
    max_nodes: Optional[int] = None,
) -> QuadratureResult:
    """``(1/2pi) * integral of integrand(center + radius*e^{i theta}) d theta``."""
    tol = settings.DEFAULT_TOL if tol is None else tol
    nodes = min_nodes or settings.QUAD_MIN_NODES
    max_nodes = max_nodes or settings.QUAD_MAX_NODES
    if radius <= 0:
        raise DomainError(f"radius must be positive, got {radius}")

    values = integrand(circle_points(radius, nodes, center))
    _check_finite(values, radius)
    total = np.sum(values)
    estimate = total / nodes
    while nodes < max_nodes:
        nodes *= 2
        # the previous nodes are the even indices of the refined grid
        fresh = integrand(circle_points(radius, nodes, center, offset=1, step=2))
        _check_finite(fresh, radius)
        total = total + np.sum(fresh)
        refined = total / nodes
        error = abs(refined - estimate)
        estimate = refined
        if error < tol:
            return QuadratureResult(_scalar(estimate), nodes, float(error))
    raise NonConvergenceError(
        f"trapezoid rule on |z - {center}| = {radius} did not reach tol={tol} within {max_nodes} nodes"
    )


def real_circle_mean(
    integrand: Integrand, radius: float, tol: Optional[float] = None, **kwargs
) -> float:
    return float(np.real(circle_mean(integrand, radius, tol, **kwargs).value))


def _check_finite(values: np.ndarray, radius: float):
    if not np.all(np.isfinite(values)):
        raise NonConvergenceError(f"integrand is not finite on the circle of radius {radius}")


def _scalar(value) -> complex:
    value = complex(value)
    return value.real if value.imag == 0 else value
