"""Zero localisation for exp-polynomials with multiplicities.

Polynomials (and single terms ``c(z) e^{p(z)}``) go through sympy's exact
square-free decomposition, so multiplicities are exact and only the locations
are numeric. Anything else is handled by the argument principle: a quad-tree
over a square containing the disk, phase tracking along rectangle edges, Newton
refinement of isolated zeros and a winding-number certificate per zero.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ, Poly

from ..config import settings
from ..exceptions import DegenerateCurveError, DomainError, NonConvergenceError
from ..models import ZeroMethod
from .expressions import Z_SYMBOL, AnalyticExpr
from .quadrature import circle_mean

logger = logging.getLogger(__name__)

# asymmetric split fractions keep rectangle edges away from "nice" points
_SPLITS = (0.4873, 0.5311, 0.4519)
_OUTER_SCALE = 1.0137
_EDGE_START = 32
_EDGE_MAX = 1 << 16
_PHASE_STEP = 0.5
_NEWTON_STEPS = 60
_NEWTON_FLOOR = 1e-6
_NROOTS_DIGITS = 30


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    multiplicity: int
    certified_radius: float


@dataclass(frozen=True)
class ZeroScan:
    """Zeros of ``g`` in ``|z| <= radius`` (``radius`` may be a perturbed request)."""

    radius: float
    records: Tuple[ZeroRecord, ...]
    method: ZeroMethod
    winding: int

    @property
    def total(self) -> int:
        return sum(record.multiplicity for record in self.records)


class _EdgeHit(Exception):
    """A rectangle edge passes (numerically) through a zero."""


# --- exact path ---
def _exact_zeros(coefficient) -> List[ZeroRecord]:
    expr = coefficient.as_expr()
    real = all(not c.y for c in coefficient.values())
    poly = Poly(expr, Z_SYMBOL, domain=QQ) if real else Poly(expr, Z_SYMBOL, domain=coefficient.ring.domain)
    if poly.degree() <= 0:
        return []
    _, factors = poly.sqf_list()
    located: List[Tuple[complex, int]] = []
    for factor, multiplicity in factors:
        if factor.degree() <= 0:
            continue
        for root in factor.nroots(n=_NROOTS_DIGITS, maxsteps=200):
            located.append((complex(root), multiplicity))
    points = np.array([z for z, _ in located], dtype=complex)
    records = []
    for k, (z, multiplicity) in enumerate(located):
        others = np.delete(points, k)
        separation = float(np.min(np.abs(others - z))) / 2 if others.size else np.inf
        records.append(ZeroRecord(z, multiplicity, min(settings.ISOLATION_RADIUS, separation)))
    return records


# --- argument principle ---
def _segment_phase(g: AnalyticExpr, a: complex, b: complex) -> float:
    """Total change of arg g along [a, b], refined until every step is below _PHASE_STEP."""
    count = _EDGE_START
    while count <= _EDGE_MAX:
        values = g.evaluate(a + (b - a) * np.linspace(0.0, 1.0, count + 1))
        if not np.all(np.isfinite(values)) or np.any(values == 0):
            raise _EdgeHit()
        steps = np.angle(values[1:] / values[:-1])
        if np.max(np.abs(steps)) <= _PHASE_STEP:
            return float(np.sum(steps))
        count *= 2
    raise _EdgeHit()


def _rectangle_count(g: AnalyticExpr, rect: Tuple[float, float, float, float]) -> int:
    x0, x1, y0, y1 = rect
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total = sum(_segment_phase(g, corners[k], corners[(k + 1) % 4]) for k in range(4))
    return int(round(total / (2 * np.pi)))


def winding_number(
    g: AnalyticExpr,
    dg: AnalyticExpr,
    center: complex,
    radius: float,
    tol: Optional[float] = None,
) -> int:
    """``(1/2 pi i) * contour integral of g'/g`` on a circle, certified to be an integer."""

    def integrand(points):
        return dg.evaluate(points) / g.evaluate(points) * (points - center)

    tol = settings.WINDING_TOL / 10 if tol is None else tol
    result = circle_mean(integrand, radius, tol, center=center)
    value = complex(result.value)
    nearest = round(value.real)
    if abs(value - nearest) > settings.WINDING_TOL:
        raise NonConvergenceError(
            f"winding number {value:.6g} on |z - {center:.6g}| = {radius} is not integral"
        )
    return int(nearest)


def _newton(
    g: AnalyticExpr, dg: AnalyticExpr, start: complex, multiplicity: int
) -> Optional[complex]:
    """Multiplicity-aware Newton iteration.

    At a multiple zero rounding noise stalls the steps near ``eps^(1/m)``, so an
    iterate is also accepted once the step stops shrinking below ``_NEWTON_FLOOR``.
    """
    z = complex(start)
    previous = np.inf
    for _ in range(_NEWTON_STEPS):
        value = complex(g.evaluate(np.array([z]))[0])
        if value == 0:
            return z
        slope = complex(dg.evaluate(np.array([z]))[0])
        if slope == 0 or not np.isfinite(slope):
            return z if previous <= _NEWTON_FLOOR * max(1.0, abs(z)) else None
        step = multiplicity * value / slope
        scale = max(1.0, abs(z))
        if abs(step) <= 1e-14 * scale:
            return z - step
        if abs(step) >= previous and previous <= _NEWTON_FLOOR * scale:
            return z
        previous = abs(step)
        z -= step
    return z if previous <= _NEWTON_FLOOR * max(1.0, abs(z)) else None


def _inside(z: complex, rect, margin: float) -> bool:
    x0, x1, y0, y1 = rect
    return x0 - margin <= z.real <= x1 + margin and y0 - margin <= z.imag <= y1 + margin


def _certify(g, dg, z: complex, multiplicity: int) -> ZeroRecord:
    radius = settings.ISOLATION_RADIUS
    for _ in range(4):
        if winding_number(g, dg, z, radius) == multiplicity:
            return ZeroRecord(z, multiplicity, radius)
        radius /= 10
    raise NonConvergenceError(
        f"zero near {z:.6g}: winding on isolation circles never matched multiplicity {multiplicity}"
    )


@dataclass
class _QuadTree:
    g: AnalyticExpr
    dg: AnalyticExpr
    min_size: float
    found: List[ZeroRecord] = field(default_factory=list)

    def split(self, rect, count: int) -> List[Tuple[Tuple[float, float, float, float], int]]:
        x0, x1, y0, y1 = rect
        for fraction in _SPLITS:
            xm = x0 + fraction * (x1 - x0)
            ym = y0 + fraction * (y1 - y0)
            children = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]
            try:
                counts = [_rectangle_count(self.g, child) for child in children]
            except _EdgeHit:
                continue
            if sum(counts) == count:
                return list(zip(children, counts))
        raise NonConvergenceError(f"could not subdivide {rect} without crossing a zero")

    def isolate(self, rect, count: int):
        if count == 0:
            return
        x0, x1, y0, y1 = rect
        size = max(x1 - x0, y1 - y0)
        center = complex((x0 + x1) / 2, (y0 + y1) / 2)
        if count == 1 or size < self.min_size:
            z = _newton(self.g, self.dg, center, count)
            if z is not None and _inside(z, rect, 1e-12 * max(1.0, abs(z))):
                self.found.append(_certify(self.g, self.dg, z, count))
                return
            if size < self.min_size:
                self.found.append(_certify(self.g, self.dg, center, count))
                return
        for child, child_count in self.split(rect, count):
            self.isolate(child, child_count)


def _argument_principle_zeros(g: AnalyticExpr, R: float) -> List[ZeroRecord]:
    half = R * _OUTER_SCALE
    rect = (-half, half * 0.9983, -half * 0.9971, half)
    try:
        count = _rectangle_count(g, rect)
    except _EdgeHit:
        rect = tuple(1.0071 * v for v in rect)
        try:
            count = _rectangle_count(g, rect)
        except _EdgeHit:
            raise NonConvergenceError(f"zeros crowd the boundary of the search square for R={R}")
    tree = _QuadTree(g, g.diff(), settings.ISOLATION_RADIUS / 8)
    tree.isolate(rect, count)
    if sum(r.multiplicity for r in tree.found) != count:
        raise NonConvergenceError(f"quad-tree found {len(tree.found)} zeros, expected total {count}")
    return tree.found


def _near_circle(records: Sequence[ZeroRecord], R: float) -> bool:
    return any(abs(abs(r.location) - R) <= settings.ZERO_BAND * R for r in records)


def zero_scan(g: AnalyticExpr, R: float, tol: Optional[float] = None) -> ZeroScan:
    """Zeros of ``g`` in ``|z| <= R`` together with the radius actually used."""
    if g.is_zero():
        raise DegenerateCurveError("the zero function has no isolated zeros")
    if R <= 0:
        raise DomainError(f"radius must be positive, got {R}")
    if len(g.terms) == 1:
        _, coefficient = g.single_term()
        candidates = _exact_zeros(coefficient)
        method = ZeroMethod.EXACT_POLYNOMIAL if g.is_polynomial() else ZeroMethod.SINGLE_TERM
    else:
        candidates = _argument_principle_zeros(g, R)
        method = ZeroMethod.ARGUMENT_PRINCIPLE

    radius = R
    while _near_circle(candidates, radius):
        radius *= 1 + settings.RADIUS_PERTURBATION
        logger.warning(f"a zero lies on |z| = {R}; using perturbed radius {radius}")

    records = tuple(
        sorted(
            (r for r in candidates if abs(r.location) <= radius),
            key=lambda r: (abs(r.location), r.location.real, r.location.imag),
        )
    )
    total = sum(r.multiplicity for r in records)
    if method is ZeroMethod.ARGUMENT_PRINCIPLE:
        winding = winding_number(g, g.diff(), 0.0, radius, tol)
        if winding != total:
            raise NonConvergenceError(
                f"located multiplicity {total} differs from the winding number {winding} on |z| = {radius}"
            )
    else:
        winding = total
    logger.info(f"{len(records)} zeros (total multiplicity {total}) in |z| <= {radius} via {method.value}")
    return ZeroScan(radius, records, method, winding)


def locate_zeros(g: AnalyticExpr, R: float, tol: Optional[float] = None) -> List[ZeroRecord]:
    return list(zero_scan(g, R, tol).records)
