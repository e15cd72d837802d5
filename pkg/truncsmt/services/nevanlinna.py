"""Characteristic, proximity and (truncated) counting functions of curves.

Logarithms are natural; ``||f||`` is the max norm of the reduced representation.
The counting function uses the ``+ n(0) log r`` convention for a zero at the
origin, which is the one that makes ``m + N - d T`` constant in r.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from math import log
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import settings
from ..exceptions import CircleSingularityError, DegenerateCurveError, DomainError
from .expressions import AnalyticExpr, Curve, curve_compose
from .polynomials import HomogeneousPoly
from .quadrature import real_circle_mean
from .zeros import ZeroRecord, zero_scan

logger = logging.getLogger(__name__)


def _truncate(multiplicity: int, truncation: Optional[int]) -> int:
    return multiplicity if truncation is None else min(multiplicity, truncation)


def _check_truncation(truncation: Optional[int]):
    if truncation is not None and truncation < 1:
        raise DomainError(f"truncation level must be a positive integer, got {truncation}")


@dataclass(frozen=True)
class CountingProfile:
    n: int
    n_truncated: int
    N: float
    N_truncated: float


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of ``Q o f`` in ``|z| <= radius``; the origin is kept apart with its exact order."""

    radius: float
    origin_order: int
    zeros: Tuple[ZeroRecord, ...]

    def power(self, k: int) -> "ZeroSet":
        """Zeros of ``Q^k o f``: same points, multiplicities times k."""
        scaled = tuple(replace(z, multiplicity=k * z.multiplicity) for z in self.zeros)
        return ZeroSet(self.radius, k * self.origin_order, scaled)

    def on_circle(self, r: float) -> bool:
        return any(abs(abs(z.location) - r) <= settings.ZERO_BAND * r for z in self.zeros)

    def profile(self, r: float, truncation: Optional[int] = None) -> CountingProfile:
        if r <= 0:
            raise DomainError(f"radius must be positive, got {r}")
        if r > self.radius * (1 + settings.RADIUS_PERTURBATION):
            raise DomainError(f"zeros were located only up to |z| = {self.radius}, asked for r = {r}")
        _check_truncation(truncation)
        n = n_trunc = 0
        N = N_trunc = 0.0
        for z in self.zeros:
            modulus = abs(z.location)
            if modulus > r:
                continue
            weight = log(r / modulus)
            n += z.multiplicity
            n_trunc += _truncate(z.multiplicity, truncation)
            N += z.multiplicity * weight
            N_trunc += _truncate(z.multiplicity, truncation) * weight
        m0 = self.origin_order
        n += m0
        n_trunc += _truncate(m0, truncation)
        N += m0 * log(r)
        N_trunc += _truncate(m0, truncation) * log(r)
        return CountingProfile(n, n_trunc, N, N_trunc)

    def counting(self, r: float, truncation: Optional[int] = None) -> float:
        return self.profile(r, truncation).N_truncated


def composition(f: Curve, Q: HomogeneousPoly) -> AnalyticExpr:
    g = curve_compose(Q, f)
    if g.is_zero():
        raise DegenerateCurveError(f"composition of {Q.to_text()} with the curve is identically zero")
    return g


def zero_set(f: Curve, Q: HomogeneousPoly, R: float, tol: Optional[float] = None) -> ZeroSet:
    g = composition(f, Q)
    scan = zero_scan(g, R, tol)
    m0 = g.order_at(0)
    zeros = scan.records
    if m0:
        origin = tuple(z for z in zeros if abs(z.location) <= z.certified_radius)
        found = sum(z.multiplicity for z in origin)
        if found != m0:
            logger.warning(f"numeric multiplicity {found} at the origin, exact order is {m0}")
        zeros = tuple(z for z in zeros if z not in origin)
    return ZeroSet(scan.radius, m0, zeros)


def characteristic(f: Curve, r: float, tol: Optional[float] = None) -> float:
    """T_f(r) = (1/2pi) * integral of log max_k |f_k(r e^{i theta})|."""
    if r <= 0:
        raise DomainError(f"radius must be positive, got {r}")
    return real_circle_mean(f.log_norm, r, tol)


def proximity(
    f: Curve,
    Q: HomogeneousPoly,
    r: float,
    tol: Optional[float] = None,
    zeros: Optional[ZeroSet] = None,
) -> float:
    """m_f(r, Q) = (1/2pi) * integral of log(||f||^d / |Q o f|)."""
    if r <= 0:
        raise DomainError(f"radius must be positive, got {r}")
    g = composition(f, Q)
    if zeros is None:
        zeros = zero_set(f, Q, r * (1 + 2 * settings.ZERO_BAND))
    if zeros.on_circle(r):
        suggested = r * (1 + settings.RADIUS_PERTURBATION)
        raise CircleSingularityError(f"Q o f vanishes on |z| = {r}", suggested)
    d = Q.degree

    def integrand(points: np.ndarray) -> np.ndarray:
        return d * f.log_norm(points) - np.log(np.abs(g.evaluate(points)))

    return real_circle_mean(integrand, r, tol)


def counting(
    f: Curve, Q: HomogeneousPoly, r: float, truncation: Optional[int] = None
) -> float:
    """N_f(r, Q) or, with a truncation level M, N_f^M(r, Q). ``None`` means no truncation."""
    if r <= 0:
        raise DomainError(f"radius must be positive, got {r}")
    _check_truncation(truncation)
    return zero_set(f, Q, r).counting(r, truncation)


def _check_grid(r_grid: Sequence[float], minimum: int = 1):
    if len(r_grid) < minimum:
        raise DomainError(f"need at least {minimum} radii, got {len(r_grid)}")
    if any(r <= 0 for r in r_grid) or any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise DomainError(f"radii must be positive and strictly ascending, got {list(r_grid)}")


# zero sets reach past the largest grid radius by a few perturbation steps
_SEARCH_MARGIN = 8


def search_radius(r_grid: Sequence[float]) -> float:
    return max(r_grid) * (1 + _SEARCH_MARGIN * settings.RADIUS_PERTURBATION)


def usable_radius(zero_sets: Sequence[ZeroSet], r: float) -> float:
    """``r``, or ``r`` moved outward by ``RADIUS_PERTURBATION`` until no target vanishes on ``|z| = r``."""
    used = r
    for _ in range(_SEARCH_MARGIN - 1):
        if not any(zs.on_circle(used) for zs in zero_sets):
            break
        used *= 1 + settings.RADIUS_PERTURBATION
    else:
        raise CircleSingularityError(f"zeros crowd the circle |z| = {r}", used)
    if used != r:
        logger.warning(f"a target vanishes on |z| = {r}; using perturbed radius {used}")
    return used


@dataclass(frozen=True)
class FmtResidual:
    """Residuals per grid radius; ``radii`` are the radii actually integrated on."""

    radii: Tuple[float, ...]
    values: Tuple[float, ...]

    @property
    def spread(self) -> float:
        return max(self.values) - min(self.values)


def fmt_residual(
    f: Curve,
    Q: HomogeneousPoly,
    r_grid: Sequence[float],
    tol: Optional[float] = None,
    threads: Optional[int] = None,
) -> FmtResidual:
    """m + N - d T on each radius; its spread measures how constant the O(1) term is."""
    _check_grid(r_grid, minimum=2)
    zeros = zero_set(f, Q, search_radius(r_grid), tol)
    radii = tuple(usable_radius([zeros], r) for r in r_grid)

    def value(r: float) -> float:
        m = proximity(f, Q, r, tol, zeros)
        return m + zeros.counting(r) - Q.degree * characteristic(f, r, tol)

    with ThreadPoolExecutor(max_workers=threads or settings.THREADS) as executor:
        values = tuple(executor.map(value, radii))
    result = FmtResidual(radii, values)
    logger.info(f"first main theorem residual spread {result.spread:.3g} over {len(r_grid)} radii")
    return result


@dataclass(frozen=True)
class TargetValues:
    m: float
    n: int
    n_truncated: int
    N: float
    N_truncated: float
    residual: float


@dataclass(frozen=True)
class NevanlinnaRow:
    """``r`` is the requested grid radius, ``r_used`` the one every column was computed on."""

    r: float
    r_used: float
    T: float
    targets: Tuple[TargetValues, ...]


def nevanlinna_table(
    f: Curve,
    targets: Sequence[HomogeneousPoly],
    r_grid: Sequence[float],
    truncation: Optional[int] = None,
    tol: Optional[float] = None,
    threads: Optional[int] = None,
) -> List[NevanlinnaRow]:
    """One row per radius with T_f and, per target, m, n, n^M, N, N^M and m + N - d T."""
    _check_grid(r_grid)
    _check_truncation(truncation)
    R = search_radius(r_grid)
    zero_sets = [zero_set(f, Q, R, tol) for Q in targets]

    def row(r: float) -> NevanlinnaRow:
        used = usable_radius(zero_sets, r)
        T = characteristic(f, used, tol)
        values = []
        for Q, zeros in zip(targets, zero_sets):
            m = proximity(f, Q, used, tol, zeros)
            profile = zeros.profile(used, truncation)
            values.append(
                TargetValues(
                    m,
                    profile.n,
                    profile.n_truncated,
                    profile.N,
                    profile.N_truncated,
                    m + profile.N - Q.degree * T,
                )
            )
        return NevanlinnaRow(r, used, T, tuple(values))

    with ThreadPoolExecutor(max_workers=threads or settings.THREADS) as executor:
        rows = list(executor.map(row, r_grid))
    logger.info(f"nevanlinna table: {len(rows)} radii x {len(targets)} targets")
    return rows
