"""Numerical check of the linear second main theorem with the Wronskian term.

For a linearly non-degenerate F into P^m and hyperplanes L_j,

    integral of max_K sum_{j in K} log(||F|| ||L_j|| / |L_j(F)|)  +  N_W(r, 0)
        <=  (m+1) T_F(r) + O(1)

where K runs over the linearly independent subsets of the forms. With the max
norm on F and the l1 norm on coefficients every summand is nonnegative, so the
maximum is attained on maximal independent subsets.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .. import schemas
from ..config import settings
from ..exceptions import DegenerateCurveError, DegreeMismatchError, DomainError
from .expressions import Curve, curve_compose, wronskian
from .linalg import rank
from .nevanlinna import characteristic
from .polynomials import HomogeneousPoly, gaussian_to_complex
from .quadrature import real_circle_mean
from .zeros import zero_scan

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


def _vectors(forms: Sequence[HomogeneousPoly]):
    return [{k: c for k, c in enumerate(form.coefficient_vector()) if c} for form in forms]


def independent_subsets(forms: Sequence[HomogeneousPoly]) -> List[Subset]:
    """All nonempty linearly independent subsets, grown size by size (supersets of dependent sets are skipped)."""
    vectors = _vectors(forms)
    length = forms[0].nvars if forms else 0
    layer = [(j,) for j in range(len(forms)) if vectors[j]]
    found = list(layer)
    while layer:
        grown = []
        for subset in layer:
            for j in range(subset[-1] + 1, len(forms)):
                candidate = subset + (j,)
                if rank([vectors[k] for k in candidate], length) == len(candidate):
                    grown.append(candidate)
        found.extend(grown)
        layer = grown
    return found


def maximal_subsets(subsets: Sequence[Subset]) -> List[Subset]:
    sets = [frozenset(s) for s in subsets]
    return [s for s, fs in zip(subsets, sets) if not any(fs < other for other in sets)]


def _check_forms(F: Curve, forms: Sequence[HomogeneousPoly]):
    if not forms:
        raise DomainError("at least one form is required")
    for form in forms:
        if not form.is_linear():
            raise DegreeMismatchError(f"{form.to_text()} is not linear")
        if form.nvars != F.n + 1:
            raise DegreeMismatchError(f"{form.to_text()} is not a form on P^{F.n}")
        if form.is_zero():
            raise DomainError("the zero form is not a hyperplane")
    if len(forms) > settings.THEOREM_R_MAX_FORMS:
        raise DomainError(
            f"{len(forms)} forms exceed the enumeration cap of {settings.THEOREM_R_MAX_FORMS}"
        )


def theorem_r_check(
    F: Curve,
    forms: Sequence[HomogeneousPoly],
    r_grid: Sequence[float],
    tol: Optional[float] = None,
    threads: Optional[int] = None,
) -> schemas.TheoremRReport:
    _check_forms(F, forms)
    if not r_grid or any(r <= 0 for r in r_grid):
        raise DomainError(f"radii must be positive, got {list(r_grid)}")
    m = F.n
    W = wronskian(F.components)
    if W.is_zero():
        raise DegenerateCurveError("the Wronskian of the components vanishes identically")
    if not F.is_polynomial():
        logger.info("transcendental curve: non-degeneracy is taken as a declared assumption")

    subsets = independent_subsets(forms)
    maximal = maximal_subsets(subsets)
    compositions = [curve_compose(L, F) for L in forms]
    norms = np.array(
        [sum(abs(gaussian_to_complex(c)) for c in L.terms.values()) for L in forms]
    )
    W_zeros = zero_scan(W, max(r_grid) * (1 + 2 * settings.ZERO_BAND), tol)
    W_origin = W.order_at(0)

    def integrand(points: np.ndarray) -> np.ndarray:
        log_norm = F.log_norm(points)
        logs = np.stack(
            [
                log_norm + np.log(norms[j]) - np.log(np.abs(g.evaluate(points)))
                for j, g in enumerate(compositions)
            ]
        )
        return np.max(np.stack([logs[list(K)].sum(axis=0) for K in maximal]), axis=0)

    def N_W(r: float) -> float:
        total = W_origin * np.log(r)
        for z in W_zeros.records:
            modulus = abs(z.location)
            if 0 < modulus <= r and not (W_origin and modulus <= z.certified_radius):
                total += z.multiplicity * np.log(r / modulus)
        return float(total)

    def row(r: float) -> schemas.TheoremRRow:
        proximity_max = real_circle_mean(integrand, r, tol)
        n_w = N_W(r)
        rhs = (m + 1) * characteristic(F, r, tol)
        lhs = proximity_max + n_w
        return schemas.TheoremRRow(
            r=r, proximity_max=proximity_max, N_W=n_w, lhs=lhs, rhs=rhs, difference=lhs - rhs
        )

    with ThreadPoolExecutor(max_workers=threads or settings.THREADS) as executor:
        rows = list(executor.map(row, r_grid))
    logger.info(
        f"theorem R check: {len(subsets)} independent subsets ({len(maximal)} maximal), {len(rows)} radii"
    )
    return schemas.TheoremRReport(
        m=m,
        forms=[L.to_text() for L in forms],
        wronskian=W.to_text(),
        independent_subsets=len(subsets),
        maximal_subsets=len(maximal),
        rows=rows,
    )

