"""Graded pieces of ideals generated by forms.

Everything is an exact rank computation inside ``V_alpha`` with the coordinates
``monomial_basis(n+1, alpha)``.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb, prod
from typing import Dict, Optional, Sequence, Tuple

from ..config import settings
from ..exceptions import ArityError, GeneralPositionError, InternalInvariantError
from .linalg import SparseVector, nullspace_vector, rank, solve
from .polynomials import (
    HomogeneousPoly,
    Monomial,
    common_degree,
    format_gaussian,
    gaussian,
    gaussian_to_complex,
    monomial_basis,
)

logger = logging.getLogger(__name__)


def coordinate_index(nvars: int, alpha: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(nvars, alpha))}


def shifted_vector(
    form: HomogeneousPoly, eta: Monomial, index: Dict[Monomial, int]
) -> SparseVector:
    """Coordinates of ``form * x^eta`` in ``V_alpha``."""
    return {
        index[tuple(a + b for a, b in zip(monom, eta))]: coeff
        for monom, coeff in form.terms.items()
    }


@dataclass(frozen=True)
class GradedPieceBasis:
    """A spanning set of a subspace of ``V_alpha`` in monomial coordinates."""

    nvars: int
    degree: int
    vectors: Tuple[SparseVector, ...]

    @property
    def length(self) -> int:
        return comb(self.degree + self.nvars - 1, self.nvars - 1)

    @cached_property
    def rank(self) -> int:
        return rank(self.vectors, self.length)


def ideal_piece(gammas: Sequence[HomogeneousPoly], alpha: int) -> GradedPieceBasis:
    """Spanning set ``{gamma_j * m : deg m = alpha - deg gamma_j}`` of ``(gammas) ∩ V_alpha``."""
    if not gammas:
        raise ArityError("at least one form is needed")
    nvars = gammas[0].nvars
    if any(g.nvars != nvars for g in gammas):
        raise ArityError("all forms must live in the same variables")
    if alpha < 0:
        raise ArityError(f"alpha must be nonnegative, got {alpha}")
    index = coordinate_index(nvars, alpha)
    vectors = []
    for gamma in gammas:
        if gamma.degree > alpha or gamma.is_zero():
            continue
        for eta in monomial_basis(nvars, alpha - gamma.degree):
            vectors.append(shifted_vector(gamma, eta, index))
    return GradedPieceBasis(nvars, alpha, tuple(vectors))


def ideal_graded_dim(gammas: Sequence[HomogeneousPoly], alpha: int) -> int:
    return ideal_piece(gammas, alpha).rank


def hilbert_quotient(gammas: Sequence[HomogeneousPoly], alpha: int) -> int:
    """``dim V_alpha / ((gammas) ∩ V_alpha)``."""
    piece = ideal_piece(gammas, alpha)
    return piece.length - piece.rank


def is_zero_dimensional(gammas: Sequence[HomogeneousPoly]) -> bool:
    """n forms in n+1 variables cut out a finite set, tested on two stabilised Hilbert values."""
    if not gammas or len(gammas) != gammas[0].nvars - 1:
        count = len(gammas)
        raise ArityError(f"expected n forms in n+1 variables, got {count}")
    if any(g.is_zero() for g in gammas):
        return False
    expected = prod(g.degree for g in gammas)
    start = sum(g.degree for g in gammas)
    return all(hilbert_quotient(gammas, alpha) == expected for alpha in (start, start + 1))


def macaulay_degree(forms: Sequence[HomogeneousPoly]) -> int:
    return sum(f.degree - 1 for f in forms) + 1


def _subset_is_empty(forms: Sequence[HomogeneousPoly]) -> bool:
    return hilbert_quotient(forms, macaulay_degree(forms)) == 0


def _linear_witness(forms: Sequence[HomogeneousPoly]) -> Optional[Tuple[str, ...]]:
    if not all(f.is_linear() for f in forms):
        return None
    rows = [f.coefficient_vector() for f in forms]
    point = nullspace_vector(rows)
    if point is None:
        return None
    return tuple(format_gaussian(c) for c in point)


def general_position_witness(
    Qs: Sequence[HomogeneousPoly], n: int, threads: Optional[int] = None
) -> Optional[Tuple[Tuple[int, ...], Optional[Tuple[str, ...]]]]:
    """First (n+1)-subset with a common zero, with a point for linear subsets; None if in general position."""
    if len(Qs) <= n:
        raise ArityError(f"general position needs q > n, got q={len(Qs)}, n={n}")
    if any(Q.nvars != n + 1 for Q in Qs):
        raise ArityError(f"all forms must be in {n + 1} variables")
    if any(Q.is_zero() for Q in Qs):
        raise ArityError("general position is undefined for the zero form")
    subsets = list(combinations(range(len(Qs)), n + 1))
    with ThreadPoolExecutor(max_workers=threads or settings.THREADS) as executor:
        empty = list(executor.map(lambda s: _subset_is_empty([Qs[i] for i in s]), subsets))
    for subset, ok in zip(subsets, empty):
        if not ok:
            point = _linear_witness([Qs[i] for i in subset])
            logger.info(f"subset {subset} has a common zero (point {point})")
            return subset, point
    return None


def is_general_position(
    Qs: Sequence[HomogeneousPoly], n: int, threads: Optional[int] = None
) -> bool:
    return general_position_witness(Qs, n, threads) is None


def require_general_position(Qs: Sequence[HomogeneousPoly], n: int, threads: Optional[int] = None):
    witness = general_position_witness(Qs, n, threads)
    if witness is not None:
        subset, point = witness
        names = ", ".join(Qs[i].to_text() for i in subset)
        raise GeneralPositionError(
            f"hypersurfaces not in general position: {{{names}}} share a zero"
            + (f" ({':'.join(point)})" if point else ""),
            subset,
            point,
        )


@dataclass(frozen=True)
class NssCertificate:
    """``x_k^{m_k} = sum_j b_j * Q_j`` with ``deg b_j = m_k - d``."""

    variable: int
    exponent: int
    forms: Tuple[HomogeneousPoly, ...]
    cofactors: Tuple[HomogeneousPoly, ...]

    def expand(self) -> HomogeneousPoly:
        nvars = self.forms[0].nvars
        total = HomogeneousPoly.zero(nvars, self.exponent)
        for b, Q in zip(self.cofactors, self.forms):
            total = total + b * Q
        return total

    def verify(self) -> bool:
        nvars = self.forms[0].nvars
        target = HomogeneousPoly.monomial(
            tuple(self.exponent if j == self.variable else 0 for j in range(nvars))
        )
        return self.expand() == target

    def cofactor_norm(self) -> float:
        """Sum of the l1 coefficient norms of the cofactors."""
        return sum(
            sum(abs(gaussian_to_complex(c)) for c in b.terms.values()) for b in self.cofactors
        )


def nss_certificate(Qs: Sequence[HomogeneousPoly], k: int) -> NssCertificate:
    """Smallest ``m_k >= d`` with ``x_k^{m_k}`` in the ideal of the n+1 forms, with cofactors."""
    if not Qs:
        raise ArityError("no forms given")
    nvars = Qs[0].nvars
    if len(Qs) != nvars:
        raise ArityError(f"expected n+1 = {nvars} forms, got {len(Qs)}")
    if not 0 <= k < nvars:
        raise ArityError(f"variable index {k} out of range")
    d = common_degree(Qs)
    bound = macaulay_degree(Qs)
    for m in range(d, max(d, bound) + 1):
        index = coordinate_index(nvars, m)
        etas = monomial_basis(nvars, m - d)
        columns = [shifted_vector(Q, eta, index) for Q in Qs for eta in etas]
        target_monomial = tuple(m if j == k else 0 for j in range(nvars))
        solution = solve(columns, {index[target_monomial]: gaussian(1)}, len(index))
        if solution is None:
            continue
        cofactors = []
        for j in range(len(Qs)):
            chunk = solution[j * len(etas):(j + 1) * len(etas)]
            cofactors.append(
                HomogeneousPoly.from_terms(nvars, dict(zip(etas, chunk)), degree=m - d)
            )
        certificate = NssCertificate(k, m, tuple(Qs), tuple(cofactors))
        if not certificate.verify():
            raise InternalInvariantError(f"certificate for x{k}^{m} failed to expand")
        logger.info(f"x{k}^{m} lies in the ideal (searched from degree {d})")
        return certificate
    raise GeneralPositionError(
        f"x{k} has no power up to degree {bound} in the ideal: not in general position",
        tuple(range(len(Qs))),
    )


def nss_constant(Qs: Sequence[HomogeneousPoly]) -> float:
    """``c`` with ``||x||^d <= c * max_j |Q_j(x)|`` on C^{n+1}, max norm on x.

    From ``x_k^{m_k} = sum_j b_j Q_j``: ``|x_k|^{m_k} <= sum_j ||b_j||_1 ||x||^{m_k - d} |Q_j(x)|``,
    taken at the largest coordinate.
    """
    return max(nss_certificate(Qs, k).cofactor_norm() for k in range(len(Qs)))
