"""The filtration W_(i) of V_alpha by products of n forms, its adapted basis and
the truncation-level arithmetic built on top of it."""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Rational, binomial, ceiling, factorial

from ..exceptions import ArityError, DomainError, InternalInvariantError
from ..models import AlphaMode
from .graded import coordinate_index, is_zero_dimensional, shifted_vector
from .linalg import independent_columns, rank
from .polynomials import HomogeneousPoly, Monomial, common_degree, monomial_basis

logger = logging.getLogger(__name__)

RationalLike = Union[Rational, int, str, float]


@dataclass(frozen=True, order=True)
class MultiIndex:
    entries: Tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"


def enumerate_tuples(n: int, bound: int) -> List[MultiIndex]:
    """All n-tuples of weight <= bound, ascending in lexicographic order."""
    if n < 1 or bound < 0:
        raise ArityError(f"enumerate_tuples needs n >= 1 and bound >= 0, got ({n}, {bound})")
    return [
        MultiIndex(entries)
        for entries in cartesian(range(bound + 1), repeat=n)
        if sum(entries) <= bound
    ]


@dataclass(frozen=True)
class FiltrationLevel:
    index: MultiIndex
    dim: int
    delta: int


@dataclass(frozen=True)
class CZBasisElement:
    index: MultiIndex
    eta: Monomial
    psi: HomogeneousPoly


@dataclass(frozen=True)
class Filtration:
    gammas: Tuple[HomogeneousPoly, ...]
    alpha: int
    d: int
    levels: Tuple[FiltrationLevel, ...]  # ascending lexicographic order
    basis: Tuple[CZBasisElement, ...]  # construction order, last level first
    _by_index: Dict[MultiIndex, FiltrationLevel] = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.gammas)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def level(self, i: MultiIndex) -> FiltrationLevel:
        return self._by_index[i]

    def delta_map(self) -> Dict[MultiIndex, int]:
        return {level.index: level.delta for level in self.levels}


def _coerce_index(i: Union[MultiIndex, Sequence[int]]) -> MultiIndex:
    return i if isinstance(i, MultiIndex) else MultiIndex(tuple(i))


def _validate(gammas: Sequence[HomogeneousPoly], alpha: int, check: bool) -> int:
    if not gammas:
        raise ArityError("the filtration needs n >= 1 forms")
    nvars = gammas[0].nvars
    if len(gammas) != nvars - 1:
        raise ArityError(f"expected n = {nvars - 1} forms in {nvars} variables, got {len(gammas)}")
    d = common_degree(gammas)
    if d < 1:
        raise DomainError("forms of degree 0 do not define a filtration")
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    if check and not is_zero_dimensional(gammas):
        raise DomainError("the forms do not define a zero-dimensional subvariety")
    return d


def build_filtration(
    gammas: Sequence[HomogeneousPoly], alpha: int, check: bool = True
) -> Filtration:
    """One descending sweep over the levels.

    W_(i) = W_(i') + gamma^i V_{alpha - d sigma(i)}; the greedy extension of the
    running basis by the candidates gamma^i * eta (eta in graded-lex order)
    yields both the quotient dimension and the adapted basis.
    """
    gammas = tuple(gammas)
    d = _validate(gammas, alpha, check)
    n = len(gammas)
    nvars = n + 1
    index = coordinate_index(nvars, alpha)
    length = len(index)

    @lru_cache(maxsize=None)
    def gamma_power(entries: Tuple[int, ...]) -> HomogeneousPoly:
        if not any(entries):
            return HomogeneousPoly.monomial((0,) * nvars)
        j = max(k for k, e in enumerate(entries) if e)
        lowered = entries[:j] + (entries[j] - 1,) + entries[j + 1:]
        return gamma_power(lowered) * gammas[j]

    ascending = enumerate_tuples(n, alpha // d)
    vectors: List[dict] = []
    elements: List[CZBasisElement] = []
    dims: Dict[MultiIndex, int] = {}
    deltas: Dict[MultiIndex, int] = {}
    for i in reversed(ascending):
        power = gamma_power(i.entries)
        etas = monomial_basis(nvars, alpha - d * i.weight)
        candidates = [shifted_vector(power, eta, index) for eta in etas]
        pivots = independent_columns(vectors + candidates, length)
        if pivots[: len(vectors)] != list(range(len(vectors))):
            raise InternalInvariantError(f"running basis lost independence at level {i}")
        fresh = [p - len(vectors) for p in pivots if p >= len(vectors)]
        for k in fresh:
            eta = etas[k]
            elements.append(CZBasisElement(i, eta, power * HomogeneousPoly.monomial(eta)))
            vectors.append(candidates[k])
        dims[i] = len(vectors)
        deltas[i] = len(fresh)
    levels = tuple(FiltrationLevel(i, dims[i], deltas[i]) for i in ascending)
    logger.info(
        f"filtration n={n} d={d} alpha={alpha}: {len(levels)} levels, dim V_alpha={len(vectors)}"
    )
    return Filtration(gammas, alpha, d, levels, tuple(elements), {lv.index: lv for lv in levels})


def filtration_dim(
    gammas: Sequence[HomogeneousPoly], alpha: int, i: Union[MultiIndex, Sequence[int]]
) -> int:
    i = _coerce_index(i)
    d = common_degree(gammas)
    if len(i) != len(gammas):
        raise ArityError(f"multi-index {i} has {len(i)} entries, expected {len(gammas)}")
    if d * i.weight > alpha:
        raise DomainError(f"d*sigma(i) = {d * i.weight} exceeds alpha = {alpha}")
    return build_filtration(gammas, alpha).level(i).dim


def delta_map(gammas: Sequence[HomogeneousPoly], alpha: int) -> Dict[MultiIndex, int]:
    return build_filtration(gammas, alpha).delta_map()


def cz_basis(gammas: Sequence[HomogeneousPoly], alpha: int) -> List[CZBasisElement]:
    """The basis psi_1..psi_M of V_alpha adapted to the filtration."""
    n = len(gammas)
    d = common_degree(gammas)
    if alpha < n * d:
        raise DomainError(f"alpha = {alpha} must be at least n*d = {n * d}")
    return verified_basis(build_filtration(gammas, alpha))


def verified_basis(filtration: Filtration) -> List[CZBasisElement]:
    """The adapted basis, after an exact rank check against C(alpha+n, n)."""
    n, alpha = filtration.n, filtration.alpha
    elements = list(filtration.basis)
    M = int(binomial(alpha + n, n))
    index = coordinate_index(n + 1, alpha)
    vectors = [
        {index[m]: c for m, c in element.psi.terms.items()} for element in elements
    ]
    if len(elements) != M or rank(vectors, len(index)) != M:
        raise InternalInvariantError(f"adapted basis has rank below M = {M}")
    return elements


def coordinate_deltas(filtration: Filtration) -> List[int]:
    """``sum_i Delta_(i) * i_j`` for each coordinate j."""
    return [
        sum(level.delta * level.index.entries[j] for level in filtration.levels)
        for j in range(filtration.n)
    ]


def delta_lower_bound(n: int, d: int, alpha: int) -> Rational:
    """alpha (alpha - d) ... (alpha - n d) / (d (n+1)!)."""
    numerator = 1
    for k in range(n + 1):
        numerator *= alpha - k * d
    return Rational(numerator, d * factorial(n + 1))


def big_delta(gammas: Sequence[HomogeneousPoly], alpha: int) -> int:
    filtration = build_filtration(gammas, alpha)
    return filtration_big_delta(filtration)


def filtration_big_delta(filtration: Filtration) -> int:
    sums = coordinate_deltas(filtration)
    if len(set(sums)) != 1:
        raise InternalInvariantError(f"Delta is not coordinate-symmetric: {sums}")
    value = sums[0]
    n, d, alpha = filtration.n, filtration.d, filtration.alpha
    if alpha % d == 0 and alpha > n * d and value < delta_lower_bound(n, d, alpha):
        raise InternalInvariantError(
            f"Delta = {value} is below the closed-form bound {delta_lower_bound(n, d, alpha)}"
        )
    return value


def to_rational(value: RationalLike) -> Rational:
    try:
        return Rational(str(value)) if isinstance(value, (str, float)) else Rational(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not a rational number: {value!r}") from exc


def _check_epsilon(epsilon: Rational):
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")


def choose_alpha(n: int, d: int, epsilon: RationalLike) -> int:
    """alpha = d * ceil(2(n+1)(nd+n)(2^n-1)/epsilon) + 3nd."""
    epsilon = to_rational(epsilon)
    _check_epsilon(epsilon)
    if n < 1 or d < 1:
        raise DomainError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    inner = ceiling(Rational(2 * (n + 1) * (n * d + n) * (2**n - 1)) / epsilon)
    return int(d * inner + 3 * n * d)


def closed_form_truncation(n: int, d: int, epsilon: RationalLike) -> int:
    """2d * ceil(2^n (n+1) n (d+1) / epsilon)^n."""
    epsilon = to_rational(epsilon)
    _check_epsilon(epsilon)
    return int(2 * d * ceiling(Rational(2**n * (n + 1) * n * (d + 1)) / epsilon) ** n)


@dataclass(frozen=True)
class TruncationReport:
    n: int
    d: int
    epsilon: Rational
    alpha: int
    alpha_mode: AlphaMode
    m_exact: int
    m_closed_form: int
    delta_lower: Rational
    delta: Optional[int] = None
    ratio: Optional[Rational] = None

    @property
    def closed_form_exceeded(self) -> bool:
        return self.m_exact > self.m_closed_form


def truncation_report(
    n: int,
    d: int,
    epsilon: RationalLike,
    gammas: Optional[Sequence[HomogeneousPoly]] = None,
    alpha: Optional[int] = None,
) -> TruncationReport:
    """Both truncation levels for (n, d, epsilon); exact Delta when forms are supplied.

    ``alpha`` overrides the epsilon-driven choice (reported as such).
    """
    epsilon = to_rational(epsilon)
    mode = AlphaMode.EPSILON
    if alpha is None:
        alpha = choose_alpha(n, d, epsilon)
    else:
        _check_epsilon(epsilon)
        mode = AlphaMode.OVERRIDE
        if alpha <= n * d:
            raise DomainError(f"alpha = {alpha} must exceed n*d = {n * d}")
    m_exact = int(binomial(alpha + n, n))
    m_closed = closed_form_truncation(n, d, epsilon)
    delta = ratio = None
    if gammas is not None:
        if len(gammas) != n or common_degree(gammas) != d:
            raise ArityError(f"expected {n} forms of degree {d}")
        delta = big_delta(gammas, alpha)
        ratio = Rational(m_exact * alpha, delta)
    report = TruncationReport(
        n, d, epsilon, alpha, mode, m_exact, m_closed, delta_lower_bound(n, d, alpha), delta, ratio
    )
    if report.closed_form_exceeded:
        logger.warning(
            f"C(alpha+n, n) = {m_exact} exceeds the closed-form level {m_closed} "
            f"at n={n}, d={d}, epsilon={epsilon}"
        )
    return report


@dataclass(frozen=True)
class RatioReport:
    ratio: Rational
    chain_bound: Rational
    ratio_holds: bool
    growth: Rational
    epsilon_bound: Rational
    growth_holds: bool
    lhs_coefficient: Rational
    rhs_coefficient: Rational
    coefficient_holds: bool
    epsilon_alpha: bool


def growth_factor(n: int, d: int, alpha: int) -> Rational:
    """((alpha + n) / (alpha - n d))^n."""
    if alpha <= n * d:
        raise DomainError(f"alpha = {alpha} must exceed n*d = {n * d}")
    return Rational(alpha + n, alpha - n * d) ** n


def epsilon_growth_bound(n: int, d: int, epsilon: RationalLike) -> Rational:
    return 1 + to_rational(epsilon) / (2 * d * (n + 1))


def ratio_bound_check(
    n: int, d: int, alpha: int, Delta: int, M: int, q: int, epsilon: RationalLike
) -> RatioReport:
    """M alpha/Delta <= d(n+1)((alpha+n)/(alpha-nd))^n and the epsilon consequences.

    The epsilon inequalities are only guaranteed for alpha = choose_alpha(n, d, epsilon);
    ``epsilon_alpha`` records whether that is the case.
    """
    epsilon = to_rational(epsilon)
    if alpha <= n * d:
        raise DomainError(f"alpha = {alpha} must exceed n*d = {n * d}")
    if alpha % d:
        raise DomainError(f"alpha = {alpha} must be divisible by d = {d}")
    ratio = Rational(M * alpha, Delta)
    growth = growth_factor(n, d, alpha)
    chain_bound = d * (n + 1) * growth
    epsilon_bound = epsilon_growth_bound(n, d, epsilon)
    lhs = q * d - ratio
    rhs = d * (q - n - 1 - epsilon / 2)
    try:
        epsilon_alpha = alpha == choose_alpha(n, d, epsilon)
    except DomainError:
        epsilon_alpha = False
    return RatioReport(
        ratio,
        chain_bound,
        bool(ratio <= chain_bound),
        growth,
        epsilon_bound,
        bool(growth <= epsilon_bound),
        lhs,
        rhs,
        bool(lhs >= rhs),
        epsilon_alpha,
    )
