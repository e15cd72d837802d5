import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import lcm, log
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError
from sympy import Rational

from .. import schemas
from ..config import settings
from ..exceptions import DegenerateCurveError, DomainError, PreconditionError
from ..models import RowFlag
from .expressions import Curve, wronskian
from .filtration import TruncationReport, to_rational, truncation_report
from .graded import nss_constant, require_general_position
from .nevanlinna import (
    characteristic,
    composition,
    proximity,
    search_radius,
    usable_radius,
    zero_set,
)
from .parser import parse_expr, parse_form
from .polynomials import HomogeneousPoly
from .quadrature import circle_points, real_circle_mean

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    n: int
    curve: Curve
    targets: Tuple[HomogeneousPoly, ...]
    epsilon: Rational
    r_grid: Tuple[float, ...]
    alpha_override: Optional[int] = None
    M_override: Optional[int] = None
    tol: Optional[float] = None
    description: Optional[str] = None

    @property
    def q(self) -> int:
        return len(self.targets)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(Q.degree for Q in self.targets)


def scenario_from_spec(spec: schemas.ScenarioSpec) -> Scenario:
    epsilon = to_rational(spec.epsilon)
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    curve = Curve(spec.n, tuple(parse_expr(text) for text in spec.curve))
    targets = tuple(parse_form(t.form, nvars=spec.n + 1, degree=t.degree) for t in spec.targets)
    return Scenario(
        spec.n,
        curve,
        targets,
        epsilon,
        tuple(spec.r_grid),
        spec.alpha_override,
        spec.M_override,
        spec.tol,
        spec.description,
    )


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    try:
        spec = schemas.ScenarioSpec.model_validate_json(path.read_text())
    except OSError as exc:
        raise PreconditionError(f"cannot read scenario file {path}: {exc.strerror or exc}") from exc
    except ValidationError as exc:
        raise PreconditionError(f"invalid scenario file {path}: {exc}") from exc
    scenario = scenario_from_spec(spec)
    logger.info(f"loaded scenario {path.name}: n={scenario.n}, q={scenario.q}, {len(scenario.r_grid)} radii")
    return scenario


def require_nondegenerate(curve: Curve):
    """Reject curves that cannot be algebraically non-degenerate, or are visibly linearly degenerate."""
    if curve.is_polynomial() and curve.n >= 2:
        raise DegenerateCurveError(
            f"a polynomial curve into P^{curve.n} has an algebraic curve as image and "
            "lies in a proper hypersurface"
        )
    if wronskian(curve.components).is_zero():
        raise DegenerateCurveError("the components are linearly dependent (Wronskian vanishes)")


def _truncation(scenario: Scenario, d: int) -> Tuple[TruncationReport, int]:
    report = truncation_report(scenario.n, d, scenario.epsilon, alpha=scenario.alpha_override)
    if scenario.M_override is not None:
        return report, scenario.M_override
    return report, report.m_exact


def run_smt_scenario(scenario: Scenario, threads: Optional[int] = None) -> schemas.SmtReport:
    """Both sides of the truncated second main theorem on every radius of the grid."""
    n, q = scenario.n, scenario.q
    require_nondegenerate(scenario.curve)
    require_general_position(scenario.targets, n, threads)
    d = lcm(*scenario.degrees)
    report, M = _truncation(scenario, d)
    logger.info(
        f"truncation level M={M} ({'override' if scenario.M_override else 'exact'}), "
        f"alpha={report.alpha} ({report.alpha_mode.value})"
    )
    tol = scenario.tol
    R = max(scenario.r_grid) * (1 + 2 * settings.ZERO_BAND)
    workers = threads or settings.THREADS
    with ThreadPoolExecutor(max_workers=workers) as executor:
        zero_sets = list(executor.map(lambda Q: zero_set(scenario.curve, Q, R, tol), scenario.targets))
    # Q_j^{d/d_j} o f vanishes exactly where Q_j o f does, with multiplicities scaled by d/d_j
    equalized = [zs.power(d // dj) for zs, dj in zip(zero_sets, scenario.degrees)]
    coefficient = float(q - n - 1 - scenario.epsilon)

    def row(r: float) -> schemas.SmtRow:
        T = characteristic(scenario.curve, r, tol)
        counts = [zs.counting(r, M) for zs in zero_sets]
        rhs = sum(N / dj for N, dj in zip(counts, scenario.degrees))
        lhs = coefficient * T
        equalized_rhs = sum(zs.counting(r, M) for zs in equalized) / d
        flags = []
        if rhs - lhs < 0:
            flags.append(RowFlag.NEGATIVE_MARGIN)
        if equalized_rhs > rhs * (1 + 1e-12) + 1e-12:
            flags.append(RowFlag.EQUALIZED_EXCEEDS)
        return schemas.SmtRow(
            r=r,
            T=T,
            N_truncated=counts,
            rhs=rhs,
            lhs=lhs,
            margin=rhs - lhs,
            equalized_rhs=equalized_rhs,
            flags=flags,
        )

    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(row, scenario.r_grid))
    for r in rows:
        if RowFlag.NEGATIVE_MARGIN in r.flags:
            logger.warning(f"negative margin {r.margin:.6g} at r={r.r}")
    meta = schemas.SmtMeta(
        n=n,
        q=q,
        d=d,
        epsilon=str(scenario.epsilon),
        alpha=report.alpha,
        alpha_mode=report.alpha_mode,
        truncation=M,
        truncation_source="override" if scenario.M_override is not None else "exact",
        m_exact=report.m_exact,
        m_closed_form=report.m_closed_form,
        closed_form_exceeded=report.closed_form_exceeded,
        targets=[Q.to_text() for Q in scenario.targets],
        curve=scenario.curve.to_texts(),
    )
    logger.info(f"smt scenario produced {len(rows)} rows")
    return schemas.SmtReport(meta=meta, rows=rows)



Subset = Tuple[int, ...]

# nodes of the pointwise check on each circle
_SAMPLE_NODES = 256


def subset_constants(
    forms: Sequence[HomogeneousPoly], n: int, threads: Optional[int] = None
) -> Dict[Subset, float]:
    """Nullstellensatz constant of every (n+1)-subset of forms of one degree."""
    subsets = list(combinations(range(len(forms)), n + 1))
    with ThreadPoolExecutor(max_workers=threads or settings.THREADS) as executor:
        values = list(executor.map(lambda S: nss_constant([forms[j] for j in S]), subsets))
    return dict(zip(subsets, values))


def proximity_sum_check(scenario: Scenario, threads: Optional[int] = None) -> schemas.ProximitySumReport:
    """``sum_j m_f(r, Q_j) / d_j <= (1/d) * mean of max over n-subsets + (q - n) log(c1) / d``.

    At each point the targets are renumbered so that ``|Q_1 o f| <= ... <= |Q_q o f|``
    (after raising to the common degree d); the first n+1 of them bound ``||f||^d``
    through the constant of that subset, and every later term is at most ``log c1``.
    ``pointwise_slack`` is the least margin of that bound over the circle nodes.
    """
    n, q = scenario.n, scenario.q
    if q < n + 1:
        raise DomainError(f"need at least n+1 = {n + 1} targets, got {q}")
    require_general_position(scenario.targets, n, threads)
    f = scenario.curve
    d = lcm(*scenario.degrees)
    powers = [d // dj for dj in scenario.degrees]
    constants = subset_constants([Q**e for Q, e in zip(scenario.targets, powers)], n, threads)
    c1 = max(constants.values())
    tol = scenario.tol
    compositions = [composition(f, Q) for Q in scenario.targets]
    zero_sets = [zero_set(f, Q, search_radius(scenario.r_grid), tol) for Q in scenario.targets]
    allowance = (q + 1) * (settings.DEFAULT_TOL if tol is None else tol)

    def log_moduli(points: np.ndarray) -> np.ndarray:
        """``log |Q_j^{d/d_j} o f|``, shape ``(q, len(points))``."""
        return np.array([e * np.log(np.abs(g.evaluate(points))) for g, e in zip(compositions, powers)])

    def best_subset_sum(points: np.ndarray) -> np.ndarray:
        terms = d * f.log_norm(points) - log_moduli(points)
        return np.sort(terms, axis=0)[-n:].sum(axis=0)

    def pointwise_slack(r: float) -> float:
        points = circle_points(r, _SAMPLE_NODES)
        norms = d * f.log_norm(points)
        logs = log_moduli(points)
        order = np.argsort(logs, axis=0)
        slack = np.inf
        for k in range(points.size):
            subset = tuple(sorted(int(j) for j in order[: n + 1, k]))
            bound = log(constants[subset]) + logs[order[n, k], k]
            slack = min(slack, bound - norms[k])
        return float(slack)

    def row(r: float) -> schemas.ProximitySumRow:
        used = usable_radius(zero_sets, r)
        lhs = sum(
            proximity(f, Q, used, tol, zs) / Q.degree for Q, zs in zip(scenario.targets, zero_sets)
        )
        integral = real_circle_mean(best_subset_sum, used, tol) / d
        constant = (q - n) * log(c1) / d
        margin = integral + constant - lhs
        slack = pointwise_slack(used)
        return schemas.ProximitySumRow(
            r=r,
            r_used=used,
            proximity_sum=lhs,
            subset_integral=integral,
            constant=constant,
            margin=margin,
            pointwise_slack=slack,
            holds=margin >= -allowance and slack >= -1e-9,
        )

    workers = threads or settings.THREADS
    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(row, scenario.r_grid))
    for r in rows:
        if not r.holds:
            logger.warning(f"proximity sum bound fails at r={r.r}: margin {r.margin:.6g}, slack {r.pointwise_slack:.3g}")
    logger.info(f"proximity sum check: c1={c1:.6g} over {len(constants)} subsets, {len(rows)} radii")
    return schemas.ProximitySumReport(
        n=n,
        q=q,
        d=d,
        targets=[Q.to_text() for Q in scenario.targets],
        c1=c1,
        constants=[schemas.SubsetConstant(subset=list(S), c1=c) for S, c in constants.items()],
        rows=rows,
    )
