"""Regression suites over the algebraic lemmas and the numeric functionals.

Each block is driven by a caps dict (``DEFAULT_CAPS`` when none is given, no
blocks at all for ``{}``); every case becomes one ``LemmaCase`` entry and a
failure never aborts the run.
"""

import logging
from itertools import combinations
from math import comb, prod
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np
from sympy import QQ, Rational, binomial

from .. import schemas
from ..config import settings
from ..exceptions import TruncSmtError
from .expressions import Z, Z_RING, AnalyticExpr, Curve, curve_compose, wronskian
from .filtration import (
    build_filtration,
    choose_alpha,
    epsilon_growth_bound,
    filtration_big_delta,
    growth_factor,
    ratio_bound_check,
)
from .graded import hilbert_quotient, nss_certificate
from .nevanlinna import fmt_residual, zero_set
from .parser import parse_expr, parse_form
from .polynomials import HomogeneousPoly, gaussian, monomial_basis
from .scenarios import Scenario, proximity_sum_check
from .theorem_r import independent_subsets, maximal_subsets
from .wronskian_check import wronskian_order_check
from .zeros import locate_zeros, zero_scan

logger = logging.getLogger(__name__)

Caps = Dict[str, Dict[str, object]]
CaseResult = Tuple[bool, str]
Case = Tuple[str, Callable[[], CaseResult]]

DEFAULT_CAPS: Caps = {
    "lemma1": {"count": 20, "max_n": 3, "max_degree": 3},
    "lemma3": {"n": 2, "d": 3, "alpha": 12},
    "ratio": {"n": 2, "d": 2, "epsilons": ["1/2", "1/4"]},
    "fmt": {"transcendental": True},
    "zeros": {"count": 20, "max_degree": 10, "transcendental": True},
    "wronskian": {"count": 10},
    "nss": {},
    "power_rule": {},
    "poly": {"count": 10, "max_n": 3, "max_degree": 3},
    "theorem_r": {"max_n": 3, "max_q": 6},
    "proximity_sum": {"transcendental": True},
}

# general-position target sets of the shipped scenarios
NSS_TARGETS = [
    (1, ["x0 - x1", "x0 - 2*x1", "x0 - 3*x1", "x0 - 4*x1", "x0 - 5*x1"]),
    (2, ["x0", "x1", "x2", "x0 + x1 + x2"]),
]


# --- lemma 1: Hilbert function of zero-dimensional systems ---
def _triangular_system(rng: np.random.Generator, n: int, degrees) -> List[HomogeneousPoly]:
    """gamma_j = x_j^{d_j} + sum_{k<j} (a x_k^{d_j} + b x_k x_j^{d_j - 1}): monic in x_j, so zero-dimensional."""
    nvars = n + 1
    forms = []
    for j in range(1, n + 1):
        dj = int(degrees[j - 1])
        terms: Dict[Tuple[int, ...], int] = {}

        def add(monomial, coeff):
            terms[monomial] = terms.get(monomial, 0) + int(coeff)

        add(tuple(dj if v == j else 0 for v in range(nvars)), 1)
        for k in range(j):
            add(tuple(dj if v == k else 0 for v in range(nvars)), rng.integers(-3, 4))
            add(
                tuple((dj - 1 if v == j else 0) + (1 if v == k else 0) for v in range(nvars)),
                rng.integers(-3, 4),
            )
        forms.append(HomogeneousPoly.from_terms(nvars, terms, degree=dj))
    return forms


def _lemma1_cases(caps, seed: int) -> Iterator[Case]:
    rng = np.random.default_rng(seed)
    for index in range(int(caps["count"])):
        n = int(rng.integers(1, int(caps["max_n"]) + 1))
        degrees = rng.integers(1, int(caps["max_degree"]) + 1, size=n)
        forms = _triangular_system(rng, n, degrees)

        def case(forms=forms, degrees=degrees):
            expected = int(np.prod(degrees))
            start = int(np.sum(degrees))
            values = [hilbert_quotient(forms, alpha) for alpha in (start, start + 1)]
            return all(v == expected for v in values), f"H({start}), H({start + 1}) = {values}, expected {expected}"

        yield f"system {index}: n={n} degrees={list(map(int, degrees))}", case


# --- lemma 3, Delta arithmetic and the ratio chain ---
def _lemma3_case(n: int, d: int, alpha: int) -> CaseResult:
    gammas = [HomogeneousPoly.monomial(tuple(d if v == j else 0 for v in range(n + 1))) for j in range(1, n + 1)]
    filtration = build_filtration(gammas, alpha)
    M = int(binomial(alpha + n, n))
    problems = []
    stable = [lv for lv in filtration.levels if lv.index.weight <= alpha // d - n]
    if any(lv.delta != d**n for lv in stable):
        problems.append("Delta_(i) != d^n in the stable range")
    if sum(lv.delta for lv in filtration.levels) != M:
        problems.append("sum of Delta_(i) != C(alpha+n, n)")
    for lv in filtration.levels:
        if lv.delta != hilbert_quotient(gammas, alpha - d * lv.index.weight):
            problems.append(f"Delta_{lv.index} differs from the Hilbert function")
            break
    Delta = filtration_big_delta(filtration)
    if alpha > n * d:
        chain = ratio_bound_check(n, d, alpha, Delta, M, n + 2, "1/2")
        if not chain.ratio_holds:
            problems.append(f"M alpha / Delta = {chain.ratio} exceeds {chain.chain_bound}")
    detail = f"{len(filtration.levels)} levels, {len(stable)} stable, Delta={Delta}"
    return not problems, "; ".join([detail] + problems)


def _lemma3_cases(caps, seed: int) -> Iterator[Case]:
    for n in range(1, int(caps["n"]) + 1):
        for d in range(1, int(caps["d"]) + 1):
            for alpha in range(d, int(caps["alpha"]) + 1, d):
                yield f"n={n} d={d} alpha={alpha}", (lambda n=n, d=d, a=alpha: _lemma3_case(n, d, a))


def _ratio_cases(caps, seed: int) -> Iterator[Case]:
    for n in range(1, int(caps["n"]) + 1):
        for d in range(1, int(caps["d"]) + 1):
            for epsilon in caps["epsilons"]:

                def case(n=n, d=d, epsilon=epsilon):
                    alpha = choose_alpha(n, d, epsilon)
                    growth = growth_factor(n, d, alpha)
                    bound = epsilon_growth_bound(n, d, epsilon)
                    return growth <= bound, f"alpha={alpha}: {float(growth):.6f} <= {float(bound):.6f}"

                yield f"n={n} d={d} epsilon={epsilon}", case


# --- first main theorem ---
def _fmt_cases(caps, seed: int) -> Iterator[Case]:
    line = Curve(1, (parse_expr("z"), parse_expr("1")))
    exact = [(line, text, (2.0, 4.0, 8.0, 16.0), 1e-3) for text in ("x0", "x1", "x0 - x1")]
    cases = list(exact)
    if caps.get("transcendental", True):
        curve = Curve(2, (parse_expr("1"), parse_expr("z"), parse_expr("exp(z)")))
        cases.append((curve, "x0 + x1 + x2", (4.0, 8.0, 12.0), 0.05))
    for curve, text, grid, bound in cases:

        def case(curve=curve, text=text, grid=grid, bound=bound):
            Q = parse_form(text, nvars=curve.n + 1)
            spread = fmt_residual(curve, Q, grid).spread
            return spread <= bound, f"spread {spread:.3g} (bound {bound})"

        yield f"f=({':'.join(curve.to_texts())}) Q={text}", case


# --- zero counter ---
def _random_polynomial(rng: np.random.Generator, max_degree: int):
    roots: List[Tuple[int, int, int]] = []
    multiplicities: List[int] = []
    degree = 0
    target = int(rng.integers(1, max_degree + 1))
    while degree < target:
        root = (int(rng.integers(-6, 7)), int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
        value = complex(root[0], root[1]) / root[2]
        if any(abs(value - complex(a, b) / c) < 1e-12 for a, b, c in roots):
            continue
        m = int(min(rng.integers(1, 4), target - degree))
        roots.append(root)
        multiplicities.append(m)
        degree += m
    g = Z_RING.one
    for (a, b, c), m in zip(roots, multiplicities):
        g = g * (Z - gaussian(QQ(a, c), QQ(b, c))) ** m
    return AnalyticExpr.from_poly(g), [complex(a, b) / c for a, b, c in roots], multiplicities


def _zero_cases(caps, seed: int) -> Iterator[Case]:
    rng = np.random.default_rng(seed + 1)
    for index in range(int(caps["count"])):
        g, roots, multiplicities = _random_polynomial(rng, int(caps["max_degree"]))

        def case(g=g, roots=roots, multiplicities=multiplicities):
            R = max(abs(z) for z in roots) + 1.0
            records = locate_zeros(g, R)
            if sorted(r.multiplicity for r in records) != sorted(multiplicities):
                return False, f"multiplicities {[r.multiplicity for r in records]} vs {multiplicities}"
            for z, m in zip(roots, multiplicities):
                if not any(abs(r.location - z) < 1e-8 and r.multiplicity == m for r in records):
                    return False, f"zero {z} (mult {m}) not located within 1e-8"
            return True, f"degree {sum(multiplicities)}, {len(roots)} distinct zeros"

        yield f"polynomial {index}", case
    if caps.get("transcendental", True):

        def transcendental():
            scan = zero_scan(parse_expr("1 + z + exp(z)"), 3.0)
            real = [r for r in scan.records if abs(r.location - complex(-1.2785, 0)) < 1e-3]
            ok = len(real) == 1 and real[0].multiplicity == 1 and scan.total == scan.winding
            return ok, f"{len(scan.records)} zeros, winding {scan.winding}"

        yield "1 + z + exp(z) on R=3", transcendental


# --- Wronskian vanishing order ---
WRONSKIAN_INSTANCES = [
    ("x1", 1, ("1", "z^5")),
    ("x1", 2, ("1", "z^5")),
    ("x1", 3, ("1", "z^7")),
    ("x1", 4, ("1", "z^8")),
    ("x0", 2, ("(z - 1)^6", "1")),
    ("x0 - x1", 2, ("z^4 + 1", "1")),
    ("x1^2", 2, ("1", "z^3")),
    ("x1^2", 4, ("1", "z^4")),
    ("x1^2 - x0*x1", 2, ("1", "1 + z^4")),
    ("x0^2", 3, ("z^5", "1 + z")),
]


def _wronskian_cases(caps, seed: int) -> Iterator[Case]:
    for gamma_text, alpha, components in WRONSKIAN_INSTANCES[: int(caps["count"])]:

        def case(gamma_text=gamma_text, alpha=alpha, components=components):
            gamma = parse_form(gamma_text, nvars=2)
            curve = Curve(1, tuple(parse_expr(c) for c in components))
            point = 0
            g = curve_compose(gamma, curve)
            if g.value_is_zero_at(gaussian(1)) and not g.value_is_zero_at(gaussian(0)):
                point = 1
            result = wronskian_order_check([gamma], alpha, curve, point)
            return result.holds, f"z={result.point}: observed {result.observed} >= claimed {result.claimed}"

        yield f"gamma={gamma_text} alpha={alpha} f=({':'.join(components)})", case


# --- Nullstellensatz certificates ---
def _nss_cases(caps, seed: int) -> Iterator[Case]:
    for n, texts in NSS_TARGETS:
        forms = [parse_form(t, nvars=n + 1) for t in texts]
        for subset in combinations(range(len(forms)), n + 1):
            for k in range(n + 1):

                def case(subset=subset, k=k, forms=forms):
                    certificate = nss_certificate([forms[j] for j in subset], k)
                    return certificate.verify(), f"x{k}^{certificate.exponent}"

                yield f"{[texts[j] for j in subset]} x{k}", case


# --- power rule ---
POWER_CASES = [
    (("(z - 1)^5", "1"), "x0", 2, 2),
    (("z", "1"), "x0 - x1", 3, 1),
    (("z^2", "z + 1"), "x0 + x1", 2, 2),
]


def _power_rule_cases(caps, seed: int) -> Iterator[Case]:
    for components, text, k, M in POWER_CASES:

        def case(components=components, text=text, k=k, M=M):
            curve = Curve(1, tuple(parse_expr(c) for c in components))
            Q = parse_form(text, nvars=2)
            base = curve_compose(Q, curve)
            power = curve_compose(Q**k, curve)
            points = [gaussian(0), gaussian(1)]
            orders_ok = all(power.order_at(p) == k * base.order_at(p) for p in points)
            base_zeros = zero_set(curve, Q, 4.0)
            power_zeros = zero_set(curve, Q**k, 4.0)
            counts_ok = all(
                power_zeros.counting(r, M) <= k * base_zeros.counting(r, M) + 1e-9
                for r in (2.0, 3.0, 4.0)
            )
            return orders_ok and counts_ok, f"k={k} M={M}"

        yield f"Q={text} k={k} f=({':'.join(components)})", case


# --- exact forms and expressions ---
POLY_COMPONENTS = ("1", "z", "exp(z)", "z^2 + i")
FD_POINTS = (0.3 + 0.2j, -0.5 + 0.1j, 0.7j)


def _random_form(rng: np.random.Generator, nvars: int, degree: int) -> HomogeneousPoly:
    terms = {
        m: gaussian(int(rng.integers(-4, 5)), int(rng.integers(-4, 5)))
        for m in monomial_basis(nvars, degree)
    }
    return HomogeneousPoly.from_terms(nvars, terms, degree=degree)


def _basis_counts(max_nvars: int, max_degree: int) -> CaseResult:
    for nvars in range(1, max_nvars + 1):
        for degree in range(max_degree + 1):
            basis = monomial_basis(nvars, degree)
            if len(basis) != comb(nvars + degree - 1, nvars - 1) or len(set(basis)) != len(basis):
                return False, f"nvars={nvars} degree={degree}: {len(basis)} monomials"
            if any(sum(m) != degree for m in basis):
                return False, f"nvars={nvars} degree={degree}: wrong total degree"
    return True, f"C(n+d, n) for n < {max_nvars}, d <= {max_degree}"


def _product_case(P: HomogeneousPoly, Q: HomogeneousPoly, R: HomogeneousPoly, curve: Curve) -> CaseResult:
    problems = []
    if (P * Q) * R != P * (Q * R):
        problems.append("mul is not associative")
    if P * Q != Q * P:
        problems.append("mul is not commutative")
    if (P * Q).degree != P.degree + Q.degree:
        problems.append("degrees do not add")
    if curve_compose(P * Q, curve) != curve_compose(P, curve) * curve_compose(Q, curve):
        problems.append("composition is not multiplicative")
    g = curve_compose(P * Q, curve)
    points = np.array(FD_POINTS)
    h = 1e-5
    numeric = (g(points + h) - g(points - h)) / (2 * h)
    exact = g.diff()(points)
    error = float(np.max(np.abs(numeric - exact) / (1 + np.abs(exact))))
    if error > 1e-5:
        problems.append(f"derivative differs from central differences by {error:.3g}")
    return not problems, "; ".join(problems) or f"degrees {P.degree}, {Q.degree}, {R.degree}"


def _monomial_wronskian(exponents: List[int]) -> CaseResult:
    """W(z^a_0, ..., z^a_k) = prod_{i<j} (a_j - a_i) * z^{sum a - k(k+1)/2}."""
    k = len(exponents) - 1
    coefficient = prod(b - a for a, b in combinations(exponents, 2))
    power = sum(exponents) - k * (k + 1) // 2
    expected = AnalyticExpr.from_poly(Z_RING(gaussian(coefficient)) * Z**power)
    observed = wronskian([AnalyticExpr.from_poly(Z**a) for a in exponents])
    return observed == expected, f"{coefficient}*z^{power}"


def _poly_cases(caps, seed: int) -> Iterator[Case]:
    rng = np.random.default_rng(seed + 2)
    max_n, max_degree = int(caps["max_n"]), int(caps["max_degree"])
    yield "monomial basis counts", (lambda: _basis_counts(max_n + 1, max_degree))
    for index in range(int(caps["count"])):
        n = int(rng.integers(1, max_n + 1))
        P, Q, R = (_random_form(rng, n + 1, int(rng.integers(0, max_degree + 1))) for _ in range(3))
        curve = Curve(n, tuple(parse_expr(c) for c in POLY_COMPONENTS[: n + 1]))
        yield f"products {index}: n={n}", (lambda P=P, Q=Q, R=R, curve=curve: _product_case(P, Q, R, curve))
    for size in range(2, max_n + 3):
        exponents = sorted(int(a) for a in rng.choice(9, size=size, replace=False))
        yield f"wronskian of z^{exponents}", (lambda exponents=exponents: _monomial_wronskian(exponents))


# --- independent subsets of hyperplanes ---
def _moment_forms(n: int, q: int) -> List[HomogeneousPoly]:
    """L_t = sum_k t^k x_k for t = 1..q; any n+1 of them are independent."""
    return [
        HomogeneousPoly.from_terms(n + 1, {tuple(int(v == k) for v in range(n + 1)): t**k for k in range(n + 1)}, degree=1)
        for t in range(1, q + 1)
    ]


def _subset_count_case(n: int, q: int) -> CaseResult:
    forms = _moment_forms(n, q)
    subsets = independent_subsets(forms)
    maximal = maximal_subsets(subsets)
    problems = []
    if len(maximal) != comb(q, n + 1) or any(len(s) != n + 1 for s in maximal):
        problems.append(f"{len(maximal)} maximal subsets, expected C({q}, {n + 1}) = {comb(q, n + 1)}")
    if len(subsets) != sum(comb(q, s) for s in range(1, n + 2)):
        problems.append(f"{len(subsets)} independent subsets")
    # a repeated form removes the subsets holding both copies
    repeated = maximal_subsets(independent_subsets(forms + forms[:1]))
    expected = comb(q + 1, n + 1) - comb(q - 1, n - 1)
    if len(repeated) != expected:
        problems.append(f"{len(repeated)} maximal subsets with a repeated form, expected {expected}")
    return not problems, "; ".join(problems) or f"{len(maximal)} maximal of {len(subsets)}"


def _theorem_r_cases(caps, seed: int) -> Iterator[Case]:
    for n in range(1, int(caps["max_n"]) + 1):
        for q in range(n + 1, int(caps["max_q"]) + 1):
            yield f"n={n} q={q}", (lambda n=n, q=q: _subset_count_case(n, q))


# --- summed proximity bound ---
PROXIMITY_SCENARIOS = [
    (("z", "1"), ["x0 - x1", "x0 - 2*x1", "x0 - 3*x1", "x0 - 4*x1", "x0 - 5*x1"], (20.0, 40.0), False),
    (("1", "z"), ["x0", "x1", "x0 - x1", "x0^2 + x1^2"], (2.0, 4.0, 8.0), False),
    (("1", "z", "exp(z)"), ["x0", "x1", "x2", "x0 + x1 + x2"], (5.0, 10.0), True),
]


def _proximity_sum_cases(caps, seed: int) -> Iterator[Case]:
    for components, texts, grid, transcendental in PROXIMITY_SCENARIOS:
        if transcendental and not caps.get("transcendental", True):
            continue
        n = len(components) - 1

        def case(components=components, texts=texts, grid=grid, n=n):
            curve = Curve(n, tuple(parse_expr(c) for c in components))
            targets = tuple(parse_form(t, nvars=n + 1) for t in texts)
            report = proximity_sum_check(Scenario(n, curve, targets, Rational(1, 2), grid))
            worst = min(row.margin for row in report.rows)
            return all(row.holds for row in report.rows), f"c1={report.c1:.6g}, least margin {worst:.6g}"

        yield f"f=({':'.join(components)}) q={len(texts)}", case


BLOCKS: Dict[str, Callable[[Dict[str, object], int], Iterator[Case]]] = {
    "lemma1": _lemma1_cases,
    "lemma3": _lemma3_cases,
    "ratio": _ratio_cases,
    "fmt": _fmt_cases,
    "zeros": _zero_cases,
    "wronskian": _wronskian_cases,
    "nss": _nss_cases,
    "power_rule": _power_rule_cases,
    "poly": _poly_cases,
    "theorem_r": _theorem_r_cases,
    "proximity_sum": _proximity_sum_cases,
}


def lemma_suite(caps: Optional[Caps] = None, seed: Optional[int] = None) -> schemas.LemmaSummary:
    caps = DEFAULT_CAPS if caps is None else caps
    seed = settings.SEED if seed is None else seed
    summary = schemas.LemmaSummary()
    for block, options in caps.items():
        if block not in BLOCKS:
            logger.warning(f"unknown lemma block {block!r} skipped")
            continue
        merged = {**DEFAULT_CAPS[block], **(options or {})}
        for name, run in BLOCKS[block](merged, seed):
            try:
                passed, detail = run()
            except TruncSmtError as exc:
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            summary.cases.append(schemas.LemmaCase(block=block, case=name, passed=bool(passed), detail=detail))
    for block, cases in summary.by_block().items():
        logger.info(f"lemma block {block}: {sum(c.passed for c in cases)} of {len(cases)} passed")
    if summary.all_passed:
        logger.info(f"lemma suite: all {summary.passed} cases passed")
    else:
        logger.warning(f"lemma suite: {summary.passed} passed, {summary.failed} failed")
    return summary
