"""Exp-polynomials in one complex variable.

Every ``AnalyticExpr`` is kept flattened as ``sum_k c_k(z) * exp(p_k(z))`` with
exact Gaussian-rational polynomials ``c_k`` and pairwise distinct exponents
``p_k``. The class is closed under +, *, integer powers and d/dz.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from sympy import QQ_I, Symbol, lex
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, ring

from ..exceptions import ArityError, DegenerateCurveError, DegreeMismatchError
from .polynomials import (
    ComplexRational,
    HomogeneousPoly,
    Scalar,
    format_gaussian,
    gaussian_to_complex,
    to_gaussian,
)

logger = logging.getLogger(__name__)

Z_RING, Z = ring("z", QQ_I, lex)
Z_SYMBOL = Symbol("z")

# orders above this are treated as a runaway loop, not a real vanishing order
_MAX_ORDER = 100_000


def _poly_text(p: PolyElement) -> str:
    if not p:
        return "0"
    pieces = []
    for (k,), c in sorted(p.items(), reverse=True):
        power = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        if not power:
            pieces.append(format_gaussian(c))
        elif c == QQ_I.one:
            pieces.append(power)
        else:
            pieces.append(f"{format_gaussian(c)}*{power}")
    return " + ".join(pieces)


def _dense(p: PolyElement) -> np.ndarray:
    """Ascending complex coefficients for numpy's polyval."""
    if not p:
        return np.zeros(1, dtype=complex)
    coeffs = np.zeros(p.degree() + 1, dtype=complex)
    for (k,), c in p.items():
        coeffs[k] = gaussian_to_complex(c)
    return coeffs


@dataclass(frozen=True, eq=False)
class AnalyticExpr:
    terms: Dict[PolyElement, PolyElement]
    _numeric: Tuple[Tuple[np.ndarray, np.ndarray], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        cleaned = {p: c for p, c in self.terms.items() if c}
        object.__setattr__(self, "terms", cleaned)
        numeric = tuple((_dense(c), _dense(p)) for p, c in cleaned.items())
        object.__setattr__(self, "_numeric", numeric)

    # --- constructors ---
    @classmethod
    def from_poly(cls, p: PolyElement) -> "AnalyticExpr":
        return cls({Z_RING.zero: p})

    @classmethod
    def constant(cls, c: Scalar) -> "AnalyticExpr":
        return cls.from_poly(Z_RING(to_gaussian(c)))

    @classmethod
    def variable(cls) -> "AnalyticExpr":
        return cls.from_poly(Z)

    @classmethod
    def exp(cls, argument: "AnalyticExpr") -> "AnalyticExpr":
        if not argument.is_polynomial():
            raise DegreeMismatchError("exp() takes a polynomial argument in z")
        return cls({argument.as_poly(): Z_RING.one})

    # --- structure ---
    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        return all(not p for p in self.terms)

    def as_poly(self) -> PolyElement:
        if not self.is_polynomial():
            raise DegreeMismatchError("expression contains exponential terms")
        return self.terms.get(Z_RING.zero, Z_RING.zero)

    @property
    def degree_bound(self) -> int:
        """Exact degree for polynomial trees, -1 for the zero expression."""
        if self.is_zero():
            return -1
        return max(c.degree() for c in self.terms.values())

    def single_term(self) -> Tuple[PolyElement, PolyElement]:
        """``(exponent, coefficient)`` when the expression is ``c(z)*exp(p(z))``."""
        if len(self.terms) != 1:
            raise DegreeMismatchError("expression is not a single exponential term")
        return next(iter(self.terms.items()))

    # --- arithmetic ---
    def __add__(self, other) -> "AnalyticExpr":
        other = _coerce(other)
        merged = dict(self.terms)
        for p, c in other.terms.items():
            merged[p] = merged.get(p, Z_RING.zero) + c
        return AnalyticExpr(merged)

    __radd__ = __add__

    def __neg__(self) -> "AnalyticExpr":
        return AnalyticExpr({p: -c for p, c in self.terms.items()})

    def __sub__(self, other) -> "AnalyticExpr":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "AnalyticExpr":
        return _coerce(other) - self

    def __mul__(self, other) -> "AnalyticExpr":
        other = _coerce(other)
        result: Dict[PolyElement, PolyElement] = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                key = p1 + p2
                result[key] = result.get(key, Z_RING.zero) + c1 * c2
        return AnalyticExpr(result)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "AnalyticExpr":
        if k < 0:
            raise DegreeMismatchError("negative powers would introduce poles")
        result, base = AnalyticExpr.constant(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnalyticExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # --- calculus ---
    def diff(self) -> "AnalyticExpr":
        """d/dz (c e^p) = (c' + c p') e^p."""
        return AnalyticExpr({p: c.diff(Z) + c * p.diff(Z) for p, c in self.terms.items()})

    def derivatives(self, count: int) -> List["AnalyticExpr"]:
        derivs = [self]
        for _ in range(count - 1):
            derivs.append(derivs[-1].diff())
        return derivs

    def value_is_zero_at(self, z0: ComplexRational) -> bool:
        """Exact test for g(z0) = 0.

        Values e^{a} for distinct algebraic a are linearly independent over the
        algebraic numbers, so the terms are grouped by the exponent value p(z0).
        """
        groups: Dict[ComplexRational, ComplexRational] = {}
        for p, c in self.terms.items():
            key = p(z0)
            groups[key] = groups.get(key, QQ_I.zero) + c(z0)
        return all(not total for total in groups.values())

    def order_at(self, z0: Scalar = 0) -> int:
        """Exact vanishing order at a Gaussian-rational point."""
        if self.is_zero():
            raise DegenerateCurveError("the zero expression has no finite vanishing order")
        z0 = to_gaussian(z0)
        if self.is_polynomial():
            shifted = self.as_poly().compose(Z, Z + z0)
            return min(k for (k,) in shifted.itermonoms())
        g = self
        for order in range(_MAX_ORDER):
            if not g.value_is_zero_at(z0):
                return order
            g = g.diff()
        raise DegenerateCurveError(f"vanishing order at {z0} exceeds {_MAX_ORDER}")

    # --- numerics ---
    def evaluate(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=complex)
        total = np.zeros_like(points)
        for coeffs, exponent in self._numeric:
            value = np.polynomial.polynomial.polyval(points, coeffs)
            if exponent.size > 1 or exponent[0] != 0:
                value = value * np.exp(np.polynomial.polynomial.polyval(points, exponent))
            total = total + value
        return total

    def __call__(self, points) -> np.ndarray:
        return self.evaluate(points)

    # --- printing ---
    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for p in sorted(self.terms, key=_poly_text):
            c = self.terms[p]
            coeff_text = _poly_text(c)
            if not p:
                pieces.append(coeff_text)
            elif c == Z_RING.one:
                pieces.append(f"exp({_poly_text(p)})")
            else:
                pieces.append(f"({coeff_text})*exp({_poly_text(p)})")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"AnalyticExpr({self.to_text()!r})"


def _coerce(value) -> AnalyticExpr:
    if isinstance(value, AnalyticExpr):
        return value
    return AnalyticExpr.constant(value)


def expr_diff(g: AnalyticExpr) -> AnalyticExpr:
    return g.diff()


def _common_factor(polys: Sequence[PolyElement]) -> PolyElement:
    """Euclidean gcd over QQ_I of the nonzero polynomials."""
    common = None
    for p in polys:
        if not p:
            continue
        if common is None:
            common = p
            continue
        a, b = common, p
        while b:
            a, b = b, a.rem(b)
        common = a
    return common


@dataclass(frozen=True)
class Curve:
    """Reduced representation ``(f_0 : ... : f_n)`` of a curve into P^n."""

    n: int
    components: Tuple[AnalyticExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.n + 1:
            raise ArityError(
                f"a curve into P^{self.n} needs {self.n + 1} components, got {len(self.components)}"
            )
        if all(g.is_zero() for g in self.components):
            raise DegenerateCurveError("all components are identically zero")
        if self.is_polynomial():
            common = _common_factor([g.as_poly() for g in self.components])
            if common.degree() > 0:
                raise DegenerateCurveError(
                    f"components share the polynomial factor {_poly_text(common)}; "
                    "the representation is not reduced"
                )

    def is_polynomial(self) -> bool:
        return all(g.is_polynomial() for g in self.components)

    def evaluate(self, points) -> np.ndarray:
        """Component values, shape ``(n+1, len(points))``."""
        return np.stack([g.evaluate(points) for g in self.components])

    def log_norm(self, points) -> np.ndarray:
        """``log max_k |f_k|`` at each point."""
        return np.log(np.max(np.abs(self.evaluate(points)), axis=0))

    def to_texts(self) -> List[str]:
        return [g.to_text() for g in self.components]


def curve_compose(Q: HomogeneousPoly, f: Curve) -> AnalyticExpr:
    """``Q(f_0(z), ..., f_n(z))``."""
    if Q.nvars != f.n + 1:
        raise ArityError(f"form in {Q.nvars} variables cannot be composed with a curve into P^{f.n}")
    powers: Dict[Tuple[int, int], AnalyticExpr] = {}

    def power(k: int, e: int) -> AnalyticExpr:
        if (k, e) not in powers:
            powers[(k, e)] = f.components[k] ** e
        return powers[(k, e)]

    result = AnalyticExpr({})
    for monom, coeff in Q.terms.items():
        term = AnalyticExpr.constant(coeff)
        for k, e in enumerate(monom):
            if e:
                term = term * power(k, e)
        result = result + term
    return result


def _laplace_det(rows: Sequence[Sequence[AnalyticExpr]]) -> AnalyticExpr:
    """Exact determinant by first-row expansion memoised on column subsets."""
    m = len(rows)
    memo: Dict[int, AnalyticExpr] = {0: AnalyticExpr.constant(1)}

    def minor(mask: int) -> AnalyticExpr:
        if mask in memo:
            return memo[mask]
        row = m - bin(mask).count("1")
        total = AnalyticExpr({})
        position = 0
        for j in range(m):
            if mask >> j & 1:
                entry = rows[row][j]
                if not entry.is_zero():
                    term = entry * minor(mask & ~(1 << j))
                    total = total + (term if position % 2 == 0 else -term)
                position += 1
        memo[mask] = total
        return total

    return minor((1 << m) - 1)


def wronskian(gs: Sequence[AnalyticExpr]) -> AnalyticExpr:
    """det[g_j^{(k)}]_{k,j}; fraction-free Bareiss over QQ_I[z] for polynomial input."""
    m = len(gs)
    if m < 1:
        raise ArityError("the Wronskian needs at least one function")
    columns = [g.derivatives(m) for g in gs]
    rows = [[columns[j][k] for j in range(m)] for k in range(m)]
    if all(g.is_polynomial() for g in gs):
        domain = Z_RING.to_domain()
        matrix = DomainMatrix([[entry.as_poly() for entry in row] for row in rows], (m, m), domain)
        return AnalyticExpr.from_poly(matrix.det())
    return _laplace_det(rows)
