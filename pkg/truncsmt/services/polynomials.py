"""Exact homogeneous forms over the Gaussian rationals.

Coefficients live in sympy's ``QQ_I`` domain and forms are ``PolyElement``s of a
graded-lex polynomial ring in ``x0, ..., xn``. The wrapper pins the degree so the
zero form of a given degree is still a well-defined element of ``V_alpha``.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from sympy import QQ, QQ_I
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing, ring

from ..exceptions import ArityError, DegreeMismatchError

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Rational = type(QQ(0))
ComplexRational = type(QQ_I(0))
Scalar = Union[int, "Rational", "ComplexRational"]


def gaussian(re: Scalar = 0, im: Scalar = 0) -> ComplexRational:
    """Build an exact Gaussian rational ``re + im*i``."""
    return QQ_I(QQ.convert(re), QQ.convert(im))


def to_gaussian(value: Scalar) -> ComplexRational:
    if isinstance(value, ComplexRational):
        return value
    return gaussian(value, 0)


def format_rational(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_gaussian(c: ComplexRational) -> str:
    """Render a coefficient in the input grammar (``a``, ``bi``, ``(p/q)*i`` or ``(a+bi)``).

    A non-integer imaginary part is parenthesised: ``p/qi`` would read as ``p/(q*i)``.
    """
    re, im = c.x, c.y
    if not im:
        return format_rational(re)
    if im == 1 or im == -1:
        im_text = "i" if im == 1 else "-i"
    elif im.denominator == 1:
        im_text = f"{im.numerator}i"
    else:
        sign = "-" if im < 0 else ""
        im_text = f"{sign}({format_rational(abs(im))})*i"
    if not re:
        return im_text
    sign = "" if im_text.startswith("-") else "+"
    return f"({format_rational(re)}{sign}{im_text})"


def gaussian_to_complex(c: ComplexRational) -> complex:
    return complex(float(c.x), float(c.y))


@lru_cache(maxsize=None)
def form_ring(nvars: int) -> PolyRing:
    if nvars < 1:
        raise ArityError(f"a form needs at least one variable, got nvars={nvars}")
    names = ",".join(f"x{k}" for k in range(nvars))
    return ring(names, QQ_I, grlex)[0]


@lru_cache(maxsize=None)
def monomial_basis(nvars: int, deg: int) -> Tuple[Monomial, ...]:
    """All exponent vectors of total degree ``deg`` in graded-lex order, largest first."""
    if nvars < 1 or deg < 0:
        raise ArityError(f"monomial_basis needs nvars >= 1 and deg >= 0, got ({nvars}, {deg})")
    exponents = []
    # stars and bars: choose the nvars-1 bar positions among deg+nvars-1 slots
    for bars in combinations(range(deg + nvars - 1), nvars - 1):
        previous = -1
        exps = []
        for bar in bars:
            exps.append(bar - previous - 1)
            previous = bar
        exps.append(deg + nvars - 1 - previous - 1)
        exponents.append(tuple(exps))
    return tuple(sorted(exponents, key=grlex, reverse=True))


@dataclass(frozen=True, eq=False)
class HomogeneousPoly:
    nvars: int
    degree: int
    element: PolyElement

    def __post_init__(self):
        if self.element.ring != form_ring(self.nvars):
            raise ArityError("polynomial element belongs to a different ring")
        for monom in self.element.itermonoms():
            if sum(monom) != self.degree:
                raise DegreeMismatchError(
                    f"monomial {monom} has degree {sum(monom)}, form declared degree {self.degree}"
                )

    # --- constructors ---
    @classmethod
    def from_element(cls, element: PolyElement, degree: int = None) -> "HomogeneousPoly":
        nvars = element.ring.ngens
        if degree is None:
            if not element:
                raise DegreeMismatchError("the zero form needs an explicit degree")
            degree = sum(next(iter(element.itermonoms())))
        return cls(nvars, degree, element)

    @classmethod
    def from_terms(
        cls, nvars: int, terms: Mapping[Monomial, Scalar], degree: int = None
    ) -> "HomogeneousPoly":
        R = form_ring(nvars)
        element = R.from_dict({tuple(m): to_gaussian(c) for m, c in terms.items() if c})
        return cls.from_element(element, degree)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: Scalar = 1) -> "HomogeneousPoly":
        return cls.from_terms(len(exponents), {tuple(exponents): coeff}, sum(exponents))

    @classmethod
    def variable(cls, nvars: int, k: int) -> "HomogeneousPoly":
        if not 0 <= k < nvars:
            raise ArityError(f"variable x{k} does not exist in {nvars} variables")
        return cls.monomial(tuple(int(j == k) for j in range(nvars)))

    @classmethod
    def zero(cls, nvars: int, degree: int) -> "HomogeneousPoly":
        return cls(nvars, degree, form_ring(nvars).zero)

    # --- views ---
    @property
    def terms(self) -> Dict[Monomial, ComplexRational]:
        return dict(self.element.items())

    def is_zero(self) -> bool:
        return not self.element

    def coefficient(self, monom: Monomial) -> ComplexRational:
        return self.element.get(tuple(monom), QQ_I.zero)

    def coefficient_vector(self) -> Tuple[ComplexRational, ...]:
        """Coordinates in ``monomial_basis(nvars, degree)``."""
        return tuple(self.coefficient(m) for m in monomial_basis(self.nvars, self.degree))

    def is_linear(self) -> bool:
        return self.degree == 1

    # --- arithmetic ---
    def _check_ring(self, other: "HomogeneousPoly"):
        if self.nvars != other.nvars:
            raise ArityError(f"forms in {self.nvars} and {other.nvars} variables do not mix")

    def __add__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        self._check_ring(other)
        if self.degree != other.degree:
            raise DegreeMismatchError(
                f"cannot add forms of degree {self.degree} and {other.degree}"
            )
        return HomogeneousPoly(self.nvars, self.degree, self.element + other.element)

    def __neg__(self) -> "HomogeneousPoly":
        return HomogeneousPoly(self.nvars, self.degree, -self.element)

    def __sub__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        return self + (-other)

    def __mul__(self, other) -> "HomogeneousPoly":
        if isinstance(other, HomogeneousPoly):
            self._check_ring(other)
            return HomogeneousPoly(
                self.nvars, self.degree + other.degree, self.element * other.element
            )
        return HomogeneousPoly(self.nvars, self.degree, self.element * to_gaussian(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomogeneousPoly":
        if k < 0:
            raise DegreeMismatchError("negative powers leave the polynomial ring")
        return HomogeneousPoly(self.nvars, self.degree * k, self.element**k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.degree == other.degree
            and self.element == other.element
        )

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.element.items())))

    def evaluate(self, point: Sequence[Scalar]) -> ComplexRational:
        if len(point) != self.nvars:
            raise ArityError(f"point has {len(point)} coordinates, form has {self.nvars} variables")
        return self.element(*[to_gaussian(v) for v in point])

    def to_text(self) -> str:
        if not self.element:
            return "0"
        pieces = []
        for monom in sorted(self.element.itermonoms(), key=grlex, reverse=True):
            coeff = self.element[monom]
            factors = [
                f"x{k}" if e == 1 else f"x{k}^{e}" for k, e in enumerate(monom) if e
            ]
            if coeff == QQ_I.one and factors:
                pieces.append("*".join(factors))
            else:
                pieces.append("*".join([format_gaussian(coeff)] + factors))
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"HomogeneousPoly(nvars={self.nvars}, degree={self.degree}, {self.to_text()!r})"


def poly_arith(P: HomogeneousPoly, Q: HomogeneousPoly, op: str) -> HomogeneousPoly:
    """Exact ``add`` or ``mul`` of two forms."""
    if op == "add":
        return P + Q
    if op == "mul":
        return P * Q
    raise ValueError(f"unknown operation {op!r}; expected 'add' or 'mul'")


def product(forms: Iterable[HomogeneousPoly], nvars: int) -> HomogeneousPoly:
    result = HomogeneousPoly.monomial((0,) * nvars)
    for form in forms:
        result = result * form
    return result


def common_degree(forms: Sequence[HomogeneousPoly]) -> int:
    degrees = {form.degree for form in forms}
    if len(degrees) != 1:
        raise DegreeMismatchError(f"forms must share one degree, got {sorted(degrees)}")
    return degrees.pop()
