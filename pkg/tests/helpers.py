from pathlib import Path
from typing import Optional

from truncsmt.services.expressions import Curve
from truncsmt.services.parser import parse_expr, parse_form
from truncsmt.services.polynomials import HomogeneousPoly

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def curve(*components: str) -> Curve:
    return Curve(len(components) - 1, tuple(parse_expr(c) for c in components))


def form(text: str, nvars: int, degree: Optional[int] = None) -> HomogeneousPoly:
    return parse_form(text, nvars=nvars, degree=degree)


def coordinate_powers(n: int, d: int):
    """gamma_j = x_j^d for j = 1..n."""
    return [HomogeneousPoly.monomial(tuple(d if v == j else 0 for v in range(n + 1))) for j in range(1, n + 1)]
