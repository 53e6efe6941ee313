"""Scalar backend: exact rationals (fractions.Fraction) or IEEE doubles.

Every matrix/tensor in this package holds either Fraction entries (exact
backend) or Python floats (float backend); the algorithms are written to be
generic over the two.  Zero/equality tests go through ``is_zero``/``close``,
which take the float comparison tolerance into account.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float]

#: default relative tolerance for the float backend
DEFAULT_TOL = 1e-9


def is_exact(x: Scalar) -> bool:
    return not isinstance(x, float)


def as_float(x: Scalar) -> float:
    return float(x)


def is_zero(x: Scalar, tol: float = DEFAULT_TOL) -> bool:
    if isinstance(x, float):
        return abs(x) <= tol
    return x == 0


def close(x: Scalar, y: Scalar, tol: float = DEFAULT_TOL) -> bool:
    """Equality: exact for rationals, |x-y| <= tol*max(1,|x|,|y|) for floats."""
    if isinstance(x, float) or isinstance(y, float):
        fx, fy = float(x), float(y)
        return abs(fx - fy) <= tol * max(1.0, abs(fx), abs(fy))
    return x == y


def parse_scalar(text: str, exact: bool = True) -> Scalar:
    """Parse a rational ("p/q", "7") or decimal ("1.25") literal.

    With ``exact`` the result is a Fraction (decimals are converted exactly);
    otherwise a float.
    """
    text = text.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a numeric literal: {text!r}") from exc
    return value if exact else float(value)


def format_scalar(x: Scalar) -> str:
    """Canonical text form; rationals as "p/q", floats via repr."""
    if isinstance(x, float):
        # plain-float repr also for numpy float subclasses
        return repr(float(x))
    x = Fraction(x)
    return str(x)


def rationalize(x: float, max_denominator: int = 10**6) -> Fraction:
    """Continued-fraction reconstruction of a float as a small rational."""
    return Fraction(x).limit_denominator(max_denominator)


def bit_size(x: Scalar) -> int:
    """Pivot-selection size measure; smaller means a cheaper exact pivot."""
    if isinstance(x, float):
        return 0
    x = Fraction(x)
    return x.numerator.bit_length() + x.denominator.bit_length()
