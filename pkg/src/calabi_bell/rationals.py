"""Exact rational scalars and shared combinatorial helpers.

All exact computation in this package runs over ``fractions.Fraction``,
which already guarantees the canonical form we rely on everywhere:
gcd-normalized, denominator positive, sign carried by the numerator.
Integers are plain Python ``int`` and never overflow.

What this module adds is the thin contract layer the rest of the package
(and the CLI) needs on top of the stdlib:

* strict ``"p/q"`` parsing and rendering (the textual form used in JSON
  and CSV output; decimal strings are rejected so nothing silently goes
  through floating point),
* factorials and binomial coefficients (stdlib ``math``, re-exported so
  call sites stay uniform),
* generalized binomial coefficients with rational upper argument, which
  the diastasis code needs for non-integer exponents.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

__all__ = [
    "Rational",
    "rational",
    "parse_rational",
    "format_rational",
    "factorial",
    "binomial",
    "generalized_binomial",
]

# The exact scalar type. Alias so call sites read as intent, not plumbing.
Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def rational(numerator: int | str | Rational, denominator: int | None = None) -> Rational:
    """Build a canonical rational from ints, a Fraction, or a 'p/q' string."""
    if isinstance(numerator, str):
        if denominator is not None:
            raise TypeError("denominator not allowed with a string argument")
        return parse_rational(numerator)
    if denominator is None:
        return Fraction(numerator)
    return Fraction(numerator, denominator)


def parse_rational(text: str) -> Rational:
    """Parse ``"p/q"`` (or a bare integer ``"p"``) into a canonical rational.

    The sign, if any, belongs to the numerator. Decimal notation is
    rejected: this parser exists precisely so that exact inputs never
    take a detour through floats.
    """
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ValueError(f"not a rational 'p/q': {text!r}")
    numerator = int(match.group(1))
    if match.group(2) is None:
        return Fraction(numerator)
    denominator = int(match.group(2))
    if denominator == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Rational | int) -> str:
    """Render as ``"p/q"`` with the sign on p; bare ``"p"`` when q == 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def factorial(n: int) -> int:
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """C(n, k) for non-negative integers; 0 when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial expects non-negative integer arguments")
    return math.comb(n, k)


def generalized_binomial(a: Rational | int, k: int) -> Rational:
    """Binomial coefficient C(a, k) = a(a-1)...(a-k+1)/k! for rational a.

    Agrees with ``binomial`` whenever a is a non-negative integer, and is
    the coefficient of x^k in the binomial series of (1+x)^a otherwise.
    """
    if k < 0:
        raise ValueError("lower index must be a non-negative integer")
    a = Fraction(a)
    numerator = Fraction(1)
    for i in range(k):
        numerator *= a - i
    return numerator / math.factorial(k)
