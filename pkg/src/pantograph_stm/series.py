"""Truncated power series in x with exact rational coefficients.

A :class:`PowerSeries` stores the coefficients of ``1, x, ..., x^N`` densely,
so a series of truncation degree ``N`` always carries ``N + 1`` entries.  All
binary operations insist on equal truncation degrees.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

RationalLike = Union[int, Fraction, str]


class SeriesError(ValueError):
    pass


class DegreeMismatchError(SeriesError):
    pass


class DelayRangeError(SeriesError):
    pass


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        raise TypeError("float coefficients are not allowed, use Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise SeriesError("a series needs at least the constant coefficient")

    @classmethod
    def from_coeffs(
        cls, coeffs: Iterable[RationalLike], trunc_degree: Optional[int] = None
    ) -> PowerSeries:
        """Build a series, zero-padding or cutting ``coeffs`` to ``trunc_degree``."""
        values = [_as_fraction(c) for c in coeffs]
        if trunc_degree is None:
            trunc_degree = max(len(values) - 1, 0)
        if trunc_degree < 0:
            raise SeriesError("truncation degree must be non-negative")
        values = values[: trunc_degree + 1]
        values += [Fraction(0)] * (trunc_degree + 1 - len(values))
        return cls(tuple(values))

    @classmethod
    def zero(cls, trunc_degree: int) -> PowerSeries:
        return cls.from_coeffs([], trunc_degree)

    @classmethod
    def constant(cls, value: RationalLike, trunc_degree: int) -> PowerSeries:
        return cls.from_coeffs([value], trunc_degree)

    @classmethod
    def monomial(cls, power: int, trunc_degree: int, coeff: RationalLike = 1) -> PowerSeries:
        if power > trunc_degree:
            return cls.zero(trunc_degree)
        return cls.from_coeffs([0] * power + [coeff], trunc_degree)

    @property
    def trunc_degree(self) -> int:
        return len(self.coeffs) - 1

    def degree(self) -> Optional[int]:
        """Degree of the last nonzero term, or None for the zero series."""
        for k in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[k]:
                return k
        return None

    def is_zero(self) -> bool:
        return self.degree() is None

    def truncate(self, trunc_degree: int) -> PowerSeries:
        return PowerSeries.from_coeffs(self.coeffs, trunc_degree)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __add__(self, other: PowerSeries) -> PowerSeries:
        return add(self, other)

    def __sub__(self, other: PowerSeries) -> PowerSeries:
        return add(self, other.scale(-1))

    def __neg__(self) -> PowerSeries:
        return self.scale(-1)

    def __mul__(self, other: PowerSeries) -> PowerSeries:
        return multiply(self, other)

    def __pow__(self, p: int) -> PowerSeries:
        return pow_int(self, p)

    def scale(self, factor: RationalLike) -> PowerSeries:
        f = _as_fraction(factor)
        return PowerSeries(tuple(c * f for c in self.coeffs))

    def __str__(self) -> str:
        return format_series(self)


def _check_same_degree(a: PowerSeries, b: PowerSeries) -> None:
    if a.trunc_degree != b.trunc_degree:
        raise DegreeMismatchError(
            f"truncation degrees differ: {a.trunc_degree} != {b.trunc_degree}"
        )


def add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    _check_same_degree(a, b)
    return PowerSeries(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def multiply(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product, discarding every term above the truncation degree."""
    _check_same_degree(a, b)
    n = a.trunc_degree
    # integer convolution over common denominators; Fraction adds are slow
    da = math.lcm(*(c.denominator for c in a.coeffs))
    db = math.lcm(*(c.denominator for c in b.coeffs))
    na = [c.numerator * (da // c.denominator) for c in a.coeffs]
    nb = [c.numerator * (db // c.denominator) for c in b.coeffs]
    out = [0] * (n + 1)
    for i, ai in enumerate(na):
        if not ai:
            continue
        for j in range(n + 1 - i):
            bj = nb[j]
            if bj:
                out[i + j] += ai * bj
    den = da * db
    return PowerSeries(tuple(Fraction(c, den) for c in out))


def pow_int(a: PowerSeries, p: int) -> PowerSeries:
    if p < 1:
        raise SeriesError(f"exponent must be a positive integer, got {p}")
    result = a
    for _ in range(p - 1):
        result = multiply(result, a)
    return result


def differentiate(a: PowerSeries) -> PowerSeries:
    n = a.trunc_degree
    out = [k * a.coeffs[k] for k in range(1, n + 1)]
    return PowerSeries.from_coeffs(out, n)


def integrate(a: PowerSeries, times: int = 1) -> PowerSeries:
    """``times``-fold antiderivative with every integration constant zero."""
    if times < 1:
        raise SeriesError(f"times must be a positive integer, got {times}")
    n = a.trunc_degree
    out = [Fraction(0)] * (n + 1)
    for k in range(n + 1 - times):
        # k! / (k + times)!
        out[k + times] = a.coeffs[k] / math.perm(k + times, times)
    return PowerSeries(tuple(out))


def delay_compose(a: PowerSeries, q: RationalLike) -> PowerSeries:
    """Substitute ``q*x`` for ``x``; proportional delays need ``0 < q <= 1``."""
    q = _as_fraction(q)
    if not 0 < q <= 1:
        raise DelayRangeError(f"delay ratio must lie in (0, 1], got {q}")
    out = []
    scale = Fraction(1)
    for c in a.coeffs:
        out.append(c * scale)
        scale *= q
    return PowerSeries(tuple(out))


def lowest_new_degree(prev: PowerSeries, next_: PowerSeries) -> Optional[int]:
    """First degree above ``prev``'s last nonzero term where ``next_`` is nonzero."""
    _check_same_degree(prev, next_)
    top = prev.degree()
    start = 0 if top is None else top + 1
    for k in range(start, next_.trunc_degree + 1):
        if next_.coeffs[k]:
            return k
    return None


def evaluate(a: PowerSeries, x: float) -> float:
    acc = 0.0
    for c in reversed(a.coeffs):
        acc = acc * x + float(c)
    return acc


def format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_series(a: PowerSeries) -> str:
    """Canonical text, e.g. ``1 + 1 x + -1 x^3 + 1/12 x^4``."""
    terms = []
    for k, c in enumerate(a.coeffs):
        if not c:
            continue
        if k == 0:
            terms.append(format_rational(c))
        elif k == 1:
            terms.append(f"{format_rational(c)} x")
        else:
            terms.append(f"{format_rational(c)} x^{k}")
    return " + ".join(terms) if terms else "0"


_TERM_RE = re.compile(r"^(-?\d+(?:/\d+)?)(?: x(?:\^(\d+))?)?$")


def parse_series(text: str, trunc_degree: int) -> PowerSeries:
    """Inverse of :func:`format_series` at a given truncation degree."""
    text = text.strip()
    coeffs = [Fraction(0)] * (trunc_degree + 1)
    if text == "0":
        return PowerSeries(tuple(coeffs))
    last = -1
    for raw in text.split(" + "):
        m = _TERM_RE.match(raw.strip())
        if m is None:
            raise SeriesError(f"malformed series term {raw!r}")
        coeff = Fraction(m.group(1))
        if "x" not in raw:
            k = 0
        else:
            k = int(m.group(2)) if m.group(2) else 1
        if k <= last:
            raise SeriesError("series terms must be in strictly ascending degree")
        if k > trunc_degree:
            raise SeriesError(f"term x^{k} exceeds truncation degree {trunc_degree}")
        last = k
        coeffs[k] = coeff
    return PowerSeries(tuple(coeffs))
