"""Truncated formal power series with exact rational coefficients.

Every Hilbert series in the package is carried by :class:`TruncSeries`.  A
series knows its cap ``D`` and stores the coefficients of ``t^0 .. t^D``.
Binary operations insist on equal caps; nothing is widened silently.

    >>> t = TruncSeries.variable(3)
    >>> (1 + t) * (1 - t)
    TruncSeries([1, 0, -1, 0])
    >>> geom_inverse(t)
    TruncSeries([1, 1, 1, 1])
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


class CapMismatch(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


class TruncSeries:
    """Power series ``sum c_n t^n`` known up to and including ``t^cap``."""

    __slots__ = ("_cap", "_coeffs")

    def __init__(self, coeffs: Iterable, cap: int | None = None):
        cs = [_frac(c) for c in coeffs]
        if cap is None:
            cap = len(cs) - 1
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        if len(cs) > cap + 1:
            cs = cs[: cap + 1]
        cs.extend([Fraction(0)] * (cap + 1 - len(cs)))
        self._cap = cap
        self._coeffs = tuple(cs)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, cap: int) -> TruncSeries:
        return cls([], cap)

    @classmethod
    def one(cls, cap: int) -> TruncSeries:
        return cls([1], cap)

    @classmethod
    def variable(cls, cap: int) -> TruncSeries:
        return cls([0, 1], cap)

    @classmethod
    def from_degrees(cls, degrees: Iterable[int], cap: int) -> TruncSeries:
        """Census series: coefficient of ``t^n`` counts the entries equal to ``n``."""
        counts = [0] * (cap + 1)
        for d in degrees:
            if d < 0:
                raise ValueError("degrees must be nonnegative")
            if d <= cap:
                counts[d] += 1
        return cls(counts, cap)

    # -- access -----------------------------------------------------------

    @property
    def cap(self) -> int:
        return self._cap

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        return self._coeffs[n]

    def __len__(self) -> int:
        return self._cap + 1

    def __iter__(self):
        return iter(self._coeffs)

    def value_at_one(self) -> Fraction:
        """Sum of the stored coefficients (``S(1)`` for a polynomial below the cap)."""
        return sum(self._coeffs, Fraction(0))

    def is_polynomial_below_cap(self) -> bool:
        return self._coeffs[-1] == 0

    def truncate(self, cap: int) -> TruncSeries:
        if cap > self._cap:
            raise CapMismatch(f"cannot widen cap {self._cap} to {cap}")
        return TruncSeries(self._coeffs[: cap + 1], cap)

    def substitute_power(self, k: int, cap: int) -> TruncSeries:
        """``S(t^k)`` truncated at ``cap``; needs ``cap <= k * self.cap + k - 1``."""
        if k < 1:
            raise ValueError("k must be positive")
        if cap > k * self._cap + k - 1:
            raise CapMismatch(f"S(t^{k}) is not determined beyond degree {k * self._cap + k - 1}")
        out = [Fraction(0)] * (cap + 1)
        for n, c in enumerate(self._coeffs):
            if n * k <= cap:
                out[n * k] = c
        return TruncSeries(out, cap)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> TruncSeries:
        if isinstance(other, TruncSeries):
            if other._cap != self._cap:
                raise CapMismatch(f"caps differ: {self._cap} != {other._cap}")
            return other
        if isinstance(other, (int, Rational)):
            return TruncSeries([other], self._cap)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncSeries([a + b for a, b in zip(self._coeffs, o._coeffs)], self._cap)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-a for a in self._coeffs], self._cap)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TruncSeries([a - b for a, b in zip(self._coeffs, o._coeffs)], self._cap)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            c = _frac(other)
            return TruncSeries([c * a for a in self._coeffs], self._cap)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self._coeffs, o._coeffs
        out = [Fraction(0)] * (self._cap + 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j in range(self._cap + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return TruncSeries(out, self._cap)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            c = _frac(other)
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return TruncSeries([a / c for a in self._coeffs], self._cap)
        return div_unit(self, other)

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self._cap == other._cap and self._coeffs == other._coeffs
        if isinstance(other, (int, Rational)):
            return self == TruncSeries([other], self._cap)
        return NotImplemented

    def __hash__(self):
        return hash((self._cap, self._coeffs))

    def __repr__(self):
        return f"TruncSeries([{', '.join(str(c) for c in self._coeffs)}])"

    def __str__(self):
        terms = []
        for n, c in enumerate(self._coeffs):
            if c == 0:
                continue
            mono = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{body} + O(t^{self._cap + 1})"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self._coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str] | str) -> TruncSeries:
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, list) or not data:
            raise ValueError("series JSON must be a nonempty array")
        return cls([Fraction(s) for s in data])


def _same_cap(a: TruncSeries, b: TruncSeries) -> None:
    if a.cap != b.cap:
        raise CapMismatch(f"caps differ: {a.cap} != {b.cap}")


def add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    _same_cap(a, b)
    return a + b


def mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    _same_cap(a, b)
    return a * b


def geom_inverse(a: TruncSeries) -> TruncSeries:
    """Truncation of ``1 / (1 - a)``; ``a`` must have zero constant term."""
    if a[0] != 0:
        raise ValueError("geom_inverse needs a series with zero constant term")
    D = a.cap
    out = [Fraction(0)] * (D + 1)
    out[0] = Fraction(1)
    # out = 1 + a * out, solved degree by degree
    for n in range(1, D + 1):
        out[n] = sum((a[k] * out[n - k] for k in range(1, n + 1) if a[k]), Fraction(0))
    return TruncSeries(out, D)


def div_unit(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Quotient ``q`` with ``q * b == a`` up to the cap; ``b(0)`` must be nonzero."""
    _same_cap(a, b)
    b0 = b[0]
    if b0 == 0:
        raise ZeroDivisionError("div_unit needs a divisor with nonzero constant term")
    D = a.cap
    q = [Fraction(0)] * (D + 1)
    for n in range(D + 1):
        s = a[n] - sum((b[k] * q[n - k] for k in range(1, n + 1) if b[k]), Fraction(0))
        q[n] = s / b0
    return TruncSeries(q, D)
