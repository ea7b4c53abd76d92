"""Polynomials in the field-size parameter q with integer coefficients.

Bounds that hold for every prime power are carried around as these objects
and only evaluated at concrete q when a number is needed.  Exact ratios of
two such polynomials appear in bounds stated before rounding.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

__all__ = [
    "PolyQ",
    "PolyRatio",
    "poly_parse",
    "poly_print",
    "poly_eval",
    "gauss_poly",
]


class PolyQ:
    """Immutable sparse polynomial in q over the integers."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Union[Mapping[int, int], Iterable[tuple[int, int]], int] = ()):
        if isinstance(coeffs, int):
            coeffs = ({0: coeffs} if coeffs else {}).items()
        elif isinstance(coeffs, Mapping):
            coeffs = coeffs.items()
        c: dict[int, int] = {}
        for e, v in coeffs:
            if e < 0:
                raise ValueError("negative exponent")
            v = c.get(e, 0) + v
            if v:
                c[e] = v
            elif e in c:
                del c[e]
        self._c = c
        self._hash = hash(frozenset(c.items()))

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "PolyQ":
        return cls({exp: coeff})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return max(self._c) if self._c else -1

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = PolyQ(other)
        if not isinstance(other, PolyQ):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: "PolyQ | int") -> "PolyQ":
        if isinstance(other, int):
            other = PolyQ(other)
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            else:
                del c[e]
        return PolyQ(c)

    __radd__ = __add__

    def __neg__(self) -> "PolyQ":
        return PolyQ({e: -v for e, v in self._c.items()})

    def __sub__(self, other: "PolyQ | int") -> "PolyQ":
        if isinstance(other, int):
            other = PolyQ(other)
        return self + (-other)

    def __rsub__(self, other: int) -> "PolyQ":
        return PolyQ(other) - self

    def __mul__(self, other: "PolyQ | int") -> "PolyQ":
        if isinstance(other, int):
            other = PolyQ(other)
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                w = c.get(e, 0) + v1 * v2
                if w:
                    c[e] = w
                elif e in c:
                    del c[e]
        return PolyQ(c)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PolyQ":
        if n < 0:
            raise ValueError("negative power")
        r = PolyQ(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __call__(self, q: int) -> int:
        return self.evaluate(q)

    def evaluate(self, q: int) -> int:
        """Exact integer value at integer q (Horner on the dense range)."""
        if not self._c:
            return 0
        acc = 0
        for e in range(self.degree(), -1, -1):
            acc = acc * q + self._c.get(e, 0)
        return acc

    def __str__(self) -> str:
        return poly_print(self)

    def __repr__(self) -> str:
        return f"PolyQ({poly_print(self)!r})"


_TERM = re.compile(
    r"""\s*(?P<sign>[+-]?)\s*
        (?:
            (?P<coeff>\d+)\s*(?:\*?\s*q(?:\^(?P<e1>\d+))?)?
          | q(?:\^(?P<e2>\d+))?
        )""",
    re.VERBOSE,
)


def poly_parse(text: str) -> PolyQ:
    """Parse sums of integer multiples of powers of q.

    Accepts forms like ``q^9+2q^3+1``, ``3*q^2 - q + 4``, ``-q+1``.
    """
    pos = 0
    terms: list[tuple[int, int]] = []
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at ...{text[pos:]!r}")
        sign = m.group("sign")
        if not first and sign not in ("+", "-"):
            raise ValueError(f"missing sign before ...{text[pos:]!r}")
        s = -1 if sign == "-" else 1
        if m.group("coeff") is not None:
            c = int(m.group("coeff"))
            e = m.group("e1")
            if e is not None:
                exp = int(e)
            elif "q" in m.group(0):
                exp = 1
            else:
                exp = 0
        else:
            c = 1
            e = m.group("e2")
            exp = int(e) if e is not None else 1
        terms.append((exp, s * c))
        pos = m.end()
        first = False
    return PolyQ(terms)


def poly_print(p: PolyQ) -> str:
    """Canonical text: descending exponents, unit coefficients elided."""
    if not p:
        return "0"
    parts: list[str] = []
    for e in sorted(p.coeffs, reverse=True):
        v = p.coeffs[e]
        mag = abs(v)
        if e == 0:
            body = str(mag)
        elif e == 1:
            body = "q" if mag == 1 else f"{mag}q"
        else:
            body = f"q^{e}" if mag == 1 else f"{mag}q^{e}"
        if not parts:
            parts.append(body if v > 0 else "-" + body)
        else:
            parts.append(("+" if v > 0 else "-") + body)
    return "".join(parts)


def poly_eval(p: Union[PolyQ, "PolyRatio", int], q: int) -> int:
    """Evaluate at integer q.  Ratios must divide exactly."""
    if isinstance(p, int):
        return p
    if isinstance(p, PolyRatio):
        v = p.evaluate(q)
        if v.denominator != 1:
            raise ValueError(f"ratio does not evaluate to an integer at q={q}")
        return int(v)
    return p.evaluate(q)


class PolyRatio:
    """Exact quotient of two PolyQ, compared by cross multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyQ, den: PolyQ):
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    def evaluate(self, q: int) -> Fraction:
        return Fraction(self.num.evaluate(q), self.den.evaluate(q))

    def floor_evaluate(self, q: int) -> int:
        f = self.evaluate(q)
        return f.numerator // f.denominator

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (PolyQ, int)):
            other = PolyRatio(PolyQ(other) if isinstance(other, int) else other, PolyQ(1))
        if not isinstance(other, PolyRatio):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:  # pragma: no cover - not used as dict key
        return hash((self.num, self.den))

    def __mul__(self, other: "PolyRatio | PolyQ | int") -> "PolyRatio":
        if isinstance(other, int):
            other = PolyQ(other)
        if isinstance(other, PolyQ):
            other = PolyRatio(other, PolyQ(1))
        return PolyRatio(self.num * other.num, self.den * other.den)

    def __str__(self) -> str:
        return f"({poly_print(self.num)})/({poly_print(self.den)})"

    def __repr__(self) -> str:
        return f"PolyRatio({poly_print(self.num)!r}, {poly_print(self.den)!r})"


@lru_cache(maxsize=None)
def gauss_poly(n: int, k: int) -> PolyQ:
    """Gaussian binomial coefficient as a polynomial in q.

    Computed by the Pascal recursion gauss(n,k) = gauss(n-1,k-1)
    + q^k gauss(n-1,k), which stays inside the polynomial ring.
    """
    if k < 0 or k > n:
        return PolyQ(0)
    if k == 0 or k == n:
        return PolyQ(1)
    return gauss_poly(n - 1, k - 1) + PolyQ.monomial(1, k) * gauss_poly(n - 1, k)
