"""Exact arithmetic in small finite fields.

Elements of a field of order ``q`` are the integers ``0 .. q-1``.  For a
prime field the integer is the residue itself.  For an extension field of
degree ``m`` over a base field of order ``b`` the integer encodes the
coefficient vector of the residue polynomial in base ``b``, least
significant digit first, so the base field embeds as the identity on
``0 .. b-1`` and ``b`` itself is the class of the indeterminate.

All operations are pure; tables are immutable after construction.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .config import LIMITS

__all__ = [
    "Field",
    "make_field",
    "ext_coords",
    "ext_from_coords",
    "is_prime",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def is_prime_power(q: int) -> bool:
    return q >= 2 and len(_prime_factors(q)) == 1


def _prime_factors(n: int) -> list[int]:
    out = []
    i = 2
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            while n % i == 0:
                n //= i
        i += 1
    if n > 1:
        out.append(n)
    return out


class Field:
    """A finite field of order ``p^e``, possibly built as a tower.

    Parameters are not passed directly; use :func:`make_field` or
    :meth:`Field.extension`.  Equality is identity: construction is cached,
    so each (base, degree) pair yields a single shared instance.
    """

    __slots__ = (
        "char",
        "order",
        "base",
        "degree",
        "modulus",
        "generator",
        "_exp",
        "_log",
        "_inv",
        "_xor_add",
        "_ext_cache",
    )

    def __init__(self, base: "Field | None", degree: int, prime: int = 0):
        if base is None:
            # prime field
            if not is_prime(prime):
                raise ValueError(f"not a prime: {prime}")
            self.char = prime
            self.order = prime
            self.base = None
            self.degree = 1
            self.modulus = ()
        else:
            if degree < 2:
                raise ValueError("extension degree must be >= 2")
            self.char = base.char
            self.order = base.order**degree
            self.base = base
            self.degree = degree
            self.modulus = _smallest_irreducible(base, degree)
        # in characteristic 2 every digit lane is a power-of-two block,
        # so addition of packed representations is plain xor
        self._xor_add = self.char == 2
        self._ext_cache: dict[int, "Field"] = {}
        self.generator = self._find_generator()
        self._build_tables()

    # -- representation helpers ------------------------------------------

    def digits(self, a: int) -> tuple[int, ...]:
        """Coefficient vector over the base field, length ``degree``."""
        if self.base is None:
            raise ValueError("prime field has no base-field coordinates")
        b = self.base.order
        out = []
        for _ in range(self.degree):
            out.append(a % b)
            a //= b
        return tuple(out)

    def from_digits(self, cs: Sequence[int]) -> int:
        if self.base is None:
            raise ValueError("prime field has no base-field coordinates")
        if len(cs) != self.degree:
            raise ValueError(
                f"need {self.degree} coordinates, got {len(cs)}"
            )
        b = self.base.order
        a = 0
        for c in reversed(cs):
            if not 0 <= c < b:
                raise ValueError(f"coordinate {c} not in base field")
            a = a * b + c
        return a

    def elements(self) -> range:
        return range(self.order)

    def check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise ValueError(f"element {a} not in field of order {self.order}")
        return a

    # -- arithmetic -------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._xor_add:
            return a ^ b
        if self.base is None:
            return (a + b) % self.order
        bo = self.base.order
        badd = self.base.add
        out = 0
        shift = 1
        for _ in range(self.degree):
            out += badd(a % bo, b % bo) * shift
            a //= bo
            b //= bo
            shift *= bo
        return out

    def neg(self, a: int) -> int:
        if self._xor_add:
            return a
        if self.base is None:
            return (-a) % self.order
        bo = self.base.order
        bneg = self.base.neg
        out = 0
        shift = 1
        for _ in range(self.degree):
            out += bneg(a % bo) * shift
            a //= bo
            shift *= bo
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    # -- construction internals -------------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        """Multiplication without tables (used only while building them)."""
        if self.base is None:
            return (a * b) % self.order
        prod = _poly_mul(self.base, self.digits(a), self.digits(b))
        rem = _poly_mod(self.base, prod, self.modulus)
        rem = rem + (0,) * (self.degree - len(rem))
        return self.from_digits(rem[: self.degree])

    def _raw_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        n = self.order - 1
        if n == 1:
            return 1
        factors = _prime_factors(n)
        for g in range(2, self.order):
            if all(self._raw_pow(g, n // f) != 1 for f in factors):
                return g
        raise AssertionError("no generator found, field construction is broken")

    def _build_tables(self) -> None:
        n = self.order - 1
        exp = [1] * n
        g = self.generator
        for i in range(1, n):
            exp[i] = self._raw_mul(exp[i - 1], g)
        log = [0] * self.order
        for i, v in enumerate(exp):
            log[v] = i
        inv = [0] * self.order
        for a in range(1, self.order):
            inv[a] = exp[(n - log[a]) % n]
        self._exp = exp
        self._log = log
        self._inv = inv

    # -- extensions ---------------------------------------------------------

    def extension(self, m: int) -> "Field":
        """The degree ``m`` extension of this field (cached)."""
        if m == 1:
            return self
        got = self._ext_cache.get(m)
        if got is None:
            if self.order**m > LIMITS.ext_order_ceiling:
                raise ValueError(
                    f"extension order {self.order}^{m} exceeds ceiling "
                    f"{LIMITS.ext_order_ceiling}"
                )
            got = Field(self, m)
            self._ext_cache[m] = got
        return got

    def __repr__(self) -> str:
        if self.base is None:
            return f"GF({self.order})"
        return f"GF({self.order})={self.base!r}[x]/{self.modulus}"


# -- polynomial arithmetic over a field, little-endian coefficient tuples --


def _poly_trim(p: Sequence[int]) -> tuple[int, ...]:
    i = len(p)
    while i > 0 and p[i - 1] == 0:
        i -= 1
    return tuple(p[:i])


def _poly_mul(F: Field, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return _poly_trim(out)


def _poly_mod(F: Field, a: Sequence[int], m: Sequence[int]) -> tuple[int, ...]:
    a = list(a)
    dm = len(m) - 1
    lead_inv = F.inv(m[-1])
    while len(a) >= len(m):
        c = F.mul(a[-1], lead_inv)
        if c:
            off = len(a) - len(m)
            for i in range(len(m)):
                a[off + i] = F.sub(a[off + i], F.mul(c, m[i]))
        a.pop()
    return _poly_trim(a)


def _all_monic(F: Field, deg: int) -> Iterable[tuple[int, ...]]:
    q = F.order
    for c in range(q**deg):
        coeffs = []
        x = c
        for _ in range(deg):
            coeffs.append(x % q)
            x //= q
        yield tuple(coeffs) + (1,)


def _is_irreducible(F: Field, f: Sequence[int]) -> bool:
    """Trial division by all monic polynomials of degree <= deg(f)/2."""
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for g in _all_monic(F, d):
            if not _poly_mod(F, f, g):
                return False
    return True


def _smallest_irreducible(F: Field, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m over F with the lexicographically
    smallest coefficient tuple, highest-degree coefficient compared first
    (equivalently, the smallest integer encoding of the low coefficients)."""
    q = F.order
    for c in range(q**m):
        coeffs = []
        x = c
        for _ in range(m):
            coeffs.append(x % q)
            x //= q
        f = tuple(coeffs) + (1,)
        if _is_irreducible(F, f):
            return f
    raise AssertionError("no irreducible polynomial found, impossible")


@lru_cache(maxsize=None)
def _prime_field(p: int) -> Field:
    return Field(None, 1, prime=p)


def make_field(p: int, e: int = 1) -> Field:
    """The field with ``p^e`` elements, built over GF(p) when ``e > 1``.

    The extension modulus is chosen deterministically (smallest irreducible)
    so results are reproducible across runs and machines.
    """
    if not is_prime(p):
        raise ValueError(f"not a prime: {p}")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p**e > LIMITS.field_order_ceiling:
        raise ValueError(
            f"field order {p}^{e} exceeds ceiling {LIMITS.field_order_ceiling}"
        )
    F = _prime_field(p)
    return F if e == 1 else F.extension(e)


def ext_coords(E: Field, a: int) -> tuple[int, ...]:
    """Coordinates of ``a`` over the base field of ``E`` in the polynomial
    basis ``1, x, ..., x^(m-1)``.  Additive and bijective."""
    return E.digits(a)


def ext_from_coords(E: Field, cs: Sequence[int]) -> int:
    return E.from_digits(cs)


def field_of_order(q: int) -> Field:
    """Field with exactly q elements; q must be a prime power."""
    if q < 2:
        raise ValueError(f"not a prime power: {q}")
    p = q
    for c in range(2, q):
        if c * c > q:
            break
        if q % c == 0:
            p = c
            break
    e = 0
    r = q
    while r % p == 0 and r > 1:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"not a prime power: {q}")
    return make_field(p, e)
