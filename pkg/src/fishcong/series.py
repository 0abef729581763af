"""Truncated power series and integer polynomials in one variable ``q``.

Coefficients are Python integers, either exact or reduced into ``[0, M)``
when the ring carries a modulus.  Values are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class RingMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder.

    ``degree`` and ``value`` locate the first (lowest-degree) nonzero
    remainder coefficient.
    """

    def __init__(self, degree: int, value: int, step: int | None = None):
        self.degree = degree
        self.value = value
        self.step = step
        where = f" after {step} division(s)" if step is not None else ""
        super().__init__(f"nonzero remainder {value} at q^{degree}{where}")


@dataclass(frozen=True)
class CoefficientRing:
    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")

    @property
    def exact(self) -> bool:
        return self.modulus is None

    def reduce(self, x: int) -> int:
        return x if self.modulus is None else x % self.modulus

    def __str__(self):
        return "ZZ" if self.modulus is None else f"ZZ/{self.modulus}"


ZZ = CoefficientRing()


def Zmod(m: int) -> CoefficientRing:
    return CoefficientRing(m)


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series known through ``q^order`` inclusive."""

    ring: CoefficientRing
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")
        m = self.ring.modulus
        if m is not None and any(not 0 <= c < m for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(c % m for c in self.coeffs))

    @classmethod
    def from_list(cls, coeffs: Iterable[int], ring: CoefficientRing = ZZ,
                  order: int | None = None) -> "TruncatedSeries":
        cs = list(coeffs)
        if order is not None:
            cs = (cs + [0] * (order + 1))[: order + 1]
        return cls(ring, tuple(cs))

    @classmethod
    def zero(cls, ring: CoefficientRing, order: int) -> "TruncatedSeries":
        return cls(ring, (0,) * (order + 1))

    @classmethod
    def one(cls, ring: CoefficientRing, order: int) -> "TruncatedSeries":
        return cls(ring, (1,) + (0,) * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, ``None`` if all vanish."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.ring, self.coeffs[: order + 1])

    def reduce(self, ring: CoefficientRing) -> "TruncatedSeries":
        """Map exact coefficients into ``ring``."""
        if not self.ring.exact and self.ring != ring:
            raise RingMismatch(f"cannot map {self.ring} to {ring}")
        return TruncatedSeries(ring, self.coeffs)

    def __getitem__(self, k: int) -> int:
        return coefficient(self, k)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return add(self, other)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return sub(self, other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return mul(self, other)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, tuple(-c for c in self.coeffs))


def _check_rings(a: TruncatedSeries, b: TruncatedSeries) -> CoefficientRing:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    return a.ring


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ring = _check_rings(a, b)
    n = min(a.order, b.order) + 1
    return TruncatedSeries(ring, tuple(ring.reduce(x + y) for x, y in zip(a.coeffs[:n], b.coeffs[:n])))


def sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ring = _check_rings(a, b)
    n = min(a.order, b.order) + 1
    return TruncatedSeries(ring, tuple(ring.reduce(x - y) for x, y in zip(a.coeffs[:n], b.coeffs[:n])))


def cauchy_product(a: Sequence[int], b: Sequence[int], length: int,
                   modulus: int | None = None) -> list[int]:
    """First ``length`` coefficients of the product of two coefficient lists.

    Leading zeros of either factor are skipped, which matters for the
    high-valuation products in the Fishburn sum.
    """
    va = next((i for i, x in enumerate(a) if x), len(a))
    vb = next((i for i, x in enumerate(b) if x), len(b))
    out = [0] * length
    for i in range(va, min(len(a), length - vb)):
        ai = a[i]
        if not ai:
            continue
        top = min(len(b), length - i)
        for k in range(vb, top):
            out[i + k] += ai * b[k]
    if modulus is not None:
        out = [x % modulus for x in out]
    return out


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    ring = _check_rings(a, b)
    n = min(a.order, b.order) + 1
    return TruncatedSeries(ring, tuple(cauchy_product(a.coeffs, b.coeffs, n, ring.modulus)))


def binomial_coefficients(e: int, count: int) -> list[int]:
    """Coefficients of ``(1 - q)^e`` for ``q^0 .. q^(count-1)``, exact.

    Uses C(e, k+1) = C(e, k) (e - k) / (k + 1), valid for any integer e.
    """
    out = []
    c = 1
    for k in range(count):
        out.append(c if k % 2 == 0 else -c)
        c = c * (e - k) // (k + 1)
    return out


def binomial_series(e: int, ring: CoefficientRing, N: int) -> TruncatedSeries:
    """``(1 - q)^e`` through ``q^N``; a polynomial when ``e >= 0``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return TruncatedSeries(ring, tuple(binomial_coefficients(e, N + 1)))


def q_pochhammer(n: int, ring: CoefficientRing, N: int) -> TruncatedSeries:
    """``(q; q)_n`` through ``q^N``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cs = [1] + [0] * N
    for j in range(1, n + 1):
        if j > N:
            break
        # multiply by (1 - q^j) in place, high degrees first
        for k in range(N, j - 1, -1):
            cs[k] -= cs[k - j]
    return TruncatedSeries(ring, tuple(cs))


def coefficient(series: TruncatedSeries, k: int) -> int:
    if not 0 <= k <= series.order:
        raise IndexError(f"q^{k} outside truncation range [0, {series.order}]")
    return series.coeffs[k]


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with exact integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        cs = tuple(self.coeffs)
        end = len(cs)
        while end and cs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", cs[:end])

    @classmethod
    def of(cls, *coeffs: int) -> "IntPolynomial":
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[k] + other[k] for k in range(n)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        n = len(self.coeffs) + len(other.coeffs) - 1
        return IntPolynomial(tuple(cauchy_product(self.coeffs, other.coeffs, n)))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        out = IntPolynomial((1,))
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by ``q^k``."""
        return IntPolynomial((0,) * k + self.coeffs) if self.coeffs else self

    def inflate(self, p: int) -> "IntPolynomial":
        """Substitute ``q -> q^p``."""
        if not self.coeffs:
            return self
        out = [0] * (p * self.degree + 1)
        out[::p] = self.coeffs
        return IntPolynomial(tuple(out))

    def to_series(self, ring: CoefficientRing, N: int) -> TruncatedSeries:
        return TruncatedSeries.from_list(self.coeffs, ring, order=N)


ONE_MINUS_Q = IntPolynomial((1, -1))


def _divide_by_one_minus_q(cs: list[int]) -> tuple[list[int], int]:
    """Synthetic division by (1 - q): returns (quotient, remainder).

    The remainder is the value at q = 1; the quotient's k-th coefficient is
    the k-th prefix sum minus that value.
    """
    rem = sum(cs)
    quot = []
    acc = 0
    for c in cs[:-1]:
        acc += c
        quot.append(acc - rem)
    return quot, rem


def _long_divide(num: list[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Integer long division, highest degree first; needs ``den``'s leading
    coefficient to divide each partial leading term."""
    lead = den[-1]
    dd = len(den) - 1
    rem = list(num)
    quot = [0] * max(len(num) - dd, 0)
    for k in range(len(quot) - 1, -1, -1):
        c = rem[k + dd]
        if c % lead:
            # not integral; leave remainder as-is from this point
            return quot, rem
        t = c // lead
        quot[k] = t
        if t:
            for i, d in enumerate(den):
                rem[k + i] -= t * d
    return quot, rem


def poly_divmod(poly: IntPolynomial, base: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    """Quotient and remainder of integer polynomial division.

    Exact only when ``base`` has leading coefficient +-1 or the division
    happens to stay integral; good enough for (1 - q)^n and (q; q)_n.
    """
    if base.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if poly.degree < base.degree:
        return IntPolynomial(), poly
    quot, rem = _long_divide(list(poly.coeffs), base.coeffs)
    return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem))


def divide_exact_by_power(poly: IntPolynomial, base: IntPolynomial, n: int) -> IntPolynomial:
    """Return ``poly / base**n``, raising NotDivisible on any remainder."""
    if base.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if n < 0:
        raise ValueError("n must be nonnegative")
    cs = list(poly.coeffs)
    if base == ONE_MINUS_Q or base == -ONE_MINUS_Q:
        sign = 1 if base == ONE_MINUS_Q else -1
        for step in range(n):
            if not cs:
                break
            quot, rem = _divide_by_one_minus_q(cs)
            if rem:
                raise NotDivisible(0, rem, step)
            cs = [sign * c for c in quot]
        return IntPolynomial(tuple(cs))
    for step in range(n):
        if not cs:
            break
        q, r = poly_divmod(IntPolynomial(tuple(cs)), base)
        if not r.is_zero():
            k = next(i for i, c in enumerate(r.coeffs) if c)
            raise NotDivisible(k, r.coeffs[k], step)
        cs = list(q.coeffs)
    return IntPolynomial(tuple(cs))
