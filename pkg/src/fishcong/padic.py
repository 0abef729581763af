"""p-adic digits of rationals, Kummer carry counts, and the symbol (12/p)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Valuation of zero; compares greater than every integer.
INFINITY = math.inf


class DenominatorDivisibleByP(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def valuation(n: int, p: int) -> int | float:
    """Exponent of ``p`` in the integer ``n`` (INFINITY for zero)."""
    if n == 0:
        return INFINITY
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PAdicExpansion:
    """``digits[k]`` is the coefficient of ``p^k`` (not shifted by the valuation)."""

    p: int
    valuation: int | float
    digits: tuple[int, ...]

    def value_mod(self) -> int:
        """Integer represented by the digit prefix, in ``[0, p^len)``."""
        return sum(d * self.p ** k for k, d in enumerate(self.digits))


def _as_fraction(x) -> Fraction:
    if isinstance(x, tuple):
        num, den = x
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return Fraction(num, den)
    return Fraction(x)


def expand(x, p: int, count: int) -> PAdicExpansion:
    """First ``count`` base-``p`` digits of a rational ``x``.

    ``x`` may be an int, a Fraction, or a ``(numerator, denominator)`` pair.
    Negative numbers get the usual infinite tail of ``p - 1`` digits.
    """
    if count < 1:
        raise ValueError("count must be positive")
    x = _as_fraction(x)
    if x == 0:
        return PAdicExpansion(p, INFINITY, (0,) * count)
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise DenominatorDivisibleByP(f"{x} has denominator divisible by {p}")
    v = valuation(num, p)
    inv = pow(den, -1, p)
    digits = []
    for _ in range(count):
        d = num * inv % p
        digits.append(d)
        num = (num - d * den) // p
    return PAdicExpansion(p, v, tuple(digits))


def digit(x, p: int, k: int) -> int:
    return expand(x, p, k + 1).digits[k]


def _int_digits(n: int, p: int, count: int) -> list[int]:
    n %= p ** count
    out = []
    for _ in range(count):
        n, d = divmod(n, p)
        out.append(d)
    return out


def kummer_carries(n: int, k: int, p: int) -> int | float:
    """Carries when adding ``k`` and ``n - k`` in base ``p``.

    Negative integers are read through their p-adic digits, so the count
    stays finite; it is INFINITY exactly when ``0 <= n < k``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if 0 <= n < k:
        return INFINITY
    # beyond this many digits k contributes zeros and n, n - k have constant
    # tails, so no further carries occur
    width = 1
    bound = max(abs(n), abs(n - k), k) + 1
    while p ** width <= bound:
        width += 1
    width += 1
    a = _int_digits(k, p, width)
    b = _int_digits(n - k, p, width)
    carries = carry = 0
    for x, y in zip(a, b):
        carry = 1 if x + y + carry >= p else 0
        carries += carry
    return carries


def binom_valuation(n: int, k: int, p: int) -> int | float:
    """p-adic valuation of the generalized binomial coefficient C(n, k)."""
    return kummer_carries(n, k, p)


def generalized_binomial(n: int, k: int) -> int:
    """C(n, k) for any integer ``n`` and ``k >= 0``."""
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    return (-1) ** k * math.comb(k - n - 1, k)


def jacobi_12(p: int) -> int:
    """Jacobi symbol (12/p) for a prime ``p >= 5``.

    (12/p) = (4/p)(3/p) = (3/p), and by reciprocity
    (3/p) = (p/3) (-1)^((p-1)/2).
    """
    if p < 5:
        raise ValueError(f"(12/p) needs p >= 5, got {p}")
    p_over_3 = 1 if p % 3 == 1 else -1
    sign = -1 if (p - 1) // 2 % 2 else 1
    return p_over_3 * sign


def neg_inverse_24(p: int) -> int:
    """The residue ``i0`` in ``[0, p)`` with ``i0 = -1/24 (mod p)``."""
    if math.gcd(p, 24) != 1:
        raise ValueError(f"24 is not invertible modulo {p}")
    return -pow(24, -1, p) % p
