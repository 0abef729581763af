"""p-dissection of the truncated strange function ``F(q, N) = sum_{n<=N} (q; q)_n``.

``F(q, N) = sum_i q^i A_p(N, i, q^p)`` for ``0 <= i < p``; the checks here
test the divisibility properties of the pieces ``A_p(pn - 1, i, q)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .congruence import pentagonal_residues
from .padic import jacobi_12, neg_inverse_24
from .series import (ONE_MINUS_Q, ZZ, CoefficientRing, IntPolynomial,
                     NotDivisible, TruncatedSeries, binomial_series,
                     divide_exact_by_power, poly_divmod, q_pochhammer)

DEGREE_LIMIT = 2_000_000


class DegreeGuard(ValueError):
    pass


def _guard(degree: int, force: bool) -> None:
    if degree > DEGREE_LIMIT and not force:
        raise DegreeGuard(f"degree {degree} exceeds {DEGREE_LIMIT}; pass force=True to run anyway")


def strange_polynomial(N: int) -> IntPolynomial:
    """``F(q, N)`` as an exact polynomial of degree ``N(N+1)/2``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    deg = N * (N + 1) // 2
    poch = [1] + [0] * deg
    total = [1] + [0] * deg
    top = 0
    for n in range(1, N + 1):
        top += n
        for k in range(top, n - 1, -1):
            poch[k] -= poch[k - n]
        for k in range(top + 1):
            total[k] += poch[k]
    return IntPolynomial(tuple(total))


def strange_function(N: int, ring: CoefficientRing = ZZ) -> TruncatedSeries:
    """``F(q, N)`` as a series whose order is its full degree (no truncation)."""
    poly = strange_polynomial(N)
    return TruncatedSeries(ring, poly.coeffs or (0,))


@dataclass
class DivisionOutcome:
    i: int
    ok: bool
    quotient: IntPolynomial | None = None
    witness: dict | None = None

    def to_dict(self) -> dict:
        out = {"i": self.i, "ok": self.ok}
        if self.quotient is not None:
            out["quotient"] = [str(c) for c in self.quotient.coeffs]
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class DissectionReport:
    p: int
    N: int
    parts: list[IntPolynomial]
    checks: dict[str, list] = field(default_factory=dict)

    def reassemble(self) -> IntPolynomial:
        out = IntPolynomial()
        for i, part in enumerate(self.parts):
            out = out + part.inflate(self.p).shift(i)
        return out

    def to_dict(self) -> dict:
        checks = {}
        for name, outcomes in self.checks.items():
            checks[name] = [o.to_dict() if hasattr(o, "to_dict") else o for o in outcomes]
        return {
            "p": self.p,
            "N": self.N,
            "parts": [[str(c) for c in part.coeffs] for part in self.parts],
            "checks": checks,
        }


def split(poly: IntPolynomial, p: int) -> list[IntPolynomial]:
    return [IntPolynomial(poly.coeffs[i::p]) for i in range(p)]


def dissection(p: int, N: int, force: bool = False) -> DissectionReport:
    _guard(N * (N + 1) // 2, force)
    return DissectionReport(p, N, split(strange_polynomial(N), p))


def _divide(poly: IntPolynomial, base: IntPolynomial, n: int, i: int) -> DivisionOutcome:
    try:
        quot = divide_exact_by_power(poly, base, n)
    except NotDivisible as exc:
        return DivisionOutcome(i, False, witness={"step": exc.step, "degree": exc.degree,
                                                 "remainder": str(exc.value)})
    return DivisionOutcome(i, True, quotient=quot)


def check_lemma_alpha(p: int, n: int, force: bool = False) -> list[DivisionOutcome]:
    """Divide ``A_p(pn - 1, i, q)`` by ``(1 - q)^n`` for every ``i`` outside S(p)."""
    if n < 1:
        raise ValueError("n must be positive")
    rep = dissection(p, p * n - 1, force)
    S = pentagonal_residues(p)
    return [_divide(rep.parts[i], ONE_MINUS_Q, n, i) for i in range(p) if i not in S]


def check_qq_conjecture(p: int, n: int, force: bool = False) -> list[DivisionOutcome]:
    """Test whether ``(q; q)_n`` divides ``A_p(pn - 1, i, q)`` for ``i`` outside S(p).

    This is an open conjecture; callers report the outcome, never assert it.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rep = dissection(p, p * n - 1, force)
    S = pentagonal_residues(p)
    deg = n * (n + 1) // 2
    poch = IntPolynomial(q_pochhammer(n, ZZ, deg).coeffs)
    out = []
    for i in range(p):
        if i in S:
            continue
        quot, rem = poly_divmod(rep.parts[i], poch)
        if rem.is_zero():
            out.append(DivisionOutcome(i, True, quotient=quot))
        else:
            k = next(d for d, c in enumerate(rem.coeffs) if c)
            out.append(DivisionOutcome(i, False, witness={"degree": k, "remainder": str(rem.coeffs[k])}))
    return out


@dataclass
class Alpha24Outcome:
    p: int
    n: int
    i0: int
    reading: str | None
    attempts: dict[str, bool]
    beta: IntPolynomial | None = None

    @property
    def ok(self) -> bool:
        return self.reading is not None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["beta"] = None if self.beta is None else [str(c) for c in self.beta.coeffs]
        out["ok"] = self.ok
        return out


READINGS = ("F(q^p, pn-1)", "F(q, pn-1)")


def alpha24_correction(p: int, n: int, reading: str = READINGS[0]) -> IntPolynomial:
    """``(12/p) p q^floor(p/24) F(., pn - 1)`` under the chosen reading."""
    F = strange_polynomial(p * n - 1)
    if reading == READINGS[0]:
        F = F.inflate(p)
    elif reading != READINGS[1]:
        raise ValueError(f"unknown reading {reading!r}")
    return (F * (jacobi_12(p) * p)).shift(p // 24)


def check_lemma_alpha24(p: int, n: int, force: bool = False) -> Alpha24Outcome:
    """Check that ``A_p(pn - 1, i0, q)`` minus the correction term is divisible by
    ``(1 - q)^n``, where ``i0 = -1/24 (mod p)``.

    The q^p reading of the correction term is tried first; the plain-q
    reading is tried only if that fails.
    """
    if p < 5:
        raise ValueError("needs p >= 5")
    N = p * n - 1
    _guard(p * p * n * N // 2, force)
    i0 = neg_inverse_24(p)
    part = dissection(p, N, force=True).parts[i0]
    attempts = {}
    for reading in READINGS:
        D = part - alpha24_correction(p, n, reading)
        try:
            beta = divide_exact_by_power(D, ONE_MINUS_Q, n)
        except NotDivisible:
            attempts[reading] = False
            continue
        attempts[reading] = True
        return Alpha24Outcome(p, n, i0, reading, attempts, beta)
    return Alpha24Outcome(p, n, i0, None, attempts)


def evaluate_at_series(poly: IntPolynomial, x: TruncatedSeries) -> TruncatedSeries:
    """Horner evaluation of ``poly(x)`` for a truncated series ``x``."""
    ring, order = x.ring, x.order
    acc = TruncatedSeries.zero(ring, order)
    for c in reversed(poly.coeffs):
        cs = list((acc * x).coeffs)
        cs[0] += c
        acc = TruncatedSeries(ring, tuple(cs))
    return acc


def substituted_dissection(p: int, r: int, n: int, order: int,
                           ring: CoefficientRing = ZZ) -> TruncatedSeries:
    """``sum_i (1 - q)^(r i) A_p(pn - 1, i, (1 - q)^(r p))`` through ``q^order``.

    Equals ``F((1 - q)^r, pn - 1)``; this is the substitution applied to the
    dissection when passing to xi_{r,s}.
    """
    rep = dissection(p, p * n - 1)
    x = binomial_series(r * p, ring, order)
    total = TruncatedSeries.zero(ring, order)
    for i, part in enumerate(rep.parts):
        total = total + binomial_series(r * i, ring, order) * evaluate_at_series(part, x)
    return total
