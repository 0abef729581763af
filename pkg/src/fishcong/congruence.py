"""Residue sets, predicted congruence families, numerical verification and
the exhaustive progression search.

A family ``(p, r, s, lam, j)`` asserts
``xi_{r,s}(p^lam m - j) = 0 (mod p^lam)`` for every ``m >= 1``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fishburn import XiRequest, xi_table
from .padic import (binom_valuation, digit, expand, generalized_binomial,
                    is_prime)
from .series import CoefficientRing, binomial_series

SERIES_LIMIT = 5000


class PDividesR(ValueError):
    pass


class ResourceGuard(RuntimeError):
    pass


class Guarantee(str, Enum):
    THM_AS = "THM_AS"
    THM_ASX = "THM_ASX"
    THM_GARVAN = "THM_GARVAN"
    THM_MAIN_S = "THM_MAIN_S"
    THM_MAIN_SSTAR = "THM_MAIN_SSTAR"
    LEM_PR = "LEM_PR"
    EMPIRICAL = "EMPIRICAL"


def pentagonal_residues(p: int) -> frozenset[int]:
    """Residues of n(3n - 1)/2 modulo ``p``; n runs over one full period."""
    return frozenset(n * (3 * n - 1) // 2 % p for n in range(2 * p))


@dataclass(frozen=True)
class ResidueSetReport:
    p: int
    r: int
    s: int
    S: tuple[int, ...]
    S_star: tuple[int, ...] | None = None
    i0: int | None = None
    digit_ok: bool | None = None

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "s": self.s, "S": list(self.S),
                "S_star": None if self.S_star is None else list(self.S_star),
                "i0": self.i0, "digit_ok": self.digit_ok}


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def shifted_center(p: int, r: int, s: int) -> Fraction:
    """The rational ``s - r/24`` whose p-adic digits drive the S* refinement."""
    return Fraction(s) - Fraction(r, 24)


def residue_report(p: int, r: int, s: int, literal_i0: bool = False) -> ResidueSetReport:
    """S(p, r, s), and for p >= 5 also i0, S*(p, r, s) and the digit condition.

    ``i0`` is taken in ``[0, p)``.  With ``literal_i0`` it must lie in
    ``[1, p)``; when the residue is 0 nothing is removed.
    """
    _require_prime(p)
    if r % p == 0:
        raise PDividesR(f"p={p} divides r={r}")
    S = sorted({(s + r * (n * (3 * n - 1) // 2)) % p for n in range(2 * p)})
    if p < 5:
        return ResidueSetReport(p, r, s, tuple(S))
    center = shifted_center(p, r, s)
    i0 = digit(center, p, 0)
    removed = None if (literal_i0 and i0 == 0) else i0
    S_star = tuple(x for x in S if x != removed)
    digit_ok = digit(center, p, 1) != p - 1
    return ResidueSetReport(p, r, s, tuple(S), S_star, i0, digit_ok)


@dataclass(frozen=True, order=True)
class CongruenceFamily:
    p: int
    r: int
    s: int
    lam: int
    j: int
    guaranteed_by: Guarantee = Guarantee.EMPIRICAL

    def __post_init__(self):
        if not 1 <= self.j <= self.p - 1:
            raise ValueError(f"j={self.j} outside [1, {self.p - 1}]")
        if self.lam < 1:
            raise ValueError("lambda must be positive")

    @property
    def modulus(self) -> int:
        return self.p ** self.lam

    def index(self, m: int) -> int:
        return self.p ** self.lam * m - self.j

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "s": self.s, "lambda": self.lam,
                "j": self.j, "guaranteed_by": self.guaranteed_by.value}


def _js(p: int, residues: Sequence[int]) -> range:
    return range(1, p - max(residues))


def predict(p: int, r: int, s: int, lam: int) -> list[CongruenceFamily]:
    """All families ``xi_{r,s}(p^lam m - j) = 0 (mod p^lam)`` that are proven.

    S(p, r, s) gives the unconditional range.  For p >= 5 the smaller set
    S*(p, r, s) extends it when lam = 1 or when the digit condition holds.
    """
    if lam < 1:
        raise ValueError("lambda must be positive")
    rep = residue_report(p, r, s)
    out = {j: Guarantee.THM_MAIN_S for j in _js(p, rep.S)}
    if rep.S_star:
        if rep.digit_ok:
            tag = Guarantee.THM_ASX if (r, s) == (1, 0) else Guarantee.THM_MAIN_SSTAR
        elif lam == 1:
            tag = Guarantee.THM_GARVAN
        else:
            tag = None
        if tag is not None:
            for j in _js(p, rep.S_star):
                out.setdefault(j, tag)
    return [CongruenceFamily(p, r, s, lam, j, g) for j, g in sorted(out.items())]


@dataclass(frozen=True)
class PDividesRFamily:
    """``xi_{p^lam r0}(p m - j) = 0 (mod p^lam)`` for every j coprime to p."""

    p: int
    r0: int
    lam: int
    js: tuple[int, ...]

    @property
    def r(self) -> int:
        return self.p ** self.lam * self.r0

    @property
    def modulus(self) -> int:
        return self.p ** self.lam

    @property
    def step(self) -> int:
        return self.p

    def to_dict(self) -> dict:
        return {"p": self.p, "r0": self.r0, "r": self.r, "lambda": self.lam,
                "modulus": self.modulus, "step": self.step, "j": list(self.js),
                "guaranteed_by": Guarantee.LEM_PR.value}


def predict_p_divides_r(p: int, r0: int, lam: int) -> PDividesRFamily:
    if r0 == 0:
        raise ValueError("r0 must be nonzero")
    _require_prime(p)
    return PDividesRFamily(p, r0, lam, tuple(range(1, p)))


class Status(str, Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"


@dataclass(frozen=True)
class VerificationResult:
    family: CongruenceFamily
    m_max: int
    status: Status
    witness: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        out = {"family": self.family.to_dict(), "m_max": self.m_max,
               "status": self.status.value, "witness": None}
        if self.witness is not None:
            out["witness"] = {"m": self.witness[0], "residue": self.witness[1]}
        return out


def _modular_table(r: int, s: int, modulus: int, n_max: int, limit: int) -> tuple[int, ...]:
    if n_max + 1 > limit:
        raise ResourceGuard(f"series length {n_max + 1} exceeds limit {limit}")
    return xi_table(XiRequest(r, s, n_max, CoefficientRing(modulus))).values


def _check_family(family: CongruenceFamily, m_max: int, values: Sequence[int]) -> VerificationResult:
    M = family.modulus
    for m in range(1, m_max + 1):
        res = values[family.index(m)] % M
        if res:
            return VerificationResult(family, m_max, Status.REFUTED, (m, res))
    return VerificationResult(family, m_max, Status.VERIFIED)


def verify(family: CongruenceFamily, m_max: int, limit: int = SERIES_LIMIT) -> VerificationResult:
    """Check the family numerically for ``1 <= m <= m_max``."""
    if m_max < 1:
        raise ValueError("m_max must be positive")
    n_max = family.modulus * m_max - 1
    values = _modular_table(family.r, family.s, family.modulus, n_max, limit)
    return _check_family(family, m_max, values)


def _verify_group(args):
    families, m_max, limit = args
    f0 = families[0]
    values = _modular_table(f0.r, f0.s, f0.modulus, f0.modulus * m_max - 1, limit)
    return [_check_family(f, m_max, values) for f in families]


def verify_many(families: Iterable[CongruenceFamily], m_max, limit: int = SERIES_LIMIT,
                jobs: int = 1) -> list[VerificationResult]:
    """Verify several families, sharing one table per (r, s, p, lambda).

    ``m_max`` is an int or a callable of the family giving its range.
    Results come back sorted by family.
    """
    groups: dict[tuple, list[CongruenceFamily]] = {}
    for f in families:
        mm = m_max(f) if callable(m_max) else m_max
        groups.setdefault((f.r, f.s, f.p, f.lam, mm), []).append(f)
    tasks = [(fs, key[-1], limit) for key, fs in sorted(groups.items())]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_verify_group, tasks))
    else:
        chunks = [_verify_group(t) for t in tasks]
    return sorted((res for chunk in chunks for res in chunk), key=lambda v: v.family)


def verify_p_divides_r(family: PDividesRFamily, m_max: int,
                       limit: int = SERIES_LIMIT) -> tuple[bool, dict | None]:
    """Check ``xi_{p^lam r0}(p m - j)`` mod ``p^lam`` for ``1 <= m <= m_max``."""
    n_max = family.p * m_max - 1
    values = _modular_table(family.r, 0, family.modulus, n_max, limit)
    for m in range(1, m_max + 1):
        for j in family.js:
            res = values[family.p * m - j]
            if res:
                return False, {"m": m, "j": j, "residue": res}
    return True, None


@dataclass(frozen=True, order=True)
class EmpiricalCongruence:
    """``xi(alpha m + beta) = 0 (mod rho)`` for every sampled ``m >= 0``."""

    alpha: int
    beta: int
    rho: int
    n_max: int = field(default=0, compare=False)

    def __post_init__(self):
        if not 0 <= self.beta < self.alpha:
            raise ValueError("need 0 <= beta < alpha")
        if self.rho < 2:
            raise ValueError("rho must be at least 2")

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.alpha, self.beta, self.rho)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "rho": self.rho,
                "n_max": self.n_max, "guaranteed_by": Guarantee.EMPIRICAL.value}


def _search_modulus(args) -> list[tuple[int, int, int]]:
    rho, alpha_max, n_max = args
    vals = np.array(xi_table(XiRequest(1, 0, n_max, CoefficientRing(rho))).values, dtype=np.int64)
    zero = vals == 0
    hits = []
    for alpha in range(1, alpha_max + 1):
        for beta in range(alpha):
            if zero[beta::alpha].all():
                hits.append((alpha, beta, rho))
    return hits


def search(alpha_max: int, rho_max: int, n_max: int, jobs: int = 1) -> list[EmpiricalCongruence]:
    """Screen every progression ``alpha m + beta`` (``beta < alpha <= alpha_max``)
    and modulus ``2 <= rho <= rho_max`` against ``xi(0..n_max)``.

    A hit only means no counterexample was sampled.
    """
    if n_max < 2 * alpha_max:
        raise ValueError("n_max must be at least 2 * alpha_max")
    tasks = [(rho, alpha_max, n_max) for rho in range(2, rho_max + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_search_modulus, tasks))
    else:
        chunks = [_search_modulus(t) for t in tasks]
    hits = sorted(h for chunk in chunks for h in chunk)
    return [EmpiricalCongruence(a, b, r, n_max) for a, b, r in hits]


def _prime_power_parts(n: int) -> list[tuple[int, int]]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += 1
    if n > 1:
        out.append((n, 1))
    return out


def implied_by(families: Iterable[CongruenceFamily], alpha: int, beta: int, rho: int) -> bool:
    """Whether ``xi(alpha m + beta) = 0 (mod rho)`` follows from the families
    by refining progressions and combining coprime moduli."""
    by_prime: dict[int, list[CongruenceFamily]] = {}
    for f in families:
        by_prime.setdefault(f.p, []).append(f)
    if rho < 2:
        return False
    for p, e in _prime_power_parts(rho):
        ok = False
        for f in by_prime.get(p, ()):
            pl = p ** f.lam
            if f.lam >= e and alpha % pl == 0 and (-beta) % pl == f.j:
                ok = True
                break
        if not ok:
            return False
    return True


def crt_closure(families: Sequence[CongruenceFamily], alpha_max: int,
                rho_max: int) -> set[tuple[int, int, int]]:
    """All ``(alpha, beta, rho)`` within the bounds implied by ``families``."""
    fams = [f for f in families if (f.r, f.s) == (1, 0)]
    if not fams:
        return set()
    return {(a, b, rho)
            for rho in range(2, rho_max + 1)
            for a in range(1, alpha_max + 1)
            for b in range(a)
            if implied_by(fams, a, b, rho)}


def fishburn_families(alpha_max: int, rho_max: int) -> list[CongruenceFamily]:
    """Every proven ``r = 1, s = 0`` family whose modulus or step can matter
    within the given bounds."""
    bound = max(alpha_max, rho_max)
    out = []
    for p in range(2, bound + 1):
        if not is_prime(p):
            continue
        lam = 1
        while p ** lam <= bound:
            out.extend(predict(p, 1, 0, lam))
            lam += 1
    return out


@dataclass
class CheckOutcome:
    name: str
    ok: bool
    samples: int
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "samples": self.samples, "witness": self.witness}


def check_binomial_hypothesis_lemma(p: int, r: int, s: int, lam: int, m_max: int,
                                    limit: int = SERIES_LIMIT) -> CheckOutcome:
    """``xi_{p^2 r, s}(p^lam m - j) = 0 (mod p^(lam-1))`` whenever
    ``C(s, p^2 - j) = 0 (mod p)``."""
    js = [j for j in range(1, p) if binom_valuation(s, p * p - j, p) >= 1]
    if lam < 2 or not js:
        return CheckOutcome("binomial_hypothesis", True, 0)
    M = p ** (lam - 1)
    values = _modular_table(p * p * r, s, M, p ** lam * m_max - 1, limit)
    samples = 0
    for j in js:
        for m in range(1, m_max + 1):
            samples += 1
            res = values[p ** lam * m - j]
            if res:
                return CheckOutcome("binomial_hypothesis", False, samples,
                                    {"j": j, "m": m, "residue": res})
    return CheckOutcome("binomial_hypothesis", True, samples)


def check_valuation_lemma(p: int, r: int, lam: int, count: int) -> CheckOutcome:
    """``(1 - (1 - q)^(r p))^n`` vanishes mod p^lam below ``q^(pn - (p-1)(lam-1))``
    for ``n = lam .. lam + count - 1``."""
    ring = CoefficientRing(p ** lam)
    samples = 0
    for n in range(lam, lam + count):
        order = p * n
        base = binomial_series(r * p, ring, order)
        x = type(base).one(ring, order) - base
        acc = type(base).one(ring, order)
        for _ in range(n):
            acc = acc * x
        bound = p * n - (p - 1) * (lam - 1)
        samples += 1
        bad = next((k for k in range(min(bound, order + 1)) if acc.coeffs[k]), None)
        if bad is not None:
            return CheckOutcome("valuation_bound", False, samples,
                                {"n": n, "degree": bad, "coefficient": acc.coeffs[bad]})
    return CheckOutcome("valuation_bound", True, samples)


def check_binomial_vanishing_lemma(p: int, lam: int, a_range: int, m_max: int) -> CheckOutcome:
    """``C(pa + i, p^lam m - j) = 0 (mod p^lam)`` for ``0 < j < p - i``,
    evaluated with exact generalized binomials."""
    M = p ** lam
    samples = 0
    for a in range(-a_range, a_range + 1):
        for i in range(p):
            for j in range(1, p - i):
                for m in range(1, m_max + 1):
                    samples += 1
                    val = generalized_binomial(p * a + i, M * m - j) % M
                    if val:
                        return CheckOutcome("binomial_vanishing", False, samples,
                                            {"a": a, "i": i, "j": j, "m": m, "residue": val})
    return CheckOutcome("binomial_vanishing", True, samples)


def lemma_checks(p: int, r: int, s: int, lam: int, sample_budget: int = 3,
                 limit: int = SERIES_LIMIT) -> list[CheckOutcome]:
    """Run the three supporting lemma checks with ``sample_budget`` controlling
    how many m, n and a values are sampled."""
    return [
        check_binomial_hypothesis_lemma(p, r, s, lam, sample_budget, limit),
        check_valuation_lemma(p, r, lam, sample_budget),
        check_binomial_vanishing_lemma(p, lam, sample_budget, sample_budget),
    ]


def digit_condition_blockers(r_values: Iterable[int], s: int, primes: Iterable[int]) -> list[tuple[int, int, int]]:
    """Triples where the digit condition fails and S* would have given more j."""
    out = []
    for p in primes:
        for r in r_values:
            if r % p == 0:
                continue
            rep = residue_report(p, r, s)
            if not rep.digit_ok and max(rep.S) > max(rep.S_star or rep.S):
                out.append((p, r, s))
    return out
