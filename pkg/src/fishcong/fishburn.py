"""Generalized Fishburn numbers xi_{r,s}(n).

The generating function is ``(1 - q)^s * sum_k prod_{j<=k} (1 - (1 - q)^(r j))``.
The k-th product has q-valuation k, so truncating at ``q^N`` the outer sum
stops at ``k = N``.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .series import (ZZ, CoefficientRing, RingMismatch, TruncatedSeries,
                     binomial_coefficients, cauchy_product)

CACHE_MAGIC = "XICACHE 1"
ASCENT_LIMIT = 14
_INT64_HEADROOM = 2 ** 62


class CorruptCache(ValueError):
    pass


class RequestMismatch(ValueError):
    pass


@dataclass(frozen=True)
class XiRequest:
    r: int
    s: int
    n_max: int
    ring: CoefficientRing = ZZ

    def __post_init__(self):
        if self.r == 0:
            raise ValueError("r must be nonzero")
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")


@dataclass(frozen=True)
class XiTable:
    request: XiRequest
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def _times_one_minus_q_power(cs: list[int], e: int, modulus: int | None) -> list[int]:
    """Multiply a coefficient list by ``(1 - q)^e`` in place-order, O(|e| N)."""
    n = len(cs)
    if e > 0:
        for _ in range(e):
            for k in range(n - 1, 0, -1):
                cs[k] -= cs[k - 1]
    else:
        for _ in range(-e):
            for k in range(1, n):
                cs[k] += cs[k - 1]
    if modulus is not None:
        cs = [c % modulus for c in cs]
    return cs


def _fishburn_sum_python(r: int, N: int, modulus: int | None, terms: int) -> list[int]:
    total = [1] + [0] * N
    prod = [1] + [0] * N
    power = [1] + [0] * N  # (1 - q)^(r k), updated incrementally
    for k in range(1, terms + 1):
        power = _times_one_minus_q_power(power, r, modulus)
        factor = [-c for c in power]
        factor[0] += 1
        if modulus is None:
            assert factor[0] == 0 and factor[1] == r * k
        prod = cauchy_product(prod, factor, N + 1, modulus)
        for i in range(k, N + 1):
            total[i] += prod[i]
        if modulus is not None:
            total = [c % modulus for c in total]
    return total


def _fits_int64(modulus: int | None, N: int) -> bool:
    return modulus is not None and (modulus - 1) ** 2 * (N + 1) < _INT64_HEADROOM


def _fishburn_sum_numpy(r: int, N: int, modulus: int, terms: int) -> list[int]:
    M = modulus
    total = np.zeros(N + 1, dtype=np.int64)
    total[0] = 1
    prod = total.copy()
    power = total.copy()
    for k in range(1, terms + 1):
        if r > 0:
            for _ in range(r):
                power[1:] = (power[1:] - power[:-1]) % M
        else:
            for _ in range(-r):
                power = np.cumsum(power) % M
        factor = (-power) % M
        # prod has valuation >= k - 1 and factor has valuation 1
        v = k - 1
        tail = np.convolve(prod[v:], factor[1 : N + 1 - v])[: N - v] % M
        prod = np.zeros(N + 1, dtype=np.int64)
        prod[v + 1 :] = tail
        if not prod.any():
            break
        total = (total + prod) % M
    return [int(c) for c in total]


def fishburn_sum(r: int, N: int, ring: CoefficientRing = ZZ,
                 terms: int | None = None) -> TruncatedSeries:
    """``F((1 - q)^r)`` through ``q^N``.

    With ``terms`` set, only the products for ``k <= terms`` are summed, which
    gives the truncation ``F((1 - q)^r, terms)``.
    """
    if r == 0:
        raise ValueError("r must be nonzero")
    terms = N if terms is None else min(terms, N)
    if _fits_int64(ring.modulus, N):
        cs = _fishburn_sum_numpy(r, N, ring.modulus, terms)
    else:
        cs = _fishburn_sum_python(r, N, ring.modulus, terms)
    return TruncatedSeries(ring, tuple(cs))


def _times_binomial_series(cs: list[int], s: int, modulus: int | None) -> list[int]:
    if s == 0:
        return cs
    N = len(cs) - 1
    if abs(s) <= 8:
        return _times_one_minus_q_power(list(cs), s, modulus)
    b = binomial_coefficients(s, N + 1)
    if _fits_int64(modulus, N):
        a = np.array(cs, dtype=np.int64)
        bb = np.array([x % modulus for x in b], dtype=np.int64)
        return [int(c) for c in np.convolve(a, bb)[: N + 1] % modulus]
    return cauchy_product(cs, b, N + 1, modulus)


def xi_table(req: XiRequest) -> XiTable:
    """Values ``xi_{r,s}(0..n_max)`` in the request's coefficient ring."""
    F = fishburn_sum(req.r, req.n_max, req.ring)
    vals = _times_binomial_series(list(F.coeffs), req.s, req.ring.modulus)
    return XiTable(req, tuple(req.ring.reduce(v) for v in vals))


def xi_values(r: int, s: int, n_max: int, modulus: int | None = None) -> tuple[int, ...]:
    return xi_table(XiRequest(r, s, n_max, CoefficientRing(modulus))).values


def xi_rs_from_xi_r(r: int, s: int, table: XiTable) -> XiTable:
    """Combine r-Fishburn numbers into ``xi_{r,s}`` via alternating binomials."""
    if s < 0:
        raise ValueError("the binomial combination needs s >= 0")
    req = table.request
    if req.r != r or req.s != 0:
        raise RequestMismatch(f"need a table for (r={r}, s=0), got (r={req.r}, s={req.s})")
    ring = req.ring
    weights = [(-1) ** j * math.comb(s, j) for j in range(s + 1)]
    xs = table.values
    out = []
    for n in range(len(xs)):
        acc = sum(w * xs[n - j] for j, w in enumerate(weights) if n - j >= 0)
        out.append(ring.reduce(acc))
    return XiTable(XiRequest(r, s, req.n_max, ring), tuple(out))


def ascent_sequence_count(n: int) -> int:
    """Number of ascent sequences of length ``n``.

    Counts (x_1..x_n) with x_1 = 0 and 0 <= x_{i+1} <= 1 + asc(x_1..x_i),
    straight from the definition.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > ASCENT_LIMIT:
        raise ValueError(f"ascent-sequence enumeration is limited to n <= {ASCENT_LIMIT}")
    if n == 0:
        return 1

    @lru_cache(maxsize=None)
    def extend(remaining: int, last: int, asc: int) -> int:
        if remaining == 0:
            return 1
        return sum(extend(remaining - 1, x, asc + (x > last)) for x in range(asc + 2))

    return extend(n - 1, 0, 0)


def cache_store(table: XiTable, path) -> None:
    """Write an exact table atomically (temp file + rename)."""
    req = table.request
    if not req.ring.exact:
        raise RingMismatch("only exact tables are cached")
    path = Path(path)
    lines = [CACHE_MAGIC, f"r={req.r} s={req.s}"]
    lines += [f"{n} {v}" for n, v in enumerate(table.values)]
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_load(path, req: XiRequest) -> XiTable:
    """Read a cached table for ``(req.r, req.s)``.

    The result covers ``min(req.n_max, cached length)`` and is reduced into
    ``req.ring``.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptCache(f"{path}: not UTF-8") from exc
    lines = text.splitlines()
    if len(lines) < 3 or lines[0].strip() != CACHE_MAGIC:
        raise CorruptCache(f"{path}: bad header")
    try:
        fields = dict(tok.split("=", 1) for tok in lines[1].split())
        r, s = int(fields["r"]), int(fields["s"])
    except (ValueError, KeyError) as exc:
        raise CorruptCache(f"{path}: bad parameter line {lines[1]!r}") from exc
    if (r, s) != (req.r, req.s):
        raise RequestMismatch(f"{path} holds r={r} s={s}, requested r={req.r} s={req.s}")
    values = []
    for expected, line in enumerate(lines[2:]):
        parts = line.split()
        if len(parts) != 2:
            raise CorruptCache(f"{path}: malformed row {line!r}")
        try:
            n, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise CorruptCache(f"{path}: malformed row {line!r}") from exc
        if n != expected:
            raise CorruptCache(f"{path}: expected index {expected}, found {n}")
        values.append(v)
    if not text.endswith("\n"):
        raise CorruptCache(f"{path}: truncated final row")
    values = values[: req.n_max + 1]
    got = XiRequest(req.r, req.s, len(values) - 1, req.ring)
    return XiTable(got, tuple(req.ring.reduce(v) for v in values))


def cached_xi_table(req: XiRequest, path=None) -> XiTable:
    """xi_table, reading and refreshing an exact cache file when given."""
    if path is None:
        return xi_table(req)
    path = Path(path)
    if path.exists():
        hit = cache_load(path, XiRequest(req.r, req.s, req.n_max))
        if hit.request.n_max >= req.n_max:
            return XiTable(req, tuple(req.ring.reduce(v) for v in hit.values))
    exact = xi_table(XiRequest(req.r, req.s, req.n_max))
    cache_store(exact, path)
    return XiTable(req, tuple(req.ring.reduce(v) for v in exact.values))
