"""Brute-force reference computations, kept independent of the package."""

import itertools
import math


def factorial_valuation(n, p):
    """Legendre's formula for the exponent of p in n!."""
    v, pk = 0, p
    while pk <= n:
        v += n // pk
        pk *= p
    return v


def legendre_binom_valuation(n, k, p):
    return factorial_valuation(n, p) - factorial_valuation(k, p) - factorial_valuation(n - k, p)


def brute_valuation(x, p):
    if x == 0:
        return math.inf
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def enumerate_ascent_sequences(n):
    """Literal enumeration of all ascent sequences of length n."""
    if n == 0:
        return [()]
    out = []
    for tail in itertools.product(range(n), repeat=n - 1):
        seq = (0,) + tail
        asc = 0
        ok = True
        for a, b in zip(seq, seq[1:]):
            if b > asc + 1:
                ok = False
                break
            asc += b > a
        if ok:
            out.append(seq)
    return out


def pochhammer_by_subsets(n, order):
    """(q;q)_n through q^order by expanding over subsets of {1..n}."""
    cs = [0] * (order + 1)
    for size in range(n + 1):
        for T in itertools.combinations(range(1, n + 1), size):
            d = sum(T)
            if d <= order:
                cs[d] += (-1) ** size
    return cs


def naive_product(a, b, length):
    return [sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b))
            for k in range(length)]


def padic_digits_by_search(num, den, p, count):
    """Digits of num/den via the unique y in [0, p^count) with y*den = num."""
    M = p ** count
    y = next(y for y in range(M) if (y * den - num) % M == 0)
    out = []
    for _ in range(count):
        y, d = divmod(y, p)
        out.append(d)
    return out


def xi_by_symbolic_expansion(r, s, N):
    """xi_{r,s}(0..N) by expanding every product fully in exact arithmetic,
    using math.comb for each binomial, without any valuation shortcuts."""
    def one_minus_q_pow(e):
        return [(-1) ** k * (math.comb(e, k) if e >= 0 else (-1) ** k * math.comb(k - e - 1, k))
                for k in range(N + 1)]

    total = [0] * (N + 1)
    prod = [1] + [0] * N
    total[0] = 1
    for k in range(1, N + 1):
        f = [-c for c in one_minus_q_pow(r * k)]
        f[0] += 1
        prod = naive_product(prod, f, N + 1)
        total = [x + y for x, y in zip(total, prod)]
    return naive_product(total, one_minus_q_pow(s), N + 1)
