"""Dense polynomial arithmetic over GF(p) for word-sized primes.

Coefficient vectors are numpy int64 arrays, low degree first.  Primes must
satisfy p < 2^31 so that convolution partial sums stay inside int64 (the
Dedekind grids use primes below 10^5).  Distinct-degree factorization goes
through the Frobenius matrix, which makes the per-specialization cost of a
cycle-type sample almost independent of p.
"""

from __future__ import annotations

import numpy as np


def trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def pmul(a, b, p):
    if len(a) == 0 or len(b) == 0:
        return a[:0]
    return trim(np.convolve(a, b) % p)


def pmod(a, f, p):
    """a mod f with f monic."""
    a = a.copy()
    n = len(f) - 1
    while len(a) >= len(f):
        c = a[-1] % p
        if c:
            a[-n - 1:-1] = (a[-n - 1:-1] - c * f[:-1]) % p
        a = a[:-1]
        a = trim(a)
    return trim(a % p)


def pdivmod(a, b, p):
    binv = pow(int(b[-1]), -1, p)
    a = a.copy() % p
    q = np.zeros(max(0, len(a) - len(b) + 1), dtype=np.int64)
    while len(a) >= len(b):
        c = (int(a[-1]) * binv) % p
        d = len(a) - len(b)
        if c:
            q[d] = c
            a[d:] = (a[d:] - c * b) % p
        a = trim(a[:-1])
    return q, a


def pgcd(a, b, p):
    a, b = trim(a % p), trim(b % p)
    while len(b):
        _, r = pdivmod(a, b, p)
        a, b = b, r
    if len(a):
        a = (a * pow(int(a[-1]), -1, p)) % p
    return a


def pderiv(a, p):
    if len(a) <= 1:
        return a[:0]
    return trim((a[1:] * np.arange(1, len(a), dtype=np.int64)) % p)


def monic(a, p):
    a = trim(a % p)
    if len(a) == 0:
        return a
    return (a * pow(int(a[-1]), -1, p)) % p


def powmod_x(e, f, p):
    """x^e mod f (f monic)."""
    result = np.array([1], dtype=np.int64)
    base = pmod(np.array([0, 1], dtype=np.int64), f, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), f, p)
        base = pmod(pmul(base, base, p), f, p)
        e >>= 1
    return result


def squarefree_parts(a, p):
    """[(g_i, m_i)] with a ~ prod g_i^{m_i}, g_i squarefree (gcd chain).

    Requires p > deg a so the derivative never collapses (true for all grids
    here: degrees <= 31, primes > 1000).
    """
    a = monic(a, p)
    if len(a) - 1 >= p:
        raise ValueError("prime too small for the gcd-chain decomposition")
    out = []
    g = pgcd(a, pderiv(a, p), p)
    w, _ = pdivmod(a, g, p)
    w = monic(w, p)
    i = 1
    while len(w) > 1:
        y = pgcd(w, g, p)
        part, _ = pdivmod(w, y, p)
        if len(part) > 1:
            out.append((monic(part, p), i))
        w = y
        g, _ = pdivmod(g, y, p)
        g = monic(g, p)
        i += 1
    return out


def _frobenius_matrix(f, p):
    n = len(f) - 1
    xp = powmod_x(p, f, p)
    Q = np.zeros((n, n), dtype=np.int64)
    cur = np.array([1], dtype=np.int64)
    Q[0, 0] = 1
    for i in range(1, n):
        cur = pmod(pmul(cur, xp, p), f, p)
        Q[: len(cur), i] = cur
    return Q


def distinct_degree_counts(f, p):
    """{d: number of irreducible degree-d factors} for monic squarefree f."""
    f = monic(f, p)
    n = len(f) - 1
    counts = {}
    if n == 0:
        return counts
    Q = _frobenius_matrix(f, p)
    w = np.zeros(n, dtype=np.int64)
    if n == 1:
        return {1: 1}
    w[1] = 1  # coefficients of x
    remaining = f
    d = 0
    while len(remaining) > 1:
        d += 1
        if 2 * d > len(remaining) - 1:
            deg = len(remaining) - 1
            counts[deg] = counts.get(deg, 0) + 1
            break
        w = (Q @ w) % p  # w = x^{p^d} mod f
        diff = w.copy()
        diff[1] = (diff[1] - 1) % p
        g = pgcd(remaining, trim(diff), p)
        if len(g) > 1:
            deg = len(g) - 1
            counts[d] = counts.get(d, 0) + deg // d
            remaining, _ = pdivmod(remaining, g, p)
            remaining = monic(remaining, p)
    return counts


def factor_degrees(coeffs, p):
    """Multiset [(degree, multiplicity)] of the factorization over GF(p).

    `coeffs` is an integer coefficient list (low first); the leading
    coefficient must not vanish mod p (raises ValueError otherwise: bad
    reduction).
    """
    a = trim(np.array([c % p for c in coeffs], dtype=np.int64))
    if len(a) != len(coeffs):
        raise ValueError("leading coefficient vanishes mod p")
    if len(a) <= 1:
        raise ValueError("constant polynomial")
    out = []
    for g, m in squarefree_parts(a, p):
        for d, cnt in distinct_degree_counts(g, p).items():
            out.extend([(d, m)] * cnt)
    return sorted(out)


def is_squarefree_mod(coeffs, p):
    a = trim(np.array([c % p for c in coeffs], dtype=np.int64))
    if len(a) != len(coeffs):
        return False
    return len(pgcd(a, pderiv(a, p), p)) == 1


def resultant_mod(a, b, p):
    """res(a, b) over GF(p) via the Euclidean sequence."""
    a = trim(np.asarray(a, dtype=np.int64) % p)
    b = trim(np.asarray(b, dtype=np.int64) % p)
    if len(a) == 0 or len(b) == 0:
        return 0
    res = 1
    while True:
        if len(b) == 1:
            res = (res * pow(int(b[0]), len(a) - 1, p)) % p
            return res
        _, r = pdivmod(a, b, p)
        da, db, dr = len(a) - 1, len(b) - 1, len(r) - 1
        if len(r) == 0:
            return 0
        res = (res * pow(-1, da * db, p) * pow(int(b[-1]), da - dr, p)) % p
        a, b = b, r
