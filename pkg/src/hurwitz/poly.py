"""Exact polynomial arithmetic over the rationals and small extensions.

Univariate polynomials are coefficient lists of ``gmpy2.mpq``, low degree
first.  Bivariate polynomials come in two shapes: the genus-zero model
``p(x) - t*q(x)`` and a dense array of x-polynomials indexed by the t-power.
Discriminants with respect to x are computed exactly by evaluation and
interpolation modulo many primes with a Hadamard-style bound, which keeps
the degree-31 families with huge coefficients tractable.

Root multiplicity patterns at algebraic branch points are evaluated inside
the quotient field Q[u]/(m(u)); only small-degree m occur (the branch loci
of the shipped families factor into rationals, quadratics and cubics).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from gmpy2 import is_prime, is_square, isqrt, mpq, mpz, next_prime

from . import modp
from .perm import CycleType

QQ0 = mpq(0)
QQ1 = mpq(1)


def q(x):
    """Parse an exact rational from int/str/mpq."""
    if isinstance(x, str):
        x = x.strip()
    return mpq(x)


# ---------------------------------------------------------------------------
# generic field operations: the rationals and quotient fields Q[u]/(m)


class Rationals:
    zero = QQ0
    one = QQ1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError
        return 1 / a

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def from_mpq(a):
        return a


QQ = Rationals()


class QuotientField:
    """Q[u]/(m(u)) with m irreducible; elements are mpq tuples of length deg m."""

    def __init__(self, modulus):
        m = [mpq(c) for c in modulus]
        lead = m[-1]
        self.mod = [c / lead for c in m]
        self.deg = len(m) - 1
        if self.deg < 1:
            raise ValueError("modulus must have positive degree")
        self.zero = (QQ0,) * self.deg
        self.one = (QQ1,) + (QQ0,) * (self.deg - 1)
        if self.deg == 1:
            self.gen = (-self.mod[0],)
        else:
            self.gen = (QQ0, QQ1) + (QQ0,) * (self.deg - 2)

    def from_mpq(self, a):
        return (mpq(a),) + (QQ0,) * (self.deg - 1)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        d = self.deg
        conv = [QQ0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        for k in range(2 * d - 2, d - 1, -1):
            c = conv[k]
            if c:
                conv[k] = QQ0
                for j in range(d):
                    conv[k - d + j] -= c * self.mod[j]
        return tuple(conv[:d])

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def inv(self, a):
        """Extended Euclid of a (as a u-polynomial) against the modulus."""
        r0 = list(self.mod)
        r1 = [mpq(c) for c in a]
        while r1 and r1[-1] == 0:
            r1.pop()
        if not r1:
            raise ZeroDivisionError("inverse of zero in quotient field")
        s0, s1 = [], [QQ1]
        while True:
            if len(r1) == 1:
                c = 1 / r1[0]
                out = [x * c for x in s1] + [QQ0] * self.deg
                return tuple(out[: self.deg])
            quo, rem = _qpoly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(quo, s1))
            if not r1:
                raise ZeroDivisionError("element not invertible (reducible modulus?)")


def _qpoly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [QQ0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _qpoly_trim(out)


def _qpoly_sub(a, b):
    out = [QQ0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _qpoly_trim(out)


def _qpoly_divmod(a, b):
    a = list(a)
    quo = [QQ0] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        d = len(a) - len(b)
        quo[d] = c
        for i, x in enumerate(b):
            a[d + i] -= c * x
        _qpoly_trim(a)
    return quo, a


# ---------------------------------------------------------------------------
# univariate polynomials over Q


class UniPoly:
    """Dense polynomial over Q; coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [mpq(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_strings(cls, strs):
        return cls([q(s) for s in strs])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(
            [
                (self.coeffs[i] if i < len(self.coeffs) else QQ0)
                + (other.coeffs[i] if i < len(other.coeffs) else QQ0)
                for i in range(n)
            ]
        )

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, type(QQ0), type(mpz(0)))):
            return UniPoly([c * mpq(other) for c in self.coeffs])
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return UniPoly([])
        out = [QQ0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = UniPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError
        a = list(self.coeffs)
        quo = [QQ0] * max(0, len(a) - len(other.coeffs) + 1)
        inv = 1 / other.coeffs[-1]
        while len(a) >= len(other.coeffs) and a:
            c = a[-1] * inv
            d = len(a) - len(other.coeffs)
            quo[d] = c
            for i, x in enumerate(other.coeffs):
                a[d + i] -= c * x
            while a and a[-1] == 0:
                a.pop()
        return UniPoly(quo), UniPoly(a)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def deriv(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        acc = QQ0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, p):
        """Coefficient list reduced mod p; ValueError on bad reduction."""
        out = []
        for c in self.coeffs:
            den = int(c.denominator) % p
            if den == 0:
                raise ValueError(f"denominator vanishes mod {p}")
            out.append(int(c.numerator) % p * pow(den, -1, p) % p)
        if self.coeffs and out[-1] == 0:
            raise ValueError(f"leading coefficient vanishes mod {p}")
        return out

    def primitive(self):
        """Integer-primitive scalar multiple with positive leading coefficient."""
        if self.is_zero():
            return self
        den = 1
        for c in self.coeffs:
            den = math.lcm(den, int(c.denominator))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, abs(c))
        ints = [c // g for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return UniPoly(ints)

    def shift(self, k):
        """Multiply by x^k."""
        return UniPoly((QQ0,) * k + self.coeffs)

    def monic(self):
        if self.is_zero():
            return self
        inv = 1 / self.coeffs[-1]
        return UniPoly([c * inv for c in self.coeffs])

    def one_norm(self):
        return sum(abs(c) for c in self.coeffs)

    def __repr__(self):
        return f"UniPoly(deg={self.degree})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


def _coerce(x):
    if isinstance(x, UniPoly):
        return x
    try:
        return UniPoly([mpq(x)])
    except Exception as exc:
        raise TypeError(f"cannot coerce {type(x)}") from exc


def poly_gcd(a, b):
    """Monic gcd over Q, with content normalization to limit blowup."""
    a, b = a.primitive(), b.primitive()
    while not b.is_zero():
        r = (a % b).primitive()
        a, b = b, r
    return a.monic()


def yun_squarefree(f):
    """[(g_i, i)] with f = lc * prod g_i^i, g_i monic squarefree, over Q."""
    f = f.monic()
    if f.degree <= 0:
        return []
    g = poly_gcd(f, f.deriv())
    if g.degree == 0:
        return [(f, 1)]
    out = []
    w = (f // g).monic()
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, g)
        part = (w // y).monic()
        if part.degree > 0:
            out.append((part, i))
        w = y
        g = (g // y).monic()
        i += 1
    return out


def squarefree_part(f):
    g = poly_gcd(f, f.deriv())
    return (f // g).primitive() if g.degree > 0 else f.primitive()


# generic-field variants, for multiplicity patterns over extensions


def kpoly_trim(K, a):
    while a and K.is_zero(a[-1]):
        a.pop()
    return a


def kpoly_mul(K, a, b):
    if not a or not b:
        return []
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not K.is_zero(x):
            for j, y in enumerate(b):
                out[i + j] = K.add(out[i + j], K.mul(x, y))
    return kpoly_trim(K, out)


def kpoly_divmod(K, a, b):
    a = list(a)
    quo = [K.zero] * max(0, len(a) - len(b) + 1)
    inv = K.inv(b[-1])
    while len(a) >= len(b) and a:
        c = K.mul(a[-1], inv)
        d = len(a) - len(b)
        quo[d] = c
        for i, x in enumerate(b):
            a[d + i] = K.sub(a[d + i], K.mul(c, x))
        kpoly_trim(K, a)
    return quo, a


def kpoly_gcd(K, a, b):
    a, b = list(a), list(b)
    kpoly_trim(K, a)
    kpoly_trim(K, b)
    while b:
        _, r = kpoly_divmod(K, a, b)
        a, b = b, r
    if a:
        inv = K.inv(a[-1])
        a = [K.mul(c, inv) for c in a]
    return a


def kpoly_deriv(K, a):
    return [K.mul(K.from_mpq(mpq(i)), c) for i, c in enumerate(a)][1:]


def kpoly_monic(K, a):
    if not a:
        return a
    inv = K.inv(a[-1])
    return [K.mul(c, inv) for c in a]


def k_squarefree_parts_polys(K, f):
    """[(g_i, multiplicity i)] with f ~ prod g_i^i over the field K (char 0)."""
    f = kpoly_monic(K, list(f))
    if len(f) <= 1:
        return []
    g = kpoly_gcd(K, f, kpoly_deriv(K, f))
    w, _ = kpoly_divmod(K, f, g)
    w = kpoly_monic(K, w)
    out = []
    i = 1
    while len(w) > 1:
        y = kpoly_gcd(K, w, g)
        part, _ = kpoly_divmod(K, w, y)
        if len(part) > 1:
            out.append((kpoly_monic(K, part), i))
        w = y
        g, _ = kpoly_divmod(K, g, y)
        g = kpoly_monic(K, g)
        i += 1
    return out


def k_squarefree_parts(K, f):
    """[(degree of g_i, multiplicity i)] over the field K (char 0)."""
    return [(len(g) - 1, i) for g, i in k_squarefree_parts_polys(K, f)]


# ---------------------------------------------------------------------------
# bivariate polynomials


@dataclass(frozen=True)
class QuadPoint:
    """The joint set of conjugate roots of an irreducible minimal polynomial."""

    minpoly: UniPoly

    @property
    def degree(self):
        return self.minpoly.degree

    def field(self):
        return QuotientField(self.minpoly.coeffs)

    def __str__(self):
        return f"roots of {self.minpoly}"


INFINITY = "inf"


class BiPoly:
    """Polynomial in (t, x): either the model p(x) - t*q(x) or dense in t."""

    def __init__(self, p=None, q=None, t_coeffs=None):
        if t_coeffs is not None:
            self.kind = "dense"
            cs = list(t_coeffs)
            while cs and cs[-1].is_zero():
                cs.pop()
            self.t_coeffs = tuple(cs)
            self.p = self.q = None
        else:
            if p is None or q is None:
                raise ValueError("need p and q for the model form")
            self.kind = "model"
            self.p, self.q = p, q
            self.t_coeffs = (p, -q)

    @property
    def deg_x(self):
        return max(c.degree for c in self.t_coeffs)

    @property
    def deg_t(self):
        return len(self.t_coeffs) - 1

    def eval_t(self, t0):
        """Specialize t to an exact rational; returns a UniPoly in x."""
        t0 = mpq(t0)
        out = UniPoly([])
        power = QQ1
        for c in self.t_coeffs:
            out = out + c * power
            power = power * t0
        return out

    def eval_t_field(self, K, t0):
        """Specialize t to a field element; returns a K-coefficient list."""
        n = self.deg_x
        out = [K.zero] * (n + 1)
        power = K.one
        for c in self.t_coeffs:
            for i, a in enumerate(c.coeffs):
                if a:
                    out[i] = K.add(out[i], K.mul(K.from_mpq(a), power))
            power = K.mul(power, t0)
        return kpoly_trim(K, out)

    def coprime_model(self):
        if self.kind != "model":
            return True
        return poly_gcd(self.p, self.q).degree == 0


def discriminant_t(f):
    """disc_x of a BiPoly, as an integer-coefficient UniPoly in t.

    Exact up to a nonzero rational scalar (inputs are scaled integral); the
    computation interpolates resultants mod many primes and CRTs with a
    Hadamard-style bound on the Sylvester determinant.
    """
    n = f.deg_x
    if n < 2:
        raise ValueError("deg_x must be at least 2")
    rows = []
    den = 1
    for c in f.t_coeffs:
        for co in c.coeffs:
            den = math.lcm(den, int(co.denominator))
    for c in f.t_coeffs:
        rows.append([int(co * den) for co in c.coeffs] + [0] * (n + 1 - len(c.coeffs)))
    dt = len(rows) - 1
    deg_bound = dt * (2 * n - 1)
    fnorm = sum(abs(v) for row in rows for v in row) + 1
    dnorm = sum(abs(v) * i for row in rows for i, v in enumerate(row)) + 1
    bound = fnorm ** (n - 1) * dnorm**n * 4
    tpoints = list(range(deg_bound + 1))
    residues, primes = [], []
    pr = 1 << 24
    acc = 1
    while acc < 2 * bound:
        pr = int(next_prime(pr))
        primes.append(pr)
        acc *= pr
        vals = []
        for t0 in tpoints:
            fc = [0] * (n + 1)
            power = 1
            for row in rows:
                for i, v in enumerate(row):
                    fc[i] = (fc[i] + v * power) % pr
                power = (power * t0) % pr
            der = [(i * fc[i]) % pr for i in range(1, n + 1)]
            vals.append(modp.resultant_mod(fc, der, pr))
        residues.append(_interp_mod(tpoints, vals, pr))
    coeffs = []
    for j in range(deg_bound + 1):
        pairs = [(residues[i][j], primes[i]) for i in range(len(primes))]
        coeffs.append(_crt_signed(pairs))
    return UniPoly(coeffs)


def _interp_mod(xs, ys, p):
    """Newton interpolation over GF(p); returns dense coefficients."""
    npts = len(xs)
    d = [y % p for y in ys]
    for order in range(1, npts):
        for i in range(npts - 1, order - 1, -1):
            num = (d[i] - d[i - 1]) % p
            den = (xs[i] - xs[i - order]) % p
            d[i] = num * pow(den, -1, p) % p
    poly = [d[npts - 1]]
    for i in range(npts - 2, -1, -1):
        # poly = poly*(x - x_i) + d[i]
        poly = [(-xs[i] * poly[0] + d[i]) % p] + [
            (poly[j - 1] - xs[i] * poly[j]) % p for j in range(1, len(poly))
        ] + [poly[-1]]
        if len(poly) > npts:
            poly = poly[:npts]
    return poly + [0] * (npts - len(poly))


def _crt_signed(pairs):
    x, m = 0, 1
    for r, p in pairs:
        t = (r - x) * pow(m % p, -1, p) % p
        x += m * t
        m *= p
    if x > m // 2:
        x -= m
    return x


def multiplicity_pattern(f, at):
    """Root multiplicities of the x-polynomial at a branch-point candidate.

    `at` is an exact rational, a QuadPoint (all of its conjugate roots share
    the pattern), or INFINITY.  The point at x = infinity contributes the
    x-degree drop as one extra part.  The parts always sum to deg_x.
    """
    n = f.deg_x
    if isinstance(at, str) and at == INFINITY:
        spec = f.t_coeffs[-1]
        parts = []
        for g, m in yun_squarefree(spec):
            parts.extend([m] * g.degree)
        drop = n - spec.degree
    elif isinstance(at, QuadPoint):
        K = at.field()
        spec = f.eval_t_field(K, K.gen)
        parts = []
        for deg_part, m in k_squarefree_parts(K, spec):
            parts.extend([m] * deg_part)
        drop = n - (len(spec) - 1)
    else:
        spec = f.eval_t(at)
        parts = []
        for g, m in yun_squarefree(spec):
            parts.extend([m] * g.degree)
        drop = n - spec.degree
    if drop > 0:
        parts.append(drop)
    ct = CycleType(parts)
    if ct.degree != n:
        raise ValueError("pattern does not sum to deg_x")
    return ct


# ---------------------------------------------------------------------------
# small-degree factorization over Q (modular + Hensel, verified)


def _hensel_step(f, g, h, s, t, m):
    """One quadratic Hensel step: f = g*h, s*g + t*h = 1, all mod m -> mod m^2.

    f and h monic; deg s < deg h, deg t < deg g.  Arithmetic over Z/m^2.
    """
    M = m * m

    def mul(a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % M
        return _trim_int(out)

    def sub(a, b):
        out = [0] * max(len(a), len(b))
        for i, x in enumerate(a):
            out[i] = x
        for i, x in enumerate(b):
            out[i] = (out[i] - x) % M
        return _trim_int(out)

    def add(a, b):
        out = [0] * max(len(a), len(b))
        for i, x in enumerate(a):
            out[i] = x
        for i, x in enumerate(b):
            out[i] = (out[i] + x) % M
        return _trim_int(out)

    def divmod_monic(a, b):
        a = list(a)
        quo = [0] * max(0, len(a) - len(b) + 1)
        while len(a) >= len(b) and a:
            c = a[-1] % M
            d = len(a) - len(b)
            quo[d] = c
            for i, x in enumerate(b):
                a[d + i] = (a[d + i] - c * x) % M
            _trim_int(a)
        return quo, a

    e = sub(f, mul(g, h))
    qq_, r = divmod_monic(mul(s, e), h)
    g1 = add(add(g, mul(t, e)), mul(qq_, g))
    h1 = add(h, r)
    b = sub(add(mul(s, g1), mul(t, h1)), [1])
    cc, dd = divmod_monic(mul(s, b), h1)
    s1 = sub(s, dd)
    t1 = sub(sub(t, mul(t, b)), mul(cc, g1))
    return g1, h1, s1, t1


def _trim_int(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _bezout_mod(g, h, p):
    """s, t with s*g + t*h = 1 over GF(p) (g, h coprime)."""
    r0, r1 = [int(c) % p for c in g], [int(c) % p for c in h]
    s0, s1 = [1], []
    t0, t1 = [], [1]

    def dm(a, b):
        a = list(a)
        quo = [0] * max(0, len(a) - len(b) + 1)
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and a:
            c = a[-1] * inv % p
            d = len(a) - len(b)
            quo[d] = c
            for i, x in enumerate(b):
                a[d + i] = (a[d + i] - c * x) % p
            _trim_int(a)
        return quo, a

    def ml(a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return _trim_int(out)

    def sb(a, b):
        out = [0] * max(len(a), len(b))
        for i, x in enumerate(a):
            out[i] = x
        for i, x in enumerate(b):
            out[i] = (out[i] - x) % p
        return _trim_int(out)

    while r1:
        quo, r = dm(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sb(s0, ml(quo, s1))
        t0, t1 = t1, sb(t0, ml(quo, t1))
    c = pow(r0[0], -1, p)
    return [x * c % p for x in s0], [x * c % p for x in t0]


def factor_smalldeg(f, max_factor_degree=8):
    """Certified irreducible factorization over Q for small degrees.

    Rational roots come from modular roots plus exact verification; proper
    nonlinear splits come from a single-prime factorization Hensel-lifted
    beyond a Mignotte-style bound, with every candidate verified by exact
    division.  Intended for branch loci (degree at most ~8).
    """
    f = f.primitive()
    factors = []
    for r in rational_roots(f):
        lin = UniPoly([-r, 1])
        while True:
            quo, rem = f.divmod(lin)
            if not rem.is_zero():
                break
            factors.append(lin)
            f = quo.primitive()
    if f.degree <= 0:
        return factors
    if f.degree <= 3:
        factors.append(f)
        return factors
    if f.degree > max_factor_degree:
        factors.append(f)
        return factors
    split = _split_once(f)
    if split is None:
        factors.append(f)
        return factors
    g, h = split
    return factors + factor_smalldeg(g, max_factor_degree) + factor_smalldeg(
        h, max_factor_degree
    )


def _split_once(f):
    """One nontrivial factorization f = g*h over Q, or None if irreducible."""
    n = f.degree
    # Mignotte-style bound on coefficients of any monic rational factor
    bound = int(2**n * f.one_norm() * abs(f.coeffs[-1])) + 1
    pr = 1 << 20
    while True:
        pr = int(next_prime(pr))
        try:
            fc = f.eval_mod(pr)
        except ValueError:
            continue
        if modp.is_squarefree_mod(fc, pr):
            break
    fp = _factor_mod_full_arr(fc, pr)
    if len(fp) <= 1:
        return None
    fmonic_q = f.monic()
    for rsize in range(1, len(fp) // 2 + 1):
        for subset in itertools.combinations(range(len(fp)), rsize):
            g0 = [1]
            for i in subset:
                g0 = _mul_mod(g0, fp[i], pr)
            h0 = [1]
            for i in range(len(fp)):
                if i not in subset:
                    h0 = _mul_mod(h0, fp[i], pr)
            cand = _lift_factor(fmonic_q, g0, h0, pr, bound)
            if cand is None:
                continue
            quo, rem = f.divmod(cand)
            if rem.is_zero() and 0 < cand.degree < n:
                return cand.primitive(), quo.primitive()
    return None


def _lift_factor(fmonic, g0, h0, p, bound):
    """Hensel-lift the monic split f = g0*h0 mod p, reconstruct g over Q."""
    s, t = _bezout_mod(g0, h0, p)
    g, h = [int(c) for c in g0], [int(c) for c in h0]
    m = p
    while m <= 2 * bound * bound:
        fm = [int(c.numerator) * pow(int(c.denominator), -1, m * m) % (m * m)
              for c in fmonic.coeffs]
        g, h, s, t = _hensel_step(fm, g, h, s, t, m)
        m = m * m
    cand = []
    for c in g:
        fr = _ratrec(c % m, m)
        if fr is None:
            return None
        cand.append(fr)
    return UniPoly(cand)


def _mul_mod(a, b, M):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % M
    return _trim_int(out)


def _factor_mod_full_arr(fc, p):
    """Monic irreducible factors (as int lists) of squarefree fc mod p."""
    arr = modp.monic(np.array(fc, dtype=np.int64), p)
    out = []
    remaining = arr
    counts = modp.distinct_degree_counts(remaining, p)
    for d in sorted(counts):
        part = _degree_part(remaining, p, d)
        if len(part) > 1:
            for h in _edf(part, d, p):
                out.append([int(c) for c in h])
            remaining = modp.monic(modp.pdivmod(remaining, part, p)[0], p)
    return out


def _degree_part(g, p, d):
    """Product of the irreducible degree-d factors of squarefree g."""
    f_arr = modp.monic(g, p)
    if len(f_arr) - 1 == 0:
        return f_arr
    w = modp.pmod(np.array([0, 1], dtype=np.int64), f_arr, p)
    for _ in range(d):
        acc = np.array([1], dtype=np.int64)
        b = w
        e = p
        while e:
            if e & 1:
                acc = modp.pmod(modp.pmul(acc, b, p), f_arr, p)
            b = modp.pmod(modp.pmul(b, b, p), f_arr, p)
            e >>= 1
        w = acc
    diff = list(w) + [0, 0]
    diff[1] = (diff[1] - 1) % p
    return modp.pgcd(f_arr, modp.trim(np.array(diff, dtype=np.int64)), p)


def _edf(g, d, p):
    """Cantor-Zassenhaus equal-degree splitting (odd p)."""
    import random

    deg = len(g) - 1
    if deg == d:
        return [g]
    rng = random.Random(deg * 1000003 + d)
    while True:
        c = [rng.randrange(p) for _ in range(deg)]
        a = modp.trim(np.array(c, dtype=np.int64))
        if len(a) == 0:
            continue
        e = (p**d - 1) // 2
        acc = np.array([1], dtype=np.int64)
        b = modp.pmod(a, g, p)
        while e:
            if e & 1:
                acc = modp.pmod(modp.pmul(acc, b, p), g, p)
            b = modp.pmod(modp.pmul(b, b, p), g, p)
            e >>= 1
        accm = list(acc) + [0]
        accm[0] = (accm[0] - 1) % p
        h = modp.pgcd(g, modp.trim(np.array(accm, dtype=np.int64)), p)
        if 0 < len(h) - 1 < deg:
            rest = modp.monic(modp.pdivmod(g, h, p)[0], p)
            return _edf(h, d, p) + _edf(rest, d, p)


def rational_roots(f):
    """All rational roots of f, found modularly and verified exactly.

    Roots are read off mod one good prime, Newton-lifted past the height
    bound (numerators bounded by |a_0|-scale, denominators by the leading
    coefficient) and reconstructed; every candidate is verified exactly.
    """
    f = squarefree_part(f.primitive())
    if f.degree < 1:
        return []
    height = max(int(abs(c.numerator)) for c in f.coeffs) + 1
    bound = 2 * (height + 1) ** 2
    pr = 1 << 23
    while True:
        pr = _next_good_prime(f, pr)
        fc = f.eval_mod(pr)
        if modp.is_squarefree_mod(fc, pr):
            break
    roots = set()
    ints = [int(c) for c in f.primitive().coeffs]
    dints = [i * c for i, c in enumerate(ints)][1:]
    for r0 in _roots_mod(f, pr):
        M = pr
        r = r0
        while M < bound:
            M = M * M
            fr = _eval_int(ints, r, M)
            dfr = _eval_int(dints, r, M)
            r = (r - fr * pow(dfr, -1, M)) % M
        cand = _ratrec(r % M, M)
        if cand is not None and f.eval(cand) == 0:
            roots.add(cand)
    return sorted(roots)


def _eval_int(coeffs, x, M):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % M
    return acc


def _next_good_prime(f, start):
    pr = start
    lead = f.coeffs[-1]
    while True:
        pr = int(next_prime(pr))
        if int(lead.numerator) % pr:
            return pr


def _roots_mod(f, p):
    fc = f.eval_mod(p)
    arr = modp.monic(np.array(fc, dtype=np.int64), p)
    xp = modp.powmod_x(p, arr, p)
    diff = list(xp) + [0] * max(0, 2 - len(xp))
    diff[1] = (diff[1] - 1) % p
    g = modp.pgcd(arr, modp.trim(np.array(diff, dtype=np.int64)), p)
    if len(g) - 1 > 40:
        raise ValueError("too many roots to enumerate")
    return _linear_roots(g, p)


def _linear_roots(g, p):
    """Roots of a product of distinct linear factors over GF(p)."""
    import random

    g = modp.monic(np.asarray(g, dtype=np.int64), p)
    deg = len(g) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-int(g[0])) % p]
    rng = random.Random(int(g[0]) ^ deg)
    for _ in range(300):
        c = rng.randrange(p)
        base = modp.pmod(np.array([c, 1], dtype=np.int64), g, p)
        acc = np.array([1], dtype=np.int64)
        e = (p - 1) // 2
        b = base
        while e:
            if e & 1:
                acc = modp.pmod(modp.pmul(acc, b, p), g, p)
            b = modp.pmod(modp.pmul(b, b, p), g, p)
            e >>= 1
        accm = list(acc) + [0]
        accm[0] = (accm[0] - 1) % p
        h = modp.pgcd(g, modp.trim(np.array(accm, dtype=np.int64)), p)
        if 0 < len(h) - 1 < deg:
            return _linear_roots(h, p) + _linear_roots(
                modp.monic(modp.pdivmod(g, h, p)[0], p), p
            )
    raise RuntimeError("root splitting failed")


def _ratrec(x, M):
    """Rational reconstruction of x mod M with |num|, den < sqrt(M/2)."""
    a, b = M, x % M
    p0, p1 = 0, 1
    while b and b * b * 2 >= M:
        quo, r = divmod(a, b)
        a, b = b, r
        p0, p1 = p1, p0 - quo * p1
    if p1 == 0 or b * b * 2 >= M or p1 * p1 * 2 >= M:
        return None
    return mpq(b, p1)


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation


def _pos_primitive(f):
    """Divide by the positive content; never flips the sign."""
    if f.is_zero():
        return f
    g = f.primitive()
    if (g.coeffs[-1] > 0) != (f.coeffs[-1] > 0):
        g = -g
    return g


def sturm_chain(f):
    """Sign-stable Sturm chain of the squarefree part of f."""
    sqf = squarefree_part(f)
    chain = [sqf, _pos_primitive(sqf.deriv())]
    while chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            raise RuntimeError("nontrivial gcd inside Sturm chain")
        chain.append(_pos_primitive(-rem))
    return chain


def _sign_changes(vals):
    signs = [v for v in vals if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _chain_at(chain, x):
    return _sign_changes([p.eval(x) for p in chain])


def _chain_at_inf(chain, positive):
    vals = []
    for p in chain:
        if p.is_zero():
            continue
        lead = p.coeffs[-1]
        vals.append(lead if positive or p.degree % 2 == 0 else -lead)
    return _sign_changes(vals)


def sturm_count(f, lo=None, hi=None):
    """Number of distinct real roots in (lo, hi]; the full line by default."""
    if f.degree < 1:
        return 0
    chain = sturm_chain(f)
    vlo = _chain_at_inf(chain, False) if lo is None else _chain_at(chain, mpq(lo))
    vhi = _chain_at_inf(chain, True) if hi is None else _chain_at(chain, mpq(hi))
    return vlo - vhi


def is_totally_real(f):
    """All roots of f real: the squarefree part has full real root count."""
    sqf = squarefree_part(f)
    return sturm_count(sqf) == sqf.degree


def root_bound(f):
    """Cauchy bound: all real roots lie in (-B, B)."""
    lead = abs(f.coeffs[-1])
    m = max((abs(c) for c in f.coeffs[:-1]), default=QQ0)
    return 1 + m / lead


def real_root_isolate(f, width=None):
    """Disjoint open rational intervals, one real root each, sorted.

    Works on the squarefree part; with `width` given, the intervals are
    refined below that width.
    """
    if f.degree < 1:
        return []
    chain = sturm_chain(f)
    sqf = chain[0]
    B = root_bound(sqf)
    out = []
    stack = [(-B, B)]
    counts = {}

    def count(a, b):
        key = (a, b)
        if key not in counts:
            counts[key] = _chain_at(chain, a) - _chain_at(chain, b)
        return counts[key]

    while stack:
        a, b = stack.pop()
        c = count(a, b)
        if c == 0:
            continue
        if c == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if sqf.eval(mid) == 0:
            mid += (b - a) / (4 * sqf.degree + 6)
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort()
    if width is not None:
        out = [_refine_interval(chain, a, b, mpq(width)) for a, b in out]
    return out


def _refine_interval(chain, a, b, width):
    while b - a > width:
        mid = (a + b) / 2
        if chain[0].eval(mid) == 0:
            quarter = min(width / 2, (b - a) / 4)
            return (mid - quarter / 2, mid + quarter / 2)
        if _chain_at(chain, a) - _chain_at(chain, mid) == 1:
            b = mid
        else:
            a = mid
    return (a, b)


# ---------------------------------------------------------------------------
# discriminants of univariate polynomials


def resultant_q(f, g):
    """Exact resultant over Q via modular evaluation + CRT."""
    if f.is_zero() or g.is_zero():
        return QQ0
    fi = f.primitive()
    gi = g.primitive()
    scale = (f.coeffs[-1] / fi.coeffs[-1]) ** gi.degree * (
        g.coeffs[-1] / gi.coeffs[-1]
    ) ** fi.degree
    n, m = fi.degree, gi.degree
    bound = (int(fi.one_norm()) + 1) ** m * (int(gi.one_norm()) + 1) ** n * 4
    pairs = []
    pr = 1 << 24
    acc = 1
    while acc < 2 * bound:
        pr = int(next_prime(pr))
        try:
            fc = fi.eval_mod(pr)
            gc = gi.eval_mod(pr)
        except ValueError:
            continue
        pairs.append((modp.resultant_mod(fc, gc, pr), pr))
        acc *= pr
    return mpq(_crt_signed(pairs)) * scale


def discriminant(f):
    """disc(f) = (-1)^(n(n-1)/2) res(f, f') / lc(f), exact over Q."""
    n = f.degree
    if n < 1:
        raise ValueError("constant polynomial")
    res = resultant_q(f, f.deriv())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res / f.coeffs[-1]


def is_rational_square(x):
    x = mpq(x)
    if x < 0:
        return False
    return bool(is_square(mpz(x.numerator))) and bool(is_square(mpz(x.denominator)))


def disc_square_test(f):
    """True iff disc(f) is a nonzero square in Q; f must be squarefree."""
    if poly_gcd(f, f.deriv()).degree > 0:
        raise ValueError("polynomial is not squarefree")
    d = discriminant(f)
    if d == 0:
        raise ValueError("zero discriminant")
    return is_rational_square(d)


def disc_cofactor_check(f, target_factors):
    """disc(f) / prod(p^e) must be the square of an integer.

    Returns (ok, report).  `target_factors` is a list of (prime, exponent)
    pairs; primality of each prime is checked.
    """
    d = discriminant(f.primitive())
    assert d.denominator == 1
    d = mpz(d.numerator)
    target = mpz(1)
    for p, e in target_factors:
        if not is_prime(mpz(p)):
            raise ValueError(f"{p} is not prime")
        target *= mpz(p) ** e
    if d % target != 0:
        return False, {"error": "target does not divide disc",
                       "disc_digits": len(str(abs(d)))}
    cof = d // target
    ok = cof > 0 and bool(is_square(cof))
    rep = {
        "disc_digits": len(str(abs(d))),
        "target": [[int(p), int(e)] for p, e in target_factors],
        "cofactor_is_square": bool(ok),
    }
    if ok:
        rep["cofactor_sqrt_digits"] = len(str(int(isqrt(cof))))
        rep["cofactor_sqrt"] = str(int(isqrt(cof)))
    return ok, rep


def factor_mod_p(f, p):
    """Multiset of (degree, multiplicity) of the factorization of f mod p."""
    den = 1
    for c in f.coeffs:
        den = math.lcm(den, int(c.denominator))
    if den % p == 0:
        raise ValueError(f"denominator vanishes mod {p}")
    return modp.factor_degrees([int(c * den) for c in f.coeffs], p)
