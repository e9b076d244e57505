"""Continuation of genus-zero families and recovery of coefficient relations.

A family shape prescribes, for each branch slot, how the specialized
polynomial factors: the slot over t=0 builds p, the slot over infinity
builds q, and every other finite slot contributes coefficient-matching
residuals p - t_b * q = c_b * prod F_j^{m_j}.  A quadratic slot (the pair of
roots of u^2 + a*u + lambda) is handled jointly in the ring base[u]/(u^2 +
a*u + lambda), which keeps the system defined over the base even when the
two points are conjugate; the modulus coefficient `a` may itself be an
unknown.  Pins (coefficients frozen to constants) kill the Moebius and
scaling freedom so the Newton system is square.

Scalars are either truncated p-adics (exact arithmetic mod p^K; Newton is
Hensel lifting, so continuation targets must agree with the seed mod p) or
high-precision complex floats.  Jacobians are exact: every residual is
evaluated in forward-mode jets.

Algebraic dependencies between two solved coefficients are recovered from
many samples by a nullspace fit of the monomial matrix; over the p-adics the
elimination tracks valuations (samples in one residue disc make the matrix
heavily non-unit) and the kernel vector is reconstructed into exact
rationals, verified against held-out samples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import mpmath
from gmpy2 import mpq, next_prime

from .poly import (
    QuotientField,
    UniPoly,
    _ratrec,
    k_squarefree_parts_polys,
    kpoly_trim,
)

# ---------------------------------------------------------------------------
# scalar modes


class PadicMode:
    """Truncated p-adic integers: values are ints mod p^prec."""

    kind = "padic"

    def __init__(self, p, prec=200):
        self.p = int(p)
        self.prec = int(prec)
        self.modulus = self.p**self.prec

    def from_mpq(self, x):
        x = mpq(x)
        den = int(x.denominator)
        if den % self.p == 0:
            raise ValueError(f"denominator not a {self.p}-adic unit")
        return int(x.numerator) * pow(den, -1, self.modulus) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def is_zero(self, a):
        return a % self.modulus == 0

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        return pow(a, -1, self.modulus)

    def valuation(self, a):
        a %= self.modulus
        if a == 0:
            return self.prec
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def residual_norm(self, vals):
        """0 iff all entries vanish to full precision."""
        return max((self.prec - self.valuation(v) for v in vals), default=0)

    zero = 0
    one = 1


class ComplexMode:
    """mpmath complex scalars at a fixed working precision."""

    kind = "complex"

    def __init__(self, dps=200):
        self.dps = dps
        self.ctx = mpmath.mp.clone()
        self.ctx.dps = dps
        self.tolerance = mpmath.mpf(10) ** (-(dps * 3 // 4))

    def from_mpq(self, x):
        x = mpq(x)
        return self.ctx.mpf(int(x.numerator)) / self.ctx.mpf(int(x.denominator))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return abs(a) < self.tolerance

    def is_unit(self, a):
        return abs(a) > self.tolerance

    def inv(self, a):
        return 1 / a

    def residual_norm(self, vals):
        return max((abs(v) for v in vals), default=mpmath.mpf(0))

    @property
    def zero(self):
        return self.ctx.mpf(0)

    @property
    def one(self):
        return self.ctx.mpf(1)


# ---------------------------------------------------------------------------
# forward-mode jets


class Jet:
    __slots__ = ("v", "g")

    def __init__(self, v, g):
        self.v = v
        self.g = g


def _jet_ops(mode, nvars):
    zero_g = (mode.zero,) * nvars

    def const(v):
        return Jet(v, zero_g)

    def var(v, i):
        return Jet(v, tuple(mode.one if k == i else mode.zero for k in range(nvars)))

    def add(a, b):
        return Jet(mode.add(a.v, b.v), tuple(mode.add(x, y) for x, y in zip(a.g, b.g)))

    def sub(a, b):
        return Jet(mode.sub(a.v, b.v), tuple(mode.sub(x, y) for x, y in zip(a.g, b.g)))

    def mul(a, b):
        return Jet(
            mode.mul(a.v, b.v),
            tuple(
                mode.add(mode.mul(a.v, y), mode.mul(b.v, x))
                for x, y in zip(a.g, b.g)
            ),
        )

    return const, var, add, sub, mul


# ---------------------------------------------------------------------------
# family shapes


@dataclass
class FactorSpec:
    """One factor of a slot: x-degree, multiplicity, per-coefficient pins.

    `coeffs` has degree+1 entries, each an exact rational (pinned) or None
    (unknown); the leading entry is normally pinned to 1.
    """

    degree: int
    mult: int
    coeffs: list

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient list does not match degree")


@dataclass
class SlotSpec:
    """A branch slot: where it sits and how the fiber factors there."""

    at: object  # "zero" | "inf" | mpq | "quad"
    factors: list
    scale: object = mpq(1)  # exact rational or None (unknown)
    quad_a: object = None  # for "quad": exact rational or None (unknown)


@dataclass
class FamilyShape:
    degree: int
    slots: list

    def __post_init__(self):
        kinds = [s.at for s in self.slots]
        if "zero" not in kinds or "inf" not in kinds:
            raise ValueError("need slots over zero and infinity")
        for s in self.slots:
            covered = sum(f.degree * f.mult for f in s.factors)
            if s.at == "inf":
                if covered > self.degree:
                    raise ValueError("infinity slot exceeds degree")
            elif covered > self.degree:
                raise ValueError(f"slot {s.at} exceeds degree")

    def slot(self, at):
        for s in self.slots:
            if s.at == at:
                return s
        raise KeyError(at)


class ShapeSystem:
    """Square Newton system of coefficient-matching residuals for a shape."""

    def __init__(self, shape):
        self.shape = shape
        self.unknowns = []  # (slot_index, factor_index, coeff_index) and specials
        for si, slot in enumerate(shape.slots):
            if slot.scale is None:
                self.unknowns.append((si, "scale", 0))
            if slot.at == "quad" and slot.quad_a is None:
                self.unknowns.append((si, "quad_a", 0))
            for fi, fac in enumerate(slot.factors):
                for ci, c in enumerate(fac.coeffs):
                    if c is None:
                        if slot.at == "quad":
                            self.unknowns.append((si, fi, ci, "x"))
                            self.unknowns.append((si, fi, ci, "y"))
                        else:
                            self.unknowns.append((si, fi, ci))
        self.nvars = len(self.unknowns)
        self.active_rows = None

    # -- residual construction ------------------------------------------------

    def _expand_side(self, slot, values, ops, mode, take):
        """Product of slot factors (jets), including the scale."""
        const, var, add, sub, mul = ops

        def poly_mul(a, b):
            out = [const(mode.zero)] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] = add(out[i + j], mul(x, y))
            return out

        prod = [take(slot, "scale")]
        for fi, fac in enumerate(slot.factors):
            coeffs = [take(slot, (fi, ci)) for ci in range(fac.degree + 1)]
            for _ in range(fac.mult):
                prod = poly_mul(prod, coeffs)
        return prod

    def residual(self, values, lam, mode):
        """All coefficient-matching residuals as jets (value + gradient)."""
        ops = _jet_ops(mode, self.nvars)
        const, var, add, sub, mul = ops
        lamc = const(mode.from_mpq(lam))
        index = {u: k for k, u in enumerate(self.unknowns)}

        def scalar(si, key):
            slot = self.shape.slots[si]
            if key == "scale":
                if slot.scale is None:
                    k = index[(si, "scale", 0)]
                    return var(values[k], k)
                return const(mode.from_mpq(slot.scale))
            if key == "quad_a":
                if slot.quad_a is None:
                    k = index[(si, "quad_a", 0)]
                    return var(values[k], k)
                return const(mode.from_mpq(slot.quad_a))
            fi, ci = key
            pin = slot.factors[fi].coeffs[ci]
            if pin is not None:
                return const(mode.from_mpq(pin))
            k = index[(si, fi, ci)]
            return var(values[k], k)

        def ring_scalar(si, key):
            """(x, y) jet pair for quad slots; base scalars lift with y=0."""
            slot = self.shape.slots[si]
            if key == "scale":
                return (scalar(si, "scale"), const(mode.zero))
            fi, ci = key
            pin = slot.factors[fi].coeffs[ci]
            if pin is not None:
                return (const(mode.from_mpq(pin)), const(mode.zero))
            kx = index[(si, fi, ci, "x")]
            ky = index[(si, fi, ci, "y")]
            return (var(values[kx], kx), var(values[ky], ky))

        zero_slot = self.shape.slot("zero")
        inf_slot = self.shape.slot("inf")
        zi = self.shape.slots.index(zero_slot)
        ii = self.shape.slots.index(inf_slot)
        p_jets = self._expand_side(
            zero_slot, values, ops, mode, lambda sl, key: scalar(zi, key)
        )
        q_jets = self._expand_side(
            inf_slot, values, ops, mode, lambda sl, key: scalar(ii, key)
        )
        n = self.shape.degree
        rows = []
        for si, slot in enumerate(self.shape.slots):
            if slot.at in ("zero", "inf"):
                continue
            if slot.at == "quad":
                rows.extend(
                    self._quad_rows(si, slot, values, ops, mode, ring_scalar,
                                    scalar, p_jets, q_jets, lamc)
                )
            else:
                t_b = const(mode.from_mpq(slot.at))
                rhs = self._expand_side(
                    slot, values, ops, mode, lambda sl, key, _si=si: scalar(_si, key)
                )
                for i in range(n + 1):
                    pi = p_jets[i] if i < len(p_jets) else const(mode.zero)
                    qi = q_jets[i] if i < len(q_jets) else const(mode.zero)
                    ri = rhs[i] if i < len(rhs) else const(mode.zero)
                    rows.append(sub(sub(pi, mul(t_b, qi)), ri))
        return rows

    def _quad_rows(self, si, slot, values, ops, mode, ring_scalar, scalar,
                   p_jets, q_jets, lamc):
        const, var, add, sub, mul = ops
        aJ = scalar(si, "quad_a")

        def rmul(c, d):
            x1, y1 = c
            x2, y2 = d
            yy = mul(y1, y2)
            return (
                sub(mul(x1, x2), mul(lamc, yy)),
                sub(add(mul(x1, y2), mul(x2, y1)), mul(aJ, yy)),
            )

        def rpoly_mul(a, b):
            zero = (const(mode.zero), const(mode.zero))
            out = [zero] * (len(a) + len(b) - 1)
            for i, c in enumerate(a):
                for j, d in enumerate(b):
                    mx, my = rmul(c, d)
                    out[i + j] = (add(out[i + j][0], mx), add(out[i + j][1], my))
            return out

        prod = [ring_scalar(si, "scale")]
        for fi, fac in enumerate(slot.factors):
            coeffs = [ring_scalar(si, (fi, ci)) for ci in range(fac.degree + 1)]
            for _ in range(fac.mult):
                prod = rpoly_mul(prod, coeffs)
        n = self.shape.degree
        rows = []
        zero = const(mode.zero)
        for i in range(n + 1):
            pi = p_jets[i] if i < len(p_jets) else zero
            qi = q_jets[i] if i < len(q_jets) else zero
            rx = prod[i][0] if i < len(prod) else zero
            ry = prod[i][1] if i < len(prod) else zero
            # p - u*q - rhs: x-part p - rhs_x, u-part -q - rhs_y
            rows.append(sub(pi, rx))
            rows.append(sub(Jet(mode.neg(qi.v), tuple(mode.neg(t) for t in qi.g)), ry))
        return rows

    # -- calibration of structurally-zero rows --------------------------------

    def setup(self, seed_values, lam, mode):
        """Determine the active residual rows; the system must be square."""
        rows = self.residual(seed_values, lam, mode)
        active = []
        for i, r in enumerate(rows):
            structural_zero = mode.is_zero(r.v) and all(
                mode.is_zero(g) for g in r.g
            )
            if not structural_zero:
                active.append(i)
        if len(active) != self.nvars:
            raise ValueError(
                f"system is not square: {len(active)} equations, "
                f"{self.nvars} unknowns (adjust pins)"
            )
        self.active_rows = active
        return active


def newton_solve(system, values, lam, mode, max_iter=60, damping=8):
    """Newton iteration to full precision (p-adic) or mode tolerance."""
    if system.active_rows is None:
        raise RuntimeError("call system.setup(seed) first")
    values = list(values)
    prev_norm = None
    for _ in range(max_iter):
        rows = system.residual(values, lam, mode)
        act = [rows[i] for i in system.active_rows]
        if mode.kind == "padic":
            if all(mode.is_zero(r.v) for r in act):
                return values
        else:
            norm = mode.residual_norm([r.v for r in act])
            if norm < mode.tolerance * 10:
                return values
        dx = _linear_solve(act, mode)
        if dx is None:
            raise ArithmeticError("singular Jacobian")
        if mode.kind == "padic":
            values = [mode.add(v, d) for v, d in zip(values, dx)]
            continue
        # damped update for the complex mode
        norm0 = mode.residual_norm([r.v for r in act])
        step = 1
        for _ in range(damping):
            cand = [v + d * step for v, d in zip(values, dx)]
            rows2 = system.residual(cand, lam, mode)
            act2 = [rows2[i] for i in system.active_rows]
            if mode.residual_norm([r.v for r in act2]) < norm0:
                values = cand
                break
            step = step / 2
        else:
            raise ArithmeticError("Newton diverged (no damping step accepted)")
    rows = system.residual(values, lam, mode)
    act = [rows[i] for i in system.active_rows]
    if mode.kind == "padic" and all(mode.is_zero(r.v) for r in act):
        return values
    if mode.kind == "complex" and mode.residual_norm(
        [r.v for r in act]
    ) < mode.tolerance * 100:
        return values
    raise ArithmeticError("Newton did not converge")


def _linear_solve(rows, mode):
    """Solve J dx = -r from jet rows; None when no unit pivot exists."""
    n = len(rows)
    mat = [list(r.g) + [mode.neg(r.v)] for r in rows]
    for c in range(n):
        piv = None
        if mode.kind == "padic":
            for r0 in range(c, n):
                if mode.is_unit(mat[r0][c]):
                    piv = r0
                    break
        else:
            best = None
            for r0 in range(c, n):
                a = abs(mat[r0][c])
                if best is None or a > best:
                    best, piv = a, r0
            if best is None or best < mode.tolerance:
                piv = None
        if piv is None:
            return None
        mat[c], mat[piv] = mat[piv], mat[c]
        inv = mode.inv(mat[c][c])
        mat[c] = [mode.mul(x, inv) for x in mat[c]]
        for r0 in range(n):
            if r0 != c and not mode.is_zero(mat[r0][c]):
                f = mat[r0][c]
                mat[r0] = [
                    mode.sub(x, mode.mul(f, y)) for x, y in zip(mat[r0], mat[c])
                ]
    return [mat[i][n] for i in range(n)]


def continue_lambda(system, start_values, lam0, path, mode, substeps=8):
    """Predictor-corrector continuation along a list of lambda values.

    In p-adic mode every target must lie in the residue disc of lam0 and
    each step is a straight Hensel lift.  In complex mode failed steps are
    retried with up to `substeps` recursive bisections.
    """
    out = []
    cur = list(start_values)
    cur_lam = mpq(lam0) if mode.kind == "padic" else lam0
    for lam in path:
        if mode.kind == "padic":
            cur = newton_solve(system, cur, lam, mode)
        else:
            cur = _complex_step(system, cur, cur_lam, lam, mode, substeps)
        cur_lam = lam
        out.append(list(cur))
    return out


def _complex_step(system, values, lam_from, lam_to, mode, depth):
    try:
        return newton_solve(system, values, lam_to, mode, max_iter=40)
    except ArithmeticError:
        if depth <= 0:
            raise ArithmeticError("step underflow near a degenerate configuration")
        mid = (lam_from + lam_to) / 2
        half = _complex_step(system, values, lam_from, mid, mode, depth - 1)
        return _complex_step(system, half, mid, lam_to, mode, depth - 1)


def braid_transport(system, values, lam0, mode, steps=64):
    """Move the two quadratic-slot branch points half a turn around each other.

    The sum of the pair stays fixed while the difference rotates by pi, so
    lambda travels once around the circle centered at (sum/2)^2.  Complex
    mode only.  Returns the transported solution at the original lambda.
    """
    if mode.kind != "complex":
        raise ValueError("braid transport needs the complex mode")
    quad = system.shape.slot("quad")
    si = system.shape.slots.index(quad)
    if quad.quad_a is None:
        k = system.unknowns.index((si, "quad_a", 0))
        a_val = values[k]
    else:
        a_val = mode.from_mpq(quad.quad_a)
    lam_c = mode.from_mpq(lam0) if isinstance(lam0, (int, mpq)) else lam0
    ctx = mode.ctx
    center = (a_val / 2) ** 2
    radius = center - lam_c  # lam(theta) = center - (d/2)^2 e^{2 i theta}
    cur = list(values)
    cur_lam = lam_c
    for j in range(1, steps + 1):
        theta = ctx.pi * j / steps
        lam = center - radius * ctx.exp(2j * theta)
        cur = _complex_step(system, cur, cur_lam, lam, mode, 6)
        cur_lam = lam
    return cur


def quad_slot_seed(p, q, a, lam, pattern):
    """Exact ring coefficients of the quadratic-slot factors of a seed cover.

    Factors p - u*q over Q[u]/(u^2 + a*u + lam) by multiplicity; the result
    must match `pattern` (a list of (mult, degree) pairs, highest mult
    first).  Returns, per pattern entry, the non-leading coefficients as
    (x, y) rational pairs.
    """
    K = QuotientField([mpq(lam), mpq(a), mpq(1)])
    n = max(p.degree, q.degree)
    fu = []
    for i in range(n + 1):
        pi = p.coeffs[i] if i <= p.degree else mpq(0)
        qi = q.coeffs[i] if i <= q.degree else mpq(0)
        fu.append(K.sub(K.from_mpq(pi), K.mul(K.gen, K.from_mpq(qi))))
    kpoly_trim(K, fu)
    parts = {m: g for g, m in k_squarefree_parts_polys(K, fu)}
    out = []
    for mult, degree in pattern:
        g = parts.get(mult)
        if g is None or len(g) - 1 != degree:
            raise ValueError(
                f"seed does not realize pattern ({mult}, {degree}) at the quad slot"
            )
        out.append([gg for gg in g[:-1]])
    return out


def series_lift(system, values, lam0, order, mode):
    """Solution as truncated power series in (lambda - lam0).

    Newton on series with the Jacobian inverted at order zero; each sweep
    gains one order, which is plenty for the moderate orders used here.
    """
    if system.active_rows is None:
        raise RuntimeError("call system.setup(seed) first")
    nv = system.nvars
    series = [[v] + [mode.zero] * order for v in values]
    # J0^-1 at the base point
    rows = system.residual(values, lam0, mode)
    act = [rows[i] for i in system.active_rows]
    J = [list(r.g) for r in act]
    Jinv = _invert_matrix(J, mode)
    if Jinv is None:
        raise ArithmeticError("singular Jacobian at the series base point")
    for sweep in range(1, order + 1):
        res = _series_residual(system, series, lam0, order, mode)
        for k in range(nv):
            corr = [mode.zero] * (order + 1)
            for m in range(nv):
                for d in range(order + 1):
                    corr[d] = mode.add(corr[d], mode.mul(Jinv[k][m], res[m][d]))
            series[k] = [mode.sub(series[k][d], corr[d]) for d in range(order + 1)]
        if all(all(mode.is_zero(c) for c in r) for r in
               _series_residual(system, series, lam0, order, mode)):
            break
    return series


def _series_residual(system, series, lam0, order, mode):
    """Residual rows as truncated series in (lambda - lam0)."""
    smode = _SeriesMode(mode, order)
    vals = [list(s) for s in series]
    lam_series = _SeriesMode.wrap_lambda(mode, lam0, order)
    rows = system.residual(vals, lam_series, smode)
    return [list(rows[i].v) for i in system.active_rows]


class _SeriesMode:
    """Truncated power series over a base mode, quacking like a mode."""

    kind = "series"

    def __init__(self, base, order):
        self.base = base
        self.order = order

    @staticmethod
    def wrap_lambda(base, lam0, order):
        lam = [base.from_mpq(lam0)] + [base.zero] * order
        if order >= 1:
            lam[1] = base.one
        return lam

    def from_mpq(self, x):
        if isinstance(x, list):
            return list(x)
        return [self.base.from_mpq(x)] + [self.base.zero] * self.order

    def _lift(self, x):
        if isinstance(x, list):
            return x
        return [x] + [self.base.zero] * self.order

    def add(self, a, b):
        a, b = self._lift(a), self._lift(b)
        return [self.base.add(x, y) for x, y in zip(a, b)]

    def sub(self, a, b):
        a, b = self._lift(a), self._lift(b)
        return [self.base.sub(x, y) for x, y in zip(a, b)]

    def neg(self, a):
        a = self._lift(a)
        return [self.base.neg(x) for x in a]

    def mul(self, a, b):
        a, b = self._lift(a), self._lift(b)
        out = [self.base.zero] * (self.order + 1)
        for i, x in enumerate(a):
            if self.base.is_zero(x):
                continue
            for j, y in enumerate(b):
                if i + j > self.order:
                    break
                out[i + j] = self.base.add(out[i + j], self.base.mul(x, y))
        return out

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in self._lift(a))

    @property
    def zero(self):
        return [self.base.zero] * (self.order + 1)

    @property
    def one(self):
        return [self.base.one] + [self.base.zero] * self.order


def _invert_matrix(J, mode):
    n = len(J)
    aug = [list(row) + [mode.one if i == j else mode.zero for j in range(n)]
           for i, row in enumerate(J)]
    for c in range(n):
        piv = None
        for r0 in range(c, n):
            if mode.is_unit(aug[r0][c]):
                piv = r0
                break
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = mode.inv(aug[c][c])
        aug[c] = [mode.mul(x, inv) for x in aug[c]]
        for r0 in range(n):
            if r0 != c and not mode.is_zero(aug[r0][c]):
                f = aug[r0][c]
                aug[r0] = [mode.sub(x, mode.mul(f, y))
                           for x, y in zip(aug[r0], aug[c])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# relation fitting


def fit_relation(samples, d1, d2, mode, holdout=0):
    """Bivariate relation of bidegree (d1, d2) annihilating the samples.

    Returns a dict monomial -> mpq (normalized so some pinned coefficient is
    exact), or None when the nullspace dimension is not 1.  The trailing
    `holdout` samples are excluded from the fit and used for verification.
    """
    fit = samples[: len(samples) - holdout] if holdout else samples
    monos = [(i, j) for i in range(d1 + 1) for j in range(d2 + 1)]
    if len(fit) < len(monos) + 3:
        raise ValueError("not enough samples for this degree pair")
    if mode.kind == "padic":
        vec = _padic_nullspace(fit, monos, mode)
    else:
        vec = _complex_nullspace(fit, monos, mode)
    if vec is None:
        return None
    rel = dict(zip(monos, vec))
    if holdout:
        for x, y in samples[len(samples) - holdout:]:
            acc = mode.zero
            for (i, j), c in rel.items():
                term = mode.mul(mode.from_mpq(c), _mono(mode, x, y, i, j))
                acc = mode.add(acc, term)
            if mode.kind == "padic":
                # allow the precision spent during elimination
                if mode.valuation(acc) < mode.prec - _fit_loss(len(monos)) - 10:
                    return None
            elif abs(acc) > mode.tolerance * 10**6:
                return None
    return rel


def _mono(mode, x, y, i, j):
    out = mode.one
    for _ in range(i):
        out = mode.mul(out, x)
    for _ in range(j):
        out = mode.mul(out, y)
    return out


def _fit_loss(ncols):
    # samples confined to one residue disc cost ~k p-digits at column k
    return ncols * (ncols - 1) // 2


def _padic_nullspace(samples, monos, mode):
    """Kernel vector of the monomial matrix over Z/p^K, valuation-aware.

    Samples confined to one residue disc make the columns collapse modulo
    increasing powers of p, so pivots carry positive valuations; rows below
    the pivot are eliminated by exact division and the kernel vector is
    recovered by back-substitution, with every division checked.
    """
    p, M = mode.p, mode.modulus
    mat = [[_mono(mode, x, y, i, j) for (i, j) in monos] for x, y in samples]
    ncols = len(monos)
    zero_cut = mode.prec - _fit_loss(ncols) - 30
    pivots = []  # (row, col, valuation), increasing rows
    r0 = 0
    for c in range(ncols):
        best, bv = None, None
        for r1 in range(r0, len(mat)):
            if mat[r1][c] % M:
                v = mode.valuation(mat[r1][c])
                if bv is None or v < bv:
                    bv, best = v, r1
        if best is None or bv >= zero_cut:
            continue  # effectively zero column below r0: free
        mat[r0], mat[best] = mat[best], mat[r0]
        uinv = pow(mat[r0][c] // (p**bv), -1, M)
        mat[r0] = [(x * uinv) % M for x in mat[r0]]  # pivot entry p^bv
        for r1 in range(r0 + 1, len(mat)):
            if mat[r1][c] % M:
                if mode.valuation(mat[r1][c]) < bv:
                    return None  # cannot happen for consistent data
                f = mat[r1][c] // (p**bv)
                mat[r1] = [(x - f * y) % M for x, y in zip(mat[r1], mat[r0])]
        pivots.append((r0, c, bv))
        r0 += 1
    free = [c for c in range(ncols) if c not in {c for _, c, _ in pivots}]
    if len(free) != 1:
        return None
    fc = free[0]
    vec = [0] * ncols
    vec[fc] = 1
    max_bv = max((bv for _, _, bv in pivots), default=0)
    for r1, c, bv in reversed(pivots):
        acc = mat[r1][fc] % M
        for r2, c2, _ in pivots:
            if c2 > c:
                acc = (acc + mat[r1][c2] * vec[c2]) % M
        if acc % (p**bv):
            return None
        vec[c] = (-(acc // (p**bv))) % M
    Mred = p ** (mode.prec - max_bv - 5)
    out = []
    for v in vec:
        fr = _ratrec(v % Mred, Mred)
        if fr is None:
            return None
        out.append(fr)
    return out


def _complex_nullspace(samples, monos, mode):
    rows = [[_mono(mode, x, y, i, j) for (i, j) in monos] for x, y in samples]
    ncols = len(monos)
    mat = [r[:] for r in rows]
    pivcols = []
    r0 = 0
    for c in range(ncols):
        best, bv = None, None
        for r1 in range(r0, len(mat)):
            a = abs(mat[r1][c])
            if bv is None or a > bv:
                bv, best = a, r1
        if best is None or bv < mode.tolerance * 10**6:
            continue
        mat[r0], mat[best] = mat[best], mat[r0]
        inv = 1 / mat[r0][c]
        mat[r0] = [x * inv for x in mat[r0]]
        for r1 in range(len(mat)):
            if r1 != r0 and abs(mat[r1][c]) > 0:
                f = mat[r1][c]
                mat[r1] = [x - f * y for x, y in zip(mat[r1], mat[r0])]
        pivcols.append(c)
        r0 += 1
    free = [c for c in range(ncols) if c not in pivcols]
    if len(free) != 1:
        return None
    fc = free[0]
    vec = [mode.zero] * ncols
    vec[fc] = mode.one
    for r1, c in enumerate(pivcols):
        vec[c] = -mat[r1][fc]
    out = []
    for v in vec:
        fr = _rationalize_real(v, mode)
        if fr is None:
            return None
        out.append(fr)
    return out


def _rationalize_real(x, mode, max_den=10**12):
    """Continued-fraction rationalization of a real mpf."""
    if abs(mpmath.im(x)) > mode.tolerance * 10**6:
        return None
    x = mpmath.re(x)
    num, den = mpmath.pslq([x, 1], maxcoeff=max_den) or (None, None)
    if num is None:
        return None
    if num == 0:
        return mpq(0)
    return mpq(int(-den), int(num))


def scan_degrees(samples, mode, start=(4, 3), dmax=(6, 8), holdout=10):
    """Search bidegrees upward until a one-dimensional nullspace appears."""
    tried = []
    pairs = sorted(
        ((d1, d2) for d1 in range(1, dmax[0] + 1) for d2 in range(1, dmax[1] + 1)),
        key=lambda t: ((t[0] + 1) * (t[1] + 1), t),
    )
    started = False
    for d1, d2 in pairs:
        if (d1, d2) == tuple(start):
            started = True
        if not started and (d1 + 1) * (d2 + 1) < (start[0] + 1) * (start[1] + 1):
            continue
        if (d1 + 1) * (d2 + 1) + holdout + 3 > len(samples):
            continue
        tried.append((d1, d2))
        try:
            rel = fit_relation(samples, d1, d2, mode, holdout=holdout)
        except ArithmeticError:
            rel = None
        if rel is not None:
            return (d1, d2), rel, tried
    return None, None, tried


# ---------------------------------------------------------------------------
# JSON interface


def load_shape_json(obj):
    """FamilyShape from its JSON form (exact coefficient strings, null=unknown)."""
    slots = []
    for s in obj["slots"]:
        at = s["at"]
        if at not in ("zero", "inf", "quad"):
            at = mpq(at)
        factors = [
            FactorSpec(
                f["degree"],
                f["mult"],
                [None if c is None else mpq(c) for c in f["coeffs"]],
            )
            for f in s["factors"]
        ]
        scale = s.get("scale", "1")
        quad_a = s.get("a", "absent")
        slots.append(
            SlotSpec(
                at=at,
                factors=factors,
                scale=None if scale is None else mpq(scale),
                quad_a=None if quad_a is None else (
                    None if quad_a == "absent" and at != "quad" else
                    (mpq(quad_a) if quad_a != "absent" else None)
                ),
            )
        )
    return FamilyShape(degree=obj["degree"], slots=slots)


def seed_values_from_json(system, obj, mode):
    """Assemble the unknown vector from a seed file.

    The seed gives lambda0, the full model coefficients per slot/factor, and
    optionally quad_a; quadratic-slot auxiliary factors are computed exactly
    from the model by factoring over the quadratic field.
    """
    shape = system.shape
    lam0 = mpq(obj["lambda0"])
    coeff = {}
    for si_str, facs in obj["model"].items():
        si = int(si_str)
        for fi_str, coeffs in facs.items():
            fi = int(fi_str)
            for ci, c in enumerate(coeffs):
                coeff[(si, fi, ci)] = mpq(c)
    quad_a = mpq(obj["quad_a"]) if "quad_a" in obj else None

    def model_poly(slot_at):
        slot = shape.slot(slot_at)
        si = shape.slots.index(slot)
        out = UniPoly([mpq(1) if slot.scale is None else slot.scale])
        if slot.scale is None and "scales" in obj:
            out = UniPoly([mpq(obj["scales"][str(si)])])
        for fi, fac in enumerate(slot.factors):
            cs = []
            for ci in range(fac.degree + 1):
                pin = fac.coeffs[ci]
                cs.append(pin if pin is not None else coeff[(si, fi, ci)])
            out = out * UniPoly(cs) ** fac.mult
        return out

    p = model_poly("zero")
    q = model_poly("inf")
    values = []
    quad_cache = {}
    for u in system.unknowns:
        si = u[0]
        slot = shape.slots[si]
        if u[1] == "scale":
            values.append(mode.from_mpq(mpq(obj["scales"][str(si)])))
            continue
        if u[1] == "quad_a":
            if quad_a is None:
                raise ValueError("seed must provide quad_a")
            values.append(mode.from_mpq(quad_a))
            continue
        if slot.at == "quad":
            if si not in quad_cache:
                pattern = [(f.mult, f.degree) for f in slot.factors]
                quad_cache[si] = quad_slot_seed(p, q, quad_a, lam0, pattern)
            fi, ci, part = u[1], u[2], u[3]
            x, y = quad_cache[si][fi][ci]
            values.append(mode.from_mpq(x if part == "x" else y))
        else:
            fi, ci = u[1], u[2]
            values.append(mode.from_mpq(coeff[(si, fi, ci)]))
    return values, lam0
