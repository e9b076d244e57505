"""Verification recipes over the shipped polynomial dataset.

Ramification reports recover the full branch structure of a cover from its
defining polynomial: the t-discriminant is computed exactly, its squarefree
part is reconstructed modularly and factored (the loci here are rational
points, quadratics and cubics), and root-multiplicity patterns are read off
at every branch point including infinity.  The Riemann-Hurwitz genus of the
resulting report doubles as a completeness check on the branch search.

Dedekind sampling reads cycle types of Frobenius from factorization degrees
of specializations modulo good primes and compares them against the exact
cycle-type set of the target group; it reports consistency, never proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmpy2 import mpq, next_prime

from . import modp, poly
from .catalog import make_group
from .dataset import entry_ids, load_entry
from .perm import CycleType, parse_cycle_type
from .poly import (
    INFINITY,
    BiPoly,
    QuadPoint,
    UniPoly,
    factor_smalldeg,
    multiplicity_pattern,
    real_root_isolate,
    sturm_count,
    squarefree_part,
)

DEFAULT_T_SAMPLES = 25
DEFAULT_PRIME_COUNT = 40
PRIME_WINDOW_START = 1009


@dataclass
class RamificationEntry:
    point: object  # mpq | QuadPoint | "inf"
    pattern: CycleType
    conjugates: int = 1

    def describe(self):
        if isinstance(self.point, QuadPoint):
            return {
                "point": {"minpoly": [str(c) for c in self.point.minpoly.coeffs]},
                "conjugates": self.conjugates,
                "type": str(self.pattern),
            }
        name = "inf" if isinstance(self.point, str) else str(self.point)
        return {"point": name, "conjugates": 1, "type": str(self.pattern)}


@dataclass
class RamificationReport:
    degree: int
    entries: list
    genus: int

    def describe(self):
        return {
            "degree": self.degree,
            "branch_points": [e.describe() for e in self.entries],
            "genus": self.genus,
        }


@dataclass
class GroupVerdict:
    target: str
    verdict: str  # consistent | excluded | inconclusive
    observed: dict  # cycle type string -> frequency
    samples_used: int
    bad_samples: int
    excluded_alternatives: dict = field(default_factory=dict)

    def describe(self):
        return {
            "target": self.target,
            "verdict": self.verdict,
            "distinct_types": len(self.observed),
            "samples_used": self.samples_used,
            "bad_samples": self.bad_samples,
            "observed": dict(sorted(self.observed.items())),
            "excluded_alternatives": self.excluded_alternatives,
        }


def branch_locus_factors(f):
    """Irreducible factors of the squarefree part of disc_x(f) over Q.

    The squarefree part is reconstructed from modular images by rational
    reconstruction and verified by exact division into the discriminant, so
    the factor list is certified; the genus check of the full report catches
    any conceivable miss.
    """
    disc = poly.discriminant_t(f).primitive()
    if disc.is_zero():
        raise ValueError("identically vanishing discriminant (non-squarefree model)")
    sf = _modular_squarefree_part(disc)
    return factor_smalldeg(sf, max_factor_degree=12)


def _modular_squarefree_part(disc):
    """Monic squarefree part of an integer polynomial, modularly."""
    if disc.degree <= 1:
        return disc.monic()
    pr = 1 << 24
    images = []
    degs = {}
    target_deg = None
    while True:
        pr = int(next_prime(pr))
        try:
            dc = disc.eval_mod(pr)
        except ValueError:
            continue
        import numpy as np

        arr = modp.monic(np.array(dc, dtype=np.int64), pr)
        g = modp.pgcd(arr, modp.pderiv(arr, pr), pr)
        sf_p = modp.monic(modp.pdivmod(arr, g, pr)[0], pr)
        d = len(sf_p) - 1
        degs[d] = degs.get(d, 0) + 1
        images.append((pr, [int(c) for c in sf_p], d))
        if target_deg is None:
            counted = sorted(degs.items(), key=lambda kv: -kv[1])
            if counted[0][1] >= 4:
                target_deg = min(dd for dd in degs)  # unlucky primes raise the degree
        if target_deg is not None:
            good = [(p, img) for p, img, d in images if d == target_deg]
            if len(good) >= 3:
                cand = _crt_poly(good, target_deg)
                if cand is not None and _divides(cand, disc):
                    return cand
                target_deg = None  # force more primes
                degs = {d: c for d, c in degs.items()}


def _crt_poly(images, deg):
    M = math.prod(p for p, _ in images)
    coeffs = []
    for j in range(deg + 1):
        r = 0
        m = 1
        for p, img in images:
            v = img[j] if j < len(img) else 0
            t = (v - r) * pow(m % p, -1, p) % p
            r += m * t
            m *= p
        fr = poly._ratrec(r % M, M)
        if fr is None:
            return None
        coeffs.append(fr)
    return UniPoly(coeffs)


def _divides(g, f):
    _, rem = f.divmod(g)
    return rem.is_zero()


def _fiber_pattern(f, point):
    """Inertia pattern of the cover fiber over one branch-locus point.

    For the model form, every multiple root is genuine ramification (p, q
    coprime forces f_t = -q nonzero there).  For dense forms the defining
    plane curve may have ordinary nodes: multiple roots with f_t = 0 whose
    local quadratic form is nondegenerate; these split into two unramified
    points of the normalization and contribute 1+1 instead of 2.  Cusps or
    worse are rejected.
    """
    n = f.deg_x
    if isinstance(point, QuadPoint):
        K = point.field()
        t0 = K.gen
        spec = f.eval_t_field(K, t0)
    else:
        K = poly.QQ
        t0 = point
        spec = [c for c in f.eval_t(point).coeffs]
    parts = []
    drop = n - (len(spec) - 1) if spec else n
    if drop > 0:
        parts.append(drop)
    if f.kind == "model":
        for deg_part, m in poly.k_squarefree_parts(K, spec):
            parts.extend([m] * deg_part)
        ct = CycleType(parts)
        if ct.degree != n:
            raise ValueError("pattern does not sum to deg_x")
        return ct
    # dense form: split each multiplicity block into genuine/singular roots
    ft = _dense_partial_t(f)
    ft_spec = _eval_xpoly_field(ft, K, t0)
    sq = poly.k_squarefree_parts_polys(K, spec)
    for s_m, m in sq:
        if m == 1:
            parts.extend([1] * (len(s_m) - 1))
            continue
        sing = poly.kpoly_gcd(K, s_m, ft_spec)
        deg_sing = max(len(sing) - 1, 0)
        deg_gen = (len(s_m) - 1) - deg_sing
        parts.extend([m] * deg_gen)
        if deg_sing:
            if m != 2:
                raise ValueError("singular point of multiplicity > 2 (unsupported)")
            hess = _node_form(f)
            hess_spec = _eval_xpoly_field(hess, K, t0)
            if len(poly.kpoly_gcd(K, sing, hess_spec)) > 1:
                raise ValueError("degenerate singular point (cusp?)")
            parts.extend([1, 1] * deg_sing)
    ct = CycleType(parts)
    if ct.degree != n:
        raise ValueError("pattern does not sum to deg_x")
    return ct


def _dense_partial_t(f):
    """df/dt as a list of x-coefficient polynomials."""
    return [j * cj for j, cj in enumerate(f.t_coeffs)][1:]


def _node_form(f):
    """f_xt^2 - f_xx * f_tt as t-coefficient list (nondegeneracy of nodes)."""
    fx = [cj.deriv() for cj in f.t_coeffs]
    fxx = [cj.deriv() for cj in fx]
    fxt = [j * cj for j, cj in enumerate(fx)][1:]
    ftt = [j * (j - 1) * cj for j, cj in enumerate(f.t_coeffs)][2:]
    out = _tpoly_mul(fxt, fxt)
    sub = _tpoly_mul(fxx, ftt)
    m = max(len(out), len(sub))
    out = out + [UniPoly([])] * (m - len(out))
    for i, s in enumerate(sub):
        out[i] = out[i] - s
    return out


def _tpoly_mul(a, b):
    if not a or not b:
        return []
    out = [UniPoly([]) for _ in range(len(a) + len(b) - 1)]
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return out


def _eval_xpoly_field(tcoeffs, K, t0):
    """Evaluate a t-coefficient list at a field element; K-coefficient list."""
    if not tcoeffs:
        return []
    n = max(c.degree for c in tcoeffs if not c.is_zero()) if any(
        not c.is_zero() for c in tcoeffs
    ) else 0
    out = [K.zero] * (n + 1)
    power = K.one
    for c in tcoeffs:
        for i, a in enumerate(c.coeffs):
            if a:
                out[i] = K.add(out[i], K.mul(K.from_mpq(a), power))
        power = K.mul(power, t0)
    return poly.kpoly_trim(K, out)


def ramification_report(f, expected_genus=None):
    """Full branch-point/pattern report of a cover given by a BiPoly."""
    if f.kind == "model" and not f.coprime_model():
        raise ValueError("model parts p, q are not coprime")
    n = f.deg_x
    entries = []
    flipped = BiPoly(t_coeffs=list(reversed(f.t_coeffs)))
    pat_inf = _fiber_pattern(flipped, mpq(0))
    if pat_inf.parts != ((1, n),):
        entries.append(RamificationEntry(INFINITY, pat_inf))
    for fac in branch_locus_factors(f):
        if fac.degree == 1:
            t0 = -fac.coeffs[0] / fac.coeffs[1]
            pat = _fiber_pattern(f, t0)
            if pat.parts != ((1, n),):
                entries.append(RamificationEntry(t0, pat))
        else:
            qp = QuadPoint(fac.monic())
            pat = _fiber_pattern(f, qp)
            if pat.parts != ((1, n),):
                entries.append(RamificationEntry(qp, pat, conjugates=fac.degree))
    types = []
    for e in entries:
        types.extend([e.pattern] * e.conjugates)
    genus, ok = poly_tuple_genus(types, n)
    if not ok:
        raise ValueError(f"negative genus {genus}: branch search incomplete")
    if expected_genus is not None and genus != expected_genus:
        raise ValueError(f"genus {genus} != expected {expected_genus}")
    return RamificationReport(degree=n, entries=entries, genus=genus)


def poly_tuple_genus(types, degree):
    total = sum(ct.index() for ct in types)
    if total % 2:
        raise ValueError("odd total ramification index")
    g = -(degree - 1) + total // 2
    return g, g >= 0


def _prime_grid(count=DEFAULT_PRIME_COUNT):
    out = []
    pr = PRIME_WINDOW_START - 2
    while len(out) < count:
        pr = int(next_prime(pr))
        out.append(pr)
    return out


def _t_grid(f, count=DEFAULT_T_SAMPLES):
    """Rational t-samples avoiding the branch locus."""
    out = []
    t0 = 2
    disc = None
    while len(out) < count:
        t0 += 1
        val = mpq(t0)
        spec = f.eval_t(val)
        if spec.degree != f.deg_x:
            continue
        if poly.poly_gcd(spec, spec.deriv()).degree > 0:
            continue
        out.append(val)
    return out


def dedekind_verdict(target, specializations, primes=None, alternatives=()):
    """Cycle-type consistency of sampled Frobenius types with a target group.

    `specializations` is an iterable of exact UniPoly values of the family.
    Samples with bad reduction or repeated factors are skipped (counted).
    """
    G, _ = make_group(target)
    type_set, certified = G.cycle_types()
    ref = {str(t) for t in type_set}
    primes = primes or _prime_grid()
    observed = {}
    used = bad = 0
    outside = set()
    alt_missing = {}
    alt_sets = {}
    for alt in alternatives:
        Ga, _ = make_group(alt)
        alt_sets[alt] = {str(t) for t in Ga.cycle_types()[0]}
    for spec in specializations:
        if spec.degree != G.degree:
            raise ValueError(
                f"degree {spec.degree} specialization vs target degree {G.degree}"
            )
        for p in primes:
            try:
                degs = poly.factor_mod_p(spec, p)
            except ValueError:
                bad += 1
                continue
            if any(m > 1 for _, m in degs):
                bad += 1
                continue
            used += 1
            ct = CycleType([d for d, _ in degs])
            key = str(ct)
            observed[key] = observed.get(key, 0) + 1
            if key not in ref:
                outside.add(key)
            for alt, aset in alt_sets.items():
                if key not in aset:
                    alt_missing.setdefault(alt, set()).add(key)
    if not used:
        verdict = "inconclusive"
    elif outside:
        verdict = "excluded"
    else:
        verdict = "consistent"
    return GroupVerdict(
        target=target,
        verdict=verdict,
        observed=observed,
        samples_used=used,
        bad_samples=bad,
        excluded_alternatives={
            alt: sorted(types) for alt, types in alt_missing.items()
        },
    )


def totally_real_windows(f, endpoint_width=mpq(1, 20000), report=None):
    """Maximal open intervals of t with all-real fibers, by Sturm sampling.

    Interval boundaries are the real branch points of the cover (from the
    ramification report, so plane-curve nodes do not split windows); one
    rational sample strictly inside each complementary interval decides the
    whole interval, since the real root count is constant between branch
    points.  Returns (lo, hi) pairs with rational or None endpoints.
    """
    n = f.deg_x
    if report is None:
        report = ramification_report(f)
    iv = []
    for e in report.entries:
        if isinstance(e.point, str):
            continue
        if isinstance(e.point, QuadPoint):
            iv.extend(real_root_isolate(e.point.minpoly, width=endpoint_width))
        else:
            iv.append((e.point, e.point))
    iv.sort()
    # merge accidental overlaps conservatively
    merged = []
    for a, b in iv:
        if merged and a < merged[-1][1]:
            merged[-1] = (merged[-1][0], max(b, merged[-1][1]))
        else:
            merged.append((a, b))
    gaps = []
    if not merged:
        gaps.append((None, None, mpq(0)))
    else:
        first_lo = merged[0][0]
        gaps.append((None, first_lo, first_lo - 1))
        for (a1, b1), (a2, b2) in zip(merged, merged[1:]):
            gaps.append((b1, a2, (b1 + a2) / 2))
        gaps.append((merged[-1][1], None, merged[-1][1] + 1))
    windows = []
    for lo, hi, sample in gaps:
        spec = f.eval_t(sample)
        if spec.degree == n and poly.is_totally_real(spec):
            windows.append((lo, hi))
    return windows


def window_contains(windows, lo, hi):
    lo, hi = mpq(lo), mpq(hi)
    for wlo, whi in windows:
        if (wlo is None or wlo <= lo) and (whi is None or whi >= hi):
            return True
    return False


def check_samples_totally_real(f, samples):
    out = {}
    for s in samples:
        spec = f.eval_t(mpq(s))
        out[str(s)] = bool(
            spec.degree == f.deg_x and poly.is_totally_real(spec)
        )
    return out


# ---------------------------------------------------------------------------
# per-entry verification bundles


def verify_theorem(eid, fast=False):
    """Run every check attached to one dataset entry.

    Returns a JSON-ready bundle; `ok` is True iff all checks pass.  With
    `fast`, Dedekind grids shrink to a smoke-test size.
    """
    entry = load_entry(eid)
    bundle = {"id": eid, "group": entry.group, "cases": []}
    all_ok = True
    for case in entry.cases:
        case_out = {"label": case.label, "checks": []}
        cache = {}
        for check in entry.checks:
            result = _run_check(entry, case, check, fast, cache)
            case_out["checks"].append(result)
            all_ok = all_ok and result["pass"]
        bundle["cases"].append(case_out)
    bundle["ok"] = all_ok
    return bundle


def verify_all(fast=False):
    out = {"bundles": [verify_theorem(eid, fast=fast) for eid in entry_ids()]}
    out["ok"] = all(b["ok"] for b in out["bundles"])
    return out


def _case_report_direct(f, cache):
    if cache is None:
        return ramification_report(f)
    if "report" not in cache:
        cache["report"] = ramification_report(f)
    return cache["report"]


def _run_check(entry, case, check, fast, cache=None):
    kind = check["type"]
    cache = cache if cache is not None else {}
    try:
        if kind == "ramification":
            return _check_ramification(case.bipoly, check, cache)
        if kind == "dedekind":
            return _check_dedekind(entry, case, check, fast)
        if kind == "window":
            return _check_window(case.bipoly, check, cache)
        if kind == "disc_square":
            return _check_disc_square(case.bipoly, check)
        if kind == "disc_cofactor":
            return _check_disc_cofactor(case.unipoly, check)
        if kind == "totally_real":
            ok = poly.is_totally_real(case.unipoly)
            return {"type": kind, "pass": bool(ok)}
        raise ValueError(f"unknown check type {kind!r}")
    except Exception as exc:  # reported, not raised: a failed check is data
        return {"type": kind, "pass": False, "error": f"{type(exc).__name__}: {exc}"}


def _check_ramification(f, check, cache=None):
    report = _case_report_direct(f, cache)
    got = []
    for e in report.entries:
        if isinstance(e.point, str):
            got.append(("inf", 1, str(e.pattern)))
        elif isinstance(e.point, QuadPoint):
            got.append(("finite", e.conjugates, str(e.pattern)))
        else:
            got.append(("0" if e.point == 0 else "finite_rational", 1, str(e.pattern)))
    want = []
    for e in check["expected"]:
        pt = e["point"]
        conj = e.get("conjugates", 1)
        want.append((pt, conj, e["type"]))
    # match multiset-wise; rational non-zero points count as "finite"
    norm_got = sorted(
        (pt if pt in ("0", "inf") else "finite", conj, ty) for pt, conj, ty in got
    )
    norm_want = sorted(
        (pt if pt in ("0", "inf") else "finite", conj, ty) for pt, conj, ty in want
    )
    ok = norm_got == norm_want and report.genus == check.get("genus", report.genus)
    return {
        "type": "ramification",
        "pass": bool(ok),
        "computed": report.describe(),
        "expected": check["expected"],
        "expected_genus": check.get("genus"),
    }


def _check_dedekind(entry, case, check, fast):
    target = check["target"]
    nprimes = 6 if fast else DEFAULT_PRIME_COUNT
    nt = 5 if fast else DEFAULT_T_SAMPLES
    if case.unipoly is not None:
        specs = [case.unipoly]
    else:
        if "t_samples" in check:
            tvals = [mpq(s) for s in check["t_samples"]][: nt]
        else:
            tvals = _t_grid(case.bipoly, nt)
        specs = []
        for t0 in tvals:
            spec = case.bipoly.eval_t(t0)
            if spec.degree == case.bipoly.deg_x:
                specs.append(spec)
    verdict = dedekind_verdict(
        target, specs, primes=_prime_grid(nprimes),
        alternatives=check.get("alternatives", ()),
    )
    min_types = check.get("min_distinct_types", 3 if fast else 5)
    ok = verdict.verdict == "consistent" and len(verdict.observed) >= min_types
    return {"type": "dedekind", "pass": bool(ok), **verdict.describe()}


def _check_window(f, check, cache=None):
    windows = totally_real_windows(f, report=_case_report_direct(f, cache))
    mode = check["mode"]
    lo, hi = mpq(check["lo"]), mpq(check["hi"])
    if mode == "contains":
        ok = window_contains(windows, lo, hi)
    elif mode == "approx":
        tol = mpq(check.get("tol", "1/1000"))
        ok = any(
            wlo is not None
            and whi is not None
            and abs(wlo - lo) <= tol
            and abs(whi - hi) <= tol
            for wlo, whi in windows
        )
    elif mode == "within":
        ok = any(
            (wlo is not None and wlo >= lo) and (whi is not None and whi <= hi)
            for wlo, whi in windows
        )
        ok = ok and bool(windows)
    else:
        raise ValueError(f"unknown window mode {mode!r}")
    samples = check_samples_totally_real(f, check.get("samples", []))
    ok = ok and all(samples.values())
    return {
        "type": "window",
        "pass": bool(ok),
        "windows": [
            [None if w is None else str(w) for w in win] for win in windows
        ],
        "windows_float": [
            [None if w is None else float(w) for w in win] for win in windows
        ],
        "samples_totally_real": samples,
        "mode": mode,
    }


def _check_disc_square(f, check):
    results = {}
    for s in check["samples"]:
        spec = f.eval_t(mpq(s))
        sqf = squarefree_part(spec)
        if sqf.degree != spec.degree:
            results[str(s)] = "not squarefree"
            continue
        results[str(s)] = bool(poly.disc_square_test(spec))
    ok = all(v is True for v in results.values())
    return {"type": "disc_square", "pass": bool(ok), "samples": results}


def _check_disc_cofactor(f, check):
    ok, rep = poly.disc_cofactor_check(f, [tuple(t) for t in check["target"]])
    return {"type": "disc_cofactor", "pass": bool(ok), **rep}
