"""Loader for the bundled polynomial dataset.

Entries carry exact coefficient strings (factored model form, dense t-arrays,
derived substitutions or plain univariate coefficients) together with their
expected verification data.  Everything is parsed into exact rationals.
"""

from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass, field
from functools import lru_cache

from gmpy2 import mpq

from .poly import BiPoly, UniPoly


@dataclass
class DatasetCase:
    label: str
    bipoly: BiPoly | None
    unipoly: UniPoly | None


@dataclass
class DatasetEntry:
    id: str
    group: str
    kind: str
    cases: list
    checks: list
    subst: dict | None = None
    base: str | None = None


def _expand_factors(factors, scale="1"):
    out = UniPoly([mpq(scale)])
    for fac in factors:
        out = out * UniPoly.from_strings(fac["coeffs"]) ** fac["power"]
    return out


@lru_cache(maxsize=1)
def _raw():
    ref = importlib.resources.files("hurwitz.data").joinpath("polynomials.json")
    with ref.open("r") as fh:
        return json.load(fh)


def entry_ids():
    return sorted(_raw()["entries"])


@lru_cache(maxsize=None)
def load_entry(eid):
    raw = _raw()["entries"].get(eid)
    if raw is None:
        raise KeyError(f"no dataset entry {eid!r}")
    kind = raw["kind"]
    cases = []
    if kind == "derived":
        base = load_entry(raw["base"])
        num = UniPoly.from_strings(raw["subst"]["num"])
        den = UniPoly.from_strings(raw["subst"]["den"])
        cases = [DatasetCase(label=c.label, bipoly=_substitute(c.bipoly, num, den),
                             unipoly=None) for c in base.cases]
        return DatasetEntry(
            id=eid, group=raw["group"], kind=kind, cases=cases,
            checks=raw["checks"], subst=raw["subst"], base=raw["base"],
        )
    for case in raw["cases"]:
        bip = uni = None
        if kind == "model":
            if "p_factors" in case:
                p = _expand_factors(case["p_factors"], case.get("p_scale", "1"))
                qq = _expand_factors(case["q_factors"], case.get("q_scale", "1"))
            else:
                p = UniPoly.from_strings(case["p"])
                qq = UniPoly.from_strings(case["q"])
            bip = BiPoly(p=p, q=qq)
        elif kind == "dense":
            bip = BiPoly(t_coeffs=[UniPoly.from_strings(c) for c in case["t_coeffs"]])
        elif kind == "univariate":
            uni = UniPoly.from_strings(case["coeffs"])
        else:
            raise ValueError(f"unknown dataset kind {kind!r}")
        cases.append(DatasetCase(label=case.get("label", ""), bipoly=bip, unipoly=uni))
    return DatasetEntry(
        id=eid, group=raw["group"], kind=kind, cases=cases, checks=raw["checks"]
    )


def _substitute(f, num, den):
    """t -> num(s)/den(s) into a t-polynomial; clears denominators.

    Returns the dense
    sum_j f_j(x) * num(s)^j * den(s)^(deg_t - j) as a BiPoly in (s, x).
    """
    dt = f.deg_t
    pieces = []
    for j, cj in enumerate(f.t_coeffs):
        s_poly = (num**j) * (den ** (dt - j))
        pieces.append((cj, s_poly))
    max_s = max(sp.degree for _, sp in pieces)
    t_coeffs = [UniPoly([]) for _ in range(max_s + 1)]
    for cj, sp in pieces:
        for k, a in enumerate(sp.coeffs):
            if a:
                t_coeffs[k] = t_coeffs[k] + cj * a
    return BiPoly(t_coeffs=t_coeffs)
