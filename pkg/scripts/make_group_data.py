#!/usr/bin/env python3
"""Regenerate the bundled permutation-group data files.

Everything is constructed from first principles and validated by group order
before being written:

* M24 on the projective line over GF(23), generated by x -> x+1, x -> 2x,
  x -> -1/x and the Mathieu twist x -> x^3/9 (squares) / 9x^3 (non-squares).
  The two-point stabilizer gives M22 on 22 points; adding a point-swapping
  element gives Aut(M22) = M22.2.
* PSL(2,11) in its exceptional degree-11 action, as the coset action on an
  A5 subgroup of the natural degree-12 copy.

Run from the repository root:  python scripts/make_group_data.py
"""

import json
import pathlib
import random
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from hurwitz.catalog import _find_a5, _pgl2_11_deg12  # noqa: E402
from hurwitz.perm import Permutation, build_group, coset_action  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "hurwitz" / "data" / "groups"

M24_ORDER = 244_823_040
M22_ORDER = 443_520


def mathieu_m24():
    """M24 on {0..22, infinity=23} over GF(23)."""
    p = 23
    inf = 23
    squares = {pow(x, 2, p) for x in range(1, p)}

    def perm_from(fn):
        images = [fn(x) for x in list(range(p)) + [inf]]
        assert sorted(images) == list(range(24)), "not a bijection"
        return Permutation(images)

    alpha = perm_from(lambda x: inf if x == inf else (x + 1) % p)
    beta = perm_from(lambda x: inf if x == inf else (2 * x) % p)

    def neg_inv(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return (-pow(x, -1, p)) % p

    gamma = perm_from(neg_inv)

    inv9 = pow(9, -1, p)

    def twist(x):
        if x in (0, inf):
            return x
        if x in squares:
            return (pow(x, 3, p) * inv9) % p
        return (9 * pow(x, 3, p)) % p

    delta = perm_from(twist)
    G = build_group([alpha, beta, gamma, delta])
    if G.order != M24_ORDER:
        raise RuntimeError(f"M24 construction failed: order {G.order}")
    orbit_sizes = [len(lvl.transversal) for lvl in G._chain[:5]]
    if orbit_sizes != [24, 23, 22, 21, 20]:
        raise RuntimeError(f"M24 not 5-transitive: {orbit_sizes}")
    return G


def restrict(p, keep):
    """Restrict a permutation fixing `keep` setwise to those points."""
    pos = {x: i for i, x in enumerate(keep)}
    return Permutation([pos[p(x)] for x in keep])


def m22_and_aut():
    M24 = mathieu_m24()
    a, b = M24.base[0], M24.base[1]
    keep = [x for x in range(24) if x not in (a, b)]
    m22_gens = [restrict(g, keep) for g in M24.stabilizer_generators(2)]
    M22 = build_group(m22_gens)
    if M22.order != M22_ORDER:
        raise RuntimeError(f"M22 stabilizer has order {M22.order}")

    rng = random.Random(24)
    while True:
        g = M24.random_element(rng)
        if g(a) == b and g(b) == a:
            swap = restrict(g, keep)
            break
    AUT = build_group(m22_gens + [swap])
    if AUT.order != 2 * M22_ORDER:
        raise RuntimeError(f"M22.2 has order {AUT.order}")
    return M22, AUT


def psl2_11_deg11():
    _, psl12 = _pgl2_11_deg12()
    H = _find_a5(psl12, random.Random(11))
    G11, _ = coset_action(psl12, H, max_index=11)
    if G11.order != 660 or G11.degree != 11:
        raise RuntimeError(f"degree-11 PSL(2,11) failed: {G11}")
    return G11


def dump(fname, G, expected_order, normal=None):
    obj = {
        "name": fname.rsplit(".", 1)[0],
        "degree": G.degree,
        "generators": [str(g) for g in G.generators],
        "expected_order": expected_order,
    }
    if normal is not None:
        obj["normal_subgroup_generators"] = [str(g) for g in normal.generators]
    path = OUT / fname
    path.write_text(json.dumps(obj, indent=1))
    print(f"wrote {path} (order {G.order})")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    M22, AUT = m22_and_aut()
    dump("m22.json", M22, M22_ORDER)
    dump("m22_aut.json", AUT, 2 * M22_ORDER, normal=M22)
    dump("psl2_11_deg11.json", psl2_11_deg11(), 660)


if __name__ == "__main__":
    main()
