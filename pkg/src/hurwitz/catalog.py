"""Constructions of every group and class label the verification suite uses.

Linear and semilinear groups are built from explicit matrix generators acting
on normalized projective points (first nonzero coordinate 1, lexicographic
order).  The degree-11 copy of PSL(2,11) and the two Mathieu-type groups on
22 points ship as explicit permutation data, validated against their known
orders at load time.  Conjugacy-class labels resolve to samplers driven by
element order, cycle type and, where both are ambiguous, membership in a
designated normal subgroup (inner/outer splits).
"""

from __future__ import annotations

import importlib.resources
import json
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .ff import (
    FF,
    identity_matrix,
    mat_inv,
    mat_mul,
    mat_vec,
    normalize_point,
    projective_points,
    vec_mat,
)
from .perm import (
    CycleType,
    PermGroup,
    Permutation,
    build_group,
    coset_action,
    parse_cycle_type,
)

CATALOG_NAMES = (
    "PSL2_11@11",
    "PGL2_11@12",
    "PGL2_11@22",
    "PSL3_3@13",
    "PSL3_4@21",
    "PGL3_4@21",
    "PGammaL3_4@21",
    "PSL5_2@31",
    "AutPSL5_2@62",
    "M22@22",
    "AutM22@22",
)


@dataclass(frozen=True)
class ClassDef:
    label: str
    order: int
    ctype: str
    outer: bool | None = None  # None: no inner/outer discrimination needed
    incidence: int | None = None  # extra split for duality-type elements

    def cycle_type(self):
        return parse_cycle_type(self.ctype)


@dataclass
class GroupSpec:
    name: str
    kind: str  # matrix-projective | semilinear-projective | explicit-data | coset-induced
    degree: int
    order: int
    classes: list = field(default_factory=list)
    normal_subgroup: PermGroup | None = None
    incidence_fn: object = None
    representatives: dict = field(default_factory=dict)

    def class_def(self, label):
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(f"{self.name} has no class labeled {label!r}")

    def is_outer(self, p):
        if self.normal_subgroup is None:
            raise ValueError(f"{self.name} carries no inner/outer split")
        return not self.normal_subgroup.contains(p)

    def matches(self, p, cdef):
        """Does element p fit the class selector cdef?"""
        if p.order() != cdef.order:
            return False
        if str(p.cycle_type()) != cdef.ctype:
            return False
        if cdef.outer is not None and self.is_outer(p) != cdef.outer:
            return False
        if cdef.incidence is not None:
            if self.incidence_fn is None or self.incidence_fn(p) != cdef.incidence:
                return False
        return True


def _perm_from_matrix(F, M, points, index):
    return Permutation([index[normalize_point(F, mat_vec(F, M, v))] for v in points])


def _frobenius_perm(F, points, index):
    return Permutation(
        [index[normalize_point(F, tuple(F.frobenius(x) for x in v))] for v in points]
    )


def _transvection(n, value=1):
    M = [list(row) for row in identity_matrix(n)]
    M[0][1] = value
    return tuple(tuple(row) for row in M)


def _cycle_matrix(F, n):
    """e1 -> e2 -> ... -> en -> e1, sign-adjusted to determinant 1."""
    M = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        M[i + 1][i] = 1
    M[0][n - 1] = 1 if n % 2 else F.neg(1)
    return tuple(tuple(row) for row in M)


def _diag(F, n, a):
    M = [list(row) for row in identity_matrix(n)]
    M[0][0] = a
    return tuple(tuple(row) for row in M)


def _projective_group(F, n, matrices, extra_perms=()):
    points = projective_points(F, n)
    index = {v: i for i, v in enumerate(points)}
    perms = [_perm_from_matrix(F, M, points, index) for M in matrices]
    perms.extend(extra_perms)
    return points, index, perms


def _load_group_data(fname):
    ref = importlib.resources.files("hurwitz.data.groups").joinpath(fname)
    with ref.open("r") as fh:
        obj = json.load(fh)
    G = PermGroup.from_json(obj)
    if G.order != obj["expected_order"]:
        raise ValueError(
            f"{fname}: order {G.order} != expected {obj['expected_order']}"
        )
    normal = None
    if "normal_subgroup_generators" in obj:
        normal = PermGroup.from_json(
            {"degree": obj["degree"], "generators": obj["normal_subgroup_generators"]}
        )
    return G, normal


def _find_a5(G, rng):
    """Deterministic search for an A5 subgroup of a group of Moebius type."""
    while True:
        a = G.random_element(rng)
        if a.order() != 2:
            continue
        for _ in range(40):
            b = G.random_element(rng)
            if b.order() != 3:
                continue
            if (a * b).order() != 5:
                continue
            H = build_group([a, b])
            if H.order == 60:
                return H


@lru_cache(maxsize=None)
def make_group(name):
    """Catalog lookup: returns (PermGroup, GroupSpec)."""
    if name not in CATALOG_NAMES:
        raise KeyError(f"unknown catalog group {name!r}")
    builder = _BUILDERS[name]
    G, spec = builder()
    if G.order != spec.order:
        raise ValueError(
            f"{name}: constructed order {G.order}, expected {spec.order}"
        )
    return G, spec


def _build_psl5_2():
    F = FF(2)
    _, _, perms = _projective_group(F, 5, [_transvection(5), _cycle_matrix(F, 5)])
    G = build_group(perms)
    spec = GroupSpec(
        name="PSL5_2@31",
        kind="matrix-projective",
        degree=31,
        order=9_999_360,
        classes=[
            ClassDef("2A", 2, "2^8.1^15"),
            ClassDef("2B", 2, "2^12.1^7"),
            ClassDef("3A", 3, "3^9.1^4"),
            ClassDef("3B", 3, "3^10.1"),
            ClassDef("8A", 8, "8^2.4^3.2.1"),
            ClassDef("21A", 21, "21.7.3"),
        ],
    )
    return G, spec


def _build_aut_psl5_2():
    F = FF(2)
    points = projective_points(F, 5)
    index = {v: i for i, v in enumerate(points)}
    n = len(points)

    def on_both(M):
        Minv = mat_inv(F, M)
        images = [index[normalize_point(F, mat_vec(F, M, v))] for v in points]
        images += [
            n + index[normalize_point(F, vec_mat(F, phi, Minv))] for phi in points
        ]
        return Permutation(images)

    swap = Permutation([n + i for i in range(n)] + list(range(n)))
    gens = [on_both(_transvection(5)), on_both(_cycle_matrix(F, 5)), swap]
    G = build_group(gens)
    normal = build_group(gens[:2])

    pairing = [
        sum(a & b for a, b in zip(v, phi)) % 2 != 0
        for v in points
        for phi in points
    ]

    def incidence(p):
        """Duality elements map points to hyperplanes; count v on p(v)."""
        count = 0
        for i in range(n):
            j = p(i)
            if j < n:
                return None
            if not pairing[i * n + (j - n)]:
                count += 1
        return count

    spec = GroupSpec(
        name="AutPSL5_2@62",
        kind="semilinear-projective",
        degree=62,
        order=19_998_720,
        normal_subgroup=normal,
        incidence_fn=incidence,
    )

    # involution buckets: structural inner representatives plus sampled
    # duality involutions, split by incidence count
    buckets = {}

    reps = {}

    def note(g):
        if g.order() not in (2, 6):
            return
        outer = not normal.contains(g)
        key = (g.order(), str(g.cycle_type()), outer,
               incidence(g) if outer and g.order() == 2 else None)
        buckets.setdefault(key, 0)
        buckets[key] += 1
        reps.setdefault(key, g)

    rank2 = [list(row) for row in identity_matrix(5)]
    rank2[0][2] = rank2[1][3] = 1
    note(on_both(_transvection(5)))
    note(on_both(tuple(tuple(r) for r in rank2)))
    note(swap)
    rng = random.Random(62)
    for _ in range(12000):
        note(G.random_element(rng))

    labels = {2: iter("ABCDEFGH"), 6: iter("ABCDEFGH")}
    for key in sorted(buckets, key=lambda k: (k[0], k[2], str(k[1]), k[3] or 0)):
        o, ctype, outer, inc = key
        label = f"{o}{next(labels[o])}"
        spec.classes.append(ClassDef(label, o, ctype, outer, incidence=inc))
        spec.representatives[label] = reps[key]
    return G, spec


def _build_psl3_3():
    F = FF(3)
    _, _, perms = _projective_group(F, 3, [_transvection(3), _cycle_matrix(F, 3)])
    G = build_group(perms)
    spec = GroupSpec(
        name="PSL3_3@13",
        kind="matrix-projective",
        degree=13,
        order=5616,
        classes=[
            ClassDef("2A", 2, "2^4.1^5"),
            ClassDef("3A", 3, "3^3.1^4"),
            ClassDef("4A", 4, "4^2.2^2.1"),
        ],
    )
    return G, spec


def _psl3_4_perms():
    F = FF(2, 2)
    mats = [_transvection(3), _transvection(3, 2), _cycle_matrix(F, 3)]
    return F, _projective_group(F, 3, mats)


def _build_psl3_4():
    _, (_, _, perms) = _psl3_4_perms()
    G = build_group(perms)
    spec = GroupSpec(
        name="PSL3_4@21",
        kind="matrix-projective",
        degree=21,
        order=20_160,
        classes=[ClassDef("2A", 2, "2^8.1^5")],
    )
    return G, spec


def _build_pgl3_4():
    F = FF(2, 2)
    points = projective_points(F, 3)
    index = {v: i for i, v in enumerate(points)}
    mats = [_transvection(3), _transvection(3, 2), _cycle_matrix(F, 3), _diag(F, 3, 2)]
    perms = [_perm_from_matrix(F, M, points, index) for M in mats]
    G = build_group(perms)
    spec = GroupSpec(
        name="PGL3_4@21",
        kind="matrix-projective",
        degree=21,
        order=60_480,
        classes=[ClassDef("2A", 2, "2^8.1^5")],
    )
    return G, spec


def _build_pgammal3_4():
    F = FF(2, 2)
    points = projective_points(F, 3)
    index = {v: i for i, v in enumerate(points)}
    mats = [_transvection(3), _transvection(3, 2), _cycle_matrix(F, 3), _diag(F, 3, 2)]
    perms = [_perm_from_matrix(F, M, points, index) for M in mats]
    frob = _frobenius_perm(F, points, index)
    G = build_group(perms + [frob])
    psl = build_group([_perm_from_matrix(F, M, points, index)
                       for M in (_transvection(3), _transvection(3, 2), _cycle_matrix(F, 3))])
    spec = GroupSpec(
        name="PGammaL3_4@21",
        kind="semilinear-projective",
        degree=21,
        order=120_960,
        classes=[
            ClassDef("2A", 2, "2^7.1^7", outer=True),
            ClassDef("2B", 2, "2^8.1^5", outer=False),
            ClassDef("3A", 3, "3^5.1^6"),
            ClassDef("5A", 5, "5^4.1"),
            ClassDef("6A", 6, "6^2.3^2.2.1", outer=True),
        ],
        normal_subgroup=psl,
    )
    return G, spec


def _pgl2_11_deg12():
    F = FF(11)
    mats = [
        ((1, 1), (0, 1)),
        ((2, 0), (0, 1)),
        ((0, 1), (1, 0)),
    ]
    points = projective_points(F, 2)
    index = {v: i for i, v in enumerate(points)}
    perms = [_perm_from_matrix(F, M, points, index) for M in mats]
    psl_mats = [((1, 1), (0, 1)), ((0, 1), (10, 0))]
    psl = build_group([_perm_from_matrix(F, M, points, index) for M in psl_mats])
    return build_group(perms), psl


def _build_pgl2_11_deg12():
    G, psl = _pgl2_11_deg12()
    spec = GroupSpec(
        name="PGL2_11@12",
        kind="matrix-projective",
        degree=12,
        order=1320,
        classes=[
            ClassDef("2A", 2, "2^6", outer=False),
            ClassDef("2B", 2, "2^5.1^2", outer=True),
            ClassDef("3A", 3, "3^4"),
            ClassDef("4A", 4, "4^3", outer=True),
        ],
        normal_subgroup=psl,
    )
    return G, spec


def _build_pgl2_11_deg22():
    G12, psl12 = _pgl2_11_deg12()
    rng = random.Random(0)
    H = _find_a5(psl12, rng)
    G, _ = coset_action(G12, H, max_index=22)
    # push the PSL part through the same action for the inner/outer split
    normal = build_group([_coset_image(G12, H, h) for h in psl12.generators])
    spec = GroupSpec(
        name="PGL2_11@22",
        kind="coset-induced",
        degree=22,
        order=1320,
        classes=[
            ClassDef("2A", 2, "2^8.1^6", outer=False),
            ClassDef("2B", 2, "2^11", outer=True),
            ClassDef("3A", 3, "3^6.1^4"),
            ClassDef("4A", 4, "4^4.2^3", outer=True),
        ],
        normal_subgroup=normal,
    )
    return G, spec


def _coset_image(G, H, p):
    """Image of p in the right-coset action of G on H (BFS numbering)."""
    reps = [Permutation.identity(G.degree)]
    inv_reps = [reps[0]]
    queue = [0]

    def find(x):
        for j in range(len(reps)):
            if H.contains(x * inv_reps[j]):
                return j
        return None

    while queue:
        i = queue.pop(0)
        for g in G.generators:
            q = reps[i] * g
            j = find(q)
            if j is None:
                reps.append(q)
                inv_reps.append(q.inverse())
                j = len(reps) - 1
                queue.append(j)
    return Permutation([find(reps[i] * p) for i in range(len(reps))])


def _build_psl2_11_deg11():
    G, _ = _load_group_data("psl2_11_deg11.json")
    spec = GroupSpec(
        name="PSL2_11@11",
        kind="explicit-data",
        degree=11,
        order=660,
        classes=[
            ClassDef("2A", 2, "2^4.1^3"),
            ClassDef("3A", 3, "3^3.1^2"),
        ],
    )
    return G, spec


def _build_m22():
    G, _ = _load_group_data("m22.json")
    spec = GroupSpec(
        name="M22@22",
        kind="explicit-data",
        degree=22,
        order=443_520,
        classes=[
            ClassDef("2A", 2, "2^8.1^6"),
            ClassDef("3A", 3, "3^6.1^4"),
        ],
    )
    return G, spec


def _build_aut_m22():
    G, normal = _load_group_data("m22_aut.json")
    if normal is None or normal.order * 2 != G.order:
        raise ValueError("Aut(M22) data must carry its index-2 M22 subgroup")
    spec = GroupSpec(
        name="AutM22@22",
        kind="explicit-data",
        degree=22,
        order=887_040,
        classes=[
            ClassDef("2A", 2, "2^8.1^6", outer=False),
            ClassDef("2B", 2, "2^7.1^8", outer=True),
            ClassDef("2C", 2, "2^11", outer=True),
            ClassDef("6A", 6, "6^2.3^2.2^2", outer=False),
        ],
        normal_subgroup=normal,
    )
    return G, spec


_BUILDERS = {
    "PSL5_2@31": _build_psl5_2,
    "AutPSL5_2@62": _build_aut_psl5_2,
    "PSL3_3@13": _build_psl3_3,
    "PSL3_4@21": _build_psl3_4,
    "PGL3_4@21": _build_pgl3_4,
    "PGammaL3_4@21": _build_pgammal3_4,
    "PGL2_11@12": _build_pgl2_11_deg12,
    "PGL2_11@22": _build_pgl2_11_deg22,
    "PSL2_11@11": _build_psl2_11_deg11,
    "M22@22": _build_m22,
    "AutM22@22": _build_aut_m22,
}


class ClassSampler:
    """Yields uniformly conjugated elements of one conjugacy class.

    A representative matching (order, cycle type, inner/outer flag) is found
    by seeded random search; samples are then random conjugates, so they all
    lie in the representative's exact class.
    """

    def __init__(self, G, spec, label, rng, trial_bound=10**6):
        self.G = G
        self.cdef = spec.class_def(label)
        self.rng = rng
        self.rep = spec.representatives.get(label)
        if self.rep is None:
            for _ in range(trial_bound):
                g = G.random_element(rng)
                if spec.matches(g, self.cdef):
                    self.rep = g
                    break
        if self.rep is None:
            raise RuntimeError(
                f"no representative of {spec.name}:{label} in {trial_bound} trials"
            )

    def __iter__(self):
        return self

    def __next__(self):
        return self.rep.conjugate(self.G.random_element(self.rng))


def class_elements(G, spec, label, rng=None, trial_bound=10**6):
    """Sampler of elements of the labeled class; deterministic given rng."""
    if rng is None:
        rng = random.Random(0)
    return ClassSampler(G, spec, label, rng, trial_bound)


def group_info(name):
    """JSON-ready description of a catalog group."""
    G, spec = make_group(name)
    systems = []
    if G.is_transitive() and G.degree <= 64:
        from .perm import detect_blocks

        systems = [
            {"block_size": len(sys[0]), "num_blocks": len(sys)}
            for sys in detect_blocks(G)
        ]
    return {
        "name": name,
        "kind": spec.kind,
        "degree": G.degree,
        "order": G.order,
        "transitive": G.is_transitive(),
        "classes": [
            {
                "label": c.label,
                "element_order": c.order,
                "cycle_type": c.ctype,
                **({"outer": c.outer} if c.outer is not None else {}),
            }
            for c in spec.classes
        ],
        "minimal_block_systems": systems,
    }
