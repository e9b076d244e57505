"""Nielsen-class machinery: tuple search, braid action, orbit closure.

Generating r-tuples with product one are taken modulo simultaneous
conjugation; orbits under the braid generators

    beta_i: (..., s_i, s_{i+1}, ...) -> (..., s_i s_{i+1} s_i^-1, s_i, ...)

are closed by breadth-first search.  Equality of inner classes exploits that
the tuples generate a transitive group, so a conjugator is determined by the
image of a single point and can be found by propagating h(s_i(x)) = t_i(h(x))
over the Schreier graph; a cheap conjugation-invariant fingerprint keeps the
number of such tests small.

For four branch points the module also computes the genus of the reduced
curve that covers the line parameterizing the fourth branch point, via the
induced action of three distinguished braid elements with product one.
Their words are module constants, calibrated once against five families with
independently known genera (see ``GAMMA_WORDS_SYMMETRIZED`` and
``GAMMA_WORDS_ORDERED``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .catalog import ClassSampler, make_group
from .perm import CycleType, Permutation, build_group, detect_blocks

ORBIT_CAP = 10**5
FIND_TUPLE_BUDGET = 10**7

# Distinguished braids of the reduced four-point curve, as signed beta words.
#
# Symmetrized case (equal classes in positions 1 and 2, branch points at the
# two square roots of the base coordinate, the remaining classes at 1 and
# infinity): a loop of the base coordinate around 0 half-twists the root
# pair (beta_1); around 1 it loops the first root past the point 1.
GAMMA_WORDS_SYMMETRIZED = ((1,), (2, 1, 1, -2))
# Ordered case (all four classes distinct, branch points (0, 1, oo, t)):
# t loops around 0, 1, oo in turn; the three pure braids multiply to the
# identity on tuples by the sphere relation.
GAMMA_WORDS_ORDERED = ((3, 2, 1, 1, -2, -3), (3, 2, 2, -3), (3, 3))


@dataclass(frozen=True)
class ClassTupleSpec:
    """Positions of conjugacy-class labels for one Nielsen class."""

    group: str
    labels: tuple

    def __post_init__(self):
        if len(self.labels) < 3:
            raise ValueError("need r >= 3 classes")

    @property
    def r(self):
        return len(self.labels)


class NielsenTuple:
    """A generating r-tuple with product one, up to nothing (a raw tuple)."""

    __slots__ = ("perms", "group")

    def __init__(self, perms, group, check=True):
        self.perms = tuple(perms)
        self.group = group
        if check:
            if any(p.is_identity() for p in self.perms):
                raise ValueError("tuple entries must be nontrivial")
            prod = Permutation.identity(group.degree)
            for p in self.perms:
                prod = prod * p
            if not prod.is_identity():
                raise ValueError("tuple product is not the identity")

    @property
    def r(self):
        return len(self.perms)

    def key(self):
        return tuple(p.images for p in self.perms)

    def conjugate(self, g):
        return NielsenTuple([p.conjugate(g) for p in self.perms], self.group,
                            check=False)

    def fingerprint(self):
        """Invariant under simultaneous conjugation."""
        parts = [tuple(str(p.cycle_type()) for p in self.perms)]
        adj = []
        for i in range(len(self.perms) - 1):
            adj.append(str((self.perms[i] * self.perms[i + 1]).cycle_type()))
        parts.append(tuple(adj))
        return tuple(parts)

    def __repr__(self):
        return f"NielsenTuple({', '.join(str(p) for p in self.perms)})"


def braid_apply(t, i, sign=1):
    """Apply beta_i (sign=+1) or its inverse (sign=-1); 1 <= i <= r-1."""
    if not 1 <= i <= t.r - 1:
        raise IndexError(f"braid index {i} out of range for r={t.r}")
    perms = list(t.perms)
    a, b = perms[i - 1], perms[i]
    if sign >= 0:
        perms[i - 1], perms[i] = a * b * a.inverse(), a
    else:
        perms[i - 1], perms[i] = b, b.inverse() * a * b
    return NielsenTuple(perms, t.group, check=False)


def apply_word(t, word):
    """Apply a braid word, written as signed generator indices, left to right."""
    for w in word:
        t = braid_apply(t, abs(w), 1 if w > 0 else -1)
    return t


def inverse_word(word):
    return tuple(-w for w in reversed(word))


def tuple_genus(types, degree):
    """Riemann-Hurwitz genus of a cover with the given inertia cycle types.

    Returns (genus, ok) where ok is False when the value is negative (the
    input cannot come from an actual cover).
    """
    for ct in types:
        if ct.degree != degree:
            raise ValueError(f"cycle type {ct} does not have degree {degree}")
    total = sum(ct.index() for ct in types)
    if total % 2:
        raise ValueError("odd total index; no cover exists")
    g = -(degree - 1) + total // 2
    return g, g >= 0


def conjugating_element(a, b, group=None):
    """h with h^-1 * a_i * h = b_i for all i, or None.

    Both tuples must generate a transitive group; h is determined by the
    image of point 0 and found by Schreier-graph propagation.  When `group`
    is given, h is additionally required to sift into it.
    """
    if len(a) != len(b):
        return None
    n = a[0].degree
    a_imgs = [p.images for p in a]
    b_imgs = [p.images for p in b]
    for y in range(n):
        h = [-1] * n
        h[0] = y
        used = [False] * n
        used[y] = True
        stack = [0]
        ok = True
        while stack and ok:
            x = stack.pop()
            hx = h[x]
            for ai, bi in zip(a_imgs, b_imgs):
                x2, y2 = ai[x], bi[hx]
                if h[x2] == -1:
                    if used[y2]:
                        ok = False
                        break
                    h[x2] = y2
                    used[y2] = True
                    stack.append(x2)
                elif h[x2] != y2:
                    ok = False
                    break
        if not ok or -1 in h:
            continue
        cand = Permutation(h)
        if group is not None and not group.contains(cand):
            continue
        return cand
    return None


def inner_equivalent(a, b):
    """Simultaneous G-conjugacy of two Nielsen tuples over the same group."""
    if a.group is not b.group and a.group.order != b.group.order:
        raise ValueError("tuples over different groups")
    if a.r != b.r:
        raise ValueError("tuples of different length")
    return conjugating_element(a.perms, b.perms, a.group) is not None


@dataclass
class OrbitGraph:
    """Braid orbit of inner classes: representatives plus action maps."""

    group: object
    spec: ClassTupleSpec | None
    words: tuple
    reps: list = field(default_factory=list)
    maps: list = field(default_factory=list)  # maps[w][i] = image rep index
    _raw: dict = field(default_factory=dict)
    _buckets: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.reps)

    def find(self, t):
        """Index of the inner class of t among the representatives, or None."""
        idx = self._raw.get(t.key())
        if idx is not None:
            return idx
        for i in self._buckets.get(t.fingerprint(), ()):
            if conjugating_element(self.reps[i].perms, t.perms, self.group) is not None:
                self._raw[t.key()] = i
                return i
        return None

    def _insert(self, t):
        idx = len(self.reps)
        self.reps.append(t)
        self._raw[t.key()] = idx
        self._buckets.setdefault(t.fingerprint(), []).append(idx)
        return idx

    def word_action(self, word):
        """Permutation of representative indices induced by a braid word."""
        images = []
        for rep in self.reps:
            j = self.find(apply_word(rep, word))
            if j is None:
                raise ValueError("orbit is not closed under the given word")
            images.append(j)
        p = Permutation(images)
        return p


def orbit_closure(start, words=None, cap=ORBIT_CAP, spec=None):
    """Close the inner class of `start` under braid words (default: all betas).

    Returns an OrbitGraph whose maps give, for each word, the permutation it
    induces on representatives.
    """
    r = start.r
    if words is None:
        words = tuple((i,) for i in range(1, r))
    words = tuple(tuple(w) for w in words)
    orbit = OrbitGraph(group=start.group, spec=spec, words=words)
    orbit._insert(start)
    frontier = [0]
    edges = {w: {} for w in words}
    while frontier:
        i = frontier.pop(0)
        rep = orbit.reps[i]
        for w in words:
            for word in (w, inverse_word(w)):
                img = apply_word(rep, word)
                j = orbit.find(img)
                if j is None:
                    if len(orbit.reps) >= cap:
                        raise RuntimeError(f"orbit exceeded cap {cap}")
                    j = orbit._insert(img)
                    frontier.append(j)
                if word == w:
                    edges[w][i] = j
    for w in words:
        orbit.maps.append(Permutation([edges[w][i] for i in range(len(orbit.reps))]))
    return orbit


def find_tuple(spec, seed=0, budget=FIND_TUPLE_BUDGET, rng=None):
    """Random search for a generating product-one tuple in the given classes."""
    G, gspec = make_group(spec.group)
    if rng is None:
        rng = random.Random(seed)
    samplers = [ClassSampler(G, gspec, lab, rng) for lab in spec.labels[:-1]]
    last = gspec.class_def(spec.labels[-1])
    draws = 0
    while draws < budget:
        draws += 1
        perms = [next(s) for s in samplers]
        prod = Permutation.identity(G.degree)
        for p in perms:
            prod = prod * p
        tail = prod.inverse()
        if tail.is_identity() or not gspec.matches(tail, last):
            continue
        perms.append(tail)
        if build_group(perms).order != G.order:
            continue
        return NielsenTuple(perms, G)
    raise RuntimeError(f"no tuple found for {spec} within {budget} draws")


def straight_indices(orbit):
    """Representatives whose position-wise classes match the orbit's spec."""
    if orbit.spec is None:
        raise ValueError("orbit carries no class spec")
    _, gspec = make_group(orbit.spec.group)
    cdefs = [gspec.class_def(lab) for lab in orbit.spec.labels]
    out = []
    for i, rep in enumerate(orbit.reps):
        if all(gspec.matches(p, c) for p, c in zip(rep.perms, cdefs)):
            out.append(i)
    return out


def straight_count(orbit):
    return len(straight_indices(orbit))


def braid_orbit(spec, seed=0, cap=ORBIT_CAP):
    """Full-braid-group orbit from a random seed tuple of the given spec."""
    t = find_tuple(spec, seed=seed)
    return orbit_closure(t, spec=spec, cap=cap)


def subgroup_orbits(spec, words, seed=0, stall=200, cap=ORBIT_CAP):
    """Orbits of the straight Nielsen class under the subgroup <words>.

    Tuples are seeded repeatedly by random search until `stall` consecutive
    seeds land in known orbits.  Returns a list of OrbitGraphs sorted by
    length.
    """
    rng = random.Random(seed)
    orbits = []
    misses = 0
    while misses < stall:
        t = find_tuple(spec, rng=rng, budget=FIND_TUPLE_BUDGET)
        if any(o.find(t) is not None for o in orbits):
            misses += 1
            continue
        misses = 0
        orbits.append(orbit_closure(t, words=words, spec=spec, cap=cap))
    return sorted(orbits, key=len)


def _gamma_words(r, symmetrize):
    if r != 4:
        raise ValueError("reduced-curve genus is implemented for r = 4 only")
    if symmetrize:
        g0, g1 = GAMMA_WORDS_SYMMETRIZED
        return (tuple(g0), tuple(g1), inverse_word(tuple(g0) + tuple(g1)))
    return tuple(tuple(w) for w in GAMMA_WORDS_ORDERED)


def reduced_genus_r4(orbit, symmetrize):
    """Genus of the reduced curve over the fourth-branch-point line.

    The orbit must be a full-braid-group orbit of 4-tuples.  The three
    distinguished braids act on the straight representatives; with N of
    those and product-one actions g0*g1*ginf = 1,

        2*genus - 2 = -2*N + ind(g0) + ind(g1) + ind(ginf).

    Returns (genus, [cycle structures of the three actions]).
    """
    if orbit.spec is None or orbit.spec.r != 4:
        raise ValueError("need a full orbit of 4-tuples with a class spec")
    _, gspec = make_group(orbit.spec.group)
    if symmetrize and orbit.spec.labels[0] != orbit.spec.labels[1]:
        raise ValueError("symmetrized reduction needs equal classes at 1, 2")
    words = _gamma_words(4, symmetrize)
    idx = straight_indices(orbit)
    pos = {j: k for k, j in enumerate(idx)}
    actions = []
    for w in words:
        images = []
        for j in idx:
            t2 = apply_word(orbit.reps[j], w)
            j2 = orbit.find(t2)
            if j2 is None or j2 not in pos:
                raise ValueError("distinguished braid leaves the straight set")
            images.append(pos[j2])
        actions.append(Permutation(images))
    prod = actions[0] * actions[1] * actions[2]
    if not prod.is_identity():
        raise ValueError("distinguished braids do not multiply to the identity")
    n = len(idx)
    total_ind = sum(a.index() for a in actions)
    two_g = -2 * n + total_ind + 2
    if two_g % 2:
        raise ValueError("non-integral genus; wrong braid configuration")
    return two_g // 2, [a.cycle_type() for a in actions]


def braid_cycle_blocks(orbit, symmetrize):
    """Minimal block systems of the group the distinguished braids generate."""
    words = _gamma_words(4, symmetrize)
    idx = straight_indices(orbit)
    pos = {j: k for k, j in enumerate(idx)}
    actions = []
    for w in words:
        images = [pos[orbit.find(apply_word(orbit.reps[j], w))] for j in idx]
        actions.append(Permutation(images))
    return detect_blocks(build_group(actions))


def orbit_report(spec, seed=0, symmetrize=None, with_blocks=False):
    """JSON-ready summary of one braid orbit of the given Nielsen class."""
    orbit = braid_orbit(spec, seed=seed)
    straight = straight_count(orbit)
    report = {
        "group": spec.group,
        "classes": list(spec.labels),
        "orbit_length": len(orbit),
        "straight_count": straight,
    }
    if spec.r == 4:
        if symmetrize is None:
            symmetrize = spec.labels[0] == spec.labels[1]
        genus, structures = reduced_genus_r4(orbit, symmetrize)
        report["symmetrized"] = symmetrize
        report["reduced_genus"] = genus
        report["braid_structures"] = [str(s) for s in structures]
        if with_blocks:
            report["blocks"] = [
                {"num_blocks": len(sys), "block_size": len(sys[0])}
                for sys in braid_cycle_blocks(orbit, symmetrize)
            ]
    return report
