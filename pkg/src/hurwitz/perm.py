"""Exact permutation and permutation-group arithmetic.

Permutations act on the right and products read left to right:
``(p * q)(x) == q(p(x))``.  Points are 0-based internally; all parsing and
printing of cycles is 1-based.

Groups carry a deterministic Schreier-Sims stabilizer chain (base points in
natural order), giving exact orders, membership tests, uniform random
elements and full element enumeration for moderate orders.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

FULL_ENUMERATION_BOUND = 2 * 10**7


class Permutation:
    """A permutation of {0, ..., n-1}, stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images):
        self.images = tuple(images)

    @property
    def degree(self):
        return len(self.images)

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    def __mul__(self, other):
        """Left-to-right product: (p*q)(x) = q(p(x))."""
        if not isinstance(other, Permutation):
            return NotImplemented
        if len(self.images) != len(other.images):
            raise ValueError(
                f"degree mismatch: {len(self.images)} != {len(other.images)}"
            )
        oi = other.images
        return Permutation(tuple(oi[x] for x in self.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(inv)

    def __call__(self, point):
        return self.images[point]

    def __pow__(self, k):
        n = len(self.images)
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, g):
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self, include_fixed=False):
        """Disjoint cycles, each starting at its minimum point."""
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self):
        counts = {}
        for c in self.cycles(include_fixed=True):
            counts[len(c)] = counts.get(len(c), 0) + 1
        return CycleType(counts)

    def order(self):
        lengths = {len(c) for c in self.cycles(include_fixed=True)}
        return reduce(math.lcm, lengths, 1)

    def index(self):
        """n minus the number of cycles (fixed points counted)."""
        return len(self.images) - len(self.cycles(include_fixed=True))

    def parity(self):
        """+1 for even permutations, -1 for odd."""
        return -1 if self.index() % 2 else 1

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({str(self)!r})"

    def __str__(self):
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join(
            "(" + ",".join(str(x + 1) for x in c) + ")" for c in cycs
        )


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text, degree=None):
    """Parse disjoint-cycle notation like ``(1,2)(3,4,5)``; 1-based points.

    ``()`` is the identity.  The degree is inferred from the largest moved
    point unless given explicitly.
    """
    text = text.strip()
    if not re.fullmatch(r"(\s*\([0-9,\s]*\)\s*)+", text):
        raise ValueError(f"cannot parse permutation {text!r}")
    cycles = []
    maxpt = 0
    for body in _CYCLE_RE.findall(text):
        body = body.strip()
        if not body:
            continue
        pts = [int(tok) - 1 for tok in body.split(",")]
        if any(p < 0 for p in pts):
            raise ValueError("points are 1-based")
        if len(set(pts)) != len(pts):
            raise ValueError(f"repeated point in cycle {body!r}")
        maxpt = max(maxpt, max(pts) + 1)
        cycles.append(pts)
    n = degree if degree is not None else maxpt
    if maxpt > n:
        raise ValueError(f"cycle moves point beyond degree {n}")
    images = list(range(n))
    for cyc in cycles:
        for i, p in enumerate(cyc):
            images[p] = cyc[(i + 1) % len(cyc)]
    return Permutation(images)


class CycleType:
    """Multiset of cycle lengths, printed as e.g. ``8^2.4^3.2.1``."""

    __slots__ = ("parts",)

    def __init__(self, counts):
        """counts: mapping length -> multiplicity, or iterable of lengths."""
        if isinstance(counts, dict):
            items = counts.items()
        else:
            c = {}
            for length in counts:
                c[length] = c.get(length, 0) + 1
            items = c.items()
        self.parts = tuple(sorted(((l, m) for l, m in items if m), reverse=True))

    @property
    def degree(self):
        return sum(l * m for l, m in self.parts)

    def lengths(self):
        """All cycle lengths with multiplicity, descending."""
        out = []
        for l, m in self.parts:
            out.extend([l] * m)
        return out

    def index(self):
        """degree minus number of cycles."""
        return sum((l - 1) * m for l, m in self.parts)

    def order(self):
        return reduce(math.lcm, (l for l, _ in self.parts), 1)

    def __eq__(self, other):
        return isinstance(other, CycleType) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __str__(self):
        return ".".join(
            (f"{l}^{m}" if m > 1 else f"{l}") for l, m in self.parts
        )

    def __repr__(self):
        return f"CycleType({str(self)!r})"


def parse_cycle_type(text):
    counts = {}
    for tok in text.strip().split("."):
        if "^" in tok:
            l, m = tok.split("^")
            counts[int(l)] = counts.get(int(l), 0) + int(m)
        else:
            counts[int(tok)] = counts.get(int(tok), 0) + 1
    if any(l <= 0 or m <= 0 for l, m in counts.items()):
        raise ValueError(f"bad cycle type {text!r}")
    return CycleType(counts)


@dataclass
class _ChainLevel:
    base_point: int
    # strong generators first added at this level (they fix all earlier
    # base points); the level's acting set is the union over deeper levels
    added: list = field(default_factory=list)
    generators: list = field(default_factory=list)
    # orbit point -> transversal element u with u(base_point) = point
    transversal: dict = field(default_factory=dict)

    def rebuild(self, degree):
        self.transversal = {self.base_point: Permutation.identity(degree)}
        frontier = [self.base_point]
        while frontier:
            x = frontier.pop(0)
            ux = self.transversal[x]
            for g in self.generators:
                y = g(x)
                if y not in self.transversal:
                    self.transversal[y] = ux * g
                    frontier.append(y)


class PermGroup:
    """Permutation group with a deterministic stabilizer chain."""

    def __init__(self, generators):
        if not generators:
            raise ValueError("need at least one generator")
        degrees = {g.degree for g in generators}
        if len(degrees) != 1:
            raise ValueError("generators of unequal degree")
        self.degree = degrees.pop()
        self.generators = list(generators)
        self._chain = _schreier_sims(
            [g for g in generators if not g.is_identity()], self.degree
        )
        self.order = 1
        for lvl in self._chain:
            self.order *= len(lvl.transversal)
        self._types_cache = None

    @property
    def base(self):
        return [lvl.base_point for lvl in self._chain]

    def __contains__(self, p):
        return self.contains(p)

    def contains(self, p):
        if p.degree != self.degree:
            return False
        return _sift(self._chain, p)[0] is None

    def random_element(self, rng):
        """Uniformly random element (product of random transversal reps)."""
        g = Permutation.identity(self.degree)
        for lvl in self._chain:
            pts = sorted(lvl.transversal)
            g = lvl.transversal[pts[rng.randrange(len(pts))]] * g
        return g

    def orbit(self, point):
        seen = {point}
        frontier = [point]
        while frontier:
            x = frontier.pop()
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    def is_transitive(self):
        return len(self.orbit(0)) == self.degree

    def stabilizer_generators(self, k):
        """Strong generators of the pointwise stabilizer of base[:k]."""
        if k < len(self._chain):
            gens = list(self._chain[k].generators)
        else:
            gens = []
        return gens or [Permutation.identity(self.degree)]

    def elements(self):
        """Iterate over all elements; only sane for small orders."""
        transversals = [
            sorted(lvl.transversal.values(), key=lambda p: p.images)
            for lvl in self._chain
        ]
        for combo in itertools.product(*reversed(transversals)):
            yield reduce(lambda a, b: a * b, combo)

    def cycle_types(self, bound=FULL_ENUMERATION_BOUND):
        """Set of cycle types of all elements.

        Returns (types, certified).  The set is exact (full enumeration via
        transversal products) when |G| <= bound; otherwise falls back to
        random sampling with certified=False.
        """
        if self._types_cache is not None:
            return self._types_cache
        if self.order <= bound:
            self._types_cache = (self._cycle_types_exact(), True)
        else:
            import random

            rng = random.Random(0)
            types = set()
            for _ in range(200000):
                types.add(self.random_element(rng).cycle_type())
            self._types_cache = (types, False)
        return self._types_cache

    def _cycle_types_exact(self):
        dtype = np.uint8 if self.degree < 256 else np.uint16
        levels = [
            np.array(
                [u.images for u in sorted(lvl.transversal.values(),
                                          key=lambda p: p.images)],
                dtype=dtype,
            )
            for lvl in self._chain
        ]
        # fold levels 2..k into all products u_k * ... * u_2
        block = levels[-1]
        for reps in reversed(levels[1:-1]):
            block = _compose_blocks(block, reps)
        types = set()
        if len(levels) == 1:
            _collect_types(levels[0], types)
            return types
        for rep in levels[0]:
            _collect_types(rep[block], types)
        return types

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def to_json(self):
        return {
            "degree": self.degree,
            "generators": [str(g) for g in self.generators],
        }

    @classmethod
    def from_json(cls, obj):
        n = obj["degree"]
        return cls([parse_permutation(s, n) for s in obj["generators"]])


def _compose_blocks(block, reps):
    """All products b * u for b in block, u in reps: (b*u)(x) = u(b(x))."""
    out = np.empty(
        (reps.shape[0] * block.shape[0], block.shape[1]), dtype=block.dtype
    )
    m = block.shape[0]
    for i in range(reps.shape[0]):
        out[i * m:(i + 1) * m] = reps[i][block]
    return out


def _collect_types(chunk, types):
    """Accumulate cycle types of each row permutation of a 2D image array."""
    n = chunk.shape[1]
    ident = np.arange(n, dtype=chunk.dtype)
    fixed = np.empty((n, chunk.shape[0]), dtype=np.int16)
    power = chunk
    fixed[0] = (power == ident).sum(axis=1)
    for k in range(1, n):
        power = np.take_along_axis(chunk, power, axis=1)
        fixed[k] = (power == ident).sum(axis=1)
    profiles = np.unique(fixed.T, axis=0)
    for prof in profiles:
        # fix(p^k) = sum over d|k of d*c_d; invert lengths ascending
        cyc = {}
        for k in range(1, n + 1):
            below = sum(d * cyc[d] for d in cyc if k % d == 0)
            extra = int(prof[k - 1]) - below
            if extra:
                cyc[k] = extra // k
        types.add(CycleType(cyc))


def _schreier_sims(generators, degree):
    """Deterministic Schreier-Sims, base points in natural order."""
    chain = []

    def first_moved(g):
        for b in range(degree):
            if g(b) != b:
                return b
        return None

    def refresh(from_level=0):
        """Recompute acting generator sets and transversals."""
        for i in range(from_level, len(chain)):
            chain[i].generators = [
                g for lvl in chain[i:] for g in lvl.added
            ]
            chain[i].rebuild(degree)

    def insert(g):
        """Sift g; add the residue as a strong generator. True if added."""
        rem, level = _sift(chain, g)
        if rem is None:
            return False
        if level == len(chain):
            chain.append(_ChainLevel(first_moved(rem)))
        chain[level].added.append(rem)
        refresh()
        return True

    for g in generators:
        insert(g)
    if not chain:
        chain.append(_ChainLevel(0))
        chain[0].rebuild(degree)
        return chain

    # close under Schreier generators, deepest level first, until stable
    dirty = True
    while dirty:
        dirty = False
        for i in reversed(range(len(chain))):
            lvl = chain[i]
            for x in sorted(lvl.transversal):
                ux = lvl.transversal[x]
                for gen in lvl.generators:
                    y = gen(x)
                    schreier = ux * gen * lvl.transversal[y].inverse()
                    rem, level = _sift(chain, schreier, start=i + 1)
                    if rem is not None:
                        if level == len(chain):
                            chain.append(_ChainLevel(first_moved(rem)))
                        chain[level].added.append(rem)
                        refresh()
                        dirty = True
                        break
                if dirty:
                    break
            if dirty:
                break
    return chain


def _sift(chain, p, start=0):
    """Sift p through chain levels from `start`.

    Returns (residue, level): residue None when p sifts to the identity,
    otherwise the partially reduced element and the level it stuck at.
    """
    rem = p
    for i in range(start, len(chain)):
        lvl = chain[i]
        y = rem(lvl.base_point)
        if y == lvl.base_point:
            continue
        if y not in lvl.transversal:
            return rem, i
        rem = rem * lvl.transversal[y].inverse()
    if rem.is_identity():
        return None, len(chain)
    return rem, len(chain)


def build_group(generators):
    """Stabilizer-chain group from a nonempty generator list."""
    return PermGroup(generators)


def coset_action(G, H, max_index=100000):
    """Action of G on the right cosets of H <= G.

    Returns (image_group, generator_images).  Cosets are enumerated by BFS
    from H itself with H-membership tests, so the numbering is deterministic.
    """
    for h in H.generators:
        if not G.contains(h):
            raise ValueError("H is not a subgroup of G (generator fails membership)")
    if G.order % H.order:
        raise ValueError("|H| does not divide |G|")
    index = G.order // H.order
    if index > max_index:
        raise ValueError(f"index {index} exceeds bound {max_index}")
    reps = [Permutation.identity(G.degree)]
    inv_reps = [Permutation.identity(G.degree)]
    queue = [0]
    images = [dict() for _ in G.generators]

    def find_coset(p):
        for j in range(len(reps)):
            if H.contains(p * inv_reps[j]):
                return j
        return None

    while queue:
        i = queue.pop(0)
        for gi, g in enumerate(G.generators):
            p = reps[i] * g
            j = find_coset(p)
            if j is None:
                reps.append(p)
                inv_reps.append(p.inverse())
                j = len(reps) - 1
                queue.append(j)
            images[gi][i] = j
    if len(reps) != index:
        raise RuntimeError("coset enumeration did not close")
    perms = [
        Permutation([images[gi][i] for i in range(index)])
        for gi in range(len(G.generators))
    ]
    return PermGroup(perms), perms


def transporter(G, a, b):
    """Some g in G with g^-1 * a * g == b, or None if they are not conjugate.

    Backtracks over the stabilizer chain.  Whenever a base-point image is
    fixed, the constraint g(a(x)) = b(g(x)) propagates around the whole
    a-cycle of that point, pruning by cycle-length compatibility.
    """
    if a.degree != b.degree or a.degree != G.degree:
        raise ValueError("degree mismatch")
    if a.cycle_type() != b.cycle_type():
        return None
    n = G.degree
    a_img, b_img = a.images, b.images
    a_len = [0] * n
    b_len = [0] * n
    for p, arr in ((a, a_len), (b, b_len)):
        for c in p.cycles(include_fixed=True):
            for x in c:
                arr[x] = len(c)
    chain = G._chain

    def closure(pairs):
        """Propagate g(x)=y pairs; return point->image map or None."""
        partial = {}
        taken = {}
        stack = list(pairs)
        while stack:
            x, y = stack.pop()
            if a_len[x] != b_len[y]:
                return None
            if x in partial:
                if partial[x] != y:
                    return None
                continue
            if y in taken:
                return None
            partial[x] = y
            taken[y] = x
            stack.append((a_img[x], b_img[y]))
        return partial

    def search(level, prefix):
        """prefix = u_level * ... * u_1 chosen so far (full permutation)."""
        base_pairs = [
            (chain[j].base_point, prefix(chain[j].base_point))
            for j in range(level)
        ]
        if closure(base_pairs) is None:
            return None
        if level == len(chain):
            gi = prefix.images
            if all(gi[a_img[x]] == b_img[gi[x]] for x in range(n)):
                return prefix
            return None
        lvl = chain[level]
        for y in sorted(lvl.transversal):
            res = search(level + 1, lvl.transversal[y] * prefix)
            if res is not None:
                return res
        return None

    return search(0, Permutation.identity(n))


def detect_blocks(G):
    """All minimal nontrivial block systems of a transitive group.

    Pair-fusion: for each point k != 0, form the finest G-congruence joining
    0 and k; keep the nontrivial systems, deduplicated.
    """
    if not G.is_transitive():
        raise ValueError("group is not transitive")
    n = G.degree
    systems = []
    seen = set()
    for k in range(1, n):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx == ry:
                return False
            parent[max(rx, ry)] = min(rx, ry)
            return True

        union(0, k)
        queue = [(0, k)]
        while queue:
            x, y = queue.pop()
            for g in G.generators:
                if union(g(x), g(y)):
                    queue.append((g(x), g(y)))
        blocks = {}
        for x in range(n):
            blocks.setdefault(find(x), []).append(x)
        if len(blocks) in (1, n):
            continue
        sizes = {len(v) for v in blocks.values()}
        assert len(sizes) == 1, "congruence classes of unequal size"
        system = tuple(sorted(tuple(sorted(v)) for v in blocks.values()))
        if system not in seen:
            seen.add(system)
            systems.append([list(blk) for blk in system])
    return systems
