"""Small finite fields: GF(p) for prime p and GF(4).

Elements are integers 0..q-1.  For prime fields the encoding is the obvious
one; GF(4) = GF(2)[w]/(w^2+w+1) encodes a+b*w as a+2b.  Just enough field
arithmetic for the matrix groups acting on small projective spaces.
"""

from __future__ import annotations

_GF4_MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)


class FF:
    """GF(p^e) with p prime and e = 1, or GF(4)."""

    def __init__(self, p, e=1):
        if e == 1:
            self.q = p
        elif (p, e) == (2, 2):
            self.q = 4
        else:
            raise ValueError(f"unsupported field GF({p}^{e})")
        self.p = p
        self.e = e

    def add(self, a, b):
        if self.q == 4:
            return a ^ b
        return (a + b) % self.q

    def neg(self, a):
        if self.q == 4:
            return a
        return (-a) % self.q

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.q == 4:
            return _GF4_MUL[a][b]
        return (a * b) % self.q

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.q == 4:
            return (0, 1, 3, 2)[a]
        return pow(a, -1, self.q)

    def frobenius(self, a):
        """x -> x^p."""
        if self.q == 4:
            return _GF4_MUL[a][a]
        return pow(a, self.p, self.q)

    def elements(self):
        return range(self.q)

    def __repr__(self):
        return f"FF({self.p}^{self.e})" if self.e > 1 else f"FF({self.p})"


def mat_mul(F, A, B):
    n = len(A)
    return tuple(
        tuple(
            _dot(F, A[i], tuple(B[k][j] for k in range(n)))
            for j in range(n)
        )
        for i in range(n)
    )


def _dot(F, row, col):
    acc = 0
    for a, b in zip(row, col):
        acc = F.add(acc, F.mul(a, b))
    return acc


def mat_vec(F, A, v):
    return tuple(_dot(F, row, v) for row in A)


def vec_mat(F, v, A):
    n = len(A)
    return tuple(_dot(F, v, tuple(A[k][j] for k in range(n))) for j in range(n))


def mat_inv(F, A):
    n = len(A)
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = F.inv(aug[col][col])
        aug[col] = [F.mul(inv, x) for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def normalize_point(F, v):
    """Scale so the first nonzero coordinate is 1; None for the zero vector."""
    for x in v:
        if x != 0:
            inv = F.inv(x)
            return tuple(F.mul(inv, y) for y in v)
    return None


def projective_points(F, n):
    """All normalized points of PG(n-1, q), sorted lexicographically."""
    pts = set()
    stack = [()]
    for _ in range(n):
        stack = [t + (x,) for t in stack for x in F.elements()]
    for v in stack:
        nv = normalize_point(F, v)
        if nv is not None:
            pts.add(nv)
    return sorted(pts)
