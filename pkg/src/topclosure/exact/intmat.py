"""Integer and rational matrices: Hermite and Smith normal forms, exact rank, kernels.

Matrices are plain lists of rows. Entries are Python ints (or Fractions for the
rational routines); nothing here mutates its arguments.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

IntMatrix = list[list[int]]
RatMatrix = list[list[Fraction]]


def _copy(m: Sequence[Sequence[int]]) -> IntMatrix:
    return [[int(v) for v in row] for row in m]


def _ncols(m: Sequence[Sequence], ncols: int | None = None) -> int:
    if m:
        return len(m[0])
    return ncols or 0


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hnf(m: Sequence[Sequence[int]], transform: bool = False):
    """Row Hermite normal form.

    The result has the same shape as ``m``: nonzero rows first, each pivot
    positive and strictly to the right of the one above, entries above a pivot
    reduced into ``[0, pivot)``, zero rows last. With ``transform=True`` also
    returns a unimodular ``U`` with ``U @ m == H``.
    """
    a = _copy(m)
    nrows = len(a)
    ncols = _ncols(a)
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if transform else None

    def combine(i: int, j: int, s: int, t: int, x: int, y: int) -> None:
        # (row_i, row_j) <- (s*row_i + t*row_j, x*row_i + y*row_j), det = s*y - t*x = +-1
        for mat in (a, u) if u is not None else (a,):
            ri, rj = mat[i], mat[j]
            mat[i] = [s * p + t * q for p, q in zip(ri, rj)]
            mat[j] = [x * p + y * q for p, q in zip(ri, rj)]

    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        for k in range(row + 1, nrows):
            if a[k][col] == 0:
                continue
            p, q = a[row][col], a[k][col]
            g, s, t = xgcd(p, q)
            combine(row, k, s, t, -q // g, p // g)
        piv = a[row][col]
        if piv == 0:
            continue
        if piv < 0:
            a[row] = [-v for v in a[row]]
            if u is not None:
                u[row] = [-v for v in u[row]]
            piv = -piv
        for k in range(row):
            q = a[k][col] // piv
            if q:
                a[k] = [x - q * y for x, y in zip(a[k], a[row])]
                if u is not None:
                    u[k] = [x - q * y for x, y in zip(u[k], u[row])]
        row += 1
    if transform:
        return a, u
    return a


def nonzero_rows(m: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(r) for r in m if any(r)]


def snf(m: Sequence[Sequence[int]], transforms: bool = False):
    """Smith normal form.

    Returns ``(D, factors)`` where ``factors`` has length ``min(rows, cols)`` and
    satisfies the divisibility chain (zeros last). With ``transforms=True``
    returns ``(D, factors, U, V, V_inv)`` such that ``U @ m @ V == D`` exactly.
    """
    a = _copy(m)
    nr = len(a)
    nc = _ncols(a)
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]
    Vi = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_addmul(dst: int, src: int, q: int) -> None:
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def col_addmul(dst: int, src: int, q: int) -> None:
        # A <- A E with E = I + q e_src e_dst^T ; V <- V E ; V_inv <- E^-1 V_inv
        for r in a:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_addmul(i, t, -(a[i][t] // piv))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_addmul(j, t, -(a[t][j] // piv))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            row_addmul(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            U[t] = [-v for v in U[t]]
    factors = [a[i][i] for i in range(min(nr, nc))]
    if transforms:
        return a, factors, U, V, Vi
    return a, factors


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    return snf(m)[1]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def transpose(a: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*a)]


def _integerize_rows(m: Sequence[Sequence]) -> IntMatrix:
    out = []
    for row in m:
        den = 1
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def bareiss_rank(m: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    a = _copy(m)
    nr = len(a)
    nc = _ncols(a)
    rank = 0
    prev = 1
    for col in range(nc):
        piv = next((i for i in range(rank, nr) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, nr):
            f = a[i][col]
            a[i] = [(p * x - f * y) // prev for x, y in zip(a[i], a[rank])]
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


def rank_q(m: Sequence[Sequence]) -> int:
    """Exact rank over Q of a rational (or integer) matrix."""
    return bareiss_rank(_integerize_rows(m))


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix via Bareiss."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_q(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a rational matrix."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for row in m:
        den = 1
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        scale /= den
        rows.append([int(Fraction(v) * den) for v in row])
    return scale * det_int(rows)


def left_kernel(a: Sequence[Sequence[int]], nrows: int | None = None) -> IntMatrix:
    """Basis (in HNF) of {x in Z^n : x a = 0} for an n x c integer matrix.

    The kernel of a Z-linear map is automatically saturated.
    """
    n = len(a) if a else (nrows or 0)
    c = _ncols(a)
    aug = [list(a[i]) + [int(i == j) for j in range(n)] for i in range(n)] if a else [
        [int(i == j) for j in range(n)] for i in range(n)
    ]
    h = hnf(aug)
    ker = [row[c:] for row in h if not any(row[:c]) and any(row[c:])]
    return nonzero_rows(hnf(ker)) if ker else []


def right_kernel_q(a: Sequence[Sequence]) -> RatMatrix:
    """Basis of {y in Q^c : a y = 0} (as rows) from the reduced row echelon form."""
    r, pivots = rref_q(a)
    c = _ncols(a)
    free = [j for j in range(c) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * c
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def rref_q(a: Sequence[Sequence]) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(v) for v in row] for row in a]
    nr = len(m)
    nc = _ncols(m)
    pivots: list[int] = []
    row = 0
    for col in range(nc):
        piv = next((i for i in range(row, nr) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for i in range(nr):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    return m[:row], pivots


def saturate(basis: Sequence[Sequence[int]], ambient_rank: int) -> IntMatrix:
    """Saturation (L tensor Q) cap Z^n of the lattice spanned by ``basis``.

    Computed from the Smith form: if U B V = D then the first rank(B) rows of
    V^-1 span the same Q-space as B and are primitive.
    """
    rows = nonzero_rows(basis)
    if not rows:
        return []
    _, factors, _, _, vinv = snf(rows, transforms=True)
    k = sum(1 for d in factors if d)
    return nonzero_rows(hnf(vinv[:k]))


@dataclass(frozen=True)
class IntegerLattice:
    """Sublattice of Z^n given by its canonical (HNF) basis."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence[int]], ambient_rank: int) -> "IntegerLattice":
        rows = nonzero_rows(hnf(gens)) if gens else []
        for r in rows:
            if len(r) != ambient_rank:
                raise ValueError("generator length does not match ambient rank")
        return cls(ambient_rank, tuple(tuple(r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        if not self.basis:
            return not any(v)
        h = hnf([list(r) for r in self.basis] + [list(v)])
        return nonzero_rows(h) == [list(r) for r in self.basis]

    def is_saturated(self) -> bool:
        if not self.basis:
            return True
        return all(d == 1 for d in invariant_factors(self.basis))

    def saturation(self) -> "IntegerLattice":
        return IntegerLattice(self.ambient_rank, tuple(tuple(r) for r in saturate(self.basis, self.ambient_rank)))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.basis]
