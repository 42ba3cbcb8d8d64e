"""Exact integer lattices: normal forms, signatures, sublattices and quotients.

Matrices are tuples of row tuples of Python ints.  Nothing here touches
floating point, so entries may grow without bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


class LatticeError(ValueError):
    pass


class DegenerateLattice(LatticeError):
    pass


# ---------------------------------------------------------------------------
# small matrix helpers


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def as_vector(v: Iterable[int]) -> Vector:
    return tuple(int(x) for x in v)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(n: int, m: int) -> Matrix:
    return tuple((0,) * m for _ in range(n))


def transpose(A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not A:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*A))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    Bt = list(zip(*B)) if B else []
    ncols = len(Bt)
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) if ncols else ()
        for row in A
    )


def matvec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def bilinear(gram: Sequence[Sequence], u: Sequence, v: Sequence):
    return dot(u, matvec(gram, v))


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rational_inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise DegenerateLattice("matrix is singular")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def solve_rational(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One rational solution x of A x = b (free variables set to 0), or None."""
    n = len(A)
    m = len(A[0]) if n else 0
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    if any(M[i][m] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        x[c] = M[i][m]
    return x


def gd(v: Iterable[int]) -> int:
    """Greatest divisor of an integer vector; 0 for the zero vector."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, S, V)`` with ``S = U*A*V`` in Smith normal form.

    U and V are unimodular.  The pivot at each stage is the entry of smallest
    nonzero absolute value in the unreduced block, ties going to the lowest
    row and then the lowest column, so the output is a deterministic
    function of the input.
    """
    n = len(A)
    m = len(A[0]) if n else 0
    S = [list(row) for row in A]
    U = [list(row) for row in identity(n)]
    V = [list(row) for row in identity(m)]

    def row_add(dst, src, k):  # row_dst += k * row_src
        S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def col_add(dst, src, k):  # col_dst += k * col_src
        for row in S:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    def row_swap(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for t in range(min(n, m)):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    x = abs(S[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                row_swap(t, pi)
            if pj != t:
                col_swap(t, pj)
            p = S[t][t]
            dirty = False
            for i in range(t + 1, n):
                if S[i][t]:
                    row_add(i, t, -(S[i][t] // p))
                    dirty = dirty or S[i][t] != 0
            for j in range(t + 1, m):
                if S[t][j]:
                    col_add(j, t, -(S[t][j] // p))
                    dirty = dirty or S[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                        if S[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if best is None:
            break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return as_matrix(U), as_matrix(S), as_matrix(V)


def invariant_factors(A: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith form, in divisibility order."""
    _, S, _ = smith_normal_form(A)
    out = []
    for i in range(min(len(S), len(S[0]) if S else 0)):
        if S[i][i] == 0:
            break
        out.append(S[i][i])
    return out


def hnf_rows(rows: Iterable[Sequence[int]]) -> Matrix:
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped.  Pivots are positive and the entries above each
    pivot lie in ``[0, pivot)``, so two generating sets span the same lattice
    exactly when their outputs are equal.
    """
    M = [list(r) for r in rows if any(r)]
    if not M:
        return ()
    ncols = len(M[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        live = [i for i in range(r, len(M)) if M[i][c]]
        if not live:
            continue
        while len(live) > 1:
            k = min(live, key=lambda i: (abs(M[i][c]), i))
            for i in live:
                if i != k:
                    q = M[i][c] // M[k][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[k])]
            live = [i for i in range(r, len(M)) if M[i][c]]
        k = live[0]
        M[r], M[k] = M[k], M[r]
        if M[r][c] < 0:
            M[r] = [-x for x in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        r += 1
    out = [row for row in M[:r]]
    return as_matrix(out)


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis (rows, in Hermite form) of ``{x in Z^n : A x = 0}``."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return identity(n)
    _, S, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(S), n)) if S[i][i])
    Vt = transpose(V)
    return hnf_rows(Vt[r:])


def matrix_rank(A: Sequence[Sequence[int]]) -> int:
    return len(invariant_factors(A)) if A and A[0] else 0


def unimodular_completion(v: Sequence[int]) -> Matrix:
    """Unimodular matrix whose *last* column is the primitive vector ``v``."""
    if gd(v) != 1:
        raise LatticeError(f"{tuple(v)} is not primitive")
    # U v = e1 with U unimodular, so v is the first column of U^-1
    U, _, _ = smith_normal_form([[x] for x in v])
    inv = inverse_unimodular(U)
    assert tuple(row[0] for row in inv) == tuple(v)
    cols = [list(row) for row in transpose(inv)]
    cols = cols[1:] + [cols[0]]
    return transpose(cols)


def inverse_unimodular(U: Sequence[Sequence[int]]) -> Matrix:
    inv = rational_inverse(U)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise LatticeError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


# ---------------------------------------------------------------------------
# signature


def signature_of(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """``(p+, p-, p0)`` by exact symmetric elimination over the rationals."""
    M = [[Fraction(x) for x in row] for row in gram]
    pos = neg = 0
    while M:
        n = len(M)
        k = next((i for i in range(n) if M[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if M[i][j]), None)
            if pair is None:
                return pos, neg, n
            i, j = pair
            # replace e_i by e_i + e_j; its norm is 2*M[i][j] != 0
            M[i] = [a + b for a, b in zip(M[i], M[j])]
            for row in M:
                row[i] += row[j]
            k = i
        p = M[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in range(n) if i != k]
        M = [[M[i][j] - M[i][k] * M[k][j] / p for j in rest] for i in rest]
    return pos, neg, 0


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group ``Z^free_rank + (+) Z/d_i``."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors if d != 1)
        object.__setattr__(self, "invariant_factors", fs)
        if any(d < 1 for d in fs):
            raise ValueError("invariant factors must be positive")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")

    @property
    def order(self) -> int:
        if self.free_rank:
            return 0
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def min_generators(self) -> int:
        return len(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def torsion(self) -> "FinAbGroup":
        return FinAbGroup(self.invariant_factors)

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class IntegerLattice:
    gram: Matrix
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        g = as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError("Gram matrix must be symmetric")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n:
                raise LatticeError("one label per basis vector")
            object.__setattr__(self, "labels", labels)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return determinant(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_nondegenerate(self) -> bool:
        return self.det != 0

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return bilinear(self.gram, u, v)

    def norm(self, v: Sequence[int]) -> int:
        return bilinear(self.gram, v, v)

    def signature(self) -> tuple[int, int, int]:
        return signature_of(self.gram)

    def negated(self) -> "IntegerLattice":
        return IntegerLattice(tuple(tuple(-x for x in row) for row in self.gram), self.labels)

    def change_basis(self, B: Sequence[Sequence[int]]) -> "IntegerLattice":
        """Lattice with basis given by the *columns* of ``B``."""
        return IntegerLattice(matmul(matmul(transpose(B), self.gram), B))

    def to_json(self):
        return [list(row) for row in self.gram]


def signature(lat: IntegerLattice) -> tuple[int, int, int]:
    return lat.signature()


def direct_sum(*lats: IntegerLattice) -> IntegerLattice:
    n = sum(l.rank for l in lats)
    G = [[0] * n for _ in range(n)]
    off = 0
    for lat in lats:
        for i, row in enumerate(lat.gram):
            for j, x in enumerate(row):
                G[off + i][off + j] = x
        off += lat.rank
    return IntegerLattice(as_matrix(G))


def discriminant_group(lat: IntegerLattice) -> FinAbGroup:
    if not lat.is_nondegenerate:
        raise DegenerateLattice("discriminant group needs a nondegenerate lattice")
    return FinAbGroup(tuple(invariant_factors(lat.gram)))


@dataclass(frozen=True)
class LatticeEmbedding:
    """Isometric map ``domain -> codomain``; column j of ``matrix`` is the image of basis vector j."""

    domain: IntegerLattice
    codomain: IntegerLattice
    matrix: Matrix = field(repr=False)

    def __post_init__(self):
        M = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", M)
        if len(M) != self.codomain.rank or any(len(r) != self.domain.rank for r in M):
            raise LatticeError("embedding matrix has the wrong shape")
        induced = matmul(matmul(transpose(M, self.domain.rank), self.codomain.gram), M)
        if induced != self.domain.gram and self.domain.rank:
            raise LatticeError("embedding is not compatible with the Gram matrices")

    @classmethod
    def from_vectors(cls, codomain: IntegerLattice, vectors: Iterable[Sequence[int]],
                     canonical: bool = True) -> "LatticeEmbedding":
        """Sublattice spanned by ``vectors``; the basis is put in Hermite form."""
        vecs = hnf_rows(vectors) if canonical else as_matrix(vectors)
        M = transpose(vecs, len(vecs)) if vecs else tuple(() for _ in range(codomain.rank))
        G = matmul(matmul(vecs, codomain.gram), M) if vecs else ()
        return cls(IntegerLattice(G), codomain, M)

    @property
    def rank(self) -> int:
        return self.domain.rank

    @property
    def basis(self) -> Matrix:
        """Image vectors as rows."""
        return transpose(self.matrix, self.domain.rank) if self.matrix else ()

    def image(self, v: Sequence[int]) -> Vector:
        return matvec(self.matrix, v)

    def compose(self, inner: "LatticeEmbedding") -> "LatticeEmbedding":
        """``self o inner``: embed ``inner.domain`` into ``self.codomain``."""
        return LatticeEmbedding(inner.domain, self.codomain, matmul(self.matrix, inner.matrix))


def quotient(codomain: IntegerLattice, sub: LatticeEmbedding) -> FinAbGroup:
    """``codomain / image(sub)`` as free rank plus torsion."""
    if sub.codomain.gram != codomain.gram:
        raise LatticeError("sublattice lives in a different lattice")
    if sub.rank == 0:
        return FinAbGroup((), codomain.rank)
    fs = invariant_factors(sub.matrix)
    return FinAbGroup(tuple(fs), codomain.rank - len(fs))


def is_primitive(emb: LatticeEmbedding) -> bool:
    if emb.rank == 0:
        return True
    fs = invariant_factors(emb.matrix)
    return len(fs) == emb.rank and all(d == 1 for d in fs)


def saturation(sub: LatticeEmbedding) -> LatticeEmbedding:
    """Primitive closure ``(image (x) Q) cap codomain``."""
    n = sub.codomain.rank
    if sub.rank == 0:
        return sub
    left = integer_kernel(sub.basis, n)  # y with y . b = 0 for all basis rows b
    sat = integer_kernel(left, n) if left else identity(n)
    return LatticeEmbedding.from_vectors(sub.codomain, sat)


def sublattice_sum(a: LatticeEmbedding, b: LatticeEmbedding) -> LatticeEmbedding:
    if a.codomain.gram != b.codomain.gram:
        raise LatticeError("sublattices live in different lattices")
    return LatticeEmbedding.from_vectors(a.codomain, list(a.basis) + list(b.basis))


def orthogonal_complement(emb: LatticeEmbedding) -> LatticeEmbedding:
    """``{x in codomain : x . image = 0}`` with its induced Gram."""
    cod = emb.codomain
    if emb.rank == 0:
        return LatticeEmbedding.from_vectors(cod, identity(cod.rank))
    pairing = matmul(emb.basis, cod.gram)  # rows b^T G
    ker = integer_kernel(pairing, cod.rank)
    return LatticeEmbedding.from_vectors(cod, ker)


def complement_in(lat: IntegerLattice, vectors: Sequence[Sequence[int]]) -> LatticeEmbedding:
    return orthogonal_complement(LatticeEmbedding.from_vectors(lat, vectors))
