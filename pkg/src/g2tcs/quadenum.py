"""Complete enumeration of lattice vectors under norm and pairing constraints.

Everything reduces to listing integer points on an ellipsoid
``(y - c)^T A (y - c) == R`` for positive definite ``A``.  That is done by
Fincke-Pohst style completion of squares in exact rational arithmetic; the
integer ranges at each level are widened by one and then filtered exactly,
so rounding can never drop a solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt
from typing import Iterator, Sequence

from .lattice import (
    IntegerLattice,
    LatticeError,
    Vector,
    as_vector,
    dot,
    integer_kernel,
    matmul,
    matvec,
    smith_normal_form,
    transpose,
)


class IndefiniteLattice(LatticeError):
    pass


class BadSignature(LatticeError):
    pass


class NonpositiveAxis(LatticeError):
    pass


class UnboundedSearch(LatticeError):
    pass


def _ldl(A: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """``q(x) = sum_i d_i (x_i + sum_{j>i} mu[i][j] x_j)^2``; raises if A is not positive definite."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if M[i][i] <= 0:
            raise IndefiniteLattice("form is not positive definite")
        p = M[i][i]
        d.append(p)
        for j in range(i + 1, n):
            mu[i][j] = M[i][j] / p
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                M[r][c] -= M[r][i] * M[i][c] / p
    return d, mu


def _floor_sqrt(q: Fraction) -> int:
    """Largest integer s with s*s <= q (q >= 0)."""
    s = isqrt(q.numerator // q.denominator)
    while (s + 1) * (s + 1) <= q:
        s += 1
    return s


def ellipsoid_points(A: Sequence[Sequence[int]], R, center: Sequence | None = None,
                     exact: bool = True) -> Iterator[Vector]:
    """Integer ``y`` with ``(y-center)^T A (y-center) == R`` (``<= R`` if not exact).

    Yields in a fixed depth-first order (last coordinate outermost).
    """
    n = len(A)
    R = Fraction(R)
    if R < 0:
        return
    c = [Fraction(x) for x in (center if center is not None else [0] * n)]
    if n == 0:
        if R == 0 or not exact:
            yield ()
        return
    d, mu = _ldl(A)
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        # shift_i = -(c_i) + sum_{j>i} mu_ij (x_j - c_j)
        s = -c[i] + sum((mu[i][j] * (x[j] - c[j]) for j in range(i + 1, n)), Fraction(0))
        t = remaining / d[i]
        if i == 0 and exact:
            # solve d_0 (x_0 + s)^2 == remaining directly
            root = _floor_sqrt(t)
            if root * root != t:
                # t may be a non-integer perfect square of a rational
                num, den = t.numerator, t.denominator
                rn, rd = isqrt(num), isqrt(den)
                if rn * rn != num or rd * rd != den:
                    return
                r = Fraction(rn, rd)
            else:
                r = Fraction(root)
            cands = sorted({-s - r, -s + r})
            for v in cands:
                if v.denominator == 1:
                    x[0] = int(v)
                    yield tuple(x)
            return
        w = _floor_sqrt(t) + 1
        lo = floor(-s) - w
        hi = floor(-s) + w + 1
        for v in range(lo, hi + 1):
            z = v + s
            used = d[i] * z * z
            if used > remaining:
                continue
            x[i] = v
            if i == 0:
                yield tuple(x)
            else:
                yield from rec(i - 1, remaining - used)
        x[i] = 0

    # coordinates are completed from the last one down, matching the LDL order
    # q(y) = sum_i d_i (y_i + sum_{j>i} mu_ij y_j)^2
    yield from rec(n - 1, R)


def definite_vectors_of_norm(lat: IntegerLattice, n: int) -> list[Vector]:
    """All ``v`` with ``v.v == n`` in a definite lattice, sorted lexicographically."""
    sig = lat.signature()
    if sig == (lat.rank, 0, 0):
        A, target = lat.gram, n
    elif sig == (0, lat.rank, 0):
        A, target = lat.negated().gram, -n
    else:
        raise IndefiniteLattice(f"lattice of signature {sig} is not definite")
    if target < 0:
        return []
    return sorted(ellipsoid_points(A, target))


def iter_definite_vectors_of_norm(lat: IntegerLattice, n: int) -> Iterator[Vector]:
    """Lazy version of :func:`definite_vectors_of_norm` (enumeration order, not sorted)."""
    sig = lat.signature()
    if sig == (lat.rank, 0, 0):
        return ellipsoid_points(lat.gram, n)
    if sig == (0, lat.rank, 0):
        return ellipsoid_points(lat.negated().gram, -n)
    raise IndefiniteLattice(f"lattice of signature {sig} is not definite")


def _solve_linear_diophantine(a: Sequence[int], c: int):
    """Particular solution and kernel basis of ``a . x = c`` over Z, or None."""
    U, S, V = smith_normal_form([list(a)])
    g = S[0][0] if S and S[0] else 0
    n = len(a)
    if g == 0:
        if c != 0:
            return None
        return (0,) * n, integer_kernel([list(a)], n)
    if c % g:
        return None
    # a V = (g, 0, ..., 0) * U^-1 ; U is 1x1 = [+-1]
    y = [0] * n
    y[0] = (c // g) * U[0][0]
    x0 = matvec(V, y)
    return tuple(x0), integer_kernel([list(a)], n)


def solve_pairing_norm(lat: IntegerLattice, v: Sequence[int], c: int, n: int,
                       bound_scale: int = 1, check_signature: bool = True) -> list[Vector]:
    """All ``D`` with ``v.D == c`` and ``D.D == n`` in a lattice of signature (1, r-1).

    ``v`` must have positive norm, so ``v^perp`` is negative definite and the
    solution set is a finite ellipsoid.  ``bound_scale > 1`` enumerates a
    larger ellipsoid and filters, which must give the same answer.
    """
    v = as_vector(v)
    if check_signature and lat.signature() != (1, lat.rank - 1, 0):
        raise BadSignature(f"expected signature (1, {lat.rank - 1}), got {lat.signature()}")
    vv = lat.norm(v)
    if vv <= 0:
        raise NonpositiveAxis("reference vector must have positive norm")
    a = matvec(lat.gram, v)
    sol = _solve_linear_diophantine(a, c)
    if sol is None:
        return []
    D0, K = sol
    G = lat.gram
    if not K:
        return [D0] if lat.norm(D0) == n else []
    Kt = transpose(K, len(K))
    A = matmul(matmul(K, G), Kt)  # Gram of v^perp, negative definite
    A = [[-x for x in row] for row in A]
    b = matvec(K, matvec(G, D0))
    # D = D0 + K^T y:  D.D = D0.D0 + 2 b.y - y^T A y == n
    # => (y - y*)^T A (y - y*) = b^T A^-1 b + D0.D0 - n with y* = A^-1 b
    from .lattice import rational_inverse

    Ainv = rational_inverse(A)
    ystar = [sum(Ainv[i][j] * b[j] for j in range(len(b))) for i in range(len(b))]
    R = sum(ystar[i] * b[i] for i in range(len(b))) + lat.norm(D0) - n
    if R < 0:
        return []
    out = set()
    if bound_scale == 1:
        pts = ellipsoid_points(A, R, ystar)
    else:
        pts = ellipsoid_points(A, R * bound_scale, ystar, exact=False)
    for y in pts:
        D = tuple(d0 + dot(col, y) for d0, col in zip(D0, Kt))
        if lat.pair(v, D) == c and lat.norm(D) == n:
            out.add(D)
    return sorted(out)


# ---------------------------------------------------------------------------
# constraint atoms


@dataclass(frozen=True)
class VectorConstraint:
    """One atom ``D.D == value``, ``ref.D == value``, ``ref.D < value``, ``ref.D > value`` or ``lower < ref.D < upper``."""

    kind: str
    value: int = 0
    reference: Vector | None = None
    upper: int | None = None
    label: str = ""

    KINDS = ("norm_equals", "pairing_equals", "pairing_less_than",
             "pairing_greater_than", "pairing_range")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind == "norm_equals":
            if self.reference is not None:
                raise ValueError("norm_equals takes no reference vector")
        else:
            if self.reference is None:
                raise ValueError(f"{self.kind} needs a reference vector")
            object.__setattr__(self, "reference", as_vector(self.reference))
        if self.kind == "pairing_range":
            if self.upper is None or not self.value < self.upper:
                raise ValueError("pairing_range needs lower < upper")

    def holds(self, lat: IntegerLattice, D: Sequence[int]) -> bool:
        if self.kind == "norm_equals":
            return lat.norm(D) == self.value
        p = lat.pair(self.reference, D)
        if self.kind == "pairing_equals":
            return p == self.value
        if self.kind == "pairing_less_than":
            return p < self.value
        if self.kind == "pairing_greater_than":
            return p > self.value
        return self.value < p < self.upper

    def admissible_values(self) -> range | None:
        if self.kind == "pairing_equals":
            return range(self.value, self.value + 1)
        if self.kind == "pairing_range":
            return range(self.value + 1, self.upper)
        return None

    def describe(self) -> str:
        if self.label:
            return self.label
        r = self.reference
        return {
            "norm_equals": f"D^2 = {self.value}",
            "pairing_equals": f"{r}.D = {self.value}",
            "pairing_less_than": f"{r}.D < {self.value}",
            "pairing_greater_than": f"{r}.D > {self.value}",
            "pairing_range": f"{self.value} < {r}.D < {self.upper}",
        }[self.kind]


def norm_equals(n: int, label: str = "") -> VectorConstraint:
    return VectorConstraint("norm_equals", n, label=label)


def pairing_equals(ref, c: int, label: str = "") -> VectorConstraint:
    return VectorConstraint("pairing_equals", c, ref, label=label)


def pairing_less_than(ref, c: int, label: str = "") -> VectorConstraint:
    return VectorConstraint("pairing_less_than", c, ref, label=label)


def pairing_greater_than(ref, c: int, label: str = "") -> VectorConstraint:
    return VectorConstraint("pairing_greater_than", c, ref, label=label)


def pairing_range(ref, lower: int, upper: int, label: str = "") -> VectorConstraint:
    return VectorConstraint("pairing_range", lower, ref, upper, label=label)


def violating_vectors(lat: IntegerLattice, constraints: Sequence[VectorConstraint],
                      bound_scale: int = 1) -> list[Vector]:
    """Every ``D`` satisfying all ``constraints`` (sorted)."""
    norms = [c for c in constraints if c.kind == "norm_equals"]
    if len(norms) != 1:
        raise ValueError("exactly one norm_equals constraint is required")
    if lat.signature() != (1, lat.rank - 1, 0):
        raise BadSignature(f"expected signature (1, {lat.rank - 1}), got {lat.signature()}")
    bounding = [c for c in constraints
                if c.admissible_values() is not None and lat.norm(c.reference) > 0]
    if not bounding:
        raise UnboundedSearch(
            "no equality/range pairing against a positive-norm vector; search region is infinite")
    axis = min(bounding, key=lambda c: len(c.admissible_values()))
    found = set()
    for value in axis.admissible_values():
        for D in solve_pairing_norm(lat, axis.reference, value, norms[0].value,
                                    bound_scale=bound_scale, check_signature=False):
            if all(c.holds(lat, D) for c in constraints):
                found.add(D)
    return sorted(found)


def exists_violating_vector(lat: IntegerLattice, constraints: Sequence[VectorConstraint],
                            bound_scale: int = 1) -> Vector | None:
    """A witness satisfying every constraint, or ``None`` when there is none."""
    hits = violating_vectors(lat, constraints, bound_scale)
    return hits[0] if hits else None
