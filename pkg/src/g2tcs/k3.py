"""The K3 lattice ``U^3 + E8(-1)^2`` and explicit primitive embeddings into it."""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .lattice import (
    FinAbGroup,
    IntegerLattice,
    LatticeEmbedding,
    LatticeError,
    discriminant_group,
    direct_sum,
    gd,
    inverse_unimodular,
    is_primitive,
    matmul,
    orthogonal_complement,
    unimodular_completion,
)
from .quadenum import iter_definite_vectors_of_norm

K3_RANK = 22
K3_SIGNATURE = (3, 19)

U = IntegerLattice(((0, 1), (1, 0)))

# E8 Cartan matrix, Bourbaki labelling (node 8 attached to node 3 of the 7-chain)
E8 = IntegerLattice((
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
))
E8_NEG = E8.negated()

# coordinates: (e1, f1, e2, f2, e3, f3, E8(-1), E8(-1))
_E = (0, 2, 4)
_F = (1, 3, 5)
_E8_OFFSET = 6


class OddLattice(LatticeError):
    pass


class RankUnsupported(LatticeError):
    pass


class NoEmbeddingFound(LatticeError):
    pass


@lru_cache(maxsize=1)
def k3_lattice() -> IntegerLattice:
    L = direct_sum(U, U, U, E8_NEG, E8_NEG)
    assert L.is_even and abs(L.det) == 1 and L.signature() == (3, 19, 0)
    return L


def nikulin_embedding_exists(P: IntegerLattice, target_rank: int = K3_RANK,
                             target_signature: tuple[int, int] = K3_SIGNATURE) -> bool:
    """Sufficient criterion for a primitive embedding into an even unimodular lattice.

    ``False`` means the criterion is inconclusive, not that no embedding exists.
    """
    if not P.is_even:
        raise OddLattice("P must be even")
    p_plus, p_minus, p_zero = P.signature()
    if p_zero:
        raise LatticeError("P must be nondegenerate")
    if p_plus > target_signature[0] or p_minus > target_signature[1]:
        return False
    if 2 * P.rank <= target_rank:
        return True
    m = discriminant_group(P).min_generators
    return P.rank + m < target_rank


def _hyperbolic_rows(G, k: int) -> list[list[int]]:
    """Images of the first ``k`` basis vectors via ``b_i -> e_i + sum_j a_ij f_j``."""
    rows = []
    for i in range(k):
        v = [0] * K3_RANK
        v[_E[i]] = 1
        for j in range(k):
            if j == i:
                a = G[i][i] // 2
            elif i < j:
                a = G[i][j]
            else:
                a = 0
            v[_F[j]] += a
        rows.append(v)
    return rows


def _negative_direction(P: IntegerLattice, radius: int = 6):
    """Primitive ``v`` of smallest |negative norm| in a small box, ties lexicographic."""
    best = None
    for v in product(range(-radius, radius + 1), repeat=P.rank):
        n = P.norm(v)
        if n < 0 and gd(v) == 1:
            key = (-n, v)
            if best is None or key < best:
                best = key
    if best is None:
        raise NoEmbeddingFound("no negative vector found to split off")
    return best[1]


def embed_primitively(P: IntegerLattice, max_candidates: int = 2000) -> LatticeEmbedding:
    """A verified primitive isometric embedding of an even lattice of rank <= 4 into L.

    Rank <= 3 uses the hyperbolic planes only.  For rank 4 the basis is first
    changed so the last vector has negative norm; that vector is realised as
    an f-combination plus a vector of the same norm in the first E8(-1).
    """
    L = k3_lattice()
    if not P.is_even:
        raise OddLattice("P must be even")
    if P.rank > 4:
        raise RankUnsupported(f"rank {P.rank} > 4 is not supported")
    if P.rank <= 3:
        rows = _hyperbolic_rows(P.gram, P.rank)
        emb = LatticeEmbedding(P, L, tuple(zip(*rows)) if rows else tuple(() for _ in range(K3_RANK)))
        if not is_primitive(emb):  # pragma: no cover - identity minor makes this impossible
            raise NoEmbeddingFound("hyperbolic construction is not primitive")
        return emb

    v = _negative_direction(P)
    B = unimodular_completion(v)  # columns: new basis, last one is v
    Pn = P.change_basis(B)
    G = Pn.gram
    base = _hyperbolic_rows(G, 3)
    tail = [0] * K3_RANK
    for j in range(3):
        tail[_F[j]] = G[3][j]
    Binv = inverse_unimodular(B)
    tried = 0
    fallback = None
    for w in iter_definite_vectors_of_norm(E8_NEG, G[3][3]):
        tried += 1
        row = list(tail)
        for i, x in enumerate(w):
            row[_E8_OFFSET + i] = x
        Mn = tuple(zip(*(base + [row])))
        cand = LatticeEmbedding(Pn, L, Mn)
        if is_primitive(cand):
            emb = LatticeEmbedding(P, L, matmul(Mn, Binv))
            if is_primitive(emb):
                return emb
        if tried >= max_candidates:
            break
    raise NoEmbeddingFound(f"no primitive embedding after {tried} candidates")


def transcendental(embP: LatticeEmbedding, N_side: LatticeEmbedding) -> LatticeEmbedding:
    """Orthogonal complement in L of the image of a sublattice of P."""
    image = embP.compose(N_side)
    return orthogonal_complement(image)


def torsion_of_quotient(sub: LatticeEmbedding) -> FinAbGroup:
    from .lattice import quotient

    return quotient(sub.codomain, sub).torsion
