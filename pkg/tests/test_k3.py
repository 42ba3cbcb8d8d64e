import random

import pytest

from g2tcs.k3 import (
    NoEmbeddingFound,
    OddLattice,
    RankUnsupported,
    embed_primitively,
    k3_lattice,
    nikulin_embedding_exists,
    transcendental,
)
from g2tcs.lattice import (
    IntegerLattice,
    LatticeEmbedding,
    identity,
    is_primitive,
    matmul,
    quotient,
    sublattice_sum,
    transpose,
)
from g2tcs.invariants import torsion_check


def test_k3_lattice():
    L = k3_lattice()
    assert L.rank == 22 and L.is_even and abs(L.det) == 1
    assert L.signature() == (3, 19, 0)


def test_nikulin(configs):
    assert nikulin_embedding_exists(configs["row2"].P)
    assert nikulin_embedding_exists(IntegerLattice([[2, 1, 0, 0], [1, -2, 0, 0], [0, 0, -2, 0], [0, 0, 0, 2]]))
    assert not nikulin_embedding_exists(k3_lattice())
    with pytest.raises(OddLattice):
        nikulin_embedding_exists(IntegerLattice([[1]]))


def check(emb, P):
    L = k3_lattice()
    M = emb.matrix
    assert matmul(matmul(transpose(M), L.gram), M) == P.gram
    assert is_primitive(emb)


def test_rank_one_and_two():
    emb = embed_primitively(IntegerLattice([[18]]))
    check(emb, IntegerLattice([[18]]))
    assert emb.basis == ((1, 9) + (0,) * 20,)
    check(embed_primitively(IntegerLattice([[18, 0], [0, 18]])), IntegerLattice([[18, 0], [0, 18]]))


def test_reference_p_lattices(configs):
    for cfg in configs.values():
        check(embed_primitively(cfg.P), cfg.P)


def random_even(rng, r):
    while True:
        G = [[0] * r for _ in range(r)]
        for i in range(r):
            G[i][i] = 2 * rng.randint(-6, 6)
            for j in range(i + 1, r):
                G[i][j] = G[j][i] = rng.randint(-6, 6)
        lat = IntegerLattice(G)
        if lat.signature() == (2, r - 2, 0):
            return lat


@pytest.mark.parametrize("seed", range(24))
def test_random_even_lattices(seed):
    rng = random.Random(seed)
    P = random_even(rng, rng.randint(2, 4))
    check(embed_primitively(P), P)


def test_rejections():
    with pytest.raises(RankUnsupported):
        embed_primitively(IntegerLattice([[2 if i == j else 0 for j in range(5)] for i in range(5)]))
    with pytest.raises(OddLattice):
        embed_primitively(IntegerLattice([[1]]))
    with pytest.raises(NoEmbeddingFound):
        # positive definite: there is no negative direction to split off
        embed_primitively(IntegerLattice([[2 if i == j else 0 for j in range(4)] for i in range(4)]))


def test_transcendental(configs):
    cfg = configs["row1"]
    L = k3_lattice()
    embP = embed_primitively(cfg.P)
    Np = LatticeEmbedding(cfg.plus.N, cfg.P, cfg.emb_plus)
    Nm = LatticeEmbedding(cfg.minus.N, cfg.P, cfg.emb_minus)
    Tp = transcendental(embP, Np)
    assert Tp.rank == 21
    img_m = embP.compose(Nm).basis[0]
    # N- lies in T+ : it is orthogonal to N+ and T+ is saturated
    for b in embP.compose(Np).basis:
        for t in Tp.basis:
            assert L.pair(b, t) == 0
    assert quotient(L, sublattice_sum(Tp, LatticeEmbedding.from_vectors(L, [img_m]))).free_rank == 1
    full = LatticeEmbedding(cfg.P, cfg.P, identity(2))
    assert transcendental(embP, full).rank == 20


def random_automorphism(rng, L, steps=6):
    """Product of reflections in norm +-2 vectors (integral isometries of an even lattice)."""
    n = L.rank
    M = [list(r) for r in identity(n)]
    for _ in range(steps):
        while True:
            r = [0] * n
            for _ in range(3):
                r[rng.randrange(n)] += rng.choice([-1, 1])
            nr = L.norm(r)
            if nr in (2, -2):
                break
        Gr = [sum(L.gram[i][j] * r[j] for j in range(n)) for i in range(n)]
        # s(x) = x - 2 (x.r)/(r.r) r
        S = [[int(i == j) - (2 // nr) * r[i] * Gr[j] for j in range(n)] for i in range(n)]
        M = [list(row) for row in matmul(S, M)]
    return M


@pytest.mark.parametrize("seed", range(4))
def test_invariants_independent_of_embedding(seed, configs):
    rng = random.Random(seed)
    L = k3_lattice()
    for cfg in configs.values():
        emb = embed_primitively(cfg.P)
        g = random_automorphism(rng, L)
        moved = LatticeEmbedding(cfg.P, L, matmul(g, emb.matrix))
        a, b = torsion_check(cfg, emb), torsion_check(cfg, moved)
        assert a.torsion_free and b.torsion_free
        assert a.L_mod_Nplus_Tminus == b.L_mod_Nplus_Tminus
