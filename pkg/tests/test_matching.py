import pytest

from g2tcs.blocks import BuildingBlock
from g2tcs.lattice import IntegerLattice, LatticeError
from g2tcs.matching import (
    FAMILY_RULES,
    BadSignature,
    DegenerateP,
    assemble_configuration,
    bound_stability,
    cone_check,
    derived_lattices,
    genericity_check,
    genericity_for_configuration,
    meets_open_cone,
    orthogonal_pushout,
    search_gluings,
    smooth_representative,
    strictly_feasible,
    very_ample,
)


def test_assemble_examples(blocks, reference):
    cfg = assemble_configuration(blocks["Y5"], blocks["Y5"], [[0]])
    assert cfg.P.gram == ((18, 0), (0, 18)) and cfg.kind == "perpendicular"
    cfg = assemble_configuration(blocks["Y3"], blocks["Y3"], [[1, -1], [-1, 1]])
    assert [list(r) for r in cfg.P.gram] == reference["row3"]["P"] and cfg.kind == "skew"


def test_assemble_errors(blocks):
    with pytest.raises(DegenerateP):
        # second column of P equals a combination of the others
        assemble_configuration(blocks["Y5"], blocks["Y5"], [[18]])
    with pytest.raises(BadSignature):
        assemble_configuration(blocks["Y5"], blocks["Y5"], [[19]])
    with pytest.raises(ValueError):
        assemble_configuration(blocks["Y3"], blocks["Y3"], [[1, 2]])


def test_derived_examples(configs, reference):
    for rid, cfg in configs.items():
        d = derived_lattices(cfg)
        ref = reference[rid]
        assert [list(r) for r in d.plus.A] == ref["A_plus"]
        assert [list(r) for r in d.minus.A] == ref["A_minus"]
        assert [list(r) for r in d.plus.Lambda.gram] == ref["Lambda_plus"]
        assert [list(r) for r in d.minus.Lambda.gram] == ref["Lambda_minus"]
        # Lambda contains N as its leading block
        r = cfg.plus.rank
        assert tuple(row[:r] for row in d.plus.Lambda.gram[:r]) == cfg.plus.N.gram
    d = derived_lattices(configs["row1"])
    assert d.plus.opposite_cap_T == d.minus.opposite_cap_T == 1


def test_cone_membership():
    cone = [(1, 0), (0, 1)]
    assert meets_open_cone([(1, 2)], cone)
    assert meets_open_cone([(-1, -2)], cone)  # the span is a line
    assert not meets_open_cone([(1, 0)], cone)  # boundary ray only
    assert not meets_open_cone([(1, -1)], cone)
    assert not meets_open_cone([], cone)
    assert meets_open_cone([(1, 0), (0, 1)], cone)
    assert strictly_feasible([(1, 0), (0, 1)])
    assert not strictly_feasible([(1, 0), (-1, 0)])


def test_cone_check_reference(configs):
    for cfg in configs.values():
        assert cone_check(cfg) == (True, True)


def test_search_examples(blocks):
    res = search_gluings(blocks["Y5"], blocks["Y5"], 3)
    assert ((0,),) in [c.D for c in res.configurations]
    res = search_gluings(blocks["Y3"], blocks["Y3"], 2)
    assert ((1, -1), (-1, 1)) in [c.D for c in res.configurations]
    res = search_gluings(blocks["Y3"], blocks["Y3"], 0)
    assert res.candidates == 1 and [c.D for c in res.configurations] == [((0, 0), (0, 0))]
    j = res.to_json()
    assert j["bound"] == 0 and "complete" in j["completeness"]


def test_search_is_deterministic(blocks):
    a = [c.D for c in search_gluings(blocks["Y1"], blocks["Y2"], 2).configurations]
    b = [c.D for c in search_gluings(blocks["Y1"], blocks["Y2"], 2).configurations]
    assert a == b == sorted(a)


@pytest.mark.parametrize("pair", [("Y1", "Y1"), ("Y1", "Y3"), ("Y1", "Y4"), ("Y3", "Y4"),
                                  ("Y4", "Y4"), ("Y5", "Y2"), ("Y5", "Y5")])
def test_bound_stability_small(blocks, pair):
    rep = bound_stability(blocks[pair[0]], blocks[pair[1]], 4)
    assert rep["status"] == "stable"
    assert rep["counts"][rep["largest_entry"]] == rep["counts"][4]


@pytest.mark.slow
def test_bound_stability_y2_y2(blocks):
    rep = bound_stability(blocks["Y2"], blocks["Y2"], 5)
    assert rep["status"] == "unresolved" and rep["largest_entry"] == 5
    rep = bound_stability(blocks["Y2"], blocks["Y2"], 7)
    assert rep["status"] == "stable" and rep["largest_entry"] == 6 and rep["counts"][7] == 53


def test_genericity_reference(configs):
    for cfg in configs.values():
        for rep in genericity_for_configuration(cfg):
            assert rep.status == "PASS", rep.to_json()


def test_genericity_rule_ids(configs):
    gp, gm = genericity_for_configuration(configs["row1"])
    assert gp.rule == gm.rule == "beauville"
    gp, gm = genericity_for_configuration(configs["row4"])
    assert (gp.rule, gm.rule) == ("p1_x_p2", "p3_curve_blowup")
    assert any("reading" in n for n in gm.notes)


def test_genericity_fail_with_witness():
    lat = IntegerLattice([[4, 0, 0], [0, -2, 0], [0, 0, -2]])
    rep = genericity_check("Y5", lat, {"H": (1, 0, 0)}, 1)
    assert rep.status == "NO_RULE"
    rep = genericity_check("Y1", lat, {"H": (1, 0, 0), "E": (1, 1, 0)}, 2)
    assert rep.status == "FAIL"
    ii = next(h for h in rep.hypotheses if h.id == "ii")
    assert ii.holds is False and lat.norm(ii.witness) == -2 and lat.pair((1, 0, 0), ii.witness) == 0


def test_literal_nef_reading_is_unbounded(configs):
    d = derived_lattices(configs["row2"])
    marked = {k: v + (0,) for k, v in FAMILY_RULES["Y3"][1].items()}
    rep = genericity_check("Y3", d.minus.Lambda, marked, 2, nef_reading="literal")
    assert rep.status == "ERROR"
    iii = next(h for h in rep.hypotheses if h.id == "iii")
    assert iii.error and "infinite" in iii.error
    # a (-2)-class with E.D < 0 exists, so no bounded search can certify the literal reading
    D = (1, -2, 0)
    assert d.minus.Lambda.norm(D) == -2 and d.minus.Lambda.pair(marked["E"], D) < 0


def test_very_ample():
    assert very_ample(IntegerLattice([[18]]), (1,))
    assert not very_ample(IntegerLattice([[4]]), (2,))
    assert not very_ample(IntegerLattice([[2]]), (1,))
    assert not very_ample(IntegerLattice([[4, 0], [0, -2]]), (1, 0))


def test_smooth_representative():
    lat = IntegerLattice([[4, 1], [1, -2]])
    assert smooth_representative(lat, (0, 1), (1, 0))  # E^2 = -2, E.H = 1
    assert not smooth_representative(lat, (0, -1), (1, 0))  # E.H < 0
    assert smooth_representative(IntegerLattice([[18]]), (1,), (1,))


def test_swap(configs):
    cfg = configs["row4"]
    sw = cfg.swapped()
    assert sw.plus is cfg.minus and sw.D == ((2, -1), (-2, 1))
    d, e = derived_lattices(cfg), derived_lattices(sw)
    assert d.plus.Lambda.gram == e.minus.Lambda.gram


def _fake_block(fid, gram):
    N = IntegerLattice(gram)
    r = N.rank
    return BuildingBlock(fid, N, (1,) + (0,) * (r - 1), (0,) * (r + 1), 0, 0, 2,
                         tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))


def test_orthogonal_pushout():
    Zp = _fake_block("A", [[2, 0], [0, -2]])
    Zm = _fake_block("B", [[2, 1], [1, -2]])
    cfg = orthogonal_pushout(Zp, Zm, [[1, 0]], [[1, 0]])
    assert cfg.kind == "orthogonal" and cfg.P.rank == 3 and cfg.shared_rank == 1
    # both images of the shared vector coincide in P
    col = lambda M, j: tuple(r[j] for r in M)
    assert col(cfg.emb_plus, 0) == col(cfg.emb_minus, 0)
    assert cfg.cross[0][0] == 2
    with pytest.raises(LatticeError):
        orthogonal_pushout(Zp, Zm, [[1, 0]], [[0, 1]])
    # projection onto <(1,0)> of norm 2 has half-integral cross pairings here
    Zq = _fake_block("C", [[2, 1], [1, 2]])
    with pytest.raises(LatticeError):
        orthogonal_pushout(Zq, Zq, [[1, 0]], [[1, 0]])
