import itertools
import json

import numpy as np
import pytest

from susyrep import adinkra
from susyrep.adinkra import Adinkra, Edge, decompose, export, from_rep, to_dot, validate
from susyrep.garden import GardenRep, from_signed_perms, garden_residual


def block_sum(a, b):
    n = a.N
    da, db = a.d, b.d
    L = np.zeros((n, da + db, da + db), dtype=int)
    L[:, :da, :da] = a.L
    L[:, da:, da:] = b.L
    return GardenRep(L, L.transpose(0, 2, 1))


N1 = GardenRep(np.array([[[1]]]), np.array([[[1]]]))
# N=2, d=2 rep: identity and a rotation by a quarter turn
N2D2 = GardenRep(np.array([[[1, 0], [0, 1]], [[0, 1], [-1, 0]]]), np.array([[[1, 0], [0, 1]], [[0, -1], [1, 0]]]))


def invariant_blocks(rep):
    """Minimal (boson set, fermion set) pairs closed under every L_I,
    found by exhaustive search over coordinate subsets."""
    d = rep.d
    support = np.any(rep.L != 0, axis=0)  # boson x fermion
    closed = []
    for r in range(1, d + 1):
        for bos in itertools.combinations(range(d), r):
            for fer in itertools.combinations(range(d), r):
                out_b = [k for k in range(d) if k not in bos]
                out_f = [k for k in range(d) if k not in fer]
                if support[np.ix_(bos, out_f)].any() or support[np.ix_(out_b, fer)].any():
                    continue
                if any(set(b) <= set(bos) and set(f) <= set(fer) for b, f in closed):
                    continue
                closed.append((bos, fer))
    return sorted(closed)


def test_n1_single_solid_edge():
    a = from_rep(N1)
    assert a.edges == {Edge(0, 0, 1, False)}
    assert validate(a).ok
    assert validate(a).cycles_checked == 0


def test_chiral_edges(chiral):
    a = from_rep(chiral)
    b_idx, f_idx = chiral.bosons.index("B"), chiral.fermions.index("Psi4")
    assert a.edge(b_idx, f_idx, 1) == Edge(b_idx, f_idx, 1, False)
    fb, f1 = chiral.bosons.index("F"), chiral.fermions.index("Psi1")
    assert a.edge(fb, f1, 2).dashed
    assert len(a.edges) == 16
    report = validate(a)
    assert report.ok and report.cycles_checked == 12


def test_vector_is_valid(vector):
    assert validate(from_rep(vector)).ok


def test_color_regularity_violation():
    edges = {Edge(0, 0, 1, False), Edge(0, 1, 1, False), Edge(1, 1, 2, False)}
    report = validate(Adinkra(2, 2, frozenset(edges)))
    kinds = {v.kind for v in report.violations}
    assert "color_regularity" in kinds
    assert any(v.nodes == ("b1",) and "2 edges of color 1" in v.detail for v in report.violations)


def test_undashed_four_cycle_violation():
    edges = {Edge(0, 0, 1, False), Edge(1, 1, 1, False), Edge(0, 1, 2, False), Edge(1, 0, 2, False)}
    report = validate(Adinkra(2, 2, frozenset(edges)))
    assert [v.kind for v in report.violations] == ["even_dashing"]
    fixed = edges - {Edge(1, 0, 2, False)} | {Edge(1, 0, 2, True)}
    assert validate(Adinkra(2, 2, frozenset(fixed))).ok
    # the same graph as a rep fails the algebra too
    assert garden_residual(GardenRep(np.array([[[1, 0], [0, 1]], [[0, 1], [1, 0]]]),
                                     np.array([[[1, 0], [0, 1]], [[0, 1], [1, 0]]]))) > 0


def test_open_cycle_violation():
    # colors 1,2 alternate into a 6-cycle on d=3
    edges = {Edge(k, k, 1, False) for k in range(3)} | {Edge((k + 1) % 3, k, 2, False) for k in range(3)}
    report = validate(Adinkra(3, 2, frozenset(edges)))
    assert {v.kind for v in report.violations} == {"open_cycle"}


def test_enumerated_tuples_are_valid(bc4_tuples, sample_valid_reps):
    for rep in sample_valid_reps:
        report = validate(from_rep(rep))
        assert report.ok and report.cycles_checked == 12


def test_block_sums_are_valid(sample_valid_reps):
    rep = block_sum(sample_valid_reps[0], sample_valid_reps[1])
    assert garden_residual(rep) == 0
    assert validate(from_rep(rep)).ok


def test_connected_has_one_component(chiral):
    dec = decompose(from_rep(chiral))
    assert len(dec.components) == 1
    assert dec.index_map == [((0, 1, 2, 3), (0, 1, 2, 3))]


def test_two_n1_components():
    dec = decompose(from_rep(block_sum(N1, N1)))
    assert [c.d for c in dec.components] == [1, 1]
    assert dec.index_map == [((0,), (0,)), ((1,), (1,))]


def test_d8_block_sum_splits(sample_valid_reps):
    rep = block_sum(sample_valid_reps[2], sample_valid_reps[3])
    dec = decompose(from_rep(rep))
    assert [c.d for c in dec.components] == [4, 4]
    assert all(validate(c).ok for c in dec.components)
    assert dec.index_map[1] == ((4, 5, 6, 7), (4, 5, 6, 7))


@pytest.mark.parametrize(
    "rep",
    [N1, N2D2, block_sum(N2D2, N2D2), block_sum(N1, block_sum(N1, N1))],
    ids=["n1", "n2d2", "n2d2+n2d2", "3xn1"],
)
def test_components_match_invariant_subspaces(rep):
    dec = decompose(from_rep(rep))
    assert sorted(dec.index_map) == invariant_blocks(rep)


def test_single_permutation_components():
    # one color: every edge is its own component
    L = np.array([[[0, 1, 0], [1, 0, 0], [0, 0, 1]]])
    dec = decompose(from_rep(GardenRep(L, L.transpose(0, 2, 1))))
    assert sorted(dec.index_map) == invariant_blocks(GardenRep(L, L))
    assert len(dec.components) == 3


def test_from_rep_is_injective(bc4_tuples):
    sps, tuples = bc4_tuples
    seen = {from_rep(from_signed_perms([sps[a] for a in t])).edges for t in tuples[::9]}
    assert len(seen) == len(tuples[::9])


def test_dot_shape(chiral):
    dot = to_dot(from_rep(chiral))
    assert dot.count("style=filled") == 4
    assert dot.count("-- f") == 16
    for name in ("red", "green", "blue", "black"):
        assert dot.count(f"[color={name},") == 4
    assert dot == to_dot(from_rep(chiral))


def test_dot_n1_exact():
    assert to_dot(from_rep(N1)) == (
        "graph adinkra {\n"
        "  rankdir=BT;\n"
        "  node [shape=circle];\n"
        '  b1 [label="phi1", style=filled, fillcolor=black, fontcolor=white];\n'
        '  f1 [label="psi1", style=solid];\n'
        "  { rank=same; b1; }\n"
        "  { rank=same; f1; }\n"
        "  b1 -- f1 [color=red, style=solid];\n"
        "}\n"
    )


def test_json_round_trip(chiral):
    a = from_rep(chiral)
    text = export(a, "json")
    assert adinkra.from_json(text) == a
    assert json.loads(text)["edges"][0]["b"] >= 1


def test_unknown_format():
    with pytest.raises(ValueError):
        export(from_rep(N1), "svg")
